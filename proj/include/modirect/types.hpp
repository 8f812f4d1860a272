#pragma once

#include <vector>

namespace modirect {

/// Objective values of one sample, minimization sense.
using ObjectiveVector = std::vector<double>;

/// A point of the search space in problem (not unit-cube) coordinates.
using DecisionVector = std::vector<double>;

}  // namespace modirect
