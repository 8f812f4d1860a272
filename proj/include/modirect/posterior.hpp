#pragma once

#include "modirect/moo.hpp"
#include "modirect/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace modirect {

struct PosteriorConfig {
    /// Components with |alpha_i| below this count as zero in the l0 term.
    double zero_threshold = 1e-3;

    /// Requires 0 < zero_threshold < (alpha_upper - alpha_lower) / 2.
    void validate(double alpha_lower, double alpha_upper) const;
};

/// count(|alpha_i| >= zero_threshold) + sum |alpha_i|
double sparsity_score(std::span<const double> alpha, double zero_threshold);

struct SparseSelection {
    std::size_t index = 0;
    DecisionVector alpha;
    double score = 0.0;
};

/// Archive entry minimizing the joint l0 + l1 score. Ties go to the smaller l1
/// norm, then to the earlier entry. Throws InvalidState on an empty archive.
SparseSelection sparse_select(const ParetoArchive& archive, const PosteriorConfig& config);

struct ElementStatistics {
    std::vector<double> mean;
    std::vector<double> variance;  // sample variance (N - 1), zero when N = 1
};

ElementStatistics archive_stats(const ParetoArchive& archive);

}  // namespace modirect
