#pragma once

#include "modirect/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace modirect {

/// Pareto dominance in the minimization sense: a <= b everywhere and a < b somewhere.
/// Exact floating-point comparison.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Front index (1-based) of every point after non-dominated peeling. Identical
/// points share a front. Uses a sweep for two objectives and Deb's
/// domination-count sort otherwise.
std::vector<int> fast_nondominated_sort(std::span<const ObjectiveVector> points);

/// Deb's O(m N^2) domination-count sort, for any number of objectives.
std::vector<int> deb_nondominated_sort(std::span<const ObjectiveVector> points);

/// Area dominated by `front` and bounded by `reference`. Points that do not strictly
/// dominate the reference contribute nothing.
double hypervolume_2d(std::span<const ObjectiveVector> front, const ObjectiveVector& reference);

/// hypervolume_2d(front + point) - hypervolume_2d(front).
double exclusive_contribution(const ObjectiveVector& point, std::span<const ObjectiveVector> front,
                              const ObjectiveVector& reference);

struct ArchiveEntry {
    DecisionVector x;
    ObjectiveVector objectives;
};

/// Unbounded set of mutually non-dominated samples, kept in insertion order.
///
/// Entries with equal objectives but different x are all kept; an x already present
/// is never stored twice. Single writer.
class ParetoArchive {
public:
    /// Inserts unless an entry dominates `objectives` or `x` is already stored.
    /// Evicts every entry the new point dominates. Returns whether it was inserted.
    bool insert(DecisionVector x, ObjectiveVector objectives);

    const std::vector<ArchiveEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    std::vector<ObjectiveVector> objective_vectors() const;

    /// Per-objective mean over entries; empty when the archive is empty.
    std::vector<double> mean_objectives() const;

private:
    std::vector<ArchiveEntry> entries_;
};

}  // namespace modirect
