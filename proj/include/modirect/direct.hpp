#pragma once

#include "modirect/moo.hpp"
#include "modirect/types.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace modirect {

/// Rule used to pick the potentially optimal rectangles of an iteration.
enum class Strategy {
    pareto_front,      // rank-1 front of (non-dominated rank, -size)
    ns_direct,         // DIRECT hull test with f replaced by the non-dominated rank
    mo_direct,         // non-dominated front of (f_1..f_m, -size)
    mo_direct_hv,      // front of (exclusive hypervolume, size), both maximized
    single_objective,  // classic DIRECT hull test on f_1
};

inline constexpr std::array<Strategy, 4> kMultiObjectiveStrategies = {
    Strategy::pareto_front, Strategy::ns_direct, Strategy::mo_direct, Strategy::mo_direct_hv};

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view text);

/// Axis-aligned search box and its affine map from the unit cube.
class Box {
public:
    Box(std::vector<double> lower, std::vector<double> upper);

    /// Uniform bounds [lower, upper] in every one of `dimension` coordinates.
    static Box uniform(std::size_t dimension, double lower, double upper);

    DecisionVector to_problem(std::span<const double> unit) const;
    std::vector<double> to_unit(std::span<const double> x) const;

    std::size_t dimension() const { return lower_.size(); }
    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
};

/// Maps a unit-cube point into `bounds`.
inline DecisionVector normalize(const Box& bounds, std::span<const double> unit) {
    return bounds.to_problem(unit);
}

/// One cell of the partition of the unit cube.
///
/// Along dimension i the cell is [index_i, index_i + 1] * 3^-depth_i, so its center
/// is (index_i + 1/2) 3^-depth_i. Integer storage keeps size classes and centers exact.
struct Rectangle {
    std::vector<std::int64_t> index;
    std::vector<int> depth;
    ObjectiveVector objectives;

    static Rectangle unit(std::size_t dimension);

    std::size_t dimension() const { return depth.size(); }
    int min_depth() const;
    /// Longest side, 3^-min_depth.
    double size() const;
    double volume() const;
    std::vector<double> center() const;
};

/// Cells to sample when trisecting `parent`: for each dimension of maximal side
/// (ascending), the lower and upper neighbor cells. `dims[k]` owns samples 2k and 2k+1.
struct TrisectionPlan {
    std::vector<int> dims;
    std::vector<Rectangle> samples;
};

TrisectionPlan plan_trisection(const Rectangle& parent);

/// Completes a trisection once every sample carries objectives. Dimensions are
/// divided in order of the best non-dominated rank among their two samples (ranked
/// together with the parent center), ties to the lower dimension, so the best
/// dimension's samples keep the largest cells. Returns the shrunk parent first,
/// then the children in division order (lower before upper).
std::vector<Rectangle> apply_trisection(const Rectangle& parent, const TrisectionPlan& plan);

using UnitObjective = std::function<ObjectiveVector(const std::vector<double>& unit_center)>;

/// plan + evaluate + apply. If `evaluate` throws, nothing has been modified.
std::vector<Rectangle> trisect(const Rectangle& parent, const UnitObjective& evaluate);

/// Single-objective DIRECT test on objectives[0]: rectangles on the lower-right
/// convex hull of (size, f) that also satisfy f - K d <= f_min - epsilon |f_min|.
/// One candidate (lowest f, then lowest id) per size class. Result sorted by id.
std::vector<std::size_t> potentially_optimal_single(std::span<const Rectangle> rects,
                                                    double f_min, double epsilon);

/// Same test on explicit (depth, value) pairs.
std::vector<std::size_t> potentially_optimal_values(std::span<const int> depths,
                                                    std::span<const double> values, double f_min,
                                                    double epsilon);

/// Rank-1 set of the second non-dominated sort over (rank, -size).
std::vector<std::size_t> select_pareto_front(std::span<const Rectangle> rects);

/// potentially_optimal_values with f replaced by the non-dominated rank, f_min = 1.
std::vector<std::size_t> select_ns(std::span<const Rectangle> rects, double epsilon);

/// Non-dominated set of (f_1, ..., f_m, -size).
std::vector<std::size_t> select_mo(std::span<const Rectangle> rects);

/// Exclusive hypervolume contribution of every rectangle's objectives against the
/// rank-1 front of all rectangles (zero for dominated ones). Two objectives only.
std::vector<double> hypervolume_indicators(std::span<const Rectangle> rects,
                                           const ObjectiveVector& reference);

/// Front of (hypervolume indicator, size), both maximized.
std::vector<std::size_t> select_mo_hv(std::span<const Rectangle> rects,
                                      const ObjectiveVector& reference);

/// Dispatches on `strategy`. `hv_reference` is only read by mo_direct_hv.
std::vector<std::size_t> select_rectangles(Strategy strategy, std::span<const Rectangle> rects,
                                           double epsilon, const ObjectiveVector& hv_reference);

/// Sum of cell volumes, 1 for a valid partition.
double total_volume(std::span<const Rectangle> rects);

/// Objective callback in problem coordinates. Must be pure; it may be called
/// concurrently when RunOptions::threads > 1.
using Objective = std::function<ObjectiveVector(const DecisionVector& x)>;

struct Problem {
    Objective objective;
    Box bounds;
    std::size_t num_objectives = 2;
};

struct HistoryRecord {
    long evaluations = 0;
    std::vector<double> archive_mean;  // mean objective vector of the archive
};

struct PartitionState {
    std::vector<Rectangle> rectangles;
    long evaluations_used = 0;
    int iterations = 0;
    std::vector<HistoryRecord> history;
};

struct RunOptions {
    Strategy strategy = Strategy::pareto_front;
    long max_evaluations = 30000;
    double epsilon = 1e-4;
    /// Defaults to the origin when empty.
    ObjectiveVector hv_reference;
    int threads = 1;
    /// Cells whose longest sides are this deep are no longer divided.
    int max_depth = 30;
    /// Called after the initial sample and after every iteration.
    std::function<void(const PartitionState&)> observer;
};

struct RunResult {
    ParetoArchive archive;
    PartitionState partition;
    std::vector<std::string> warnings;
};

/// The DIRECT loop: sample the unit-cube center, then repeatedly select
/// potentially optimal rectangles from a snapshot of the partition and trisect
/// them until the evaluation budget is spent. A division that starts under
/// budget always completes, so at most 2n evaluations past the budget are used.
RunResult run(const Problem& problem, const RunOptions& options, ParetoArchive archive = {});

}  // namespace modirect
