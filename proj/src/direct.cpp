#include "modirect/direct.hpp"

#include "modirect/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <numeric>
#include <thread>
#include <utility>

namespace modirect {

namespace {

constexpr int kMaxSupportedDepth = 33;  // 3^33 < 2^53: centers stay exact doubles

std::int64_t pow3(int k) {
    std::int64_t v = 1;
    for (int i = 0; i < k; ++i) v *= 3;
    return v;
}

double inv_pow3(int k) { return 1.0 / static_cast<double>(pow3(k)); }

std::vector<ObjectiveVector> collect_objectives(std::span<const Rectangle> rects) {
    std::vector<ObjectiveVector> out;
    out.reserve(rects.size());
    for (const auto& r : rects) {
        if (r.objectives.empty()) throw InvalidState("rectangle has no objective values");
        out.push_back(r.objectives);
    }
    return out;
}

std::vector<int> collect_depths(std::span<const Rectangle> rects) {
    std::vector<int> out;
    out.reserve(rects.size());
    for (const auto& r : rects) out.push_back(r.min_depth());
    return out;
}

void require_nonempty(std::span<const Rectangle> rects) {
    if (rects.empty()) throw InvalidState("partition is empty");
}

// Rank-1 set of (value, depth) under minimization of both, i.e. smaller value
// and larger cell. Every tie at the winning (value, depth) is kept.
std::vector<std::size_t> size_value_front(std::span<const int> depths,
                                          std::span<const double> values) {
    std::map<int, double> best;  // depth ascending = size descending
    for (std::size_t i = 0; i < depths.size(); ++i) {
        auto [it, fresh] = best.try_emplace(depths[i], values[i]);
        if (!fresh) it->second = std::min(it->second, values[i]);
    }
    std::map<int, double> selected;
    double running = std::numeric_limits<double>::infinity();
    for (const auto& [depth, value] : best) {
        if (value < running) {
            selected.emplace(depth, value);
            running = value;
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < depths.size(); ++i) {
        const auto it = selected.find(depths[i]);
        if (it != selected.end() && values[i] == it->second) out.push_back(i);
    }
    return out;
}

bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
    }
    return true;
}

std::vector<ObjectiveVector> evaluate_batch(const std::vector<std::vector<double>>& centers,
                                            const UnitObjective& evaluate, int threads) {
    std::vector<ObjectiveVector> results(centers.size());
    std::vector<std::exception_ptr> errors(centers.size());
    const auto work = [&](std::size_t i) {
        try {
            results[i] = evaluate(centers[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), centers.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < centers.size(); ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < centers.size(); i = next++) work(i);
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

}  // namespace

std::string_view to_string(Strategy strategy) {
    switch (strategy) {
        case Strategy::pareto_front: return "pareto-front";
        case Strategy::ns_direct: return "ns-direct";
        case Strategy::mo_direct: return "mo-direct";
        case Strategy::mo_direct_hv: return "mo-direct-hv";
        case Strategy::single_objective: return "single-objective";
    }
    return "pareto-front";
}

Strategy parse_strategy(std::string_view text) {
    for (Strategy s : {Strategy::pareto_front, Strategy::ns_direct, Strategy::mo_direct,
                       Strategy::mo_direct_hv, Strategy::single_objective}) {
        if (text == to_string(s)) return s;
    }
    throw InvalidInput("unknown strategy '" + std::string(text) + "'");
}

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty() || lower_.size() != upper_.size()) {
        throw InvalidInput("bounds must be non-empty and of equal length");
    }
    for (std::size_t i = 0; i < lower_.size(); ++i) {
        if (!(lower_[i] < upper_[i]) || !std::isfinite(lower_[i]) || !std::isfinite(upper_[i])) {
            throw InvalidInput("degenerate bounds in dimension " + std::to_string(i));
        }
    }
}

Box Box::uniform(std::size_t dimension, double lower, double upper) {
    return Box(std::vector<double>(dimension, lower), std::vector<double>(dimension, upper));
}

DecisionVector Box::to_problem(std::span<const double> unit) const {
    if (unit.size() != dimension()) throw InvalidInput("point dimension does not match bounds");
    DecisionVector x(unit.size());
    for (std::size_t i = 0; i < unit.size(); ++i) {
        x[i] = lower_[i] + (upper_[i] - lower_[i]) * unit[i];
    }
    return x;
}

std::vector<double> Box::to_unit(std::span<const double> x) const {
    if (x.size() != dimension()) throw InvalidInput("point dimension does not match bounds");
    std::vector<double> u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) u[i] = (x[i] - lower_[i]) / (upper_[i] - lower_[i]);
    return u;
}

Rectangle Rectangle::unit(std::size_t dimension) {
    Rectangle r;
    r.index.assign(dimension, 0);
    r.depth.assign(dimension, 0);
    return r;
}

int Rectangle::min_depth() const { return *std::min_element(depth.begin(), depth.end()); }

double Rectangle::size() const { return inv_pow3(min_depth()); }

double Rectangle::volume() const {
    double v = 1.0;
    for (int d : depth) v *= inv_pow3(d);
    return v;
}

std::vector<double> Rectangle::center() const {
    std::vector<double> c(depth.size());
    for (std::size_t i = 0; i < depth.size(); ++i) {
        c[i] = static_cast<double>(2 * index[i] + 1) / static_cast<double>(2 * pow3(depth[i]));
    }
    return c;
}

TrisectionPlan plan_trisection(const Rectangle& parent) {
    if (parent.depth.empty()) throw InvalidInput("cannot trisect a zero-dimensional rectangle");
    const int shallowest = parent.min_depth();
    if (shallowest >= kMaxSupportedDepth) {
        throw InvalidState("rectangle already at the maximum supported depth");
    }
    TrisectionPlan plan;
    for (std::size_t i = 0; i < parent.dimension(); ++i) {
        if (parent.depth[i] != shallowest) continue;
        plan.dims.push_back(static_cast<int>(i));
        for (int offset : {0, 2}) {
            Rectangle s;
            s.index = parent.index;
            s.depth = parent.depth;
            s.index[i] = 3 * parent.index[i] + offset;
            s.depth[i] = parent.depth[i] + 1;
            plan.samples.push_back(std::move(s));
        }
    }
    return plan;
}

std::vector<Rectangle> apply_trisection(const Rectangle& parent, const TrisectionPlan& plan) {
    const std::size_t k = plan.dims.size();
    if (plan.samples.size() != 2 * k) throw InvalidInput("trisection plan is inconsistent");
    if (parent.objectives.empty()) throw InvalidInput("parent rectangle has no objectives");

    std::vector<ObjectiveVector> batch;
    batch.reserve(2 * k + 1);
    batch.push_back(parent.objectives);
    for (const auto& s : plan.samples) {
        if (s.objectives.size() != parent.objectives.size()) {
            throw InvalidInput("trisection sample has missing or mismatched objectives");
        }
        batch.push_back(s.objectives);
    }
    const std::vector<int> ranks = fast_nondominated_sort(batch);

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::min(ranks[1 + 2 * a], ranks[2 + 2 * a]) <
               std::min(ranks[1 + 2 * b], ranks[2 + 2 * b]);
    });

    Rectangle current = parent;
    std::vector<Rectangle> children;
    children.reserve(2 * k);
    for (std::size_t t : order) {
        const auto dim = static_cast<std::size_t>(plan.dims[t]);
        for (int side = 0; side < 2; ++side) {
            Rectangle child = current;
            child.index[dim] = plan.samples[2 * t + side].index[dim];
            child.depth[dim] = current.depth[dim] + 1;
            child.objectives = plan.samples[2 * t + side].objectives;
            children.push_back(std::move(child));
        }
        current.index[dim] = 3 * current.index[dim] + 1;
        current.depth[dim] += 1;
    }

    std::vector<Rectangle> out;
    out.reserve(2 * k + 1);
    out.push_back(std::move(current));
    for (auto& c : children) out.push_back(std::move(c));
    return out;
}

std::vector<Rectangle> trisect(const Rectangle& parent, const UnitObjective& evaluate) {
    TrisectionPlan plan = plan_trisection(parent);
    for (auto& s : plan.samples) s.objectives = evaluate(s.center());
    return apply_trisection(parent, plan);
}

std::vector<std::size_t> potentially_optimal_values(std::span<const int> depths,
                                                    std::span<const double> values, double f_min,
                                                    double epsilon) {
    if (depths.empty()) throw InvalidState("partition is empty");
    if (depths.size() != values.size()) throw InvalidInput("depths and values differ in length");

    struct Candidate {
        double size;
        double value;
        std::size_t id;
    };
    // one candidate per size class: lowest value, then lowest id
    std::map<int, Candidate> best;
    for (std::size_t i = 0; i < depths.size(); ++i) {
        const auto it = best.find(depths[i]);
        if (it == best.end() || values[i] < it->second.value) {
            best.insert_or_assign(depths[i], Candidate{inv_pow3(depths[i]), values[i], i});
        }
    }
    // size ascending = depth descending
    std::vector<Candidate> points;
    points.reserve(best.size());
    for (auto it = best.rbegin(); it != best.rend(); ++it) points.push_back(it->second);

    // start at the lowest value, the largest size among ties
    std::size_t start = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].value <= points[start].value) start = i;
    }

    // lower convex hull from `start` to the largest cell, collinear points kept
    std::vector<Candidate> hull;
    for (std::size_t i = start; i < points.size(); ++i) {
        const Candidate& c = points[i];
        while (hull.size() >= 2) {
            const Candidate& a = hull[hull.size() - 2];
            const Candidate& b = hull.back();
            const double cross =
                (b.size - a.size) * (c.value - a.value) - (b.value - a.value) * (c.size - a.size);
            if (cross < 0.0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(c);
    }

    const double threshold = f_min - epsilon * std::abs(f_min);
    std::vector<std::size_t> out;
    for (std::size_t h = 0; h < hull.size(); ++h) {
        if (h + 1 == hull.size()) {
            out.push_back(hull[h].id);  // K can grow without bound
            continue;
        }
        const double k_max =
            (hull[h + 1].value - hull[h].value) / (hull[h + 1].size - hull[h].size);
        if (hull[h].value - k_max * hull[h].size <= threshold) out.push_back(hull[h].id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> potentially_optimal_single(std::span<const Rectangle> rects,
                                                    double f_min, double epsilon) {
    require_nonempty(rects);
    std::vector<double> values;
    values.reserve(rects.size());
    for (const auto& r : rects) {
        if (r.objectives.empty()) throw InvalidState("rectangle has no objective values");
        values.push_back(r.objectives[0]);
    }
    const std::vector<int> depths = collect_depths(rects);
    return potentially_optimal_values(depths, values, f_min, epsilon);
}

std::vector<std::size_t> select_pareto_front(std::span<const Rectangle> rects) {
    require_nonempty(rects);
    const std::vector<int> ranks = fast_nondominated_sort(collect_objectives(rects));
    const std::vector<double> values(ranks.begin(), ranks.end());
    return size_value_front(collect_depths(rects), values);
}

std::vector<std::size_t> select_ns(std::span<const Rectangle> rects, double epsilon) {
    require_nonempty(rects);
    const std::vector<int> ranks = fast_nondominated_sort(collect_objectives(rects));
    const std::vector<double> values(ranks.begin(), ranks.end());
    return potentially_optimal_values(collect_depths(rects), values, 1.0, epsilon);
}

std::vector<std::size_t> select_mo(std::span<const Rectangle> rects) {
    require_nonempty(rects);
    const std::vector<ObjectiveVector> objectives = collect_objectives(rects);
    std::map<int, std::vector<std::size_t>> classes;  // largest cells first
    for (std::size_t i = 0; i < rects.size(); ++i) classes[rects[i].min_depth()].push_back(i);

    std::vector<std::size_t> out;
    std::vector<ObjectiveVector> larger_front;  // non-dominated objectives of larger cells
    for (const auto& [depth, members] : classes) {
        std::vector<ObjectiveVector> local;
        local.reserve(members.size());
        for (std::size_t i : members) local.push_back(objectives[i]);
        const std::vector<int> local_ranks = fast_nondominated_sort(local);

        std::vector<ObjectiveVector> class_front;
        for (std::size_t k = 0; k < members.size(); ++k) {
            if (local_ranks[k] != 1) continue;
            class_front.push_back(local[k]);
            const bool covered =
                std::any_of(larger_front.begin(), larger_front.end(),
                            [&](const ObjectiveVector& a) { return weakly_dominates(a, local[k]); });
            if (!covered) out.push_back(members[k]);
        }

        larger_front.insert(larger_front.end(), class_front.begin(), class_front.end());
        const std::vector<int> merged = fast_nondominated_sort(larger_front);
        std::vector<ObjectiveVector> kept;
        for (std::size_t k = 0; k < larger_front.size(); ++k) {
            if (merged[k] == 1) kept.push_back(std::move(larger_front[k]));
        }
        larger_front = std::move(kept);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> hypervolume_indicators(std::span<const Rectangle> rects,
                                           const ObjectiveVector& reference) {
    require_nonempty(rects);
    if (reference.size() != 2) throw InvalidInput("hypervolume strategy needs two objectives");
    const std::vector<ObjectiveVector> objectives = collect_objectives(rects);
    if (objectives.front().size() != 2) {
        throw InvalidInput("hypervolume strategy needs two objectives");
    }
    const std::vector<int> ranks = fast_nondominated_sort(objectives);

    // distinct front points inside the reference box; f1 ascending implies f2 descending
    std::vector<ObjectiveVector> front;
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        const auto& p = objectives[i];
        if (ranks[i] == 1 && p[0] < reference[0] && p[1] < reference[1]) front.push_back(p);
    }
    std::sort(front.begin(), front.end());
    front.erase(std::unique(front.begin(), front.end()), front.end());

    std::map<ObjectiveVector, double> share;
    for (std::size_t i = 0; i < front.size(); ++i) {
        const double right = i + 1 < front.size() ? front[i + 1][0] : reference[0];
        const double above = i > 0 ? front[i - 1][1] : reference[1];
        share[front[i]] = (right - front[i][0]) * (above - front[i][1]);
    }

    std::vector<double> h(objectives.size(), 0.0);
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        if (ranks[i] != 1) continue;
        const auto it = share.find(objectives[i]);
        if (it != share.end()) h[i] = it->second;
    }
    return h;
}

std::vector<std::size_t> select_mo_hv(std::span<const Rectangle> rects,
                                      const ObjectiveVector& reference) {
    const std::vector<double> h = hypervolume_indicators(rects, reference);
    std::vector<double> values(h.size());
    std::transform(h.begin(), h.end(), values.begin(), [](double v) { return -v; });
    return size_value_front(collect_depths(rects), values);
}

std::vector<std::size_t> select_rectangles(Strategy strategy, std::span<const Rectangle> rects,
                                           double epsilon, const ObjectiveVector& hv_reference) {
    switch (strategy) {
        case Strategy::pareto_front: return select_pareto_front(rects);
        case Strategy::ns_direct: return select_ns(rects, epsilon);
        case Strategy::mo_direct: return select_mo(rects);
        case Strategy::mo_direct_hv: return select_mo_hv(rects, hv_reference);
        case Strategy::single_objective: {
            require_nonempty(rects);
            double f_min = std::numeric_limits<double>::infinity();
            for (const auto& r : rects) f_min = std::min(f_min, r.objectives.at(0));
            return potentially_optimal_single(rects, f_min, epsilon);
        }
    }
    throw InvalidInput("unknown strategy");
}

double total_volume(std::span<const Rectangle> rects) {
    double sum = 0.0;
    for (const auto& r : rects) sum += r.volume();
    return sum;
}

RunResult run(const Problem& problem, const RunOptions& options, ParetoArchive archive) {
    const std::size_t n = problem.bounds.dimension();
    if (!problem.objective) throw InvalidInput("problem has no objective callback");
    if (problem.num_objectives < 1) throw InvalidInput("problem needs at least one objective");
    if (options.max_evaluations < 1) throw InvalidInput("evaluation budget must be positive");
    if (options.max_depth < 1 || options.max_depth > kMaxSupportedDepth) {
        throw InvalidInput("max_depth must lie in [1, " + std::to_string(kMaxSupportedDepth) + "]");
    }
    if (options.strategy == Strategy::single_objective && problem.num_objectives != 1) {
        throw InvalidInput("single-objective strategy needs exactly one objective");
    }
    ObjectiveVector reference = options.hv_reference;
    if (reference.empty()) reference.assign(problem.num_objectives, 0.0);
    if (options.strategy == Strategy::mo_direct_hv &&
        (problem.num_objectives != 2 || reference.size() != 2)) {
        throw InvalidInput("mo-direct-hv strategy needs two objectives");
    }

    const UnitObjective evaluate_unit = [&](const std::vector<double>& unit) {
        ObjectiveVector f = problem.objective(problem.bounds.to_problem(unit));
        if (f.size() != problem.num_objectives) {
            throw InvalidInput("objective returned " + std::to_string(f.size()) +
                               " values, expected " + std::to_string(problem.num_objectives));
        }
        return f;
    };

    RunResult result;
    result.archive = std::move(archive);
    PartitionState& state = result.partition;

    const auto record = [&] {
        state.history.push_back({state.evaluations_used, result.archive.mean_objectives()});
        if (options.observer) options.observer(state);
    };

    Rectangle root = Rectangle::unit(n);
    root.objectives = evaluate_unit(root.center());
    result.archive.insert(problem.bounds.to_problem(root.center()), root.objectives);
    state.rectangles.push_back(std::move(root));
    state.evaluations_used = 1;
    record();

    if (options.max_evaluations < static_cast<long>(2 * n + 1)) {
        result.warnings.push_back("evaluation budget " + std::to_string(options.max_evaluations) +
                                  " is below the first division (" + std::to_string(2 * n + 1) +
                                  "); returning the center sample only");
        return result;
    }

    while (state.evaluations_used < options.max_evaluations) {
        std::vector<std::size_t> selected =
            select_rectangles(options.strategy, state.rectangles, options.epsilon, reference);
        std::erase_if(selected, [&](std::size_t id) {
            return state.rectangles[id].min_depth() >= options.max_depth;
        });
        if (selected.empty()) {
            result.warnings.push_back("no divisible potentially optimal rectangle left (depth limit " +
                                      std::to_string(options.max_depth) + "); stopping early");
            break;
        }

        // the set of divisions is fixed before any evaluation so the batch can run in parallel
        std::vector<std::pair<std::size_t, TrisectionPlan>> plans;
        long planned = state.evaluations_used;
        for (std::size_t id : selected) {
            if (planned >= options.max_evaluations) break;
            TrisectionPlan plan = plan_trisection(state.rectangles[id]);
            planned += static_cast<long>(plan.samples.size());
            plans.emplace_back(id, std::move(plan));
        }

        std::vector<std::vector<double>> centers;
        for (const auto& [id, plan] : plans) {
            for (const auto& s : plan.samples) centers.push_back(s.center());
        }
        const std::vector<ObjectiveVector> values =
            evaluate_batch(centers, evaluate_unit, options.threads);

        std::size_t cursor = 0;
        for (auto& [id, plan] : plans) {
            for (auto& s : plan.samples) s.objectives = values[cursor++];
            std::vector<Rectangle> pieces = apply_trisection(state.rectangles[id], plan);
            state.rectangles[id] = std::move(pieces.front());
            for (std::size_t p = 1; p < pieces.size(); ++p) {
                state.rectangles.push_back(std::move(pieces[p]));
            }
        }
        for (std::size_t i = 0; i < centers.size(); ++i) {
            result.archive.insert(problem.bounds.to_problem(centers[i]), values[i]);
        }

        state.evaluations_used = planned;
        ++state.iterations;
        record();
    }
    return result;
}

}  // namespace modirect
