#include "modirect/moo.hpp"

#include "modirect/errors.hpp"

#include <algorithm>
#include <numeric>

namespace modirect {

namespace {

void check_dimensions(std::span<const ObjectiveVector> points) {
    if (points.empty()) return;
    const std::size_t m = points.front().size();
    if (m == 0) throw InvalidInput("objective vectors must have at least one component");
    for (const auto& p : points) {
        if (p.size() != m) throw InvalidInput("objective vectors differ in dimension");
    }
}

// Lexicographic sweep: after sorting by (f1, f2) every earlier point has f1 no
// larger than the current one, so a front blocks the current point iff its most
// recent member has a smaller f2 (or an equal f2 and a smaller f1). Front tails
// are ordered, so the first non-blocking front is found by binary search.
std::vector<int> sort_two_objectives(std::span<const ObjectiveVector> points) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a][0] != points[b][0]) return points[a][0] < points[b][0];
        return points[a][1] < points[b][1];
    });

    std::vector<int> ranks(points.size(), 0);
    std::vector<std::size_t> tails;
    for (std::size_t idx : order) {
        const auto& c = points[idx];
        const auto blocks = [&](std::size_t tail) {
            const auto& t = points[tail];
            return t[1] < c[1] || (t[1] == c[1] && t[0] < c[0]);
        };
        std::size_t lo = 0;
        std::size_t hi = tails.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (blocks(tails[mid])) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if (lo == tails.size()) {
            tails.push_back(idx);
        } else {
            tails[lo] = idx;
        }
        ranks[idx] = static_cast<int>(lo) + 1;
    }
    return ranks;
}

}  // namespace

bool dominates(std::span<const double> a, std::span<const double> b) {
    bool strictly = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        if (a[k] < b[k]) strictly = true;
    }
    return strictly;
}

std::vector<int> deb_nondominated_sort(std::span<const ObjectiveVector> points) {
    check_dimensions(points);
    const std::size_t n = points.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<int> domination_count(n, 0);
    std::vector<int> ranks(n, 0);

    std::vector<std::size_t> front;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(points[p], points[q])) {
                dominated_by[p].push_back(q);
                ++domination_count[q];
            } else if (dominates(points[q], points[p])) {
                dominated_by[q].push_back(p);
                ++domination_count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (domination_count[p] == 0) front.push_back(p);
    }

    int rank = 1;
    while (!front.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t p : front) {
            ranks[p] = rank;
            for (std::size_t q : dominated_by[p]) {
                if (--domination_count[q] == 0) next.push_back(q);
            }
        }
        front = std::move(next);
        ++rank;
    }
    return ranks;
}

std::vector<int> fast_nondominated_sort(std::span<const ObjectiveVector> points) {
    check_dimensions(points);
    if (points.empty()) return {};
    if (points.front().size() == 2) return sort_two_objectives(points);
    if (points.front().size() == 1) {
        // total order: rank = number of distinct smaller values + 1
        std::vector<double> values;
        values.reserve(points.size());
        for (const auto& p : points) values.push_back(p[0]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        std::vector<int> ranks;
        ranks.reserve(points.size());
        for (const auto& p : points) {
            ranks.push_back(static_cast<int>(
                std::lower_bound(values.begin(), values.end(), p[0]) - values.begin()) + 1);
        }
        return ranks;
    }
    return deb_nondominated_sort(points);
}

double hypervolume_2d(std::span<const ObjectiveVector> front, const ObjectiveVector& reference) {
    if (reference.size() != 2) throw InvalidInput("hypervolume_2d needs a 2-D reference point");
    std::vector<std::pair<double, double>> pts;
    pts.reserve(front.size());
    for (const auto& p : front) {
        if (p.size() != 2) throw InvalidInput("hypervolume_2d needs 2-D points");
        if (p[0] < reference[0] && p[1] < reference[1]) pts.emplace_back(p[0], p[1]);
    }
    std::sort(pts.begin(), pts.end());
    double area = 0.0;
    double ceiling = reference[1];
    for (const auto& [f1, f2] : pts) {
        if (f2 < ceiling) {
            area += (reference[0] - f1) * (ceiling - f2);
            ceiling = f2;
        }
    }
    return area;
}

double exclusive_contribution(const ObjectiveVector& point, std::span<const ObjectiveVector> front,
                              const ObjectiveVector& reference) {
    std::vector<ObjectiveVector> extended(front.begin(), front.end());
    extended.push_back(point);
    const double gain = hypervolume_2d(extended, reference) - hypervolume_2d(front, reference);
    return std::max(gain, 0.0);
}

bool ParetoArchive::insert(DecisionVector x, ObjectiveVector objectives) {
    if (!entries_.empty() && entries_.front().objectives.size() != objectives.size()) {
        throw InvalidInput("archive objective dimension mismatch");
    }
    for (const auto& e : entries_) {
        if (e.x == x || dominates(e.objectives, objectives)) return false;
    }
    std::erase_if(entries_, [&](const ArchiveEntry& e) { return dominates(objectives, e.objectives); });
    entries_.push_back({std::move(x), std::move(objectives)});
    return true;
}

std::vector<ObjectiveVector> ParetoArchive::objective_vectors() const {
    std::vector<ObjectiveVector> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.objectives);
    return out;
}

std::vector<double> ParetoArchive::mean_objectives() const {
    if (entries_.empty()) return {};
    std::vector<double> mean(entries_.front().objectives.size(), 0.0);
    for (const auto& e : entries_) {
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += e.objectives[k];
    }
    for (double& v : mean) v /= static_cast<double>(entries_.size());
    return mean;
}

}  // namespace modirect
