#pragma once

// Slow, obviously-correct reference implementations the tests compare against.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace oracle {

using Point = std::vector<double>;

inline bool dominates(const Point& a, const Point& b) {
    bool strict = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        if (a[k] < b[k]) strict = true;
    }
    return strict;
}

// Peel off the non-dominated set repeatedly.
inline std::vector<int> peel_ranks(const std::vector<Point>& pts) {
    std::vector<int> rank(pts.size(), 0);
    std::size_t left = pts.size();
    for (int front = 1; left > 0; ++front) {
        std::vector<std::size_t> layer;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (rank[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j) {
                dominated = !rank[j] && j != i && dominates(pts[j], pts[i]);
            }
            if (!dominated) layer.push_back(i);
        }
        for (auto i : layer) rank[i] = front;
        left -= layer.size();
    }
    return rank;
}

inline std::vector<std::size_t> nondominated_indices(const std::vector<Point>& pts) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size() && !dominated; ++j) dominated = dominates(pts[j], pts[i]);
        if (!dominated) out.push_back(i);
    }
    return out;
}

// Union of boxes [p, ref] on the grid of distinct coordinates.
inline double grid_hypervolume(const std::vector<Point>& pts, const Point& ref) {
    std::vector<double> xs{ref[0]}, ys{ref[1]};
    for (const auto& p : pts) {
        if (p[0] < ref[0] && p[1] < ref[1]) {
            xs.push_back(p[0]);
            ys.push_back(p[1]);
        }
    }
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    double area = 0.0;
    for (std::size_t a = 0; a + 1 < xs.size(); ++a) {
        for (std::size_t b = 0; b + 1 < ys.size(); ++b) {
            const double cx = 0.5 * (xs[a] + xs[a + 1]);
            const double cy = 0.5 * (ys[b] + ys[b + 1]);
            for (const auto& p : pts) {
                if (p[0] <= cx && p[1] <= cy && p[0] < ref[0] && p[1] < ref[1]) {
                    area += (xs[a + 1] - xs[a]) * (ys[b + 1] - ys[b]);
                    break;
                }
            }
        }
    }
    return area;
}

// Does some K > 0 make rectangle j potentially optimal? Enumerates the pairwise
// slope constraints directly instead of building a hull.
inline bool k_feasible(const std::vector<double>& d, const std::vector<double>& f, double f_min,
                       double eps, std::size_t j) {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (i == j) continue;
        if (d[i] == d[j]) {
            if (f[i] < f[j] || (f[i] == f[j] && i < j)) return false;
        } else if (d[i] < d[j]) {
            lo = std::max(lo, (f[j] - f[i]) / (d[j] - d[i]));
        } else {
            hi = std::min(hi, (f[i] - f[j]) / (d[i] - d[j]));
        }
    }
    lo = std::max(lo, (f[j] - f_min + eps * std::abs(f_min)) / d[j]);
    return lo <= hi && hi > 0.0;
}

// Euler-Bernoulli cantilever: omega_k = (beta_k L)^2 sqrt(EI / (rho A L^4)).
inline double cantilever_eigenvalue(int k, double E, double I, double rho, double A, double L) {
    static const double beta_l[] = {1.87510407, 4.69409113, 7.85475744, 10.99554073};
    const double b = beta_l[k - 1];
    const double omega = b * b * std::sqrt(E * I / (rho * A)) / (L * L);
    return omega * omega;
}

}  // namespace oracle
