#include "modirect/posterior.hpp"

#include "modirect/errors.hpp"

#include <cmath>

namespace modirect {

namespace {

double l1_norm(std::span<const double> alpha) {
    double s = 0.0;
    for (double a : alpha) s += std::abs(a);
    return s;
}

}  // namespace

void PosteriorConfig::validate(double alpha_lower, double alpha_upper) const {
    if (!(zero_threshold > 0.0 && zero_threshold < 0.5 * (alpha_upper - alpha_lower))) {
        throw InvalidInput("zero threshold must lie in (0, (alpha_upper - alpha_lower) / 2)");
    }
}

double sparsity_score(std::span<const double> alpha, double zero_threshold) {
    double count = 0.0;
    for (double a : alpha) {
        if (std::abs(a) >= zero_threshold) count += 1.0;
    }
    return count + l1_norm(alpha);
}

SparseSelection sparse_select(const ParetoArchive& archive, const PosteriorConfig& config) {
    if (archive.empty()) throw InvalidState("cannot select from an empty archive");
    const auto& entries = archive.entries();
    SparseSelection best;
    double best_l1 = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const double score = sparsity_score(entries[i].x, config.zero_threshold);
        const double l1 = l1_norm(entries[i].x);
        if (i == 0 || score < best.score || (score == best.score && l1 < best_l1)) {
            best = {i, entries[i].x, score};
            best_l1 = l1;
        }
    }
    return best;
}

ElementStatistics archive_stats(const ParetoArchive& archive) {
    if (archive.empty()) throw InvalidState("cannot summarize an empty archive");
    const auto& entries = archive.entries();
    const std::size_t n = entries.front().x.size();
    const double count = static_cast<double>(entries.size());

    ElementStatistics stats;
    stats.mean.assign(n, 0.0);
    stats.variance.assign(n, 0.0);
    for (const auto& e : entries) {
        for (std::size_t i = 0; i < n; ++i) stats.mean[i] += e.x[i];
    }
    for (double& m : stats.mean) m /= count;
    if (entries.size() > 1) {
        for (const auto& e : entries) {
            for (std::size_t i = 0; i < n; ++i) {
                const double d = e.x[i] - stats.mean[i];
                stats.variance[i] += d * d;
            }
        }
        for (double& v : stats.variance) v /= count - 1.0;
    }
    return stats;
}

}  // namespace modirect
