#include "modirect/harness.hpp"

#include "modirect/errors.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace modirect {

namespace {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CaseConfig make_case(std::string id, int n, std::vector<Damage> damages, int q = 5) {
    CaseConfig c;
    c.case_id = std::move(id);
    c.n_elements = n;
    c.damages = std::move(damages);
    c.q_frequencies = q;
    return c;
}

template <typename T>
T get_field(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("field '") + key + "': " + e.what());
    }
}

}  // namespace

void CaseConfig::validate() const {
    if (n_elements < 1) throw InvalidInput("n_elements must be positive");
    if (damages.empty()) throw InvalidInput("case '" + case_id + "' has no damages");
    std::set<int> seen;
    for (const auto& d : damages) {
        if (d.element < 1 || d.element > n_elements) {
            throw InvalidInput("damage element " + std::to_string(d.element) + " outside [1, " +
                               std::to_string(n_elements) + "]");
        }
        if (!seen.insert(d.element).second) {
            throw InvalidInput("damage element " + std::to_string(d.element) + " listed twice");
        }
        if (!(d.severity > 0.0 && d.severity < 1.0)) {
            throw InvalidInput("damage severity must lie in (0, 1)");
        }
    }
    if (q_frequencies < 1 || q_frequencies > 2 * n_elements) {
        throw InvalidInput("q_frequencies must lie in [1, " + std::to_string(2 * n_elements) + "]");
    }
    if (mode_index < 1 || mode_index > 2 * n_elements) {
        throw InvalidInput("mode_index must lie in [1, " + std::to_string(2 * n_elements) + "]");
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw InvalidInput("noise_sigma must be non-negative");
    }
    if (max_evals < 1) throw InvalidInput("max_evals must be positive");
    if (!(alpha_lower >= 0.0 && alpha_lower < alpha_upper && alpha_upper < 1.0)) {
        throw InvalidInput("bounds must satisfy 0 <= alpha_lower < alpha_upper < 1");
    }
    if (strategy == Strategy::single_objective) {
        throw InvalidInput("damage identification needs a multi-objective strategy");
    }
    PosteriorConfig{zero_threshold}.validate(alpha_lower, alpha_upper);
}

Eigen::VectorXd CaseConfig::true_alpha() const {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n_elements);
    for (const auto& d : damages) alpha[d.element - 1] = d.severity;
    return alpha;
}

const std::vector<std::string>& builtin_case_ids() {
    static const std::vector<std::string> ids = {"1", "2", "3", "4", "5", "5b"};
    return ids;
}

CaseConfig builtin_case(std::string_view id) {
    if (id == "1") return make_case("1", 15, {{3, 0.09}, {14, 0.05}});
    if (id == "2") return make_case("2", 15, {{8, 0.02}, {11, 0.08}});
    if (id == "3") return make_case("3", 15, {{3, 0.09}, {9, 0.03}, {14, 0.05}});
    if (id == "4") return make_case("4", 20, {{8, 0.02}, {11, 0.08}});
    if (id == "5") return make_case("5", 30, {{8, 0.02}, {11, 0.08}, {21, 0.04}});
    if (id == "5b") return make_case("5b", 30, {{8, 0.02}, {11, 0.08}, {21, 0.04}}, 8);
    throw InvalidInput("unknown case '" + std::string(id) + "'");
}

double NormalRng::uniform() {
    // 53 random bits, shifted off zero
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalRng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Measurement simulate_measurement(const CaseConfig& config, const BeamModel& model) {
    const Measurement exact = exact_measurement(model, config.true_alpha(), config.q_frequencies,
                                                config.mode_index);
    if (config.noise_sigma == 0.0) return exact;

    NormalRng rng(config.seed);
    Eigen::VectorXd dl = exact.delta_lambda();
    Eigen::VectorXd dp = exact.delta_phi();
    for (Eigen::Index i = 0; i < dl.size(); ++i) dl[i] *= 1.0 + config.noise_sigma * rng.normal();
    for (Eigen::Index i = 0; i < dp.size(); ++i) dp[i] *= 1.0 + config.noise_sigma * rng.normal();
    return Measurement(std::move(dl), std::move(dp), config.mode_index);
}

RunReport run_case(const CaseConfig& config, int threads) {
    config.validate();
    const auto started = std::chrono::steady_clock::now();
    const std::string context = "case " + config.case_id + ": ";

    RunReport report;
    report.config = config;
    try {
        const BeamModel model = BeamModel::benchmark(config.n_elements);
        const Measurement measurement = simulate_measurement(config, model);

        // matched-by-index modes should stay recognizable after damage
        const int n_modes = std::max(config.q_frequencies, config.mode_index);
        const ModalSolver solver(model);
        const ModalData healthy = solver.solve(Eigen::VectorXd::Zero(model.n_elements), n_modes);
        const ModalData damaged = solver.solve(config.true_alpha(), n_modes);
        for (int j = 0; j < n_modes; ++j) {
            const double mac =
                modal_assurance(healthy.mode_shapes.col(j), damaged.mode_shapes.col(j));
            if (mac < 0.9) {
                report.warnings.push_back("mode " + std::to_string(j + 1) +
                                          " modal assurance " + format_double(mac) +
                                          " below 0.9: possible mode swap");
            }
        }

        const DamageObjective objective(model, measurement, config.prediction);
        Problem problem{
            [&objective](const DecisionVector& alpha) { return objective(alpha); },
            Box::uniform(static_cast<std::size_t>(config.n_elements), config.alpha_lower,
                         config.alpha_upper),
            2};
        RunOptions options;
        options.strategy = config.strategy;
        options.max_evaluations = config.max_evals;
        options.threads = threads;

        RunResult result = run(problem, options);

        report.archive = result.archive.entries();
        report.posterior = sparse_select(result.archive, PosteriorConfig{config.zero_threshold});
        report.statistics = archive_stats(result.archive);
        report.evaluations_used = result.partition.evaluations_used;
        report.iterations = result.partition.iterations;
        for (const auto& h : result.partition.history) {
            ConvergencePoint p{h.evaluations, {}};
            for (double f : h.archive_mean) p.mean_mdlac.push_back(-f);
            report.history.push_back(std::move(p));
        }
        report.warnings.insert(report.warnings.end(), result.warnings.begin(),
                               result.warnings.end());
    } catch (const NumericalFailure& e) {
        throw NumericalFailure(context + e.what());
    } catch (const InvalidInput& e) {
        throw InvalidInput(context + e.what());
    } catch (const InvalidState& e) {
        throw InvalidState(context + e.what());
    }
    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

Comparison compare_strategies(const CaseConfig& config, int threads) {
    config.validate();
    Comparison out;
    for (const auto& d : config.damages) {
        out.elements.push_back(d.element);
        out.truth.push_back(d.severity);
    }
    for (Strategy s : kMultiObjectiveStrategies) {
        ComparisonRow row;
        row.strategy = s;
        CaseConfig c = config;
        c.strategy = s;
        try {
            const RunReport report = run_case(c, threads);
            row.alpha = report.posterior.alpha;
            for (std::size_t k = 0; k < out.elements.size(); ++k) {
                const double a = row.alpha[static_cast<std::size_t>(out.elements[k] - 1)];
                row.predicted.push_back(a);
                row.abs_error_sum += std::abs(a - out.truth[k]);
            }
            for (const auto& e : report.archive) {
                for (double a : e.x) {
                    if (a < c.alpha_lower || a > c.alpha_upper) row.archive_in_bounds = false;
                }
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

IdentificationOutcome assess_identification(const RunReport& report, double detection_threshold) {
    IdentificationOutcome out;
    out.seed = report.config.seed;
    const auto& alpha = report.posterior.alpha;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] >= detection_threshold) out.detected.push_back(static_cast<int>(i) + 1);
    }
    std::vector<int> truth;
    for (const auto& d : report.config.damages) {
        truth.push_back(d.element);
        const double err = std::abs(alpha.at(static_cast<std::size_t>(d.element - 1)) - d.severity);
        out.max_severity_error = std::max(out.max_severity_error, err);
        out.mean_abs_error += err;
    }
    out.mean_abs_error /= static_cast<double>(report.config.damages.size());
    std::sort(truth.begin(), truth.end());
    out.correct_set = truth == out.detected;
    return out;
}

json to_json(const CaseConfig& c) {
    json damages = json::array();
    for (const auto& d : c.damages) {
        damages.push_back(json{{"element", d.element}, {"severity", d.severity}});
    }
    return json{{"case_id", c.case_id},
                {"n_elements", c.n_elements},
                {"damages", damages},
                {"q_frequencies", c.q_frequencies},
                {"mode_index", c.mode_index},
                {"noise_sigma", c.noise_sigma},
                {"seed", c.seed},
                {"max_evals", c.max_evals},
                {"strategy", std::string(to_string(c.strategy))},
                {"bounds", json::array({c.alpha_lower, c.alpha_upper})},
                {"prediction", std::string(to_string(c.prediction))},
                {"zero_threshold", c.zero_threshold}};
}

void apply_json(CaseConfig& c, const json& j) {
    if (!j.is_object()) throw InvalidInput("case configuration must be a JSON object");
    static const std::set<std::string> known = {
        "case_id", "n_elements", "damages",  "q_frequencies", "mode_index",  "noise_sigma",
        "seed",    "max_evals",  "strategy", "bounds",        "prediction", "zero_threshold"};
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) throw InvalidInput("unknown configuration field '" + key + "'");
    }
    if (j.contains("case_id")) c.case_id = get_field<std::string>(j, "case_id");
    if (j.contains("n_elements")) c.n_elements = get_field<int>(j, "n_elements");
    if (j.contains("damages")) {
        c.damages.clear();
        for (const auto& d : j.at("damages")) {
            c.damages.push_back({get_field<int>(d, "element"), get_field<double>(d, "severity")});
        }
    }
    if (j.contains("q_frequencies")) c.q_frequencies = get_field<int>(j, "q_frequencies");
    if (j.contains("mode_index")) c.mode_index = get_field<int>(j, "mode_index");
    if (j.contains("noise_sigma")) c.noise_sigma = get_field<double>(j, "noise_sigma");
    if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed");
    if (j.contains("max_evals")) c.max_evals = get_field<long>(j, "max_evals");
    if (j.contains("strategy")) c.strategy = parse_strategy(get_field<std::string>(j, "strategy"));
    if (j.contains("bounds")) {
        const auto b = get_field<std::vector<double>>(j, "bounds");
        if (b.size() != 2) throw InvalidInput("bounds must be [alpha_lower, alpha_upper]");
        c.alpha_lower = b[0];
        c.alpha_upper = b[1];
    }
    if (j.contains("prediction")) {
        c.prediction = parse_prediction_mode(get_field<std::string>(j, "prediction"));
    }
    if (j.contains("zero_threshold")) c.zero_threshold = get_field<double>(j, "zero_threshold");
}

CaseConfig case_from_json(const json& j) {
    CaseConfig c;
    if (j.is_object() && j.contains("case_id")) {
        const auto id = get_field<std::string>(j, "case_id");
        const auto& ids = builtin_case_ids();
        if (std::find(ids.begin(), ids.end(), id) != ids.end()) c = builtin_case(id);
    }
    apply_json(c, j);
    return c;
}

json to_json(const RunReport& r) {
    json archive = json::array();
    for (const auto& e : r.archive) {
        archive.push_back(json{{"alpha", e.x}, {"objectives", e.objectives}});
    }
    json history = json::array();
    for (const auto& h : r.history) {
        history.push_back(json{{"evaluations", h.evaluations}, {"mean_mdlac", h.mean_mdlac}});
    }
    return json{{"config", to_json(r.config)},
                {"archive", archive},
                {"posterior",
                 json{{"index", r.posterior.index},
                      {"alpha", r.posterior.alpha},
                      {"score", r.posterior.score}}},
                {"statistics",
                 json{{"mean", r.statistics.mean}, {"variance", r.statistics.variance}}},
                {"history", history},
                {"evaluations_used", r.evaluations_used},
                {"iterations", r.iterations},
                {"warnings", r.warnings},
                {"wall_clock_seconds", r.wall_clock_seconds}};
}

RunReport report_from_json(const json& j) {
    RunReport r;
    try {
        r.config = case_from_json(j.at("config"));
        for (const auto& e : j.at("archive")) {
            r.archive.push_back({e.at("alpha").get<std::vector<double>>(),
                                 e.at("objectives").get<std::vector<double>>()});
        }
        const auto& p = j.at("posterior");
        r.posterior.index = p.at("index").get<std::size_t>();
        r.posterior.alpha = p.at("alpha").get<std::vector<double>>();
        r.posterior.score = p.at("score").get<double>();
        r.statistics.mean = j.at("statistics").at("mean").get<std::vector<double>>();
        r.statistics.variance = j.at("statistics").at("variance").get<std::vector<double>>();
        for (const auto& h : j.at("history")) {
            r.history.push_back(
                {h.at("evaluations").get<long>(), h.at("mean_mdlac").get<std::vector<double>>()});
        }
        r.evaluations_used = j.at("evaluations_used").get<long>();
        r.iterations = j.at("iterations").get<int>();
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("malformed run report: ") + e.what());
    }
    return r;
}

std::string history_csv(const RunReport& report) {
    std::ostringstream out;
    out << "evaluations,mean_mdlac_freq,mean_mdlac_mode\n";
    for (const auto& h : report.history) {
        out << h.evaluations;
        for (double v : h.mean_mdlac) out << ',' << format_double(v);
        out << '\n';
    }
    return out.str();
}

std::string comparison_csv(const Comparison& comparison) {
    std::ostringstream out;
    out << "algorithm";
    for (int e : comparison.elements) out << ",element_" << e;
    out << ",abs_error_sum\n";
    out << "true";
    for (double t : comparison.truth) out << ',' << format_double(t);
    out << ",0\n";
    for (const auto& row : comparison.rows) {
        out << to_string(row.strategy);
        if (!row.error.empty()) {
            for (std::size_t k = 0; k <= comparison.elements.size(); ++k) out << ",nan";
            out << '\n';
            continue;
        }
        for (double p : row.predicted) out << ',' << format_double(p);
        out << ',' << format_double(row.abs_error_sum) << '\n';
    }
    return out.str();
}

}  // namespace modirect
