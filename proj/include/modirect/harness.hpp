#pragma once

#include "modirect/beam_fem.hpp"
#include "modirect/direct.hpp"
#include "modirect/objectives.hpp"
#include "modirect/posterior.hpp"

#include <json.hpp>

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace modirect {

struct Damage {
    int element = 1;  // 1-based
    double severity = 0.0;
};

/// Everything needed to reproduce one identification run.
struct CaseConfig {
    std::string case_id = "custom";
    int n_elements = 15;
    std::vector<Damage> damages;
    int q_frequencies = 5;
    int mode_index = 2;  // 1-based measured mode
    double noise_sigma = 0.015;
    std::uint64_t seed = 1;
    long max_evals = 30000;
    Strategy strategy = Strategy::pareto_front;
    double alpha_lower = 0.0;
    double alpha_upper = 0.3;
    PredictionMode prediction = PredictionMode::exact;
    double zero_threshold = 1e-3;

    /// Throws InvalidInput on any violated constraint.
    void validate() const;
    Eigen::VectorXd true_alpha() const;
};

/// Built-in damage scenarios "1".."5" and "5b" (case 5 with eight frequencies).
CaseConfig builtin_case(std::string_view id);
const std::vector<std::string>& builtin_case_ids();

/// Standard-normal draws from a 64-bit Mersenne Twister (std::mt19937_64, whose
/// output sequence is fixed by the standard). Uniforms take the top 53 bits;
/// normals use the cosine branch of Box-Muller, one normal per two uniforms.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : engine_(seed) {}

    double uniform();  // in (0, 1)
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Exact modal changes at the true damage, each scalar then scaled by
/// (1 + noise_sigma * g), g standard normal, eigenvalue changes first.
Measurement simulate_measurement(const CaseConfig& config, const BeamModel& model);

struct ConvergencePoint {
    long evaluations = 0;
    std::vector<double> mean_mdlac;  // per objective, archive mean of -f
};

struct RunReport {
    CaseConfig config;
    std::vector<ArchiveEntry> archive;
    SparseSelection posterior;
    ElementStatistics statistics;
    std::vector<ConvergencePoint> history;
    long evaluations_used = 0;
    int iterations = 0;
    std::vector<std::string> warnings;
    double wall_clock_seconds = 0.0;
};

/// Builds the model, simulates the measurement, runs the search and the posterior
/// selection. `threads` only changes how evaluations are scheduled.
RunReport run_case(const CaseConfig& config, int threads = 1);

struct ComparisonRow {
    Strategy strategy = Strategy::pareto_front;
    std::vector<double> predicted;  // posterior alpha at the damaged elements
    std::vector<double> alpha;      // full posterior alpha
    double abs_error_sum = 0.0;
    bool archive_in_bounds = true;
    std::string error;  // non-empty when the run failed
};

struct Comparison {
    std::vector<int> elements;  // damaged elements, 1-based
    std::vector<double> truth;
    std::vector<ComparisonRow> rows;
};

/// One run per multi-objective strategy on the same measurement.
Comparison compare_strategies(const CaseConfig& config, int threads = 1);

/// Outcome of one seed of a statistical identification run.
struct IdentificationOutcome {
    std::uint64_t seed = 0;
    std::vector<int> detected;  // elements with posterior alpha >= threshold, 1-based
    bool correct_set = false;
    double max_severity_error = 0.0;  // over true damages
    double mean_abs_error = 0.0;      // over true damages
};

IdentificationOutcome assess_identification(const RunReport& report,
                                            double detection_threshold = 0.01);

nlohmann::ordered_json to_json(const CaseConfig& config);
/// Overrides the fields present in `j`; unknown keys are rejected.
void apply_json(CaseConfig& config, const nlohmann::ordered_json& j);
CaseConfig case_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json to_json(const RunReport& report);
RunReport report_from_json(const nlohmann::ordered_json& j);

std::string history_csv(const RunReport& report);
std::string comparison_csv(const Comparison& comparison);

}  // namespace modirect
