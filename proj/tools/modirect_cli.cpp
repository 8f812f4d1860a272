// modirect: damage identification runs on the cantilever benchmark.
//
//   modirect run --case 3 --freqs 9 --noise 0 --out case3.json
//   modirect compare --case 3 --freqs 9 --noise 0 --out comparison.csv
//   modirect sweep --case 1 --seeds 10

#include "modirect/errors.hpp"
#include "modirect/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace modirect;
using json = nlohmann::ordered_json;

struct CaseFlags {
    std::string case_id = "1";
    std::string config_path;
    std::optional<std::string> strategy;
    std::optional<long> evals;
    std::optional<double> noise;
    std::optional<std::uint64_t> seed;
    std::optional<int> freqs;
    std::optional<int> mode;
    std::optional<int> elements;
    std::vector<std::string> damages;
    std::vector<double> bounds;
    std::optional<std::string> prediction;
    int threads = 1;
};

void add_case_flags(CLI::App& cmd, CaseFlags& f) {
    cmd.add_option("--case", f.case_id, "1|2|3|4|5|5b|custom")->capture_default_str();
    cmd.add_option("--config", f.config_path, "JSON file with CaseConfig fields");
    cmd.add_option("--strategy", f.strategy, "pareto-front|ns-direct|mo-direct|mo-direct-hv");
    cmd.add_option("--evals", f.evals, "evaluation budget");
    cmd.add_option("--noise", f.noise, "multiplicative Gaussian noise sigma");
    cmd.add_option("--seed", f.seed, "noise seed");
    cmd.add_option("--freqs", f.freqs, "number of measured eigenvalues");
    cmd.add_option("--mode", f.mode, "measured mode shape (1-based)");
    cmd.add_option("--elements", f.elements, "number of elements (custom cases)");
    cmd.add_option("--damage", f.damages, "ELEMENT:SEVERITY, repeatable (replaces the case damages)");
    cmd.add_option("--bounds", f.bounds, "alpha_lower alpha_upper")->expected(2);
    cmd.add_option("--prediction", f.prediction, "exact|sensitivity");
    cmd.add_option("--threads", f.threads, "evaluation threads")->capture_default_str();
}

CaseConfig resolve_case(const CaseFlags& f) {
    CaseConfig c;
    if (f.case_id != "custom") c = builtin_case(f.case_id);
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw InvalidInput("cannot open config file " + f.config_path);
        json j;
        try {
            j = json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw InvalidInput("config file " + f.config_path + ": " + e.what());
        }
        apply_json(c, j);
    }
    if (f.case_id == "custom") c.case_id = "custom";
    if (f.strategy) c.strategy = parse_strategy(*f.strategy);
    if (f.evals) c.max_evals = *f.evals;
    if (f.noise) c.noise_sigma = *f.noise;
    if (f.seed) c.seed = *f.seed;
    if (f.freqs) c.q_frequencies = *f.freqs;
    if (f.mode) c.mode_index = *f.mode;
    if (f.elements) c.n_elements = *f.elements;
    if (!f.damages.empty()) {
        c.damages.clear();
        for (const auto& text : f.damages) {
            const auto colon = text.find(':');
            if (colon == std::string::npos) throw InvalidInput("--damage expects ELEMENT:SEVERITY");
            try {
                c.damages.push_back({std::stoi(text.substr(0, colon)), std::stod(text.substr(colon + 1))});
            } catch (const std::logic_error&) {
                throw InvalidInput("cannot parse --damage " + text);
            }
        }
    }
    if (f.bounds.size() == 2) {
        c.alpha_lower = f.bounds[0];
        c.alpha_upper = f.bounds[1];
    }
    if (f.prediction) c.prediction = parse_prediction_mode(*f.prediction);
    c.validate();
    return c;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write " + path.string());
    out << text;
}

std::string join(const std::vector<double>& v) {
    std::ostringstream s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", v[i]);
        s << (i ? " " : "") << buf;
    }
    return s.str();
}

int cmd_run(const CaseFlags& flags, const std::string& out_path) {
    const CaseConfig config = resolve_case(flags);
    const RunReport report = run_case(config, flags.threads);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';

    std::cout << "case " << config.case_id << ", strategy " << to_string(config.strategy) << ", "
              << report.evaluations_used << " evaluations in " << report.wall_clock_seconds
              << " s, archive size " << report.archive.size() << '\n';
    std::cout << "posterior alpha: " << join(report.posterior.alpha) << '\n';

    if (!out_path.empty()) {
        const std::filesystem::path json_path(out_path);
        write_file(json_path, to_json(report).dump(2) + "\n");
        std::filesystem::path csv_path = json_path;
        csv_path.replace_filename(json_path.stem().string() + "_history.csv");
        write_file(csv_path, history_csv(report));
        std::cout << "wrote " << json_path.string() << " and " << csv_path.string() << '\n';
    }
    return 0;
}

int cmd_compare(const CaseFlags& flags, const std::string& out_path) {
    const CaseConfig config = resolve_case(flags);
    const Comparison cmp = compare_strategies(config, flags.threads);
    const std::string csv = comparison_csv(cmp);
    std::cout << csv;
    for (const auto& row : cmp.rows) {
        if (!row.error.empty()) std::cerr << "error: " << to_string(row.strategy) << ": " << row.error << '\n';
    }
    const ComparisonRow& proposed = cmp.rows.front();
    for (std::size_t k = 1; k < cmp.rows.size(); ++k) {
        if (cmp.rows[k].error.empty() && proposed.error.empty() &&
            cmp.rows[k].abs_error_sum < proposed.abs_error_sum) {
            std::cerr << "warning: " << to_string(cmp.rows[k].strategy)
                      << " beats pareto-front on summed absolute error\n";
        }
    }
    if (!out_path.empty()) write_file(out_path, csv);
    return 0;
}

int cmd_sweep(const CaseFlags& flags, int seeds, double threshold, const std::string& out_path) {
    if (seeds < 1) throw InvalidInput("--seeds must be positive");
    const CaseConfig base = resolve_case(flags);
    std::ostringstream csv;
    csv << "seed,detected_elements,correct_set,max_severity_error,mean_abs_error\n";
    int correct = 0;
    for (int k = 0; k < seeds; ++k) {
        CaseConfig c = base;
        c.seed = base.seed + static_cast<std::uint64_t>(k);
        const IdentificationOutcome o = assess_identification(run_case(c, flags.threads), threshold);
        csv << o.seed << ',';
        for (std::size_t i = 0; i < o.detected.size(); ++i) csv << (i ? ";" : "") << o.detected[i];
        csv << ',' << (o.correct_set ? 1 : 0) << ',' << o.max_severity_error << ',' << o.mean_abs_error
            << '\n';
        correct += o.correct_set ? 1 : 0;
    }
    std::cout << csv.str();
    std::cout << "correct damage set in " << correct << "/" << seeds << " seeds\n";
    if (!out_path.empty()) write_file(out_path, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-objective DIRECT damage identification on a cantilever beam"};
    app.require_subcommand(1);

    CaseFlags run_flags, compare_flags, sweep_flags;
    std::string run_out, compare_out, sweep_out;
    int sweep_seeds = 10;
    double sweep_threshold = 0.01;

    auto* run = app.add_subcommand("run", "identify damage for one case");
    add_case_flags(*run, run_flags);
    run->add_option("--out", run_out, "report JSON path (history CSV written alongside)");

    auto* compare = app.add_subcommand("compare", "run all four selection strategies");
    add_case_flags(*compare, compare_flags);
    compare->add_option("--out", compare_out, "comparison CSV path");

    auto* sweep = app.add_subcommand("sweep", "repeat a case over consecutive seeds");
    add_case_flags(*sweep, sweep_flags);
    sweep->add_option("--seeds", sweep_seeds, "number of seeds")->capture_default_str();
    sweep->add_option("--threshold", sweep_threshold, "detection threshold on posterior alpha")
        ->capture_default_str();
    sweep->add_option("--out", sweep_out, "per-seed CSV path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) return cmd_run(run_flags, run_out);
        if (*compare) return cmd_compare(compare_flags, compare_out);
        if (*sweep) return cmd_sweep(sweep_flags, sweep_seeds, sweep_threshold, sweep_out);
    } catch (const NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
