// Command-line harness: simulate scenarios, detect steady states, fit models,
// check adjustment sets and run the full suite.

#include "confound/acceptance.hpp"
#include "confound/error.hpp"
#include "confound/estimators.hpp"
#include "confound/graph.hpp"
#include "confound/graph_io.hpp"
#include "confound/io.hpp"
#include "confound/kernels.hpp"
#include "confound/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace confound;

namespace {

constexpr int kOk = 0;
constexpr int kCriterionFailed = 1;
constexpr int kConfigError = 2;

const fs::path kDefaultConfigDir{CONFOUND_CONFIG_DIR};

struct GlobalFlags {
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
};

void emit(const std::optional<fs::path>& out, const std::string& text) {
    if (out) {
        write_text(*out, text);
    } else {
        std::cout << text;
    }
}

int cmd_simulate(const GlobalFlags& g, const fs::path& config, const fs::path& out_dir) {
    auto cfg = load_scenario(config);
    if (g.seed) cfg.seed = *g.seed;
    if (g.dt) cfg.dt = *g.dt;
    const auto result = run_scenario(cfg);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string());
    write_text(out_dir / "config.json", scenario_to_json(cfg));
    write_text(out_dir / "trajectory.csv", format_trajectory_csv(result.trajectory));
    write_text(out_dir / "dataset.csv", format_dataset_csv(result.dataset));
    write_text(out_dir / "fit_naive.txt", format_fit(result.naive));
    write_text(out_dir / "fit_adjusted.txt", format_fit(result.adjusted));
    write_text(out_dir / "plot.csv", format_plot_csv(result.dataset, result.adjusted));
    std::cout << cfg.name << ": " << result.trajectory.size() << " samples, " << result.dataset.size()
              << " steady-state rows, naive c1 = " << format_double(result.naive.c1)
              << ", adjusted c = " << format_double(result.adjusted.c) << ", true gain = "
              << format_double(steady_state_gain(cfg.system)) << "\n";
    return kOk;
}

DetectionConfig detection_from_file(const fs::path& path) {
    const auto text = read_text(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigParse, e.what());
    }
    if (j.contains("system")) return parse_scenario(text).detection;
    // Bare detection block: wrap it in a minimal scenario so parsing stays in one place.
    nlohmann::json wrapper = {
        {"system", {{"preset", "example"}}},
        {"controller", {{"type", "p_feedback"}, {"kp", 0.0}}},
        {"disturbance", {{"type", "constant"}, {"value", 0.0}}},
        {"reference", {{"type", "constant"}, {"value", 0.0}}},
        {"t_end", 1.0},
        {"dt", 0.1},
        {"detection", j.contains("detection") ? j.at("detection") : j},
    };
    return parse_scenario(wrapper.dump()).detection;
}

int cmd_detect(const fs::path& traj_path, const fs::path& config, const std::optional<fs::path>& out) {
    const auto traj = parse_trajectory_csv(read_text(traj_path));
    const auto cfg = detection_from_file(config);
    const auto ds = detect(traj, cfg, traj_path.string());
    emit(out, format_dataset_csv(ds));
    std::cerr << ds.size() << " steady-state rows\n";
    return kOk;
}

int cmd_fit(const fs::path& dataset_path, const std::string& method, double lambda_c, double lambda_w,
            double smoothness, const std::optional<fs::path>& out) {
    const auto ds = parse_dataset_csv(read_text(dataset_path));
    if (method == "naive") {
        emit(out, format_fit(naive_ols(ds)));
    } else if (method == "adjusted") {
        emit(out, format_fit(adjusted_map(ds)));
    } else {
        std::optional<Eigen::MatrixXd> S;
        if (smoothness > 0.0) S = second_difference_precision(ds.size(), smoothness);
        const auto fit = adjusted_map_regularized(ds, lambda_c, lambda_w, S);
        std::string text = format_fit(fit, "adjusted-reg");
        text += "lambda_c: " + format_double(lambda_c) + "\n";
        text += "lambda_w: " + format_double(lambda_w) + "\n";
        text += "smoothness: " + format_double(smoothness) + "\n";
        emit(out, text);
    }
    return kOk;
}

std::string join_path(const std::vector<std::string>& p, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? sep : "") + p[i];
    return s;
}

int cmd_graph_check(const fs::path& graph_path, const std::string& treatment, const std::string& outcome,
                    const std::vector<std::string>& adjust, bool list_sets) {
    const auto g = read_graph(graph_path);
    NodeSet z(adjust.begin(), adjust.end());
    std::cout << "graph: " << g.node_count() << " nodes, " << g.edges().size() << " edges, "
              << (is_acyclic(g) ? "acyclic" : "cyclic") << "\n";
    AdjustmentReport report;
    try {
        report = backdoor_admissible(g, treatment, outcome, z);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::CyclicGraph) throw;
        std::cout << "not admissible: the backdoor criterion needs an acyclic graph"
                  << " (a feedback loop can be rewritten into feedforward form first)\n";
        return kCriterionFailed;
    }
    std::cout << "adjustment set {" << join_path({z.begin(), z.end()}, ", ") << "} for " << treatment << " -> "
              << outcome << ": " << (report.admissible ? "admissible" : "not admissible") << "\n";
    for (const auto& p : report.violating_paths) std::cout << "  open backdoor path: " << join_path(p, " ~ ") << "\n";
    for (const auto& d : report.descendant_violations)
        std::cout << "  descendant of " << treatment << ": " << d << "\n";
    if (list_sets) {
        std::cout << "admissible sets:\n";
        for (const auto& s : admissible_adjustment_sets(g, treatment, outcome))
            std::cout << "  {" << join_path({s.begin(), s.end()}, ", ") << "}\n";
    }
    return report.admissible ? kOk : kCriterionFailed;
}

bool report_claims_hold(const ExperimentReport& r, std::ostream& log) {
    bool ok = r.commute.pass;
    const auto* open = r.find("open_loop");
    const auto* ff = r.find("feedforward");
    const auto* fb = r.find("feedback");
    if (open) {
        const bool pass = open->rows >= 50 && open->naive_error < 0.05;
        log << (pass ? "[PASS]" : "[FAIL]") << " open-loop naive error " << format_double(open->naive_error) << "\n";
        ok = ok && pass;
    }
    if (fb) {
        const bool pass = fb->naive.c1 < 0.0 && fb->adjusted.c > 0.0 && fb->adjusted_error < 0.8 * fb->naive_error;
        log << (pass ? "[PASS]" : "[FAIL]") << " feedback naive c1 " << format_double(fb->naive.c1)
            << ", adjusted c " << format_double(fb->adjusted.c) << "\n";
        ok = ok && pass;
    }
    if (ff) {
        const bool pass = ff->adjusted_error < 0.5 * ff->naive_error;
        log << (pass ? "[PASS]" : "[FAIL]") << " feedforward adjusted error " << format_double(ff->adjusted_error)
            << " vs naive " << format_double(ff->naive_error) << "\n";
        ok = ok && pass;
    }
    log << (r.commute.pass ? "[PASS]" : "[FAIL]") << " equilibrium check max_dev " << format_double(r.commute.max_dev)
        << "\n";
    return ok;
}

int cmd_suite(const GlobalFlags& g, const fs::path& config, const fs::path& out_dir) {
    const auto cfg = apply_overrides(load_suite(config), {g.seed, g.dt});
    const auto report = run_paper_suite(cfg, out_dir);
    std::cout << render_report(report) << "\n";
    return report_claims_hold(report, std::cout) ? kOk : kCriterionFailed;
}

int cmd_commute(const GlobalFlags& g, const fs::path& config, std::optional<double> t_end) {
    auto cfg = load_commute(config);
    if (g.dt) cfg.dt = *g.dt;
    if (t_end) cfg.t_end = *t_end;
    const auto res = commute_check(cfg);
    for (const auto& p : res.points)
        std::cout << "u=" << format_double(p.u) << " w=" << format_double(p.w) << " y_sim=" << format_double(p.y_sim)
                  << " y_ss=" << format_double(p.y_ss) << "\n";
    std::cout << "max_dev=" << format_double(res.max_dev) << " tolerance=" << format_double(cfg.tolerance) << " "
              << (res.pass ? "pass" : "fail") << "\n";
    return res.pass ? kOk : kCriterionFailed;
}

int cmd_acceptance(const GlobalFlags& g, const fs::path& config, const fs::path& scratch) {
    AcceptanceOptions opts;
    opts.suite_config = config;
    opts.seed = g.seed.value_or(42);
    opts.scratch_dir = scratch;
    bool ok = true;
    for (const auto& r : run_acceptance(opts)) {
        std::cout << format_criterion(r) << "\n";
        ok = ok && r.pass;
    }
    return ok ? kOk : kCriterionFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-loop steady-state modelling lab: control confounding and disturbance adjustment"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags flags;
    std::uint64_t seed = 0;
    double dt = 0.0;
    auto* seed_opt = app.add_option("--seed", seed, "Override the scenario seed");
    auto* dt_opt = app.add_option("--dt", dt, "Override the integration step")->check(CLI::PositiveNumber);

    fs::path config, out_dir, traj_path, dataset_path, graph_path, scratch;
    std::optional<fs::path> out_file;
    std::string method = "adjusted", treatment = "u", outcome = "y";
    std::vector<std::string> adjust;
    double lambda_c = 1.0, lambda_w = 1.0, smoothness = 0.0;
    std::optional<double> t_end;
    bool list_sets = false;

    auto* sim = app.add_subcommand("simulate", "Run one scenario and export trajectory, dataset and fits");
    sim->add_option("--config", config, "Scenario JSON")->required()->check(CLI::ExistingFile);
    sim->add_option("--out", out_dir, "Output directory")->required();

    auto* det = app.add_subcommand("detect", "Detect steady-state periods in a trajectory CSV");
    det->add_option("--traj", traj_path, "Trajectory CSV")->required()->check(CLI::ExistingFile);
    det->add_option("--config", config, "Scenario or detection JSON")->required()->check(CLI::ExistingFile);
    det->add_option("--out", out_file, "Dataset CSV (stdout when omitted)");

    auto* fit = app.add_subcommand("fit", "Fit a steady-state model to a dataset CSV");
    fit->add_option("--dataset", dataset_path, "Dataset CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--method", method, "naive | adjusted | adjusted-reg")
        ->check(CLI::IsMember({"naive", "adjusted", "adjusted-reg"}));
    fit->add_option("--lambda-c", lambda_c, "Precision on c (adjusted-reg)")->check(CLI::NonNegativeNumber);
    fit->add_option("--lambda-w", lambda_w, "Precision on w_hat (adjusted-reg)")->check(CLI::NonNegativeNumber);
    fit->add_option("--smoothness", smoothness, "Second-difference weight on w_hat (adjusted-reg)")
        ->check(CLI::NonNegativeNumber);
    fit->add_option("--out", out_file, "Fit file (stdout when omitted)");

    auto* gc = app.add_subcommand("graph-check", "Check a backdoor adjustment set on an edge-list graph");
    gc->add_option("--graph", graph_path, "Graph file")->required()->check(CLI::ExistingFile);
    gc->add_option("--treatment", treatment, "Treatment node");
    gc->add_option("--outcome", outcome, "Outcome node");
    gc->add_option("--adjust", adjust, "Adjustment set (comma separated)")->delimiter(',');
    gc->add_flag("--list-sets", list_sets, "Enumerate every admissible set");

    auto* suite = app.add_subcommand("suite", "Run the open-loop, feedforward and feedback scenarios");
    suite->add_option("--out", out_dir, "Output directory")->required();
    suite->add_option("--config", config, "Suite JSON")->check(CLI::ExistingFile);

    auto* commute = app.add_subcommand("commute-check", "Compare simulated do(u) equilibria with the steady-state map");
    commute->add_option("--config", config, "Commute JSON")->check(CLI::ExistingFile);
    commute->add_option("--t-end", t_end, "Override the horizon");

    auto* acc = app.add_subcommand("acceptance", "Run every acceptance criterion; nonzero exit on failure");
    acc->add_option("--config", config, "Suite JSON")->check(CLI::ExistingFile);
    acc->add_option("--scratch", scratch, "Scratch directory for the determinism runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }
    if (*seed_opt) flags.seed = seed;
    if (*dt_opt) flags.dt = dt;

    try {
        if (*sim) return cmd_simulate(flags, config, out_dir);
        if (*det) return cmd_detect(traj_path, config, out_file);
        if (*fit) return cmd_fit(dataset_path, method, lambda_c, lambda_w, smoothness, out_file);
        if (*gc) return cmd_graph_check(graph_path, treatment, outcome, adjust, list_sets);
        if (*suite) return cmd_suite(flags, config.empty() ? kDefaultConfigDir / "suite.json" : config, out_dir);
        if (*commute) return cmd_commute(flags, config.empty() ? kDefaultConfigDir / "commute.json" : config, t_end);
        if (*acc) {
            std::cerr << "kernels: " << kernels::to_string(kernels::active().isa) << "\n";
            return cmd_acceptance(flags, config.empty() ? kDefaultConfigDir / "suite.json" : config,
                                  scratch.empty() ? fs::temp_directory_path() / "confound_acceptance" : scratch);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
    return kOk;
}
