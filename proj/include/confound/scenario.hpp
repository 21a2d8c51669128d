#pragma once

#include "confound/controller.hpp"
#include "confound/detect.hpp"
#include "confound/estimators.hpp"
#include "confound/integrate.hpp"
#include "confound/signal.hpp"
#include "confound/system.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace confound {

/// One closed-loop experiment. Piecewise-constant generators store a stream
/// id in their seed field; the effective seed is derive_seed(seed, stream),
/// so the scenario seed alone determines every random level.
struct ScenarioConfig {
    std::string name = "scenario";
    std::uint64_t seed = 0;
    LinearSystem system = make_example_system();
    Controller controller = OpenLoop{Constant{0.0}};
    SignalGenerator disturbance = Constant{0.0};
    SignalGenerator reference = Constant{0.0};
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
    double t_end = 1.0;
    double dt = 0.05;
    DetectionConfig detection;
};

ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioConfig& cfg);

/// Generator with its stream id replaced by the derived seed.
SignalGenerator seeded(const SignalGenerator& g, std::uint64_t scenario_seed);
Controller seeded(const Controller& c, std::uint64_t scenario_seed);

struct ScenarioResult {
    Trajectory trajectory;
    SteadyStateDataset dataset;
    NaiveFit naive;
    AdjustedFit adjusted;
};

/// integrate -> detect -> naive and adjusted fits.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Trajectory and dataset only, for callers that fit separately.
Trajectory simulate_scenario(const ScenarioConfig& cfg);

struct CommuteConfig {
    LinearSystem system = make_example_system();
    std::vector<double> u_grid{-1.0, 0.0, 1.0};
    std::vector<double> w_grid{-2.0, 0.0, 2.0};
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(1);
    double t_end = 20.0;
    double dt = 0.05;
    double tolerance = 1e-5;
};

struct CommutePoint {
    double u = 0.0;
    double w = 0.0;
    double y_sim = 0.0;
    double y_ss = 0.0;
};

struct CommuteResult {
    double max_dev = 0.0;
    bool pass = false;
    std::vector<CommutePoint> points;
};

CommuteConfig parse_commute(const std::string& json_text);
CommuteConfig load_commute(const std::filesystem::path& path);

/// Holds u fixed (do(u)) and w constant, simulates to t_end and compares the
/// final output with the equilibrium output of the same (u, w).
CommuteResult commute_check(const CommuteConfig& cfg);

struct SuiteConfig {
    std::vector<ScenarioConfig> scenarios;
    CommuteConfig commute;
    std::size_t simpson_bins = 4;
    double smoothness_weight = 10.0;  // second-difference precision on w_hat
};

/// Scenario paths inside the suite file are resolved relative to it.
SuiteConfig load_suite(const std::filesystem::path& path);

struct ScenarioReport {
    std::string name;
    std::size_t rows = 0;
    NaiveFit naive;
    AdjustedFit adjusted;
    AdjustedFit smoothed;
    double true_gain = 0.0;
    double naive_error = 0.0;
    double adjusted_error = 0.0;
    double smoothed_error = 0.0;
    std::vector<GroupFit> simpson;
    std::vector<GroupFit> simpson_w_hat;
    std::optional<Alignment> alignment;
};

struct ExperimentReport {
    std::uint64_t seed = 0;
    std::vector<ScenarioReport> scenarios;
    CommuteResult commute;

    [[nodiscard]] const ScenarioReport* find(const std::string& name) const;
};

struct SuiteOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> dt;
};

SuiteConfig apply_overrides(SuiteConfig cfg, const SuiteOverrides& o);

ScenarioReport summarize(const ScenarioConfig& cfg, const ScenarioResult& result,
                         std::size_t simpson_bins, double smoothness_weight);

/// Runs every scenario plus the commute check. When out_dir is given, each
/// scenario writes into out_dir/<name>/ and the summary goes to
/// out_dir/report.md.
ExperimentReport run_paper_suite(const SuiteConfig& cfg,
                                 const std::optional<std::filesystem::path>& out_dir = std::nullopt);

}  // namespace confound
