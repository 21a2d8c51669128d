#include "confound/scenario.hpp"

#include "confound/error.hpp"
#include "confound/io.hpp"

#include <json.hpp>

#include <cmath>

namespace confound {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Eigen::MatrixXd matrix_from(const json& j, const char* name) {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::ConfigParse, std::string(name) + " must be a nested array");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j.at(static_cast<std::size_t>(r));
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw Error(ErrorCode::ConfigParse, std::string(name) + " has ragged rows");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return m;
}

json matrix_to(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

Eigen::VectorXd vector_from(const json& j) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
    return v;
}

LinearSystem system_from(const json& j) {
    if (j.contains("preset")) {
        if (j.at("preset").get<std::string>() == "example") return make_example_system();
        throw Error(ErrorCode::ConfigParse, "unknown system preset");
    }
    return {matrix_from(j.at("A"), "A"), matrix_from(j.at("B"), "B"), matrix_from(j.at("E"), "E"),
            matrix_from(j.at("C"), "C")};
}

json system_to(const LinearSystem& s) {
    return {{"A", matrix_to(s.A())}, {"B", matrix_to(s.B())}, {"E", matrix_to(s.E())}, {"C", matrix_to(s.C())}};
}

SignalGenerator signal_from(const json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "sinusoid")
        return Sinusoid{j.at("amplitude").get<double>(), j.at("angular_frequency").get<double>(),
                        j.value("phase", 0.0)};
    if (type == "piecewise_constant")
        return PiecewiseConstant{j.at("stream").get<std::uint64_t>(), j.at("switch_interval").get<double>(),
                                 j.at("low").get<double>(), j.at("high").get<double>()};
    if (type == "constant") return Constant{j.at("value").get<double>()};
    throw Error(ErrorCode::ConfigParse, "unknown signal type '" + type + "'");
}

json signal_to(const SignalGenerator& g) {
    return std::visit(overloaded{
                          [](const Sinusoid& s) -> json {
                              return {{"type", "sinusoid"}, {"amplitude", s.amplitude},
                                      {"angular_frequency", s.angular_frequency}, {"phase", s.phase}};
                          },
                          [](const PiecewiseConstant& p) -> json {
                              return {{"type", "piecewise_constant"}, {"stream", p.seed},
                                      {"switch_interval", p.switch_interval}, {"low", p.low}, {"high", p.high}};
                          },
                          [](const Constant& c) -> json { return {{"type", "constant"}, {"value", c.value}}; },
                      },
                      g);
}

Controller controller_from(const json& j) {
    const auto type = j.at("type").get<std::string>();
    if (type == "open_loop") return OpenLoop{signal_from(j.at("schedule"))};
    if (type == "feedforward")
        return Feedforward{j.at("reference_gain").get<double>(), j.at("disturbance_gain").get<double>(),
                           j.value("bias", 0.0)};
    if (type == "p_feedback") return PFeedback{j.at("kp").get<double>()};
    throw Error(ErrorCode::ConfigParse, "unknown controller type '" + type + "'");
}

json controller_to(const Controller& c) {
    return std::visit(overloaded{
                          [](const OpenLoop& o) -> json {
                              return {{"type", "open_loop"}, {"schedule", signal_to(o.schedule)}};
                          },
                          [](const Feedforward& f) -> json {
                              return {{"type", "feedforward"}, {"reference_gain", f.reference_gain},
                                      {"disturbance_gain", f.disturbance_gain}, {"bias", f.bias}};
                          },
                          [](const PFeedback& p) -> json { return {{"type", "p_feedback"}, {"kp", p.kp}}; },
                      },
                      c);
}

DetectionConfig detection_from(const json& j) {
    DetectionConfig d;
    d.window_len = j.value("window_len", d.window_len);
    d.epsilon = j.value("epsilon", d.epsilon);
    const auto mode = j.value("channel_mode", std::string("state"));
    if (mode == "state") d.channel_mode = ChannelMode::State;
    else if (mode == "measured_io") d.channel_mode = ChannelMode::MeasuredIO;
    else throw Error(ErrorCode::ConfigParse, "channel_mode must be state or measured_io");
    d.validate();
    return d;
}

template <class F>
auto parse_guarded(const std::string& text, F&& f) {
    try {
        return f(json::parse(text));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ConfigParse, e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigParse) throw;
        throw Error(ErrorCode::ConfigParse, e.what());
    }
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    return parse_guarded(json_text, [](const json& j) {
        ScenarioConfig cfg;
        cfg.name = j.value("name", cfg.name);
        cfg.seed = j.value("seed", std::uint64_t{0});
        cfg.system = system_from(j.at("system"));
        cfg.controller = controller_from(j.at("controller"));
        cfg.disturbance = signal_from(j.at("disturbance"));
        cfg.reference = signal_from(j.at("reference"));
        cfg.x0 = j.contains("x0") ? vector_from(j.at("x0")) : Eigen::VectorXd::Zero(cfg.system.states());
        cfg.t_end = j.at("t_end").get<double>();
        cfg.dt = j.at("dt").get<double>();
        cfg.detection = detection_from(j.value("detection", json::object()));
        if (cfg.x0.size() != cfg.system.states())
            throw Error(ErrorCode::ConfigParse, "x0 dimension does not match the system");
        validate(cfg.controller);
        validate(cfg.disturbance);
        validate(cfg.reference);
        return cfg;
    });
}

ScenarioConfig load_scenario(const std::filesystem::path& path) { return parse_scenario(read_text(path)); }

std::string scenario_to_json(const ScenarioConfig& cfg) {
    json x0 = json::array();
    for (Eigen::Index i = 0; i < cfg.x0.size(); ++i) x0.push_back(cfg.x0(i));
    const json j = {
        {"name", cfg.name},
        {"seed", cfg.seed},
        {"system", system_to(cfg.system)},
        {"controller", controller_to(cfg.controller)},
        {"disturbance", signal_to(cfg.disturbance)},
        {"reference", signal_to(cfg.reference)},
        {"x0", x0},
        {"t_end", cfg.t_end},
        {"dt", cfg.dt},
        {"detection",
         {{"window_len", cfg.detection.window_len},
          {"epsilon", cfg.detection.epsilon},
          {"channel_mode", cfg.detection.channel_mode == ChannelMode::State ? "state" : "measured_io"}}},
    };
    return j.dump(2) + "\n";
}

SignalGenerator seeded(const SignalGenerator& g, std::uint64_t scenario_seed) {
    if (const auto* p = std::get_if<PiecewiseConstant>(&g)) {
        PiecewiseConstant out = *p;
        out.seed = derive_seed(scenario_seed, p->seed);
        return out;
    }
    return g;
}

Controller seeded(const Controller& c, std::uint64_t scenario_seed) {
    if (const auto* o = std::get_if<OpenLoop>(&c)) return OpenLoop{seeded(o->schedule, scenario_seed)};
    return c;
}

Trajectory simulate_scenario(const ScenarioConfig& cfg) {
    return integrate(cfg.system, seeded(cfg.controller, cfg.seed), seeded(cfg.disturbance, cfg.seed),
                     seeded(cfg.reference, cfg.seed), cfg.x0, cfg.t_end, cfg.dt);
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    ScenarioResult r;
    r.trajectory = simulate_scenario(cfg);
    r.dataset = detect(r.trajectory, cfg.detection, cfg.name);
    r.naive = naive_ols(r.dataset);
    r.adjusted = adjusted_map(r.dataset);
    return r;
}

CommuteConfig parse_commute(const std::string& json_text) {
    return parse_guarded(json_text, [](const json& j) {
        CommuteConfig cfg;
        if (j.contains("system")) cfg.system = system_from(j.at("system"));
        if (j.contains("u_grid")) cfg.u_grid = j.at("u_grid").get<std::vector<double>>();
        if (j.contains("w_grid")) cfg.w_grid = j.at("w_grid").get<std::vector<double>>();
        cfg.x0 = j.contains("x0") ? vector_from(j.at("x0")) : Eigen::VectorXd::Zero(cfg.system.states());
        cfg.t_end = j.value("t_end", cfg.t_end);
        cfg.dt = j.value("dt", cfg.dt);
        cfg.tolerance = j.value("tolerance", cfg.tolerance);
        return cfg;
    });
}

CommuteConfig load_commute(const std::filesystem::path& path) { return parse_commute(read_text(path)); }

CommuteResult commute_check(const CommuteConfig& cfg) {
    CommuteResult result;
    for (double u : cfg.u_grid) {
        for (double w : cfg.w_grid) {
            const auto traj = integrate(cfg.system, OpenLoop{Constant{u}}, Constant{w}, Constant{0.0}, cfg.x0,
                                        cfg.t_end, cfg.dt);
            CommutePoint p{u, w, traj.y.back(), steady_state_output(cfg.system, u, w)};
            result.max_dev = std::max(result.max_dev, std::fabs(p.y_sim - p.y_ss));
            result.points.push_back(p);
        }
    }
    result.pass = result.max_dev < cfg.tolerance;
    return result;
}

SuiteConfig load_suite(const std::filesystem::path& path) {
    const auto base = path.parent_path();
    return parse_guarded(read_text(path), [&](const json& j) {
        SuiteConfig cfg;
        for (const auto& entry : j.at("scenarios")) cfg.scenarios.push_back(load_scenario(base / entry.get<std::string>()));
        if (j.contains("commute")) cfg.commute = load_commute(base / j.at("commute").get<std::string>());
        cfg.simpson_bins = j.value("simpson_bins", cfg.simpson_bins);
        cfg.smoothness_weight = j.value("smoothness_weight", cfg.smoothness_weight);
        return cfg;
    });
}

const ScenarioReport* ExperimentReport::find(const std::string& name) const {
    for (const auto& s : scenarios)
        if (s.name == name) return &s;
    return nullptr;
}

SuiteConfig apply_overrides(SuiteConfig cfg, const SuiteOverrides& o) {
    for (auto& s : cfg.scenarios) {
        if (o.seed) s.seed = *o.seed;
        if (o.dt) s.dt = *o.dt;
    }
    if (o.dt) cfg.commute.dt = *o.dt;
    return cfg;
}

ScenarioReport summarize(const ScenarioConfig& cfg, const ScenarioResult& result, std::size_t simpson_bins,
                         double smoothness_weight) {
    ScenarioReport rep;
    rep.name = cfg.name;
    rep.rows = result.dataset.size();
    rep.naive = result.naive;
    rep.adjusted = result.adjusted;
    rep.smoothed = adjusted_map_regularized(result.dataset, 1.0, 1.0,
                                            second_difference_precision(rep.rows, smoothness_weight));
    rep.true_gain = steady_state_gain(cfg.system);
    rep.naive_error = std::fabs(rep.naive.c1 - rep.true_gain);
    rep.adjusted_error = std::fabs(rep.adjusted.c - rep.true_gain);
    rep.smoothed_error = std::fabs(rep.smoothed.c - rep.true_gain);
    const auto w_true = result.dataset.w();
    rep.simpson = simpson_groups(result.dataset, w_true, simpson_bins);
    rep.simpson_w_hat = simpson_groups(result.dataset, rep.adjusted.w_hat, simpson_bins);
    try {
        rep.alignment = disturbance_alignment(rep.adjusted.w_hat, w_true);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateInput) throw;
    }
    return rep;
}

ExperimentReport run_paper_suite(const SuiteConfig& cfg, const std::optional<std::filesystem::path>& out_dir) {
    ExperimentReport report;
    if (!cfg.scenarios.empty()) report.seed = cfg.scenarios.front().seed;
    if (out_dir) {
        std::error_code ec;
        std::filesystem::create_directories(*out_dir, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir->string() + ": " + ec.message());
    }
    for (const auto& sc : cfg.scenarios) {
        const auto result = run_scenario(sc);
        auto rep = summarize(sc, result, cfg.simpson_bins, cfg.smoothness_weight);
        if (out_dir) {
            const auto dir = *out_dir / sc.name;
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
            write_text(dir / "config.json", scenario_to_json(sc));
            write_text(dir / "trajectory.csv", format_trajectory_csv(result.trajectory));
            write_text(dir / "dataset.csv", format_dataset_csv(result.dataset));
            write_text(dir / "fit_naive.txt", format_fit(result.naive));
            write_text(dir / "fit_adjusted.txt", format_fit(result.adjusted));
            write_text(dir / "fit_adjusted_smoothed.txt", format_fit(rep.smoothed, "adjusted-reg"));
            write_text(dir / "plot.csv", format_plot_csv(result.dataset, result.adjusted));
        }
        report.scenarios.push_back(std::move(rep));
    }
    report.commute = commute_check(cfg.commute);
    if (out_dir) write_text(*out_dir / "report.md", render_report(report));
    return report;
}

}  // namespace confound
