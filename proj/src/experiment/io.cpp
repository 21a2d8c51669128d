#include "confound/io.hpp"

#include "confound/error.hpp"
#include "confound/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace confound {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    for (auto line : split(text, '\n')) {
        line = strip(line);
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

std::size_t parse_size(std::string_view s) {
    s = strip(s);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw Error(ErrorCode::ConfigParse, "not an integer: '" + std::string(s) + "'");
    return v;
}

void append(std::string& out, double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

std::string fmt_fixed(double v, int digits = 4) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << v;
    return s.str();
}

}  // namespace

std::string format_double(double v) {
    std::string out;
    append(out, v);
    return out;
}

double parse_double(std::string_view s) {
    s = strip(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw Error(ErrorCode::ConfigParse, "not a number: '" + std::string(s) + "'");
    return v;
}

std::string format_trajectory_csv(const Trajectory& traj) {
    std::string out = "t,";
    if (traj.state_dim == 1) {
        out += "x,";
    } else {
        for (std::size_t j = 0; j < traj.state_dim; ++j) out += "x_" + std::to_string(j) + ",";
    }
    out += "u,w,y,y_r\n";
    out.reserve(out.size() + traj.size() * 80);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        append(out, traj.t[i]);
        for (std::size_t j = 0; j < traj.state_dim; ++j) {
            out += ',';
            append(out, traj.x[i * traj.state_dim + j]);
        }
        for (const auto* ch : {&traj.u, &traj.w, &traj.y, &traj.y_r}) {
            out += ',';
            append(out, (*ch)[i]);
        }
        out += '\n';
    }
    return out;
}

Trajectory parse_trajectory_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty()) throw Error(ErrorCode::ConfigParse, "trajectory CSV is empty");
    const auto header = split(lines[0], ',');
    if (header.size() < 6 || strip(header[0]) != "t")
        throw Error(ErrorCode::ConfigParse, "trajectory header must start with t and have 6+ columns");
    const std::size_t state_dim = header.size() - 5;
    const std::vector<std::string_view> tail{"u", "w", "y", "y_r"};
    for (std::size_t k = 0; k < 4; ++k)
        if (strip(header[1 + state_dim + k]) != tail[k])
            throw Error(ErrorCode::ConfigParse, "unexpected trajectory header column");
    if (state_dim == 1 && strip(header[1]) != "x")
        throw Error(ErrorCode::ConfigParse, "expected column x");

    Trajectory traj;
    traj.state_dim = state_dim;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split(lines[r], ',');
        if (cells.size() != header.size())
            throw Error(ErrorCode::ConfigParse, "row " + std::to_string(r) + " has wrong column count");
        traj.t.push_back(parse_double(cells[0]));
        for (std::size_t j = 0; j < state_dim; ++j) traj.x.push_back(parse_double(cells[1 + j]));
        traj.u.push_back(parse_double(cells[1 + state_dim]));
        traj.w.push_back(parse_double(cells[2 + state_dim]));
        traj.y.push_back(parse_double(cells[3 + state_dim]));
        traj.y_r.push_back(parse_double(cells[4 + state_dim]));
    }
    if (traj.size() > 1) traj.dt = traj.t[1] - traj.t[0];
    try {
        traj.check_invariants();
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigParse, e.what());
    }
    return traj;
}

std::string format_dataset_csv(const SteadyStateDataset& ds) {
    std::string out = "t_mid,u_mean,y_mean,w_mean,n_samples\n";
    for (const auto& r : ds.rows) {
        append(out, r.t_mid);
        out += ',';
        append(out, r.u_mean);
        out += ',';
        append(out, r.y_mean);
        out += ',';
        append(out, r.w_mean);
        out += ',';
        out += std::to_string(r.n_samples);
        out += '\n';
    }
    return out;
}

SteadyStateDataset parse_dataset_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines[0] != "t_mid,u_mean,y_mean,w_mean,n_samples")
        throw Error(ErrorCode::ConfigParse, "dataset header must be t_mid,u_mean,y_mean,w_mean,n_samples");
    SteadyStateDataset ds;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto cells = split(lines[r], ',');
        if (cells.size() != 5)
            throw Error(ErrorCode::ConfigParse, "dataset row " + std::to_string(r) + " needs 5 columns");
        ds.rows.push_back({parse_double(cells[0]), parse_double(cells[1]), parse_double(cells[2]),
                           parse_double(cells[3]), parse_size(cells[4])});
    }
    return ds;
}

std::string format_fit(const NaiveFit& fit) {
    std::string out = "model: naive\n";
    out += "c0: " + format_double(fit.c0) + "\n";
    out += "c1: " + format_double(fit.c1) + "\n";
    out += "residual_sse: " + format_double(fit.residual_sse) + "\n";
    return out;
}

std::string format_fit(const AdjustedFit& fit, std::string_view model) {
    std::string out = "model: " + std::string(model) + "\n";
    out += "c: " + format_double(fit.c) + "\n";
    out += "w_hat: ";
    for (std::size_t i = 0; i < fit.w_hat.size(); ++i) {
        if (i) out += ',';
        append(out, fit.w_hat[i]);
    }
    out += "\n";
    out += "w_hat_mean: " + format_double(fit.w_hat_mean) + "\n";
    out += "residual_sse: " + format_double(fit.residual_sse) + "\n";
    return out;
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> out;
    for (auto line : lines_of(text)) {
        const auto colon = line.find(':');
        if (colon == std::string_view::npos)
            throw Error(ErrorCode::ConfigParse, "expected 'key: value', got '" + std::string(line) + "'");
        out[std::string(strip(line.substr(0, colon)))] = std::string(strip(line.substr(colon + 1)));
    }
    return out;
}

std::string format_plot_csv(const SteadyStateDataset& ds, const AdjustedFit& fit) {
    std::string out = "t_mid,u_mean,y_mean,w_mean,w_hat,y_adjusted_at_mean\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& r = ds.rows[i];
        for (double v : {r.t_mid, r.u_mean, r.y_mean, r.w_mean}) {
            append(out, v);
            out += ',';
        }
        append(out, i < fit.w_hat.size() ? fit.w_hat[i] : std::nan(""));
        out += ',';
        append(out, predict_interventional(fit, r.u_mean));
        out += '\n';
    }
    return out;
}

std::string render_report(const ExperimentReport& report) {
    std::ostringstream s;
    s << "# Control-confounding suite (seed " << report.seed << ")\n\n";
    s << "| scenario | rows | true gain | naive c1 | adjusted c | smoothed c | naive err | adjusted err "
         "| smoothed err | r(w_hat, w) |\n";
    s << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& sc : report.scenarios) {
        s << "| " << sc.name << " | " << sc.rows << " | " << fmt_fixed(sc.true_gain) << " | "
          << fmt_fixed(sc.naive.c1) << " | " << fmt_fixed(sc.adjusted.c) << " | "
          << fmt_fixed(sc.smoothed.c) << " | " << fmt_fixed(sc.naive_error) << " | "
          << fmt_fixed(sc.adjusted_error) << " | " << fmt_fixed(sc.smoothed_error) << " | "
          << (sc.alignment ? fmt_fixed(sc.alignment->pearson_r) : std::string("n/a")) << " |\n";
    }
    s << "\n## Slopes within disturbance bins\n\n";
    s << "| scenario | grouping | pooled c1 | bin slopes (count) |\n|---|---|---|---|\n";
    for (const auto& sc : report.scenarios) {
        for (const auto* groups : {&sc.simpson, &sc.simpson_w_hat}) {
            s << "| " << sc.name << " | " << (groups == &sc.simpson ? "w" : "w_hat") << " | "
              << fmt_fixed(sc.naive.c1) << " | ";
            for (const auto& g : *groups) {
                s << (g.fit ? fmt_fixed(g.fit->c1) : std::string("-")) << " (" << g.count << ") ";
            }
            s << "|\n";
        }
    }
    s << "\n## Equilibrium check under do(u)\n\n";
    s << "max |y_sim - y_ss| = " << format_double(report.commute.max_dev) << " over "
      << report.commute.points.size() << " (u, w) pairs: " << (report.commute.pass ? "pass" : "FAIL")
      << "\n";
    return s.str();
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace confound
