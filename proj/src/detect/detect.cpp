#include "confound/detect.hpp"

#include "confound/error.hpp"
#include "confound/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace confound {

void DetectionConfig::validate() const {
    if (window_len < 2) throw Error(ErrorCode::InvalidArgument, "window_len must be >= 2");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw Error(ErrorCode::InvalidArgument, "epsilon must be > 0");
}

std::vector<double> SteadyStateDataset::u() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.u_mean);
    return out;
}

std::vector<double> SteadyStateDataset::y() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.y_mean);
    return out;
}

std::vector<double> SteadyStateDataset::w() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.w_mean);
    return out;
}

std::vector<SteadyStatePeriod> detect_windows(const Trajectory& traj, const DetectionConfig& cfg) {
    cfg.validate();
    if (traj.empty()) throw Error(ErrorCode::EmptyTrajectory, "trajectory has no samples");
    traj.check_invariants();
    const std::size_t n = traj.size();
    const std::size_t L = cfg.window_len;
    if (n < L) return {};

    const std::size_t count = n - L + 1;
    std::vector<double> deviation(count, 0.0);
    std::vector<double> scratch(count);
    auto monitor = [&](std::span<const double> channel) {
        kernels::window_max_deviation(channel, L, scratch);
        kernels::max_inplace(deviation, scratch);
    };
    if (cfg.channel_mode == ChannelMode::State) {
        if (traj.state_dim == 1) {
            monitor(traj.x);
        } else {
            for (std::size_t j = 0; j < traj.state_dim; ++j) monitor(traj.state_component(j));
        }
    } else {
        monitor(traj.u);
        monitor(traj.y);
    }

    std::vector<SteadyStatePeriod> windows;
    for (std::size_t i = 0; i < count; ++i) {
        if (deviation[i] < cfg.epsilon)
            windows.push_back({traj.t[i], traj.t[i + L - 1], i, i + L - 1});
    }
    return windows;
}

std::vector<SteadyStatePeriod> merge_overlapping(std::vector<SteadyStatePeriod> windows) {
    std::sort(windows.begin(), windows.end(), [](const auto& a, const auto& b) {
        return a.start_index != b.start_index ? a.start_index < b.start_index
                                              : a.end_index < b.end_index;
    });
    std::vector<SteadyStatePeriod> merged;
    for (const auto& w : windows) {
        if (!merged.empty() && w.start_index <= merged.back().end_index) {
            auto& cur = merged.back();
            if (w.end_index > cur.end_index) {
                cur.end_index = w.end_index;
                cur.tf = w.tf;
            }
        } else {
            merged.push_back(w);
        }
    }
    return merged;
}

SteadyStateDataset aggregate(const Trajectory& traj, const std::vector<SteadyStatePeriod>& periods) {
    traj.check_invariants();
    SteadyStateDataset ds;
    ds.rows.reserve(periods.size());
    std::size_t previous_end = 0;
    for (std::size_t k = 0; k < periods.size(); ++k) {
        const auto& p = periods[k];
        if (p.start_index > p.end_index || p.end_index >= traj.size())
            throw Error(ErrorCode::OutOfBounds,
                        "period [" + std::to_string(p.start_index) + ", " +
                            std::to_string(p.end_index) + "] outside trajectory of " +
                            std::to_string(traj.size()) + " samples");
        if (k > 0 && p.start_index <= previous_end)
            throw Error(ErrorCode::InvalidArgument, "periods must be sorted and disjoint");
        previous_end = p.end_index;

        const std::size_t len = p.length();
        const auto mean = [&](const std::vector<double>& ch) {
            return kernels::sum(std::span<const double>(ch).subspan(p.start_index, len)) /
                   static_cast<double>(len);
        };
        DatasetRow row;
        row.t_mid = 0.5 * (traj.t[p.start_index] + traj.t[p.end_index]);
        row.u_mean = mean(traj.u);
        row.y_mean = mean(traj.y);
        row.w_mean = mean(traj.w);
        row.n_samples = len;
        ds.rows.push_back(row);
    }
    return ds;
}

SteadyStateDataset detect(const Trajectory& traj, const DetectionConfig& cfg, std::string source) {
    auto ds = aggregate(traj, merge_overlapping(detect_windows(traj, cfg)));
    ds.config = cfg;
    ds.source = std::move(source);
    return ds;
}

}  // namespace confound
