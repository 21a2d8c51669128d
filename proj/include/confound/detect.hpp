#pragma once

#include "confound/integrate.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace confound {

enum class ChannelMode {
    State,       // monitor x
    MeasuredIO,  // monitor (u, y) jointly
};

/// window_len is counted in samples, so its duration is (window_len - 1) * dt.
struct DetectionConfig {
    std::size_t window_len = 3;
    double epsilon = 0.05;
    ChannelMode channel_mode = ChannelMode::State;

    void validate() const;
};

/// Closed sample range [start_index, end_index] and its time span.
struct SteadyStatePeriod {
    double t0 = 0.0;
    double tf = 0.0;
    std::size_t start_index = 0;
    std::size_t end_index = 0;

    [[nodiscard]] std::size_t length() const noexcept { return end_index - start_index + 1; }
    friend bool operator==(const SteadyStatePeriod&, const SteadyStatePeriod&) = default;
};

struct DatasetRow {
    double t_mid = 0.0;
    double u_mean = 0.0;
    double y_mean = 0.0;
    double w_mean = 0.0;
    std::size_t n_samples = 0;

    friend bool operator==(const DatasetRow&, const DatasetRow&) = default;
};

struct SteadyStateDataset {
    std::vector<DatasetRow> rows;
    DetectionConfig config;
    std::string source;

    [[nodiscard]] std::size_t size() const noexcept { return rows.size(); }
    [[nodiscard]] bool empty() const noexcept { return rows.empty(); }
    [[nodiscard]] std::vector<double> u() const;
    [[nodiscard]] std::vector<double> y() const;
    [[nodiscard]] std::vector<double> w() const;
};

/// Every window [i, i + window_len - 1] whose monitored channels stay
/// strictly within epsilon (sup-norm over components) of their values at i.
std::vector<SteadyStatePeriod> detect_windows(const Trajectory& traj, const DetectionConfig& cfg);

/// Unions windows that share at least one sample index. Input order does not
/// matter; output is sorted and pairwise disjoint.
std::vector<SteadyStatePeriod> merge_overlapping(std::vector<SteadyStatePeriod> windows);

/// One row per period: channel means and the period's midpoint time.
SteadyStateDataset aggregate(const Trajectory& traj, const std::vector<SteadyStatePeriod>& periods);

/// detect_windows -> merge_overlapping -> aggregate.
SteadyStateDataset detect(const Trajectory& traj, const DetectionConfig& cfg,
                          std::string source = {});

}  // namespace confound
