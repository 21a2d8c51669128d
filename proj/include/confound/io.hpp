#pragma once

#include "confound/detect.hpp"
#include "confound/estimators.hpp"
#include "confound/integrate.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace confound {

struct ExperimentReport;

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

// Trajectory CSV: t,x,u,w,y,y_r (x_0..x_{n-1} when the state is a vector).
std::string format_trajectory_csv(const Trajectory& traj);
Trajectory parse_trajectory_csv(std::string_view text);

// Dataset CSV: t_mid,u_mean,y_mean,w_mean,n_samples.
std::string format_dataset_csv(const SteadyStateDataset& ds);
SteadyStateDataset parse_dataset_csv(std::string_view text);

// Fit export: one "key: value" line per field.
std::string format_fit(const NaiveFit& fit);
std::string format_fit(const AdjustedFit& fit, std::string_view model = "adjusted");
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Tidy per-row data for scatter plots: u, y, w and w_hat with model lines.
std::string format_plot_csv(const SteadyStateDataset& ds, const AdjustedFit& fit);

std::string render_report(const ExperimentReport& report);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace confound
