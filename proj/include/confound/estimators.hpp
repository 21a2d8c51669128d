#pragma once

#include "confound/detect.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace confound {

/// y ~ c0 + c1 u by ordinary least squares.
struct NaiveFit {
    double c0 = 0.0;
    double c1 = 0.0;
    double residual_sse = 0.0;
};

/// Disturbance-adjusted steady-state model y_i = c u_i + w_hat_i, with the
/// disturbance expressed in output units.
struct AdjustedFit {
    double c = 0.0;
    std::vector<double> w_hat;
    double w_hat_mean = 0.0;
    double residual_sse = 0.0;  // of y - c u - w_hat; zero up to rounding
};

NaiveFit naive_ols(std::span<const double> u, std::span<const double> y);
NaiveFit naive_ols(const SteadyStateDataset& ds);

/// Minimum-norm solution of the joint (c, w_hat) MAP system
///
///   [ u'u  u' ] [ c     ]   [ u'y ]
///   [ u    I  ] [ w_hat ] = [ y   ]
///
/// which is singular but consistent. Eliminating w_hat = y - c u and
/// minimising c^2 + |w_hat|^2 gives c = u'y / (1 + u'u).
AdjustedFit adjusted_map(std::span<const double> u, std::span<const double> y);
AdjustedFit adjusted_map(const SteadyStateDataset& ds);

/// Minimises lambda_c c^2 + w_hat' (lambda_w I + S) w_hat subject to
/// y = c u + w_hat. S (if given) must be symmetric PSD and n x n.
AdjustedFit adjusted_map_regularized(std::span<const double> u, std::span<const double> y,
                                     double lambda_c, double lambda_w,
                                     const std::optional<Eigen::MatrixXd>& smoothness = std::nullopt);
AdjustedFit adjusted_map_regularized(const SteadyStateDataset& ds, double lambda_c, double lambda_w,
                                     const std::optional<Eigen::MatrixXd>& smoothness = std::nullopt);

/// weight * D'D where D is the (n-2) x n second-difference operator.
Eigen::MatrixXd second_difference_precision(std::size_t n, double weight);

/// Max-norm residual of the block MAP system above at (fit.c, fit.w_hat).
double map_system_residual(std::span<const double> u, std::span<const double> y,
                           const AdjustedFit& fit);

/// Plug-in adjustment: the disturbance distribution is the empirical
/// distribution of w_hat, evaluated at its mean.
struct InterventionalModel {
    double c = 0.0;
    std::vector<double> w_samples;

    [[nodiscard]] double predict(double u) const;
};

InterventionalModel make_interventional_model(const AdjustedFit& fit);
double predict_interventional(const AdjustedFit& fit, double u);

struct GroupFit {
    std::size_t bin = 0;
    double w_low = 0.0;
    double w_high = 0.0;
    std::size_t count = 0;
    std::optional<NaiveFit> fit;  // empty when the bin is degenerate
};

/// Naive regressions within k equal-width bins of w_values.
std::vector<GroupFit> simpson_groups(const SteadyStateDataset& ds, std::span<const double> w_values,
                                     std::size_t k_bins);

struct Alignment {
    double scale = 0.0;
    double offset = 0.0;
    double pearson_r = 0.0;
};

/// Affine least-squares map w_hat ~ scale * w_true + offset, plus correlation.
Alignment disturbance_alignment(std::span<const double> w_hat, std::span<const double> w_true);

}  // namespace confound
