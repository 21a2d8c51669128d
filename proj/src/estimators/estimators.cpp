#include "confound/estimators.hpp"

#include "confound/error.hpp"
#include "confound/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace confound {

namespace {

void require_aligned(std::span<const double> u, std::span<const double> y) {
    if (u.size() != y.size())
        throw Error(ErrorCode::DimensionMismatch, "u and y lengths differ: " + std::to_string(u.size()) +
                                                      " vs " + std::to_string(y.size()));
}

std::vector<double> centered(std::span<const double> v, double mean) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - mean;
    return out;
}

AdjustedFit finish(std::span<const double> u, std::span<const double> y, double c) {
    AdjustedFit fit;
    fit.c = c;
    fit.w_hat.resize(y.size());
    kernels::residual(y, u, c, fit.w_hat);
    fit.w_hat_mean = kernels::sum(fit.w_hat) / static_cast<double>(fit.w_hat.size());
    double sse = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - c * u[i] - fit.w_hat[i];
        sse += r * r;
    }
    fit.residual_sse = sse;
    return fit;
}

}  // namespace

NaiveFit naive_ols(std::span<const double> u, std::span<const double> y) {
    require_aligned(u, y);
    const std::size_t n = u.size();
    if (n < 2) throw Error(ErrorCode::DegenerateDesign, "need at least 2 rows");
    const double nd = static_cast<double>(n);
    const double u_bar = kernels::sum(u) / nd;
    const double y_bar = kernels::sum(y) / nd;
    const auto uc = centered(u, u_bar);
    const auto yc = centered(y, y_bar);
    const double sxx = kernels::dot(uc, uc);
    if (!(sxx > 0.0) || std::all_of(u.begin(), u.end(), [&](double v) { return v == u[0]; }))
        throw Error(ErrorCode::DegenerateDesign, "u is constant");
    const double sxy = kernels::dot(uc, yc);

    NaiveFit fit;
    fit.c1 = sxy / sxx;
    fit.c0 = y_bar - fit.c1 * u_bar;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - fit.c0 - fit.c1 * u[i];
        sse += r * r;
    }
    fit.residual_sse = sse;
    return fit;
}

NaiveFit naive_ols(const SteadyStateDataset& ds) {
    if (ds.size() < 2) throw Error(ErrorCode::DegenerateDesign, "need at least 2 rows");
    return naive_ols(ds.u(), ds.y());
}

AdjustedFit adjusted_map(std::span<const double> u, std::span<const double> y) {
    require_aligned(u, y);
    if (u.empty()) throw Error(ErrorCode::EmptyDataset, "no rows to fit");
    const double c = kernels::dot(u, y) / (1.0 + kernels::dot(u, u));
    return finish(u, y, c);
}

AdjustedFit adjusted_map(const SteadyStateDataset& ds) {
    if (ds.empty()) throw Error(ErrorCode::EmptyDataset, "no rows to fit");
    return adjusted_map(ds.u(), ds.y());
}

AdjustedFit adjusted_map_regularized(std::span<const double> u, std::span<const double> y,
                                     double lambda_c, double lambda_w,
                                     const std::optional<Eigen::MatrixXd>& smoothness) {
    require_aligned(u, y);
    if (u.empty()) throw Error(ErrorCode::EmptyDataset, "no rows to fit");
    if (!(lambda_c >= 0.0) || !(lambda_w >= 0.0) || !std::isfinite(lambda_c) || !std::isfinite(lambda_w))
        throw Error(ErrorCode::InvalidArgument, "lambda_c and lambda_w must be finite and >= 0");

    // c = u' P y / (lambda_c + u' P u) with P = lambda_w I + S.
    double upy = lambda_w * kernels::dot(u, y);
    double upu = lambda_w * kernels::dot(u, u);
    if (smoothness) {
        const auto& S = *smoothness;
        const auto n = static_cast<Eigen::Index>(u.size());
        if (S.rows() != n || S.cols() != n)
            throw Error(ErrorCode::DimensionMismatch, "smoothness precision must be n x n");
        if (!S.allFinite())
            throw Error(ErrorCode::NonPSDPrecision, "smoothness precision has non-finite entries");
        const double scale = std::max(1.0, S.cwiseAbs().maxCoeff());
        if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
            throw Error(ErrorCode::NonPSDPrecision, "smoothness precision is not symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() < -1e-10 * scale)
            throw Error(ErrorCode::NonPSDPrecision, "smoothness precision is not positive semidefinite");
        const Eigen::Map<const Eigen::VectorXd> uv(u.data(), n);
        const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);
        const Eigen::VectorXd su = S * uv;
        upy += su.dot(yv);
        upu += su.dot(uv);
    }
    const double denom = lambda_c + upu;
    if (!(denom > 0.0))
        throw Error(ErrorCode::DegenerateDesign, "regularized normal equation is singular");
    return finish(u, y, upy / denom);
}

AdjustedFit adjusted_map_regularized(const SteadyStateDataset& ds, double lambda_c, double lambda_w,
                                     const std::optional<Eigen::MatrixXd>& smoothness) {
    if (ds.empty()) throw Error(ErrorCode::EmptyDataset, "no rows to fit");
    return adjusted_map_regularized(ds.u(), ds.y(), lambda_c, lambda_w, smoothness);
}

Eigen::MatrixXd second_difference_precision(std::size_t n, double weight) {
    const auto m = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m, m);
    if (n < 3) return P;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m - 2, m);
    for (Eigen::Index i = 0; i + 2 < m; ++i) {
        D(i, i) = 1.0;
        D(i, i + 1) = -2.0;
        D(i, i + 2) = 1.0;
    }
    P.noalias() = weight * D.transpose() * D;
    return P;
}

double map_system_residual(std::span<const double> u, std::span<const double> y,
                           const AdjustedFit& fit) {
    require_aligned(u, y);
    if (fit.w_hat.size() != u.size())
        throw Error(ErrorCode::DimensionMismatch, "w_hat length differs from dataset");
    const double top = kernels::dot(u, u) * fit.c + kernels::dot(u, fit.w_hat) - kernels::dot(u, y);
    double worst = std::fabs(top);
    for (std::size_t i = 0; i < u.size(); ++i)
        worst = std::max(worst, std::fabs(u[i] * fit.c + fit.w_hat[i] - y[i]));
    return worst;
}

double InterventionalModel::predict(double u) const {
    const double mean =
        w_samples.empty() ? 0.0 : kernels::sum(w_samples) / static_cast<double>(w_samples.size());
    return c * u + mean;
}

InterventionalModel make_interventional_model(const AdjustedFit& fit) {
    return {fit.c, fit.w_hat};
}

double predict_interventional(const AdjustedFit& fit, double u) {
    return fit.c * u + fit.w_hat_mean;
}

std::vector<GroupFit> simpson_groups(const SteadyStateDataset& ds, std::span<const double> w_values,
                                     std::size_t k_bins) {
    if (k_bins < 2) throw Error(ErrorCode::BinMismatch, "need at least 2 bins");
    if (w_values.size() != ds.size())
        throw Error(ErrorCode::BinMismatch, "w_values has " + std::to_string(w_values.size()) +
                                                " entries for " + std::to_string(ds.size()) + " rows");
    std::vector<GroupFit> groups(k_bins);
    if (ds.empty()) return groups;

    const auto [lo_it, hi_it] = std::minmax_element(w_values.begin(), w_values.end());
    const double lo = *lo_it;
    const double width = (*hi_it - lo) / static_cast<double>(k_bins);
    std::vector<std::vector<double>> bu(k_bins), by(k_bins);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        std::size_t b = 0;
        if (width > 0.0)
            b = std::min(k_bins - 1, static_cast<std::size_t>(std::floor((w_values[i] - lo) / width)));
        bu[b].push_back(ds.rows[i].u_mean);
        by[b].push_back(ds.rows[i].y_mean);
    }
    for (std::size_t b = 0; b < k_bins; ++b) {
        auto& g = groups[b];
        g.bin = b;
        g.w_low = lo + width * static_cast<double>(b);
        g.w_high = lo + width * static_cast<double>(b + 1);
        g.count = bu[b].size();
        try {
            g.fit = naive_ols(bu[b], by[b]);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateDesign) throw;
        }
    }
    return groups;
}

Alignment disturbance_alignment(std::span<const double> w_hat, std::span<const double> w_true) {
    if (w_hat.size() != w_true.size() || w_hat.size() < 2)
        throw Error(ErrorCode::DegenerateInput, "need two aligned series of length >= 2");
    const double n = static_cast<double>(w_hat.size());
    const double a_bar = kernels::sum(w_true) / n;
    const double b_bar = kernels::sum(w_hat) / n;
    const auto ac = centered(w_true, a_bar);
    const auto bc = centered(w_hat, b_bar);
    const double saa = kernels::dot(ac, ac);
    if (!(saa > 0.0)) throw Error(ErrorCode::DegenerateInput, "w_true is constant");
    const double sab = kernels::dot(ac, bc);
    const double sbb = kernels::dot(bc, bc);
    Alignment out;
    out.scale = sab / saa;
    out.offset = b_bar - out.scale * a_bar;
    out.pearson_r = sbb > 0.0 ? sab / std::sqrt(saa * sbb) : 0.0;
    return out;
}

}  // namespace confound
