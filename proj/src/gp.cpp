#include "hrkl/gp.hpp"

#include "hrkl/errors.hpp"
#include "hrkl/optimizer.hpp"
#include "hrkl/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace hrkl {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

/// Assembles covariance matrices for one input grid. Pairwise distances are
/// computed once and shared by every kernel evaluated on the grid.
class CovarianceBuilder {
public:
    explicit CovarianceBuilder(std::span<const double> x) : x_(x.begin(), x.end()) {
        const auto n = static_cast<Eigen::Index>(x.size());
        // Stationary kernels depend on |x_i - x_j| only; evaluate them once per
        // distinct distance and gather.
        std::vector<double> all;
        all.reserve(static_cast<std::size_t>(n * n));
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) all.push_back(std::abs(x_[i] - x_[j]));
        std::vector<double> uniq = all;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        dist_ = Eigen::Map<const Eigen::ArrayXd>(uniq.data(), static_cast<Eigen::Index>(uniq.size()));
        index_.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const double d = all[static_cast<std::size_t>(i * n + j)];
                index_(i, j) = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), d) - uniq.begin());
            }
    }

    CovarianceDerivatives build(const KernelExpr& e, const HyperParams& theta, bool derivatives) const {
        std::size_t offset = 0;
        CovarianceDerivatives out = node(e, theta, offset, derivatives);
        if (static_cast<Eigen::Index>(offset) + 1 != theta.size())
            throw ValidationError("hyperparameter vector does not match kernel layout");
        const double noise = std::exp(theta[static_cast<Eigen::Index>(offset)]);
        out.K.diagonal().array() += noise;
        if (derivatives) {
            MatrixXd d = MatrixXd::Zero(out.K.rows(), out.K.cols());
            d.diagonal().setConstant(noise);
            out.dK.push_back(std::move(d));
        }
        if (!out.K.allFinite()) {
            std::ostringstream os;
            os << "non-finite covariance for kernel " << canonicalize(e) << " at theta = ["
               << theta.transpose() << "]";
            throw NumericError(os.str());
        }
        return out;
    }

    Eigen::Index size() const noexcept { return index_.rows(); }

private:
    CovarianceDerivatives node(const KernelExpr& e, const HyperParams& theta, std::size_t& offset,
                               bool derivatives) const {
        if (e.op() == KernelExpr::Op::Base) {
            const double* p = theta.data() + offset;
            offset += base_param_count(e.base_kind());
            return leaf(e.base_kind(), p, derivatives);
        }
        CovarianceDerivatives a = node(e.left(), theta, offset, derivatives);
        CovarianceDerivatives b = node(e.right(), theta, offset, derivatives);
        CovarianceDerivatives out;
        if (e.op() == KernelExpr::Op::Sum) {
            out.K = a.K + b.K;
            out.dK = std::move(a.dK);
            for (auto& d : b.dK) out.dK.push_back(std::move(d));
        } else {
            out.K = a.K.cwiseProduct(b.K);
            for (auto& d : a.dK) out.dK.push_back(d.cwiseProduct(b.K));
            for (auto& d : b.dK) out.dK.push_back(d.cwiseProduct(a.K));
        }
        return out;
    }

    MatrixXd gather(const Eigen::ArrayXd& values) const {
        MatrixXd out(index_.rows(), index_.cols());
        for (Eigen::Index j = 0; j < index_.cols(); ++j)
            for (Eigen::Index i = 0; i < index_.rows(); ++i) out(i, j) = values[index_(i, j)];
        return out;
    }

    CovarianceDerivatives leaf(BaseKernel kind, const double* p, bool derivatives) const {
        CovarianceDerivatives out;
        const double var = std::exp(p[0]);
        switch (kind) {
            case BaseKernel::SE: {
                const double ell2 = std::exp(2.0 * p[1]);
                const Eigen::ArrayXd r2 = dist_.square();
                const Eigen::ArrayXd k = var * (-0.5 / ell2 * r2).exp();
                out.K = gather(k);
                if (derivatives) {
                    out.dK.push_back(out.K);
                    out.dK.push_back(gather(k * r2 / ell2));
                }
                break;
            }
            case BaseKernel::PER: {
                const double ell2 = std::exp(2.0 * p[1]);
                const double period = std::exp(p[2]);
                const Eigen::ArrayXd u = (std::numbers::pi / period) * dist_;
                const Eigen::ArrayXd s2 = u.sin().square();
                const Eigen::ArrayXd k = var * (-2.0 / ell2 * s2).exp();
                out.K = gather(k);
                if (derivatives) {
                    out.dK.push_back(out.K);
                    out.dK.push_back(gather(k * (4.0 / ell2) * s2));
                    out.dK.push_back(gather(k * (2.0 / ell2) * u * (2.0 * u).sin()));
                }
                break;
            }
            case BaseKernel::LIN: {
                const double shift = p[1];
                const VectorXd centred = Eigen::Map<const VectorXd>(x_.data(), size()).array() - shift;
                out.K.resize(size(), size());
                for (Eigen::Index j = 0; j < size(); ++j)
                    for (Eigen::Index i = 0; i <= j; ++i) out.K(i, j) = out.K(j, i) = var * (centred[i] * centred[j]);
                if (derivatives) {
                    out.dK.push_back(out.K);
                    MatrixXd d(size(), size());
                    for (Eigen::Index j = 0; j < size(); ++j)
                        for (Eigen::Index i = 0; i < size(); ++i) d(i, j) = -var * (centred[i] + centred[j]);
                    out.dK.push_back(std::move(d));
                }
                break;
            }
        }
        return out;
    }

    std::vector<double> x_;
    Eigen::ArrayXd dist_;                                      // distinct |x_i - x_j|
    Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> index_;  // (i, j) -> dist_ slot
};

Eigen::Map<const VectorXd> as_vector(const TimeSeries& s) {
    return Eigen::Map<const VectorXd>(s.y.data(), static_cast<Eigen::Index>(s.y.size()));
}

double lml_from_factor(const JitteredCholesky& chol, const VectorXd& y, VectorXd* alpha_out) {
    VectorXd alpha = chol.llt.solve(y);
    const MatrixXd& L = chol.llt.matrixLLT();
    const double log_det_half = L.diagonal().array().log().sum();
    const double n = static_cast<double>(y.size());
    const double value = -0.5 * y.dot(alpha) - log_det_half - 0.5 * n * kLog2Pi;
    if (alpha_out) *alpha_out = std::move(alpha);
    return value;
}

struct ValueGrad {
    double lml;
    VectorXd grad;
};

ValueGrad lml_value_and_grad(const CovarianceDerivatives& cov, const VectorXd& y) {
    JitteredCholesky chol = factorize(cov.K);
    VectorXd alpha;
    const double value = lml_from_factor(chol, y, &alpha);
    const auto n = cov.K.rows();
    // K^-1 = L^-T L^-1.
    MatrixXd Linv = MatrixXd::Identity(n, n);
    chol.llt.matrixL().solveInPlace(Linv);
    MatrixXd W = alpha * alpha.transpose();
    W.noalias() -= Linv.transpose() * Linv;
    VectorXd grad(static_cast<Eigen::Index>(cov.dK.size()));
    for (std::size_t p = 0; p < cov.dK.size(); ++p)
        grad[static_cast<Eigen::Index>(p)] = 0.5 * W.cwiseProduct(cov.dK[p]).sum();
    return {value, std::move(grad)};
}

}  // namespace

Eigen::MatrixXd covariance(const KernelExpr& e, const HyperParams& theta, std::span<const double> x) {
    return CovarianceBuilder(x).build(e, theta, false).K;
}

CovarianceDerivatives covariance_with_derivatives(const KernelExpr& e, const HyperParams& theta,
                                                  std::span<const double> x) {
    return CovarianceBuilder(x).build(e, theta, true);
}

JitteredCholesky factorize(const Eigen::MatrixXd& K) {
    JitteredCholesky out;
    out.llt.compute(K);
    auto ok = [&] {
        return out.llt.info() == Eigen::Success && out.llt.matrixLLT().diagonal().allFinite() &&
               (out.llt.matrixLLT().diagonal().array() > 0).all();
    };
    if (ok()) return out;
    for (double jitter = 1e-8; jitter <= 1e-2 * (1 + 1e-9); jitter *= 10) {
        MatrixXd Kj = K;
        Kj.diagonal().array() += jitter;
        out.llt.compute(Kj);
        out.jitter = jitter;
        if (ok()) return out;
    }
    throw NumericError("Cholesky factorization failed after jitter escalation to 1e-2");
}

double gaussian_log_density(const Eigen::MatrixXd& K, const Eigen::VectorXd& y) {
    return lml_from_factor(factorize(K), y, nullptr);
}

double log_marginal_likelihood(const KernelExpr& e, const HyperParams& theta, const TimeSeries& series) {
    const VectorXd y = as_vector(series);
    try {
        return gaussian_log_density(covariance(e, theta, series.x), y);
    } catch (const NumericError& err) {
        throw NumericError(std::string(err.what()) + " (kernel " + canonicalize(e) + ")");
    }
}

Eigen::VectorXd lml_gradient(const KernelExpr& e, const HyperParams& theta, const TimeSeries& series) {
    return lml_value_and_grad(covariance_with_derivatives(e, theta, series.x), as_vector(series)).grad;
}

double bic(double lml, std::size_t param_count, std::size_t n) {
    return -2.0 * lml + static_cast<double>(param_count) * std::log(static_cast<double>(n));
}

std::pair<double, double> param_bounds(ParamRole role) noexcept {
    switch (role) {
        case ParamRole::LogVariance: return {-12.0, 10.0};
        case ParamRole::LogLengthscale: return {-7.0, 7.0};
        case ParamRole::LogPeriod: return {std::log(0.01), 0.0};
        case ParamRole::Shift: return {-5.0, 6.0};
        case ParamRole::LogNoise: return {-14.0, 5.0};
    }
    return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

HyperParams draw_initial_params(const ParamLayout& layout, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    HyperParams theta(static_cast<Eigen::Index>(layout.count()));
    for (std::size_t i = 0; i < layout.count(); ++i) {
        double v = 0.0;
        switch (layout.slots[i].role) {
            case ParamRole::LogVariance: v = gauss(rng); break;
            case ParamRole::LogLengthscale: v = std::log(0.2) + gauss(rng); break;
            case ParamRole::LogPeriod: v = std::log(0.05) + unit(rng) * (std::log(0.5) - std::log(0.05)); break;
            case ParamRole::Shift: v = unit(rng); break;
            case ParamRole::LogNoise: v = std::log(0.1) + gauss(rng); break;
        }
        const auto [lo, hi] = param_bounds(layout.slots[i].role);
        theta[static_cast<Eigen::Index>(i)] = std::clamp(v, lo, hi);
    }
    return theta;
}

FittedModel fit(const KernelExpr& e, const TimeSeries& series, const FitConfig& config) {
    const ParamLayout layout = param_layout(e);
    const auto P = static_cast<Eigen::Index>(layout.count());
    VectorXd lower(P), upper(P);
    for (Eigen::Index i = 0; i < P; ++i)
        std::tie(lower[i], upper[i]) = param_bounds(layout.slots[static_cast<std::size_t>(i)].role);

    const CovarianceBuilder builder(series.x);
    const VectorXd y = as_vector(series);

    Objective objective;
    objective.value = [&](const VectorXd& theta) -> std::optional<double> {
        try {
            return -gaussian_log_density(builder.build(e, theta, false).K, y);
        } catch (const NumericError&) {
            return std::nullopt;
        }
    };
    objective.value_and_grad = [&](const VectorXd& theta) -> std::optional<std::pair<double, VectorXd>> {
        try {
            ValueGrad vg = lml_value_and_grad(builder.build(e, theta, true), y);
            return std::make_pair(-vg.lml, VectorXd(-vg.grad));
        } catch (const NumericError&) {
            return std::nullopt;
        }
    };

    MinimizerOptions options;
    options.max_iters = config.max_iters;
    options.rel_tol = config.tol;
    options.grad_tol = config.grad_tol;

    FittedModel best;
    best.kernel = canonicalize(e);
    best.param_count = layout.count();
    bool have_best = false;
    for (int r = 0; r < config.restarts; ++r) {
        const HyperParams theta0 = draw_initial_params(layout, derive_seed(config.seed, {static_cast<std::uint64_t>(r)}));
        auto init = objective.value(theta0);
        if (!init) continue;
        auto res = minimize_box(objective, theta0, lower, upper, options);
        if (!res || !std::isfinite(res->f)) continue;
        ++best.restarts_used;
        const double lml = -res->f;
        if (!have_best || lml > best.lml) {
            have_best = true;
            best.params = res->x;
            best.lml = lml;
            best.initial_lml = -*init;
            best.iterations = res->iterations;
        }
    }
    if (!have_best) {
        std::ostringstream os;
        os << "all " << config.restarts << " restarts failed for kernel " << best.kernel << " on series '"
           << series.id << "'";
        throw FitError(os.str());
    }
    best.bic = bic(best.lml, best.param_count, series.size());
    return best;
}

}  // namespace hrkl
