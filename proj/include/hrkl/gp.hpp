#pragma once

#include "hrkl/kernel_grammar.hpp"
#include "hrkl/series.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hrkl {

/// Hyperparameters aligned with `param_layout(e)`. Scale parameters (signal
/// variance, lengthscale, period, noise variance) are stored as logs; the
/// LIN shift is stored as is.
using HyperParams = Eigen::VectorXd;

/// K[i][j] = k_e(x_i, x_j) + noise * [i == j]. Throws NumericError if any
/// entry is non-finite.
Eigen::MatrixXd covariance(const KernelExpr& e, const HyperParams& theta, std::span<const double> x);

/// Covariance together with dK/dtheta_p for every hyperparameter p.
struct CovarianceDerivatives {
    Eigen::MatrixXd K;
    std::vector<Eigen::MatrixXd> dK;
};

CovarianceDerivatives covariance_with_derivatives(const KernelExpr& e, const HyperParams& theta,
                                                  std::span<const double> x);

/// Cholesky of K with diagonal jitter escalation: none, then 1e-8, 1e-7, ...,
/// 1e-2. Throws NumericError when every level fails.
struct JitteredCholesky {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
};

JitteredCholesky factorize(const Eigen::MatrixXd& K);

/// Zero-mean Gaussian log density of y under covariance K (nats).
double gaussian_log_density(const Eigen::MatrixXd& K, const Eigen::VectorXd& y);

double log_marginal_likelihood(const KernelExpr& e, const HyperParams& theta, const TimeSeries& series);

/// Analytic gradient of the log marginal likelihood with respect to theta in
/// the stored (log) parameterization.
Eigen::VectorXd lml_gradient(const KernelExpr& e, const HyperParams& theta, const TimeSeries& series);

/// BIC = -2 lml + param_count * log(n).
double bic(double lml, std::size_t param_count, std::size_t n);

struct FitConfig {
    int restarts = 3;
    int max_iters = 200;
    double tol = 1e-6;         // relative change of lml between iterations
    double grad_tol = 1e-5;    // projected-gradient infinity norm
    std::uint64_t seed = 0;
};

struct FittedModel {
    std::string kernel;  // canonical string
    HyperParams params;
    double lml = 0.0;
    double bic = 0.0;
    std::size_t param_count = 0;
    int restarts_used = 0;      // restarts that completed without numeric failure
    double initial_lml = 0.0;   // lml at the winning restart's starting point
    int iterations = 0;         // iterations of the winning restart
};

/// Random restart point drawn from the initialization priors.
HyperParams draw_initial_params(const ParamLayout& layout, std::uint64_t seed);

/// Box the optimizer keeps each parameter inside.
std::pair<double, double> param_bounds(ParamRole role) noexcept;

/// Best-of-restarts maximization of the log marginal likelihood. Throws
/// FitError when every restart fails numerically.
FittedModel fit(const KernelExpr& e, const TimeSeries& series, const FitConfig& config);

}  // namespace hrkl
