#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>

namespace hrkl {

/// Box-constrained limited-memory quasi-Newton minimizer with backtracking
/// (Armijo) line search. Iterates are projected onto [lower, upper].
struct MinimizerOptions {
    int max_iters = 200;
    double rel_tol = 1e-6;    // stop when |f_k - f_{k+1}| <= rel_tol * max(1, |f_k|)
    double grad_tol = 1e-5;   // stop when the projected gradient inf-norm falls below
    int memory = 8;
    double max_step = 2.0;    // cap on any coordinate change per iteration
};

struct MinimizerResult {
    Eigen::VectorXd x;
    double f = 0.0;
    Eigen::VectorXd grad;
    int iterations = 0;
    bool converged = false;
};

/// `value` returns nullopt where the objective cannot be evaluated; `value_and_grad`
/// must succeed at any point `value` accepted.
struct Objective {
    std::function<std::optional<double>(const Eigen::VectorXd&)> value;
    std::function<std::optional<std::pair<double, Eigen::VectorXd>>(const Eigen::VectorXd&)> value_and_grad;
};

/// Returns nullopt if the objective fails at the (projected) start point.
std::optional<MinimizerResult> minimize_box(const Objective& objective, Eigen::VectorXd x0,
                                            const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                            const MinimizerOptions& options = {});

/// Gradient with components that point out of the box at an active bound zeroed.
Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

}  // namespace hrkl
