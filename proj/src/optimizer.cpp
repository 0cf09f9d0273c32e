#include "hrkl/optimizer.hpp"

#include <cmath>
#include <deque>

namespace hrkl {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 40;
// A stalled objective counts as converged once the gradient is this small,
// or after this many stalled iterations in a row.
constexpr double kStallGradTol = 1e-3;
constexpr int kStallLimit = 10;

Eigen::VectorXd clamp(const Eigen::VectorXd& x, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
    Eigen::VectorXd out = x.cwiseMax(lo).cwiseMin(hi);
    // Snap near-bound coordinates so the active set is detected exactly.
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (out[i] - lo[i] < 1e-10) out[i] = lo[i];
        if (hi[i] - out[i] < 1e-10) out[i] = hi[i];
    }
    return out;
}

struct Pair {
    Eigen::VectorXd s, y;
    double rho;
};

}  // namespace

Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                                   const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
    Eigen::VectorXd pg = g;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        // Minimizing: a positive gradient at the lower bound points outward.
        if (x[i] <= lower[i] && g[i] > 0) pg[i] = 0;
        if (x[i] >= upper[i] && g[i] < 0) pg[i] = 0;
    }
    return pg;
}

std::optional<MinimizerResult> minimize_box(const Objective& objective, Eigen::VectorXd x0,
                                            const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                            const MinimizerOptions& options) {
    Eigen::VectorXd x = clamp(x0, lower, upper);
    auto start = objective.value_and_grad(x);
    if (!start || !std::isfinite(start->first) || !start->second.allFinite()) return std::nullopt;
    double f = start->first;
    Eigen::VectorXd g = start->second;

    MinimizerResult result;
    std::deque<Pair> memory;

    int iter = 0;
    int stalled = 0;
    for (; iter < options.max_iters; ++iter) {
        const Eigen::VectorXd pg = projected_gradient(x, g, lower, upper);
        if (pg.lpNorm<Eigen::Infinity>() < options.grad_tol) {
            result.converged = true;
            break;
        }

        // Two-loop recursion restricted to the coordinates off their bounds.
        Eigen::VectorXd free = Eigen::VectorXd::Ones(x.size());
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x[i] <= lower[i] || x[i] >= upper[i]) free[i] = 0;
        std::vector<Pair> active;
        for (const auto& p : memory) {
            Pair r{p.s.cwiseProduct(free), p.y.cwiseProduct(free), 0.0};
            const double sy = r.s.dot(r.y);
            if (sy > 1e-12 * std::max(1.0, r.y.squaredNorm())) {
                r.rho = 1.0 / sy;
                active.push_back(std::move(r));
            }
        }
        Eigen::VectorXd q = pg.cwiseProduct(free);
        std::vector<double> alpha(active.size());
        for (std::size_t i = active.size(); i-- > 0;) {
            alpha[i] = active[i].rho * active[i].s.dot(q);
            q -= alpha[i] * active[i].y;
        }
        if (!active.empty()) {
            const auto& last = active.back();
            q *= last.s.dot(last.y) / last.y.squaredNorm();
        } else {
            q /= std::max(1.0, pg.lpNorm<Eigen::Infinity>());
        }
        for (std::size_t i = 0; i < active.size(); ++i) {
            const double beta = active[i].rho * active[i].y.dot(q);
            q += active[i].s * (alpha[i] - beta);
        }
        // Bound coordinates pulled inward move along steepest descent.
        for (Eigen::Index i = 0; i < x.size(); ++i)
            if (free[i] == 0) q[i] = pg[i] / std::max(1.0, pg.lpNorm<Eigen::Infinity>());
        Eigen::VectorXd d = -q;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if ((x[i] <= lower[i] && d[i] < 0) || (x[i] >= upper[i] && d[i] > 0)) d[i] = 0;
        }
        if (!(d.dot(pg) < 0)) {
            memory.clear();
            d = -pg / std::max(1.0, pg.lpNorm<Eigen::Infinity>());
        }
        const double biggest = d.lpNorm<Eigen::Infinity>();
        if (biggest > options.max_step) d *= options.max_step / biggest;

        double t = 1.0;
        bool accepted = false;
        Eigen::VectorXd x_new;
        double f_new = 0.0;
        for (int k = 0; k < kMaxBacktracks; ++k, t *= 0.5) {
            x_new = clamp(x + t * d, lower, upper);
            const double decrease = g.dot(x_new - x);
            auto v = objective.value(x_new);
            if (v && std::isfinite(*v) && *v <= f + kArmijo * decrease) {
                f_new = *v;
                accepted = true;
                break;
            }
        }
        if (!accepted && !memory.empty()) {
            // Stale curvature pairs; retry from steepest descent.
            memory.clear();
            continue;
        }
        if (!accepted) {
            result.converged = true;
            break;
        }

        auto vg = objective.value_and_grad(x_new);
        if (!vg || !vg->second.allFinite()) break;
        f_new = vg->first;
        const Eigen::VectorXd g_new = vg->second;

        const Eigen::VectorXd s = x_new - x;
        const Eigen::VectorXd y = g_new - g;
        const double sy = s.dot(y);
        if (sy > 1e-12 * std::max(1.0, y.squaredNorm())) {
            memory.push_back({s, y, 1.0 / sy});
            if (static_cast<int>(memory.size()) > options.memory) memory.pop_front();
        }

        const double change = std::abs(f - f_new);
        x = x_new;
        g = g_new;
        const double f_old = f;
        f = f_new;
        stalled = change <= options.rel_tol * std::max(1.0, std::abs(f_old)) ? stalled + 1 : 0;
        if (stalled >= kStallLimit ||
            (stalled > 0 && projected_gradient(x, g, lower, upper).lpNorm<Eigen::Infinity>() < kStallGradTol)) {
            ++iter;
            result.converged = true;
            break;
        }
    }

    result.x = std::move(x);
    result.f = f;
    result.grad = std::move(g);
    result.iterations = iter;
    return result;
}

}  // namespace hrkl
