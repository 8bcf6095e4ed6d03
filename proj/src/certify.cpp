#include "landscape/certify.hpp"

#include <algorithm>
#include <cmath>

#include "landscape/deep.hpp"

namespace landscape {

std::vector<Matrix> fd_gradient(const LossFn& loss_fn, const std::vector<Matrix>& point,
                                double h) {
    if (h <= 0.0) throw InvalidInput("fd_gradient: h must be positive");
    std::vector<Matrix> grads;
    grads.reserve(point.size());
    std::vector<Matrix> work = point;
    for (std::size_t w = 0; w < point.size(); ++w) {
        Matrix g(point[w].rows(), point[w].cols());
        for (Index i = 0; i < g.rows(); ++i) {
            for (Index j = 0; j < g.cols(); ++j) {
                const double saved = work[w](i, j);
                work[w](i, j) = saved + h;
                const double up = loss_fn(work);
                work[w](i, j) = saved - h;
                const double down = loss_fn(work);
                work[w](i, j) = saved;
                g(i, j) = (up - down) / (2.0 * h);
            }
        }
        grads.push_back(std::move(g));
    }
    return grads;
}

Certificate certify_critical(const LossFn& loss_fn, const GradFn& grad_fn,
                             const std::vector<Matrix>& point, double tol) {
    std::vector<Matrix> closed = grad_fn(point);
    std::vector<Matrix> fd = fd_gradient(loss_fn, point);
    if (closed.size() != fd.size())
        throw GradientMismatch("certify_critical: gradient count mismatch");

    double closed_norm = 0.0, diff_norm = 0.0;
    double max_grad = 0.0;
    for (std::size_t w = 0; w < closed.size(); ++w) {
        closed_norm = std::hypot(closed_norm, closed[w].norm());
        diff_norm = std::hypot(diff_norm, (closed[w] - fd[w]).norm());
        max_grad = std::max(max_grad, closed[w].norm());
    }
    // fd carries O(h^2) truncation plus roundoff amplified by 1/h; give
    // the comparison an absolute floor at that noise scale.
    const double fd_floor = 1e-7 * (1.0 + std::abs(loss_fn(point)));
    if (diff_norm > 1e-4 * closed_norm + fd_floor)
        throw GradientMismatch("certify_critical: closed-form and finite-difference gradients "
                               "disagree (" + std::to_string(diff_norm) + " vs norm " +
                               std::to_string(closed_norm) + ")");

    Certificate cert;
    cert.max_grad_norm = max_grad;
    cert.tol_used = tol;
    cert.critical = max_grad <= tol;
    return cert;
}

namespace {

double gd_step_size(double x_norm2, double weight_scale) {
    // Conservative inverse-curvature estimate for the bilinear chain.
    return 0.2 / (x_norm2 * (1.0 + weight_scale) + 1.0);
}

} // namespace

GdResult gd_probe(const ShallowInstance& inst, std::uint64_t seed, long max_steps,
                  double grad_target) {
    Matrix a1 = 0.3 * random_gaussian(inst.d1, inst.d0(), seed);
    Matrix a2 = 0.3 * random_gaussian(inst.d2(), inst.d1, seed ^ 0x1234567fULL);

    const double x_norm2 = inst.x.squaredNorm();
    double lr = gd_step_size(x_norm2, a1.squaredNorm() + a2.squaredNorm() + inst.y.norm());

    GdResult res;
    double best_loss = loss(a1, a2, inst);
    for (long step = 0; step < max_steps; ++step) {
        auto [g1, g2] = gradients(a1, a2, inst);
        const double gn = std::max(g1.norm(), g2.norm());
        if (gn <= grad_target) {
            res.converged = true;
            res.final_grad_norm = gn;
            res.steps = step;
            break;
        }
        a1 -= lr * g1;
        a2 -= lr * g2;
        if (step % 1024 == 0) {
            const double cur = loss(a1, a2, inst);
            if (!std::isfinite(cur) || cur > 10.0 * best_loss + 10.0) {
                // Diverging: restart from a smaller step.
                lr *= 0.5;
                a1 = 0.3 * random_gaussian(inst.d1, inst.d0(), seed);
                a2 = 0.3 * random_gaussian(inst.d2(), inst.d1, seed ^ 0x1234567fULL);
                best_loss = loss(a1, a2, inst);
            } else {
                best_loss = std::min(best_loss, cur);
            }
        }
        res.steps = step + 1;
    }
    if (!res.converged) {
        auto [g1, g2] = gradients(a1, a2, inst);
        res.final_grad_norm = std::max(g1.norm(), g2.norm());
    }
    res.a1 = std::move(a1);
    res.a2 = std::move(a2);
    return res;
}

GdDeepResult gd_probe_deep(const DeepInstance& inst, std::uint64_t seed, long max_steps,
                           double grad_target) {
    const Index ell = inst.ell();
    std::vector<Matrix> w;
    double weight_scale = 0.0;
    for (Index k = 1; k <= ell; ++k) {
        w.push_back(0.4 * random_gaussian(inst.d(k), inst.d(k - 1), seed + 977 * k));
        weight_scale += w.back().squaredNorm();
    }
    double lr = gd_step_size(inst.x.squaredNorm(), weight_scale + inst.y.norm());

    GdDeepResult res;
    double best_loss = deep_loss(w, inst);
    for (long step = 0; step < max_steps; ++step) {
        std::vector<Matrix> g = deep_gradients(w, inst);
        double gn = 0.0;
        for (const auto& gk : g) gn = std::max(gn, gk.norm());
        if (gn <= grad_target) {
            res.converged = true;
            res.final_grad_norm = gn;
            res.steps = step;
            break;
        }
        for (Index k = 0; k < ell; ++k) w[k] -= lr * g[k];
        if (step % 1024 == 0) {
            const double cur = deep_loss(w, inst);
            if (!std::isfinite(cur) || cur > 10.0 * best_loss + 10.0) {
                lr *= 0.5;
                for (Index k = 1; k <= ell; ++k)
                    w[k - 1] = 0.4 * random_gaussian(inst.d(k), inst.d(k - 1), seed + 977 * k);
                best_loss = deep_loss(w, inst);
            } else {
                best_loss = std::min(best_loss, cur);
            }
        }
        res.steps = step + 1;
    }
    if (!res.converged) {
        std::vector<Matrix> g = deep_gradients(w, inst);
        for (const auto& gk : g) res.final_grad_norm = std::max(res.final_grad_norm, gk.norm());
    }
    res.weights = std::move(w);
    return res;
}

namespace {

double eckart_young(const GroupedSVD& sigma, double trace_yyt, Index budget) {
    Vector lam = sigma.expanded();
    const Index take = std::min(budget, sigma.positive_total());
    double captured = 0.0;
    for (Index i = 0; i < take; ++i) captured += lam(i);
    return 0.5 * (trace_yyt - captured);
}

} // namespace

double global_min_value(const ShallowInstance& inst) {
    return eckart_young(inst.sigma, inst.y.squaredNorm(), inst.rank_budget());
}

double global_min_value(const DeepInstance& inst) {
    GroupedSVD sigma0 = sigma_k({}, inst, 0);
    return eckart_young(sigma0, inst.y.squaredNorm(), inst.rank_budget());
}

} // namespace landscape
