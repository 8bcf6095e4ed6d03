#ifndef LANDSCAPE_CERTIFY_HPP
#define LANDSCAPE_CERTIFY_HPP

#include <functional>
#include <optional>
#include <vector>

#include "landscape/shallow.hpp"

namespace landscape {

struct DeepInstance;

using LossFn = std::function<double(const std::vector<Matrix>&)>;
using GradFn = std::function<std::vector<Matrix>(const std::vector<Matrix>&)>;

/// Central-difference gradient of an arbitrary matrix-valued loss.
/// Error is O(h^2) for smooth losses.
std::vector<Matrix> fd_gradient(const LossFn& loss_fn, const std::vector<Matrix>& point,
                                double h = 1e-6);

struct Certificate {
    double max_grad_norm = 0.0;
    double tol_used = 0.0;
    bool critical = false;
    // (min loss change over samples, radius) when a probe was run
    std::optional<std::pair<double, double>> probe;
};

/// Evaluates closed-form gradients, cross-checks them against central
/// differences (disagreement beyond 1e-4 relative throws
/// GradientMismatch), and issues the verdict against tol.
Certificate certify_critical(const LossFn& loss_fn, const GradFn& grad_fn,
                             const std::vector<Matrix>& point, double tol);

struct GdResult {
    Matrix a1;
    Matrix a2;
    double final_grad_norm = 0.0;
    bool converged = false;
    long steps = 0;
};

/// Plain fixed-step gradient descent from a random start; an oracle for
/// finding critical points independently of the closed forms.
GdResult gd_probe(const ShallowInstance& inst, std::uint64_t seed, long max_steps = 1000000,
                  double grad_target = 1e-9);

struct GdDeepResult {
    std::vector<Matrix> weights;
    double final_grad_norm = 0.0;
    bool converged = false;
    long steps = 0;
};

GdDeepResult gd_probe_deep(const DeepInstance& inst, std::uint64_t seed,
                           long max_steps = 1000000, double grad_target = 1e-9);

/// Eckart-Young oracle: half of (Tr Y Y^T minus the sum of the largest
/// min(budget, positive count) eigenvalues of Sigma, with multiplicity).
double global_min_value(const ShallowInstance& inst);
double global_min_value(const DeepInstance& inst);

} // namespace landscape

#endif
