#ifndef LANDSCAPE_DEEP_HPP
#define LANDSCAPE_DEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "landscape/shallow.hpp"

namespace landscape {

/// An ell-layer linear chain: weights A_k (d_k x d_{k-1}) fitting Y from X.
struct DeepInstance {
    Matrix x;                 // d0 x m
    Matrix y;                 // dl x m
    std::vector<Index> dims;  // d0 .. dl, ell >= 2
    Matrix x_pinv;
    double group_tol = 1e-8;

    static DeepInstance make(Matrix x, Matrix y, std::vector<Index> dims,
                             double group_tol = 1e-8);

    Index ell() const { return static_cast<Index>(dims.size()) - 1; }
    Index d(Index k) const { return dims[static_cast<std::size_t>(k)]; }
    Index samples() const { return x.cols(); }

    /// min(d1 .. dl): the representation budget of the full product.
    Index rank_budget() const;

    double grad_scale() const { return 1.0 + y.norm() * x.norm(); }
};

/// Descending partial product A_i * ... * A_j (identity when j > i).
Matrix layer_product(const std::vector<Matrix>& weights, Index i, Index j);

double deep_loss(const std::vector<Matrix>& weights, const DeepInstance& inst);

/// Per-layer closed-form gradients.
std::vector<Matrix> deep_gradients(const std::vector<Matrix>& weights, const DeepInstance& inst);

/// Grouped decomposition of Sigma_k = Y (A_(k,1) X)^+ (A_(k,1) X) Y^T.
GroupedSVD sigma_k(const std::vector<Matrix>& weights, const DeepInstance& inst, Index k);

/// Free parameters of one recursion level (k = 0 .. ell-2): the level-k
/// block matrix over Sigma_k's groups, the invertible C_k, and L_{k+1}.
struct DeepLevelSpec {
    BlockPattern pattern;
    std::vector<Matrix> v_blocks;
    Matrix v_bar;
    Matrix c;   // d_{k+1} x d_{k+1}
    Matrix l;   // L_{k+1}, d_{k+1} x d_k
};

struct DeepSpec {
    std::vector<DeepLevelSpec> levels; // size ell - 1
};

enum class DeepKind {
    GlobalMinCase1,
    GlobalMinCase2,
    DeepNonOptimalOrder,
    DeepOptimalOrder,
    OtherCritical,
    NotCritical,
};

struct DeepClassification {
    DeepKind kind = DeepKind::NotCritical;
    Index level = -1; // for DeepNonOptimalOrder
    Index i = -1;
    Index j = -1;
};

std::string to_string(const DeepClassification& c);
bool is_global_min(DeepKind k);

struct DeepCertifiedPoint {
    std::vector<Matrix> weights; // A_1 .. A_ell
    double loss_value = 0.0;
    std::vector<double> grad_norms;
    /// max of the two residuals of the level-k coupling conditions,
    /// one entry per k = 2 .. ell-1 (empty when ell = 2), relative.
    std::vector<double> consistency_residuals;
    DeepClassification classification;
    BlockPattern pattern0;
    std::optional<DeepSpec> spec;

    double max_grad_norm() const;
    double max_consistency_residual() const;
};

/// Runs the level-by-level recursion on a fully specified DeepSpec and
/// certifies the result by measurement: gradient norms plus both coupling
/// conditions. Candidates failing any check come back NotCritical with
/// their residuals; that indicates an inconsistent spec, not a failure.
DeepCertifiedPoint construct_deep_critical(const DeepSpec& spec, const DeepInstance& inst,
                                           const Tolerances& tol = {});

/// Builds a spec whose levels beyond 0 are derived to be consistent with
/// the level-0 choice (captured spaces carried through, L_k = 0).
/// Intermediate C_k (k <= ell-3) are random orthogonal; the top C is a
/// random well-conditioned invertible matrix.
DeepSpec derive_consistent_spec(const DeepInstance& inst, const BlockPattern& pattern0,
                                std::uint64_t seed, bool randomize_blocks = false);

/// Prop-4 value from the level-0 pattern; throws NotCriticalPoint unless
/// the weights certify as critical.
double deep_loss_formula(const BlockPattern& pattern0, const DeepInstance& inst,
                         const std::vector<Matrix>& weights, const Tolerances& tol = {});

DeepClassification classify_deep(const std::vector<Matrix>& weights, const DeepInstance& inst,
                                 const Tolerances& tol = {});

struct DeepDescentWitness {
    std::vector<Matrix> weights;
    double predicted_drop = 0.0;
    double measured_drop = 0.0;
};

/// Level-k rank-preserving descent at a deep-non-optimal-order point.
DeepDescentWitness deep_descent_witness_non_optimal(const DeepCertifiedPoint& point,
                                                    const DeepInstance& inst, Index k,
                                                    double eps);

struct DeepOptimalWitness {
    std::vector<Matrix> weights;
    double analytic_drop = 0.0;
    double measured_drop = 0.0;
    double eps1_used = 0.0;
};

/// Delegates to the shallow optimal-order scheme on the induced instance
/// (X' = A_(ell-2,1) X, last two layers free).
DeepOptimalWitness deep_descent_witness_optimal(const DeepCertifiedPoint& point,
                                                const DeepInstance& inst, double eps1 = 1e-3);

struct DeepAscentWitness {
    std::vector<Matrix> weights;
    double measured_rise = 0.0;
};

/// Scales a nonzero output row of A_ell; requires A_(ell,1) X != 0.
DeepAscentWitness deep_ascent_witness(const std::vector<Matrix>& weights,
                                      const DeepInstance& inst, double delta = 1e-3);

/// The shallow problem seen by the last two layers when the lower stack
/// is frozen.
ShallowInstance induced_shallow_instance(const std::vector<Matrix>& weights,
                                         const DeepInstance& inst);

} // namespace landscape

#endif
