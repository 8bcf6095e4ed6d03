#ifndef LANDSCAPE_SHALLOW_HPP
#define LANDSCAPE_SHALLOW_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "landscape/spectral.hpp"

namespace landscape {

/// Tolerances shared by construction, certification and classification.
struct Tolerances {
    double group_tol = 1e-8;   // eigenvalue grouping (relative)
    double crit_tol = 1e-8;    // gradient norms, scaled by instance norms
    double side_tol = 1e-10;   // side-condition residual, scaled
    double block_tol = 1e-6;   // off-diagonal mass allowed in pattern recovery
};

/// A shallow linear instance: one hidden layer of width d1 fitting
/// Y (d2 x m) from X (d0 x m) under the half squared Frobenius loss.
struct ShallowInstance {
    Matrix x;        // d0 x m
    Matrix y;        // d2 x m
    Index d1 = 0;
    GroupedSVD sigma;    // of Y X^+ X Y^T
    Matrix x_pinv;       // cached X^+
    Matrix yx_pinv;      // cached Y X^+

    static ShallowInstance make(Matrix x, Matrix y, Index d1, double group_tol = 1e-8);

    Index d0() const { return x.rows(); }
    Index d2() const { return y.rows(); }
    Index samples() const { return x.cols(); }

    /// min(d2, d1): the representation budget of the outer weight.
    Index rank_budget() const { return std::min(d2(), d1); }

    /// Scale factor for relative gradient tolerances.
    double grad_scale() const { return 1.0 + y.norm() * x.norm(); }
};

/// How many eigen-directions of each group a point captures.
struct BlockPattern {
    std::vector<Index> per_group; // p_i, aligned with sigma.groups
    Index p_bar = 0;              // captured zero-directions

    Index rank() const;

    /// Throws InvalidSpec unless 0 <= p_i <= m_i, p_bar <= zero_count and
    /// rank() <= min(d2, d1).
    void validate(const GroupedSVD& sigma, Index d1) const;

    /// p_1 = m_1, ..., p_{k-1} = m_{k-1}, p_k = rank - sum, rest 0, p_bar = 0.
    bool is_prefix_maximal(const GroupedSVD& sigma) const;

    /// Largest-first fill of `rank` captures into the positive groups.
    static BlockPattern prefix(const GroupedSVD& sigma, Index rank);

    bool operator==(const BlockPattern&) const = default;
};

/// Free parameters that generate a critical point via the closed form.
struct CriticalPointSpec {
    BlockPattern pattern;
    std::vector<Matrix> v_blocks; // V_i, m_i x p_i, orthonormal columns
    Matrix v_bar;                 // zero-group block, m_bar x p_bar
    Matrix c;                     // d1 x d1, invertible
    Matrix l1;                    // d1 x d0

    /// Identity-prefix V blocks, C = I, L1 = 0.
    static CriticalPointSpec canonical(const BlockPattern& pattern, const ShallowInstance& inst);

    /// Random orthonormal V blocks and a well-conditioned random C.
    static CriticalPointSpec randomized(const BlockPattern& pattern, const ShallowInstance& inst,
                                        std::uint64_t seed);

    /// Assembles V = [diag(V_1..V_r, Vbar), 0] of size d2 x d1.
    Matrix assemble_v(const ShallowInstance& inst) const;

    /// Throws InvalidSpec on shape/orthonormality/invertibility violations.
    void validate(const ShallowInstance& inst) const;

    /// Gradient-tolerance scale including the conditioning of C.
    double scale(const ShallowInstance& inst) const;
};

enum class Classification {
    GlobalMinCase1,
    GlobalMinCase2,
    NonOptimalOrder,
    OptimalOrder,
    OtherCritical,
    NotCritical,
};

std::string to_string(Classification c);
bool is_global_min(Classification c);
bool is_critical(Classification c);

/// A weight pair together with its certification evidence.
struct CertifiedPoint {
    Matrix a1;
    Matrix a2;
    double loss_value = 0.0;
    std::vector<double> grad_norms; // {||grad A1||_F, ||grad A2||_F}
    double side_residual = 0.0;
    Classification classification = Classification::NotCritical;
    BlockPattern pattern;
    std::optional<CriticalPointSpec> spec; // present for constructed points

    double max_grad_norm() const;
};

// --- operations ---

double loss(const Matrix& a1, const Matrix& a2, const ShallowInstance& inst);

/// Closed-form gradients (d/dA1, d/dA2).
std::pair<Matrix, Matrix> gradients(const Matrix& a1, const Matrix& a2,
                                    const ShallowInstance& inst);

/// Frobenius norm of P_{col(UV)^perp} Y X^T L1^T C^T P_{ker(V)}.
double check_side_condition(const CriticalPointSpec& spec, const ShallowInstance& inst);

/// Builds the critical point generated by spec, certifies it numerically
/// and classifies it. Throws SideConditionViolated when the side-condition
/// residual exceeds side_tol times its natural scale.
CertifiedPoint construct_critical(const CriticalPointSpec& spec, const ShallowInstance& inst,
                                  const Tolerances& tol = {});

/// Loss value implied by the pattern alone.
double loss_formula(const BlockPattern& pattern, const ShallowInstance& inst);

struct PatternRecovery {
    BlockPattern pattern;
    double offdiag_residual = 0.0; // block-diagonality defect of U^T P U
    bool clean = false;            // true when traces round to integers
};

/// Reads the block pattern off the weights: p_i = tr of the i-th diagonal
/// block of U^T proj_col(A2) U.
PatternRecovery recover_pattern(const Matrix& a2, const ShallowInstance& inst,
                                const Tolerances& tol = {});

/// Same recovery against an explicit grouped spectrum (used by the deep
/// module, one level at a time).
PatternRecovery recover_pattern(const Matrix& a2, const GroupedSVD& sigma,
                                const Tolerances& tol = {});

/// Stacks orthonormal blocks into V = [diag(blocks..., v_bar), 0] with
/// total_cols columns and sigma.dim() rows.
Matrix assemble_block_v(const std::vector<Matrix>& blocks, const Matrix& v_bar,
                        const GroupedSVD& sigma, Index total_cols);

/// S = diag([V_1, O_1], ..., [V_r, O_r], [Vbar, Obar]): each group's
/// captured columns completed to an orthogonal basis of the group.
Matrix build_group_completion(const std::vector<Matrix>& blocks, const Matrix& v_bar,
                              const GroupedSVD& sigma);

/// Classifies raw weights. Non-critical points return NotCritical.
Classification classify(const Matrix& a1, const Matrix& a2, const ShallowInstance& inst,
                        const Tolerances& tol = {});

/// Classifies a pattern that is already known to generate a critical point.
Classification classify_pattern(const BlockPattern& pattern, Index a2_rank,
                                const ShallowInstance& inst);

/// Recovers a (V, C, L1) characterization from critical weights.
/// Throws InvalidSpec when the weights do not carry the critical-point
/// structure (within tol.block_tol).
CriticalPointSpec recover_spec(const Matrix& a1, const Matrix& a2, const ShallowInstance& inst,
                               const Tolerances& tol = {});

struct DescentWitness {
    Matrix a1;
    Matrix a2;
    double predicted_drop = 0.0;
    double measured_drop = 0.0;
};

/// Rank-preserving descent direction at a non-optimal-order point: mixes
/// the first captured sigma_j column toward an uncaptured sigma_i column.
/// The measured drop equals eps^2 (sigma_i - sigma_j) / (2 (1 + eps^2)).
DescentWitness descent_witness_non_optimal(const CertifiedPoint& point,
                                           const ShallowInstance& inst, double eps);

struct OptimalWitness {
    Matrix a1;
    Matrix a2;
    double analytic_drop = 0.0; // loss(point) - loss(perturbed), predicted
    double measured_drop = 0.0;
    double eps1_used = 0.0;
};

/// Rank-increasing descent direction at an optimal-order point; couples
/// eps2 = eps1^2 and retries with eps1/10 (up to 6 times) until the loss
/// strictly decreases.
OptimalWitness descent_witness_optimal(const CertifiedPoint& point, const ShallowInstance& inst,
                                       double eps1 = 1e-3);

struct AscentWitness {
    Matrix a1;
    Matrix a2;
    double measured_rise = 0.0;
};

/// Scales one nonzero output row of A2; valid at any point with
/// A2 A1 X != 0 (throws NotInX otherwise).
AscentWitness ascent_witness(const Matrix& a1, const Matrix& a2, const ShallowInstance& inst,
                             double delta = 1e-3);

} // namespace landscape

#endif
