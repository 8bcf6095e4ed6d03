#ifndef LANDSCAPE_RELU_HPP
#define LANDSCAPE_RELU_HPP

#include <optional>
#include <vector>

#include "landscape/shallow.hpp"

namespace landscape {

/// One-hidden-layer ReLU instance under the half squared Frobenius loss.
struct ReluInstance {
    Matrix x;   // d0 x m
    Matrix y;   // d2 x m
    Index d1 = 0;

    static ReluInstance make(Matrix x, Matrix y, Index d1);

    Index d0() const { return x.rows(); }
    Index d2() const { return y.rows(); }
    Index samples() const { return x.cols(); }
};

/// K_{I x J}: preactivations nonnegative exactly on the I x J rectangle
/// and strictly below -margin elsewhere. Indices are 0-based internally.
struct ActivationCone {
    std::vector<Index> rows; // I, sorted
    std::vector<Index> cols; // J, sorted
    double margin = 0.0;

    void validate(const ReluInstance& inst) const;
};

struct ConeCheck {
    bool inside = false;
    double active_slack = 0.0; // min preactivation over I x J (inf when empty)
    double strict_slack = 0.0; // min of (-margin - z) over the complement (inf when empty)

    double worst_slack() const { return std::min(active_slack, strict_slack); }
};

double relu_loss(const Matrix& a1, const Matrix& a2, const ReluInstance& inst);

/// Closed-form gradients; exact wherever no preactivation is exactly zero.
std::pair<Matrix, Matrix> relu_gradients(const Matrix& a1, const Matrix& a2,
                                         const ReluInstance& inst);

ConeCheck cone_membership(const Matrix& a1, const ReluInstance& inst,
                          const ActivationCone& cone);

/// Detects the activation rectangle of a1, or nullopt when the active set
/// is not of the I x J form.
std::optional<ActivationCone> cone_of(const Matrix& a1, const ReluInstance& inst,
                                      double margin = 0.0);

/// The shallow problem the ReLU loss reduces to inside a cone, plus the
/// constant offset from the inactive samples.
struct ReducedInstance {
    bool constant = false;       // I or J empty: the loss is offset everywhere
    double offset = 0.0;         // 0.5 ||Y_{:,J^c}||_F^2
    std::optional<ShallowInstance> shallow; // absent when constant
};

ReducedInstance reduced_instance(const ActivationCone& cone, const ReluInstance& inst,
                                 double group_tol = 1e-8);

struct ReluCertifiedPoint {
    Matrix a1;  // d1 x d0
    Matrix a2;  // d2 x d1
    double loss_value = 0.0;
    ActivationCone cone;
    ConeCheck membership;
    double offset = 0.0;
    CertifiedPoint reduced; // certification of the in-cone linear problem
    std::vector<double> full_grad_norms; // ReLU-loss gradients at the point
};

/// Builds the in-cone critical point generated by a spec over the reduced
/// instance. Rows of A1 outside I default to a least-squares row pushed
/// below the margin; columns of A2 outside I default to zero.
ReluCertifiedPoint construct_relu_critical(const ActivationCone& cone,
                                           const CriticalPointSpec& spec,
                                           const ReluInstance& inst,
                                           const Tolerances& tol = {});

struct SearchHit {
    std::vector<Index> cols;  // J, sorted, 0-based
    Index group = -1;         // positive group of Sigma_J; -1 for the constant cone
    double sigma = 0.0;
    double loss_value = 0.0;
    Matrix a1;
    Matrix a2;
    double strict_slack = 0.0;
    double active_slack = 0.0;
};

struct SearchOptions {
    double margin = 0.0;       // required strict-side clearance
    Index max_samples = 20;    // refuse the 2^m enumeration beyond this
    std::uint64_t seed = 1;    // restarts for the l1 feasibility push
    Tolerances tol;
};

/// Exhaustive d1 = 1 cone enumeration: for every J and every positive
/// group of Sigma_J, attempts both signs of c with the canonical group
/// vector and solves the strict-side feasibility for l1. Emits every
/// certified witness, ordered by (J lexicographic, group).
std::vector<SearchHit> exist_search_d1_1(const ReluInstance& inst, const SearchOptions& opts = {});

/// Samples perturbations of (A1, A2) within a slack-preserving radius and
/// returns the smallest observed loss change. Nonnegative results at
/// shrinking radii support local minimality; never a proof.
double local_min_probe_in_cone(const Matrix& a1, const Matrix& a2, const ActivationCone& cone,
                               const ReluInstance& inst, double radius, Index n_samples,
                               std::uint64_t seed);

} // namespace landscape

#endif
