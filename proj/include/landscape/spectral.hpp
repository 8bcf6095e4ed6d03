#ifndef LANDSCAPE_SPECTRAL_HPP
#define LANDSCAPE_SPECTRAL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "landscape/errors.hpp"

namespace landscape {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// One distinct eigenvalue of a grouped decomposition.
struct EigenGroup {
    double value = 0.0;
    Index multiplicity = 0;
};

/// Eigen-decomposition of a symmetric PSD matrix with the spectrum
/// grouped into distinct positive values plus a zero group.
///
/// basis is orthogonal with columns ordered to match the groups:
/// first the multiplicity columns of groups[0], then groups[1], ...,
/// and finally zero_count columns spanning the (numerical) kernel.
struct GroupedSVD {
    Matrix basis;                   // U, d x d orthogonal
    std::vector<EigenGroup> groups; // strictly decreasing, strictly positive
    Index zero_count = 0;           // number of zero eigenvalues
    double group_tol = 1e-8;        // relative tolerance used to merge

    Index dim() const { return basis.rows(); }

    Index group_count() const { return static_cast<Index>(groups.size()); }

    /// Total multiplicity of the positive spectrum.
    Index positive_total() const;

    /// Column offset of group g within basis (zero group sits at the end).
    Index group_offset(Index g) const;

    /// Eigenvalues expanded back to a length-d descending vector.
    Vector expanded() const;

    /// U * diag(expanded) * U^T.
    Matrix reconstruct() const;

    /// Index of the group containing basis column `position`, where the
    /// zero group is reported as group_count().
    Index group_of_position(Index position) const;
};

/// Relative cutoff below which singular values are treated as zero:
/// 1e-10 * sigma_max * max(rows, cols).
double rank_tolerance(const Matrix& m, double sigma_max);

/// Moore-Penrose pseudoinverse via SVD.
Matrix pinv(const Matrix& m);

/// Numerical rank under the same cutoff policy as pinv.
Index numerical_rank(const Matrix& m);

/// Grouped eigen-decomposition of a symmetric PSD matrix. Eigenvalues
/// within group_tol * max(lambda_1, 1) of each other merge; eigenvalues
/// at most group_tol * max(lambda_1, 1) form the zero group.
GroupedSVD grouped_eig_psd(const Matrix& s, double group_tol = 1e-8);

/// Orthogonal projector onto col(M): M * pinv(M).
Matrix proj_col(const Matrix& m);

/// Orthogonal projector onto ker(M): I - pinv(M) * M.
Matrix proj_ker(const Matrix& m);

/// Given V (m x p) with orthonormal columns, returns O (m x (m-p)) such
/// that [V, O] is m x m orthogonal. V empty yields the identity.
Matrix orthonormal_completion(const Matrix& v);

/// True when every entry is finite.
bool all_finite(const Matrix& m);

/// ||A - B||_F / (1 + ||B||_F).
double relative_error(const Matrix& a, const Matrix& b);

// --- seeded random matrix helpers shared by generators and tests ---

/// Entries i.i.d. standard normal.
Matrix random_gaussian(Index rows, Index cols, std::uint64_t seed);

/// Orthonormal columns (rows x cols, cols <= rows), deterministic per seed.
Matrix random_orthonormal(Index rows, Index cols, std::uint64_t seed);

/// Square invertible matrix with singular values in [0.5, 2].
Matrix random_well_conditioned(Index n, std::uint64_t seed);

} // namespace landscape

#endif
