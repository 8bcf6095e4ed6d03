#include "landscape/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

namespace landscape {

Index GroupedSVD::positive_total() const {
    Index total = 0;
    for (const auto& g : groups) total += g.multiplicity;
    return total;
}

Index GroupedSVD::group_offset(Index g) const {
    Index off = 0;
    for (Index i = 0; i < g && i < group_count(); ++i) off += groups[i].multiplicity;
    return off;
}

Vector GroupedSVD::expanded() const {
    Vector v = Vector::Zero(dim());
    Index pos = 0;
    for (const auto& g : groups) {
        for (Index k = 0; k < g.multiplicity; ++k) v(pos++) = g.value;
    }
    return v;
}

Matrix GroupedSVD::reconstruct() const {
    return basis * expanded().asDiagonal() * basis.transpose();
}

Index GroupedSVD::group_of_position(Index position) const {
    Index off = 0;
    for (Index g = 0; g < group_count(); ++g) {
        off += groups[g].multiplicity;
        if (position < off) return g;
    }
    return group_count(); // zero group
}

bool all_finite(const Matrix& m) { return m.allFinite(); }

double relative_error(const Matrix& a, const Matrix& b) {
    return (a - b).norm() / (1.0 + b.norm());
}

double rank_tolerance(const Matrix& m, double sigma_max) {
    return 1e-10 * sigma_max * static_cast<double>(std::max(m.rows(), m.cols()));
}

Matrix pinv(const Matrix& m) {
    if (!all_finite(m)) throw InvalidInput("pinv: non-finite entries");
    if (m.rows() == 0 || m.cols() == 0) return Matrix::Zero(m.cols(), m.rows());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double cut = rank_tolerance(m, sv.size() > 0 ? sv(0) : 0.0);
    Vector inv = Vector::Zero(sv.size());
    for (Index i = 0; i < sv.size(); ++i) inv(i) = sv(i) > cut ? 1.0 / sv(i) : 0.0;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Index numerical_rank(const Matrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& sv = svd.singularValues();
    const double cut = rank_tolerance(m, sv.size() > 0 ? sv(0) : 0.0);
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++r;
    return r;
}

namespace {

// Deterministic per-column sign convention: the entry of largest
// magnitude is made positive.
void canonicalize_signs(Matrix& u) {
    for (Index c = 0; c < u.cols(); ++c) {
        Index imax = 0;
        u.col(c).cwiseAbs().maxCoeff(&imax);
        if (u(imax, c) < 0.0) u.col(c) = -u.col(c);
    }
}

} // namespace

GroupedSVD grouped_eig_psd(const Matrix& s, double group_tol) {
    if (!all_finite(s)) throw InvalidInput("grouped_eig_psd: non-finite entries");
    if (s.rows() != s.cols()) throw InvalidInput("grouped_eig_psd: matrix not square");
    const double sn = s.norm();
    if ((s - s.transpose()).norm() > 1e-10 * std::max(sn, 1e-300) && sn > 0.0)
        throw InvalidInput("grouped_eig_psd: matrix not symmetric");

    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (s + s.transpose()));
    if (eig.info() != Eigen::Success)
        throw InvalidInput("grouped_eig_psd: eigendecomposition failed");

    const Index d = s.rows();
    // Solver returns ascending order; flip to descending.
    Vector lam(d);
    Matrix u(d, d);
    for (Index i = 0; i < d; ++i) {
        lam(i) = eig.eigenvalues()(d - 1 - i);
        u.col(i) = eig.eigenvectors().col(d - 1 - i);
    }
    canonicalize_signs(u);

    const double lmax = d > 0 ? std::max(lam(0), 0.0) : 0.0;
    if (d > 0 && lam(d - 1) < -1e-10 * std::max(lmax, 1.0))
        throw InvalidInput("grouped_eig_psd: matrix significantly indefinite");

    const double zero_cut = group_tol * std::max(lmax, 1.0);

    GroupedSVD out;
    out.basis = std::move(u);
    out.group_tol = group_tol;

    Index i = 0;
    while (i < d && lam(i) > zero_cut) {
        Index j = i;
        double sum = 0.0;
        while (j < d && lam(j) > zero_cut && (lam(i) - lam(j)) <= group_tol * std::max(lam(i), 1.0)) {
            sum += lam(j);
            ++j;
        }
        out.groups.push_back({sum / static_cast<double>(j - i), j - i});
        i = j;
    }
    out.zero_count = d - i;
    return out;
}

Matrix proj_col(const Matrix& m) {
    if (!all_finite(m)) throw InvalidInput("proj_col: non-finite entries");
    Matrix p = m * pinv(m);
    return 0.5 * (p + p.transpose());
}

Matrix proj_ker(const Matrix& m) {
    if (!all_finite(m)) throw InvalidInput("proj_ker: non-finite entries");
    Matrix p = Matrix::Identity(m.cols(), m.cols()) - pinv(m) * m;
    return 0.5 * (p + p.transpose());
}

Matrix orthonormal_completion(const Matrix& v) {
    const Index m = v.rows();
    const Index p = v.cols();
    if (p == 0) return Matrix::Identity(m, m);
    if (p > m) throw InvalidInput("orthonormal_completion: more columns than rows");
    if ((v.transpose() * v - Matrix::Identity(p, p)).norm() > 1e-9)
        throw InvalidInput("orthonormal_completion: columns not orthonormal");

    Eigen::HouseholderQR<Matrix> qr(v);
    Matrix q = qr.householderQ();
    Matrix o = q.rightCols(m - p);
    // Guard: the completion must be orthogonal to V.
    if ((v.transpose() * o).norm() > 1e-9)
        throw InvalidInput("orthonormal_completion: QR produced a skewed basis");
    return o;
}

Matrix random_gaussian(Index rows, Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
    return m;
}

Matrix random_orthonormal(Index rows, Index cols, std::uint64_t seed) {
    if (cols == 0) return Matrix(rows, 0);
    Matrix g = random_gaussian(rows, cols, seed);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = Matrix(qr.householderQ()).leftCols(cols);
    // Fix signs against the R diagonal so the result is unique per seed.
    Matrix r = qr.matrixQR().topLeftCorner(cols, cols);
    for (Index c = 0; c < cols; ++c)
        if (r(c, c) < 0.0) q.col(c) = -q.col(c);
    return q;
}

Matrix random_well_conditioned(Index n, std::uint64_t seed) {
    if (n == 0) return Matrix(0, 0);
    Matrix q1 = random_orthonormal(n, n, seed);
    Matrix q2 = random_orthonormal(n, n, seed ^ 0x9e3779b97f4a7c15ull);
    std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4full);
    std::uniform_real_distribution<double> unif(0.5, 2.0);
    Vector s(n);
    for (Index i = 0; i < n; ++i) s(i) = unif(rng);
    return q1 * s.asDiagonal() * q2.transpose();
}

} // namespace landscape
