#include <doctest.h>

#include "landscape/spectral.hpp"

using namespace landscape;

namespace {

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

double penrose_residual(const Matrix& m, const Matrix& p) {
    const double s = 1.0 + m.norm();
    double r = (m * p * m - m).norm() / s;
    r = std::max(r, (p * m * p - p).norm() / (1.0 + p.norm()));
    r = std::max(r, ((m * p) - (m * p).transpose()).norm() / s);
    r = std::max(r, ((p * m) - (p * m).transpose()).norm() / s);
    return r;
}

} // namespace

TEST_CASE("pinv on diagonal and rank-1 shapes") {
    Matrix p = pinv(diag2(2.0, 0.0));
    CHECK(p(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p(1, 1) == doctest::Approx(0.0).epsilon(1e-12));

    Matrix col(2, 1);
    col << 1.0, 1.0;
    Matrix row = pinv(col);
    REQUIRE(row.rows() == 1);
    REQUIRE(row.cols() == 2);
    CHECK(row(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(row(0, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("pinv satisfies the four Penrose identities on a random 5x3") {
    Matrix m = random_gaussian(5, 3, 42);
    CHECK(penrose_residual(m, pinv(m)) <= 1e-9);
}

TEST_CASE("pinv rejects non-finite input") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(pinv(m), InvalidInput);
}

TEST_CASE("pinv is an involution up to tolerance") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        Matrix m = random_gaussian(4, 6, seed);
        CHECK((pinv(pinv(m)) - m).norm() <= 1e-8 * (1.0 + m.norm()));
    }
}

TEST_CASE("grouped_eig_psd splits, merges and zeroes as specified") {
    GroupedSVD g = grouped_eig_psd(diag2(4.0, 1.0), 1e-8);
    REQUIRE(g.group_count() == 2);
    CHECK(g.groups[0].value == doctest::Approx(4.0));
    CHECK(g.groups[0].multiplicity == 1);
    CHECK(g.groups[1].value == doctest::Approx(1.0));
    CHECK(g.groups[1].multiplicity == 1);
    CHECK(g.zero_count == 0);

    Matrix m3 = Matrix::Zero(3, 3);
    m3(0, 0) = 2.0;
    m3(1, 1) = 2.0;
    GroupedSVD g3 = grouped_eig_psd(m3, 1e-8);
    REQUIRE(g3.group_count() == 1);
    CHECK(g3.groups[0].value == doctest::Approx(2.0));
    CHECK(g3.groups[0].multiplicity == 2);
    CHECK(g3.zero_count == 1);

    // Example-1 cone J = {1}: Sigma_J = diag(4, 0).
    GroupedSVD g40 = grouped_eig_psd(diag2(4.0, 0.0), 1e-8);
    REQUIRE(g40.group_count() == 1);
    CHECK(g40.groups[0].value == doctest::Approx(4.0));
    CHECK(g40.zero_count == 1);
}

TEST_CASE("grouped_eig_psd rejects asymmetric and indefinite input") {
    Matrix bad(2, 2);
    bad << 1.0, 0.5, -0.5, 1.0;
    CHECK_THROWS_AS(grouped_eig_psd(bad, 1e-8), InvalidInput);
    CHECK_THROWS_AS(grouped_eig_psd(diag2(1.0, -1.0), 1e-8), InvalidInput);
}

TEST_CASE("grouped_eig_psd grouping is scale consistent") {
    Matrix base = random_gaussian(5, 5, 99);
    Matrix s = base * base.transpose(); // PSD with a generic spectrum
    GroupedSVD ref = grouped_eig_psd(s, 1e-8);
    for (double c : {10.0, 1000.0}) {
        GroupedSVD scaled = grouped_eig_psd(c * s, 1e-8);
        REQUIRE(scaled.group_count() == ref.group_count());
        CHECK(scaled.zero_count == ref.zero_count);
        for (Index g = 0; g < ref.group_count(); ++g)
            CHECK(scaled.groups[g].multiplicity == ref.groups[g].multiplicity);
    }
}

TEST_CASE("grouped_eig_psd reconstructs and keeps U orthogonal") {
    for (std::uint64_t seed : {7, 8, 9}) {
        Matrix base = random_gaussian(6, 4, seed);
        Matrix s = base * base.transpose(); // rank <= 4, so a zero group exists
        GroupedSVD g = grouped_eig_psd(s, 1e-8);
        CHECK(g.zero_count >= 2);
        CHECK((g.basis.transpose() * g.basis - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <=
              1e-10);
        CHECK((g.reconstruct() - s).norm() <= 1e-8 * (1.0 + s.norm()));
    }
}

TEST_CASE("projectors: column space and kernel") {
    Matrix e1 = Matrix::Zero(2, 1);
    e1(0, 0) = 1.0;
    CHECK((proj_col(e1) - diag2(1.0, 0.0)).norm() <= 1e-12);

    CHECK((proj_ker(Matrix::Zero(2, 3)) - Matrix::Identity(3, 3)).norm() <= 1e-12);

    Matrix m = random_gaussian(4, 2, 5) * random_gaussian(2, 4, 6); // rank 2, 4x4
    Matrix p = proj_col(m);
    CHECK((p * p - p).norm() <= 1e-9);
    CHECK((p - p.transpose()).norm() <= 1e-9);
    CHECK((p * m - m).norm() <= 1e-9 * (1.0 + m.norm()));
}

TEST_CASE("column space and left kernel projectors are complementary") {
    for (std::uint64_t seed : {11, 12, 13}) {
        Matrix m = random_gaussian(5, 3, seed);
        Matrix sum = proj_col(m) + proj_ker(m.transpose());
        CHECK((sum - Matrix::Identity(5, 5)).norm() <= 1e-9);
    }
}

TEST_CASE("orthonormal_completion squares off a partial basis") {
    Matrix e1 = Matrix::Zero(2, 1);
    e1(0, 0) = 1.0;
    Matrix o = orthonormal_completion(e1);
    REQUIRE(o.cols() == 1);
    CHECK(std::abs(std::abs(o(1, 0)) - 1.0) <= 1e-12);
    CHECK(std::abs(o(0, 0)) <= 1e-12);

    CHECK((orthonormal_completion(Matrix(3, 0)) - Matrix::Identity(3, 3)).norm() == 0.0);

    Matrix v = random_orthonormal(5, 2, 21);
    Matrix full(5, 5);
    full << v, orthonormal_completion(v);
    CHECK((full.transpose() * full - Matrix::Identity(5, 5)).norm() <= 1e-9);
}

TEST_CASE("orthonormal_completion rejects skewed input") {
    Matrix v(2, 1);
    v << 1.0, 1.0;
    CHECK_THROWS_AS(orthonormal_completion(v), InvalidInput);
}

TEST_CASE("numerical_rank follows the pinv cutoff") {
    Matrix m = random_gaussian(4, 2, 30) * random_gaussian(2, 5, 31);
    CHECK(numerical_rank(m) == 2);
    CHECK(numerical_rank(Matrix::Zero(3, 3)) == 0);
}
