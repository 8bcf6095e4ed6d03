#include <doctest.h>

#include "landscape/relu.hpp"
#include "test_support.hpp"

using namespace landscape;
using namespace landscape::testing;

namespace {

ReluInstance example1_relu() {
    return ReluInstance::make(Matrix::Identity(2, 2), diag_matrix({2.0, 1.0}), 1);
}

Matrix row2(double a, double b) {
    Matrix m(1, 2);
    m << a, b;
    return m;
}

Matrix col2(double a, double b) {
    Matrix m(2, 1);
    m << a, b;
    return m;
}

} // namespace

TEST_CASE("relu_loss on the Example-1 weights") {
    ReluInstance inst = example1_relu();
    CHECK(relu_loss(row2(2.0, -1.0), col2(1.0, 0.0), inst) == doctest::Approx(0.5));

    // All-negative preactivations leave only the constant term.
    CHECK(relu_loss(row2(-1.0, -2.0), col2(3.0, 4.0), inst) == doctest::Approx(2.5));

    // A2 = 0 gives the constant regardless of A1.
    CHECK(relu_loss(row2(5.0, 7.0), col2(0.0, 0.0), inst) == doctest::Approx(2.5));

    CHECK_THROWS_AS(relu_loss(Matrix::Zero(2, 2), col2(0, 0), inst), DimensionError);
}

TEST_CASE("cone membership and slacks") {
    ReluInstance inst = example1_relu();
    ActivationCone cone{{0}, {0}, 0.0};
    ConeCheck check = cone_membership(row2(2.0, -1.0), inst, cone);
    CHECK(check.inside);
    CHECK(check.active_slack == doctest::Approx(2.0));
    CHECK(check.strict_slack == doctest::Approx(1.0));

    // The zero matrix sits on the boundary of the full rectangle...
    ReluInstance wide = ReluInstance::make(Matrix::Identity(2, 2), diag_matrix({2.0, 1.0}), 2);
    ActivationCone full{{0, 1}, {0, 1}, 0.0};
    CHECK(cone_membership(Matrix::Zero(2, 2), wide, full).inside);

    // ...but a proper sub-rectangle demands strict negativity elsewhere.
    ActivationCone half{{0, 1}, {0}, 0.0};
    CHECK_FALSE(cone_membership(Matrix::Zero(2, 2), wide, half).inside);
}

TEST_CASE("cone_of detects rectangles and rejects mixed activations") {
    ReluInstance inst = ReluInstance::make(Matrix::Identity(2, 2), diag_matrix({2.0, 1.0}), 2);
    Matrix a1(2, 2);
    a1 << 1.0, -1.0, 2.0, -3.0; // active set {1,2} x {1}
    auto cone = cone_of(a1, inst);
    REQUIRE(cone.has_value());
    CHECK(cone->rows == std::vector<Index>{0, 1});
    CHECK(cone->cols == std::vector<Index>{0});

    Matrix bad(2, 2);
    bad << 1.0, -1.0, -2.0, 3.0; // diagonal activations, not a rectangle
    CHECK_FALSE(cone_of(bad, inst).has_value());
}

TEST_CASE("reduced_instance slices the data and carries the offset") {
    ReluInstance inst = example1_relu();
    ActivationCone cone{{0}, {0}, 0.0};
    ReducedInstance red = reduced_instance(cone, inst);
    REQUIRE_FALSE(red.constant);
    CHECK(red.offset == doctest::Approx(0.5));
    REQUIRE(red.shallow.has_value());
    CHECK(red.shallow->d0() == 2);
    CHECK(red.shallow->samples() == 1);
    // Sigma_J = diag(4, 0) on this slice.
    REQUIRE(red.shallow->sigma.group_count() == 1);
    CHECK(red.shallow->sigma.groups[0].value == doctest::Approx(4.0));
    CHECK(red.shallow->sigma.zero_count == 1);

    ActivationCone all{{0}, {0, 1}, 0.0};
    CHECK(reduced_instance(all, inst).offset == doctest::Approx(0.0));

    ActivationCone none{{0}, {}, 0.0};
    ReducedInstance constant = reduced_instance(none, inst);
    CHECK(constant.constant);
    CHECK(constant.offset == doctest::Approx(2.5));
}

TEST_CASE("in-cone equivalence: relu loss = reduced loss + offset") {
    ReluInstance inst = ReluInstance::make(random_gaussian(3, 5, 71), random_gaussian(2, 5, 72), 2);
    int tested = 0;
    for (std::uint64_t seed = 0; tested < 10 && seed < 200; ++seed) {
        Matrix a1 = random_gaussian(2, 3, 500 + seed);
        if ((a1 * inst.x).cwiseAbs().minCoeff() < 1e-6) continue;
        auto cone = cone_of(a1, inst);
        if (!cone || cone->rows.empty() || cone->cols.empty()) continue;
        ReducedInstance red = reduced_instance(*cone, inst);
        Matrix a2 = random_gaussian(2, 2, 600 + seed);

        Matrix a1_red(static_cast<Index>(cone->rows.size()), 3);
        Matrix a2_red(2, static_cast<Index>(cone->rows.size()));
        for (Index k = 0; k < a1_red.rows(); ++k) {
            a1_red.row(k) = a1.row(cone->rows[k]);
            a2_red.col(k) = a2.col(cone->rows[k]);
        }
        const double full = relu_loss(a1, a2, inst);
        const double reduced = loss(a1_red, a2_red, *red.shallow) + red.offset;
        CHECK(std::abs(full - reduced) <= 1e-12 * (1.0 + full));
        ++tested;
    }
    CHECK(tested == 10);
}

TEST_CASE("construct_relu_critical reproduces the Example-1 local minimum") {
    ReluInstance inst = example1_relu();
    ActivationCone cone{{0}, {0}, 0.0};
    ReducedInstance red = reduced_instance(cone, inst);

    // c = 1, v = (1,0)^T, l1 = (1,-1)^T in the closed-form parameterization.
    CriticalPointSpec spec = CriticalPointSpec::canonical(BlockPattern{{1}, 0}, *red.shallow);
    Matrix l1(1, 2);
    l1 << 1.0, -1.0;
    spec.l1 = l1;

    ReluCertifiedPoint p = construct_relu_critical(cone, spec, inst);
    CHECK((p.a1 - row2(2.0, -1.0)).norm() <= 1e-12);
    CHECK((p.a2 - col2(1.0, 0.0)).norm() <= 1e-12);
    CHECK(p.loss_value == doctest::Approx(0.5));
    CHECK(p.membership.inside);
    CHECK(p.full_grad_norms[0] <= 1e-12);
    CHECK(p.full_grad_norms[1] <= 1e-12);
    CHECK(p.reduced.classification == Classification::GlobalMinCase1);
}

TEST_CASE("construct_relu_critical builds the spurious minimum in the J = {2} cone") {
    ReluInstance inst = example1_relu();
    ActivationCone cone{{0}, {1}, 0.0};
    ReducedInstance red = reduced_instance(cone, inst);

    CriticalPointSpec spec = CriticalPointSpec::canonical(BlockPattern{{1}, 0}, *red.shallow);
    Matrix l1(1, 2);
    l1 << -1.0, 0.0;
    spec.l1 = l1;

    ReluCertifiedPoint p = construct_relu_critical(cone, spec, inst);
    CHECK((p.a1 - row2(-1.0, 1.0)).norm() <= 1e-12);
    CHECK((p.a2 - col2(0.0, 1.0)).norm() <= 1e-12);
    CHECK(p.loss_value == doctest::Approx(2.0));
}

TEST_CASE("construct_relu_critical rejects infeasible cones") {
    ReluInstance inst = example1_relu();
    ActivationCone cone{{0}, {0}, 0.0};
    ReducedInstance red = reduced_instance(cone, inst);
    CriticalPointSpec spec = CriticalPointSpec::canonical(BlockPattern{{1}, 0}, *red.shallow);
    spec.c(0, 0) = -1.0; // flips the sign of the nonneg side
    Matrix l1(1, 2);
    l1 << 1.0, -1.0;
    spec.l1 = l1;
    CHECK_THROWS_AS(construct_relu_critical(cone, spec, inst), ConeViolation);
}

TEST_CASE("exist_search_d1_1 finds all Example-1 levels") {
    ReluInstance inst = example1_relu();
    std::vector<SearchHit> hits = exist_search_d1_1(inst);

    bool saw_half = false, saw_two = false, saw_const = false;
    for (const auto& hit : hits) {
        if (hit.cols.empty()) {
            saw_const = true;
            CHECK(hit.loss_value == doctest::Approx(2.5));
        }
        if (hit.cols == std::vector<Index>{0} && std::abs(hit.loss_value - 0.5) < 1e-9) {
            saw_half = true;
            CHECK((hit.a1 - row2(2.0, -1.0)).norm() <= 1e-9);
            CHECK(hit.strict_slack > 0.0);
        }
        if (hit.cols == std::vector<Index>{1} && std::abs(hit.loss_value - 2.0) < 1e-9) {
            saw_two = true;
            CHECK((hit.a1 - row2(-1.0, 1.0)).norm() <= 1e-9);
        }
        // The loss law: every hit sits at (Tr(YY^T) - sigma_g(J)) / 2.
        if (hit.group >= 0)
            CHECK(hit.loss_value ==
                  doctest::Approx(0.5 * (5.0 - hit.sigma)).epsilon(1e-9));
    }
    CHECK(saw_half);
    CHECK(saw_two);
    CHECK(saw_const);

    // Canonical ordering: J lexicographic, then group.
    for (std::size_t k = 1; k < hits.size(); ++k) {
        CHECK((hits[k - 1].cols < hits[k].cols ||
               (hits[k - 1].cols == hits[k].cols && hits[k - 1].group <= hits[k].group)));
    }
}

TEST_CASE("exist_search_d1_1 on zero targets only finds flat witnesses") {
    ReluInstance inst = ReluInstance::make(Matrix::Identity(2, 2), Matrix::Zero(2, 2), 1);
    std::vector<SearchHit> hits = exist_search_d1_1(inst);
    for (const auto& hit : hits) {
        CHECK(hit.group == -1); // no positive spectrum anywhere
        CHECK(hit.loss_value == doctest::Approx(0.0));
    }
}

TEST_CASE("exist_search_d1_1 re-certifies every emitted witness") {
    ReluInstance inst = ReluInstance::make(random_gaussian(2, 3, 81), random_gaussian(2, 3, 82), 1);
    std::vector<SearchHit> hits = exist_search_d1_1(inst);
    CHECK(!hits.empty());
    for (const auto& hit : hits) {
        ActivationCone cone{{0}, hit.cols, 0.0};
        ConeCheck check = cone_membership(hit.a1, inst, cone);
        CHECK(check.inside);
        CHECK(check.strict_slack > 0.0);
        if (hit.group < 0) continue;
        ReducedInstance red = reduced_instance(cone, inst);
        Matrix a1r = hit.a1, a2r = hit.a2;
        auto [g1, g2] = gradients(a1r, a2r, *red.shallow);
        CHECK(std::max(g1.norm(), g2.norm()) <= 1e-8 * red.shallow->grad_scale() *
                                                   (1.0 + a1r.norm() + a2r.norm()));
    }
}

TEST_CASE("exist_search_d1_1 guards its budget and width") {
    ReluInstance wide = ReluInstance::make(random_gaussian(2, 3, 5), random_gaussian(2, 3, 6), 2);
    CHECK_THROWS_AS(exist_search_d1_1(wide), InvalidInput);

    SearchOptions opts;
    opts.max_samples = 2;
    ReluInstance big = ReluInstance::make(random_gaussian(2, 3, 7), random_gaussian(2, 3, 8), 1);
    CHECK_THROWS_AS(exist_search_d1_1(big, opts), SearchBudgetExceeded);
}

TEST_CASE("local_min_probe_in_cone: flat at the witnesses, boundary refused") {
    ReluInstance inst = example1_relu();
    std::vector<SearchHit> hits = exist_search_d1_1(inst);
    int probed = 0;
    for (const auto& hit : hits) {
        if (hit.cols.size() != 1 || hit.group != 0) continue;
        ActivationCone cone{{0}, hit.cols, 0.0};
        const double min_delta =
            local_min_probe_in_cone(hit.a1, hit.a2, cone, inst, 1e-3, 2000, 123);
        CHECK(min_delta >= -1e-12);
        ++probed;
    }
    CHECK(probed == 2);

    ActivationCone cone{{0}, {0}, 0.0};
    CHECK_THROWS_AS(
        local_min_probe_in_cone(row2(0.0, -1.0), col2(1.0, 0.0), cone, inst, 1e-3, 10, 1),
        PointOnBoundary);
}

TEST_CASE("probe detects the descent at an embedded non-optimal linear point") {
    // Data cooked so the sigma_2 eigendirection has positive output
    // weights; the non-optimal capture then sits strictly inside the
    // all-active cone, where the ReLU loss is the linear loss.
    const double ca = std::cos(0.5), sa = std::sin(0.5);
    Matrix u(2, 2), w(2, 2);
    u << ca, -sa, sa, ca;
    const double cb = std::cos(-0.7), sb = std::sin(-0.7);
    w << cb, -sb, sb, cb;
    Matrix y = u * diag_matrix({2.0, 1.0}) * w.transpose();
    ReluInstance inst = ReluInstance::make(Matrix::Identity(2, 2), y, 2);
    ShallowInstance lin = ShallowInstance::make(inst.x, inst.y, 2);

    // Capture only sigma_2 and fill the second hidden row through L1 so
    // every preactivation is strictly positive.
    CriticalPointSpec spec = CriticalPointSpec::canonical(BlockPattern{{0, 1}, 0}, lin);
    Matrix u2 = lin.sigma.basis.col(1);
    Matrix l1 = Matrix::Zero(2, 2);
    l1.row(1) = (y.inverse().transpose() * u2).transpose();
    spec.l1 = l1;
    CertifiedPoint p = construct_critical(spec, lin);
    REQUIRE(p.classification == Classification::NonOptimalOrder);
    REQUIRE((p.a1 * inst.x).minCoeff() > 0.05);

    ActivationCone cone{{0, 1}, {0, 1}, 0.0};
    const double min_delta =
        local_min_probe_in_cone(p.a1, p.a2, cone, inst, 1e-2, 4000, 321);
    CHECK(min_delta < 0.0);
}
