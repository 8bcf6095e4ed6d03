#include <doctest.h>

#include "landscape/certify.hpp"
#include "landscape/deep.hpp"
#include "landscape/relu.hpp"
#include "test_support.hpp"

using namespace landscape;
using namespace landscape::testing;

TEST_CASE("fd_gradient nails a 1-D quadratic") {
    auto f = [](const std::vector<Matrix>& w) {
        const double a = w[0](0, 0);
        return 0.5 * (a - 1.0) * (a - 1.0);
    };
    std::vector<Matrix> point{Matrix::Zero(1, 1)};
    std::vector<Matrix> g = fd_gradient(f, point);
    CHECK(g[0](0, 0) == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK_THROWS_AS(fd_gradient(f, point, 0.0), InvalidInput);
}

TEST_CASE("certify_critical cross-checks closed forms and issues verdicts") {
    ShallowInstance inst = example1_linear(1);
    auto loss_fn = [&](const std::vector<Matrix>& w) { return loss(w[0], w[1], inst); };
    auto grad_fn = [&](const std::vector<Matrix>& w) {
        auto [g1, g2] = gradients(w[0], w[1], inst);
        return std::vector<Matrix>{g1, g2};
    };

    CertifiedPoint p = construct_critical(
        CriticalPointSpec::canonical(BlockPattern{{1, 0}, 0}, inst), inst);
    Certificate good = certify_critical(loss_fn, grad_fn, {p.a1, p.a2}, 1e-8);
    CHECK(good.critical);

    Certificate zero = certify_critical(
        loss_fn, grad_fn, {Matrix::Zero(1, 2), Matrix::Zero(2, 1)}, 1e-8);
    CHECK(zero.critical);

    Certificate bad = certify_critical(
        loss_fn, grad_fn, {random_gaussian(1, 2, 4), random_gaussian(2, 1, 5)}, 1e-8);
    CHECK_FALSE(bad.critical);

    // A wrong closed form must be flagged, never silently accepted.
    auto broken = [&](const std::vector<Matrix>& w) {
        auto g = grad_fn(w);
        g[0] *= 2.0;
        return g;
    };
    CHECK_THROWS_AS(certify_critical(loss_fn, broken,
                                     {random_gaussian(1, 2, 6), random_gaussian(2, 1, 7)}, 1e-8),
                    GradientMismatch);
}

TEST_CASE("gd_probe converges on the Example-1 instance to a Thm-1 structured point") {
    ShallowInstance inst = example1_linear(1);
    for (std::uint64_t seed : {1, 2, 3}) {
        GdResult res = gd_probe(inst, seed, 400000);
        REQUIRE(res.converged);
        PatternRecovery rec = recover_pattern(res.a2, inst);
        CHECK(rec.offdiag_residual <= 1e-6);
        CHECK(is_critical(classify(res.a1, res.a2, inst)));
    }
}

TEST_CASE("gd_probe drives a zero-target instance to zero loss") {
    ShallowInstance inst = ShallowInstance::make(Matrix::Identity(2, 2), Matrix::Zero(2, 2), 2);
    GdResult res = gd_probe(inst, 5, 200000);
    REQUIRE(res.converged);
    CHECK(loss(res.a1, res.a2, inst) <= 1e-12);
}

TEST_CASE("gd_probe_deep fits the scalar chain") {
    Matrix x(1, 1), y(1, 1);
    x << 1.0;
    y << 2.0;
    DeepInstance inst = DeepInstance::make(x, y, {1, 1, 1, 1});
    GdDeepResult res = gd_probe_deep(inst, 11, 400000);
    REQUIRE(res.converged);
    CHECK(deep_loss(res.weights, inst) <= 1e-10);
}

TEST_CASE("global_min_value matches the Example-1 arithmetic") {
    CHECK(global_min_value(example1_linear(1)) == doctest::Approx(0.5));
    CHECK(global_min_value(example1_linear(2)) == doctest::Approx(0.0));
    ShallowInstance zero = ShallowInstance::make(Matrix::Identity(2, 2), Matrix::Zero(2, 2), 1);
    CHECK(global_min_value(zero) == doctest::Approx(0.0));
}

TEST_CASE("relu gradients agree with finite differences strictly inside a region") {
    ReluInstance inst = ReluInstance::make(random_gaussian(3, 4, 60), random_gaussian(2, 4, 61), 2);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Matrix a1 = random_gaussian(2, 3, 200 + seed);
        Matrix a2 = random_gaussian(2, 2, 300 + seed);
        if ((a1 * inst.x).cwiseAbs().minCoeff() < 1e-3) continue; // keep differentiable
        auto [g1, g2] = relu_gradients(a1, a2, inst);
        auto fd = fd_gradient(
            [&](const std::vector<Matrix>& w) { return relu_loss(w[0], w[1], inst); }, {a1, a2});
        CHECK((g1 - fd[0]).norm() <= 1e-5 * (1.0 + g1.norm()));
        CHECK((g2 - fd[1]).norm() <= 1e-5 * (1.0 + g2.norm()));
    }
}
