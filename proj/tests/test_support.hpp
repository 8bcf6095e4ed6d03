#ifndef LANDSCAPE_TEST_SUPPORT_HPP
#define LANDSCAPE_TEST_SUPPORT_HPP

#include <random>

#include "landscape/shallow.hpp"

namespace landscape::testing {

inline Matrix diag_matrix(std::initializer_list<double> values) {
    const Index n = static_cast<Index>(values.size());
    Matrix m = Matrix::Zero(n, n);
    Index i = 0;
    for (double v : values) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

/// Example-1 data as a linear instance: X = I2, Y = diag(2, 1).
inline ShallowInstance example1_linear(Index d1) {
    return ShallowInstance::make(Matrix::Identity(2, 2), diag_matrix({2.0, 1.0}), d1);
}

struct RandomInstanceOptions {
    Index max_dim = 8;
    Index min_dim = 1;
    bool force_r_at_least_2 = false;
};

inline ShallowInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& opts = {}) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> dim(opts.min_dim, opts.max_dim);
    for (int attempt = 0; attempt < 100; ++attempt) {
        const Index d0 = dim(rng), d2 = dim(rng), d1 = dim(rng), m = dim(rng);
        Matrix x = random_gaussian(d0, m, rng());
        Matrix y = random_gaussian(d2, m, rng());
        ShallowInstance inst = ShallowInstance::make(std::move(x), std::move(y), d1);
        if (opts.force_r_at_least_2 && inst.sigma.group_count() < 2) continue;
        return inst;
    }
    throw std::runtime_error("random_instance: could not satisfy the structure request");
}

/// Any valid pattern, rank uniform over [0, min(d1, d2)] clamped to the
/// available spectrum.
inline BlockPattern random_pattern(const GroupedSVD& sigma, Index d1, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const Index max_rank = std::min<Index>(std::min(sigma.dim(), d1),
                                           sigma.positive_total() + sigma.zero_count);
    std::uniform_int_distribution<Index> rank_dist(0, max_rank);
    Index budget = rank_dist(rng);

    BlockPattern p;
    p.per_group.assign(sigma.groups.size(), 0);
    std::vector<Index> capacity;
    for (const auto& g : sigma.groups) capacity.push_back(g.multiplicity);
    capacity.push_back(sigma.zero_count);

    while (budget > 0) {
        std::uniform_int_distribution<std::size_t> pick(0, capacity.size() - 1);
        const std::size_t slot = pick(rng);
        if (capacity[slot] == 0) continue;
        --capacity[slot];
        --budget;
        if (slot + 1 == capacity.size())
            ++p.p_bar;
        else
            ++p.per_group[slot];
    }
    return p;
}

/// L1 generator: zero by default; when side-condition structure allows a
/// free L1 (full-rank V or a nontrivial row-kernel of X), a random one.
inline Matrix random_feasible_l1(const BlockPattern& pattern, const ShallowInstance& inst,
                                 std::uint64_t seed) {
    if (pattern.rank() == inst.d1)
        return 0.5 * random_gaussian(inst.d1, inst.d0(), seed); // ker(V) = 0
    Matrix xx_proj = inst.x * inst.x_pinv;
    Matrix ker = Matrix::Identity(inst.d0(), inst.d0()) - xx_proj;
    if (ker.norm() > 1e-8)
        return 0.5 * random_gaussian(inst.d1, inst.d0(), seed) * ker;
    return Matrix::Zero(inst.d1, inst.d0());
}

/// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double lx = std::log(xs[i]), ly = std::log(std::abs(ys[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace landscape::testing

#endif
