#include "landscape/relu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "landscape/parallel.hpp"

namespace landscape {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ReluInstance ReluInstance::make(Matrix x, Matrix y, Index d1) {
    if (!all_finite(x) || !all_finite(y)) throw InvalidInput("relu instance: non-finite data");
    if (x.cols() != y.cols())
        throw DimensionError("relu instance: X and Y must have the same number of samples");
    if (d1 < 1) throw InvalidInput("relu instance: hidden width must be positive");
    return ReluInstance{std::move(x), std::move(y), d1};
}

void ActivationCone::validate(const ReluInstance& inst) const {
    for (Index i : rows)
        if (i < 0 || i >= inst.d1) throw InvalidInput("cone: row index out of range");
    for (Index j : cols)
        if (j < 0 || j >= inst.samples()) throw InvalidInput("cone: column index out of range");
    if (!std::is_sorted(rows.begin(), rows.end()) || !std::is_sorted(cols.begin(), cols.end()))
        throw InvalidInput("cone: index sets must be sorted");
    if (margin < 0.0) throw InvalidInput("cone: margin must be nonnegative");
}

double relu_loss(const Matrix& a1, const Matrix& a2, const ReluInstance& inst) {
    if (a1.rows() != inst.d1 || a1.cols() != inst.d0() || a2.rows() != inst.d2() ||
        a2.cols() != inst.d1)
        throw DimensionError("relu_loss: weight shapes incompatible with instance");
    Matrix h = (a1 * inst.x).cwiseMax(0.0);
    return 0.5 * (a2 * h - inst.y).squaredNorm();
}

std::pair<Matrix, Matrix> relu_gradients(const Matrix& a1, const Matrix& a2,
                                         const ReluInstance& inst) {
    if (a1.rows() != inst.d1 || a1.cols() != inst.d0() || a2.rows() != inst.d2() ||
        a2.cols() != inst.d1)
        throw DimensionError("relu_gradients: weight shapes incompatible with instance");
    Matrix z = a1 * inst.x;
    Matrix h = z.cwiseMax(0.0);
    Matrix mask = (z.array() > 0.0).cast<double>();
    Matrix residual = a2 * h - inst.y;
    Matrix g2 = residual * h.transpose();
    Matrix g1 = ((a2.transpose() * residual).array() * mask.array()).matrix() *
                inst.x.transpose();
    return {std::move(g1), std::move(g2)};
}

ConeCheck cone_membership(const Matrix& a1, const ReluInstance& inst,
                          const ActivationCone& cone) {
    cone.validate(inst);
    Matrix z = a1 * inst.x;
    std::vector<char> in_i(inst.d1, 0), in_j(inst.samples(), 0);
    for (Index i : cone.rows) in_i[i] = 1;
    for (Index j : cone.cols) in_j[j] = 1;

    ConeCheck check;
    check.active_slack = kInf;
    check.strict_slack = kInf;
    for (Index i = 0; i < z.rows(); ++i) {
        for (Index j = 0; j < z.cols(); ++j) {
            if (in_i[i] && in_j[j])
                check.active_slack = std::min(check.active_slack, z(i, j));
            else
                check.strict_slack = std::min(check.strict_slack, -cone.margin - z(i, j));
        }
    }
    check.inside = check.active_slack >= 0.0 && check.strict_slack >= 0.0;
    return check;
}

std::optional<ActivationCone> cone_of(const Matrix& a1, const ReluInstance& inst,
                                      double margin) {
    Matrix z = a1 * inst.x;
    ActivationCone cone;
    cone.margin = margin;
    std::vector<char> in_i(z.rows(), 0), in_j(z.cols(), 0);
    for (Index i = 0; i < z.rows(); ++i)
        for (Index j = 0; j < z.cols(); ++j)
            if (z(i, j) >= 0.0) in_i[i] = in_j[j] = 1;
    for (Index i = 0; i < z.rows(); ++i)
        if (in_i[i]) cone.rows.push_back(i);
    for (Index j = 0; j < z.cols(); ++j)
        if (in_j[j]) cone.cols.push_back(j);
    // The active set must fill the rectangle exactly.
    return cone_membership(a1, inst, cone).inside ? std::optional<ActivationCone>(cone)
                                                  : std::nullopt;
}

namespace {

Matrix select_cols(const Matrix& m, const std::vector<Index>& idx) {
    Matrix out(m.rows(), static_cast<Index>(idx.size()));
    for (Index k = 0; k < out.cols(); ++k) out.col(k) = m.col(idx[k]);
    return out;
}

std::vector<Index> complement(const std::vector<Index>& idx, Index n) {
    std::vector<char> mark(n, 0);
    for (Index i : idx) mark[i] = 1;
    std::vector<Index> out;
    for (Index i = 0; i < n; ++i)
        if (!mark[i]) out.push_back(i);
    return out;
}

} // namespace

ReducedInstance reduced_instance(const ActivationCone& cone, const ReluInstance& inst,
                                 double group_tol) {
    cone.validate(inst);
    ReducedInstance red;
    Matrix y_rest = select_cols(inst.y, complement(cone.cols, inst.samples()));
    red.offset = 0.5 * y_rest.squaredNorm();
    if (cone.rows.empty() || cone.cols.empty()) {
        red.constant = true;
        red.offset = 0.5 * inst.y.squaredNorm();
        return red;
    }
    red.shallow = ShallowInstance::make(select_cols(inst.x, cone.cols),
                                        select_cols(inst.y, cone.cols),
                                        static_cast<Index>(cone.rows.size()), group_tol);
    return red;
}

namespace {

// Least-squares push toward constant negative targets: find a row w with
// w * cols < -margin entrywise, or report infeasibility.
std::optional<Eigen::RowVectorXd> negative_row(const Matrix& basis, const Eigen::RowVectorXd& base,
                                               double margin, std::uint64_t seed) {
    const Index n = basis.cols();
    if (n == 0) return Eigen::RowVectorXd::Zero(basis.rows());
    Matrix basis_pinv = pinv(basis);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int attempt = 0; attempt < 20; ++attempt) {
        const double push = std::pow(10.0, attempt / 5); // 1, 10, 100, 1000 tiers
        Eigen::RowVectorXd target(n);
        for (Index j = 0; j < n; ++j) {
            const double jitter = attempt == 0 ? 0.0 : unif(rng);
            target(j) = -base(j) - push * (1.0 + jitter);
        }
        Eigen::RowVectorXd w = target * basis_pinv;
        Eigen::RowVectorXd achieved = base + w * basis;
        if ((achieved.array() < -margin).all()) return w;
    }
    return std::nullopt;
}

} // namespace

ReluCertifiedPoint construct_relu_critical(const ActivationCone& cone,
                                           const CriticalPointSpec& spec,
                                           const ReluInstance& inst, const Tolerances& tol) {
    ReducedInstance red = reduced_instance(cone, inst, tol.group_tol);
    if (red.constant)
        throw InvalidSpec("construct_relu_critical: constant cone has no reduced problem");

    CertifiedPoint reduced_point = construct_critical(spec, *red.shallow, tol);

    Matrix a1 = Matrix::Zero(inst.d1, inst.d0());
    Matrix a2 = Matrix::Zero(inst.d2(), inst.d1);
    for (Index k = 0; k < static_cast<Index>(cone.rows.size()); ++k) {
        a1.row(cone.rows[k]) = reduced_point.a1.row(k);
        a2.col(cone.rows[k]) = reduced_point.a2.col(k);
    }

    // Free rows must stay strictly negative on every sample.
    std::vector<Index> free_rows = complement(cone.rows, inst.d1);
    if (!free_rows.empty()) {
        auto w = negative_row(inst.x, Eigen::RowVectorXd::Zero(inst.samples()), cone.margin,
                              0x5eedULL);
        if (!w)
            throw ConeViolation("construct_relu_critical: no row is strictly negative on all "
                                "samples; the cone is empty for inactive units");
        for (Index i : free_rows) a1.row(i) = *w;
    }

    ReluCertifiedPoint point;
    point.membership = cone_membership(a1, inst, cone);
    if (!point.membership.inside)
        throw ConeViolation("construct_relu_critical: existence inequalities fail for this spec");

    point.a1 = std::move(a1);
    point.a2 = std::move(a2);
    point.cone = cone;
    point.offset = red.offset;
    point.reduced = std::move(reduced_point);
    point.loss_value = relu_loss(point.a1, point.a2, inst);

    auto [g1, g2] = relu_gradients(point.a1, point.a2, inst);
    point.full_grad_norms = {g1.norm(), g2.norm()};
    return point;
}

std::vector<SearchHit> exist_search_d1_1(const ReluInstance& inst, const SearchOptions& opts) {
    if (inst.d1 != 1) throw InvalidInput("exist_search_d1_1: requires d1 = 1");
    const Index m = inst.samples();
    if (m > opts.max_samples)
        throw SearchBudgetExceeded("exist_search_d1_1: " + std::to_string(m) +
                                   " samples exceed the 2^m enumeration budget");

    const std::uint64_t n_masks = 1ull << m;
    std::vector<std::vector<SearchHit>> per_mask(n_masks);

    parallel_for(static_cast<std::int64_t>(n_masks), [&](std::int64_t mask) {
        std::vector<Index> cols;
        for (Index j = 0; j < m; ++j)
            if (mask & (1ull << j)) cols.push_back(j);
        ActivationCone cone{{0}, cols, opts.margin};

        if (cols.empty()) {
            // Constant cone: any strictly negative row works, loss is fixed.
            auto w = negative_row(inst.x, Eigen::RowVectorXd::Zero(m), opts.margin,
                                  opts.seed ^ 0xabcdULL);
            if (!w) return;
            SearchHit hit;
            hit.cols = cols;
            hit.group = -1;
            hit.sigma = 0.0;
            hit.a1 = *w;
            hit.a2 = Matrix::Zero(inst.d2(), 1);
            hit.loss_value = relu_loss(hit.a1, hit.a2, inst);
            ConeCheck check = cone_membership(hit.a1, inst, cone);
            if (!check.inside) return;
            hit.strict_slack = check.strict_slack;
            hit.active_slack = check.active_slack;
            per_mask[mask].push_back(std::move(hit));
            return;
        }

        Matrix xj = select_cols(inst.x, cols);
        Matrix yj = select_cols(inst.y, cols);
        std::vector<Index> rest = complement(cols, m);
        Matrix xrest = select_cols(inst.x, rest);
        Matrix xj_pinv = pinv(xj);
        Matrix sigma_raw = yj * xj_pinv * xj * yj.transpose();
        GroupedSVD sigma = grouped_eig_psd(0.5 * (sigma_raw + sigma_raw.transpose()),
                                           opts.tol.group_tol);
        Matrix kernel_proj = Matrix::Identity(inst.d0(), inst.d0()) - xj * xj_pinv;

        ShallowInstance reduced = ShallowInstance::make(xj, yj, 1, opts.tol.group_tol);

        for (Index g = 0; g < sigma.group_count(); ++g) {
            for (double c : {1.0, -1.0}) {
                Vector u_g = sigma.basis.col(sigma.group_offset(g));
                Eigen::RowVectorXd base = (1.0 / c) * (u_g.transpose() * yj * xj_pinv);

                Eigen::RowVectorXd on_j = base * xj;
                if (!(on_j.array() >= -1e-12 * (1.0 + on_j.norm())).all()) continue;

                Eigen::RowVectorXd base_rest =
                    rest.empty() ? Eigen::RowVectorXd(0) : Eigen::RowVectorXd(base * xrest);
                Matrix basis = kernel_proj * xrest;
                auto l1 = negative_row(basis, base_rest, opts.margin,
                                       opts.seed + 1315423911ull * (mask + 7) + g);
                if (!l1) continue;

                SearchHit hit;
                hit.cols = cols;
                hit.group = g;
                hit.sigma = sigma.groups[g].value;
                hit.a1 = base + *l1 * kernel_proj;
                hit.a2 = c * u_g;
                ConeCheck check = cone_membership(hit.a1, inst, cone);
                if (!check.inside) continue;

                auto [g1, g2] = gradients(hit.a1, hit.a2, reduced);
                if (std::max(g1.norm(), g2.norm()) >
                    opts.tol.crit_tol * reduced.grad_scale() * (1.0 + hit.a1.norm() + hit.a2.norm()))
                    continue;

                hit.strict_slack = check.strict_slack;
                hit.active_slack = check.active_slack;
                hit.loss_value = relu_loss(hit.a1, hit.a2, inst);
                per_mask[mask].push_back(std::move(hit));
            }
        }
    });

    std::vector<SearchHit> hits;
    for (auto& bucket : per_mask)
        for (auto& hit : bucket) hits.push_back(std::move(hit));
    std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.cols != b.cols) return a.cols < b.cols;
        return a.group < b.group;
    });
    return hits;
}

double local_min_probe_in_cone(const Matrix& a1, const Matrix& a2, const ActivationCone& cone,
                               const ReluInstance& inst, double radius, Index n_samples,
                               std::uint64_t seed) {
    ConeCheck check = cone_membership(a1, inst, cone);
    if (!check.inside || check.worst_slack() <= 0.0)
        throw PointOnBoundary("local_min_probe_in_cone: point is not strictly inside the cone");

    double max_col = 0.0;
    for (Index j = 0; j < inst.samples(); ++j) max_col = std::max(max_col, inst.x.col(j).norm());
    const double bound = 0.99 * check.worst_slack() / (max_col + 1e-300);
    const double r = std::min(radius, bound);

    const double base_loss = relu_loss(a1, a2, inst);
    const Index n1 = a1.size(), n2 = a2.size();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    double min_delta = kInf;
    Matrix d1m(a1.rows(), a1.cols()), d2m(a2.rows(), a2.cols());
    for (Index s = 0; s < n_samples; ++s) {
        double norm_sq = 0.0;
        for (Index i = 0; i < n1; ++i) {
            d1m.data()[i] = normal(rng);
            norm_sq += d1m.data()[i] * d1m.data()[i];
        }
        for (Index i = 0; i < n2; ++i) {
            d2m.data()[i] = normal(rng);
            norm_sq += d2m.data()[i] * d2m.data()[i];
        }
        const double scale = r / std::sqrt(norm_sq);
        const double trial = relu_loss(a1 + scale * d1m, a2 + scale * d2m, inst);
        min_delta = std::min(min_delta, trial - base_loss);
    }
    return min_delta;
}

} // namespace landscape
