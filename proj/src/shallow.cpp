#include "landscape/shallow.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace landscape {

ShallowInstance ShallowInstance::make(Matrix x, Matrix y, Index d1, double group_tol) {
    if (!all_finite(x) || !all_finite(y))
        throw InvalidInput("shallow instance: non-finite data");
    if (x.cols() != y.cols())
        throw DimensionError("shallow instance: X and Y must have the same number of samples");
    if (d1 < 1) throw InvalidInput("shallow instance: hidden width must be positive");

    ShallowInstance inst;
    inst.x = std::move(x);
    inst.y = std::move(y);
    inst.d1 = d1;
    inst.x_pinv = pinv(inst.x);
    inst.yx_pinv = inst.y * inst.x_pinv;
    // Same expression and evaluation order as the deep module's Sigma_k,
    // so the two agree bit for bit on ell = 2 data.
    Matrix proj = inst.x_pinv * inst.x;
    Matrix sigma = inst.y * proj * inst.y.transpose();
    inst.sigma = grouped_eig_psd(0.5 * (sigma + sigma.transpose()), group_tol);
    return inst;
}

Index BlockPattern::rank() const {
    Index r = p_bar;
    for (Index p : per_group) r += p;
    return r;
}

void BlockPattern::validate(const GroupedSVD& sigma, Index d1) const {
    if (static_cast<Index>(per_group.size()) != sigma.group_count())
        throw InvalidSpec("pattern: group count mismatch");
    for (Index g = 0; g < sigma.group_count(); ++g) {
        if (per_group[g] < 0 || per_group[g] > sigma.groups[g].multiplicity)
            throw InvalidSpec("pattern: p_i out of [0, m_i]");
    }
    if (p_bar < 0 || p_bar > sigma.zero_count)
        throw InvalidSpec("pattern: p_bar out of [0, zero_count]");
    if (rank() > std::min(sigma.dim(), d1))
        throw InvalidSpec("pattern: rank exceeds min(d2, d1)");
}

bool BlockPattern::is_prefix_maximal(const GroupedSVD& sigma) const {
    if (p_bar != 0) return false;
    bool seen_partial = false;
    for (Index g = 0; g < static_cast<Index>(per_group.size()); ++g) {
        if (seen_partial && per_group[g] > 0) return false;
        if (per_group[g] < sigma.groups[g].multiplicity) seen_partial = true;
    }
    return true;
}

BlockPattern BlockPattern::prefix(const GroupedSVD& sigma, Index rank) {
    BlockPattern p;
    Index remaining = rank;
    for (const auto& g : sigma.groups) {
        Index take = std::min(remaining, g.multiplicity);
        p.per_group.push_back(take);
        remaining -= take;
    }
    p.p_bar = remaining;
    if (p.p_bar > sigma.zero_count)
        throw InvalidSpec("prefix pattern: rank exceeds the spectrum size");
    return p;
}

CriticalPointSpec CriticalPointSpec::canonical(const BlockPattern& pattern,
                                               const ShallowInstance& inst) {
    pattern.validate(inst.sigma, inst.d1);
    CriticalPointSpec spec;
    spec.pattern = pattern;
    for (Index g = 0; g < inst.sigma.group_count(); ++g) {
        spec.v_blocks.push_back(
            Matrix::Identity(inst.sigma.groups[g].multiplicity, pattern.per_group[g]));
    }
    spec.v_bar = Matrix::Identity(inst.sigma.zero_count, pattern.p_bar);
    spec.c = Matrix::Identity(inst.d1, inst.d1);
    spec.l1 = Matrix::Zero(inst.d1, inst.d0());
    return spec;
}

CriticalPointSpec CriticalPointSpec::randomized(const BlockPattern& pattern,
                                                const ShallowInstance& inst, std::uint64_t seed) {
    pattern.validate(inst.sigma, inst.d1);
    CriticalPointSpec spec;
    spec.pattern = pattern;
    std::uint64_t s = seed;
    for (Index g = 0; g < inst.sigma.group_count(); ++g) {
        spec.v_blocks.push_back(
            random_orthonormal(inst.sigma.groups[g].multiplicity, pattern.per_group[g], ++s));
    }
    spec.v_bar = random_orthonormal(inst.sigma.zero_count, pattern.p_bar, ++s);
    spec.c = random_well_conditioned(inst.d1, ++s);
    spec.l1 = Matrix::Zero(inst.d1, inst.d0());
    return spec;
}

Matrix assemble_block_v(const std::vector<Matrix>& blocks, const Matrix& v_bar,
                        const GroupedSVD& sigma, Index total_cols) {
    Matrix v = Matrix::Zero(sigma.dim(), total_cols);
    Index row = 0, col = 0;
    for (Index g = 0; g < sigma.group_count(); ++g) {
        const Matrix& block = blocks[g];
        v.block(row, col, block.rows(), block.cols()) = block;
        row += sigma.groups[g].multiplicity;
        col += block.cols();
    }
    v.block(row, col, v_bar.rows(), v_bar.cols()) = v_bar;
    return v;
}

Matrix build_group_completion(const std::vector<Matrix>& blocks, const Matrix& v_bar,
                              const GroupedSVD& sigma) {
    Matrix s = Matrix::Zero(sigma.dim(), sigma.dim());
    Index off = 0;
    for (Index g = 0; g < sigma.group_count(); ++g) {
        const Index m = sigma.groups[g].multiplicity;
        const Matrix& v = blocks[g];
        s.block(off, off, m, v.cols()) = v;
        s.block(off, off + v.cols(), m, m - v.cols()) = orthonormal_completion(v);
        off += m;
    }
    const Index mbar = sigma.zero_count;
    if (mbar > 0) {
        s.block(off, off, mbar, v_bar.cols()) = v_bar;
        s.block(off, off + v_bar.cols(), mbar, mbar - v_bar.cols()) =
            orthonormal_completion(v_bar);
    }
    return s;
}

Matrix CriticalPointSpec::assemble_v(const ShallowInstance& inst) const {
    return assemble_block_v(v_blocks, v_bar, inst.sigma, inst.d1);
}

void CriticalPointSpec::validate(const ShallowInstance& inst) const {
    pattern.validate(inst.sigma, inst.d1);
    if (static_cast<Index>(v_blocks.size()) != inst.sigma.group_count())
        throw InvalidSpec("spec: v_blocks count mismatch");
    auto check_block = [](const Matrix& b, Index rows, Index cols, const char* what) {
        if (b.rows() != rows || b.cols() != cols)
            throw InvalidSpec(std::string("spec: bad shape for ") + what);
        if (cols > 0 && (b.transpose() * b - Matrix::Identity(cols, cols)).norm() > 1e-9)
            throw InvalidSpec(std::string("spec: non-orthonormal columns in ") + what);
    };
    for (Index g = 0; g < inst.sigma.group_count(); ++g)
        check_block(v_blocks[g], inst.sigma.groups[g].multiplicity, pattern.per_group[g], "V_i");
    check_block(v_bar, inst.sigma.zero_count, pattern.p_bar, "V_bar");

    if (c.rows() != inst.d1 || c.cols() != inst.d1)
        throw InvalidSpec("spec: C must be d1 x d1");
    Eigen::JacobiSVD<Matrix> svd(c);
    const Vector& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-10 * sv(0))
        throw InvalidSpec("spec: C numerically singular");
    if (l1.rows() != inst.d1 || l1.cols() != inst.d0())
        throw InvalidSpec("spec: L1 must be d1 x d0");
}

double CriticalPointSpec::scale(const ShallowInstance& inst) const {
    Eigen::JacobiSVD<Matrix> svd(c);
    const Vector& sv = svd.singularValues();
    const double cmax = sv(0);
    const double cinv = sv(sv.size() - 1) > 0.0 ? 1.0 / sv(sv.size() - 1) : 1e300;
    return 1.0 + inst.y.norm() * inst.x.norm() * std::max(1.0, cmax) * std::max(1.0, cinv);
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::GlobalMinCase1: return "GlobalMinCase1";
        case Classification::GlobalMinCase2: return "GlobalMinCase2";
        case Classification::NonOptimalOrder: return "NonOptimalOrder";
        case Classification::OptimalOrder: return "OptimalOrder";
        case Classification::OtherCritical: return "OtherCritical";
        case Classification::NotCritical: return "NotCritical";
    }
    return "?";
}

bool is_global_min(Classification c) {
    return c == Classification::GlobalMinCase1 || c == Classification::GlobalMinCase2;
}

bool is_critical(Classification c) { return c != Classification::NotCritical; }

double CertifiedPoint::max_grad_norm() const {
    double m = 0.0;
    for (double g : grad_norms) m = std::max(m, g);
    return m;
}

double loss(const Matrix& a1, const Matrix& a2, const ShallowInstance& inst) {
    if (a1.rows() != a2.cols() || a1.cols() != inst.d0() || a2.rows() != inst.d2())
        throw DimensionError("loss: weight shapes incompatible with instance");
    // Right-to-left product, matching the deep module's chain evaluation.
    return 0.5 * (a2 * (a1 * inst.x) - inst.y).squaredNorm();
}

std::pair<Matrix, Matrix> gradients(const Matrix& a1, const Matrix& a2,
                                    const ShallowInstance& inst) {
    if (a1.rows() != a2.cols() || a1.cols() != inst.d0() || a2.rows() != inst.d2())
        throw DimensionError("gradients: weight shapes incompatible with instance");
    Matrix residual = a2 * (a1 * inst.x) - inst.y;
    Matrix g1 = a2.transpose() * residual * inst.x.transpose();
    Matrix g2 = residual * inst.x.transpose() * a1.transpose();
    return {std::move(g1), std::move(g2)};
}

double check_side_condition(const CriticalPointSpec& spec, const ShallowInstance& inst) {
    Matrix v = spec.assemble_v(inst);
    Matrix uv = inst.sigma.basis * v;
    Matrix p_perp = Matrix::Identity(inst.d2(), inst.d2()) - uv * uv.transpose();
    Matrix p_ker = Matrix::Identity(inst.d1, inst.d1) - v.transpose() * v;
    Matrix core = inst.y * inst.x.transpose() * spec.l1.transpose() * spec.c.transpose();
    return (p_perp * core * p_ker).norm();
}

namespace {

// A1 per the closed form, with U and V possibly substituted by a
// perturbation (the kernel term always uses the spec's own V and C).
Matrix closed_form_a1(const Matrix& basis, const Matrix& v, const CriticalPointSpec& spec,
                      const ShallowInstance& inst) {
    Eigen::PartialPivLU<Matrix> lu(spec.c);
    Matrix lead = lu.solve(v.transpose() * (basis.transpose() * inst.yx_pinv));
    Matrix spec_v = spec.assemble_v(inst);
    Matrix kern = lu.solve(spec_v.transpose() * spec_v * spec.c * spec.l1 * (inst.x * inst.x_pinv));
    return lead + spec.l1 - kern;
}

} // namespace

Classification classify_pattern(const BlockPattern& pattern, Index a2_rank,
                                const ShallowInstance& inst) {
    const GroupedSVD& sigma = inst.sigma;
    if (pattern.rank() != a2_rank) return Classification::OtherCritical;

    const Index budget = inst.rank_budget();
    const Index positive = sigma.positive_total();

    if (budget <= positive) {
        if (a2_rank == budget && pattern.is_prefix_maximal(sigma))
            return Classification::GlobalMinCase1;
    } else {
        bool all_full = true;
        for (Index g = 0; g < sigma.group_count(); ++g)
            if (pattern.per_group[g] != sigma.groups[g].multiplicity) all_full = false;
        if (all_full) return Classification::GlobalMinCase2;
    }

    for (Index i = 0; i < sigma.group_count(); ++i) {
        if (pattern.per_group[i] >= sigma.groups[i].multiplicity) continue;
        for (Index j = i + 1; j < sigma.group_count(); ++j)
            if (pattern.per_group[j] > 0) return Classification::NonOptimalOrder;
    }

    if (a2_rank < budget && pattern.is_prefix_maximal(sigma))
        return Classification::OptimalOrder;

    return Classification::OtherCritical;
}

CertifiedPoint construct_critical(const CriticalPointSpec& spec, const ShallowInstance& inst,
                                  const Tolerances& tol) {
    spec.validate(inst);

    const double side_residual = check_side_condition(spec, inst);
    const double side_scale =
        1.0 + (inst.y * inst.x.transpose() * spec.l1.transpose() * spec.c.transpose()).norm();
    if (side_residual > tol.side_tol * side_scale)
        throw SideConditionViolated("side condition residual " + std::to_string(side_residual) +
                                    " exceeds tolerance; (L1, V, C) does not generate a critical point");

    Matrix v = spec.assemble_v(inst);
    Matrix a2 = inst.sigma.basis * v * spec.c;
    Matrix a1 = closed_form_a1(inst.sigma.basis, v, spec, inst);

    auto [g1, g2] = gradients(a1, a2, inst);

    CertifiedPoint point;
    point.a1 = std::move(a1);
    point.a2 = std::move(a2);
    point.loss_value = loss(point.a1, point.a2, inst);
    point.grad_norms = {g1.norm(), g2.norm()};
    point.side_residual = side_residual;
    point.pattern = spec.pattern;
    point.spec = spec;

    const bool grads_ok = point.max_grad_norm() <= tol.crit_tol * spec.scale(inst);
    point.classification = grads_ok ? classify_pattern(spec.pattern, spec.pattern.rank(), inst)
                                    : Classification::NotCritical;
    return point;
}

double loss_formula(const BlockPattern& pattern, const ShallowInstance& inst) {
    double captured = 0.0;
    for (Index g = 0; g < inst.sigma.group_count(); ++g)
        captured += static_cast<double>(pattern.per_group[g]) * inst.sigma.groups[g].value;
    return 0.5 * (inst.y.squaredNorm() - captured);
}

PatternRecovery recover_pattern(const Matrix& a2, const ShallowInstance& inst,
                                const Tolerances& tol) {
    return recover_pattern(a2, inst.sigma, tol);
}

PatternRecovery recover_pattern(const Matrix& a2, const GroupedSVD& sigma,
                                const Tolerances& tol) {
    Matrix pu = sigma.basis.transpose() * proj_col(a2) * sigma.basis;

    PatternRecovery rec;
    const Index n_blocks = sigma.group_count() + (sigma.zero_count > 0 ? 1 : 0);
    std::vector<Index> offsets(n_blocks + 1, 0);
    for (Index g = 0; g < sigma.group_count(); ++g)
        offsets[g + 1] = offsets[g] + sigma.groups[g].multiplicity;
    if (sigma.zero_count > 0) offsets[n_blocks] = offsets[n_blocks - 1] + sigma.zero_count;

    double offdiag_sq = 0.0;
    bool clean = true;
    for (Index gi = 0; gi < n_blocks; ++gi) {
        for (Index gj = 0; gj < n_blocks; ++gj) {
            Matrix block = pu.block(offsets[gi], offsets[gj], offsets[gi + 1] - offsets[gi],
                                    offsets[gj + 1] - offsets[gj]);
            if (gi != gj) {
                offdiag_sq += block.squaredNorm();
                continue;
            }
            const double tr = block.trace();
            const Index p = static_cast<Index>(std::llround(tr));
            if (std::abs(tr - static_cast<double>(p)) > tol.block_tol) clean = false;
            const Index cap = offsets[gi + 1] - offsets[gi];
            const Index p_clamped = std::clamp<Index>(p, 0, cap);
            if (p_clamped != p) clean = false;
            if (gi < sigma.group_count())
                rec.pattern.per_group.push_back(p_clamped);
            else
                rec.pattern.p_bar = p_clamped;
        }
    }
    while (static_cast<Index>(rec.pattern.per_group.size()) < sigma.group_count())
        rec.pattern.per_group.push_back(0);

    rec.offdiag_residual = std::sqrt(offdiag_sq);
    if (rec.offdiag_residual > tol.block_tol) clean = false;
    if (rec.pattern.rank() != numerical_rank(a2)) clean = false;
    rec.clean = clean;
    return rec;
}

Classification classify(const Matrix& a1, const Matrix& a2, const ShallowInstance& inst,
                        const Tolerances& tol) {
    auto [g1, g2] = gradients(a1, a2, inst);
    const double scale = inst.grad_scale() * (1.0 + a1.norm() + a2.norm());
    if (std::max(g1.norm(), g2.norm()) > tol.crit_tol * scale)
        return Classification::NotCritical;

    PatternRecovery rec = recover_pattern(a2, inst, tol);
    if (!rec.clean) return Classification::OtherCritical;
    return classify_pattern(rec.pattern, numerical_rank(a2), inst);
}

CriticalPointSpec recover_spec(const Matrix& a1, const Matrix& a2, const ShallowInstance& inst,
                               const Tolerances& tol) {
    const GroupedSVD& sigma = inst.sigma;
    PatternRecovery rec = recover_pattern(a2, inst, tol);
    if (!rec.clean)
        throw InvalidSpec("recover_spec: weights do not carry the block-diagonal structure");

    Matrix pu = sigma.basis.transpose() * proj_col(a2) * sigma.basis;

    CriticalPointSpec spec;
    spec.pattern = rec.pattern;

    auto basis_of_block = [&](Index off, Index m, Index p) {
        if (p == 0) return Matrix(m, 0);
        Matrix block = pu.block(off, off, m, m);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (block + block.transpose()));
        Matrix v(m, p);
        for (Index k = 0; k < p; ++k) v.col(k) = eig.eigenvectors().col(m - 1 - k);
        for (Index c = 0; c < p; ++c) {
            Index imax = 0;
            v.col(c).cwiseAbs().maxCoeff(&imax);
            if (v(imax, c) < 0.0) v.col(c) = -v.col(c);
        }
        return v;
    };

    Index off = 0;
    for (Index g = 0; g < sigma.group_count(); ++g) {
        spec.v_blocks.push_back(
            basis_of_block(off, sigma.groups[g].multiplicity, rec.pattern.per_group[g]));
        off += sigma.groups[g].multiplicity;
    }
    spec.v_bar = basis_of_block(off, sigma.zero_count, rec.pattern.p_bar);

    // C: top rows pinned by V^T U^T A2, bottom rows span its kernel.
    const Index rank = rec.pattern.rank();
    Matrix v = spec.assemble_v(inst);
    Matrix c = Matrix::Identity(inst.d1, inst.d1);
    if (rank > 0) {
        Matrix c_top = v.leftCols(rank).transpose() * sigma.basis.transpose() * a2; // Vhat part
        c.topRows(rank) = c_top;
        if (rank < inst.d1) {
            Eigen::JacobiSVD<Matrix> svd(c_top, Eigen::ComputeFullV);
            c.bottomRows(inst.d1 - rank) = svd.matrixV().rightCols(inst.d1 - rank).transpose();
        }
    }
    spec.c = c;

    if ((sigma.basis * v * spec.c - a2).norm() > 1e-8 * (1.0 + a2.norm()))
        throw InvalidSpec("recover_spec: A2 does not factor as U V C");

    Eigen::PartialPivLU<Matrix> lu(spec.c);
    spec.l1 = a1 - lu.solve(v.transpose() * (sigma.basis.transpose() * inst.yx_pinv));

    Matrix rebuilt = closed_form_a1(sigma.basis, v, spec, inst);
    if ((rebuilt - a1).norm() > 1e-6 * (1.0 + a1.norm()))
        throw InvalidSpec("recover_spec: weights are not of the critical-point form");
    return spec;
}

namespace {

Matrix build_s(const CriticalPointSpec& spec, const ShallowInstance& inst) {
    return build_group_completion(spec.v_blocks, spec.v_bar, inst.sigma);
}

const CriticalPointSpec& spec_of(const CertifiedPoint& point) {
    if (!point.spec) throw InvalidSpec("witness: point carries no spec; recover one first");
    return *point.spec;
}

} // namespace

DescentWitness descent_witness_non_optimal(const CertifiedPoint& point,
                                           const ShallowInstance& inst, double eps) {
    if (point.classification != Classification::NonOptimalOrder)
        throw WrongClass("descent_witness_non_optimal: point is " +
                         to_string(point.classification));
    if (eps <= 0.0) throw InvalidInput("descent_witness_non_optimal: eps must be positive");

    const CriticalPointSpec& spec = spec_of(point);
    const GroupedSVD& sigma = inst.sigma;

    // Smallest skipped group i, largest captured group j > i: maximizes
    // sigma_i - sigma_j among qualifying pairs.
    Index gi = -1, gj = -1;
    for (Index i = 0; i < sigma.group_count(); ++i)
        if (spec.pattern.per_group[i] < sigma.groups[i].multiplicity) {
            gi = i;
            break;
        }
    for (Index j = sigma.group_count() - 1; j > gi; --j)
        if (spec.pattern.per_group[j] > 0) {
            gj = j;
            break;
        }
    if (gi < 0 || gj < 0) throw WrongClass("descent_witness_non_optimal: no qualifying (i, j)");

    Matrix s = build_s(spec, inst);
    Matrix us = sigma.basis * s;
    const Index col_j = sigma.group_offset(gj);                       // first captured of group j
    const Index col_i = sigma.group_offset(gi) + spec.pattern.per_group[gi]; // first free of group i

    Matrix m_tilde = us;
    m_tilde.col(col_j) = (us.col(col_j) + eps * us.col(col_i)) / std::sqrt(1.0 + eps * eps);

    Matrix stv = s.transpose() * spec.assemble_v(inst);
    Matrix a2 = m_tilde * stv * spec.c;
    Matrix a1 = closed_form_a1(m_tilde, stv, spec, inst);

    DescentWitness w;
    w.predicted_drop = eps * eps / (2.0 * (1.0 + eps * eps)) *
                       (sigma.groups[gi].value - sigma.groups[gj].value);
    w.measured_drop = point.loss_value - loss(a1, a2, inst);
    w.a1 = std::move(a1);
    w.a2 = std::move(a2);
    return w;
}

OptimalWitness descent_witness_optimal(const CertifiedPoint& point, const ShallowInstance& inst,
                                       double eps1) {
    if (point.classification != Classification::OptimalOrder)
        throw WrongClass("descent_witness_optimal: point is " + to_string(point.classification));
    if (eps1 <= 0.0) throw InvalidInput("descent_witness_optimal: eps1 must be positive");

    const CriticalPointSpec& spec = spec_of(point);
    const GroupedSVD& sigma = inst.sigma;
    const Index rank = spec.pattern.rank();

    Matrix s = build_s(spec, inst);
    const Index q = rank; // next free position in the S ordering
    const Index gq = sigma.group_of_position(q);
    if (gq >= sigma.group_count())
        throw WitnessFailed("descent_witness_optimal: next direction has zero singular value");
    const double sigma_q = sigma.groups[gq].value;

    Vector u_q = sigma.basis * s.col(q);
    Matrix v = spec.assemble_v(inst);
    Matrix uv_diag = sigma.basis * v.leftCols(rank);
    Matrix cl1 = spec.c * spec.l1;
    const double l1_row_term = (cl1.row(rank) * inst.x).squaredNorm();
    Matrix xx_proj = inst.x * inst.x_pinv;

    Eigen::PartialPivLU<Matrix> lu(spec.c);

    for (int attempt = 0; attempt <= 6; ++attempt) {
        const double e1 = eps1 * std::pow(10.0, -attempt);
        const double e2 = e1 * e1;

        Matrix pre_a2 = Matrix::Zero(inst.d2(), inst.d1);
        pre_a2.leftCols(rank) = uv_diag;
        pre_a2.col(rank) = e2 * u_q;
        Matrix a2 = pre_a2 * spec.c;

        Matrix b = Matrix::Zero(inst.d1, inst.d0());
        b.topRows(rank) = uv_diag.transpose() * inst.yx_pinv;
        b.row(rank) = e1 * (u_q.transpose() * inst.yx_pinv);
        Matrix d = Matrix::Zero(inst.d1, inst.d0());
        d.topRows(rank) = cl1.topRows(rank) * xx_proj;
        Matrix a1 = lu.solve(b + cl1 - d);

        OptimalWitness w;
        w.analytic_drop = (e1 * e2 - 0.5 * e1 * e1 * e2 * e2) * sigma_q - 0.5 * e2 * e2 * l1_row_term;
        w.measured_drop = point.loss_value - loss(a1, a2, inst);
        w.eps1_used = e1;
        if (w.measured_drop > 0.0) {
            w.a1 = std::move(a1);
            w.a2 = std::move(a2);
            return w;
        }
    }
    throw WitnessFailed("descent_witness_optimal: no strict decrease after 6 retries");
}

AscentWitness ascent_witness(const Matrix& a1, const Matrix& a2, const ShallowInstance& inst,
                             double delta) {
    Matrix z = a2 * a1 * inst.x;
    if (z.norm() <= 1e-14 * (1.0 + a2.norm() * a1.norm() * inst.x.norm()))
        throw NotInX("ascent_witness: A2 A1 X = 0");

    Index row = 0;
    z.rowwise().norm().maxCoeff(&row);
    const Vector a = z.row(row).transpose();
    const Vector yr = inst.y.row(row).transpose();
    const double f_prime = a.dot(a - yr);
    const double alpha = 1.0 + delta * (f_prime >= 0.0 ? 1.0 : -1.0);

    AscentWitness w;
    w.a1 = a1;
    w.a2 = a2;
    w.a2.row(row) *= alpha;
    w.measured_rise = loss(w.a1, w.a2, inst) - loss(a1, a2, inst);
    return w;
}

} // namespace landscape
