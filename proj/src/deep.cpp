#include "landscape/deep.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace landscape {

DeepInstance DeepInstance::make(Matrix x, Matrix y, std::vector<Index> dims, double group_tol) {
    if (!all_finite(x) || !all_finite(y)) throw InvalidInput("deep instance: non-finite data");
    if (dims.size() < 3) throw InvalidInput("deep instance: need at least two layers");
    if (x.cols() != y.cols())
        throw DimensionError("deep instance: X and Y must have the same number of samples");
    if (x.rows() != dims.front())
        throw DimensionError("deep instance: X rows must equal d0");
    if (y.rows() != dims.back())
        throw DimensionError("deep instance: Y rows must equal d_ell");
    for (Index d : dims)
        if (d < 1) throw InvalidInput("deep instance: all widths must be positive");

    DeepInstance inst;
    inst.x = std::move(x);
    inst.y = std::move(y);
    inst.dims = std::move(dims);
    inst.x_pinv = pinv(inst.x);
    inst.group_tol = group_tol;
    return inst;
}

Index DeepInstance::rank_budget() const {
    Index b = dims[1];
    for (std::size_t k = 2; k < dims.size(); ++k) b = std::min(b, dims[k]);
    return b;
}

Matrix layer_product(const std::vector<Matrix>& weights, Index i, Index j) {
    if (j > i) {
        // Empty product acts as the identity on the d_{j-1} space; with
        // j = 1 that is the input space.
        const Index d = j >= 2 ? weights[j - 2].rows() : weights.front().cols();
        return Matrix::Identity(d, d);
    }
    Matrix p = weights[j - 1];
    for (Index k = j + 1; k <= i; ++k) p = weights[k - 1] * p;
    return p;
}

namespace {

void check_chain(const std::vector<Matrix>& weights, const DeepInstance& inst) {
    if (static_cast<Index>(weights.size()) != inst.ell())
        throw DimensionError("deep weights: expected one matrix per layer");
    for (Index k = 1; k <= inst.ell(); ++k) {
        const Matrix& a = weights[k - 1];
        if (a.rows() != inst.d(k) || a.cols() != inst.d(k - 1))
            throw DimensionError("deep weights: layer " + std::to_string(k) + " has wrong shape");
    }
}

// A_(k,1) X computed right-to-left; identical arithmetic everywhere so
// grouped bases match bit for bit across construction and analysis.
Matrix lower_product_x(const std::vector<Matrix>& weights, const DeepInstance& inst, Index k) {
    Matrix w = inst.x;
    for (Index j = 1; j <= k; ++j) w = weights[j - 1] * w;
    return w;
}

GroupedSVD grouped_sigma_of(const Matrix& w, const DeepInstance& inst) {
    Matrix proj = pinv(w) * w; // projector onto row(W)
    Matrix sigma = inst.y * proj * inst.y.transpose();
    return grouped_eig_psd(0.5 * (sigma + sigma.transpose()), inst.group_tol);
}

} // namespace

double deep_loss(const std::vector<Matrix>& weights, const DeepInstance& inst) {
    check_chain(weights, inst);
    return 0.5 * (lower_product_x(weights, inst, inst.ell()) - inst.y).squaredNorm();
}

std::vector<Matrix> deep_gradients(const std::vector<Matrix>& weights, const DeepInstance& inst) {
    check_chain(weights, inst);
    const Index ell = inst.ell();

    // prefix[k] = A_(k,1) X, suffix[k] = A_(ell,k+1)
    std::vector<Matrix> prefix(ell + 1);
    prefix[0] = inst.x;
    for (Index k = 1; k <= ell; ++k) prefix[k] = weights[k - 1] * prefix[k - 1];
    std::vector<Matrix> suffix(ell + 1);
    suffix[ell] = Matrix::Identity(inst.d(ell), inst.d(ell));
    for (Index k = ell - 1; k >= 0; --k) suffix[k] = suffix[k + 1] * weights[k];

    Matrix residual = prefix[ell] - inst.y;
    std::vector<Matrix> grads;
    grads.reserve(ell);
    for (Index k = 1; k <= ell; ++k)
        grads.push_back(suffix[k].transpose() * residual * prefix[k - 1].transpose());
    return grads;
}

GroupedSVD sigma_k(const std::vector<Matrix>& weights, const DeepInstance& inst, Index k) {
    if (k < 0 || k > inst.ell() - 1) throw InvalidInput("sigma_k: level out of range");
    if (k > 0) check_chain(weights, inst);
    return grouped_sigma_of(lower_product_x(weights, inst, k), inst);
}

double DeepCertifiedPoint::max_grad_norm() const {
    double m = 0.0;
    for (double g : grad_norms) m = std::max(m, g);
    return m;
}

double DeepCertifiedPoint::max_consistency_residual() const {
    double m = 0.0;
    for (double r : consistency_residuals) m = std::max(m, r);
    return m;
}

std::string to_string(const DeepClassification& c) {
    switch (c.kind) {
        case DeepKind::GlobalMinCase1: return "GlobalMinCase1";
        case DeepKind::GlobalMinCase2: return "GlobalMinCase2";
        case DeepKind::DeepNonOptimalOrder:
            return "DeepNonOptimalOrder(" + std::to_string(c.level) + "," +
                   std::to_string(c.i + 1) + "," + std::to_string(c.j + 1) + ")";
        case DeepKind::DeepOptimalOrder: return "DeepOptimalOrder";
        case DeepKind::OtherCritical: return "OtherCritical";
        case DeepKind::NotCritical: return "NotCritical";
    }
    return "?";
}

bool is_global_min(DeepKind k) {
    return k == DeepKind::GlobalMinCase1 || k == DeepKind::GlobalMinCase2;
}

namespace {

void validate_level(const DeepLevelSpec& level, const GroupedSVD& sigma, const DeepInstance& inst,
                    Index k) {
    level.pattern.validate(sigma, inst.d(k + 1));
    if (static_cast<Index>(level.v_blocks.size()) != sigma.group_count())
        throw InvalidSpec("deep spec: level " + std::to_string(k) + " v_blocks count mismatch");
    auto check_block = [&](const Matrix& b, Index rows, Index cols) {
        if (b.rows() != rows || b.cols() != cols)
            throw InvalidSpec("deep spec: level " + std::to_string(k) + " block shape mismatch");
        if (cols > 0 && (b.transpose() * b - Matrix::Identity(cols, cols)).norm() > 1e-9)
            throw InvalidSpec("deep spec: level " + std::to_string(k) + " block not orthonormal");
    };
    for (Index g = 0; g < sigma.group_count(); ++g)
        check_block(level.v_blocks[g], sigma.groups[g].multiplicity, level.pattern.per_group[g]);
    check_block(level.v_bar, sigma.zero_count, level.pattern.p_bar);

    if (level.c.rows() != inst.d(k + 1) || level.c.cols() != inst.d(k + 1))
        throw InvalidSpec("deep spec: level " + std::to_string(k) + " C has wrong shape");
    Eigen::JacobiSVD<Matrix> svd(level.c);
    if (svd.singularValues()(svd.singularValues().size() - 1) <=
        1e-10 * svd.singularValues()(0))
        throw InvalidSpec("deep spec: level " + std::to_string(k) + " C numerically singular");
    if (level.l.rows() != inst.d(k + 1) || level.l.cols() != inst.d(k))
        throw InvalidSpec("deep spec: level " + std::to_string(k) + " L has wrong shape");
}

// A_{k+1} per the level-k closed form.
Matrix extract_layer(const DeepLevelSpec& level, const GroupedSVD& sigma, const Matrix& w,
                     const Matrix& w_pinv, const DeepInstance& inst, Index d_next) {
    Matrix v = assemble_block_v(level.v_blocks, level.v_bar, sigma, d_next);
    Eigen::PartialPivLU<Matrix> lu(level.c);
    Matrix lead = lu.solve(v.transpose() * (sigma.basis.transpose() * (inst.y * w_pinv)));
    Matrix kern = lu.solve(v.transpose() * v * level.c * level.l * (w * w_pinv));
    return lead + level.l - kern;
}

double deep_spec_scale(const DeepSpec& spec, const DeepInstance& inst) {
    double cond = 1.0;
    for (const auto& level : spec.levels) {
        Eigen::JacobiSVD<Matrix> svd(level.c);
        const Vector& sv = svd.singularValues();
        cond *= std::max(1.0, sv(0)) * std::max(1.0, 1.0 / sv(sv.size() - 1));
    }
    return 1.0 + inst.y.norm() * inst.x.norm() * cond;
}

} // namespace

DeepCertifiedPoint construct_deep_critical(const DeepSpec& spec, const DeepInstance& inst,
                                           const Tolerances& tol) {
    const Index ell = inst.ell();
    if (static_cast<Index>(spec.levels.size()) != ell - 1)
        throw InvalidSpec("deep spec: expected ell - 1 levels");

    std::vector<Matrix> weights(ell);
    std::vector<Matrix> prescribed(ell - 1); // prescribed[k] = A_(ell,k+2)

    Matrix w = inst.x; // A_(k,1) X for the current k
    for (Index k = 0; k <= ell - 2; ++k) {
        GroupedSVD sigma = grouped_sigma_of(w, inst);
        const DeepLevelSpec& level = spec.levels[k];
        validate_level(level, sigma, inst, k);

        Matrix v = assemble_block_v(level.v_blocks, level.v_bar, sigma, inst.d(k + 1));
        prescribed[k] = sigma.basis * v * level.c;
        Matrix w_pinv = pinv(w);
        weights[k] = extract_layer(level, sigma, w, w_pinv, inst, inst.d(k + 1));
        w = weights[k] * w;
    }
    weights[ell - 1] = prescribed[ell - 2];

    DeepCertifiedPoint point;
    point.weights = weights;
    point.loss_value = deep_loss(weights, inst);
    for (const Matrix& g : deep_gradients(weights, inst)) point.grad_norms.push_back(g.norm());
    point.pattern0 = spec.levels[0].pattern;
    point.spec = spec;

    // Both coupling conditions, k = 2 .. ell-1 (1-based layers).
    Matrix lower = layer_product(weights, ell - 1, 1);
    Matrix yxat = inst.y * inst.x.transpose() * lower.transpose();
    const double proj_scale = 1.0 + yxat.norm();
    for (Index k = 2; k <= ell - 1; ++k) {
        const Matrix& whole = prescribed[k - 2];   // A_(ell,k)
        const Matrix& tail = prescribed[k - 1];    // A_(ell,k+1)
        const double fact =
            (whole - tail * weights[k - 1]).norm() / (1.0 + whole.norm());
        const double proj =
            ((Matrix::Identity(inst.d(ell), inst.d(ell)) - proj_col(tail)) * yxat).norm() /
            proj_scale;
        point.consistency_residuals.push_back(std::max(fact, proj));
    }

    const bool grads_ok = point.max_grad_norm() <= tol.crit_tol * deep_spec_scale(spec, inst);
    if (grads_ok) {
        point.classification = classify_deep(weights, inst, tol);
    } else {
        point.classification = DeepClassification{};
    }
    return point;
}

DeepSpec derive_consistent_spec(const DeepInstance& inst, const BlockPattern& pattern0,
                                std::uint64_t seed, bool randomize_blocks) {
    const Index ell = inst.ell();
    if (ell >= 3 && pattern0.p_bar > 0)
        throw InvalidSpec("derive_consistent_spec: zero-group captures are not carried by the "
                          "L = 0 recursion for ell >= 3");

    if (pattern0.rank() > inst.rank_budget())
        throw InvalidSpec("derive_consistent_spec: level-0 rank exceeds the narrowest layer");

    DeepSpec spec;
    Matrix w = inst.x;
    Matrix prescribed_prev;

    for (Index k = 0; k <= ell - 2; ++k) {
        GroupedSVD sigma = grouped_sigma_of(w, inst);
        DeepLevelSpec level;

        if (k == 0) {
            pattern0.validate(sigma, inst.d(1));
            level.pattern = pattern0;
            std::uint64_t s = seed;
            for (Index g = 0; g < sigma.group_count(); ++g) {
                level.v_blocks.push_back(
                    randomize_blocks
                        ? random_orthonormal(sigma.groups[g].multiplicity,
                                             pattern0.per_group[g], ++s)
                        : Matrix(Matrix::Identity(sigma.groups[g].multiplicity,
                                                  pattern0.per_group[g])));
            }
            level.v_bar = Matrix::Identity(sigma.zero_count, pattern0.p_bar);
        } else {
            // Carry the previously prescribed column space through this
            // level, split per eigen-group of the current Sigma_k.
            const Index t = numerical_rank(prescribed_prev);
            Eigen::JacobiSVD<Matrix> svd(prescribed_prev, Eigen::ComputeThinU);
            Matrix basis = svd.matrixU().leftCols(t);
            Matrix coords = sigma.basis.transpose() * basis; // d_ell x t

            Index off = 0;
            Index total = 0;
            auto take_block = [&](Index m) {
                if (m == 0 || coords.cols() == 0) {
                    off += m;
                    return Matrix(m, 0);
                }
                // coords has orthonormal columns, so when the space is
                // group-decomposable every block singular value is a
                // principal-angle cosine in {0, 1}; split at 1/2.
                Matrix rows = coords.middleRows(off, m);
                Index p = 0;
                Eigen::JacobiSVD<Matrix> probe(rows);
                for (Index s = 0; s < probe.singularValues().size(); ++s)
                    if (probe.singularValues()(s) > 0.5) ++p;
                Matrix vg(m, p);
                if (p > 0) {
                    Eigen::JacobiSVD<Matrix> bs(rows, Eigen::ComputeThinU);
                    vg = bs.matrixU().leftCols(p);
                    for (Index c = 0; c < p; ++c) {
                        Index imax = 0;
                        vg.col(c).cwiseAbs().maxCoeff(&imax);
                        if (vg(imax, c) < 0.0) vg.col(c) = -vg.col(c);
                    }
                }
                off += m;
                total += p;
                return vg;
            };
            for (Index g = 0; g < sigma.group_count(); ++g) {
                Matrix vg = take_block(sigma.groups[g].multiplicity);
                level.pattern.per_group.push_back(vg.cols());
                level.v_blocks.push_back(std::move(vg));
            }
            level.v_bar = take_block(sigma.zero_count);
            level.pattern.p_bar = level.v_bar.cols();
            if (total != t)
                throw InvalidSpec("derive_consistent_spec: carried space does not split per "
                                  "eigen-group at level " + std::to_string(k));
            Matrix vhat = assemble_block_v(level.v_blocks, level.v_bar, sigma, t);
            if (((Matrix::Identity(inst.d(ell), inst.d(ell)) - vhat * vhat.transpose()) * coords)
                    .norm() > 1e-7 * (1.0 + coords.norm()))
                throw InvalidSpec("derive_consistent_spec: carried space not group-decomposable "
                                  "at level " + std::to_string(k));
        }

        const Index dc = inst.d(k + 1);
        level.c = (k == ell - 2) ? random_well_conditioned(dc, seed + 31 * (k + 1))
                                 : random_orthonormal(dc, dc, seed + 31 * (k + 1));
        level.l = Matrix::Zero(inst.d(k + 1), inst.d(k));

        Matrix v = assemble_block_v(level.v_blocks, level.v_bar, sigma, dc);
        prescribed_prev = sigma.basis * v * level.c;
        Matrix w_pinv = pinv(w);
        Matrix a_next = extract_layer(level, sigma, w, w_pinv, inst, dc);
        w = a_next * w;

        spec.levels.push_back(std::move(level));
    }
    return spec;
}

double deep_loss_formula(const BlockPattern& pattern0, const DeepInstance& inst,
                         const std::vector<Matrix>& weights, const Tolerances& tol) {
    std::vector<Matrix> grads = deep_gradients(weights, inst);
    double wnorm = 0.0;
    for (const auto& a : weights) wnorm += a.norm();
    double gmax = 0.0;
    for (const auto& g : grads) gmax = std::max(gmax, g.norm());
    if (gmax > tol.crit_tol * inst.grad_scale() * (1.0 + wnorm))
        throw NotCriticalPoint("deep_loss_formula: weights are not critical");

    GroupedSVD sigma0 = sigma_k(weights, inst, 0);
    if (static_cast<Index>(pattern0.per_group.size()) != sigma0.group_count())
        throw InvalidSpec("deep_loss_formula: pattern does not match Sigma_0");
    double captured = 0.0;
    for (Index g = 0; g < sigma0.group_count(); ++g)
        captured += static_cast<double>(pattern0.per_group[g]) * sigma0.groups[g].value;
    return 0.5 * (inst.y.squaredNorm() - captured);
}

ShallowInstance induced_shallow_instance(const std::vector<Matrix>& weights,
                                         const DeepInstance& inst) {
    check_chain(weights, inst);
    const Index ell = inst.ell();
    Matrix xp = lower_product_x(weights, inst, ell - 2);
    return ShallowInstance::make(std::move(xp), inst.y, inst.d(ell - 1), inst.group_tol);
}

DeepClassification classify_deep(const std::vector<Matrix>& weights, const DeepInstance& inst,
                                 const Tolerances& tol) {
    check_chain(weights, inst);
    const Index ell = inst.ell();

    DeepClassification out;
    std::vector<Matrix> grads = deep_gradients(weights, inst);
    double wnorm = 0.0;
    for (const auto& a : weights) wnorm += a.norm();
    double gmax = 0.0;
    for (const auto& g : grads) gmax = std::max(gmax, g.norm());
    if (gmax > tol.crit_tol * inst.grad_scale() * (1.0 + wnorm)) return out; // NotCritical

    // Recover the block pattern of A_(ell,k+2) against Sigma_k per level.
    std::vector<GroupedSVD> sigmas;
    std::vector<BlockPattern> patterns;
    for (Index k = 0; k <= ell - 2; ++k) {
        sigmas.push_back(sigma_k(weights, inst, k));
        Matrix prod = layer_product(weights, ell, k + 2);
        PatternRecovery rec = recover_pattern(prod, sigmas.back(), tol);
        if (!rec.clean) {
            out.kind = DeepKind::OtherCritical;
            return out;
        }
        patterns.push_back(rec.pattern);
    }

    const Index budget = inst.rank_budget();
    const Index positive0 = sigmas[0].positive_total();
    const Index rank_top = numerical_rank(layer_product(weights, ell, 2));

    if (budget <= positive0) {
        if (rank_top == budget && patterns[0].is_prefix_maximal(sigmas[0])) {
            out.kind = DeepKind::GlobalMinCase1;
            return out;
        }
    } else {
        bool all_full = true;
        for (Index g = 0; g < sigmas[0].group_count(); ++g)
            if (patterns[0].per_group[g] != sigmas[0].groups[g].multiplicity) all_full = false;
        if (all_full) {
            out.kind = DeepKind::GlobalMinCase2;
            return out;
        }
    }

    for (Index k = 0; k <= ell - 2; ++k) {
        for (Index i = 0; i < sigmas[k].group_count(); ++i) {
            if (patterns[k].per_group[i] >= sigmas[k].groups[i].multiplicity) continue;
            for (Index j = sigmas[k].group_count() - 1; j > i; --j) {
                if (patterns[k].per_group[j] > 0) {
                    out.kind = DeepKind::DeepNonOptimalOrder;
                    out.level = k;
                    out.i = i;
                    out.j = j;
                    return out;
                }
            }
        }
    }

    const Index rank_last = numerical_rank(weights[ell - 1]);
    if (rank_last < std::min(inst.d(ell), inst.d(ell - 1)) &&
        patterns[ell - 2].is_prefix_maximal(sigmas[ell - 2])) {
        ShallowInstance induced = induced_shallow_instance(weights, inst);
        Classification pair_class =
            classify(weights[ell - 2], weights[ell - 1], induced, tol);
        if (is_critical(pair_class) && !is_global_min(pair_class)) {
            out.kind = DeepKind::DeepOptimalOrder;
            return out;
        }
    }

    out.kind = DeepKind::OtherCritical;
    return out;
}

namespace {

const DeepSpec& spec_of(const DeepCertifiedPoint& point) {
    if (!point.spec) throw InvalidSpec("deep witness: point carries no spec");
    return *point.spec;
}

} // namespace

DeepDescentWitness deep_descent_witness_non_optimal(const DeepCertifiedPoint& point,
                                                    const DeepInstance& inst, Index k,
                                                    double eps) {
    if (point.classification.kind != DeepKind::DeepNonOptimalOrder)
        throw WrongClass("deep_descent_witness_non_optimal: point is " +
                         to_string(point.classification));
    if (eps <= 0.0) throw InvalidInput("deep_descent_witness_non_optimal: eps must be positive");
    const Index ell = inst.ell();
    if (k < 0 || k > ell - 2) throw InvalidInput("deep_descent_witness_non_optimal: bad level");

    const DeepSpec& spec = spec_of(point);
    const DeepLevelSpec& level = spec.levels[k];
    GroupedSVD sigma = sigma_k(point.weights, inst, k);

    Index gi = -1, gj = -1;
    for (Index i = 0; i < sigma.group_count(); ++i)
        if (level.pattern.per_group[i] < sigma.groups[i].multiplicity) {
            gi = i;
            break;
        }
    if (gi >= 0)
        for (Index j = sigma.group_count() - 1; j > gi; --j)
            if (level.pattern.per_group[j] > 0) {
                gj = j;
                break;
            }
    if (gi < 0 || gj < 0)
        throw WrongClass("deep_descent_witness_non_optimal: level has no qualifying pair");

    Matrix s = build_group_completion(level.v_blocks, level.v_bar, sigma);
    Matrix us = sigma.basis * s;
    const Index col_j = sigma.group_offset(gj);
    const Index col_i = sigma.group_offset(gi) + level.pattern.per_group[gi];

    Matrix m_tilde = us;
    m_tilde.col(col_j) = (us.col(col_j) + eps * us.col(col_i)) / std::sqrt(1.0 + eps * eps);

    // Perturb the top layer, then regenerate A_{k+1} from the substituted
    // factors; all other layers stay put.
    std::vector<Matrix> weights = point.weights;
    weights[ell - 1] = m_tilde * us.transpose() * point.weights[ell - 1];

    Matrix w = lower_product_x(point.weights, inst, k);
    Matrix w_pinv = pinv(w);
    Matrix stv = s.transpose() *
                 assemble_block_v(level.v_blocks, level.v_bar, sigma, inst.d(k + 1));
    Eigen::PartialPivLU<Matrix> lu(level.c);
    Matrix lead = lu.solve(stv.transpose() * (m_tilde.transpose() * (inst.y * w_pinv)));
    Matrix v = assemble_block_v(level.v_blocks, level.v_bar, sigma, inst.d(k + 1));
    Matrix kern = lu.solve(v.transpose() * v * level.c * level.l * (w * w_pinv));
    weights[k] = lead + level.l - kern;

    DeepDescentWitness out;
    out.predicted_drop = eps * eps / (2.0 * (1.0 + eps * eps)) *
                         (sigma.groups[gi].value - sigma.groups[gj].value);
    out.measured_drop = point.loss_value - deep_loss(weights, inst);
    out.weights = std::move(weights);
    return out;
}

DeepOptimalWitness deep_descent_witness_optimal(const DeepCertifiedPoint& point,
                                                const DeepInstance& inst, double eps1) {
    if (point.classification.kind != DeepKind::DeepOptimalOrder)
        throw WrongClass("deep_descent_witness_optimal: point is " +
                         to_string(point.classification));
    const Index ell = inst.ell();

    ShallowInstance induced = induced_shallow_instance(point.weights, inst);
    const Matrix& a1 = point.weights[ell - 2];
    const Matrix& a2 = point.weights[ell - 1];

    CertifiedPoint pair;
    pair.a1 = a1;
    pair.a2 = a2;
    pair.loss_value = loss(a1, a2, induced);
    pair.classification = Classification::OptimalOrder;
    pair.spec = recover_spec(a1, a2, induced);
    pair.pattern = pair.spec->pattern;

    OptimalWitness w = descent_witness_optimal(pair, induced, eps1);

    DeepOptimalWitness out;
    out.weights = point.weights;
    out.weights[ell - 2] = w.a1;
    out.weights[ell - 1] = w.a2;
    out.analytic_drop = w.analytic_drop;
    out.eps1_used = w.eps1_used;
    out.measured_drop = point.loss_value - deep_loss(out.weights, inst);
    return out;
}

DeepAscentWitness deep_ascent_witness(const std::vector<Matrix>& weights,
                                      const DeepInstance& inst, double delta) {
    check_chain(weights, inst);
    const Index ell = inst.ell();
    Matrix z = lower_product_x(weights, inst, ell);
    double wnorm = inst.x.norm();
    for (const auto& a : weights) wnorm *= (1.0 + a.norm());
    if (z.norm() <= 1e-14 * (1.0 + wnorm))
        throw NotInX("deep_ascent_witness: A_(ell,1) X = 0");

    Index row = 0;
    z.rowwise().norm().maxCoeff(&row);
    const Vector a = z.row(row).transpose();
    const Vector yr = inst.y.row(row).transpose();
    const double f_prime = a.dot(a - yr);
    const double alpha = 1.0 + delta * (f_prime >= 0.0 ? 1.0 : -1.0);

    DeepAscentWitness out;
    out.weights = weights;
    out.weights[ell - 1].row(row) *= alpha;
    out.measured_rise = deep_loss(out.weights, inst) - deep_loss(weights, inst);
    return out;
}

} // namespace landscape
