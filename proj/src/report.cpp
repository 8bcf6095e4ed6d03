#include "landscape/report.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "landscape/certify.hpp"
#include "landscape/matrix_io.hpp"

namespace landscape {

using nlohmann::json;
using nlohmann::ordered_json;

void write_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InvalidInput("cannot open output file: " + tmp);
        out << contents;
    }
    std::filesystem::rename(tmp, path);
}

ordered_json pattern_json(const BlockPattern& p) {
    ordered_json j;
    j["per_group"] = p.per_group;
    j["p_bar"] = p.p_bar;
    j["rank"] = p.rank();
    return j;
}

ordered_json grouped_svd_json(const GroupedSVD& s) {
    ordered_json j;
    ordered_json groups = ordered_json::array();
    for (const auto& g : s.groups) {
        ordered_json e;
        e["value"] = g.value;
        e["multiplicity"] = g.multiplicity;
        groups.push_back(e);
    }
    j["groups"] = std::move(groups);
    j["zero_count"] = s.zero_count;
    j["group_tol"] = s.group_tol;
    return j;
}

ordered_json certified_point_json(const CertifiedPoint& p) {
    ordered_json j;
    j["weights"] = ordered_json::array({matrix_to_json(p.a1), matrix_to_json(p.a2)});
    j["loss"] = p.loss_value;
    j["grad_norms"] = p.grad_norms;
    j["side_residual"] = p.side_residual;
    j["classification"] = to_string(p.classification);
    j["pattern"] = pattern_json(p.pattern);
    return j;
}

ordered_json deep_point_json(const DeepCertifiedPoint& p) {
    ordered_json j;
    ordered_json weights = ordered_json::array();
    for (const auto& w : p.weights) weights.push_back(matrix_to_json(w));
    j["weights"] = std::move(weights);
    j["loss"] = p.loss_value;
    j["grad_norms"] = p.grad_norms;
    j["consistency_residuals"] = p.consistency_residuals;
    j["classification"] = to_string(p.classification);
    j["pattern0"] = pattern_json(p.pattern0);
    return j;
}

namespace {

ordered_json report_header(const char* command, const RunOptions& opts) {
    ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    j["seed"] = opts.seed;
    ordered_json tol;
    tol["group_tol"] = opts.group_tol;
    tol["crit_tol"] = opts.crit_tol;
    tol["margin"] = opts.margin;
    j["tolerances"] = std::move(tol);
    return j;
}

json load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open manifest: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InvalidInput(path + ": " + e.what());
    }
    return j;
}

std::string dir_of(const std::string& path) {
    return std::filesystem::path(path).parent_path().string();
}

BlockPattern pattern_from_json(const json& j) {
    BlockPattern p;
    if (!j.contains("per_group") || !j.at("per_group").is_array())
        throw InvalidInput("pattern: per_group array required");
    for (const auto& v : j.at("per_group")) p.per_group.push_back(v.get<Index>());
    p.p_bar = j.value("p_bar", 0);
    return p;
}

// Spec fields accept "identity"/"zero"/"random" keywords or inline matrices.
Matrix matrix_or_keyword(const json& j, Index rows, Index cols, std::uint64_t seed,
                         const std::string& what) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "identity") return Matrix::Identity(rows, cols);
        if (s == "zero") return Matrix::Zero(rows, cols);
        if (s == "random") {
            if (rows == cols && what == "C") return random_well_conditioned(rows, seed);
            return random_gaussian(rows, cols, seed);
        }
        throw InvalidInput(what + ": unknown keyword '" + s + "'");
    }
    Matrix m = matrix_from_json(j);
    if (m.rows() != rows || m.cols() != cols)
        throw InvalidInput(what + ": expected " + std::to_string(rows) + "x" +
                           std::to_string(cols));
    return m;
}

CriticalPointSpec spec_from_manifest(const json& manifest, const ShallowInstance& inst,
                                     std::uint64_t seed) {
    BlockPattern pattern =
        manifest.contains("pattern")
            ? pattern_from_json(manifest.at("pattern"))
            : BlockPattern::prefix(inst.sigma,
                                   std::min(inst.rank_budget(),
                                            inst.sigma.positive_total()));

    const std::string v_mode = manifest.value("v_mode", "canonical");
    CriticalPointSpec spec = v_mode == "random"
                                 ? CriticalPointSpec::randomized(pattern, inst, seed)
                                 : CriticalPointSpec::canonical(pattern, inst);
    if (manifest.contains("C"))
        spec.c = matrix_or_keyword(manifest.at("C"), inst.d1, inst.d1, seed ^ 0xC0ULL, "C");
    if (manifest.contains("L1"))
        spec.l1 = matrix_or_keyword(manifest.at("L1"), inst.d1, inst.d0(), seed ^ 0x11ULL, "L1");
    return spec;
}

void append_witness_csv_row(std::ostringstream& csv, const std::string& kind, double eps,
                            double predicted, double measured, Index rank_before,
                            Index rank_after) {
    csv.precision(17);
    csv << kind << ',' << eps << ',' << predicted << ',' << measured << ',' << rank_before
        << ',' << rank_after << '\n';
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const InvalidInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const DimensionError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const Error& e) {
        std::cerr << "certification error: " << e.what() << "\n";
        return kExitCertification;
    }
}

void emit(const RunOptions& opts, const ordered_json& report) {
    const std::string text = report.dump(2) + "\n";
    if (opts.out.empty())
        std::cout << text;
    else
        write_atomic(opts.out, text);
}

void emit_csv(const RunOptions& opts, const std::string& suffix, const std::string& header,
              const std::string& body) {
    if (opts.out.empty()) return;
    write_atomic(opts.out + suffix, header + body);
}

} // namespace

int cmd_shallow(const RunOptions& opts) {
    return run_guarded([&]() {
        json manifest = load_manifest(opts.input);
        const std::string base = dir_of(opts.input);
        Matrix x = matrix_field(manifest, "X", base);
        Matrix y = matrix_field(manifest, "Y", base);
        if (!manifest.contains("d1")) throw InvalidInput("shallow manifest: d1 required");
        const Index d1 = manifest.at("d1").get<Index>();
        const double group_tol = manifest.value("group_tol", opts.group_tol);

        ShallowInstance inst = ShallowInstance::make(std::move(x), std::move(y), d1, group_tol);
        Tolerances tol;
        tol.group_tol = group_tol;
        tol.crit_tol = opts.crit_tol;

        CriticalPointSpec spec = spec_from_manifest(manifest, inst, opts.seed);
        CertifiedPoint point = construct_critical(spec, inst, tol);

        ordered_json report = report_header("shallow", opts);
        ordered_json inst_j;
        inst_j["d0"] = inst.d0();
        inst_j["d1"] = inst.d1;
        inst_j["d2"] = inst.d2();
        inst_j["samples"] = inst.samples();
        inst_j["sigma"] = grouped_svd_json(inst.sigma);
        report["instance"] = std::move(inst_j);
        report["point"] = certified_point_json(point);
        report["loss_formula"] = loss_formula(point.pattern, inst);
        report["global_min_value"] = global_min_value(inst);

        std::ostringstream csv;
        ordered_json witnesses = ordered_json::array();
        for (const std::string& kind : opts.witnesses) {
            ordered_json w;
            w["kind"] = kind;
            if (kind == "non-optimal") {
                const double eps = 0.1;
                DescentWitness dw = descent_witness_non_optimal(point, inst, eps);
                w["eps"] = eps;
                w["predicted_drop"] = dw.predicted_drop;
                w["measured_drop"] = dw.measured_drop;
                w["rank_before"] = numerical_rank(point.a2);
                w["rank_after"] = numerical_rank(dw.a2);
                w["weights"] = ordered_json::array({matrix_to_json(dw.a1), matrix_to_json(dw.a2)});
                append_witness_csv_row(csv, kind, eps, dw.predicted_drop, dw.measured_drop,
                                       numerical_rank(point.a2), numerical_rank(dw.a2));
            } else if (kind == "optimal") {
                OptimalWitness ow = descent_witness_optimal(point, inst);
                w["eps1"] = ow.eps1_used;
                w["analytic_drop"] = ow.analytic_drop;
                w["measured_drop"] = ow.measured_drop;
                w["rank_before"] = numerical_rank(point.a2);
                w["rank_after"] = numerical_rank(ow.a2);
                w["weights"] = ordered_json::array({matrix_to_json(ow.a1), matrix_to_json(ow.a2)});
                append_witness_csv_row(csv, kind, ow.eps1_used, ow.analytic_drop,
                                       ow.measured_drop, numerical_rank(point.a2),
                                       numerical_rank(ow.a2));
            } else if (kind == "ascent") {
                AscentWitness aw = ascent_witness(point.a1, point.a2, inst);
                w["measured_rise"] = aw.measured_rise;
                w["weights"] = ordered_json::array({matrix_to_json(aw.a1), matrix_to_json(aw.a2)});
                append_witness_csv_row(csv, kind, 0.0, 0.0, aw.measured_rise,
                                       numerical_rank(point.a2), numerical_rank(aw.a2));
            } else {
                throw InvalidInput("unknown witness kind: " + kind);
            }
            witnesses.push_back(std::move(w));
        }
        if (!witnesses.empty()) {
            report["witnesses"] = std::move(witnesses);
            emit_csv(opts, ".witnesses.csv",
                     "kind,eps,predicted_drop,measured_drop,rank_before,rank_after\n", csv.str());
        }
        emit(opts, report);
        return kExitOk;
    });
}

int cmd_deep(const RunOptions& opts) {
    return run_guarded([&]() {
        json manifest = load_manifest(opts.input);
        const std::string base = dir_of(opts.input);
        Matrix x = matrix_field(manifest, "X", base);
        Matrix y = matrix_field(manifest, "Y", base);
        if (!manifest.contains("dims")) throw InvalidInput("deep manifest: dims required");
        std::vector<Index> dims;
        for (const auto& v : manifest.at("dims")) dims.push_back(v.get<Index>());
        const double group_tol = manifest.value("group_tol", opts.group_tol);

        DeepInstance inst = DeepInstance::make(std::move(x), std::move(y), dims, group_tol);
        Tolerances tol;
        tol.group_tol = group_tol;
        tol.crit_tol = opts.crit_tol;

        GroupedSVD sigma0 = sigma_k({}, inst, 0);
        BlockPattern pattern0 =
            manifest.contains("pattern0")
                ? pattern_from_json(manifest.at("pattern0"))
                : BlockPattern::prefix(sigma0, std::min(inst.rank_budget(),
                                                        sigma0.positive_total()));

        DeepSpec spec = derive_consistent_spec(inst, pattern0, opts.seed);
        DeepCertifiedPoint point = construct_deep_critical(spec, inst, tol);

        ordered_json report = report_header("deep", opts);
        ordered_json inst_j;
        inst_j["dims"] = inst.dims;
        inst_j["samples"] = inst.samples();
        inst_j["sigma0"] = grouped_svd_json(sigma0);
        report["instance"] = std::move(inst_j);
        report["point"] = deep_point_json(point);
        if (point.classification.kind != DeepKind::NotCritical)
            report["loss_formula"] = deep_loss_formula(point.pattern0, inst, point.weights, tol);
        report["global_min_value"] = global_min_value(inst);

        std::ostringstream csv;
        ordered_json witnesses = ordered_json::array();
        for (const std::string& kind : opts.witnesses) {
            ordered_json w;
            w["kind"] = kind;
            const Index ell = inst.ell();
            if (kind == "non-optimal") {
                const double eps = 0.1;
                DeepDescentWitness dw = deep_descent_witness_non_optimal(
                    point, inst, point.classification.level, eps);
                w["level"] = point.classification.level;
                w["eps"] = eps;
                w["predicted_drop"] = dw.predicted_drop;
                w["measured_drop"] = dw.measured_drop;
                append_witness_csv_row(csv, kind, eps, dw.predicted_drop, dw.measured_drop,
                                       numerical_rank(point.weights[ell - 1]),
                                       numerical_rank(dw.weights[ell - 1]));
            } else if (kind == "optimal") {
                DeepOptimalWitness ow = deep_descent_witness_optimal(point, inst);
                w["eps1"] = ow.eps1_used;
                w["analytic_drop"] = ow.analytic_drop;
                w["measured_drop"] = ow.measured_drop;
                append_witness_csv_row(csv, kind, ow.eps1_used, ow.analytic_drop,
                                       ow.measured_drop,
                                       numerical_rank(point.weights[ell - 1]),
                                       numerical_rank(ow.weights[ell - 1]));
            } else if (kind == "ascent") {
                DeepAscentWitness aw = deep_ascent_witness(point.weights, inst);
                w["measured_rise"] = aw.measured_rise;
                append_witness_csv_row(csv, kind, 0.0, 0.0, aw.measured_rise,
                                       numerical_rank(point.weights[ell - 1]),
                                       numerical_rank(aw.weights[ell - 1]));
            } else {
                throw InvalidInput("unknown witness kind: " + kind);
            }
            witnesses.push_back(std::move(w));
        }
        if (!witnesses.empty()) {
            report["witnesses"] = std::move(witnesses);
            emit_csv(opts, ".witnesses.csv",
                     "kind,eps,predicted_drop,measured_drop,rank_before,rank_after\n", csv.str());
        }
        emit(opts, report);
        return kExitOk;
    });
}

namespace {

ordered_json search_hit_json(const SearchHit& hit) {
    ordered_json j;
    ordered_json cols = ordered_json::array();
    for (Index c : hit.cols) cols.push_back(c + 1); // 1-based in reports
    j["J"] = std::move(cols);
    j["group"] = hit.group + 1;
    j["sigma"] = hit.sigma;
    j["loss"] = hit.loss_value;
    j["A1"] = matrix_to_json(hit.a1);
    j["A2"] = matrix_to_json(hit.a2);
    j["strict_slack"] = hit.strict_slack;
    j["active_slack"] = hit.active_slack;
    return j;
}

std::string search_hits_csv(const std::vector<SearchHit>& hits) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "J,group,sigma,loss,strict_slack\n";
    for (const auto& hit : hits) {
        csv << '"';
        for (std::size_t k = 0; k < hit.cols.size(); ++k) {
            if (k) csv << ' ';
            csv << hit.cols[k] + 1;
        }
        csv << '"' << ',' << hit.group + 1 << ',' << hit.sigma << ',' << hit.loss_value << ','
            << hit.strict_slack << '\n';
    }
    return csv.str();
}

std::vector<Index> index_set_from_json(const json& j) {
    std::vector<Index> out;
    for (const auto& v : j) out.push_back(v.get<Index>() - 1); // manifests are 1-based
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

int cmd_relu(const RunOptions& opts) {
    return run_guarded([&]() {
        json manifest = load_manifest(opts.input);
        const std::string base = dir_of(opts.input);
        Matrix x = matrix_field(manifest, "X", base);
        Matrix y = matrix_field(manifest, "Y", base);
        if (!manifest.contains("d1")) throw InvalidInput("relu manifest: d1 required");
        const Index d1 = manifest.at("d1").get<Index>();
        ReluInstance inst = ReluInstance::make(std::move(x), std::move(y), d1);

        Tolerances tol;
        tol.group_tol = manifest.value("group_tol", opts.group_tol);
        tol.crit_tol = opts.crit_tol;
        const double margin = manifest.value("margin", opts.margin);

        ordered_json report = report_header("relu", opts);
        ordered_json inst_j;
        inst_j["d0"] = inst.d0();
        inst_j["d1"] = inst.d1;
        inst_j["d2"] = inst.d2();
        inst_j["samples"] = inst.samples();
        report["instance"] = std::move(inst_j);

        if (manifest.contains("cones")) {
            ordered_json cones = ordered_json::array();
            for (const auto& cj : manifest.at("cones")) {
                ActivationCone cone;
                cone.rows = index_set_from_json(cj.at("I"));
                cone.cols = index_set_from_json(cj.at("J"));
                cone.margin = cj.value("margin", margin);

                ordered_json entry;
                ordered_json cone_j;
                ordered_json rows_1 = ordered_json::array(), cols_1 = ordered_json::array();
                for (Index i : cone.rows) rows_1.push_back(i + 1);
                for (Index j : cone.cols) cols_1.push_back(j + 1);
                cone_j["I"] = std::move(rows_1);
                cone_j["J"] = std::move(cols_1);
                cone_j["margin"] = cone.margin;
                entry["cone"] = std::move(cone_j);

                ReducedInstance red = reduced_instance(cone, inst, tol.group_tol);
                entry["offset"] = red.offset;
                if (red.constant) {
                    entry["constant"] = true;
                    entry["loss"] = red.offset;
                } else {
                    entry["sigma_J"] = grouped_svd_json(red.shallow->sigma);
                    if (cj.contains("spec") || cj.contains("pattern")) {
                        const json& sj = cj.contains("spec") ? cj.at("spec") : cj;
                        CriticalPointSpec spec = spec_from_manifest(sj, *red.shallow, opts.seed);
                        ReluCertifiedPoint point = construct_relu_critical(cone, spec, inst, tol);
                        entry["point"] = certified_point_json(point.reduced);
                        entry["A1_full"] = matrix_to_json(point.a1);
                        entry["A2_full"] = matrix_to_json(point.a2);
                        entry["loss"] = point.loss_value;
                        entry["strict_slack"] = point.membership.strict_slack;
                        entry["active_slack"] = point.membership.active_slack;
                        entry["full_grad_norms"] = point.full_grad_norms;
                    }
                }
                cones.push_back(std::move(entry));
            }
            report["cones"] = std::move(cones);
        }

        const bool do_search = opts.search || manifest.value("search", false);
        if (do_search) {
            SearchOptions sopts;
            sopts.margin = margin;
            sopts.seed = opts.seed;
            sopts.tol = tol;
            std::vector<SearchHit> hits = exist_search_d1_1(inst, sopts);
            ordered_json hits_j = ordered_json::array();
            for (const auto& hit : hits) hits_j.push_back(search_hit_json(hit));
            report["search_hits"] = std::move(hits_j);
            emit_csv(opts, ".hits.csv", "", search_hits_csv(hits));
        }

        emit(opts, report);
        return kExitOk;
    });
}

int cmd_certify(const RunOptions& opts) {
    return run_guarded([&]() {
        json manifest = load_manifest(opts.input);
        const std::string base = dir_of(opts.input);
        const std::string kind = manifest.value("kind", "shallow");
        Matrix x = matrix_field(manifest, "X", base);
        Matrix y = matrix_field(manifest, "Y", base);
        if (!manifest.contains("weights") || !manifest.at("weights").is_array())
            throw InvalidInput("certify manifest: weights array required");
        std::vector<Matrix> weights;
        for (const auto& w : manifest.at("weights")) weights.push_back(matrix_from_json(w));

        ordered_json report = report_header("certify", opts);
        report["kind"] = kind;

        Certificate cert;
        std::string classification;
        if (kind == "shallow") {
            if (weights.size() != 2) throw InvalidInput("certify: shallow expects two weights");
            ShallowInstance inst = ShallowInstance::make(x, y, weights[0].rows(), opts.group_tol);
            auto loss_fn = [&](const std::vector<Matrix>& w) { return loss(w[0], w[1], inst); };
            auto grad_fn = [&](const std::vector<Matrix>& w) {
                auto [g1, g2] = gradients(w[0], w[1], inst);
                return std::vector<Matrix>{g1, g2};
            };
            const double tol_used = opts.crit_tol * inst.grad_scale() *
                                    (1.0 + weights[0].norm() + weights[1].norm());
            cert = certify_critical(loss_fn, grad_fn, weights, tol_used);
            classification = to_string(classify(weights[0], weights[1], inst));
        } else if (kind == "deep") {
            if (!manifest.contains("dims")) throw InvalidInput("certify: deep requires dims");
            std::vector<Index> dims;
            for (const auto& v : manifest.at("dims")) dims.push_back(v.get<Index>());
            DeepInstance inst = DeepInstance::make(x, y, dims, opts.group_tol);
            auto loss_fn = [&](const std::vector<Matrix>& w) { return deep_loss(w, inst); };
            auto grad_fn = [&](const std::vector<Matrix>& w) { return deep_gradients(w, inst); };
            double wnorm = 0.0;
            for (const auto& w : weights) wnorm += w.norm();
            cert = certify_critical(loss_fn, grad_fn, weights,
                                    opts.crit_tol * inst.grad_scale() * (1.0 + wnorm));
            classification = to_string(classify_deep(weights, inst));
        } else if (kind == "relu") {
            if (weights.size() != 2) throw InvalidInput("certify: relu expects two weights");
            ReluInstance inst = ReluInstance::make(x, y, weights[0].rows());
            auto loss_fn = [&](const std::vector<Matrix>& w) {
                return relu_loss(w[0], w[1], inst);
            };
            auto grad_fn = [&](const std::vector<Matrix>& w) {
                auto [g1, g2] = relu_gradients(w[0], w[1], inst);
                return std::vector<Matrix>{g1, g2};
            };
            const double tol_used = opts.crit_tol * (1.0 + inst.y.norm() * inst.x.norm()) *
                                    (1.0 + weights[0].norm() + weights[1].norm());
            cert = certify_critical(loss_fn, grad_fn, weights, tol_used);
            classification = cert.critical ? "Critical" : "NotCritical";
        } else {
            throw InvalidInput("certify: unknown kind '" + kind + "'");
        }

        ordered_json cert_j;
        cert_j["max_grad_norm"] = cert.max_grad_norm;
        cert_j["tol_used"] = cert.tol_used;
        cert_j["verdict"] = cert.critical ? "Critical" : "NotCritical";
        report["certificate"] = std::move(cert_j);
        report["classification"] = classification;
        emit(opts, report);
        return cert.critical ? kExitOk : kExitCertification;
    });
}

ordered_json example1_report(std::uint64_t seed, bool corrupt_golden) {
    Matrix x = Matrix::Identity(2, 2);
    Matrix y = Matrix::Zero(2, 2);
    y(0, 0) = 2.0;
    y(1, 1) = 1.0;
    ReluInstance inst = ReluInstance::make(x, y, 1);

    SearchOptions sopts;
    sopts.seed = seed;
    std::vector<SearchHit> hits = exist_search_d1_1(inst, sopts);

    ordered_json report;
    report["tool"] = kToolName;
    report["version"] = kToolVersion;
    report["command"] = "example1";
    report["seed"] = seed;
    report["instance"] = {{"X", "diag(1,1)"}, {"Y", "diag(2,1)"}, {"d1", 1}};

    ordered_json hits_j = ordered_json::array();
    for (const auto& hit : hits) hits_j.push_back(search_hit_json(hit));
    report["search_hits"] = std::move(hits_j);

    // Golden levels: the in-cone minima at 1/2 and 2, the constant cone at 5/2.
    const double golden[3] = {0.5, 2.0, 2.5};
    double found[3];
    bool present[3] = {false, false, false};
    for (int k = 0; k < 3; ++k) {
        for (const auto& hit : hits) {
            if (std::abs(hit.loss_value - golden[k]) < 1e-6) {
                found[k] = hit.loss_value;
                present[k] = true;
                break;
            }
        }
    }
    if (corrupt_golden && present[0]) found[0] += 1e-3;

    ordered_json levels = ordered_json::array();
    bool all_match = true;
    for (int k = 0; k < 3; ++k) {
        ordered_json e;
        e["expected"] = golden[k];
        const bool ok = present[k] && std::abs(found[k] - golden[k]) <= 1e-9;
        if (present[k]) {
            e["found"] = found[k];
            e["abs_error"] = std::abs(found[k] - golden[k]);
        } else {
            e["found"] = nullptr;
        }
        e["match"] = ok;
        all_match = all_match && ok;
        levels.push_back(std::move(e));
    }
    report["golden_levels"] = std::move(levels);

    // In-cone probes at the two noncontstant witnesses.
    ordered_json probes = ordered_json::array();
    bool probes_ok = true;
    for (const auto& hit : hits) {
        const bool target = std::abs(hit.loss_value - 0.5) < 1e-6 && hit.cols.size() == 1 &&
                            hit.cols[0] == 0;
        const bool target2 = std::abs(hit.loss_value - 2.0) < 1e-6 && hit.cols.size() == 1 &&
                             hit.cols[0] == 1;
        if (!target && !target2) continue;
        ActivationCone cone{{0}, hit.cols, 0.0};
        const double min_delta =
            local_min_probe_in_cone(hit.a1, hit.a2, cone, inst, 1e-3, 2000, seed);
        ordered_json p;
        p["loss"] = hit.loss_value;
        ordered_json cols_1 = ordered_json::array();
        for (Index c : hit.cols) cols_1.push_back(c + 1);
        p["J"] = std::move(cols_1);
        p["radius"] = 1e-3;
        p["samples"] = 2000;
        p["min_delta_loss"] = min_delta;
        const bool no_descent = min_delta >= -1e-12;
        p["no_descent"] = no_descent;
        probes_ok = probes_ok && no_descent;
        probes.push_back(std::move(p));
    }
    report["probes"] = std::move(probes);
    probes_ok = probes_ok && report["probes"].size() == 2;

    report["spurious_local_min"] =
        present[0] && present[1] && golden[0] < golden[1] && golden[1] < golden[2];
    report["all_match"] = all_match && probes_ok;
    return report;
}

int cmd_example1(const RunOptions& opts, bool corrupt_golden) {
    return run_guarded([&]() {
        ordered_json report = example1_report(opts.seed, corrupt_golden);
        emit(opts, report);
        if (!report.at("all_match").get<bool>()) {
            std::cerr << "example1: golden values diverged; see the golden_levels block\n";
            return kExitGoldenMismatch;
        }
        return kExitOk;
    });
}

} // namespace landscape
