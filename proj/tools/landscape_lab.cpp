#include <CLI11.hpp>

#include "landscape/report.hpp"

int main(int argc, char** argv) {
    CLI::App app{"landscape-lab: closed-form critical points of shallow/deep linear and "
                 "one-hidden-layer ReLU square losses, with certification, classification "
                 "and perturbation witnesses"};
    app.require_subcommand(1);

    landscape::RunOptions opts;
    bool corrupt_golden = false;

    auto add_common = [&](CLI::App* cmd, bool needs_input) {
        if (needs_input)
            cmd->add_option("--input", opts.input, "manifest path (JSON)")->required();
        cmd->add_option("--out", opts.out, "report path (JSON); stdout when omitted");
        cmd->add_option("--seed", opts.seed, "RNG seed recorded in the report");
        cmd->add_option("--group-tol", opts.group_tol, "eigenvalue grouping tolerance");
        cmd->add_option("--crit-tol", opts.crit_tol, "criticality tolerance");
        cmd->add_option("--margin", opts.margin, "strict-side cone margin");
    };

    CLI::App* shallow = app.add_subcommand("shallow", "construct and certify a shallow point");
    add_common(shallow, true);
    shallow->add_option("--witness", opts.witnesses,
                        "witness kinds to emit: non-optimal, optimal, ascent");

    CLI::App* deep = app.add_subcommand("deep", "construct and certify a deep point");
    add_common(deep, true);
    deep->add_option("--witness", opts.witnesses,
                     "witness kinds to emit: non-optimal, optimal, ascent");

    CLI::App* relu = app.add_subcommand("relu", "per-cone ReLU analysis");
    add_common(relu, true);
    relu->add_flag("--search", opts.search, "run the exhaustive d1 = 1 cone search");

    CLI::App* certify = app.add_subcommand("certify", "re-certify supplied weights");
    add_common(certify, true);

    CLI::App* example1 = app.add_subcommand("example1", "built-in end-to-end reproduction");
    add_common(example1, false);
    example1->add_flag("--corrupt-golden", corrupt_golden)->group(""); // test hook

    CLI11_PARSE(app, argc, argv);

    if (shallow->parsed()) return landscape::cmd_shallow(opts);
    if (deep->parsed()) return landscape::cmd_deep(opts);
    if (relu->parsed()) return landscape::cmd_relu(opts);
    if (certify->parsed()) return landscape::cmd_certify(opts);
    if (example1->parsed()) return landscape::cmd_example1(opts, corrupt_golden);
    return landscape::kExitInputError;
}
