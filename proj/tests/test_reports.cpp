#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "landscape/matrix_io.hpp"
#include "landscape/report.hpp"

using namespace landscape;
using nlohmann::ordered_json;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("landscape_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("example1 report reproduces all golden levels deterministically") {
    ordered_json a = example1_report(7);
    CHECK(a.at("all_match").get<bool>());
    CHECK(a.at("spurious_local_min").get<bool>());
    REQUIRE(a.at("golden_levels").size() == 3);
    for (const auto& level : a.at("golden_levels")) {
        CHECK(level.at("match").get<bool>());
        CHECK(level.at("abs_error").get<double>() <= 1e-9);
    }
    REQUIRE(a.at("probes").size() == 2);
    for (const auto& probe : a.at("probes"))
        CHECK(probe.at("min_delta_loss").get<double>() >= -1e-12);

    ordered_json b = example1_report(7);
    CHECK(a.dump() == b.dump()); // byte-identical reruns

    ordered_json corrupted = example1_report(7, true);
    CHECK_FALSE(corrupted.at("all_match").get<bool>());
}

TEST_CASE("cmd_shallow writes a full report with witnesses") {
    TempDir dir;
    ordered_json manifest;
    manifest["X"] = matrix_to_json(Matrix::Identity(2, 2));
    manifest["Y"] = matrix_to_json([] {
        Matrix y = Matrix::Zero(2, 2);
        y(0, 0) = 2.0;
        y(1, 1) = 1.0;
        return y;
    }());
    manifest["d1"] = 1;
    manifest["pattern"] = {{"per_group", {0, 1}}, {"p_bar", 0}};
    write_text(dir.file("manifest.json"), manifest.dump());

    RunOptions opts;
    opts.input = dir.file("manifest.json");
    opts.out = dir.file("report.json");
    opts.witnesses = {"non-optimal", "ascent"};
    REQUIRE(cmd_shallow(opts) == kExitOk);

    ordered_json report = ordered_json::parse(read_text(opts.out));
    CHECK(report.at("tool") == kToolName);
    CHECK(report.at("point").at("loss").get<double>() == doctest::Approx(2.0));
    CHECK(report.at("point").at("classification") == "NonOptimalOrder");
    CHECK(report.at("loss_formula").get<double>() == doctest::Approx(2.0));
    CHECK(report.at("global_min_value").get<double>() == doctest::Approx(0.5));
    REQUIRE(report.at("witnesses").size() == 2);
    const auto& w = report.at("witnesses")[0];
    CHECK(std::abs(w.at("measured_drop").get<double>() - w.at("predicted_drop").get<double>()) <=
          1e-8 * w.at("predicted_drop").get<double>());
    CHECK(report.at("witnesses")[1].at("measured_rise").get<double>() > 0.0);

    CHECK(std::filesystem::exists(dir.file("report.json.witnesses.csv")));
    const std::string csv = read_text(dir.file("report.json.witnesses.csv"));
    CHECK(csv.rfind("kind,eps,predicted_drop,measured_drop,rank_before,rank_after\n", 0) == 0);
}

TEST_CASE("cmd_shallow accepts CSV matrix files referenced by path") {
    TempDir dir;
    write_text(dir.file("x.csv"), "1,0\n0,1\n");
    write_text(dir.file("y.csv"), "2,0\n0,1\n");
    ordered_json manifest;
    manifest["X"] = "x.csv";
    manifest["Y"] = "y.csv";
    manifest["d1"] = 2;
    write_text(dir.file("manifest.json"), manifest.dump());

    RunOptions opts;
    opts.input = dir.file("manifest.json");
    opts.out = dir.file("report.json");
    REQUIRE(cmd_shallow(opts) == kExitOk);
    ordered_json report = ordered_json::parse(read_text(opts.out));
    // Default pattern captures the whole spectrum: the global minimum.
    CHECK(report.at("point").at("loss").get<double>() == doctest::Approx(0.0));
    CHECK(report.at("point").at("classification") == "GlobalMinCase1");
}

TEST_CASE("cmd_deep builds the consistent chain from a manifest") {
    TempDir dir;
    ordered_json manifest;
    manifest["X"] = matrix_to_json(Matrix::Identity(2, 2));
    manifest["Y"] = matrix_to_json([] {
        Matrix y = Matrix::Zero(2, 2);
        y(0, 0) = 2.0;
        y(1, 1) = 1.0;
        return y;
    }());
    manifest["dims"] = {2, 2, 2, 2};
    manifest["pattern0"] = {{"per_group", {1, 0}}, {"p_bar", 0}};
    write_text(dir.file("deep.json"), manifest.dump());

    RunOptions opts;
    opts.input = dir.file("deep.json");
    opts.out = dir.file("deep_report.json");
    REQUIRE(cmd_deep(opts) == kExitOk);
    ordered_json report = ordered_json::parse(read_text(opts.out));
    CHECK(report.at("point").at("loss").get<double>() == doctest::Approx(0.5));
    CHECK(report.at("loss_formula").get<double>() == doctest::Approx(0.5));
    const auto& grads = report.at("point").at("grad_norms");
    for (const auto& g : grads) CHECK(g.get<double>() <= 1e-8);
}

TEST_CASE("cmd_relu analyzes cones and searches") {
    TempDir dir;
    ordered_json manifest;
    manifest["X"] = matrix_to_json(Matrix::Identity(2, 2));
    manifest["Y"] = matrix_to_json([] {
        Matrix y = Matrix::Zero(2, 2);
        y(0, 0) = 2.0;
        y(1, 1) = 1.0;
        return y;
    }());
    manifest["d1"] = 1;
    manifest["search"] = true;
    ordered_json cone;
    cone["I"] = {1};
    cone["J"] = {1};
    cone["spec"] = {{"pattern", {{"per_group", {1}}, {"p_bar", 0}}},
                    {"L1", matrix_to_json([] {
                         Matrix l(1, 2);
                         l << 1.0, -1.0;
                         return l;
                     }())}};
    manifest["cones"] = ordered_json::array({cone});
    write_text(dir.file("relu.json"), manifest.dump());

    RunOptions opts;
    opts.input = dir.file("relu.json");
    opts.out = dir.file("relu_report.json");
    REQUIRE(cmd_relu(opts) == kExitOk);
    ordered_json report = ordered_json::parse(read_text(opts.out));
    CHECK(report.at("cones")[0].at("loss").get<double>() == doctest::Approx(0.5));
    CHECK(report.at("search_hits").size() >= 3);
    CHECK(std::filesystem::exists(dir.file("relu_report.json.hits.csv")));
}

TEST_CASE("cmd_certify verdicts map to exit codes") {
    TempDir dir;
    Matrix a1(1, 2), a2(2, 1);
    a1 << 2.0, 0.0;
    a2 << 1.0, 0.0;
    ordered_json manifest;
    manifest["kind"] = "shallow";
    manifest["X"] = matrix_to_json(Matrix::Identity(2, 2));
    manifest["Y"] = matrix_to_json([] {
        Matrix y = Matrix::Zero(2, 2);
        y(0, 0) = 2.0;
        y(1, 1) = 1.0;
        return y;
    }());
    manifest["weights"] = ordered_json::array({matrix_to_json(a1), matrix_to_json(a2)});
    write_text(dir.file("certify.json"), manifest.dump());

    RunOptions opts;
    opts.input = dir.file("certify.json");
    opts.out = dir.file("cert_report.json");
    REQUIRE(cmd_certify(opts) == kExitOk);
    ordered_json report = ordered_json::parse(read_text(opts.out));
    CHECK(report.at("certificate").at("verdict") == "Critical");
    CHECK(report.at("classification") == "GlobalMinCase1");

    // A generic random point is not critical: exit 3.
    manifest["weights"] =
        ordered_json::array({matrix_to_json(random_gaussian(1, 2, 3)),
                             matrix_to_json(random_gaussian(2, 1, 4))});
    write_text(dir.file("certify_bad.json"), manifest.dump());
    opts.input = dir.file("certify_bad.json");
    opts.out = dir.file("cert_bad.json");
    CHECK(cmd_certify(opts) == kExitCertification);
}

TEST_CASE("input errors exit with code 2") {
    RunOptions opts;
    opts.input = "/nonexistent/manifest.json";
    CHECK(cmd_shallow(opts) == kExitInputError);

    TempDir dir;
    write_text(dir.file("broken.json"), "{not json");
    opts.input = dir.file("broken.json");
    CHECK(cmd_shallow(opts) == kExitInputError);
}

TEST_CASE("example1 command sets the golden-mismatch exit code when corrupted") {
    TempDir dir;
    RunOptions opts;
    opts.out = dir.file("ex1.json");
    CHECK(cmd_example1(opts) == kExitOk);
    CHECK(cmd_example1(opts, true) == kExitGoldenMismatch);

    // Determinism across process-internal reruns: identical bytes.
    const std::string first = read_text(dir.file("ex1.json"));
    CHECK(cmd_example1(opts) == kExitOk);
    CHECK(read_text(dir.file("ex1.json")) == first);
}
