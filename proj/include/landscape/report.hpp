#ifndef LANDSCAPE_REPORT_HPP
#define LANDSCAPE_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "landscape/deep.hpp"
#include "landscape/relu.hpp"
#include "landscape/shallow.hpp"

namespace landscape {

inline constexpr const char* kToolName = "landscape-lab";
inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitCertification = 3;
inline constexpr int kExitGoldenMismatch = 4;

struct RunOptions {
    std::string input;
    std::string out;
    std::uint64_t seed = 1;
    double group_tol = 1e-8;
    double crit_tol = 1e-8;
    double margin = 0.0;
    std::vector<std::string> witnesses; // of {"non-optimal", "optimal", "ascent"}
    bool search = false;
};

/// Writes via a temp file and rename so readers never see a torn report.
void write_atomic(const std::string& path, const std::string& contents);

nlohmann::ordered_json pattern_json(const BlockPattern& p);
nlohmann::ordered_json grouped_svd_json(const GroupedSVD& s);
nlohmann::ordered_json certified_point_json(const CertifiedPoint& p);
nlohmann::ordered_json deep_point_json(const DeepCertifiedPoint& p);

int cmd_shallow(const RunOptions& opts);
int cmd_deep(const RunOptions& opts);
int cmd_relu(const RunOptions& opts);
int cmd_certify(const RunOptions& opts);
int cmd_example1(const RunOptions& opts, bool corrupt_golden = false);

/// The Example-1 end-to-end reproduction; also used by the acceptance
/// suite. Throws on internal failure; golden verdicts live in the report.
nlohmann::ordered_json example1_report(std::uint64_t seed, bool corrupt_golden = false);

} // namespace landscape

#endif
