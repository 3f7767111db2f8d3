#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "gnm/network.hpp"

namespace gnm::cli {

enum class Command { kGenerate, kVerify, kAudit, kBench };
enum class Format { kEdgeList, kTraceJson, kReportJson, kText };

struct RunSpec {
  Command command = Command::kGenerate;
  std::filesystem::path config_path;
  std::vector<Strategy> strategies;  // empty: command default
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> n_samples;
  std::optional<std::filesystem::path> output_path;
  std::optional<Format> format;
  unsigned workers = 1;
  std::optional<std::uint64_t> cap_bytes;
  std::optional<std::uint32_t> k_override;
  std::optional<std::uint32_t> ell_override;
  std::optional<std::uint32_t> k_min;
  std::optional<std::uint32_t> k_max;
  std::optional<Strategy> against;
};

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitCapExceeded = 3;
inline constexpr int kExitIo = 4;

// Executes one command. Reports go to spec.output_path when set, otherwise
// to `out`; diagnostics go to `err`.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

// Parses argv (CLI11). Returns the spec, or an exit code when parsing
// finished the invocation (--help, usage errors).
struct ParseOutcome {
  std::optional<RunSpec> spec;
  int exit_code = kExitOk;
};
ParseOutcome parse_args(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace gnm::cli
