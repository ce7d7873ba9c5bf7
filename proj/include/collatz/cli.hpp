#pragma once

#include "collatz/checked.hpp"
#include "collatz/report.hpp"
#include "collatz/string_engine.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace collatz {

enum class Command { Passage, Strings, Evolve, Coverage, FamilyAudit, Cycles, Audit3n3, Proportionality, ExportGraph };

[[nodiscard]] const char* to_string(Command c);
[[nodiscard]] std::optional<Command> parse_command(const std::string& name);

struct RunConfig {
    Command command = Command::Passage;
    std::optional<u128> limit;
    std::optional<u128> lo;
    std::optional<u128> hi;
    std::optional<u128> x; // single position (strings, proportionality)
    std::int64_t family = 1;
    Direction direction = Direction::Forward;
    unsigned k = 2;
    unsigned m = 3;
    unsigned n = 0;                        // proportionality: fixed length when x is set
    std::optional<u128> window_start;      // coverage
    std::uint64_t random_starts = 0;       // coverage
    std::uint64_t cases = 200;             // proportionality
    u128 max_x = 10000;                    // proportionality
    unsigned max_n = 6;                    // proportionality
    std::uint64_t m_limit = 1000;          // family-audit
    unsigned n_limit = 4;                  // family-audit
    std::optional<u128> domain_limit;      // family-audit
    std::uint64_t max_steps = kDefaultMaxSteps;
    std::uint64_t max_len = kDefaultStringMaxLen;
    ReportFormat format = ReportFormat::JsonLines;
    std::optional<std::filesystem::path> checkpoint;
    std::uint64_t checkpoint_every = std::uint64_t{1} << 20;
    bool resume = false;
    unsigned threads = 1;
    std::uint64_t seed = 20240601;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitInvalid = 2;

/// Environment variable naming the default directory for passage checkpoints.
inline constexpr const char* kCheckpointDirEnv = "COLLATZ_STRINGS_CHECKPOINT_DIR";

inline constexpr u128 kGraphCap = 10000;

/// Validates and dispatches config; the report goes to out, diagnostics to err.
/// Returns 0 when every assertion holds, 1 on any violation/mismatch/truncation,
/// 2 on invalid configuration or 128-bit overflow.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// DOT document of the strings through [1, limit]: F_l links solid, x -> 4x-1 dashed.
void export_graph(u128 limit, std::ostream& out);

} // namespace collatz
