#pragma once

// Report stream: one header record, then one Finding per line (JSON-lines),
// or a flat CSV table with one row per payload entry.

#include "collatz/checked.hpp"

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>

namespace collatz {

enum class FindingKind { Violation, Truncation, Mismatch, Measurement };
enum class ReportFormat { JsonLines, Csv };

[[nodiscard]] const char* to_string(FindingKind k);

struct Finding {
    FindingKind kind = FindingKind::Measurement;
    std::string location;
    std::string details;
    nlohmann::json payload = nlohmann::json::object();
};

/// Numbers above 2^64 are written as decimal strings.
[[nodiscard]] nlohmann::json json_u128(u128 v);

inline constexpr int kReportSchemaVersion = 1;

class ReportWriter {
public:
    ReportWriter(std::ostream& out, ReportFormat format);

    void header(const std::string& command, const nlohmann::json& config);
    void emit(const Finding& f);

    /// Violations, truncations and mismatches seen so far.
    [[nodiscard]] std::uint64_t failures() const { return failures_; }

private:
    std::ostream& out_;
    ReportFormat format_;
    std::uint64_t failures_ = 0;
};

} // namespace collatz
