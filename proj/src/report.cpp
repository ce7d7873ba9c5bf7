#include "collatz/report.hpp"

namespace collatz {

const char* to_string(FindingKind k)
{
    switch (k) {
    case FindingKind::Violation: return "violation";
    case FindingKind::Truncation: return "truncation";
    case FindingKind::Mismatch: return "mismatch";
    case FindingKind::Measurement: return "measurement";
    }
    return "?";
}

nlohmann::json json_u128(u128 v)
{
    if (fits_u64(v)) return static_cast<std::uint64_t>(v);
    return to_string(v);
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::string scalar_text(const nlohmann::json& v)
{
    return v.is_string() ? v.get<std::string>() : v.dump();
}

} // namespace

ReportWriter::ReportWriter(std::ostream& out, ReportFormat format) : out_(out), format_(format) {}

void ReportWriter::header(const std::string& command, const nlohmann::json& config)
{
    if (format_ == ReportFormat::JsonLines) {
        nlohmann::json h{{"record", "header"},
                         {"schema", "collatz-strings/report"},
                         {"version", kReportSchemaVersion},
                         {"command", command},
                         {"config", config}};
        out_ << h.dump() << '\n';
    } else {
        out_ << "# collatz-strings/report v" << kReportSchemaVersion << " " << command << '\n'
             << "kind,location,details,key,value\n";
    }
}

void ReportWriter::emit(const Finding& f)
{
    if (f.kind != FindingKind::Measurement) ++failures_;
    if (format_ == ReportFormat::JsonLines) {
        nlohmann::json j{{"record", "finding"},
                         {"kind", to_string(f.kind)},
                         {"location", f.location},
                         {"details", f.details},
                         {"payload", f.payload}};
        out_ << j.dump() << '\n';
        return;
    }
    const std::string prefix = std::string(to_string(f.kind)) + "," + csv_field(f.location) + "," + csv_field(f.details);
    if (f.payload.empty()) {
        out_ << prefix << ",,\n";
        return;
    }
    for (const auto& [key, value] : f.payload.items()) {
        out_ << prefix << "," << csv_field(key) << "," << csv_field(scalar_text(value)) << '\n';
    }
}

} // namespace collatz
