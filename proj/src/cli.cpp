#include "collatz/cli.hpp"

#include "collatz/core_maps.hpp"
#include "collatz/generalized.hpp"
#include "collatz/progressions.hpp"

#include <cstdlib>
#include <random>
#include <sstream>

namespace collatz {

namespace {

using nlohmann::json;

const std::pair<Command, const char*> kCommandNames[] = {
    {Command::Passage, "passage"},       {Command::Strings, "strings"},
    {Command::Evolve, "evolve"},         {Command::Coverage, "coverage"},
    {Command::FamilyAudit, "family-audit"}, {Command::Cycles, "cycles"},
    {Command::Audit3n3, "audit-3n3"},    {Command::Proportionality, "proportionality"},
    {Command::ExportGraph, "export-graph"},
};

class InvalidConfig : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

u128 need(const std::optional<u128>& v, const char* flag)
{
    if (!v) throw InvalidConfig(std::string("missing required ") + flag);
    return *v;
}

std::string pos(u128 v)
{
    return to_string(v);
}

json config_json(const RunConfig& c)
{
    json j{{"family", c.family},
           {"direction", to_string(c.direction)},
           {"k", c.k},
           {"m", c.m},
           {"max_steps", c.max_steps},
           {"max_len", c.max_len},
           {"seed", c.seed}};
    if (c.limit) j["limit"] = json_u128(*c.limit);
    if (c.lo) j["lo"] = json_u128(*c.lo);
    if (c.hi) j["hi"] = json_u128(*c.hi);
    if (c.x) j["x"] = json_u128(*c.x);
    if (c.command == Command::Coverage) {
        j["random_starts"] = c.random_starts;
        if (c.window_start) j["start"] = json_u128(*c.window_start);
    }
    if (c.command == Command::Proportionality) {
        j["cases"] = c.cases;
        j["max_x"] = json_u128(c.max_x);
        j["max_n"] = c.max_n;
        if (c.x) j["n"] = c.n;
    }
    if (c.command == Command::FamilyAudit) {
        j["m_limit"] = c.m_limit;
        j["n_limit"] = c.n_limit;
        if (c.domain_limit) j["domain_limit"] = json_u128(*c.domain_limit);
    }
    return j;
}

void run_passage(const RunConfig& c, ReportWriter& w)
{
    SweepOptions opts;
    opts.max_steps = c.max_steps;
    opts.threads = c.threads;
    opts.checkpoint_every = c.checkpoint_every;
    opts.resume = c.resume;
    u128 lo = c.lo.value_or(2);
    u128 hi = need(c.hi, "--hi");
    if (lo < 2 || lo > hi) throw InvalidConfig("passage requires 2 <= lo <= hi");
    opts.checkpoint = c.checkpoint;
    if (!opts.checkpoint) {
        if (const char* dir = std::getenv(kCheckpointDirEnv); dir && *dir) {
            opts.checkpoint = std::filesystem::path(dir) / ("passage-" + pos(lo) + "-" + pos(hi) + ".ckpt");
        }
    }

    PassageStats s = passage_sweep(lo, hi, opts);
    for (u128 t : s.truncated) {
        w.emit({FindingKind::Truncation, pos(t), "no [3+4N0] position within max_steps",
                {{"max_steps", c.max_steps}}});
    }
    std::ostringstream mean;
    mean.precision(6);
    mean << std::fixed << (s.hits ? static_cast<double>(s.sum_hit_steps) / static_cast<double>(s.hits) : 0.0);
    w.emit({FindingKind::Measurement, "summary", "passage through [3+4N0]",
            {{"processed", s.processed},
             {"hits", s.hits},
             {"max_hit_steps", s.max_hit_steps},
             {"max_hit_at", json_u128(s.max_hit_at)},
             {"mean_hit_steps", mean.str()},
             {"max_steps_to_one", s.max_steps_to_one},
             {"max_steps_to_one_at", json_u128(s.max_steps_to_one_at)}}});
    if (s.processed != static_cast<std::uint64_t>(hi - lo + 1)) {
        w.emit({FindingKind::Truncation, "sweep", "sweep stopped before hi", {{"processed", s.processed}}});
    } else if (s.hits != s.processed && s.truncated.empty()) {
        w.emit({FindingKind::Violation, "summary", "positions without a [3+4N0] hit", {{"missing", s.processed - s.hits}}});
    }
}

json elements_json(const StringRecord& r)
{
    json arr = json::array();
    for (const auto& e : r.elements) arr.push_back(json_u128(e.value()));
    return arr;
}

void run_strings(const RunConfig& c, ReportWriter& w)
{
    if (c.x) {
        if (c.family != 1) throw InvalidConfig("--x is only supported for p = 1");
        if (*c.x < 2) throw InvalidConfig("[1] is the trivial loop, not in a string");
        auto r = build_string_containing(Position(*c.x), c.max_len);
        if (r.truncated) {
            w.emit({FindingKind::Truncation, pos(*c.x), "string walk exceeded max_len", {{"max_len", c.max_len}}});
            return;
        }
        w.emit({FindingKind::Measurement, pos(*c.x), "string",
                {{"head", json_u128(r.head.value())},
                 {"tail", json_u128(r.tail.value())},
                 {"length", r.length},
                 {"elements", elements_json(r)}}});
        return;
    }
    u128 limit = need(c.limit, "--limit");
    if (limit < 2) throw InvalidConfig("--limit must be >= 2");
    if (c.family == 1) {
        auto a = partition_audit(limit, c.max_len);
        for (u128 t : a.truncated) w.emit({FindingKind::Truncation, pos(t), "string walk exceeded max_len", {}});
        for (u128 v : a.violations) w.emit({FindingKind::Violation, pos(v), "head differs from the head of F_l(x)", {}});
        w.emit({FindingKind::Measurement, "summary", "string partition of [2, limit]",
                {{"limit", json_u128(limit)},
                 {"strings", a.strings},
                 {"longest_walk", a.longest},
                 {"longest_walk_at", json_u128(a.longest_at)}}});
        return;
    }
    auto s = string_scan(FamilyParam(c.family), limit, c.max_len);
    for (u128 o : s.orphans) w.emit({FindingKind::Violation, pos(o), "orphan: walk closes a non-trivial cycle", {}});
    for (u128 t : s.truncated) w.emit({FindingKind::Truncation, pos(t), "walk exceeded max_len", {}});
    for (u128 r : s.rejected) w.emit({FindingKind::Violation, pos(r), "3n+p < 1 along the walk", {}});
    w.emit({FindingKind::Measurement, "summary", "string scan for 3n+p",
            {{"p", c.family},
             {"limit", json_u128(limit)},
             {"heads", s.heads},
             {"tails", s.tails},
             {"exceptional_lower", s.exceptional_lower},
             {"orphans", s.orphans.size()}}});
}

void run_evolve(const RunConfig& c, ReportWriter& w)
{
    if (c.k > 24) throw InvalidConfig("-k above 24 is not supported");
    EvolutionState s = c.direction == Direction::Forward ? evolve_forward(c.k) : evolve_backward(c.k);
    for (std::size_t i = 0; i < s.parts.size(); ++i) {
        w.emit({FindingKind::Measurement, "part " + std::to_string(i), to_string(s.parts[i]),
                {{"intercept", json_u128(s.parts[i].intercept())}, {"interval", json_u128(s.parts[i].interval())}}});
    }
    const u128 expected_parts = u128{1} << c.k;
    if (s.parts.size() != expected_parts) {
        w.emit({FindingKind::Violation, "structure", "part count is not 2^k", {{"parts", s.parts.size()}}});
    }
    if (c.direction == Direction::Forward) {
        u128 v = checked_pow(3, c.k + 1);
        for (std::size_t i = 0; i < s.parts.size(); ++i) {
            if (s.parts[i].interval() != v) {
                w.emit({FindingKind::Violation, "part " + std::to_string(i), "interval is not 3^(k+1)", {}});
            }
        }
    } else {
        u128 denom = checked_pow(4, c.k + 1), sum = 0;
        bool divides = true;
        for (const auto& p : s.parts) {
            divides = divides && denom % p.interval() == 0;
            if (divides) sum += denom / p.interval();
        }
        if (!divides || sum != checked_pow(3, c.k)) {
            w.emit({FindingKind::Violation, "structure", "sum of 1/interval is not 3^k/4^(k+1)", {}});
        }
    }
    auto audit = intercept_audit(s);
    for (const auto& v : audit.violations) {
        w.emit({FindingKind::Violation, "part " + std::to_string(v.part_index), v.rule, {{"part", to_string(v.part)}}});
    }
    w.emit({FindingKind::Measurement, "summary", std::string("generation of the ") + to_string(c.direction) + " process",
            {{"k", c.k}, {"parts", s.parts.size()}, {"max_intercept", json_u128(audit.max_intercept)}}});
}

void run_coverage(const RunConfig& c, ReportWriter& w)
{
    if (c.m < 1 || c.m > 30) throw InvalidConfig("-m must be in [1, 30]");
    std::vector<u128> starts{c.window_start.value_or(2)};
    std::mt19937_64 rng(c.seed);
    for (std::uint64_t i = 0; i < c.random_starts; ++i) starts.push_back(2 + rng() % 1000000000);
    for (u128 s : starts) {
        if (s < 2) throw InvalidConfig("--start must be >= 2");
        auto cc = coverage_count(c.direction, c.m, s);
        json payload{{"included", json_u128(cc.included)},
                     {"open", json_u128(cc.open)},
                     {"expected_included", json_u128(cc.expected_included)},
                     {"expected_open", json_u128(cc.expected_open)}};
        w.emit({cc.holds() ? FindingKind::Measurement : FindingKind::Violation, "window " + pos(s),
                std::string(to_string(c.direction)) + " m=" + std::to_string(c.m), payload});
    }
}

void run_family_audit(const RunConfig& c, ReportWriter& w)
{
    auto rules = case_system(c.family);
    if (!rules) throw InvalidConfig("no case system is printed for p = " + std::to_string(c.family));
    FamilyParam fam(c.family);
    auto audit = audit_case_system(fam, *rules, {c.m_limit, c.n_limit, c.domain_limit});
    for (const auto& mm : audit.mismatches) {
        w.emit({FindingKind::Mismatch, mm.rule, "G_p(E_p^n(domain)) differs from the printed image",
                {{"m", mm.m},
                 {"n", mm.n},
                 {"position", json_u128(mm.position)},
                 {"expected", json_u128(mm.expected)},
                 {"actual", json_u128(mm.actual)}}});
    }
    w.emit({FindingKind::Measurement, "summary", "case system audit",
            {{"p", c.family}, {"rules", rules->size()}, {"instances", audit.instances}, {"mismatches", audit.mismatches.size()}}});
}

void run_cycles(const RunConfig& c, ReportWriter& w)
{
    u128 limit = need(c.limit, "--seed-limit");
    auto res = find_cycles(FamilyParam(c.family), limit, c.max_steps);
    for (const auto& cyc : res.cycles) {
        json members = json::array();
        for (u128 v : cyc.members) members.push_back(json_u128(v));
        w.emit({FindingKind::Measurement, "cycle " + pos(cyc.members.front()), "cycle of G_p",
                {{"length", cyc.members.size()}, {"members", members}}});
    }
    if (res.truncated_seeds) {
        w.emit({FindingKind::Truncation, "seeds", "seeds neither cycled nor fell below the seed",
                {{"count", res.truncated_seeds}}});
    }
    if (res.rejected_seeds) {
        w.emit({FindingKind::Violation, "seeds", "3n+p < 1 along the trajectory", {{"count", res.rejected_seeds}}});
    }
    w.emit({FindingKind::Measurement, "summary", "cycle search",
            {{"p", c.family}, {"seed_limit", json_u128(limit)}, {"cycles", res.cycles.size()}}});
}

void run_audit_3n3(const RunConfig& c, ReportWriter& w)
{
    u128 limit = need(c.limit, "--limit");
    auto a = two_to_one_audit(limit);
    for (const auto& v : a.violations) {
        w.emit({FindingKind::Violation, pos(v.image), "image not hit exactly twice", {{"count", v.count}}});
    }
    for (u128 y : a.co_tail_violations) {
        w.emit({FindingKind::Violation, pos(y), "preimages are not in ratio 2", {}});
    }
    w.emit({FindingKind::Measurement, "summary", "3n+3 two-to-one audit",
            {{"limit", json_u128(limit)}, {"images", a.images}}});
}

json signature_json(const Signature& s)
{
    json arr = json::array();
    for (const auto& step : s.steps) {
        arr.push_back(step.z ? std::string(to_string(step.branch)) + "(z=" + std::to_string(step.z) + ")"
                             : std::string(to_string(step.branch)));
    }
    return arr;
}

void proportionality_case(const RunConfig& c, ReportWriter& w, u128 x, unsigned n)
{
    Recurrence r = c.direction == Direction::Forward ? first_recurrence_forward(Position(x), n)
                                                     : first_recurrence_backward(Position(x), n);
    json payload{{"x", json_u128(x)},
                 {"n", n},
                 {"signature", signature_json(r.signature)},
                 {"predicted", json_u128(r.predicted)}};
    if (r.found) payload["found"] = json_u128(*r.found);
    w.emit({r.holds() ? FindingKind::Measurement : FindingKind::Violation, pos(x),
            std::string(to_string(c.direction)) + " recurrence", payload});
}

void run_proportionality(const RunConfig& c, ReportWriter& w)
{
    if (c.x) {
        if (*c.x < 1 || c.n < 1) throw InvalidConfig("--x and --n must be >= 1");
        proportionality_case(c, w, *c.x, c.n);
        return;
    }
    if (c.max_x < 1 || c.max_n < 1) throw InvalidConfig("--max-x and --max-n must be >= 1");
    std::mt19937_64 rng(c.seed);
    for (std::uint64_t i = 0; i < c.cases; ++i) {
        u128 x = 1 + static_cast<u128>(rng()) % c.max_x;
        auto n = static_cast<unsigned>(1 + rng() % c.max_n);
        proportionality_case(c, w, x, n);
    }
}

} // namespace

const char* to_string(Command c)
{
    for (const auto& [cmd, name] : kCommandNames) {
        if (cmd == c) return name;
    }
    return "?";
}

std::optional<Command> parse_command(const std::string& name)
{
    for (const auto& [cmd, n] : kCommandNames) {
        if (name == n) return cmd;
    }
    return std::nullopt;
}

void export_graph(u128 limit, std::ostream& out)
{
    if (limit < 1) throw std::invalid_argument("export_graph requires limit >= 1");
    if (limit > kGraphCap) throw std::invalid_argument("export_graph limit exceeds cap " + to_string(kGraphCap));
    out << "digraph strings {\n"
        << "  node [shape=circle];\n"
        << "  1 [label=\"1\", shape=doublecircle];\n"
        << "  1 -> 1;\n";
    for (u128 v = 2; v <= limit; ++v) {
        Position x(v);
        out << "  " << to_string(v) << " [label=\"" << to_string(v) << "\"";
        if (is_tail(x) && is_head(x)) out << ", color=red, style=dotted";
        else if (is_tail(x)) out << ", color=red";
        else if (is_head(x)) out << ", style=dotted";
        out << "];\n";
    }
    for (u128 v = 2; v <= limit; ++v) {
        if (auto next = f_l(Position(v)); next && next->value() <= limit) {
            out << "  " << to_string(v) << " -> " << to_string(next->value()) << ";\n";
        }
    }
    for (u128 v = 2; 4 * v - 1 <= limit; ++v) {
        out << "  " << to_string(v) << " -> " << to_string(4 * v - 1) << " [style=dashed];\n";
    }
    out << "}\n";
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        if (config.command == Command::ExportGraph) {
            export_graph(need(config.limit, "--limit"), out);
            return kExitOk;
        }
        std::ostringstream body;
        ReportWriter w(body, config.format);
        w.header(to_string(config.command), config_json(config));
        switch (config.command) {
        case Command::Passage: run_passage(config, w); break;
        case Command::Strings: run_strings(config, w); break;
        case Command::Evolve: run_evolve(config, w); break;
        case Command::Coverage: run_coverage(config, w); break;
        case Command::FamilyAudit: run_family_audit(config, w); break;
        case Command::Cycles: run_cycles(config, w); break;
        case Command::Audit3n3: run_audit_3n3(config, w); break;
        case Command::Proportionality: run_proportionality(config, w); break;
        case Command::ExportGraph: break;
        }
        out << body.str();
        out.flush();
        return w.failures() ? kExitFindings : kExitOk;
    } catch (const std::exception& e) {
        // width exceeded, bad configuration, unreadable checkpoint
        err << "error: " << e.what() << '\n';
    }
    return kExitInvalid;
}

} // namespace collatz
