#include "collatz/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

using namespace collatz;

namespace {

// Wide positions arrive as text and are parsed exactly after CLI11 is done.
struct WideFlags {
    std::map<std::string, std::string> text;

    void add(CLI::App* sub, const std::string& names, const std::string& key, const std::string& help)
    {
        sub->add_option(names, text[sub->get_name() + key], help);
    }

    std::optional<u128> get(const CLI::App* sub, const std::string& key) const
    {
        auto it = text.find(sub->get_name() + key);
        if (it == text.end() || it->second.empty()) return std::nullopt;
        return parse_u128(it->second);
    }
};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Conjugated Collatz strings: sweeps, audits and exports"};
    app.require_subcommand(1);

    RunConfig cfg;
    WideFlags wide;
    std::string format = "jsonl";
    std::string direction = "forward";
    std::string checkpoint;

    auto add_format = [&](CLI::App* s) {
        s->add_option("--format", format, "Report format")->check(CLI::IsMember({"jsonl", "csv"}));
    };
    auto add_direction = [&](CLI::App* s) {
        s->add_option("--direction", direction, "forward or backward")->check(CLI::IsMember({"forward", "backward"}));
    };
    auto add_family = [&](CLI::App* s) { s->add_option("-p,--family", cfg.family, "Odd parameter p of 3n+p"); };
    auto add_seed = [&](CLI::App* s) { s->add_option("--seed", cfg.seed, "RNG seed for sampled checks"); };

    auto* passage = app.add_subcommand("passage", "Every position in [lo, hi] reaches [3+4N0]");
    wide.add(passage, "--lo", "lo", "First position (>= 2, default 2)");
    wide.add(passage, "--hi", "hi", "Last position");
    passage->add_option("--max-steps", cfg.max_steps, "Step budget per trajectory");
    passage->add_option("--checkpoint", checkpoint, "Checkpoint file");
    passage->add_option("--checkpoint-every", cfg.checkpoint_every, "Positions per checkpoint");
    passage->add_flag("--resume", cfg.resume, "Continue from the checkpoint");
    passage->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 256u));
    add_format(passage);

    auto* strings = app.add_subcommand("strings", "Partition [2, limit] into strings, or print the string of --x");
    wide.add(strings, "--limit", "limit", "Largest position");
    wide.add(strings, "--x", "x", "Single position (p = 1)");
    add_family(strings);
    strings->add_option("--max-len", cfg.max_len, "Step budget per string walk");
    add_format(strings);

    auto* evolve = app.add_subcommand("evolve", "Generation k of the forward or backward process");
    add_direction(evolve);
    evolve->add_option("-k", cfg.k, "Generation");
    add_format(evolve);

    auto* coverage = app.add_subcommand("coverage", "Included/open counts in a window of 3^m or 4^m");
    add_direction(coverage);
    coverage->add_option("-m", cfg.m, "Window exponent");
    wide.add(coverage, "--start", "start", "First position of the window (default 2)");
    coverage->add_option("--random-starts", cfg.random_starts, "Extra seeded random windows");
    add_seed(coverage);
    add_format(coverage);

    auto* family = app.add_subcommand("family-audit", "Check a printed case system against the 3n+p map");
    add_family(family);
    family->add_option("--m-limit", cfg.m_limit, "Largest m per rule");
    family->add_option("--n-limit", cfg.n_limit, "Largest equivalence depth n");
    wide.add(family, "--domain-limit", "domain", "Largest domain value");
    add_format(family);

    auto* cycles = app.add_subcommand("cycles", "Cycles of the 3n+p conjugate map");
    add_family(cycles);
    wide.add(cycles, "--limit,--seed-limit", "limit", "Largest seed position");
    cycles->add_option("--max-steps", cfg.max_steps, "Step budget per seed");
    add_format(cycles);

    auto* a3 = app.add_subcommand("audit-3n3", "3n+3 two-to-one audit");
    wide.add(a3, "--limit", "limit", "Largest image position");
    add_format(a3);

    auto* prop = app.add_subcommand("proportionality", "First recurrence of a signature");
    add_direction(prop);
    wide.add(prop, "--x", "x", "Single position");
    prop->add_option("-n", cfg.n, "Signature length for --x");
    prop->add_option("--cases", cfg.cases, "Random cases");
    wide.add(prop, "--max-x", "maxx", "Largest random x");
    prop->add_option("--max-n", cfg.max_n, "Largest random n");
    add_seed(prop);
    add_format(prop);

    auto* graph = app.add_subcommand("export-graph", "DOT graph of the strings through [1, limit]");
    wide.add(graph, "--limit", "limit", "Largest position");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = *parse_command(sub->get_name());
    try {
        cfg.limit = wide.get(sub, "limit");
        cfg.lo = wide.get(sub, "lo");
        cfg.hi = wide.get(sub, "hi");
        cfg.x = wide.get(sub, "x");
        cfg.window_start = wide.get(sub, "start");
        cfg.domain_limit = wide.get(sub, "domain");
        if (auto mx = wide.get(sub, "maxx")) cfg.max_x = *mx;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInvalid;
    }
    cfg.format = format == "csv" ? ReportFormat::Csv : ReportFormat::JsonLines;
    cfg.direction = direction == "backward" ? Direction::Backward : Direction::Forward;
    if (!checkpoint.empty()) cfg.checkpoint = checkpoint;
    if (cfg.command == Command::Proportionality && cfg.x && cfg.n == 0) {
        std::cerr << "error: --x requires -n\n";
        return kExitInvalid;
    }

    return run(cfg, std::cout, std::cerr);
}
