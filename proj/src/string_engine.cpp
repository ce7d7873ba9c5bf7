#include "collatz/string_engine.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace collatz {

const char* to_string(Direction d)
{
    return d == Direction::Forward ? "forward" : "backward";
}

std::vector<LowerBranch> collatz_lower_branches()
{
    return {{2, 2, 3}, {1, 4, 1}};
}

std::vector<Progression> children_of(const Progression& part, Direction d)
{
    std::vector<Progression> out;
    out.reserve(2);
    if (d == Direction::Forward) {
        if (auto even = intersect_residue(part, 0, 2)) out.push_back(image_f1(*even));
        if (auto one = intersect_residue(part, 1, 4)) out.push_back(image_f2(*one));
    } else {
        if (auto zero = intersect_residue(part, 0, 3)) out.push_back(image_f1_inv(*zero));
        if (auto one = intersect_residue(part, 1, 3)) out.push_back(image_f2_inv(*one));
    }
    return out;
}

namespace {

EvolutionState evolve(Direction d, unsigned k)
{
    EvolutionState s{d, 0, {d == Direction::Forward ? Progression(2, 3) : Progression(3, 4)}};
    for (; s.k < k; ++s.k) {
        std::vector<Progression> next;
        next.reserve(s.parts.size() * 2);
        for (const auto& part : s.parts) {
            for (auto& child : children_of(part, d)) next.push_back(child);
        }
        s.parts = std::move(next);
    }
    return s;
}

} // namespace

EvolutionState evolve_forward(unsigned k)
{
    return evolve(Direction::Forward, k);
}

EvolutionState evolve_backward(unsigned k)
{
    return evolve(Direction::Backward, k);
}

std::vector<std::vector<Progression>> evolve_lower(const std::vector<LowerBranch>& branches, const Progression& seed,
                                                   unsigned k)
{
    std::vector<std::vector<Progression>> gens{{seed}};
    for (unsigned g = 0; g < k; ++g) {
        std::vector<Progression> next;
        for (const auto& part : gens.back()) {
            for (const auto& b : branches) {
                auto dom = intersect_residue(part, b.offset, b.stride);
                if (!dom) continue;
                // Lowest member of the branch domain inside this part.
                u128 first = dom->intercept();
                while (first < b.offset) first = checked_add(first, dom->interval());
                u128 m = (first - b.offset) / b.stride;
                next.emplace_back(checked_add(b.image_offset, checked_mul(3, m)),
                                  checked_mul(3, dom->interval() / b.stride));
            }
        }
        gens.push_back(std::move(next));
    }
    return gens;
}

InterceptAudit intercept_audit(const EvolutionState& state)
{
    InterceptAudit audit;
    for (std::size_t i = 0; i < state.parts.size(); ++i) {
        const auto& p = state.parts[i];
        audit.max_intercept = std::max(audit.max_intercept, p.intercept());
        if (p.intercept() >= p.interval()) audit.violations.push_back({i, p, "intercept < interval"});
        for (const auto& child : children_of(p, state.direction)) {
            const u128 c = child.intercept();
            bool ok = state.direction == Direction::Forward
                          ? checked_mul(4, c - 1) <= checked_mul(3, p.intercept() + 3 * p.interval() - 1)
                          : checked_mul(3, c - 1) <= checked_mul(4, p.intercept() + 2 * p.interval() - 1);
            if (!ok) {
                audit.violations.push_back(
                    {i, child, state.direction == Direction::Forward ? "C' <= 3(C+3V-1)/4+1" : "D' <= 4(D+2W-1)/3+1"});
            }
        }
    }
    return audit;
}

CoverageCount coverage_count(Direction d, unsigned m, u128 window_start)
{
    if (m < 1) throw std::invalid_argument("coverage_count requires m >= 1");
    if (window_start < 2) throw std::invalid_argument("coverage windows start at position 2 or later");
    const u128 base = d == Direction::Forward ? 3 : 4;
    const u128 other = d == Direction::Forward ? 2 : 3;
    const u128 width = checked_pow(base, m);
    const u128 hi = checked_add(window_start, width);

    CoverageCount c;
    EvolutionState s{d, 0, {d == Direction::Forward ? Progression(2, 3) : Progression(3, 4)}};
    for (unsigned k = 0; k < m; ++k) {
        for (const auto& part : s.parts) c.included += part.count_in(window_start, hi);
        if (k + 1 < m) s = d == Direction::Forward ? evolve_forward(k + 1) : evolve_backward(k + 1);
    }
    c.open = width - c.included;
    c.expected_open = checked_pow(other, m);
    c.expected_included = width - c.expected_open;
    return c;
}

StringRecord build_string_containing(Position x, std::uint64_t max_len, std::uint64_t element_cap)
{
    if (x.value() < 2) throw std::invalid_argument("[1] is the trivial loop, not part of a string");
    StringRecord rec;

    std::vector<Position> back{x};
    Position cur = x;
    while (!is_head(cur)) {
        if (back.size() > max_len) {
            rec.truncated = true;
            return rec;
        }
        cur = *f_l_inv(cur);
        back.push_back(cur);
    }
    rec.head = cur;

    std::vector<Position> fwd;
    cur = x;
    while (!is_tail(cur)) {
        if (fwd.size() > max_len) {
            rec.truncated = true;
            return rec;
        }
        cur = *f_l(cur);
        fwd.push_back(cur);
    }
    rec.tail = cur;
    rec.length = back.size() + fwd.size();
    rec.index_of_x = back.size() - 1;
    if (rec.length <= element_cap) {
        rec.elements.assign(back.rbegin(), back.rend());
        rec.elements.insert(rec.elements.end(), fwd.begin(), fwd.end());
    }
    return rec;
}

PartitionAudit partition_audit(u128 limit, std::uint64_t max_len)
{
    if (limit < 2) throw std::invalid_argument("partition_audit requires limit >= 2");
    if (!fits_u64(limit) || limit > (u128{1} << 34)) throw std::invalid_argument("partition_audit limit too large");
    const auto n = static_cast<std::size_t>(limit);

    PartitionAudit audit;
    audit.limit = limit;
    // head_of[v] and has_tail[v] for v <= limit, filled in increasing order so walks can stop
    // at any already-classified smaller value.
    std::vector<u128> head_of(n + 1, 0);
    std::vector<char> reaches_tail(n + 1, 0);
    std::unordered_set<u128> heads;

    for (u128 x = 2; x <= limit; ++x) {
        const auto xi = static_cast<std::size_t>(x);
        std::uint64_t walked = 0;

        Position cur(x);
        u128 head = 0;
        while (true) {
            if (is_head(cur)) {
                head = cur.value();
                break;
            }
            if (cur.value() < x && head_of[static_cast<std::size_t>(cur.value())] != 0) {
                head = head_of[static_cast<std::size_t>(cur.value())];
                break;
            }
            if (++walked > max_len) break;
            cur = *f_l_inv(cur);
        }

        std::uint64_t fwd = 0;
        bool tail_found = false;
        cur = Position(x);
        while (true) {
            if (is_tail(cur) || (cur.value() < x && reaches_tail[static_cast<std::size_t>(cur.value())])) {
                tail_found = true;
                break;
            }
            if (++fwd > max_len) break;
            cur = *f_l(cur);
        }

        if (head == 0 || !tail_found) {
            audit.truncated.push_back(x);
            continue;
        }
        head_of[xi] = head;
        reaches_tail[xi] = 1;
        heads.insert(head);
        if (walked + fwd > audit.longest) {
            audit.longest = walked + fwd;
            audit.longest_at = x;
        }
    }

    // Single-valuedness: x and F_l(x) must report the same head.
    for (u128 x = 2; x <= limit; ++x) {
        Position p(x);
        if (is_tail(p)) continue;
        u128 next = f_l(p)->value();
        if (next > limit) continue;
        auto a = head_of[static_cast<std::size_t>(x)];
        auto b = head_of[static_cast<std::size_t>(next)];
        if (a != 0 && b != 0 && a != b) audit.violations.push_back(x);
    }
    audit.strings = heads.size();
    return audit;
}

void PassageStats::merge(const PassageStats& o)
{
    processed += o.processed;
    hits += o.hits;
    sum_hit_steps += o.sum_hit_steps;
    if (o.max_hit_steps > max_hit_steps ||
        (o.max_hit_steps == max_hit_steps && o.max_hit_at != 0 && (max_hit_at == 0 || o.max_hit_at < max_hit_at))) {
        max_hit_steps = o.max_hit_steps;
        max_hit_at = o.max_hit_at;
    }
    if (o.max_steps_to_one > max_steps_to_one ||
        (o.max_steps_to_one == max_steps_to_one && o.max_steps_to_one_at != 0 &&
         (max_steps_to_one_at == 0 || o.max_steps_to_one_at < max_steps_to_one_at))) {
        max_steps_to_one = o.max_steps_to_one;
        max_steps_to_one_at = o.max_steps_to_one_at;
    }
    truncated.insert(truncated.end(), o.truncated.begin(), o.truncated.end());
    std::sort(truncated.begin(), truncated.end());
    if (truncated.size() > kMaxRecordedTruncations) truncated.resize(kMaxRecordedTruncations);
}

PassageStats passage_range(u128 lo, u128 hi, std::uint64_t max_steps)
{
    if (lo < 2) throw std::invalid_argument("passage sweep starts at position 2 or later");
    PassageStats s;
    for (u128 x = lo; x <= hi; ++x) {
        auto r = trajectory_report(Position(x), max_steps);
        ++s.processed;
        if (r.steps_to_first_3mod4) {
            ++s.hits;
            s.sum_hit_steps += *r.steps_to_first_3mod4;
            if (*r.steps_to_first_3mod4 > s.max_hit_steps || s.max_hit_at == 0) {
                s.max_hit_steps = *r.steps_to_first_3mod4;
                s.max_hit_at = x;
            }
        }
        if (r.steps_to_one && (*r.steps_to_one > s.max_steps_to_one || s.max_steps_to_one_at == 0)) {
            s.max_steps_to_one = *r.steps_to_one;
            s.max_steps_to_one_at = x;
        }
        if (r.truncated && s.truncated.size() < kMaxRecordedTruncations) s.truncated.push_back(x);
        if (x == hi) break; // hi may be the largest representable value
    }
    return s;
}

namespace {

constexpr const char* kCheckpointMagic = "collatz-strings-checkpoint";

} // namespace

void write_checkpoint(const std::filesystem::path& path, const SweepCheckpoint& c)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write checkpoint " + tmp.string());
        const auto& s = c.stats;
        out << kCheckpointMagic << ' ' << SweepCheckpoint::kVersion << '\n'
            << "direction forward\n"
            << "lo " << to_string(c.lo) << '\n'
            << "hi " << to_string(c.hi) << '\n'
            << "max_steps " << c.max_steps << '\n'
            << "next " << to_string(c.next) << '\n'
            << "processed " << s.processed << '\n'
            << "hits " << s.hits << '\n'
            << "max_hit_steps " << s.max_hit_steps << '\n'
            << "max_hit_at " << to_string(s.max_hit_at) << '\n'
            << "sum_hit_steps " << to_string(s.sum_hit_steps) << '\n'
            << "max_steps_to_one " << s.max_steps_to_one << '\n'
            << "max_steps_to_one_at " << to_string(s.max_steps_to_one_at) << '\n'
            << "truncated " << s.truncated.size();
        for (auto t : s.truncated) out << ' ' << to_string(t);
        out << "\nend\n";
        out.flush();
        if (!out) throw std::runtime_error("failed writing checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

SweepCheckpoint read_checkpoint(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read checkpoint " + path.string());
    auto fail = [&](const std::string& why) -> std::runtime_error {
        return std::runtime_error("malformed checkpoint " + path.string() + ": " + why);
    };
    std::string magic;
    unsigned version = 0;
    in >> magic >> version;
    if (magic != kCheckpointMagic) throw fail("bad magic");
    if (version != SweepCheckpoint::kVersion) throw fail("unsupported version " + std::to_string(version));

    auto field = [&](const char* name) {
        std::string key, value;
        if (!(in >> key >> value) || key != name) throw fail(std::string("expected ") + name);
        return value;
    };
    SweepCheckpoint c;
    if (field("direction") != "forward") throw fail("direction");
    c.lo = parse_u128(field("lo"));
    c.hi = parse_u128(field("hi"));
    c.max_steps = static_cast<std::uint64_t>(parse_u128(field("max_steps")));
    c.next = parse_u128(field("next"));
    auto& s = c.stats;
    s.processed = static_cast<std::uint64_t>(parse_u128(field("processed")));
    s.hits = static_cast<std::uint64_t>(parse_u128(field("hits")));
    s.max_hit_steps = static_cast<std::uint64_t>(parse_u128(field("max_hit_steps")));
    s.max_hit_at = parse_u128(field("max_hit_at"));
    s.sum_hit_steps = parse_u128(field("sum_hit_steps"));
    s.max_steps_to_one = static_cast<std::uint64_t>(parse_u128(field("max_steps_to_one")));
    s.max_steps_to_one_at = parse_u128(field("max_steps_to_one_at"));
    auto count = parse_u128(field("truncated"));
    for (u128 i = 0; i < count; ++i) {
        std::string v;
        if (!(in >> v)) throw fail("truncated list");
        s.truncated.push_back(parse_u128(v));
    }
    std::string end;
    if (!(in >> end) || end != "end") throw fail("missing end marker");
    return c;
}

PassageStats passage_sweep(u128 lo, u128 hi, const SweepOptions& opts)
{
    if (lo < 2 || lo > hi) throw std::invalid_argument("passage sweep requires 2 <= lo <= hi");
    if (opts.checkpoint_every == 0) throw std::invalid_argument("checkpoint cadence must be positive");

    PassageStats total;
    u128 next = lo;
    if (opts.resume && opts.checkpoint && std::filesystem::exists(*opts.checkpoint)) {
        auto c = read_checkpoint(*opts.checkpoint);
        if (c.lo != lo || c.hi != hi || c.max_steps != opts.max_steps) {
            throw std::invalid_argument("checkpoint was written for a different sweep");
        }
        total = c.stats;
        next = c.next;
    }

    const unsigned threads = std::max(1u, opts.threads);
    std::uint64_t chunks = 0;
    while (next <= hi) {
        u128 chunk_hi = hi - next < opts.checkpoint_every ? hi : next + opts.checkpoint_every - 1;
        u128 span = chunk_hi - next + 1;
        std::vector<PassageStats> parts(threads);
        if (threads == 1 || span < threads) {
            parts[0] = passage_range(next, chunk_hi, opts.max_steps);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(threads);
            u128 per = span / threads;
            for (unsigned t = 0; t < threads; ++t) {
                u128 a = next + per * t;
                u128 b = t + 1 == threads ? chunk_hi : a + per - 1;
                pool.emplace_back([&parts, &errors, t, a, b, &opts] {
                    try {
                        parts[t] = passage_range(a, b, opts.max_steps);
                    } catch (...) {
                        errors[t] = std::current_exception();
                    }
                });
            }
            for (auto& th : pool) th.join();
            for (const auto& e : errors) {
                if (e) std::rethrow_exception(e);
            }
        }
        for (const auto& p : parts) total.merge(p);

        bool done = chunk_hi == hi;
        next = done ? hi + 1 : chunk_hi + 1;
        if (opts.checkpoint) write_checkpoint(*opts.checkpoint, {lo, hi, opts.max_steps, next, total});
        if (done) break;
        if (opts.stop_after_chunks != 0 && ++chunks >= opts.stop_after_chunks) break;
    }
    return total;
}

} // namespace collatz
