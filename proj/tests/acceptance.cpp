// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// `acceptance --long` extends the passage sweep to [2, 159902416].

#include "collatz/core_maps.hpp"
#include "collatz/generalized.hpp"
#include "collatz/progressions.hpp"
#include "collatz/string_engine.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

using namespace collatz;

namespace {

struct Verdict {
    std::ostringstream note;
    std::vector<std::string> failures;

    void fail(const std::string& why) { failures.push_back(why); }
    [[nodiscard]] bool pass() const { return failures.empty(); }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<u128> values(const StringRecord& r)
{
    std::vector<u128> out;
    for (const auto& e : r.elements) out.push_back(e.value());
    return out;
}

bool long_mode = false;

void passage(Verdict& v)
{
    auto t0 = Clock::now();
    auto s = passage_sweep(2, 1000000, {});
    double secs = seconds_since(t0);
    v.note << "[2,1e6]: " << s.hits << "/" << s.processed << " hit, max " << s.max_hit_steps << " steps at "
           << to_string(s.max_hit_at) << ", " << secs << " s";
    if (!s.holds() || s.processed != 999999) v.fail("not every position reached [3+4N0]");
    if (secs > 10.0) v.fail("sweep slower than 10 s");

    // spot check against naive iteration
    for (oracle::u64 x = 2; x <= 1000000; x += 997) {
        oracle::u64 w = x, c = 0;
        while (w % 4 != 3) {
            w = oracle::F(w);
            ++c;
        }
        if (c > s.max_hit_steps) v.fail("naive walk longer than reported maximum at " + std::to_string(x));
    }

    auto far = trajectory_report(Position(159902416));
    if (!far.first_3mod4_value || far.truncated) v.fail("[159902416] did not reach [3+4N0]");
    else v.note << "; [159902416] hits [" << to_string(far.first_3mod4_value->value()) << "] after " << *far.steps_to_first_3mod4 << " steps";

    if (long_mode) {
        SweepOptions opts;
        opts.threads = std::max(1u, std::thread::hardware_concurrency());
        t0 = Clock::now();
        auto big = passage_sweep(2, 159902416, opts);
        v.note << "; long [2,159902416]: " << big.hits << "/" << big.processed << ", max " << big.max_hit_steps
               << " steps, " << seconds_since(t0) << " s";
        if (!big.holds()) v.fail("long sweep has positions without a hit");
    }
}

void partition(Verdict& v)
{
    auto a = partition_audit(100000);
    v.note << a.strings << " strings below 1e5, longest walk " << a.longest;
    if (!a.truncated.empty()) v.fail(std::to_string(a.truncated.size()) + " truncated walks");
    if (!a.violations.empty()) v.fail(std::to_string(a.violations.size()) + " head disagreements");
    const std::vector<std::pair<u128, std::vector<u128>>> worked{
        {6, {5, 4, 6, 9, 7}}, {12, {8, 12, 18, 27}}, {13, {17, 13, 10, 15}}};
    for (const auto& [x, want] : worked) {
        if (values(build_string_containing(Position(x))) != want) v.fail("worked string through " + to_string(x));
    }
    // each position on exactly one head-to-tail chain, counted from the heads
    std::vector<int> cover(2001, 0);
    for (oracle::u64 h = 2; h < 200000; h += 3) {
        for (oracle::u64 x = h;;) {
            if (x <= 2000) ++cover[x];
            auto n = oracle::fl(x);
            if (!n) break;
            x = *n;
        }
    }
    for (oracle::u64 x = 2; x <= 2000; ++x) {
        if (cover[x] != 1) v.fail("position " + std::to_string(x) + " on " + std::to_string(cover[x]) + " chains");
    }
}

std::vector<Progression> P(std::initializer_list<std::pair<u128, u128>> l)
{
    std::vector<Progression> out;
    for (auto [c, w] : l) out.emplace_back(c, w);
    return out;
}

void evolution(Verdict& v)
{
    if (evolve_forward(1).parts != P({{3, 9}, {4, 9}})) v.fail("A_1 display");
    if (evolve_forward(2).parts != P({{18, 27}, {16, 27}, {6, 27}, {10, 27}})) v.fail("A_2 display");
    if (evolve_backward(1).parts != P({{2, 8}, {9, 16}})) v.fail("B_1 display");
    if (evolve_backward(2).parts != P({{12, 16}, {13, 32}, {6, 32}, {33, 64}})) v.fail("B_2 display");
    std::size_t parts = 0;
    for (unsigned k = 0; k <= 12; ++k) {
        auto a = evolve_forward(k);
        auto b = evolve_backward(k);
        parts += a.parts.size() + b.parts.size();
        if (a.parts.size() != (std::size_t{1} << k) || b.parts.size() != (std::size_t{1} << k)) {
            v.fail("part count at k=" + std::to_string(k));
        }
        for (const auto& p : a.parts) {
            if (p.interval() != checked_pow(3, k + 1)) v.fail("A interval at k=" + std::to_string(k));
        }
        u128 denom = checked_pow(4, k + 1), sum = 0;
        for (const auto& p : b.parts) {
            if (denom % p.interval() != 0) v.fail("B interval not a power of 2 at k=" + std::to_string(k));
            else sum += denom / p.interval();
        }
        if (sum != checked_pow(3, k)) v.fail("B density at k=" + std::to_string(k));
        if (!intercept_audit(a).holds()) v.fail("A intercept audit at k=" + std::to_string(k));
        if (!intercept_audit(b).holds()) v.fail("B intercept audit at k=" + std::to_string(k));
    }
    v.note << "k<=12, " << parts << " parts checked";
}

void coverage(Verdict& v)
{
    if (coverage_count(Direction::Forward, 3, 2).included != 19) v.fail("19 of 27");
    if (coverage_count(Direction::Backward, 2, 2).included != 7) v.fail("7 of 16");
    if (coverage_count(Direction::Backward, 3, 2).included != 37) v.fail("37 of 64");
    std::mt19937_64 rng(20240601);
    std::uint64_t windows = 0;
    for (auto [d, mmax] : {std::pair{Direction::Forward, 7u}, std::pair{Direction::Backward, 6u}}) {
        for (unsigned m = 1; m <= mmax; ++m) {
            std::vector<u128> starts{2};
            for (int i = 0; i < 32; ++i) starts.push_back(2 + rng() % 1000000000);
            for (u128 s : starts) {
                ++windows;
                if (!coverage_count(d, m, s).holds()) {
                    v.fail(std::string(to_string(d)) + " m=" + std::to_string(m) + " window " + to_string(s));
                }
            }
        }
    }
    v.note << windows << " windows match 3^m-2^m / 4^m-3^m";
}

void proportionality(Verdict& v)
{
    auto f = first_recurrence_forward(Position(2), 2);
    if (!f.holds() || f.found != u128{34}) v.fail("[2] pattern not first at 34");
    auto b = first_recurrence_backward(Position(7), 4);
    if (!b.holds() || b.found != u128{88}) v.fail("[7] pattern not first at 88");

    std::mt19937_64 rng(20240601);
    int cases = 0;
    for (bool forward : {true, false}) {
        for (int i = 0; i < 200; ++i) {
            oracle::u64 x = 1 + rng() % 10000;
            auto n = static_cast<unsigned>(1 + rng() % 6);
            auto r = forward ? first_recurrence_forward(Position(x), n) : first_recurrence_backward(Position(x), n);
            ++cases;
            if (!r.holds()) {
                v.fail((forward ? "forward x=" : "backward x=") + std::to_string(x) + " n=" + std::to_string(n));
                continue;
            }
            // brute force: nothing between x and the predicted position shares the signature
            if (oracle::first_match(x, forward, n, static_cast<oracle::u64>(r.predicted)) != r.predicted) {
                v.fail("brute force disagrees at x=" + std::to_string(x));
            }
        }
    }
    v.note << cases << " random cases plus anchors 34 and 88";
}

void case_systems(Verdict& v)
{
    const std::vector<std::int64_t> listed{1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 31, 33, 37, -1};
    std::uint64_t instances = 0;
    for (std::int64_t p : listed) {
        auto rules = case_system(p);
        if (!rules) {
            v.fail("no case system for p=" + std::to_string(p));
            continue;
        }
        auto a = audit_case_system(FamilyParam(p), *rules, {10000, 4, u128{10000}});
        instances += a.instances;
        if (!a.holds()) v.fail(std::to_string(a.mismatches.size()) + " mismatches for p=" + std::to_string(p));
    }
    v.note << listed.size() << " systems, " << instances << " rule instances";
}

void cycles(Verdict& v)
{
    auto one = find_cycles(FamilyParam(1), 1000);
    auto minus = find_cycles(FamilyParam(-1), 1000);
    auto five = find_cycles(FamilyParam(5), 1000);
    auto has = [](const CycleSearch& s, std::vector<u128> m) {
        return std::any_of(s.cycles.begin(), s.cycles.end(), [&](const CycleRecord& c) { return c.members == m; });
    };
    if (one.cycles.size() != 1 || !has(one, {1})) v.fail("p=1 cycles are not exactly {(1)}");
    if (!has(minus, {3, 4})) v.fail("p=-1 lacks (3,4)");
    if (!has(five, {1})) v.fail("p=5 lacks (1)");
    for (const auto* s : {&one, &minus, &five}) {
        if (s->truncated_seeds) v.fail("truncated seeds for p=" + std::to_string(s->cycles.front().family.p()));
    }
    v.note << "p=1: " << one.cycles.size() << ", p=-1: " << minus.cycles.size() << ", p=5: " << five.cycles.size()
           << " cycles";
}

void two_to_one(Verdict& v)
{
    auto a = two_to_one_audit(1000000);
    v.note << a.images << " images below 1e6";
    if (!a.violations.empty()) v.fail(std::to_string(a.violations.size()) + " images not hit twice");
    if (!a.co_tail_violations.empty()) v.fail(std::to_string(a.co_tail_violations.size()) + " preimage pairs not a, 2a");
}

void lemmas(Verdict& v)
{
    const u128 N = 100000;
    std::uint64_t checks = 0;
    for (u128 x = 1; x <= N; ++x) {
        Position p(x);
        Position img = conjugate_step(p);
        if (img.value() % 3 == 2) v.fail("range lemma at " + to_string(x));
        for (unsigned k = 1; k <= 8; ++k) {
            if (conjugate_step(equivalent_n(p, k)) != img) v.fail("E-invariance at " + to_string(x));
        }
        // base_of: strictly decreasing preimages ending at a base
        u128 cur = x;
        unsigned depth = 0;
        while (auto prev = e_preimage(Position(cur))) {
            if (prev->value() >= cur) {
                v.fail("e_preimage not decreasing at " + to_string(cur));
                break;
            }
            cur = prev->value();
            ++depth;
        }
        auto b = base_of(p);
        if (b.base.value() != cur || b.depth != depth || cur % 4 == 3) v.fail("base_of at " + to_string(x));
        checks += 10;
    }
    for (std::uint32_t r : {2u, 3u}) {
        for (unsigned m = 1; m <= 6; ++m) {
            std::uint64_t rp = 1;
            for (unsigned i = 0; i < m; ++i) rp *= r;
            for (std::uint64_t period = 1; period <= 9; ++period) {
                if (std::gcd<std::uint64_t>(period, r) != 1) continue;
                ++checks;
                if (!sampling_lemma_check(r, m, period, period * (2 * rp + 1)).holds) {
                    v.fail("sampling r=" + std::to_string(r) + " m=" + std::to_string(m) + " p=" + std::to_string(period));
                }
            }
        }
    }
    v.note << checks << " checks (range, E-invariance k<=8, base_of, sampling)";
}

} // namespace

int main(int argc, char** argv)
{
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--long") == 0) long_mode = true;
    }
    const std::vector<std::pair<const char*, std::function<void(Verdict&)>>> criteria{
        {"passage through [3+4N0]", passage},
        {"string partition", partition},
        {"evolution structure", evolution},
        {"counting identities", coverage},
        {"proportionality recurrences", proportionality},
        {"generalized case systems", case_systems},
        {"cycles", cycles},
        {"3n+3 two-to-one", two_to_one},
        {"lemma properties", lemmas},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        auto t0 = Clock::now();
        try {
            criteria[i].second(v);
        } catch (const std::exception& e) {
            v.fail(std::string("exception: ") + e.what());
        }
        failed += !v.pass();
        std::cout << (v.pass() ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << " (" << v.note.str()
                  << ") [" << seconds_since(t0) << " s]" << std::endl;
        for (std::size_t f = 0; f < v.failures.size() && f < 10; ++f) std::cout << "      " << v.failures[f] << '\n';
        if (v.failures.size() > 10) std::cout << "      ... " << v.failures.size() - 10 << " more\n";
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
