#include "collatz/generalized.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace collatz {

FamilyParam::FamilyParam(std::int64_t p) : p_(p)
{
    if (p % 2 == 0) throw std::invalid_argument("family parameter p must be odd, got " + std::to_string(p));
}

u128 FamilyParam::trivial_position() const
{
    u128 a = p_ < 0 ? static_cast<u128>(-(p_ + 1)) + 1 : static_cast<u128>(p_);
    return (a + 1) / 2;
}

FamilyStep family_step_detail(Position x, FamilyParam fam)
{
    u128 n = denumerate(x).value();
    u128 three_n = checked_mul(n, 3, "3n+p");
    u128 v;
    if (fam.p() >= 0) {
        v = checked_add(three_n, static_cast<u128>(fam.p()), "3n+p");
    } else {
        u128 neg = static_cast<u128>(-(fam.p() + 1)) + 1;
        if (three_n <= neg) {
            throw NonPositiveImage("3n+p < 1 for n=" + to_string(n) + ", p=" + std::to_string(fam.p()));
        }
        v = three_n - neg;
    }
    unsigned j = ctz128(v);
    return {enumerate(OddNumber(v >> j)), j};
}

Position family_conjugate_step(Position x, FamilyParam fam)
{
    return family_step_detail(x, fam).value;
}

Position family_equivalent(Position x, FamilyParam fam)
{
    u128 four_x = checked_mul(x.value(), 4, "E_p");
    std::int64_t q = fam.q();
    if (q >= 0) return Position(checked_add(four_x, static_cast<u128>(q), "E_p"));
    u128 neg = static_cast<u128>(-q);
    if (four_x <= neg) throw NonPositiveImage("E_p(x) < 1");
    return Position(four_x - neg);
}

Position family_equivalent_n(Position x, FamilyParam fam, unsigned n)
{
    for (unsigned i = 0; i < n; ++i) x = family_equivalent(x, fam);
    return x;
}

bool has_lower_equivalent(Position x, FamilyParam fam)
{
    // x = 4y + q with y >= 1  <=>  x - q = 4y >= 4.
    std::int64_t q = fam.q();
    u128 shifted;
    if (q <= 0) {
        shifted = checked_add(x.value(), static_cast<u128>(-q));
    } else {
        if (x.value() < static_cast<u128>(q)) return false;
        shifted = x.value() - static_cast<u128>(q);
    }
    return shifted >= 4 && shifted % 4 == 0;
}

std::string CaseRule::id() const
{
    std::string g = "G_" + std::to_string(family.p());
    if (!progressive()) return g + ": [" + to_string(offset) + "] -> [" + to_string(image_offset) + "]";
    return g + ": [" + to_string(offset) + "+" + to_string(stride) + "m] -> [" + to_string(image_offset) + "+" +
           to_string(image_stride) + "m]";
}

namespace {

struct RawRule {
    unsigned offset, stride, image_offset; // stride 0 marks a single exceptional position
};

// Transcribed line by line from the printed systems. The p = 23 block is printed with
// subscript 17 on every line; it is read as p = 23.
const std::map<std::int64_t, std::vector<RawRule>>& raw_systems()
{
    static const std::map<std::int64_t, std::vector<RawRule>> systems{
        {1, {{2, 2, 3}, {1, 4, 1}}},
        {7, {{1, 2, 3}, {4, 4, 4}, {2, 0, 1}}},
        {13, {{2, 2, 6}, {3, 4, 4}, {1, 0, 1}, {5, 0, 3}}},
        {19, {{1, 2, 6}, {2, 4, 4}, {8, 0, 1}, {4, 0, 3}}},
        {25, {{2, 2, 9}, {1, 4, 4}, {7, 0, 1}, {3, 0, 3}, {11, 0, 6}}},
        {31, {{1, 2, 9}, {4, 4, 7}, {6, 0, 1}, {2, 0, 3}, {14, 0, 4}, {10, 0, 6}}},
        {37, {{2, 2, 12}, {3, 4, 7}, {5, 0, 1}, {1, 0, 3}, {13, 0, 4}, {9, 0, 6}, {17, 0, 9}}},
        {-1, {{1, 2, 1}, {4, 4, 3}}},
        {5, {{2, 2, 4}, {3, 4, 3}, {1, 0, 1}}},
        {11, {{1, 2, 4}, {2, 4, 3}, {4, 0, 1}}},
        {17, {{2, 2, 7}, {1, 4, 3}, {3, 0, 1}, {7, 0, 4}}},
        {23, {{1, 2, 7}, {4, 4, 6}, {2, 0, 1}, {6, 0, 4}, {10, 0, 3}}},
        {3, {{1, 2, 2}, {2, 4, 2}}},
        {9, {{2, 2, 5}, {1, 4, 2}, {3, 0, 2}}},
        {15, {{1, 2, 5}, {4, 4, 5}, {2, 0, 2}, {6, 0, 2}}},
        {21, {{2, 2, 8}, {3, 4, 5}, {1, 0, 2}, {5, 0, 2}, {9, 0, 5}}},
        {27, {{1, 2, 8}, {2, 4, 5}, {4, 0, 2}, {8, 0, 5}, {12, 0, 2}}},
        {33, {{2, 2, 11}, {1, 4, 5}, {3, 0, 2}, {7, 0, 5}, {11, 0, 2}, {15, 0, 8}}},
    };
    return systems;
}

} // namespace

std::optional<std::vector<CaseRule>> case_system(std::int64_t p)
{
    auto it = raw_systems().find(p);
    if (it == raw_systems().end()) return std::nullopt;
    std::vector<CaseRule> rules;
    FamilyParam fam(p);
    for (const auto& r : it->second) {
        rules.push_back({fam, r.offset, r.stride, r.image_offset, r.stride == 0 ? 0u : 3u});
    }
    return rules;
}

const std::vector<std::int64_t>& case_system_families()
{
    static const std::vector<std::int64_t> order{1, 7, 13, 19, 25, 31, 37, -1, 5, 11, 17, 23, 3, 9, 15, 21, 27, 33};
    return order;
}

CaseAudit audit_case_system(FamilyParam fam, const std::vector<CaseRule>& rules, const CaseBounds& bounds)
{
    CaseAudit audit;
    for (const auto& rule : rules) {
        if (!(rule.family == fam)) throw std::invalid_argument("rule " + rule.id() + " belongs to another family");
        const std::uint64_t m_max = rule.progressive() ? bounds.m_limit : 0;
        for (std::uint64_t m = 0; m <= m_max; ++m) {
            u128 d = checked_add(rule.offset, checked_mul(rule.stride, m));
            if (bounds.domain_limit && d > *bounds.domain_limit) break;
            u128 expected = checked_add(rule.image_offset, checked_mul(rule.image_stride, m));
            Position x(d);
            for (unsigned n = 0; n <= bounds.n_limit; ++n) {
                ++audit.instances;
                u128 got = family_conjugate_step(x, fam).value();
                if (got != expected) audit.mismatches.push_back({rule.id(), m, n, x.value(), expected, got});
                if (n < bounds.n_limit) x = family_equivalent(x, fam);
            }
        }
    }
    return audit;
}

std::vector<LowerBranch> family_lower_branches(std::int64_t p)
{
    auto rules = case_system(p);
    if (!rules) throw std::invalid_argument("no case system for p = " + std::to_string(p));
    std::vector<LowerBranch> out;
    for (const auto& r : *rules) {
        if (r.progressive()) out.push_back({r.offset, r.stride, r.image_offset});
    }
    return out;
}

CycleSearch find_cycles(FamilyParam fam, u128 seed_limit, std::uint64_t max_steps)
{
    if (seed_limit < 1) throw std::invalid_argument("find_cycles requires seed_limit >= 1");
    CycleSearch out;
    std::set<std::vector<u128>> seen;
    std::unordered_map<u128, std::uint64_t> index;
    std::vector<u128> path;

    for (u128 seed = 1; seed <= seed_limit; ++seed) {
        index.clear();
        path.clear();
        u128 cur = seed;
        bool done = false;
        try {
            for (std::uint64_t step = 0; step <= max_steps; ++step) {
                if (cur < seed) { // classified by an earlier seed
                    done = true;
                    break;
                }
                auto [it, fresh] = index.emplace(cur, path.size());
                if (!fresh) {
                    std::vector<u128> cycle(path.begin() + static_cast<std::ptrdiff_t>(it->second), path.end());
                    std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
                    seen.insert(std::move(cycle));
                    done = true;
                    break;
                }
                path.push_back(cur);
                cur = family_conjugate_step(Position(cur), fam).value();
            }
        } catch (const NonPositiveImage&) {
            ++out.rejected_seeds;
            continue;
        }
        if (!done) ++out.truncated_seeds;
    }

    for (const auto& members : seen) out.cycles.push_back({fam, members});
    std::sort(out.cycles.begin(), out.cycles.end(), [](const CycleRecord& a, const CycleRecord& b) {
        if (a.members.front() != b.members.front()) return a.members.front() < b.members.front();
        return a.members.size() < b.members.size();
    });
    return out;
}

std::vector<u128> three_n3_base_preimages(u128 y)
{
    const FamilyParam fam(3);
    std::vector<u128> out;
    u128 bound = checked_add(checked_mul(y, 4) / 3, 4);
    for (u128 x = 1; x <= bound; ++x) {
        if (x % 4 == 0) continue;
        if (family_conjugate_step(Position(x), fam).value() == y) out.push_back(x);
    }
    return out;
}

TwoToOneAudit two_to_one_audit(u128 limit)
{
    if (limit < 2) throw std::invalid_argument("two_to_one_audit requires limit >= 2");
    if (limit > (u128{1} << 32)) throw std::invalid_argument("two_to_one_audit limit too large");
    const FamilyParam fam(3);
    const auto n = static_cast<std::size_t>(limit);

    // Every base-domain x whose image can land at or below limit; images grow like 3x/4 at worst.
    std::vector<std::uint8_t> count(n + 1, 0);
    std::vector<u128> first(n + 1, 0), second(n + 1, 0);
    const u128 scan = limit * 4 / 3 + 4;
    for (u128 x = 1; x <= scan; ++x) {
        if (x % 4 == 0) continue;
        u128 y = family_conjugate_step(Position(x), fam).value();
        if (y > limit) continue;
        auto yi = static_cast<std::size_t>(y);
        if (count[yi] == 0) first[yi] = x;
        else if (count[yi] == 1) second[yi] = x;
        if (count[yi] < 255) ++count[yi];
    }

    TwoToOneAudit audit;
    audit.limit = limit;
    for (u128 y = 1; y <= limit; ++y) {
        auto yi = static_cast<std::size_t>(y);
        bool image = y % 3 == 2;
        if (image) ++audit.images;
        std::uint64_t want = image ? 2 : 0;
        if (count[yi] != want) {
            audit.violations.push_back({y, count[yi]});
            continue;
        }
        if (image && second[yi] != 2 * first[yi]) audit.co_tail_violations.push_back(y);
    }
    return audit;
}

StringScan string_scan(FamilyParam fam, u128 limit, std::uint64_t max_len)
{
    if (limit < 2) throw std::invalid_argument("string_scan requires limit >= 2");
    if (limit > (u128{1} << 32)) throw std::invalid_argument("string_scan limit too large");
    const auto n = static_cast<std::size_t>(limit);
    const u128 trivial = fam.trivial_position();

    enum : std::uint8_t { Unknown, Reaches, Cycles, Truncated, Rejected };
    std::vector<std::uint8_t> state(n + 1, Unknown);
    StringScan scan;
    scan.family = fam;
    scan.limit = limit;

    std::unordered_set<u128> visited;
    for (u128 x = 1; x <= limit; ++x) {
        visited.clear();
        u128 cur = x;
        std::uint8_t verdict = Unknown;
        try {
            for (std::uint64_t step = 0; verdict == Unknown; ++step) {
                if (cur == trivial || has_lower_equivalent(Position(cur), fam)) {
                    verdict = Reaches;
                } else if (cur < x) {
                    verdict = state[static_cast<std::size_t>(cur)];
                } else if (!visited.insert(cur).second) {
                    verdict = Cycles;
                } else if (step >= max_len) {
                    verdict = Truncated;
                } else {
                    cur = family_conjugate_step(Position(cur), fam).value();
                }
            }
        } catch (const NonPositiveImage&) {
            verdict = Rejected;
        }
        state[static_cast<std::size_t>(x)] = verdict;
        switch (verdict) {
        case Cycles: scan.orphans.push_back(x); break;
        case Truncated: scan.truncated.push_back(x); break;
        case Rejected: scan.rejected.push_back(x); break;
        default: break;
        }
    }

    // Heads: positions <= limit outside the image of the lower map.
    std::vector<char> hit(n + 1, 0);
    u128 a = fam.p() < 0 ? static_cast<u128>(-fam.p()) : static_cast<u128>(fam.p());
    const u128 bound = 2 * limit + a + 16;
    for (u128 x = 1; x <= bound; ++x) {
        Position px(x);
        if (has_lower_equivalent(px, fam)) {
            if (x <= limit) ++scan.tails;
            continue;
        }
        try {
            auto step = family_step_detail(px, fam);
            if (step.value.value() <= limit) hit[static_cast<std::size_t>(step.value.value())] = 1;
            if (x <= limit && step.twos > 2) ++scan.exceptional_lower;
        } catch (const NonPositiveImage&) {
        }
    }
    for (std::size_t y = 1; y <= n; ++y) scan.heads += hit[y] ? 0 : 1;
    return scan;
}

const std::vector<FamilyTable>& printed_tables()
{
    // Each printed row lists one position per column; column c is shifted by one
    // position per step of 6 in p, and the enumeration skips 0.
    static const std::vector<FamilyTable> tables = [] {
        auto build = [](std::vector<std::int64_t> columns, std::vector<std::int64_t> maps_to) {
            FamilyTable t{std::move(columns), {}, std::move(maps_to)};
            const auto width = static_cast<std::int64_t>(t.columns.size());
            for (std::int64_t r = 1; r <= static_cast<std::int64_t>(t.maps_to.size()); ++r) {
                std::vector<std::int64_t> row;
                for (std::int64_t c = 0; c < width; ++c) {
                    std::int64_t v = r - (width - 1 - c);
                    row.push_back(v >= 1 ? v : v - 1);
                }
                t.rows.push_back(std::move(row));
            }
            return t;
        };
        return std::vector<FamilyTable>{
            build({37, 31, 25, 19, 13, 7, 1}, {1, 3, 1, 6, 4, 9, 3, 12, 7, 15}),
            build({35, 29, 23, 17, 11, 5, -1}, {1, 1, 4, 3, 7, 1, 10, 6, 13, 4}),
            build({39, 33, 27, 21, 15, 9, 3}, {2, 2, 5, 2, 8, 5, 11, 2, 14, 8}),
        };
    }();
    return tables;
}

std::vector<TableMismatch> reproduce_tables(std::uint64_t* cells_checked)
{
    std::vector<TableMismatch> out;
    std::uint64_t cells = 0;
    const auto& tables = printed_tables();
    for (std::size_t t = 0; t < tables.size(); ++t) {
        const auto& tab = tables[t];
        for (std::size_t r = 0; r < tab.rows.size(); ++r) {
            for (std::size_t c = 0; c < tab.columns.size(); ++c) {
                std::int64_t cell = tab.rows[r][c];
                if (cell < 1) continue;
                ++cells;
                u128 got = family_conjugate_step(Position(static_cast<u128>(cell)), FamilyParam(tab.columns[c])).value();
                auto want = static_cast<u128>(tab.maps_to[r]);
                if (got != want) out.push_back({t, r, tab.columns[c], cell, want, got});
            }
        }
    }
    if (cells_checked) *cells_checked = cells;
    return out;
}

std::vector<u128> class_shift_discrepancies(std::int64_t p, u128 limit)
{
    FamilyParam lo(p), hi(p + 6);
    std::vector<u128> out;
    for (u128 x = 1; x <= limit; ++x) {
        try {
            if (family_conjugate_step(Position(x), hi) != family_conjugate_step(Position(x + 1), lo)) out.push_back(x);
        } catch (const NonPositiveImage&) {
            // only compared where both sides are defined
        }
    }
    return out;
}

} // namespace collatz
