#pragma once

// The 3n+p family for odd p. G_p is the conjugate step on positions,
// E_p(x) = 4x + q with q = (p-3)/2 produces positions with the same image.

#include "collatz/checked.hpp"
#include "collatz/core_maps.hpp"
#include "collatz/string_engine.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace collatz {

/// Raised when 3n+p < 1 for a probed odd n.
class NonPositiveImage : public std::domain_error {
public:
    explicit NonPositiveImage(const std::string& what) : std::domain_error(what) {}
};

class FamilyParam {
public:
    explicit FamilyParam(std::int64_t p);
    [[nodiscard]] std::int64_t p() const { return p_; }
    [[nodiscard]] std::int64_t q() const { return (p_ - 3) / 2; }
    /// Position of the trivial loop {|p|}.
    [[nodiscard]] u128 trivial_position() const;
    bool operator==(const FamilyParam&) const = default;

private:
    std::int64_t p_;
};

struct FamilyStep {
    Position value;
    unsigned twos; // 2-adic valuation of 3n+p
};

[[nodiscard]] FamilyStep family_step_detail(Position x, FamilyParam fam);
[[nodiscard]] Position family_conjugate_step(Position x, FamilyParam fam);
[[nodiscard]] Position family_equivalent(Position x, FamilyParam fam);
[[nodiscard]] Position family_equivalent_n(Position x, FamilyParam fam, unsigned n);

/// True when x = E_p(y) for some position y.
[[nodiscard]] bool has_lower_equivalent(Position x, FamilyParam fam);

/// One line of a case system, read modulo E_p-equivalence:
/// G_p(E_p^n([offset + stride*m])) = [image_offset + image_stride*m].
/// Exceptional rules have stride = image_stride = 0.
struct CaseRule {
    FamilyParam family;
    u128 offset;
    u128 stride;
    u128 image_offset;
    u128 image_stride;
    [[nodiscard]] bool progressive() const { return stride != 0; }
    [[nodiscard]] std::string id() const;
};

/// The case system printed for p, or nullopt if none is given.
[[nodiscard]] std::optional<std::vector<CaseRule>> case_system(std::int64_t p);

/// All p with a transcribed case system, in print order.
[[nodiscard]] const std::vector<std::int64_t>& case_system_families();

struct CaseBounds {
    std::uint64_t m_limit = 1000;
    unsigned n_limit = 4;
    std::optional<u128> domain_limit; // also caps offset + stride*m
};

struct CaseMismatch {
    std::string rule;
    std::uint64_t m;
    unsigned n;
    u128 position;
    u128 expected;
    u128 actual;
};

struct CaseAudit {
    std::uint64_t instances = 0;
    std::vector<CaseMismatch> mismatches;
    [[nodiscard]] bool holds() const { return mismatches.empty(); }
};

[[nodiscard]] CaseAudit audit_case_system(FamilyParam fam, const std::vector<CaseRule>& rules, const CaseBounds& bounds);

/// Progressive rules of the system as lower-map branches (for evolving heads under G_p).
[[nodiscard]] std::vector<LowerBranch> family_lower_branches(std::int64_t p);

struct CycleRecord {
    FamilyParam family;
    std::vector<u128> members; // rotated to start at the minimum
    bool operator==(const CycleRecord&) const = default;
};

struct CycleSearch {
    std::vector<CycleRecord> cycles; // sorted by (minimum, length)
    std::uint64_t truncated_seeds = 0;
    std::uint64_t rejected_seeds = 0; // 3n+p < 1 along the way
};

[[nodiscard]] CycleSearch find_cycles(FamilyParam fam, u128 seed_limit, std::uint64_t max_steps = kDefaultMaxSteps);

struct TwoToOneViolation {
    u128 image;
    std::uint64_t count;
};

struct TwoToOneAudit {
    u128 limit = 0;
    std::uint64_t images = 0;
    std::vector<TwoToOneViolation> violations;
    std::vector<u128> co_tail_violations; // images whose two preimages are not in ratio 2
    [[nodiscard]] bool holds() const { return violations.empty() && co_tail_violations.empty(); }
};

/// For p = 3: every image [2+3m] <= limit has exactly two base-domain preimages, a and 2a.
[[nodiscard]] TwoToOneAudit two_to_one_audit(u128 limit);

/// Base-domain preimages (positions not = 0 mod 4) of y under G_3, by direct scan.
[[nodiscard]] std::vector<u128> three_n3_base_preimages(u128 y);

struct StringScan {
    FamilyParam family{1};
    u128 limit = 0;
    std::uint64_t heads = 0;
    std::uint64_t tails = 0;
    std::uint64_t exceptional_lower = 0; // lower positions whose 3n+p carries more than 2^2
    std::vector<u128> orphans;           // walks that close a cycle other than the trivial loop
    std::vector<u128> truncated;
    std::vector<u128> rejected;
    [[nodiscard]] bool partitioned() const { return orphans.empty() && truncated.empty() && rejected.empty(); }
};

/// Walks G_p from every x <= limit through positions with no lower equivalent until it reaches a
/// tail (a position with a lower equivalent) or the trivial loop.
[[nodiscard]] StringScan string_scan(FamilyParam fam, u128 limit, std::uint64_t max_len = kDefaultStringMaxLen);

/// The printed "maps to" tables: columns of 3n+p, one row per image.
struct FamilyTable {
    std::vector<std::int64_t> columns;        // p per column
    std::vector<std::vector<std::int64_t>> rows; // cell values per column
    std::vector<std::int64_t> maps_to;
};

[[nodiscard]] const std::vector<FamilyTable>& printed_tables();

struct TableMismatch {
    std::size_t table;
    std::size_t row;
    std::int64_t p;
    std::int64_t cell;
    u128 expected;
    u128 actual;
};

/// Regenerates every positive cell; negative cells are skipped.
[[nodiscard]] std::vector<TableMismatch> reproduce_tables(std::uint64_t* cells_checked = nullptr);

/// Positions x <= limit where G_{p+6}(x) != G_p(x+1).
[[nodiscard]] std::vector<u128> class_shift_discrepancies(std::int64_t p, u128 limit);

} // namespace collatz
