#pragma once

// String formation. Forward: A_0 = [2+3N0], A_{k+1} = F_l(A_k). Backward:
// B_0 = [3+4N0], B_{k+1} = F_l^-1(B_k). Each generation is a list of
// progressions built child-by-child (first branch first, parent order kept),
// so dumps are byte-stable.

#include "collatz/checked.hpp"
#include "collatz/core_maps.hpp"
#include "collatz/progressions.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace collatz {

enum class Direction { Forward, Backward };

[[nodiscard]] const char* to_string(Direction d);

struct EvolutionState {
    Direction direction = Direction::Forward;
    unsigned k = 0;
    std::vector<Progression> parts;
};

/// One branch of a lower map: [offset + stride*m] -> [image_offset + 3m].
struct LowerBranch {
    u128 offset;
    u128 stride;
    u128 image_offset;
};

/// The two branches of F_l.
[[nodiscard]] std::vector<LowerBranch> collatz_lower_branches();

[[nodiscard]] EvolutionState evolve_forward(unsigned k);
[[nodiscard]] EvolutionState evolve_backward(unsigned k);

/// Forward evolution of seed under an arbitrary lower map; used for the 3n+p family.
[[nodiscard]] std::vector<std::vector<Progression>> evolve_lower(const std::vector<LowerBranch>& branches,
                                                                 const Progression& seed, unsigned k);

/// Children of a single part, first branch first.
[[nodiscard]] std::vector<Progression> children_of(const Progression& part, Direction d);

struct InterceptViolation {
    std::size_t part_index;
    Progression part;
    std::string rule;
};

struct InterceptAudit {
    std::vector<InterceptViolation> violations;
    u128 max_intercept = 0;
    [[nodiscard]] bool holds() const { return violations.empty(); }
};

/// Checks intercept < interval for every part, and that each realized child obeys
/// C' <= 3(C+3V-1)/4+1 (forward) or D' <= 4(D+2W-1)/3+1 (backward).
[[nodiscard]] InterceptAudit intercept_audit(const EvolutionState& state);

struct CoverageCount {
    u128 included = 0;
    u128 open = 0;
    u128 expected_included = 0; // 3^m - 2^m forward, 4^m - 3^m backward
    u128 expected_open = 0;     // 2^m forward, 3^m backward
    [[nodiscard]] bool holds() const { return included == expected_included && open == expected_open; }
};

/// Members of the union of generations 0..m-1 inside [window_start, window_start + base^m).
[[nodiscard]] CoverageCount coverage_count(Direction d, unsigned m, u128 window_start);

inline constexpr std::uint64_t kDefaultStringMaxLen = 100000;
inline constexpr std::uint64_t kDefaultElementCap = 10000;

struct StringRecord {
    Position head{2};
    Position tail{3};
    std::uint64_t length = 0;     // element count; 0 when truncated
    std::uint64_t index_of_x = 0; // where the queried position sits in the chain
    std::vector<Position> elements; // full chain when length <= element cap, else empty
    bool truncated = false;
};

/// The string through x: walk F_l^-1 to the head, then F_l to the tail.
[[nodiscard]] StringRecord build_string_containing(Position x, std::uint64_t max_len = kDefaultStringMaxLen,
                                                   std::uint64_t element_cap = kDefaultElementCap);

struct PartitionAudit {
    u128 limit = 0;
    std::uint64_t strings = 0;          // distinct heads seen
    std::uint64_t longest = 0;          // longest backward+forward walk seen
    u128 longest_at = 0;
    std::vector<u128> truncated;        // positions whose walk hit max_len
    std::vector<u128> violations;       // positions whose head disagrees with their image's head
    [[nodiscard]] bool holds() const { return truncated.empty() && violations.empty(); }
};

/// Every x in [2, limit] lies on a string whose head is single-valued along F_l.
[[nodiscard]] PartitionAudit partition_audit(u128 limit, std::uint64_t max_len = kDefaultStringMaxLen);

struct PassageStats {
    std::uint64_t processed = 0;
    std::uint64_t hits = 0;
    std::uint64_t max_hit_steps = 0;
    u128 max_hit_at = 0;
    u128 sum_hit_steps = 0;
    std::uint64_t max_steps_to_one = 0;
    u128 max_steps_to_one_at = 0;
    std::vector<u128> truncated; // capped at kMaxRecordedTruncations

    /// Associative, commutative aggregation; ties resolve to the smaller position.
    void merge(const PassageStats& other);
    [[nodiscard]] bool holds() const { return hits == processed && truncated.empty(); }
    bool operator==(const PassageStats&) const = default;
};

inline constexpr std::size_t kMaxRecordedTruncations = 1000;

/// Runs trajectory_report on every x in [lo, hi].
[[nodiscard]] PassageStats passage_range(u128 lo, u128 hi, std::uint64_t max_steps = kDefaultMaxSteps);

struct SweepCheckpoint {
    static constexpr unsigned kVersion = 1;
    u128 lo = 0;
    u128 hi = 0;
    std::uint64_t max_steps = 0;
    u128 next = 0; // first position not yet processed
    PassageStats stats;
};

/// Writes to path + ".tmp" then renames over path.
void write_checkpoint(const std::filesystem::path& path, const SweepCheckpoint& ckpt);
[[nodiscard]] SweepCheckpoint read_checkpoint(const std::filesystem::path& path);

struct SweepOptions {
    std::uint64_t max_steps = kDefaultMaxSteps;
    unsigned threads = 1;
    std::uint64_t checkpoint_every = std::uint64_t{1} << 20;
    std::optional<std::filesystem::path> checkpoint;
    bool resume = false;
    /// Stops the sweep after this many chunks (testing interruption); 0 means no limit.
    std::uint64_t stop_after_chunks = 0;
};

/// Chunked, optionally threaded and checkpointed passage sweep over [lo, hi].
[[nodiscard]] PassageStats passage_sweep(u128 lo, u128 hi, const SweepOptions& opts = {});

} // namespace collatz
