#pragma once

// Arithmetic progressions {intercept + interval*t : t >= 0} over positions,
// their images under the two branches of the lower map, and the branch
// signatures whose exact recurrence makes those images periodic.

#include "collatz/checked.hpp"
#include "collatz/core_maps.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace collatz {

class Progression {
public:
    Progression(u128 intercept, u128 interval);

    [[nodiscard]] u128 intercept() const { return intercept_; }
    [[nodiscard]] u128 interval() const { return interval_; }
    [[nodiscard]] u128 element(u128 t) const;
    [[nodiscard]] bool contains(u128 v) const;
    /// Members in [lo, hi).
    [[nodiscard]] u128 count_in(u128 lo, u128 hi) const;

    bool operator==(const Progression&) const = default;

private:
    u128 intercept_;
    u128 interval_;
};

[[nodiscard]] std::string to_string(const Progression& p);

/// Elements of p congruent to r (mod mod); absent when there are none.
[[nodiscard]] std::optional<Progression> intersect_residue(const Progression& p, u128 r, u128 mod);

// Elementwise images. Each rejects (std::invalid_argument) a progression not wholly
// inside the branch domain; callers intersect first.
[[nodiscard]] Progression image_f1(const Progression& p);
[[nodiscard]] Progression image_f2(const Progression& p);
[[nodiscard]] Progression image_f1_inv(const Progression& p);
[[nodiscard]] Progression image_f2_inv(const Progression& p);

enum class Branch { F1, F2, Terminal, F1Inv, F2Inv, Head };

[[nodiscard]] const char* to_string(Branch b);

struct SignatureStep {
    Branch branch;
    unsigned z; // restriction index for forward steps, 0 for backward steps
    bool operator==(const SignatureStep&) const = default;
};

struct Signature {
    std::vector<SignatureStep> steps;
    bool operator==(const Signature&) const = default;

    /// True when a Terminal/Head ended the signature before the requested length.
    [[nodiscard]] bool ended_early(std::size_t requested) const { return steps.size() < requested; }
    [[nodiscard]] unsigned z_sum() const;
};

struct Recurrence {
    Signature signature;
    u128 predicted;                // x + 2^(sum z) or x + 3^len
    std::optional<u128> found;     // least x' > x with the same signature, if within the scan bound
    [[nodiscard]] bool holds() const { return found && *found == predicted; }
};

/// Branch tags of the first n F-steps of x. A step through F_z with z > 2 is Terminal and ends it.
[[nodiscard]] Signature forward_signature(Position x, unsigned n);

/// Branch tags of the first n inverse steps of x. A head (x = 2 mod 3) ends it.
[[nodiscard]] Signature backward_signature(Position x, unsigned n);

inline constexpr u128 kMaxRecurrenceScan = u128{1} << 36;

/// Scans x+1, x+2, ... up to 4 times the predicted distance for the first identical signature.
[[nodiscard]] Recurrence first_recurrence_forward(Position x, unsigned n, u128 max_scan = kMaxRecurrenceScan);
[[nodiscard]] Recurrence first_recurrence_backward(Position x, unsigned n, u128 max_scan = kMaxRecurrenceScan);

struct SamplingVerdict {
    bool holds = true;
    std::optional<std::uint64_t> counterexample_index; // index into the sampled sequence
    std::uint64_t sampled_offset = 0;
    std::uint64_t expected_interval = 0;
    std::uint64_t observed_interval = 0;
};

/// Samples seq with the given period from every start offset and checks that each tag's
/// recurrence interval in the sample equals its interval in seq. Throws std::invalid_argument
/// if a tag in seq does not recur at a single fixed interval.
[[nodiscard]] SamplingVerdict check_sampled_intervals(std::span<const std::uint32_t> seq, std::uint64_t period);

/// Periodic tag sequence q_1..q_length whose tags recur at intervals r, r^2, ..., r^power.
[[nodiscard]] std::vector<std::uint32_t> power_interval_sequence(std::uint32_t r, unsigned power, std::uint64_t length);

/// Co-prime sampling check on power_interval_sequence(r, power, probe_length).
/// Throws std::invalid_argument unless gcd(period, r) = 1 and probe_length covers two recurrences.
[[nodiscard]] SamplingVerdict sampling_lemma_check(std::uint32_t r, unsigned power, std::uint64_t period,
                                                   std::uint64_t probe_length);

} // namespace collatz
