#pragma once

// Exact maps on the odd integers and on their enumeration [x] = (n+1)/2.
//
// All dynamics are expressed on positions: [x] stands for the odd integer 2x-1.
// The conjugate map F sends [x] to the position of the next odd Collatz iterate.
// E([x]) = [4x-1] has the same F-image as [x], so every position decomposes as
// E^k(base) with the base either even or 1 (mod 4). The lower map F_l is F
// restricted to bases; it is one-to-one with inverse selected by x mod 3.

#include "collatz/checked.hpp"

#include <compare>
#include <cstdint>
#include <optional>

namespace collatz {

/// A positive odd integer n.
class OddNumber {
public:
    explicit OddNumber(u128 n);
    [[nodiscard]] u128 value() const { return n_; }
    auto operator<=>(const OddNumber&) const = default;

private:
    u128 n_;
};

/// An enumerated odd integer [x], x >= 1.
class Position {
public:
    explicit Position(u128 x);
    [[nodiscard]] u128 value() const { return x_; }
    auto operator<=>(const Position&) const = default;

private:
    u128 x_;
};

enum class BaseKind { Even, OneModFour };

/// Names the restriction F_z through which a position is mapped.
struct RestrictionId {
    unsigned z = 0;
    BaseKind base_kind = BaseKind::Even;
    unsigned depth = 0;
    bool operator==(const RestrictionId&) const = default;
};

struct AcceleratedStep {
    OddNumber value;
    unsigned twos;
};

struct BaseDecomposition {
    Position base;
    unsigned depth;
};

struct TrajectoryReport {
    Position start;
    std::optional<std::uint64_t> steps_to_first_3mod4;
    std::optional<Position> first_3mod4_value;
    std::optional<std::uint64_t> steps_to_one;
    bool truncated = false;
};

inline constexpr std::uint64_t kDefaultMaxSteps = 100000;

/// n/2 for even n, 3n+1 for odd n. Requires n >= 1.
[[nodiscard]] u128 collatz_step(u128 n);

/// (3n+1)/2^j with j maximal.
[[nodiscard]] AcceleratedStep accelerated_step(OddNumber n);

[[nodiscard]] Position enumerate(OddNumber n);
[[nodiscard]] OddNumber denumerate(Position x);

/// F = g . C~ . g^-1 computed through the accelerated map.
[[nodiscard]] Position conjugate_step(Position x);

/// F evaluated from its case form F(E^n([2+2m])) = [3+3m], F(E^n([1+4m])) = [1+3m].
[[nodiscard]] Position conjugate_step_cases(Position x);

[[nodiscard]] Position equivalent(Position x);
[[nodiscard]] Position equivalent_n(Position x, unsigned k);

/// The lower equivalent (x+1)/4, present only for x = 3 (mod 4).
[[nodiscard]] std::optional<Position> e_preimage(Position x);

/// Strips equivalents until the result is even or 1 (mod 4).
[[nodiscard]] BaseDecomposition base_of(Position x);

/// z = 1 + 2*depth over an even base, z = 2 + 2*depth over a 1 (mod 4) base.
[[nodiscard]] RestrictionId restriction_of(Position x);

/// Lower map: [2+2m] -> [3+3m], [1+4m] -> [1+3m]; absent on [3+4N0].
[[nodiscard]] std::optional<Position> f_l(Position x);

/// x mod 3.
[[nodiscard]] unsigned residual_y(Position x);

/// Inverse lower map: [3+3m] -> [2+2m], [1+3m] -> [1+4m]; absent on [2+3N0].
[[nodiscard]] std::optional<Position> f_l_inv(Position x);

[[nodiscard]] inline bool is_tail(Position x) { return x.value() % 4 == 3; }
[[nodiscard]] inline bool is_head(Position x) { return x.value() % 3 == 2; }

/// Iterates F from x, recording the first [3+4N0] value (step 0 included) and arrival at [1].
[[nodiscard]] TrajectoryReport trajectory_report(Position x, std::uint64_t max_steps = kDefaultMaxSteps);

} // namespace collatz
