#include "collatz/core_maps.hpp"

#include <stdexcept>

namespace collatz {

OddNumber::OddNumber(u128 n) : n_(n)
{
    if (n % 2 == 0) throw std::invalid_argument("OddNumber requires an odd positive integer, got " + to_string(n));
}

Position::Position(u128 x) : x_(x)
{
    if (x == 0) throw std::invalid_argument("Position requires x >= 1");
}

u128 collatz_step(u128 n)
{
    if (n == 0) throw std::invalid_argument("collatz_step requires n >= 1");
    if (n % 2 == 0) return n / 2;
    return checked_add(checked_mul(n, 3, "3n+1"), 1, "3n+1");
}

AcceleratedStep accelerated_step(OddNumber n)
{
    u128 v = checked_add(checked_mul(n.value(), 3, "3n+1"), 1, "3n+1");
    unsigned j = ctz128(v);
    return {OddNumber(v >> j), j};
}

Position enumerate(OddNumber n)
{
    // (n+1)/2 without the n+1 overflow at n = 2^128-1.
    return Position(n.value() / 2 + 1);
}

OddNumber denumerate(Position x)
{
    return OddNumber(checked_add(checked_mul(x.value() - 1, 2, "2x-1"), 1, "2x-1"));
}

Position conjugate_step(Position x)
{
    return enumerate(accelerated_step(denumerate(x)).value);
}

Position conjugate_step_cases(Position x)
{
    u128 b = base_of(x).base.value();
    if (b % 2 == 0) return Position(3 + 3 * ((b - 2) / 2));
    return Position(1 + 3 * ((b - 1) / 4));
}

Position equivalent(Position x)
{
    return Position(checked_mul(x.value(), 4, "E(x)=4x-1") - 1);
}

Position equivalent_n(Position x, unsigned k)
{
    for (unsigned i = 0; i < k; ++i) x = equivalent(x);
    return x;
}

std::optional<Position> e_preimage(Position x)
{
    if (x.value() % 4 != 3) return std::nullopt;
    return Position(x.value() / 4 + 1);
}

BaseDecomposition base_of(Position x)
{
    unsigned depth = 0;
    while (auto lower = e_preimage(x)) {
        x = *lower;
        ++depth;
    }
    return {x, depth};
}

RestrictionId restriction_of(Position x)
{
    auto [base, depth] = base_of(x);
    if (base.value() % 2 == 0) return {1 + 2 * depth, BaseKind::Even, depth};
    return {2 + 2 * depth, BaseKind::OneModFour, depth};
}

std::optional<Position> f_l(Position x)
{
    u128 v = x.value();
    if (v % 2 == 0) return Position(checked_add(3, checked_mul(3, (v - 2) / 2, "F_l"), "F_l"));
    if (v % 4 == 1) return Position(checked_add(1, checked_mul(3, (v - 1) / 4, "F_l"), "F_l"));
    return std::nullopt;
}

unsigned residual_y(Position x)
{
    return static_cast<unsigned>(x.value() % 3);
}

std::optional<Position> f_l_inv(Position x)
{
    u128 v = x.value();
    switch (residual_y(x)) {
    case 0: return Position(2 + 2 * ((v - 3) / 3));
    case 1: return Position(checked_add(1, checked_mul(4, (v - 1) / 3, "F_l^-1"), "F_l^-1"));
    default: return std::nullopt;
    }
}

TrajectoryReport trajectory_report(Position x, std::uint64_t max_steps)
{
    if (max_steps == 0) throw std::invalid_argument("trajectory_report requires max_steps >= 1");
    TrajectoryReport r{x, std::nullopt, std::nullopt, std::nullopt, false};
    Position cur = x;
    for (std::uint64_t i = 0;; ++i) {
        if (!r.first_3mod4_value && cur.value() % 4 == 3) {
            r.first_3mod4_value = cur;
            r.steps_to_first_3mod4 = i;
        }
        if (cur.value() == 1) {
            r.steps_to_one = i;
            return r;
        }
        if (i == max_steps) {
            r.truncated = true;
            return r;
        }
        cur = conjugate_step(cur);
    }
}

} // namespace collatz
