#include "collatz/progressions.hpp"

#include <stdexcept>
#include <unordered_map>

namespace collatz {

namespace {

using i128 = __int128;

// Inverse of a modulo m for gcd(a, m) = 1, m >= 1.
u128 mod_inverse(u128 a, u128 m)
{
    if (m == 1) return 0;
    if (m >> 126) throw WidthExceeded("modulus too wide for inverse");
    i128 old_r = static_cast<i128>(a % m), r = static_cast<i128>(m);
    i128 old_s = 1, s = 0;
    while (r != 0) {
        i128 q = old_r / r;
        i128 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    i128 mm = static_cast<i128>(m);
    old_s %= mm;
    if (old_s < 0) old_s += mm;
    return static_cast<u128>(old_s);
}

void require(bool ok, const char* what)
{
    if (!ok) throw std::invalid_argument(what);
}

} // namespace

Progression::Progression(u128 intercept, u128 interval) : intercept_(intercept), interval_(interval)
{
    require(intercept >= 1, "progression intercept must be >= 1");
    require(interval >= 1, "progression interval must be >= 1");
}

u128 Progression::element(u128 t) const
{
    return checked_add(intercept_, checked_mul(interval_, t, "progression element"), "progression element");
}

bool Progression::contains(u128 v) const
{
    return v >= intercept_ && (v - intercept_) % interval_ == 0;
}

u128 Progression::count_in(u128 lo, u128 hi) const
{
    if (hi <= lo || hi <= intercept_) return 0;
    u128 first = lo <= intercept_ ? 0 : (lo - intercept_ + interval_ - 1) / interval_;
    u128 last = (hi - 1 - intercept_) / interval_;
    return last >= first ? last - first + 1 : 0;
}

std::string to_string(const Progression& p)
{
    return to_string(p.intercept()) + "+" + to_string(p.interval()) + "t";
}

std::optional<Progression> intersect_residue(const Progression& p, u128 r, u128 mod)
{
    require(mod >= 1, "intersect_residue requires mod >= 1");
    r %= mod;
    u128 c = p.intercept() % mod;
    u128 g = gcd128(p.interval(), mod);
    // Solve c + V t = r (mod M): (V/g) t = (r - c)/g (mod M/g).
    u128 diff = (r + mod - c) % mod;
    if (diff % g != 0) return std::nullopt;
    u128 reduced_mod = mod / g;
    u128 t0 = reduced_mod == 1 ? 0 : (diff / g) % reduced_mod * mod_inverse((p.interval() / g) % reduced_mod, reduced_mod) % reduced_mod;
    u128 lcm = checked_mul(p.interval() / g, mod, "lcm");
    return Progression(p.element(t0), lcm);
}

Progression image_f1(const Progression& p)
{
    require(p.intercept() % 2 == 0 && p.interval() % 2 == 0, "image_f1: progression not inside [2+2N0]");
    return {checked_add(3, checked_mul(3, (p.intercept() - 2) / 2)), checked_mul(3, p.interval() / 2)};
}

Progression image_f2(const Progression& p)
{
    require(p.intercept() % 4 == 1 && p.interval() % 4 == 0, "image_f2: progression not inside [1+4N0]");
    return {checked_add(1, checked_mul(3, (p.intercept() - 1) / 4)), checked_mul(3, p.interval() / 4)};
}

Progression image_f1_inv(const Progression& p)
{
    require(p.intercept() % 3 == 0 && p.interval() % 3 == 0, "image_f1_inv: progression not inside [3+3N0]");
    return {2 + 2 * ((p.intercept() - 3) / 3), 2 * (p.interval() / 3)};
}

Progression image_f2_inv(const Progression& p)
{
    require(p.intercept() % 3 == 1 && p.interval() % 3 == 0, "image_f2_inv: progression not inside [1+3N0]");
    return {checked_add(1, checked_mul(4, (p.intercept() - 1) / 3)), checked_mul(4, p.interval() / 3)};
}

const char* to_string(Branch b)
{
    switch (b) {
    case Branch::F1: return "F1";
    case Branch::F2: return "F2";
    case Branch::Terminal: return "TERMINAL";
    case Branch::F1Inv: return "F1inv";
    case Branch::F2Inv: return "F2inv";
    case Branch::Head: return "HEAD";
    }
    return "?";
}

unsigned Signature::z_sum() const
{
    unsigned s = 0;
    for (const auto& step : steps) s += step.z;
    return s;
}

Signature forward_signature(Position x, unsigned n)
{
    Signature sig;
    for (unsigned i = 0; i < n; ++i) {
        unsigned z = restriction_of(x).z;
        if (z > 2) {
            sig.steps.push_back({Branch::Terminal, z});
            break;
        }
        sig.steps.push_back({z == 1 ? Branch::F1 : Branch::F2, z});
        x = *f_l(x);
    }
    return sig;
}

Signature backward_signature(Position x, unsigned n)
{
    Signature sig;
    for (unsigned i = 0; i < n; ++i) {
        unsigned y = residual_y(x);
        if (y == 2) {
            sig.steps.push_back({Branch::Head, 0});
            break;
        }
        sig.steps.push_back({y == 0 ? Branch::F1Inv : Branch::F2Inv, 0});
        x = *f_l_inv(x);
    }
    return sig;
}

namespace {

// Walks the candidate in lockstep with sig and bails at the first differing step.
bool forward_matches(u128 candidate, const Signature& sig)
{
    Position x(candidate);
    for (const auto& step : sig.steps) {
        unsigned z = restriction_of(x).z;
        if (z != step.z) return false;
        if (z > 2) return true;
        x = *f_l(x);
    }
    return true;
}

bool backward_matches(u128 candidate, const Signature& sig)
{
    Position x(candidate);
    for (const auto& step : sig.steps) {
        unsigned y = residual_y(x);
        Branch b = y == 0 ? Branch::F1Inv : y == 1 ? Branch::F2Inv : Branch::Head;
        if (b != step.branch) return false;
        if (b == Branch::Head) return true;
        x = *f_l_inv(x);
    }
    return true;
}

template <typename Match>
Recurrence scan(Position x, Signature sig, u128 distance, u128 max_scan, Match match)
{
    u128 bound = checked_mul(distance, 4, "recurrence bound");
    if (bound > max_scan) throw std::length_error("recurrence scan of " + to_string(bound) + " exceeds cap");
    Recurrence r{std::move(sig), checked_add(x.value(), distance), std::nullopt};
    u128 hi = checked_add(x.value(), bound);
    for (u128 c = x.value() + 1; c <= hi; ++c) {
        if (match(c, r.signature)) {
            r.found = c;
            break;
        }
    }
    return r;
}

} // namespace

Recurrence first_recurrence_forward(Position x, unsigned n, u128 max_scan)
{
    Signature sig = forward_signature(x, n);
    unsigned zs = sig.z_sum();
    if (zs >= 120) throw WidthExceeded("2^(sum z) exceeds 128 bits");
    return scan(x, std::move(sig), u128{1} << zs, max_scan, forward_matches);
}

Recurrence first_recurrence_backward(Position x, unsigned n, u128 max_scan)
{
    Signature sig = backward_signature(x, n);
    u128 distance = checked_pow(3, static_cast<unsigned>(sig.steps.size()));
    return scan(x, std::move(sig), distance, max_scan, backward_matches);
}

SamplingVerdict check_sampled_intervals(std::span<const std::uint32_t> seq, std::uint64_t period)
{
    require(period >= 1, "sampling period must be >= 1");
    // Interval of each tag in the original sequence; it must be single-valued.
    std::unordered_map<std::uint32_t, std::uint64_t> last, interval;
    for (std::uint64_t i = 0; i < seq.size(); ++i) {
        auto it = last.find(seq[i]);
        if (it != last.end()) {
            std::uint64_t d = i - it->second;
            auto [iv, fresh] = interval.emplace(seq[i], d);
            if (!fresh && iv->second != d) throw std::invalid_argument("tag sequence is not periodic");
        }
        last[seq[i]] = i;
    }

    SamplingVerdict v;
    for (std::uint64_t offset = 0; offset < period && offset < seq.size(); ++offset) {
        std::unordered_map<std::uint32_t, std::uint64_t> seen;
        std::uint64_t k = 0;
        for (std::uint64_t i = offset; i < seq.size(); i += period, ++k) {
            auto it = seen.find(seq[i]);
            if (it != seen.end()) {
                std::uint64_t d = k - it->second;
                auto iv = interval.find(seq[i]);
                std::uint64_t want = iv == interval.end() ? 0 : iv->second;
                if (d != want) {
                    return {false, k, offset, want, d};
                }
            }
            seen[seq[i]] = k;
        }
    }
    return v;
}

std::vector<std::uint32_t> power_interval_sequence(std::uint32_t r, unsigned power, std::uint64_t length)
{
    require(r >= 2 && power >= 1, "power_interval_sequence requires r >= 2, power >= 1");
    // Tag of index i is (j, (i / r^j) mod r) with j = min(v_r(i), power-1); the class of
    // level j recurs at r^(j+1).
    std::vector<std::uint32_t> seq;
    seq.reserve(length);
    for (std::uint64_t i = 1; i <= length; ++i) {
        std::uint64_t q = i;
        unsigned j = 0;
        while (j + 1 < power && q % r == 0) {
            q /= r;
            ++j;
        }
        seq.push_back(static_cast<std::uint32_t>(j * r + q % r));
    }
    return seq;
}

SamplingVerdict sampling_lemma_check(std::uint32_t r, unsigned power, std::uint64_t period, std::uint64_t probe_length)
{
    require(r >= 2 && power >= 1 && period >= 1, "sampling_lemma_check: r >= 2, power >= 1, period >= 1");
    require(gcd128(period, r) == 1, "sampling_lemma_check: period must be co-prime with r");
    u128 top = checked_pow(r, power);
    require(u128{probe_length} >= u128{period} * (2 * top + 1), "sampling_lemma_check: probe too short for two recurrences");
    auto seq = power_interval_sequence(r, power, probe_length);
    return check_sampled_intervals(seq, period);
}

} // namespace collatz
