#include "collatz/progressions.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>

using namespace collatz;

namespace {

std::vector<oracle::Tag> tags(const Signature& s)
{
    std::vector<oracle::Tag> out;
    for (const auto& st : s.steps) out.push_back({static_cast<int>(st.branch), st.z});
    return out;
}

} // namespace

TEST(Progressions, Basics)
{
    Progression p(2, 3);
    EXPECT_EQ(p.element(4), 14u);
    EXPECT_TRUE(p.contains(14));
    EXPECT_FALSE(p.contains(15));
    EXPECT_FALSE(p.contains(1));
    EXPECT_EQ(p.count_in(2, 29), 9u);
    EXPECT_EQ(to_string(p), "2+3t");
    EXPECT_THROW(Progression(0, 3), std::invalid_argument);
    EXPECT_THROW(Progression(2, 0), std::invalid_argument);
}

TEST(Progressions, IntersectExamples)
{
    EXPECT_EQ(*intersect_residue(Progression(2, 3), 0, 2), Progression(2, 6));
    EXPECT_EQ(*intersect_residue(Progression(3, 4), 0, 3), Progression(3, 12));
    EXPECT_EQ(*intersect_residue(Progression(1, 4), 1, 4), Progression(1, 4));
    EXPECT_FALSE(intersect_residue(Progression(2, 4), 1, 2));
}

TEST(Progressions, IntersectMembership)
{
    for (u128 c = 1; c <= 12; ++c) {
        for (u128 v = 1; v <= 24; ++v) {
            for (u128 mod = 1; mod <= 12; ++mod) {
                for (u128 r = 0; r < mod; ++r) {
                    auto got = intersect_residue(Progression(c, v), r, mod);
                    // first 100 members of the predicate, by filtering
                    std::vector<u128> want;
                    for (u128 t = 0; want.size() < 100 && t < 100 * mod; ++t) {
                        if ((c + v * t) % mod == r) want.push_back(c + v * t);
                    }
                    if (want.empty()) {
                        ASSERT_FALSE(got);
                        continue;
                    }
                    ASSERT_TRUE(got);
                    for (std::size_t i = 0; i < want.size(); ++i) ASSERT_EQ(got->element(i), want[i]);
                }
            }
        }
    }
}

TEST(Progressions, BranchImages)
{
    EXPECT_EQ(image_f1(Progression(2, 6)), Progression(3, 9));
    EXPECT_EQ(image_f2(Progression(5, 12)), Progression(4, 9));
    EXPECT_EQ(image_f1_inv(Progression(3, 12)), Progression(2, 8));
    EXPECT_EQ(image_f2_inv(Progression(7, 12)), Progression(9, 16));
    EXPECT_THROW((void)image_f1(Progression(2, 3)), std::invalid_argument);
    EXPECT_THROW((void)image_f2(Progression(1, 2)), std::invalid_argument);
    EXPECT_THROW((void)image_f1_inv(Progression(3, 4)), std::invalid_argument);
    EXPECT_THROW((void)image_f2_inv(Progression(2, 3)), std::invalid_argument);
}

TEST(Progressions, IntervalTransport)
{
    for (u128 c = 1; c <= 40; ++c) {
        for (u128 k = 1; k <= 4; ++k) {
            Progression p(c, 12 * k);
            for (auto dom : {std::pair<u128, u128>{0, 2}, {1, 4}, {0, 3}, {1, 3}}) {
                auto part = intersect_residue(p, dom.first, dom.second);
                if (!part) continue;
                Progression img = dom.second == 2   ? image_f1(*part)
                                  : dom.second == 4 ? image_f2(*part)
                                  : dom.first == 0  ? image_f1_inv(*part)
                                                    : image_f2_inv(*part);
                u128 expect = dom.second == 2 ? part->interval() / 2 * 3
                              : dom.second == 4 ? part->interval() / 4 * 3
                              : dom.first == 0  ? part->interval() / 3 * 2
                                                : part->interval() / 3 * 4;
                ASSERT_EQ(img.interval(), expect);
                for (u128 t = 0; t < 20; ++t) {
                    auto e = static_cast<oracle::u64>(part->element(t));
                    auto want = dom.second == 3 ? oracle::fl_inv(e) : oracle::fl(e);
                    ASSERT_EQ(img.element(t), *want);
                }
            }
        }
    }
}

TEST(Progressions, ForwardSignatureExamples)
{
    auto s = forward_signature(Position(2), 2);
    ASSERT_EQ(s.steps.size(), 2u);
    EXPECT_EQ(s.steps[0], (SignatureStep{Branch::F1, 1}));
    EXPECT_EQ(s.steps[1], (SignatureStep{Branch::Terminal, 4}));
    EXPECT_EQ(s.z_sum(), 5u);
    EXPECT_EQ(first_recurrence_forward(Position(2), 2).found, u128{34});

    s = forward_signature(Position(1), 1);
    ASSERT_EQ(s.steps.size(), 1u);
    EXPECT_EQ(s.steps[0], (SignatureStep{Branch::F2, 2}));
    EXPECT_EQ(first_recurrence_forward(Position(1), 1).found, u128{5});

    auto r = first_recurrence_forward(Position(5), 3);
    EXPECT_TRUE(r.holds());
    EXPECT_EQ(r.predicted, 5 + (u128{1} << r.signature.z_sum()));
    EXPECT_EQ(r.found, u128{oracle::first_match(5, true, 3, 1000)});
}

TEST(Progressions, BackwardSignatureExamples)
{
    auto r = first_recurrence_backward(Position(7), 4);
    EXPECT_TRUE(r.holds());
    EXPECT_EQ(r.found, u128{88});
    EXPECT_EQ(first_recurrence_backward(Position(3), 1).found, u128{6});
    EXPECT_EQ(first_recurrence_backward(Position(10), 3).found, u128{37});
    auto s = backward_signature(Position(2), 3);
    ASSERT_EQ(s.steps.size(), 1u);
    EXPECT_EQ(s.steps[0].branch, Branch::Head);
    EXPECT_TRUE(s.ended_early(3));
}

TEST(Progressions, SignaturesMatchNaive)
{
    for (oracle::u64 x = 1; x <= 5000; ++x) {
        for (unsigned n = 1; n <= 6; ++n) {
            ASSERT_EQ(tags(forward_signature(Position(x), n)), oracle::fwd_tags(x, n)) << x << " " << n;
            ASSERT_EQ(tags(backward_signature(Position(x), n)), oracle::bwd_tags(x, n)) << x << " " << n;
        }
    }
}

TEST(Progressions, RecurrenceExactness)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 60; ++i) {
        oracle::u64 x = 1 + rng() % 10000;
        auto n = static_cast<unsigned>(1 + rng() % 6);
        auto f = first_recurrence_forward(Position(x), n);
        ASSERT_TRUE(f.holds()) << x << " " << n;
        ASSERT_EQ(oracle::first_match(x, true, n, static_cast<oracle::u64>(f.predicted)), f.predicted);
        auto b = first_recurrence_backward(Position(x), n);
        ASSERT_TRUE(b.holds()) << x << " " << n;
        ASSERT_EQ(oracle::first_match(x, false, n, static_cast<oracle::u64>(b.predicted)), b.predicted);
    }
}

TEST(Progressions, SamplingLemmaExamples)
{
    EXPECT_TRUE(sampling_lemma_check(2, 3, 3, 3 * (2 * 8 + 1)).holds);
    EXPECT_TRUE(sampling_lemma_check(3, 2, 4, 4 * (2 * 9 + 1)).holds);
    EXPECT_THROW((void)sampling_lemma_check(2, 1, 2, 1000), std::invalid_argument);
}

TEST(Progressions, SamplingLemmaSweep)
{
    for (std::uint32_t r : {2u, 3u}) {
        for (unsigned m = 1; m <= 6; ++m) {
            std::uint64_t rp = 1;
            for (unsigned i = 0; i < m; ++i) rp *= r;
            for (std::uint64_t p = 1; p <= 9; ++p) {
                if (std::gcd<std::uint64_t>(p, r) != 1) continue;
                auto v = sampling_lemma_check(r, m, p, p * (2 * rp + 1));
                ASSERT_TRUE(v.holds) << r << " " << m << " " << p;
            }
        }
    }
}

TEST(Progressions, SamplingNeedsCoprimePeriod)
{
    // The checker itself must be able to fail: a shared factor breaks the lemma.
    auto seq = power_interval_sequence(2, 3, 400);
    EXPECT_FALSE(check_sampled_intervals(seq, 2).holds);
    EXPECT_TRUE(check_sampled_intervals(seq, 3).holds);
}

TEST(Progressions, PowerIntervalSequence)
{
    auto seq = power_interval_sequence(3, 2, 200);
    // Each tag recurs at a single power-of-3 interval.
    std::map<std::uint32_t, std::vector<std::size_t>> at;
    for (std::size_t i = 0; i < seq.size(); ++i) at[seq[i]].push_back(i);
    for (auto& [tag, idx] : at) {
        ASSERT_GE(idx.size(), 2u);
        auto d = idx[1] - idx[0];
        EXPECT_TRUE(d == 3 || d == 9) << tag;
        for (std::size_t i = 1; i < idx.size(); ++i) ASSERT_EQ(idx[i] - idx[i - 1], d);
    }
}
