#include <gtest/gtest.h>

#include "qiw/logclass.hpp"
#include "support/oracles.hpp"

using namespace qiw;

namespace {

FinAbGroup group(std::vector<long> d) { return FinAbGroup(std::vector<Int>(d.begin(), d.end())); }

struct Pinned
{
    long disc, ell;
    std::vector<long> wcl;
};

// Logarithmic class groups recorded from an independent number-field package
// (its l-adic logarithmic class group routine on the maximal order).
std::vector<Pinned> const pinned{
    {-356, 7, {7}}, {-323, 3, {27}}, {-296, 3, {9}}, {-164, 5, {5}}, {-136, 7, {7}}, {-51, 5, {125}},
    {-47, 3, {9}},  {-11, 5, {5}},   {253, 3, {3}},  {268, 3, {3}},  {397, 3, {3}},  {-4, 5, {}},
    {5, 11, {}},    {37, 7, {}},     {69, 5, {}},    {-23, 3, {}},   {-7, 11, {}},   {229, 3, {}},
};

} // namespace

TEST(LogValuation, Examples)
{
    Int ell(5);
    EXPECT_EQ(log_valuation(Rat(5), ell, 4).residue(), 0);
    EXPECT_TRUE(log_valuation(Rat(6), ell, 4).is_unit());
    // (1 + l)^a l^b has v~ = a * Log(1 + l)/l, a unit multiple of a
    PadicInt base = log_valuation(Rat(6), ell, 4);
    for (long a : {2L, 3L, 7L})
        for (long b : {0L, 1L, 3L}) {
            Rat x = Rat(pow_int(Int(6), static_cast<unsigned long>(a)) * pow_int(ell, static_cast<unsigned long>(b)));
            EXPECT_EQ(log_valuation(x, ell, 4), base * PadicInt(ell, 4, Int(a)));
        }
    EXPECT_THROW(log_valuation(Rat(6), ell, 0), invalid_input);
}

TEST(LogValuation, HomomorphismAtEachPlace)
{
    oracle::Rng rng(41);
    for (long d : {-4L, -23L, 37L, 253L}) {
        Int ell = d == -23 ? Int(3) : d == -4 ? Int(5) : d == 37 ? Int(7) : Int(3);
        auto pr = primes_above_ell(make_field(Int(d)), ell);
        for (int t = 0; t < 40; ++t) {
            QuadElem x(Int(d), Rat(rng.uniform(-30, 30)), Rat(rng.uniform(-30, 30)));
            QuadElem y(Int(d), Rat(rng.uniform(-30, 30)), Rat(rng.uniform(-30, 30)));
            if (x.is_zero() || y.is_zero())
                continue;
            for (auto const* e : {&pr.iota_l, &pr.iota_l_conj})
                EXPECT_EQ(log_valuation(x * y, *e, 6), log_valuation(x, *e, 6) + log_valuation(y, *e, 6));
        }
    }
}

TEST(LogClassGroup, Examples)
{
    auto w = wcl(Int(-4), Int(5));
    EXPECT_TRUE(w.group.is_trivial());
    EXPECT_TRUE(w.stabilized);
    EXPECT_EQ(w.levels.size(), 3u);
    EXPECT_EQ(wcl(Int(253), Int(3)).group, group({3}));
    EXPECT_THROW(wcl(Int(-4), Int(3)), invalid_input);
    EXPECT_THROW(wcl(Int(-4), Int(5), 1), invalid_input);
}

TEST(LogClassGroup, MatchesRecordedValues)
{
    for (auto const& p : pinned) {
        auto w = wcl(Int(p.disc), Int(p.ell));
        EXPECT_TRUE(w.stabilized) << p.disc << " " << p.ell;
        EXPECT_EQ(w.group, group(p.wcl)) << p.disc << " " << p.ell;
    }
}

TEST(LogClassGroup, InvariantUnderPresentationChanges)
{
    std::vector<WclOptions> variants(6);
    variants[0].swap_embeddings = true;
    variants[1].beta_negate = true;
    variants[2].beta_ell_power = 2;
    variants[3].beta_unit_power = 3;
    variants[4].degree_unit = 2;
    variants[5].swap_embeddings = true;
    variants[5].beta_ell_power = -1;
    for (auto const& p : pinned) {
        Int d(p.disc), ell(p.ell);
        auto f = make_field(d);
        auto pr = primes_above_ell(f, ell);
        auto cg = class_group_prime_to(f, ell);
        auto base = log_class_group(cg, pr, 8).group;
        for (std::size_t i = 0; i < variants.size(); ++i) {
            if (!f.real() && variants[i].beta_unit_power != 0)
                continue;
            EXPECT_EQ(log_class_group(cg, pr, 8, variants[i]).group, base) << p.disc << " " << p.ell << " variant " << i;
        }
        EXPECT_EQ(log_class_group(cg, pr, 10).group, base) << p.disc << " " << p.ell;
    }
}

TEST(ClPrime, Examples)
{
    EXPECT_TRUE(cl_prime(Int(-4), Int(5)).is_trivial());
    // Cl = Z/3 is generated by a prime above 3 itself
    EXPECT_TRUE(cl_prime(Int(-23), Int(3)).is_trivial());
    EXPECT_TRUE(cl_prime(Int(-3299), Int(5)).is_trivial());
}

// The primes above l have degree 1 in the logarithmic group, so the
// l-classes modulo those primes are a quotient of wCl.
TEST(ClPrime, IsAQuotientOfTheLogarithmicGroup)
{
    for (auto const& p : pinned) {
        auto c = cl_prime(Int(p.disc), Int(p.ell));
        auto w = wcl(Int(p.disc), Int(p.ell)).group;
        EXPECT_TRUE(divides(c.order(), w.order())) << p.disc << " " << p.ell;
    }
}
