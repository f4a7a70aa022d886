#include <gtest/gtest.h>

#include "qiw/classgroup.hpp"
#include "qiw/local.hpp"
#include "qiw/ray.hpp"
#include "support/oracles.hpp"

using namespace qiw;

namespace {

FinAbGroup group(std::vector<long> d) { return FinAbGroup(std::vector<Int>(d.begin(), d.end())); }

std::vector<long> fundamentals(long lo, long hi)
{
    std::vector<long> out;
    for (long d = lo; d <= hi; ++d)
        if (is_fundamental_discriminant(Int(d)))
            out.push_back(d);
    return out;
}

QuadElem random_elem(oracle::Rng& rng, Int const& disc)
{
    QuadElem x(disc, 0);
    do
        x = QuadElem(disc, Rat(rng.uniform(-50, 50)), Rat(rng.uniform(-50, 50)));
    while (x.is_zero());
    return x;
}

} // namespace

TEST(Discriminant, Fundamental)
{
    for (long d : {-3, -4, -7, -8, 5, 8, 12, 13, -20, 40, 253})
        EXPECT_TRUE(is_fundamental_discriminant(Int(d))) << d;
    for (long d : {0, 1, 4, -12, 9, 16, 20, 2, 3, -16, 45})
        EXPECT_FALSE(is_fundamental_discriminant(Int(d))) << d;
    EXPECT_THROW(make_field(Int(-12)), invalid_input);
    EXPECT_EQ(make_field(Int(5)).r, 2);
    EXPECT_EQ(make_field(Int(-4)).c, 1);
}

TEST(TotallyEllAdic, Examples)
{
    EXPECT_TRUE(is_totally_ell_adic(Int(-4), Int(5)));
    EXPECT_FALSE(is_totally_ell_adic(Int(-4), Int(3)));
    EXPECT_FALSE(is_totally_ell_adic(Int(-20), Int(5)));
}

TEST(QuadElem, NormTraceAndArithmetic)
{
    oracle::Rng rng(31);
    for (long d : {-23L, -4L, 5L, 12L, 253L})
        for (int t = 0; t < 50; ++t) {
            auto x = random_elem(rng, Int(d)), y = random_elem(rng, Int(d));
            EXPECT_EQ((x * y).norm(), x.norm() * y.norm());
            EXPECT_EQ((x + y).trace(), x.trace() + y.trace());
            EXPECT_EQ(x * x.conj(), QuadElem(Int(d), x.norm()));
            EXPECT_EQ(x * x.inverse(), QuadElem::one(Int(d)));
        }
    auto i = QuadElem::omega(Int(-4)) + QuadElem(Int(-4), 2); // w = (-4 + sqrt(-4))/2
    EXPECT_EQ(i * i, QuadElem(Int(-4), -1));
}

TEST(ClassGroup, Examples)
{
    EXPECT_EQ(class_group(Int(-23)), group({3}));
    EXPECT_TRUE(class_group(Int(-4)).is_trivial());
    EXPECT_EQ(class_group(Int(40)), group({2}));
    EXPECT_EQ(class_number(Int(-23)), 3);
}

TEST(ClassGroup, KnownStructures)
{
    EXPECT_EQ(class_group(Int(-3299)), group({3, 9}));
    EXPECT_EQ(class_group(Int(60)), group({2, 2}));
    EXPECT_EQ(wide_class_group(Int(60)), group({2}));
    EXPECT_EQ(class_group(Int(-84)), group({2, 2}));
    EXPECT_EQ(class_group(Int(-4027)), group({3, 3}));
}

TEST(ClassGroup, ResourceBound)
{
    ClassGroupOptions opt;
    opt.bound = 1000;
    EXPECT_THROW(compute_class_group(make_field(Int(-1003)), opt), resource_error);
}

TEST(ClassGroup, CountsMatchReducedForms)
{
    for (long d : fundamentals(-3000, 3000)) {
        if (d < 0) {
            EXPECT_EQ(class_number(Int(d)), oracle::imaginary_form_count(d)) << d;
        } else {
            auto c = oracle::indefinite_classes(d);
            EXPECT_EQ(class_number(Int(d)), c.wide) << d;
            EXPECT_EQ(narrow_class_number(Int(d)), c.narrow) << d;
            auto u = fundamental_unit(make_field(Int(d)));
            EXPECT_EQ(u.norm == -1, c.minus_one_norm) << d;
        }
    }
}

TEST(ClassGroup, GroupOrderMatchesClassNumber)
{
    for (long d : fundamentals(-600, 600)) {
        EXPECT_EQ(wide_class_group(Int(d)).order(), class_number(Int(d))) << d;
        EXPECT_EQ(class_group(Int(d)).order(), d < 0 ? class_number(Int(d)) : narrow_class_number(Int(d))) << d;
    }
}

TEST(ClassGroup, NarrowAndWideAgreeAtOddPrimes)
{
    for (long d : fundamentals(1, 1500))
        for (long ell : {3L, 5L, 7L})
            EXPECT_EQ(ell_sylow(class_group(Int(d)), Int(ell)), ell_sylow(wide_class_group(Int(d)), Int(ell))) << d;
}

TEST(ClassGroup, GeneratorsAndRelationElements)
{
    for (long d : {-23L, -3299L, -84L, 229L, 1129L, 316L}) {
        auto f = make_field(Int(d));
        auto cg = class_group_prime_to(f, Int(3));
        EXPECT_EQ(cg.group.order(), class_number(Int(d)));
        for (auto const& p : cg.generators)
            EXPECT_FALSE(divides(Int(3), p.a()));
        for (std::size_t i = 0; i < cg.generator_count(); ++i) {
            QuadIdeal prod = QuadIdeal::unit(Int(d));
            for (std::size_t j = 0; j < cg.generator_count(); ++j) {
                Int e = cg.relations(i, j);
                auto base = e < 0 ? inverse(cg.generators[j]) : cg.generators[j];
                for (Int k = 0; k < abs(e); ++k)
                    prod = prod * base;
            }
            EXPECT_EQ(principal_ideal(cg.relation_elements[i]), prod) << d << " relation " << i;
        }
    }
}

TEST(Ideal, ReductionTracksTheMultiplier)
{
    oracle::Rng rng(32);
    for (long d : {-23L, -4L, -3299L, 5L, 60L, 229L, 1129L})
        for (int t = 0; t < 30; ++t) {
            long q = rng.pick(std::vector<long>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
            if (kronecker(Int(d), Int(q)) == -1)
                continue;
            auto p = prime_ideal_above(Int(d), Int(q), rng.coin());
            auto i = p * p * p;
            auto r = reduce(i);
            EXPECT_TRUE(is_reduced(r.ideal));
            EXPECT_EQ(r.mu * r.ideal, i) << d << " " << q;
        }
}

TEST(Ideal, PrimeAboveHasRightNorm)
{
    for (long d : {-23L, 5L, 40L, 253L})
        for (long q : {2L, 3L, 5L, 7L, 11L, 13L}) {
            if (kronecker(Int(d), Int(q)) == -1) {
                EXPECT_THROW(prime_ideal_above(Int(d), Int(q)), invalid_input);
                continue;
            }
            auto p = prime_ideal_above(Int(d), Int(q));
            EXPECT_EQ(p.norm(), q);
            EXPECT_EQ(p * p.conj(), QuadIdeal(Int(d), 1, 0, Rat(q)));
        }
}

TEST(FundamentalUnit, Examples)
{
    auto u5 = fundamental_unit(make_field(Int(5)));
    EXPECT_EQ(u5.eps, QuadElem(Int(5), Rat(-2), 1)); // (1 + sqrt5)/2 = w - 2
    EXPECT_EQ(u5.norm, -1);
    auto u8 = fundamental_unit(make_field(Int(8)));
    EXPECT_EQ(u8.eps, QuadElem(Int(8), Rat(-3), 1)); // 1 + sqrt2 = w - 3
    EXPECT_EQ(u8.norm, -1);
    auto u12 = fundamental_unit(make_field(Int(12)));
    EXPECT_EQ(u12.eps, QuadElem(Int(12), Rat(-4), 1)); // 2 + sqrt3 = w - 4
    EXPECT_EQ(u12.norm, 1);
    EXPECT_THROW(fundamental_unit(make_field(Int(-4))), invalid_input);
}

// Smallest y > 0 with D y^2 +- 4 a square gives the fundamental unit
// (x + y sqrt D)/2; the computed unit must be exactly that one.
TEST(FundamentalUnit, MinimalPellSolution)
{
    for (long d : fundamentals(5, 150)) {
        auto u = fundamental_unit(make_field(Int(d)));
        EXPECT_EQ(abs(u.eps.norm()), 1);
        // eps = a + b w = (2a + b d)/2 + (b/2) sqrt d
        Int y = Int(u.eps.b());
        Int x = Int(2 * u.eps.a() + u.eps.b() * Rat(d));
        long ymin = 0, xmin = 0;
        for (long t = 1; t < 100'000'000 && !ymin; ++t)
            for (long s : {-4L, 4L}) {
                long v = d * t * t + s;
                long r = oracle::isqrt(v);
                if (r * r == v) {
                    ymin = t;
                    xmin = r;
                    break;
                }
            }
        ASSERT_GT(ymin, 0) << d;
        EXPECT_EQ(y, ymin) << d;
        EXPECT_EQ(x, xmin) << d;
    }
}

TEST(PrimesAboveEll, Examples)
{
    auto f = make_field(Int(-4));
    auto pr = primes_above_ell(f, Int(5));
    EXPECT_EQ(pr.l.norm(), 5);
    EXPECT_EQ(pr.l * pr.l_conj, QuadIdeal(Int(-4), 1, 0, Rat(5)));
    EXPECT_FALSE(pr.l == pr.l_conj);
    // iota(w) is a root of w^2 - D w + (D^2 - D)/4 mod 125
    for (auto const& e : {pr.iota_l, pr.iota_l_conj}) {
        auto w = e.omega_image(3);
        EXPECT_EQ(w * w - PadicInt(Int(5), 3, Int(-4)) * w + PadicInt(Int(5), 3, Int(5)), PadicInt(Int(5), 3, Int(0)));
    }
    // l is the kernel of iota_l mod l
    auto [b1, b2] = pr.l.basis();
    EXPECT_EQ(pr.iota_l.image(b1, 1).residue(), 0);
    EXPECT_EQ(pr.iota_l.image(b2, 1).residue(), 0);
    EXPECT_THROW(primes_above_ell(f, Int(3)), invalid_input);
    EXPECT_THROW(primes_above_ell(make_field(Int(12)), Int(2)), invalid_input);
}

TEST(PrimesAboveEll, EmbeddingsAreConjugate)
{
    oracle::Rng rng(33);
    for (long d : {-23L, -4L, 5L, 37L, 253L})
        for (long ell : {3L, 5L, 7L, 11L, 13L}) {
            if (kronecker(Int(d), Int(ell)) != 1)
                continue;
            auto pr = primes_above_ell(make_field(Int(d)), Int(ell));
            for (int t = 0; t < 30; ++t) {
                auto x = random_elem(rng, Int(d));
                long m = rng.uniform(1, 10);
                if (divides(Int(ell), Int(x.norm())))
                    continue;
                EXPECT_EQ(pr.iota_l.image(x.conj(), m), pr.iota_l_conj.image(x, m));
                EXPECT_EQ(pr.iota_l.image(x, m) * pr.iota_l_conj.image(x, m),
                          PadicInt::from_rational(x.norm(), Int(ell), m));
                auto y = random_elem(rng, Int(d));
                if (divides(Int(ell), Int(y.norm())))
                    continue;
                EXPECT_EQ(pr.iota_l.image(x * y, m), pr.iota_l.image(x, m) * pr.iota_l.image(y, m));
            }
        }
}

TEST(PrincipalGenerator, Examples)
{
    auto ell = QuadIdeal(Int(-4), 1, 0, Rat(5));
    auto g = principal_generator(ell);
    EXPECT_EQ(abs(g.norm()), 25);
    EXPECT_EQ(principal_ideal(g), ell);

    auto p = prime_ideal_above(Int(-23), Int(2));
    auto g3 = principal_generator(p * p * p);
    EXPECT_EQ(g3.norm(), 8);
    EXPECT_EQ(principal_ideal(g3), p * p * p);
    EXPECT_THROW(principal_generator(p), invalid_input);

    auto pr = primes_above_ell(make_field(Int(229)), Int(5));
    auto g5 = principal_generator(pr.l * pr.l_conj);
    EXPECT_EQ(abs(g5.norm()), 25);
    EXPECT_EQ(principal_ideal(g5), QuadIdeal(Int(229), 1, 0, Rat(5)));
}

TEST(PrincipalGenerator, RealFieldsAreBalanced)
{
    for (long d : {229L, 1129L, 316L, 376L}) {
        auto f = make_field(Int(d));
        ClassGroupOptions opt;
        opt.relation_elements = false;
        auto cg = compute_class_group(f, opt);
        for (long q : {2L, 3L, 5L, 7L, 11L}) {
            if (kronecker(Int(d), Int(q)) == -1)
                continue;
            auto p = prime_ideal_above(Int(d), Int(q));
            Int h = cg.h;
            auto r = power_reduced(p, h);
            QuadIdeal ph = r.mu * r.ideal;
            auto g = principal_generator(cg, ph);
            EXPECT_EQ(principal_ideal(g), ph);
            auto la = log_abs_embeddings(g);
            double le = log_abs_embeddings(cg.unit->eps)[0];
            EXPECT_LE(std::abs(la[0] - la[1]), le + 1e-6) << d << " " << q;
        }
    }
}

TEST(ResidueUnits, Examples)
{
    auto pr = primes_above_ell(make_field(Int(-4)), Int(5));
    EXPECT_EQ(ResidueUnits(pr, 2).group(), group({5, 5}));
    EXPECT_TRUE(ResidueUnits(pr, 1).group().is_trivial());
    auto dl = ResidueUnits(pr, 4).dlog(QuadElem(Int(-4), 6));
    EXPECT_EQ(dl[0], 1);
    EXPECT_EQ(dl[1], 1);
    EXPECT_THROW(ResidueUnits(pr, 3).dlog(QuadElem(Int(-4), 5)), invalid_input);
}

TEST(RayClassGroup, Examples)
{
    EXPECT_EQ(ray_class_group_ellpart(Int(-4), Int(5), 2).group, group({5, 5}));
    EXPECT_TRUE(ray_class_group_ellpart(Int(-4), Int(5), 1).group.is_trivial());
    auto r = ray_class_group_ellpart(Int(5), Int(11), 2).group;
    EXPECT_EQ(r.order(), oracle::ray_order_sqrt5(11));
    EXPECT_EQ(r, group({11}));
}

TEST(RayClassGroup, SqrtFiveAgainstCrtCount)
{
    for (long ell : {11L, 19L, 29L, 31L, 41L})
        EXPECT_EQ(ray_class_group_ellpart(Int(5), Int(ell), 2).group.order(), oracle::ray_order_sqrt5(ell)) << ell;
}

TEST(RayClassGroup, LevelsGrowBoundedlyAndSurject)
{
    for (long d : {-23L, -4L, 5L, 37L, 253L, -3299L, 229L})
        for (long ell : {3L, 5L, 7L}) {
            if (kronecker(Int(d), Int(ell)) != 1)
                continue;
            auto f = make_field(Int(d));
            auto pr = primes_above_ell(f, Int(ell));
            auto cg = class_group_prime_to(f, Int(ell));
            Int bound = Int(ell * ell); // (O/l^m)^x gains l^2 per level
            auto prev = ray_class_group_ellpart(cg, pr, 1);
            EXPECT_EQ(prev.group, ell_sylow(cg.group, Int(ell))) << d;
            for (long m = 2; m <= 7; ++m) {
                auto cur = ray_class_group_ellpart(cg, pr, m);
                Int q = cur.group.order() / prev.group.order();
                EXPECT_TRUE(divides(prev.group.order(), cur.group.order()));
                EXPECT_TRUE(divides(q, bound)) << d << " " << ell << " m=" << m;
                EXPECT_TRUE(surjects_onto(cur, prev));
                prev = cur;
            }
        }
}
