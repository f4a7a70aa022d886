#include <gtest/gtest.h>

#include <numeric>

#include "qiw/abelian.hpp"
#include "qiw/knotfile.hpp"
#include "support/oracles.hpp"

using namespace qiw;

namespace {

FinAbGroup group(std::vector<long> d) { return FinAbGroup(std::vector<Int>(d.begin(), d.end())); }

IntMatrix random_matrix(oracle::Rng& rng, std::size_t r, std::size_t c, long bound)
{
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = rng.uniform(-bound, bound);
    return m;
}

// Leibniz expansion.
Int det(IntMatrix const& m)
{
    std::size_t n = m.rows();
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    Int total = 0;
    do {
        int sign = 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (p[i] > p[j])
                    sign = -sign;
        Int term = sign;
        for (std::size_t i = 0; i < n; ++i)
            term *= m(i, p[i]);
        total += term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

bool equal(IntMatrix const& a, IntMatrix const& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j))
                return false;
    return true;
}

} // namespace

TEST(SmithNormalForm, Examples)
{
    auto d = smith_normal_form(IntMatrix{{2, 4}, {6, 8}}).diagonal();
    EXPECT_EQ(d, (std::vector<Int>{2, 4}));
    EXPECT_EQ(smith_normal_form(IntMatrix::identity(3)).diagonal(), (std::vector<Int>{1, 1, 1}));
    EXPECT_EQ(smith_normal_form(IntMatrix(2, 2)).diagonal(), (std::vector<Int>{0, 0}));
}

TEST(SmithNormalForm, RandomMatricesSatisfyContract)
{
    oracle::Rng rng(11);
    for (int t = 0; t < 300; ++t) {
        auto r = static_cast<std::size_t>(rng.uniform(1, 5));
        auto c = static_cast<std::size_t>(rng.uniform(1, 5));
        IntMatrix m = random_matrix(rng, r, c, t % 3 == 0 ? 1000 : 9);
        auto s = smith_normal_form(m);
        EXPECT_TRUE(equal(s.u * m * s.v, s.s));
        EXPECT_TRUE(equal(s.u * s.u_inv, IntMatrix::identity(r)));
        EXPECT_EQ(abs(det(s.u)), 1);
        EXPECT_EQ(abs(det(s.v)), 1);
        auto d = s.diagonal();
        for (std::size_t i = 0; i < d.size(); ++i) {
            EXPECT_GE(d[i], 0);
            if (i + 1 < d.size() && d[i] != 0)
                EXPECT_TRUE(divides(d[i], d[i + 1]));
            if (d[i] == 0 && i + 1 < d.size())
                EXPECT_EQ(d[i + 1], 0);
        }
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (i != j)
                    EXPECT_EQ(s.s(i, j), 0);
    }
}

TEST(Cokernel, Examples)
{
    auto a = cokernel(IntMatrix::diagonal({2, 4}));
    EXPECT_EQ(a.torsion, group({2, 4}));
    EXPECT_EQ(a.free_rank, 0u);
    auto b = cokernel(IntMatrix{{3}, {0}});
    EXPECT_EQ(b.torsion, group({3}));
    EXPECT_EQ(b.free_rank, 1u);
    auto c = cokernel(IntMatrix(2, 0));
    EXPECT_TRUE(c.torsion.is_trivial());
    EXPECT_EQ(c.free_rank, 2u);
}

TEST(Cokernel, OrderIsAbsoluteDeterminant)
{
    oracle::Rng rng(12);
    for (int t = 0; t < 300; ++t) {
        auto n = static_cast<std::size_t>(rng.uniform(1, 4));
        IntMatrix m = random_matrix(rng, n, n, 12);
        Int dt = det(m);
        auto c = cokernel(m);
        if (dt == 0) {
            EXPECT_GT(c.free_rank, 0u);
        } else {
            EXPECT_EQ(c.free_rank, 0u);
            EXPECT_EQ(c.torsion.order(), abs(dt));
        }
    }
}

TEST(Cokernel, CoordinatesKillRelations)
{
    oracle::Rng rng(13);
    for (int t = 0; t < 100; ++t) {
        IntMatrix m = random_matrix(rng, 3, 4, 20);
        auto q = cokernel_with_maps(m);
        for (std::size_t j = 0; j < m.cols(); ++j)
            EXPECT_TRUE(q.is_zero(m.column(j)));
        auto const& d = q.group.invariant_factors();
        for (std::size_t s = 0; s < d.size(); ++s) {
            auto c = q.coords(q.lifts.column(s));
            for (std::size_t i = 0; i < c.size(); ++i)
                EXPECT_EQ(c[i], i == s ? 1 : 0);
        }
    }
}

TEST(FinAbGroup, NormalizesAndRejects)
{
    EXPECT_EQ(FinAbGroup::from_orders({6, 4}), group({2, 12}));
    EXPECT_EQ(FinAbGroup::from_orders({1, 1}), FinAbGroup::trivial());
    EXPECT_THROW(group({4, 6}), invalid_input);
    EXPECT_THROW(group({1, 3}), invalid_input);
    EXPECT_EQ(group({3, 9}).to_string(), "Z/3 x Z/9");
    EXPECT_EQ(FinAbGroup::trivial().to_string(), "1");
    EXPECT_EQ(group({3, 9}).order(), 27);
}

TEST(EllSylow, Examples)
{
    EXPECT_EQ(ell_sylow(group({6, 12}), Int(3)), group({3, 3}));
    EXPECT_TRUE(ell_sylow(group({4}), Int(3)).is_trivial());
    EXPECT_EQ(ell_sylow(group({9}), Int(3)), group({9}));
}

TEST(AlternatingSquare, Examples)
{
    EXPECT_TRUE(alternating_square(group({7})).group.is_trivial());
    EXPECT_EQ(alternating_square(group({3, 3})).group, group({3}));
    EXPECT_EQ(alternating_square(group({3, 9})).group, group({3}));
}

TEST(AlternatingSquare, OrderIsProductOfPairGcds)
{
    oracle::Rng rng(14);
    for (int t = 0; t < 200; ++t) {
        std::vector<long> d{rng.uniform(2, 6)};
        for (long k = rng.uniform(0, 4); k > 0; --k)
            d.push_back(d.back() * rng.uniform(1, 3));
        Int expect = 1;
        for (std::size_t i = 0; i < d.size(); ++i)
            for (std::size_t j = i + 1; j < d.size(); ++j)
                expect *= std::gcd(d[i], d[j]);
        EXPECT_EQ(alternating_square(group(d)).group.order(), expect);
    }
}

TEST(InducedAltMap, Examples)
{
    auto g = group({3, 3});
    auto id = induced_alt_map(GroupHom::identity(g));
    EXPECT_TRUE(equal(id.matrix, IntMatrix::identity(1)));

    GroupHom incl{group({3}), g, IntMatrix{{1}, {0}}};
    auto z = induced_alt_map(incl);
    EXPECT_EQ(z.matrix.cols(), 0u);

    GroupHom swap{g, g, IntMatrix{{0, 1}, {1, 0}}};
    auto neg = induced_alt_map(swap);
    EXPECT_EQ(neg.matrix(0, 0), 2); // -1 mod 3
}

TEST(InducedAltMap, RejectsMalformedHom)
{
    GroupHom bad{group({3}), group({9}), IntMatrix{{1}}};
    EXPECT_THROW(induced_alt_map(bad), invalid_input);
}

TEST(KnotGroup, Examples)
{
    auto g = group({3, 3});
    GroupHom c1{group({3}), g, IntMatrix{{1}, {0}}};
    GroupHom c2{group({3}), g, IntMatrix{{0}, {1}}};
    EXPECT_EQ(knot_group(g, {c1, c2}), group({3}));
    EXPECT_TRUE(knot_group(g, {GroupHom::identity(g)}).is_trivial());
    auto cyc = group({27});
    EXPECT_TRUE(knot_group(cyc, {GroupHom::identity(cyc)}).is_trivial());
    EXPECT_TRUE(knot_group(cyc, {}).is_trivial());
}

TEST(KnotGroup, RejectsMismatchedCodomain)
{
    GroupHom h{group({3}), group({3}), IntMatrix{{1}}};
    EXPECT_THROW(knot_group(group({3, 3}), {h}), invalid_input);
}

TEST(KnotGroup, MatchesBruteForceOnSmallGroups)
{
    oracle::Rng rng(15);
    for (int t = 0; t < 60; ++t) {
        std::vector<long> d{rng.pick(std::vector<long>{2, 3, 4})};
        for (long k = rng.uniform(1, 3); k > 0; --k)
            d.push_back(d.back() * rng.pick(std::vector<long>{1, 1, 2}));
        auto g = group(d);
        std::vector<std::vector<std::vector<long>>> subs(static_cast<std::size_t>(rng.uniform(0, 3)));
        std::vector<GroupHom> homs;
        for (auto& s : subs) {
            s.resize(static_cast<std::size_t>(rng.uniform(1, 2)));
            std::vector<std::vector<Int>> imgs;
            for (auto& v : s) {
                std::vector<Int> x;
                for (long di : d) {
                    v.push_back(rng.uniform(0, di - 1));
                    x.emplace_back(v.back());
                }
                imgs.push_back(x);
            }
            homs.push_back(subgroup_hom(g, imgs));
        }
        auto k = knot_group(g, homs);
        std::vector<long> kd;
        for (auto const& f : k.invariant_factors())
            kd.push_back(f.get_si());
        EXPECT_EQ(oracle::order_histogram(kd), oracle::knot_group_histogram(d, subs));
    }
}
