#pragma once

// Finitely generated abelian groups: exact integer matrices, Smith normal
// form, cokernels with coordinate maps, l-primary parts, alternating squares
// and the knot-group quotient (G ^ G) / sum_v phi_v(G_v ^ G_v).

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qiw/bigint.hpp"
#include "qiw/errors.hpp"

namespace qiw {

class IntMatrix
{
    std::size_t nrows = 0;
    std::size_t ncols = 0;
    std::vector<Int> data;

  public:
    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c) : nrows(r), ncols(c), data(r * c, Int(0)) {}
    IntMatrix(std::initializer_list<std::initializer_list<long>> init)
    {
        nrows = init.size();
        ncols = nrows ? init.begin()->size() : 0;
        data.reserve(nrows * ncols);
        for (auto const& row : init) {
            if (row.size() != ncols)
                throw invalid_input("IntMatrix: ragged initializer");
            for (long x : row)
                data.emplace_back(x);
        }
    }

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    static IntMatrix diagonal(std::vector<Int> const& d)
    {
        IntMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i)
            m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return nrows; }
    std::size_t cols() const { return ncols; }

    Int& operator()(std::size_t i, std::size_t j) { return data[i * ncols + j]; }
    Int const& operator()(std::size_t i, std::size_t j) const { return data[i * ncols + j]; }

    bool operator==(IntMatrix const&) const = default;

    bool is_zero() const
    {
        return std::all_of(data.begin(), data.end(), [](Int const& x) { return x == 0; });
    }

    IntMatrix transpose() const
    {
        IntMatrix t(ncols, nrows);
        for (std::size_t i = 0; i < nrows; ++i)
            for (std::size_t j = 0; j < ncols; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    // Horizontal concatenation [A | B].
    IntMatrix hcat(IntMatrix const& b) const
    {
        if (b.nrows != nrows)
            throw invalid_input("IntMatrix::hcat: row count mismatch");
        IntMatrix out(nrows, ncols + b.ncols);
        for (std::size_t i = 0; i < nrows; ++i) {
            for (std::size_t j = 0; j < ncols; ++j)
                out(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < b.ncols; ++j)
                out(i, ncols + j) = b(i, j);
        }
        return out;
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t j = 0; j < ncols; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }

    void swap_cols(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t i = 0; i < nrows; ++i)
            std::swap((*this)(i, a), (*this)(i, b));
    }

    // row[dst] += q * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, Int const& q)
    {
        if (q == 0)
            return;
        for (std::size_t j = 0; j < ncols; ++j)
            (*this)(dst, j) += q * (*this)(src, j);
    }

    void add_col_multiple(std::size_t dst, std::size_t src, Int const& q)
    {
        if (q == 0)
            return;
        for (std::size_t i = 0; i < nrows; ++i)
            (*this)(i, dst) += q * (*this)(i, src);
    }

    void negate_row(std::size_t r)
    {
        for (std::size_t j = 0; j < ncols; ++j)
            (*this)(r, j) = -(*this)(r, j);
    }

    void negate_col(std::size_t c)
    {
        for (std::size_t i = 0; i < nrows; ++i)
            (*this)(i, c) = -(*this)(i, c);
    }

    std::vector<Int> column(std::size_t j) const
    {
        std::vector<Int> v(nrows);
        for (std::size_t i = 0; i < nrows; ++i)
            v[i] = (*this)(i, j);
        return v;
    }

    std::vector<Int> apply(std::vector<Int> const& x) const
    {
        if (x.size() != ncols)
            throw invalid_input("IntMatrix::apply: dimension mismatch");
        std::vector<Int> y(nrows, Int(0));
        for (std::size_t i = 0; i < nrows; ++i)
            for (std::size_t j = 0; j < ncols; ++j)
                y[i] += (*this)(i, j) * x[j];
        return y;
    }
};

inline IntMatrix operator*(IntMatrix const& a, IntMatrix const& b)
{
    if (a.cols() != b.rows())
        throw invalid_input("IntMatrix product: dimension mismatch");
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0)
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

inline std::ostream& operator<<(std::ostream& os, IntMatrix const& m)
{
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << (j ? ", " : "") << m(i, j);
        os << ']';
    }
    return os << ']';
}

struct SnfResult
{
    IntMatrix s;     // diagonal, s_1 | s_2 | ..., s_i >= 0
    IntMatrix u;     // unimodular, u * m * v == s
    IntMatrix v;     // unimodular
    IntMatrix u_inv; // inverse of u

    std::vector<Int> diagonal() const
    {
        std::vector<Int> d;
        for (std::size_t i = 0; i < std::min(s.rows(), s.cols()); ++i)
            d.push_back(s(i, i));
        return d;
    }
};

// Exact Smith normal form. Pivoting always moves the entry of least absolute
// value into the pivot position, which keeps intermediate entries small.
inline SnfResult smith_normal_form(IntMatrix const& m)
{
    std::size_t const nr = m.rows();
    std::size_t const nc = m.cols();
    SnfResult r{m, IntMatrix::identity(nr), IntMatrix::identity(nc), IntMatrix::identity(nr)};
    IntMatrix& s = r.s;

    // Row operations are mirrored on u (left) and inversely on u_inv (right).
    auto row_swap = [&](std::size_t a, std::size_t b) {
        s.swap_rows(a, b);
        r.u.swap_rows(a, b);
        r.u_inv.swap_cols(a, b);
    };
    auto row_add = [&](std::size_t dst, std::size_t src, Int const& q) {
        s.add_row_multiple(dst, src, q);
        r.u.add_row_multiple(dst, src, q);
        r.u_inv.add_col_multiple(src, dst, -q);
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        s.swap_cols(a, b);
        r.v.swap_cols(a, b);
    };
    auto col_add = [&](std::size_t dst, std::size_t src, Int const& q) {
        s.add_col_multiple(dst, src, q);
        r.v.add_col_multiple(dst, src, q);
    };

    std::size_t const n = std::min(nr, nc);
    for (std::size_t t = 0; t < n; ++t) {
        // Smallest nonzero entry of the trailing block.
        bool found = false;
        std::size_t pi = t, pj = t;
        Int best;
        for (std::size_t i = t; i < nr; ++i)
            for (std::size_t j = t; j < nc; ++j) {
                if (s(i, j) == 0)
                    continue;
                Int a = abs(s(i, j));
                if (!found || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        if (!found)
            break;
        row_swap(t, pi);
        col_swap(t, pj);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < nr; ++i) {
                if (s(i, t) == 0)
                    continue;
                Int q = floor_div(s(i, t), s(t, t));
                row_add(i, t, -q);
                if (s(i, t) != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < nc; ++j) {
                if (s(t, j) == 0)
                    continue;
                Int q = floor_div(s(t, j), s(t, t));
                col_add(j, t, -q);
                if (s(t, j) != 0)
                    clean = false;
            }
            if (!clean) {
                // A nonzero remainder is smaller than the pivot; promote it.
                std::size_t bi = t, bj = t;
                Int b = abs(s(t, t));
                for (std::size_t i = t + 1; i < nr; ++i)
                    if (s(i, t) != 0 && abs(s(i, t)) < b) {
                        b = abs(s(i, t));
                        bi = i;
                        bj = t;
                    }
                for (std::size_t j = t + 1; j < nc; ++j)
                    if (s(t, j) != 0 && abs(s(t, j)) < b) {
                        b = abs(s(t, j));
                        bi = t;
                        bj = j;
                    }
                row_swap(t, bi);
                col_swap(t, bj);
                continue;
            }
            // Row and column are clear: enforce divisibility of the block.
            bool divisible = true;
            for (std::size_t i = t + 1; i < nr && divisible; ++i)
                for (std::size_t j = t + 1; j < nc; ++j)
                    if (!divides(s(t, t), s(i, j))) {
                        row_add(t, i, Int(1));
                        divisible = false;
                        break;
                    }
            if (divisible)
                break;
        }
        if (s(t, t) < 0) {
            s.negate_row(t);
            r.u.negate_row(t);
            r.u_inv.negate_col(t);
        }
    }
    return r;
}

// Finite abelian group in invariant-factor form d_1 | d_2 | ... | d_k, d_i >= 2.
class FinAbGroup
{
    std::vector<Int> factors;
    std::vector<std::string> names;

  public:
    FinAbGroup() = default;

    // Accepts factors already in invariant-factor form (labels optional).
    explicit FinAbGroup(std::vector<Int> invariant_factors, std::vector<std::string> labels = {})
        : factors(std::move(invariant_factors)), names(std::move(labels))
    {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factors[i] < 2)
                throw invalid_input("FinAbGroup: invariant factor " + factors[i].get_str() + " < 2");
            if (i && !divides(factors[i - 1], factors[i]))
                throw invalid_input("FinAbGroup: divisibility chain broken at " + factors[i].get_str());
        }
        if (!names.empty() && names.size() != factors.size())
            throw invalid_input("FinAbGroup: label count mismatch");
    }

    // Normalizes an arbitrary direct sum of cyclic groups Z/n_1 + ... (n_i >= 1).
    static FinAbGroup from_orders(std::vector<Int> const& orders);

    static FinAbGroup trivial() { return FinAbGroup{}; }

    std::vector<Int> const& invariant_factors() const { return factors; }
    std::vector<std::string> const& labels() const { return names; }
    std::size_t rank() const { return factors.size(); }
    bool is_trivial() const { return factors.empty(); }

    Int order() const
    {
        Int o = 1;
        for (auto const& d : factors)
            o *= d;
        return o;
    }

    Int exponent() const { return factors.empty() ? Int(1) : factors.back(); }

    // Equality ignores labels.
    bool operator==(FinAbGroup const& o) const { return factors == o.factors; }

    std::string to_string() const
    {
        if (factors.empty())
            return "1";
        std::string s;
        for (std::size_t i = 0; i < factors.size(); ++i)
            s += (i ? " x Z/" : "Z/") + factors[i].get_str();
        return s;
    }

    // "3;9" style list, "" for the trivial group.
    std::string factor_list(char sep = ';') const
    {
        std::string s;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (i)
                s += sep;
            s += factors[i].get_str();
        }
        return s;
    }
};

inline std::ostream& operator<<(std::ostream& os, FinAbGroup const& g) { return os << g.to_string(); }

// Z^n / (column lattice), with coordinate maps.
// to_coords (k x n) sends a vector of Z^n to its coordinates on the invariant
// generators (entry t taken mod d_t, free coordinates in the trailing rows);
// lifts (n x k) has the t-th invariant generator as its t-th column.
struct Quotient
{
    FinAbGroup group;
    std::size_t free_rank = 0;
    IntMatrix to_coords;
    IntMatrix free_coords;
    IntMatrix lifts;

    std::vector<Int> coords(std::vector<Int> const& x) const
    {
        auto y = to_coords.apply(x);
        auto const& d = group.invariant_factors();
        for (std::size_t t = 0; t < y.size(); ++t)
            y[t] = mod(y[t], d[t]);
        return y;
    }

    bool is_zero(std::vector<Int> const& x) const
    {
        for (auto const& c : coords(x))
            if (c != 0)
                return false;
        for (auto const& c : free_coords.apply(x))
            if (c != 0)
                return false;
        return true;
    }
};

inline Quotient cokernel_with_maps(IntMatrix const& m)
{
    std::size_t const n = m.rows();
    auto snf = smith_normal_form(m);
    auto d = snf.diagonal();
    d.resize(n, Int(0));

    std::vector<std::size_t> tors, free;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] == 0)
            free.push_back(i);
        else if (d[i] != 1)
            tors.push_back(i);
    }
    Quotient q;
    std::vector<Int> f;
    q.to_coords = IntMatrix(tors.size(), n);
    q.lifts = IntMatrix(n, tors.size());
    for (std::size_t t = 0; t < tors.size(); ++t) {
        f.push_back(d[tors[t]]);
        for (std::size_t j = 0; j < n; ++j) {
            q.to_coords(t, j) = snf.u(tors[t], j);
            q.lifts(j, t) = snf.u_inv(j, tors[t]);
        }
    }
    q.group = FinAbGroup(f);
    q.free_rank = free.size();
    q.free_coords = IntMatrix(free.size(), n);
    for (std::size_t t = 0; t < free.size(); ++t)
        for (std::size_t j = 0; j < n; ++j)
            q.free_coords(t, j) = snf.u(free[t], j);
    return q;
}

struct CokernelResult
{
    FinAbGroup torsion;
    std::size_t free_rank = 0;
};

// Cokernel of the column lattice of m inside Z^rows.
inline CokernelResult cokernel(IntMatrix const& m)
{
    auto q = cokernel_with_maps(m);
    return {q.group, q.free_rank};
}

inline FinAbGroup FinAbGroup::from_orders(std::vector<Int> const& orders)
{
    for (auto const& o : orders)
        if (o < 1)
            throw invalid_input("FinAbGroup::from_orders: order must be >= 1");
    auto c = cokernel(IntMatrix::diagonal(orders));
    return c.torsion;
}

// l-primary part of a finite quotient, with coordinate maps restricted to it.
inline Quotient ell_part(Quotient const& q, Int const& ell)
{
    if (q.free_rank)
        throw invalid_input("ell_part: quotient has a free part");
    auto const& d = q.group.invariant_factors();
    std::size_t const n = q.to_coords.cols();
    std::vector<std::size_t> keep;
    std::vector<Int> f;
    for (std::size_t t = 0; t < d.size(); ++t) {
        long a = valuation(d[t], ell);
        if (a > 0) {
            keep.push_back(t);
            f.push_back(pow_int(ell, static_cast<unsigned long>(a)));
        }
    }
    Quotient out;
    out.group = FinAbGroup(f);
    out.to_coords = IntMatrix(keep.size(), n);
    out.lifts = IntMatrix(n, keep.size());
    out.free_coords = IntMatrix(0, n);
    for (std::size_t s = 0; s < keep.size(); ++s) {
        std::size_t t = keep[s];
        Int prime_to = d[t] / f[s];
        // c = 1 mod l^a, c = 0 mod prime_to
        Int c = prime_to * invmod(prime_to, f[s]);
        for (std::size_t j = 0; j < n; ++j) {
            out.to_coords(s, j) = q.to_coords(t, j);
            out.lifts(j, s) = c * q.lifts(j, t);
        }
    }
    return out;
}

inline FinAbGroup ell_sylow(FinAbGroup const& g, Int const& ell)
{
    if (!is_prime(ell))
        throw invalid_input("ell prime", "ell_sylow: " + ell.get_str() + " is not prime");
    std::vector<Int> f;
    for (auto const& d : g.invariant_factors()) {
        long a = valuation(d, ell);
        if (a > 0)
            f.push_back(pow_int(ell, static_cast<unsigned long>(a)));
    }
    return FinAbGroup(f);
}

// Does q occur as a quotient-shaped group of g: aligned from the largest
// factor down, each factor of q divides the corresponding factor of g.
inline bool factors_divide(FinAbGroup const& q, FinAbGroup const& g)
{
    auto const& a = q.invariant_factors();
    auto const& b = g.invariant_factors();
    if (a.size() > b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!divides(a[a.size() - 1 - i], b[b.size() - 1 - i]))
            return false;
    return true;
}

// Homomorphism between finite abelian groups given on invariant generators:
// column j is the image of the j-th domain generator.
struct GroupHom
{
    FinAbGroup domain;
    FinAbGroup codomain;
    IntMatrix matrix;

    // Column j times the order of generator j must vanish in the codomain.
    bool is_well_formed() const
    {
        if (matrix.rows() != codomain.rank() || matrix.cols() != domain.rank())
            return false;
        auto const& a = domain.invariant_factors();
        auto const& b = codomain.invariant_factors();
        for (std::size_t j = 0; j < a.size(); ++j)
            for (std::size_t i = 0; i < b.size(); ++i)
                if (!divides(b[i], a[j] * matrix(i, j)))
                    return false;
        return true;
    }

    void validate() const
    {
        if (!is_well_formed())
            throw invalid_input("GroupHom: matrix does not respect generator orders");
    }

    std::vector<Int> operator()(std::vector<Int> const& x) const
    {
        auto y = matrix.apply(x);
        auto const& b = codomain.invariant_factors();
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = mod(y[i], b[i]);
        return y;
    }

    static GroupHom identity(FinAbGroup const& g) { return {g, g, IntMatrix::identity(g.rank())}; }
};

struct AltSquare
{
    FinAbGroup group;
    // generator t of `group` is e_i ^ e_j for pairs[t] = (i, j), i < j
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    std::size_t index_of(std::size_t i, std::size_t j) const
    {
        for (std::size_t t = 0; t < pairs.size(); ++t)
            if (pairs[t] == std::make_pair(i, j))
                return t;
        throw invalid_input("AltSquare: no such pair");
    }
};

// Lambda^2 of Z/d_1 + ... + Z/d_k is the sum over i < j of Z/gcd(d_i, d_j) =
// Z/d_i. Listing pairs lexicographically already gives a divisibility chain.
inline AltSquare alternating_square(FinAbGroup const& g)
{
    auto const& d = g.invariant_factors();
    AltSquare a;
    std::vector<Int> f;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            a.pairs.emplace_back(i, j);
            f.push_back(gcd_int(d[i], d[j]));
            labels.push_back("e" + std::to_string(i + 1) + "^e" + std::to_string(j + 1));
        }
    a.group = FinAbGroup(f, labels);
    return a;
}

// Lambda^2(phi) on the pair bases: phi(e_p) ^ phi(e_q) expanded bilinearly.
inline GroupHom induced_alt_map(GroupHom const& phi)
{
    phi.validate();
    auto src = alternating_square(phi.domain);
    auto dst = alternating_square(phi.codomain);
    IntMatrix m(dst.pairs.size(), src.pairs.size());
    for (std::size_t c = 0; c < src.pairs.size(); ++c) {
        auto [p, q] = src.pairs[c];
        for (std::size_t r = 0; r < dst.pairs.size(); ++r) {
            auto [i, j] = dst.pairs[r];
            Int v = phi.matrix(i, p) * phi.matrix(j, q) - phi.matrix(j, p) * phi.matrix(i, q);
            m(r, c) = mod(v, dst.group.invariant_factors()[r]);
        }
    }
    return {src.group, dst.group, std::move(m)};
}

// K = (G ^ G) / sum_v image(Lambda^2 phi_v).
inline FinAbGroup knot_group(FinAbGroup const& g, std::vector<GroupHom> const& decomposition)
{
    auto alt = alternating_square(g);
    std::size_t const n = alt.pairs.size();
    IntMatrix rel = IntMatrix::diagonal(alt.group.invariant_factors());
    for (auto const& phi : decomposition) {
        if (!(phi.codomain == g))
            throw invalid_input("knot_group: decomposition map has codomain " + phi.codomain.to_string() +
                                ", expected " + g.to_string());
        auto lam = induced_alt_map(phi);
        if (lam.matrix.cols() == 0)
            continue;
        rel = rel.hcat(lam.matrix);
    }
    if (n == 0)
        return FinAbGroup::trivial();
    return cokernel(rel).torsion;
}

} // namespace qiw
