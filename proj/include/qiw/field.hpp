#pragma once

// Quadratic fields K = Q(sqrt(D)), D a fundamental discriminant, and their
// elements in the integral basis (1, w), w = (D + sqrt(D)) / 2.

#include <array>
#include <cmath>
#include <ostream>
#include <string>

#include "qiw/bigint.hpp"
#include "qiw/errors.hpp"

namespace qiw {

inline bool is_squarefree(Int n)
{
    n = abs(n);
    if (n == 0)
        return false;
    for (Int p = 2; p * p <= n; ++p) {
        if (divides(p, n)) {
            n /= p;
            if (divides(p, n))
                return false;
        }
    }
    return true;
}

inline bool is_fundamental_discriminant(Int const& d)
{
    if (d == 0 || d == 1)
        return false;
    Int r4 = mod(d, Int(4));
    if (r4 == 1)
        return is_squarefree(d);
    if (r4 != 0)
        return false;
    Int m = d / 4;
    Int r = mod(m, Int(4));
    return (r == 2 || r == 3) && is_squarefree(m);
}

struct FieldDesc
{
    Int disc;
    int r = 0; // real places
    int c = 0; // complex places

    bool real() const { return disc > 0; }
    bool operator==(FieldDesc const&) const = default;
};

inline FieldDesc make_field(Int const& d)
{
    if (!is_fundamental_discriminant(d))
        throw invalid_input("fundamental discriminant", d.get_str() + " is not a fundamental discriminant");
    return d > 0 ? FieldDesc{d, 2, 0} : FieldDesc{d, 0, 1};
}

// a + b*w with rational a, b.
class QuadElem
{
    Int d;
    Rat x, y;

  public:
    QuadElem(Int disc, Rat a, Rat b = 0) : d(std::move(disc)), x(std::move(a)), y(std::move(b))
    {
        x.canonicalize();
        y.canonicalize();
    }

    static QuadElem one(Int const& disc) { return QuadElem(disc, 1); }
    static QuadElem omega(Int const& disc) { return QuadElem(disc, 0, 1); }
    // sqrt(D) = 2w - D
    static QuadElem sqrt_disc(Int const& disc) { return QuadElem(disc, Rat(-disc), 2); }

    Int const& disc() const { return d; }
    Rat const& a() const { return x; }
    Rat const& b() const { return y; }

    bool is_zero() const { return x == 0 && y == 0; }
    bool is_rational() const { return y == 0; }
    bool is_integral() const { return x.get_den() == 1 && y.get_den() == 1; }

    QuadElem conj() const { return QuadElem(d, x + y * Rat(d), -y); }
    Rat trace() const { return 2 * x + y * Rat(d); }
    Rat norm() const { return x * x + x * y * Rat(d) + y * y * Rat((d * d - d) / 4); }

    QuadElem inverse() const
    {
        if (is_zero())
            throw invalid_input("QuadElem::inverse: zero element");
        Rat n = norm();
        QuadElem c = conj();
        return QuadElem(d, c.x / n, c.y / n);
    }

    QuadElem pow(Int e) const
    {
        if (e < 0)
            return inverse().pow(-e);
        QuadElem r = one(d), base = *this;
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t()))
                r = r * base;
            e >>= 1;
            if (e > 0)
                base = base * base;
        }
        return r;
    }

    // Least common denominator of both coordinates.
    Int denominator() const { return lcm_int(x.get_den(), y.get_den()); }

    friend QuadElem operator+(QuadElem const& u, QuadElem const& v)
    {
        check(u, v);
        return QuadElem(u.d, u.x + v.x, u.y + v.y);
    }
    friend QuadElem operator-(QuadElem const& u, QuadElem const& v)
    {
        check(u, v);
        return QuadElem(u.d, u.x - v.x, u.y - v.y);
    }
    friend QuadElem operator*(QuadElem const& u, QuadElem const& v)
    {
        check(u, v);
        // w^2 = D*w - (D^2 - D)/4
        Rat bd = u.y * v.y;
        Rat c0 = Rat((u.d * u.d - u.d) / 4);
        return QuadElem(u.d, u.x * v.x - bd * c0, u.x * v.y + u.y * v.x + bd * Rat(u.d));
    }
    friend QuadElem operator/(QuadElem const& u, QuadElem const& v) { return u * v.inverse(); }
    friend QuadElem operator*(Rat const& s, QuadElem const& v) { return QuadElem(v.d, s * v.x, s * v.y); }

    friend bool operator==(QuadElem const& u, QuadElem const& v) { return u.d == v.d && u.x == v.x && u.y == v.y; }

    std::string to_string() const
    {
        if (y == 0)
            return x.get_str();
        std::string s = x == 0 ? "" : x.get_str() + (y > 0 ? "+" : "");
        return s + (y == 1 ? "" : y == -1 ? "-" : y.get_str() + "*") + "w";
    }

    friend std::ostream& operator<<(std::ostream& os, QuadElem const& v) { return os << v.to_string(); }

  private:
    static void check(QuadElem const& u, QuadElem const& v)
    {
        if (u.d != v.d)
            throw invalid_input("QuadElem: elements of different fields");
    }
};

namespace detail {

inline double log_abs(mpf_class const& v)
{
    long e = 0;
    double m = mpf_get_d_2exp(&e, v.get_mpf_t());
    return std::log(std::fabs(m)) + static_cast<double>(e) * std::log(2.0);
}

} // namespace detail

// log|s1(x)|, log|s2(x)| for a real field, s1 sending sqrt(D) to the positive
// root. The smaller embedding is recovered from the norm, so there is no
// cancellation even for huge units.
inline std::array<double, 2> log_abs_embeddings(QuadElem const& x)
{
    if (x.disc() < 0)
        throw invalid_input("log_abs_embeddings: field is imaginary");
    if (x.is_zero())
        throw invalid_input("log_abs_embeddings: zero element");
    Int den = x.denominator();
    Int a = Int(x.a() * Rat(den));
    Int b = Int(x.b() * Rat(den));
    // x = (P + Q sqrt(D)) / (2 den)
    Int p = 2 * a + b * x.disc();
    Int q = b;
    mpf_class sq(0, 256);
    mpf_class dd(x.disc(), 256);
    mpf_sqrt(sq.get_mpf_t(), dd.get_mpf_t());
    mpf_class big(abs(p), 256);
    big += mpf_class(abs(q), 256) * sq;
    double lbig = detail::log_abs(big) - detail::log_abs(mpf_class(2 * den, 256));
    double lnorm = detail::log_abs(mpf_class(abs(x.norm()), 256));
    double lsmall = lnorm - lbig;
    bool plus_is_big = sgn(p) * sgn(q) >= 0;
    return plus_is_big ? std::array<double, 2>{lbig, lsmall} : std::array<double, 2>{lsmall, lbig};
}

} // namespace qiw
