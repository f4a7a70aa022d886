#pragma once

// Text input for knot-group computations:
//
//   # comment
//   G: 3,3
//   v1: 1,0
//   v2: 0,1; 1,1
//
// The G line lists invariant factors. Each further line describes one
// decomposition subgroup by the images in G of its generators (exponent
// vectors separated by ';'), optionally prefixed by a label and ':'. The
// subgroup is taken as the direct sum of the cyclic groups generated by the
// images.

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "qiw/abelian.hpp"
#include "qiw/bigint.hpp"
#include "qiw/errors.hpp"

namespace qiw {

struct KnotInput
{
    FinAbGroup g;
    std::vector<std::string> labels;
    std::vector<GroupHom> decomposition;
};

namespace detail {

inline std::string trim(std::string const& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<Int> parse_int_list(std::string const& s, long lineno)
{
    std::vector<Int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw invalid_input("line " + std::to_string(lineno) + ": empty entry in '" + s + "'");
        Int v;
        if (v.set_str(item, 10) != 0)
            throw invalid_input("line " + std::to_string(lineno) + ": '" + item + "' is not an integer");
        out.push_back(v);
    }
    return out;
}

// Order of x in sum Z/d_i.
inline Int element_order(std::vector<Int> const& x, std::vector<Int> const& d)
{
    Int o = 1;
    for (std::size_t i = 0; i < d.size(); ++i)
        o = lcm_int(o, d[i] / gcd_int(d[i], mod(x[i], d[i])));
    return o;
}

} // namespace detail

// Homomorphism sum_j Z/ord(v_j) -> G, e_j -> v_j, rewritten on the invariant
// generators of the domain.
inline GroupHom subgroup_hom(FinAbGroup const& g, std::vector<std::vector<Int>> const& images)
{
    auto const& d = g.invariant_factors();
    std::vector<Int> orders;
    for (auto const& v : images) {
        if (v.size() != d.size())
            throw invalid_input("subgroup_hom: image has " + std::to_string(v.size()) + " coordinates, G has rank " +
                                std::to_string(d.size()));
        orders.push_back(detail::element_order(v, d));
    }
    auto q = cokernel_with_maps(IntMatrix::diagonal(orders));
    IntMatrix img(d.size(), images.size());
    for (std::size_t j = 0; j < images.size(); ++j)
        for (std::size_t i = 0; i < d.size(); ++i)
            img(i, j) = images[j][i];
    IntMatrix m = img * q.lifts;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(i, j) = mod(m(i, j), d[i]);
    GroupHom h{q.group, g, m};
    h.validate();
    return h;
}

inline KnotInput parse_knot_input(std::istream& in)
{
    KnotInput out;
    bool have_g = false;
    std::string raw;
    long lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = detail::trim(raw.substr(0, raw.find('#')));
        if (line.empty())
            continue;
        std::string label, body = line;
        auto colon = line.find(':');
        if (colon != std::string::npos) {
            label = detail::trim(line.substr(0, colon));
            body = detail::trim(line.substr(colon + 1));
        }
        if (!have_g) {
            if (label != "G")
                throw invalid_input("line " + std::to_string(lineno) + ": expected 'G: d1,d2,...' first");
            auto f = detail::parse_int_list(body, lineno);
            try {
                out.g = FinAbGroup(f);
            } catch (invalid_input const& e) {
                throw invalid_input("line " + std::to_string(lineno) + ": " + e.what());
            }
            have_g = true;
            continue;
        }
        std::vector<std::vector<Int>> images;
        std::stringstream ss(body);
        std::string vec;
        while (std::getline(ss, vec, ';'))
            images.push_back(detail::parse_int_list(detail::trim(vec), lineno));
        if (images.empty())
            throw invalid_input("line " + std::to_string(lineno) + ": no generator images");
        try {
            out.decomposition.push_back(subgroup_hom(out.g, images));
        } catch (invalid_input const& e) {
            throw invalid_input("line " + std::to_string(lineno) + ": " + e.what());
        }
        out.labels.push_back(label.empty() ? "v" + std::to_string(out.labels.size() + 1) : label);
    }
    if (!have_g)
        throw invalid_input("knot input: missing 'G:' line");
    return out;
}

} // namespace qiw
