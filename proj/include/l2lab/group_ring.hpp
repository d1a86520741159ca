#pragma once

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "l2lab/group.hpp"
#include "l2lab/scalar.hpp"

namespace l2lab {

// Finitely supported function G -> C in normal form: terms sorted by the
// family total order, coefficients nonzero (float mode: above the drop floor).
template <class C>
struct RElem {
    std::vector<std::pair<GroupElement, C>> terms;
};

template <class C>
using TermMap = std::unordered_map<GroupElement, C, ElemHash>;

template <class C>
void normalize_terms(std::vector<std::pair<GroupElement, C>>& t, double floor = scalar_traits<C>::drop_floor) {
    std::sort(t.begin(), t.end(),
              [](const auto& a, const auto& b) { return element_less(a.first, b.first); });
    size_t w = 0;
    for (size_t r = 0; r < t.size();) {
        size_t r2 = r + 1;
        C acc = t[r].second;
        while (r2 < t.size() && t[r2].first == t[r].first) acc += t[r2++].second;
        bool keep = scalar_traits<C>::exact ? !is_zero(acc) : abs_c(acc) >= floor && !is_zero(acc);
        if (keep) t[w++] = {std::move(t[r].first), std::move(acc)};
        r = r2;
    }
    t.resize(w);
}

template <class C>
RElem<C> r_elem(const Group& g, std::vector<std::pair<GroupElement, C>> terms) {
    for (auto& [e, c] : terms) validate_element(g, e);
    normalize_terms(terms);
    return RElem<C>{std::move(terms)};
}

template <class C>
RElem<C> r_zero() { return RElem<C>{}; }

template <class C>
RElem<C> r_one(const Group& g) { return RElem<C>{{{identity(g), C(1)}}}; }

template <class C>
RElem<C> r_scalar(const Group& g, C a) {
    if (is_zero(a)) return {};
    return RElem<C>{{{identity(g), std::move(a)}}};
}

template <class C>
RElem<C> radd(const RElem<C>& u, const RElem<C>& v) {
    std::vector<std::pair<GroupElement, C>> t;
    t.reserve(u.terms.size() + v.terms.size());
    t.insert(t.end(), u.terms.begin(), u.terms.end());
    t.insert(t.end(), v.terms.begin(), v.terms.end());
    normalize_terms(t);
    return RElem<C>{std::move(t)};
}

template <class C>
RElem<C> rscale(const RElem<C>& u, const C& a) {
    if (is_zero(a)) return {};
    RElem<C> out;
    out.terms.reserve(u.terms.size());
    for (const auto& [e, c] : u.terms) {
        C p = c * a;
        if (!is_zero(p)) out.terms.emplace_back(e, std::move(p));
    }
    return out;
}

template <class C>
RElem<C> rsub(const RElem<C>& u, const RElem<C>& v) { return radd(u, rscale(v, C(-1))); }

// Convolution product. Accumulation order is the sorted order of both factors,
// so float-mode sums are reproducible.
template <class C>
RElem<C> rmul(const Group& g, const RElem<C>& u, const RElem<C>& v) {
    TermMap<C> acc;
    acc.reserve(u.terms.size() * 2 + v.terms.size());
    for (const auto& [a, ca] : u.terms)
        for (const auto& [b, cb] : v.terms) {
            C p = ca * cb;
            if (is_zero(p)) continue;
            acc[compose(g, a, b)] += p;
        }
    std::vector<std::pair<GroupElement, C>> t(acc.begin(), acc.end());
    normalize_terms(t);
    return RElem<C>{std::move(t)};
}

// u* = sum conj(coeff) g^{-1}
template <class C>
RElem<C> involute(const Group& g, const RElem<C>& u) {
    std::vector<std::pair<GroupElement, C>> t;
    t.reserve(u.terms.size());
    for (const auto& [e, c] : u.terms) t.emplace_back(invert(g, e), conj_c(c));
    normalize_terms(t);
    return RElem<C>{std::move(t)};
}

// von Neumann trace restricted to the group ring: the identity coefficient
template <class C>
C trace_cg(const Group& g, const RElem<C>& u) {
    GroupElement e = identity(g);
    auto it = std::lower_bound(u.terms.begin(), u.terms.end(), e,
                               [](const auto& t, const GroupElement& x) { return element_less(t.first, x); });
    if (it != u.terms.end() && it->first == e) return it->second;
    return C(0);
}

template <class C>
double one_norm(const RElem<C>& u) {
    double s = 0;
    for (const auto& [e, c] : u.terms) s += abs_c(c);
    return s;
}

// Exact rational upper bound for the l1 norm (exact for real coefficients);
// keeps K bounds exact in exact mode.
inline Rational one_norm_bound(const RElem<ExactC>& u) {
    Rational s = 0;
    for (const auto& [e, c] : u.terms) s += abs_bound(c);
    return s;
}

inline double one_norm_bound(const RElem<FloatC>& u) { return one_norm(u); }

template <class C>
bool relem_eq(const RElem<C>& u, const RElem<C>& v) { return u.terms == v.terms; }

inline RElem<FloatC> to_float(const Group&, const RElem<ExactC>& u) {
    RElem<FloatC> out;
    out.terms.reserve(u.terms.size());
    for (const auto& [e, c] : u.terms) out.terms.emplace_back(e, to_float(c));
    return out;
}

}  // namespace l2lab
