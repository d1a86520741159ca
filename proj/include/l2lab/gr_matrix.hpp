#pragma once

#include "l2lab/group_ring.hpp"

namespace l2lab {

// rows x cols matrix over the group ring, row-major. Acts on row vectors by
// right multiplication: r_A : N(G)^rows -> N(G)^cols.
template <class C>
struct GRMat {
    Group g;
    int rows = 0, cols = 0;
    std::vector<RElem<C>> e;  // size rows*cols

    RElem<C>& at(int i, int j) { return e[static_cast<size_t>(i) * cols + j]; }
    const RElem<C>& at(int i, int j) const { return e[static_cast<size_t>(i) * cols + j]; }
};

template <class C>
GRMat<C> mat_zero(const Group& g, int rows, int cols) {
    GRMat<C> m{g, rows, cols, {}};
    m.e.assign(static_cast<size_t>(rows) * cols, RElem<C>{});
    return m;
}

template <class C>
GRMat<C> mat_identity(const Group& g, int n) {
    GRMat<C> m = mat_zero<C>(g, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = r_one<C>(g);
    return m;
}

template <class C>
GRMat<C> mat_mul(const GRMat<C>& a, const GRMat<C>& b) {
    if (a.cols != b.rows) throw ValidationError("matrix product shape mismatch");
    GRMat<C> out = mat_zero<C>(a.g, a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const RElem<C>& aik = a.at(i, k);
            if (aik.terms.empty()) continue;
            for (int j = 0; j < b.cols; ++j) {
                if (b.at(k, j).terms.empty()) continue;
                out.at(i, j) = radd(out.at(i, j), rmul(a.g, aik, b.at(k, j)));
            }
        }
    return out;
}

template <class C>
GRMat<C> mat_add(const GRMat<C>& a, const GRMat<C>& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ValidationError("matrix sum shape mismatch");
    GRMat<C> out = a;
    for (size_t i = 0; i < out.e.size(); ++i) out.e[i] = radd(a.e[i], b.e[i]);
    return out;
}

template <class C>
GRMat<C> mat_sub(const GRMat<C>& a, const GRMat<C>& b) {
    if (a.rows != b.rows || a.cols != b.cols) throw ValidationError("matrix difference shape mismatch");
    GRMat<C> out = a;
    for (size_t i = 0; i < out.e.size(); ++i) out.e[i] = rsub(a.e[i], b.e[i]);
    return out;
}

template <class C>
GRMat<C> mat_scale(const GRMat<C>& a, const C& s) {
    GRMat<C> out = a;
    for (auto& x : out.e) x = rscale(x, s);
    return out;
}

// A† : transpose + entrywise involution. (A†)† = A, (AB)† = B†A†.
template <class C>
GRMat<C> adjoint(const GRMat<C>& a) {
    GRMat<C> out = mat_zero<C>(a.g, a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) out.at(j, i) = involute(a.g, a.at(i, j));
    return out;
}

template <class C>
C mat_trace(const GRMat<C>& a) {
    if (a.rows != a.cols) throw ValidationError("trace of a non-square matrix");
    C s(0);
    for (int i = 0; i < a.rows; ++i) s += trace_cg(a.g, a.at(i, i));
    return s;
}

template <class C>
bool mat_is_zero(const GRMat<C>& a) {
    for (const auto& x : a.e)
        if (!x.terms.empty()) return false;
    return true;
}

// Spectral bound K from the presentation: K^2 = (2*cols - 1) * rows * max_ij ||a_ij||_1^2.
// Exact mode bounds each |coeff| by |re|+|im| so the result stays rational.
// The zero matrix gets K^2 = 1 (any positive K is admissible for it).
template <class C>
struct KBound {
    typename scalar_traits<C>::real_type k_squared;
    bool user_asserted = false;
};

template <class C>
KBound<C> k_bound(const GRMat<C>& a) {
    using R = typename scalar_traits<C>::real_type;
    R mx(0);
    for (const auto& x : a.e) {
        R n = one_norm_bound(x);
        if (n > mx) mx = n;
    }
    if (mx == R(0)) return {R(1), false};
    R k2 = R(2 * a.cols - 1) * R(a.rows) * mx * mx;
    return {k2, false};
}

template <class C>
GRMat<C> mat_adjoint_gram(const GRMat<C>& a) {  // A A† : rows x rows
    return mat_mul(a, adjoint(a));
}

inline GRMat<FloatC> to_float(const GRMat<ExactC>& a) {
    GRMat<FloatC> out{a.g, a.rows, a.cols, {}};
    out.e.reserve(a.e.size());
    for (const auto& x : a.e) out.e.push_back(to_float(a.g, x));
    return out;
}

}  // namespace l2lab
