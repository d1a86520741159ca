#pragma once

#include <optional>
#include <string>
#include <vector>

#include "l2lab/estimators.hpp"
#include "l2lab/oracles.hpp"

namespace l2lab {

// Finite free chain complex over one group ring. ranks[p] is the rank of the
// degree-p module; diff[p-1] is the degree-p differential, a ranks[p] x
// ranks[p-1] matrix acting on row vectors.
template <class C>
struct ChainComplex {
    Group g;
    std::vector<int> ranks;
    std::vector<GRMat<C>> diff;

    int top() const { return static_cast<int>(ranks.size()) - 1; }
};

// Shape, group consistency and d.d = 0 at every level. Float differentials
// may leave products with entry norms up to tol.
template <class C>
void validate_complex(const ChainComplex<C>& cc, double tol = scalar_traits<C>::exact ? 0.0 : 1e-9) {
    if (cc.ranks.empty()) throw ValidationError("complex has no chain modules");
    for (int r : cc.ranks)
        if (r < 0) throw ValidationError("negative rank in complex");
    if (cc.diff.size() + 1 != cc.ranks.size())
        throw ValidationError("complex needs exactly one differential per positive degree");
    for (size_t i = 0; i < cc.diff.size(); ++i) {
        const GRMat<C>& d = cc.diff[i];
        if (!(d.g == cc.g)) throw ValidationError("differential group mismatch at degree " + std::to_string(i + 1));
        if (d.rows != cc.ranks[i + 1] || d.cols != cc.ranks[i])
            throw ValidationError("differential shape mismatch at degree " + std::to_string(i + 1));
    }
    for (size_t i = 0; i + 1 < cc.diff.size(); ++i) {
        GRMat<C> prod = mat_mul(cc.diff[i + 1], cc.diff[i]);
        for (const auto& e : prod.e) {
            bool bad = scalar_traits<C>::exact ? !e.terms.empty() : one_norm(e) > tol;
            if (bad)
                throw ValidationError("composite of differentials at degrees " + std::to_string(i + 2) + "," +
                                      std::to_string(i + 1) + " is not zero");
        }
    }
}

// Laplacian in degree p: d_p d_p† + d_{p+1}† d_{p+1}, square of size ranks[p].
template <class C>
GRMat<C> laplacian(const ChainComplex<C>& cc, int p) {
    if (p < 0 || p > cc.top()) throw ValidationError("laplacian degree out of range");
    GRMat<C> acc = mat_zero<C>(cc.g, cc.ranks[p], cc.ranks[p]);
    if (p >= 1) acc = mat_add(acc, mat_adjoint_gram(cc.diff[p - 1]));
    if (p < cc.top()) {
        const GRMat<C>& up = cc.diff[p];
        acc = mat_add(acc, mat_mul(adjoint(up), up));
    }
    return acc;
}

struct BettiOptions {
    CharSeqOptions seq;
    SnapOptions snap;
};

template <class C>
struct BettiResult {
    std::vector<double> upper;                    // per degree, >= the true value
    std::vector<std::optional<Rational>> exact_upper;
    std::vector<std::optional<Rational>> snapped; // filled when every snap involved is clean
    std::vector<DimKerResult<C>> kernels;         // per differential, degree 1..top
    std::vector<std::string> warnings;
    double euler_from_ranks = 0.0;
};

// b_p = dim ker d_p - dim im d_{p+1} and dim im d_{p+1} = n_{p+1} - dim ker
// d_{p+1}, so upper bounds on the two kernel dimensions give an upper bound
// on b_p. The alternating sum of the bounds telescopes to the alternating
// sum of the ranks.
template <class C>
BettiResult<C> l2_betti_numbers(const ChainComplex<C>& cc, const BettiOptions& opt) {
    validate_complex(cc);
    int top = cc.top();
    BettiResult<C> out;
    DimKerOptions dko{opt.seq, opt.snap};
    for (int p = 1; p <= top; ++p) out.kernels.push_back(kernel_dimension(cc.diff[p - 1], dko));

    auto ub = [&](int p) -> double {
        if (p == 0) return static_cast<double>(cc.ranks[0]);
        if (p > top) return 0.0;
        return out.kernels[p - 1].upper_bound;
    };
    auto ub_exact = [&](int p) -> std::optional<Rational> {
        if (p == 0) return Rational(cc.ranks[0]);
        if (p > top) return Rational(0);
        return out.kernels[p - 1].upper_bound_exact;
    };
    auto snapped = [&](int p) -> std::optional<Rational> {
        if (p == 0) return Rational(cc.ranks[0]);
        if (p > top) return Rational(0);
        return out.kernels[p - 1].snapped;
    };

    for (int p = 0; p <= top; ++p) {
        double n_up = p + 1 <= top ? cc.ranks[p + 1] : 0;
        out.upper.push_back(ub(p) + ub(p + 1) - n_up);
        auto ea = ub_exact(p), eb = ub_exact(p + 1);
        if (ea && eb) out.exact_upper.push_back(*ea + *eb - Rational(static_cast<long>(n_up)));
        else out.exact_upper.push_back(std::nullopt);
        auto sa = snapped(p), sb = snapped(p + 1);
        if (sa && sb) out.snapped.push_back(*sa + *sb - Rational(static_cast<long>(n_up)));
        else out.snapped.push_back(std::nullopt);
    }
    for (int p = 0; p <= top; ++p)
        out.euler_from_ranks += (p % 2 ? -1.0 : 1.0) * cc.ranks[p];
    for (const auto& k : out.kernels)
        for (const auto& w : k.warnings) out.warnings.push_back(w);
    return out;
}

// Cell description of a quotient space: per cell its dimension and the order
// of its isotropy group (absent: infinite isotropy, weight zero).
struct Cell {
    int dim = 0;
    std::optional<uint64_t> isotropy = 1;
};

inline Rational l2_euler_from_cells(const std::vector<Cell>& cells) {
    Rational acc(0);
    for (const auto& c : cells) {
        if (c.dim < 0) throw ValidationError("cell with negative dimension");
        if (!c.isotropy) continue;
        if (*c.isotropy == 0) throw ValidationError("cell with isotropy order zero");
        Rational w(1, *c.isotropy);
        w.canonicalize();
        acc += (c.dim % 2 ? -w : w);
    }
    return acc;
}

enum class TorsionRoute { direct, laplacian };
enum class DetProvider { charseq, mahler };

struct TorsionOptions {
    TorsionRoute route = TorsionRoute::direct;
    DetProvider provider = DetProvider::charseq;
    FkOptions fk;
    SnapOptions snap;
    std::optional<std::vector<Rational>> dim_ker;  // one per matrix in route order
};

struct TorsionResult {
    double value = 0.0;
    std::vector<double> log_dets;    // per matrix in route order
    std::vector<Rational> dim_kers;
    std::vector<std::string> warnings;
};

namespace detail {

template <class C>
double torsion_log_det(const GRMat<C>& m, const TorsionOptions& opt, size_t idx, TorsionResult& out) {
    if (opt.provider == DetProvider::mahler) {
        if constexpr (!scalar_traits<C>::exact) {
            throw ValidationError("mahler determinant route needs exact input");
        } else {
            out.dim_kers.push_back(torus_kernel_dim(m));
            return mahler_log_matrix(m);
        }
    }
    CharSeq<C> seq = characteristic_sequence(m, opt.fk.seq);
    Rational dk;
    if (opt.dim_ker) {
        if (idx >= opt.dim_ker->size()) throw ValidationError("dim_ker list shorter than the route");
        dk = (*opt.dim_ker)[idx];
    } else {
        double ub;
        if constexpr (scalar_traits<C>::exact) ub = seq.c.back().get_d();
        else ub = seq.c.back();
        SnapOutcome snap = apply_snap(ub, opt.snap);
        if (snap.value) {
            dk = *snap.value;
        } else if constexpr (scalar_traits<C>::exact) {
            dk = seq.c.back();
            out.warnings.push_back("kernel dimension taken from the raw exact upper bound");
        } else {
            dk = Rational(ub);
            out.warnings.push_back("kernel dimension taken from the raw float upper bound");
        }
        if (!snap.note.empty()) out.warnings.push_back(snap.note);
    }
    out.dim_kers.push_back(dk);
    FkResult fk = fk_from_seq(seq, m.rows, dk, opt.fk);
    if (fk.still_decreasing)
        out.warnings.push_back("determinant series still decreasing at truncation; value is an upper bound");
    return fk.value;
}

}  // namespace detail

// Alternating determinant sum. Direct route: -sum_p (-1)^p ln det d_p over
// the differentials. Laplacian route: -1/2 sum_p (-1)^p p ln det of the
// degree-p Laplacian. Both assume the determinants are positive; kernel
// dimensions are inferred per matrix unless supplied.
template <class C>
TorsionResult l2_torsion(const ChainComplex<C>& cc, const TorsionOptions& opt) {
    validate_complex(cc);
    TorsionResult out;
    if (opt.route == TorsionRoute::direct) {
        for (int p = 1; p <= cc.top(); ++p) {
            double ld = detail::torsion_log_det(cc.diff[p - 1], opt, p - 1, out);
            out.log_dets.push_back(ld);
            out.value -= (p % 2 ? -1.0 : 1.0) * ld;
        }
    } else {
        for (int p = 0; p <= cc.top(); ++p) {
            double ld = detail::torsion_log_det(laplacian(cc, p), opt, p, out);
            out.log_dets.push_back(ld);
            out.value -= 0.5 * (p % 2 ? -1.0 : 1.0) * p * ld;
        }
    }
    return out;
}

inline ChainComplex<FloatC> to_float(const ChainComplex<ExactC>& cc) {
    ChainComplex<FloatC> out;
    out.g = cc.g;
    out.ranks = cc.ranks;
    for (const auto& d : cc.diff) out.diff.push_back(to_float(d));
    return out;
}

// Block sum: ranks add degreewise, differentials sit in diagonal blocks.
template <class C>
ChainComplex<C> direct_sum(const ChainComplex<C>& a, const ChainComplex<C>& b) {
    if (!(a.g == b.g)) throw ValidationError("direct sum needs one common group");
    ChainComplex<C> out;
    out.g = a.g;
    int top = std::max(a.top(), b.top());
    auto rank_of = [](const ChainComplex<C>& c, int p) { return p <= c.top() ? c.ranks[p] : 0; };
    for (int p = 0; p <= top; ++p) out.ranks.push_back(rank_of(a, p) + rank_of(b, p));
    for (int p = 1; p <= top; ++p) {
        int ra = p <= a.top() ? a.ranks[p] : 0, ca = p - 1 <= a.top() ? a.ranks[p - 1] : 0;
        int rb = p <= b.top() ? b.ranks[p] : 0, cb = p - 1 <= b.top() ? b.ranks[p - 1] : 0;
        GRMat<C> d = mat_zero<C>(out.g, ra + rb, ca + cb);
        if (p <= a.top() && ra && ca)
            for (int i = 0; i < ra; ++i)
                for (int j = 0; j < ca; ++j) d.at(i, j) = a.diff[p - 1].at(i, j);
        if (p <= b.top() && rb && cb)
            for (int i = 0; i < rb; ++i)
                for (int j = 0; j < cb; ++j) d.at(ra + i, ca + j) = b.diff[p - 1].at(i, j);
        out.diff.push_back(std::move(d));
    }
    return out;
}

}  // namespace l2lab
