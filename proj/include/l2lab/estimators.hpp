#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "l2lab/gr_matrix.hpp"
#include "l2lab/parallel.hpp"

namespace l2lab {

// Truncation is heuristic: dropped mass is tracked but no error bound is
// claimed for truncated runs. Exact mode refuses truncation unless the caller
// explicitly accepts approximate results.
struct TruncationPolicy {
    int64_t max_word_length = -1;  // negative: no cap
    double coeff_floor = 0.0;
    bool track_dropped_mass = true;
    bool allow_exact_truncation = false;
    size_t max_support_terms = 60000000;

    bool truncating() const { return max_word_length >= 0 || coeff_floor > 0.0; }
};

// c_p = tr((1 - K^{-2} A A†)^p) for p = 1..p_done. Without truncation the
// values are non-negative and non-increasing; their limit is dim ker r_A.
template <class C>
struct CharSeq {
    using R = typename scalar_traits<C>::real_type;
    std::vector<R> c;
    R k_squared{};
    bool k_user_asserted = false;
    bool truncated = false;
    bool monotone = true;
    bool resource_capped = false;
    int p_done = 0;
    std::vector<double> dropped_mass;  // per step, when tracked under truncation
    size_t peak_support = 0;
};

struct CharSeqOptions {
    std::optional<Rational> k2_override;  // must stay >= ||r_A||^2; recorded as user-asserted
    int p_max = 200;
    TruncationPolicy policy;
    int workers = 0;  // 0: default_workers()
};

namespace detail {

template <class C>
struct Accum {
    std::vector<std::pair<GroupElement, C>> items;  // first-touch order: deterministic
    std::unordered_map<GroupElement, uint32_t, ElemHash> index;

    void add(GroupElement g, const C& v) {
        auto [it, fresh] = index.try_emplace(std::move(g), static_cast<uint32_t>(items.size()));
        if (fresh) items.emplace_back(it->first, v);
        else items[it->second].second += v;
    }
};

template <class C>
double prune(const Group& g, Accum<C>& a, const TruncationPolicy& pol, bool exact_trunc_ok) {
    double dropped = 0.0;
    bool cap_len = pol.max_word_length >= 0 && (!scalar_traits<C>::exact || exact_trunc_ok);
    double floor = scalar_traits<C>::exact ? (exact_trunc_ok ? pol.coeff_floor : 0.0)
                                           : std::max(pol.coeff_floor, scalar_traits<C>::drop_floor);
    std::vector<std::pair<GroupElement, C>> kept;
    kept.reserve(a.items.size());
    for (auto& [e, c] : a.items) {
        if (is_zero(c)) continue;  // exact zeros are free to remove
        bool drop = false;
        if (floor > 0.0 && abs_c(c) < floor) drop = true;
        if (!drop && cap_len && word_radius(g, e) > pol.max_word_length) drop = true;
        if (drop) {
            if (pol.track_dropped_mass) dropped += abs_c(c);
            continue;
        }
        kept.emplace_back(std::move(e), std::move(c));
    }
    a.items = std::move(kept);
    a.index.clear();
    a.index.reserve(a.items.size() * 2);
    for (uint32_t i = 0; i < a.items.size(); ++i) a.index.emplace(a.items[i].first, i);
    return dropped;
}

// <u, v> = sum_j sum_g u_j(g) conj(v_j(g)); real for the iterates of a
// self-adjoint operator
template <class C>
C inner(const std::vector<Accum<C>>& u, const std::vector<Accum<C>>& v) {
    C s(0);
    for (size_t j = 0; j < u.size(); ++j) {
        const auto& small = u[j].items.size() <= v[j].items.size() ? u[j] : v[j];
        const auto& big = u[j].items.size() <= v[j].items.size() ? v[j] : u[j];
        bool flipped = u[j].items.size() > v[j].items.size();
        for (const auto& [e, c] : small.items) {
            auto it = big.index.find(e);
            if (it == big.index.end()) continue;
            const C& d = big.items[it->second].second;
            s += flipped ? d * conj_c(c) : c * conj_c(d);
        }
    }
    return s;
}

template <class C>
typename scalar_traits<C>::real_type take_real(const C& v);

template <>
inline Rational take_real<ExactC>(const ExactC& v) {
    if (v.im != 0) throw std::logic_error("characteristic value has nonzero imaginary part");
    return v.re;
}

template <>
inline double take_real<FloatC>(const FloatC& v) {
    if (std::abs(v.imag()) > 1e-6 * std::max(1.0, std::abs(v.real())))
        throw std::logic_error("characteristic value has large imaginary part");
    return v.real();
}

template <class C>
struct ColumnResult {
    std::vector<typename scalar_traits<C>::real_type> c;
    std::vector<double> dropped;
    bool resource_capped = false;
    size_t peak_support = 0;
};

// One column of the pairing iteration: u_q = B u_{q-1} from u_0 = e_col,
// c_{2q-1} += <u_q, u_{q-1}>, c_{2q} += <u_q, u_q>. B must be self-adjoint.
template <class C>
ColumnResult<C> run_column_sparse(const GRMat<C>& B, int col, int p_max, const TruncationPolicy& pol) {
    const Group& g = B.g;
    int R = B.rows;
    ColumnResult<C> out;
    std::vector<Accum<C>> cur(R), prev;
    cur[col].add(identity(g), C(1));
    prev = cur;
    int q_max = (p_max + 1) / 2;
    for (int q = 1; q <= q_max; ++q) {
        std::vector<Accum<C>> nxt(R);
        for (int j = 0; j < R; ++j) {
            for (int k = 0; k < R; ++k) {
                const auto& b = B.at(j, k).terms;
                if (b.empty()) continue;
                for (const auto& [gb, cb] : b)
                    for (const auto& [gu, cu] : cur[k].items) {
                        C p = cb * cu;
                        if (is_zero(p)) continue;
                        nxt[j].add(compose(g, gb, gu), p);
                    }
            }
        }
        double dropped = 0.0;
        size_t total = 0;
        for (int j = 0; j < R; ++j) {
            dropped += prune(g, nxt[j], pol, pol.allow_exact_truncation);
            total += nxt[j].items.size();
        }
        out.peak_support = std::max(out.peak_support, total);
        if (total > pol.max_support_terms) {
            out.resource_capped = true;
            break;
        }
        prev = std::move(cur);
        cur = std::move(nxt);
        out.c.push_back(take_real<C>(inner(cur, prev)));
        out.dropped.push_back(dropped);
        if (2 * q <= p_max) {
            out.c.push_back(take_real<C>(inner(cur, cur)));
            out.dropped.push_back(0.0);
        }
    }
    return out;
}

// Dense lattice path for free abelian groups of rank <= 3: iterates live on
// a box [-reach_d, reach_d] per dimension sized up front from the entry
// radii, so the hot loop is stride arithmetic instead of hashing. Always
// padded to three dimensions; unused ones have extent 1.
template <class C>
ColumnResult<C> run_column_dense(const GRMat<C>& B, int col, int p_max, const TruncationPolicy& pol) {
    const Group& g = B.g;
    int n = g.zn_data().n;
    int R = B.rows;
    ColumnResult<C> out;

    struct Term {
        int j, k;
        std::array<int64_t, 3> s;
        C coeff;
    };
    std::vector<Term> terms;
    std::array<int64_t, 3> step{0, 0, 0};
    for (int j = 0; j < R; ++j)
        for (int k = 0; k < R; ++k)
            for (const auto& [ge, c] : B.at(j, k).terms) {
                const auto& w = std::get<GroupElement::ZnWord>(ge.v);
                Term t{j, k, {0, 0, 0}, c};
                for (int d = 0; d < n; ++d) {
                    t.s[d] = w[d];
                    step[d] = std::max<int64_t>(step[d], std::llabs(w[d]));
                }
                terms.push_back(std::move(t));
            }

    bool cap_len = pol.max_word_length >= 0 && (!scalar_traits<C>::exact || pol.allow_exact_truncation);
    double floor = scalar_traits<C>::exact
                       ? (pol.allow_exact_truncation ? pol.coeff_floor : 0.0)
                       : std::max(pol.coeff_floor, scalar_traits<C>::drop_floor);

    auto box_cells = [&](int64_t q) {
        unsigned __int128 cells = static_cast<unsigned>(R);
        for (int d = 0; d < 3; ++d) {
            int64_t reach = q * step[d];
            if (cap_len) reach = std::min(reach, pol.max_word_length);
            cells *= static_cast<unsigned __int128>(2 * reach + 1);
        }
        return cells;
    };
    int64_t q_target = (p_max + 1) / 2;
    int64_t q_room = q_target;
    while (q_room > 0 && box_cells(q_room) > pol.max_support_terms) --q_room;
    if (q_room == 0) throw ResourceError("lattice box exceeds the support cap at the first step");
    if (q_room < q_target) out.resource_capped = true;

    std::array<int64_t, 3> reach{0, 0, 0};
    std::array<int64_t, 3> extent{1, 1, 1};
    for (int d = 0; d < 3; ++d) {
        reach[d] = q_room * step[d];
        if (cap_len) reach[d] = std::min(reach[d], pol.max_word_length);
        extent[d] = 2 * reach[d] + 1;
    }
    std::array<int64_t, 3> stride{extent[1] * extent[2], extent[2], 1};
    int64_t box = extent[0] * extent[1] * extent[2];
    auto at = [&](int row, int64_t x0, int64_t x1, int64_t x2) {
        return row * box + (x0 + reach[0]) * stride[0] + (x1 + reach[1]) * stride[1] + (x2 + reach[2]);
    };

    std::vector<C> cur(static_cast<size_t>(R) * box, C(0));
    std::vector<C> prev, nxt(cur.size(), C(0));
    cur[at(col, 0, 0, 0)] = C(1);
    prev = cur;

    auto pair_sum = [&](const std::vector<C>& u, const std::vector<C>& v) {
        C s(0);
        for (size_t i = 0; i < u.size(); ++i) {
            if (is_zero(u[i]) || is_zero(v[i])) continue;
            s += u[i] * conj_c(v[i]);
        }
        return s;
    };

    for (int64_t q = 1; q <= q_room; ++q) {
        for (auto& v : nxt) v = C(0);
        double dropped = 0.0;
        for (const auto& t : terms) {
            std::array<int64_t, 3> lo, hi;
            bool clipped = false;
            for (int d = 0; d < 3; ++d) {
                lo[d] = std::max(-reach[d], -reach[d] - t.s[d]);
                hi[d] = std::min(reach[d], reach[d] - t.s[d]);
                if (lo[d] > -reach[d] || hi[d] < reach[d]) clipped = true;
            }
            for (int64_t x0 = lo[0]; x0 <= hi[0]; ++x0)
                for (int64_t x1 = lo[1]; x1 <= hi[1]; ++x1) {
                    const C* src = &cur[at(t.k, x0, x1, lo[2])];
                    C* dst = &nxt[at(t.j, x0 + t.s[0], x1 + t.s[1], lo[2] + t.s[2])];
                    for (int64_t x2 = lo[2]; x2 <= hi[2]; ++x2, ++src, ++dst) {
                        if (is_zero(*src)) continue;
                        *dst += t.coeff * *src;
                    }
                }
            if (clipped && pol.track_dropped_mass) {
                for (int64_t x0 = -reach[0]; x0 <= reach[0]; ++x0)
                    for (int64_t x1 = -reach[1]; x1 <= reach[1]; ++x1)
                        for (int64_t x2 = -reach[2]; x2 <= reach[2]; ++x2) {
                            bool inside = x0 >= lo[0] && x0 <= hi[0] && x1 >= lo[1] && x1 <= hi[1] &&
                                          x2 >= lo[2] && x2 <= hi[2];
                            if (inside) continue;
                            const C& v = cur[at(t.k, x0, x1, x2)];
                            if (!is_zero(v)) dropped += abs_c(t.coeff * v);
                        }
            }
        }
        size_t support = 0;
        for (auto& v : nxt) {
            if (is_zero(v)) continue;
            if (floor > 0.0 && abs_c(v) < floor) {
                if (pol.track_dropped_mass) dropped += abs_c(v);
                v = C(0);
                continue;
            }
            ++support;
        }
        out.peak_support = std::max(out.peak_support, support);
        prev.swap(cur);
        cur.swap(nxt);
        out.c.push_back(take_real<C>(pair_sum(cur, prev)));
        out.dropped.push_back(dropped);
        if (2 * q <= p_max) {
            out.c.push_back(take_real<C>(pair_sum(cur, cur)));
            out.dropped.push_back(0.0);
        }
    }
    return out;
}

template <class C>
bool dense_eligible(const GRMat<C>& B) {
    return B.g.family() == Family::free_abelian && B.g.zn_data().n <= 3;
}

}  // namespace detail

// K^2 resolution: the bound from the presentation, unless the caller asserts
// a smaller admissible value.
template <class C>
std::pair<typename scalar_traits<C>::real_type, bool> resolve_k2(const GRMat<C>& A,
                                                                 const std::optional<Rational>& override_k2) {
    using R = typename scalar_traits<C>::real_type;
    if (override_k2) {
        if (*override_k2 <= 0) throw ValidationError("k_squared override must be positive");
        if constexpr (scalar_traits<C>::exact) return {R(*override_k2), true};
        else return {override_k2->get_d(), true};
    }
    auto kb = k_bound(A);
    return {kb.k_squared, false};
}

template <class C>
CharSeq<C> characteristic_sequence(const GRMat<C>& A, const CharSeqOptions& opt) {
    using R = typename scalar_traits<C>::real_type;
    if (opt.p_max < 1) throw ValidationError("p_max must be at least 1");
    if (scalar_traits<C>::exact && opt.policy.truncating() && !opt.policy.allow_exact_truncation)
        throw ValidationError("truncation in exact mode requires an explicit override");

    auto [k2, user_k] = resolve_k2(A, opt.k2_override);

    CharSeq<C> out;
    out.k_squared = k2;
    out.k_user_asserted = user_k;
    out.truncated = opt.policy.truncating();

    if (A.rows == 0) {
        out.c.assign(opt.p_max, R(0));
        out.p_done = opt.p_max;
        out.dropped_mass.assign(opt.p_max, 0.0);
        return out;
    }

    // B = I - K^{-2} A A†, self-adjoint by construction
    GRMat<C> gram = mat_adjoint_gram(A);
    C inv_k2(0);
    if constexpr (scalar_traits<C>::exact) inv_k2 = ExactC(Rational(1) / k2);
    else inv_k2 = FloatC(1.0 / k2, 0.0);
    GRMat<C> B = mat_sub(mat_identity<C>(A.g, A.rows), mat_scale(gram, inv_k2));

    bool dense = detail::dense_eligible(B);
    int workers = opt.workers > 0 ? opt.workers : default_workers();
    std::function<detail::ColumnResult<C>(int)> task = [&](int col) {
        return dense ? detail::run_column_dense(B, col, opt.p_max, opt.policy)
                     : detail::run_column_sparse(B, col, opt.p_max, opt.policy);
    };
    auto cols = parallel_map<detail::ColumnResult<C>>(A.rows, workers, task);

    // merge in fixed column order; a capped column truncates the whole series
    int p_done = opt.p_max;
    for (const auto& cr : cols) {
        if (cr.resource_capped) out.resource_capped = true;
        p_done = std::min(p_done, static_cast<int>(cr.c.size()));
        out.peak_support = std::max(out.peak_support, cr.peak_support);
    }
    out.c.assign(p_done, R(0));
    out.dropped_mass.assign(p_done, 0.0);
    for (const auto& cr : cols)
        for (int p = 0; p < p_done; ++p) {
            out.c[p] += cr.c[p];
            out.dropped_mass[p] += cr.dropped[p];
        }
    out.p_done = p_done;
    if (out.resource_capped && p_done == 0)
        throw ResourceError("support cap hit before the first characteristic value");

    for (int p = 0; p + 1 < p_done; ++p) {
        bool ok;
        if constexpr (scalar_traits<C>::exact) ok = out.c[p + 1] <= out.c[p];
        else ok = out.c[p + 1] <= out.c[p] + 1e-12 * std::max(1.0, std::abs(out.c[p]));
        if (!ok) out.monotone = false;
    }
    if constexpr (scalar_traits<C>::exact) {
        if (!out.monotone && !out.truncated) {
            if (user_k)
                throw ValidationError("sequence not monotone; the asserted k_squared is too small");
            throw std::logic_error("exact untruncated characteristic sequence not monotone");
        }
    }
    return out;
}

// ---- kernel dimension ----

struct SnapOptions {
    std::optional<unsigned long> denominator;  // expected value denominator d; snapping off when absent
    double tol = 0.05;
};

struct SnapOutcome {
    std::optional<Rational> value;
    bool ambiguous = false;
    std::string note;
};

// Nearest multiple of 1/d within tol of v, refused when a second multiple
// also fits.
inline SnapOutcome apply_snap(double v, const SnapOptions& snap) {
    SnapOutcome out;
    if (!snap.denominator) return out;
    unsigned long d = *snap.denominator;
    if (d == 0) throw ValidationError("snap denominator must be positive");
    long q = std::lround(v * static_cast<double>(d));
    if (q < 0) q = 0;
    bool hit_q = std::abs(v - static_cast<double>(q) / static_cast<double>(d)) <= snap.tol;
    bool hit_lo = q > 0 && std::abs(v - static_cast<double>(q - 1) / static_cast<double>(d)) <= snap.tol;
    bool hit_hi = std::abs(v - static_cast<double>(q + 1) / static_cast<double>(d)) <= snap.tol;
    if (hit_q && !hit_lo && !hit_hi) {
        out.value = Rational(q, d);
        out.value->canonicalize();
    } else if (hit_q) {
        out.ambiguous = true;
        out.note = "snap ambiguous: several multiples of 1/" + std::to_string(d) + " lie within tolerance";
    } else {
        out.note = "no multiple of 1/" + std::to_string(d) + " within snap tolerance";
    }
    return out;
}

struct DimKerOptions {
    CharSeqOptions seq;
    SnapOptions snap;
};

template <class C>
struct DimKerResult {
    CharSeq<C> seq;
    double upper_bound = 0.0;  // c_{p_done}; an upper bound for dim ker when untruncated
    std::optional<Rational> upper_bound_exact;
    std::optional<Rational> snapped;
    bool snap_ambiguous = false;
    std::vector<std::string> warnings;
};

template <class C>
DimKerResult<C> kernel_dimension(const GRMat<C>& A, const DimKerOptions& opt) {
    DimKerResult<C> out;
    out.seq = characteristic_sequence(A, opt.seq);
    const auto& c = out.seq.c;
    if (c.empty()) throw ResourceError("no characteristic values computed");
    if constexpr (scalar_traits<C>::exact) {
        out.upper_bound_exact = c.back();
        out.upper_bound = c.back().get_d();
    } else {
        out.upper_bound = c.back();
    }
    if (out.seq.truncated)
        out.warnings.push_back("truncated run: upper-bound guarantee does not apply");
    if (out.seq.resource_capped)
        out.warnings.push_back("support cap hit: series stops at p=" + std::to_string(out.seq.p_done));
    if (!out.seq.monotone)
        out.warnings.push_back("sequence not monotone; results unreliable");

    SnapOutcome snap = apply_snap(out.upper_bound, opt.snap);
    out.snapped = snap.value;
    out.snap_ambiguous = snap.ambiguous;
    if (!snap.note.empty()) out.warnings.push_back(snap.note);
    return out;
}

// ---- Fuglede-Kadison log-determinant partial sums ----

struct FkOptions {
    CharSeqOptions seq;                                  // seq.p_max is the truncation length L
    std::optional<std::pair<double, double>> tail;       // user-supplied (alpha, C) tail constants
};

struct FkResult {
    double value = 0.0;                    // S_L
    std::vector<double> series;            // S_p sampled on series_index
    std::vector<int> series_index;
    double lead_term = 0.0;                // (rows - dim_ker) ln K
    std::optional<double> tail_bound;      // C / L^alpha when (alpha, C) supplied
    bool still_decreasing = false;         // heuristic non-convergence warning
    Rational dim_ker;
    int L = 0;
};

// S_L = (rows - dim_ker) ln K - 1/2 sum_{p<=L} (c_p - dim_ker)/p. Every term
// of the tail is >= 0, so S_L is a non-increasing upper bound for ln det.
// dim_ker is a required input; it is never inferred here.
template <class C>
FkResult fk_from_seq(const CharSeq<C>& seq, int rows, const Rational& dim_ker, const FkOptions& opt) {
    FkResult out;
    out.dim_ker = dim_ker;
    out.L = seq.p_done;
    if (seq.p_done < 1) throw ValidationError("empty characteristic sequence");
    if (dim_ker < 0 || dim_ker > rows) throw ValidationError("dim_ker outside [0, rows]");
    double dk = dim_ker.get_d();
    double k2;
    if constexpr (scalar_traits<C>::exact) k2 = seq.k_squared.get_d();
    else k2 = seq.k_squared;
    out.lead_term = (rows - dk) * 0.5 * std::log(k2);

    std::vector<double> s_at(seq.p_done + 1);
    double acc = 0.0;
    s_at[0] = out.lead_term;
    for (int p = 1; p <= seq.p_done; ++p) {
        double cp;
        if constexpr (scalar_traits<C>::exact) {
            const Rational& r = seq.c[p - 1];
            if (r < dim_ker) throw ValidationError("characteristic value below dim_ker at p=" + std::to_string(p));
            cp = r.get_d();
        } else {
            cp = seq.c[p - 1];
            if (cp < dk - 1e-9) throw ValidationError("characteristic value below dim_ker at p=" + std::to_string(p));
            cp = std::max(cp, dk);
        }
        acc += (cp - dk) / p;
        s_at[p] = out.lead_term - 0.5 * acc;
    }
    out.value = s_at[seq.p_done];

    int stride = std::max(1, seq.p_done / 2000);
    for (int p = stride; p <= seq.p_done; p += stride) {
        out.series.push_back(s_at[p]);
        out.series_index.push_back(p);
    }
    if (out.series_index.empty() || out.series_index.back() != seq.p_done) {
        out.series.push_back(out.value);
        out.series_index.push_back(seq.p_done);
    }

    // flatness heuristic: the latest half still sheds a comparable amount to
    // the half before it, and a visible amount in absolute terms
    if (seq.p_done >= 8) {
        int half = seq.p_done / 2, quarter = seq.p_done / 4;
        double drop_recent = s_at[half] - out.value;
        double drop_before = s_at[quarter] - s_at[half];
        if (drop_recent > 1e-4 && drop_recent > 0.5 * drop_before) out.still_decreasing = true;
    }

    if (opt.tail) {
        auto [alpha, Cc] = *opt.tail;
        if (alpha <= 0 || Cc <= 0) throw ValidationError("tail constants must be positive");
        out.tail_bound = Cc / std::pow(static_cast<double>(seq.p_done), alpha);
    }
    return out;
}

template <class C>
FkResult fk_log_det(const GRMat<C>& A, const Rational& dim_ker, const FkOptions& opt) {
    CharSeq<C> seq = characteristic_sequence(A, opt.seq);
    return fk_from_seq(seq, A.rows, dim_ker, opt);
}

// ---- Novikov-Shubin decay estimate ----

struct NsValue {
    enum class Kind { finite, infinite, infinite_plus };
    Kind kind = Kind::finite;
    double value = 0.0;

    static NsValue finite(double v) { return {Kind::finite, v}; }
    static NsValue infinite() { return {Kind::infinite, 0.0}; }
    static NsValue infinite_plus() { return {Kind::infinite_plus, 0.0}; }
};

struct NsOptions {
    int window_lo = 0;  // 0: auto, last half of the series
    int window_hi = 0;
    static constexpr int min_points = 5;
};

struct NsResult {
    NsValue beta_hat;
    double fit_rms = 0.0;
    double raw_slope = 0.0;
    int points = 0;
    int window_lo = 0, window_hi = 0;
};

// Log-log least squares on r_p = c_p - dim_ker over the tail window; the
// decay exponent estimate is minus the slope. Exact zeros anywhere in the
// window mean faster-than-polynomial decay: the infinity marker.
template <class C>
NsResult ns_beta(const CharSeq<C>& seq, const Rational& dim_ker, const NsOptions& opt = {}) {
    NsResult out;
    int hi = opt.window_hi > 0 ? std::min(opt.window_hi, seq.p_done) : seq.p_done;
    int lo = opt.window_lo > 0 ? opt.window_lo : std::max(1, hi / 2);
    if (hi - lo + 1 < NsOptions::min_points)
        throw ValidationError("ns window has fewer than 5 points");
    out.window_lo = lo;
    out.window_hi = hi;

    std::vector<double> xs, ys;
    double dk = dim_ker.get_d();
    for (int p = lo; p <= hi; ++p) {
        double r;
        if constexpr (scalar_traits<C>::exact) {
            Rational rr = seq.c[p - 1] - dim_ker;
            if (rr < 0) throw ValidationError("negative residual: dim_ker too large");
            if (rr == 0) {
                // an exact zero residual proves a spectral gap
                out.beta_hat = NsValue::infinite_plus();
                out.points = hi - lo + 1;
                return out;
            }
            r = rr.get_d();
        } else {
            r = seq.c[p - 1] - dk;
            if (r < -1e-12) throw ValidationError("negative residual: dim_ker too large");
            if (r <= 0.0) {
                out.beta_hat = NsValue::infinite();
                out.points = hi - lo + 1;
                return out;
            }
        }
        xs.push_back(std::log(static_cast<double>(p)));
        ys.push_back(std::log(r));
    }
    int n = static_cast<int>(xs.size());
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) mx += xs[i], my += ys[i];
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) throw ValidationError("degenerate ns window");
    double slope = sxy / sxx;
    out.raw_slope = slope;
    out.beta_hat = NsValue::finite(std::max(0.0, -slope));
    double ss = 0;
    for (int i = 0; i < n; ++i) {
        double fit = my + slope * (xs[i] - mx);
        ss += (ys[i] - fit) * (ys[i] - fit);
    }
    out.fit_rms = std::sqrt(ss / n);
    out.points = n;
    return out;
}

}  // namespace l2lab
