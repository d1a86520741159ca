#include "l2lab/approximation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>

#include "l2lab/error.hpp"
#include "l2lab/linalg.hpp"
#include "l2lab/parallel.hpp"

namespace l2lab {

namespace {

constexpr long kMaxQuotientPoints = 1L << 20;
constexpr int kMaxLampQuotient = 14;
constexpr long kMaxRestrictIndex = 64;
constexpr int kMaxRestrictRank = 8;

Eigen::MatrixXcd eval_zn(const GRMat<ExactC>& a, const std::vector<double>& theta) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(a.rows, a.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            for (const auto& [e, c] : a.at(i, j).terms) {
                const auto& w = std::get<GroupElement::ZnWord>(e.v);
                double phase = 0.0;
                for (size_t d = 0; d < w.size(); ++d) phase += static_cast<double>(w[d]) * theta[d];
                m(i, j) += to_float(c) * std::exp(FloatC(0.0, phase));
            }
    return m;
}

int svd_rank(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    double thresh = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    int r = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > thresh) ++r;
    return r;
}

}  // namespace

Rational zn_quotient_kernel_dim(const GRMat<ExactC>& a, long k) {
    if (a.g.family() != Family::free_abelian)
        throw ValidationError("root-of-unity quotient needs a free abelian group");
    int n = a.g.zn_data().n;
    if (n > 3) throw ResourceError("root-of-unity quotient supports rank up to 3");
    if (k < 1) throw ValidationError("quotient parameter must be at least 1");
    long points = 1;
    for (int d = 0; d < n; ++d) {
        points *= k;
        if (points > kMaxQuotientPoints) throw ResourceError("quotient point count exceeds the cap");
    }
    long total_ker = 0;
    std::vector<double> theta(n, 0.0);
    for (long idx = 0; idx < points; ++idx) {
        long rest = idx;
        for (int d = 0; d < n; ++d) {
            theta[d] = 2.0 * M_PI * static_cast<double>(rest % k) / static_cast<double>(k);
            rest /= k;
        }
        total_ker += a.rows - svd_rank(eval_zn(a, theta));
    }
    Rational out(total_ker, points);
    out.canonicalize();
    return out;
}

Rational lamplighter_quotient_kernel_dim(const GRMat<ExactC>& a, int n_quot) {
    if (a.g.family() != Family::lamplighter)
        throw ValidationError("wreath quotient needs the lamplighter group");
    if (n_quot < 1 || n_quot > kMaxLampQuotient)
        throw ValidationError("wreath quotient base size out of range");
    const int N = n_quot;
    const int R = a.rows, Cc = a.cols;

    // kernel count of one character block: for the subset encoded by bits,
    // each term (lamps, shift, coeff) lands at row (m+shift) mod N with sign
    // given by the parity of lamp positions meeting the subset after the
    // relative shift m
    std::function<long(int)> block_kernel = [&](int bits) {
        std::vector<std::vector<ExactC>> big(static_cast<size_t>(Cc) * N,
                                             std::vector<ExactC>(static_cast<size_t>(R) * N));
        for (int i = 0; i < R; ++i)
            for (int j = 0; j < Cc; ++j)
                for (const auto& [e, c] : a.at(i, j).terms) {
                    const auto& le = std::get<LampElem>(e.v);
                    for (int m = 0; m < N; ++m) {
                        int parity = 0;
                        for (char pos : le.lamps) {
                            int q = ((static_cast<int>(static_cast<int8_t>(pos)) % N) + N + m) % N;
                            if ((bits >> q) & 1) parity ^= 1;
                        }
                        int row = ((m + le.shift) % N + N) % N;
                        ExactC v = parity ? ExactC(-1) * c : c;
                        big[static_cast<size_t>(j) * N + row][static_cast<size_t>(i) * N + m] += v;
                    }
                }
        return static_cast<long>(R) * N - exact_rank(std::move(big));
    };
    auto counts = parallel_map<long>(1 << N, default_workers(), block_kernel);
    long total = 0;
    for (long v : counts) total += v;
    Rational out(total, static_cast<long>(N) * (1L << N));
    out.canonicalize();
    return out;
}

Rational quotient_kernel_dim(const GRMat<ExactC>& a, long param) {
    switch (a.g.family()) {
        case Family::free_abelian:
            return zn_quotient_kernel_dim(a, param);
        case Family::lamplighter:
            return lamplighter_quotient_kernel_dim(a, static_cast<int>(param));
        default:
            throw ValidationError("finite quotients supported for free abelian and lamplighter groups");
    }
}

std::vector<QuotientLevel> kernel_dim_tower(const GRMat<ExactC>& a, const std::vector<long>& params) {
    std::vector<QuotientLevel> out;
    for (long p : params) out.push_back({p, quotient_kernel_dim(a, p)});
    return out;
}

std::vector<Rational> quotient_betti(const ChainComplex<ExactC>& cc, long param) {
    validate_complex(cc);
    int top = cc.top();
    std::vector<Rational> kc(top + 2, Rational(0));
    kc[0] = Rational(cc.ranks[0]);
    for (int p = 1; p <= top; ++p) kc[p] = quotient_kernel_dim(cc.diff[p - 1], param);
    std::vector<Rational> out;
    for (int p = 0; p <= top; ++p) {
        long n_up = p + 1 <= top ? cc.ranks[p + 1] : 0;
        Rational b = kc[p] + kc[p + 1] - Rational(n_up);
        b.canonicalize();
        out.push_back(b);
    }
    return out;
}

namespace {

// rational determinant by Gaussian elimination, small sizes only
Rational rational_det(std::vector<std::vector<Rational>> m) {
    int n = static_cast<int>(m.size());
    Rational det(1);
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (m[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return Rational(0);
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        Rational inv = 1 / m[c][c];
        for (int j = c; j < n; ++j) m[c][j] *= inv;
        for (int r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            Rational f = m[r][c];
            for (int j = c; j < n; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

std::vector<std::vector<Rational>> rational_inverse(std::vector<std::vector<Rational>> m) {
    int n = static_cast<int>(m.size());
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (m[r][c] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw ValidationError("subgroup basis is singular");
        std::swap(m[piv], m[c]);
        std::swap(inv[piv], inv[c]);
        Rational pinv = 1 / m[c][c];
        for (int j = 0; j < n; ++j) {
            m[c][j] *= pinv;
            inv[c][j] *= pinv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || m[r][c] == 0) continue;
            Rational f = m[r][c];
            for (int j = 0; j < n; ++j) {
                m[r][j] -= f * m[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

int64_t floor_to_int(const Rational& y) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), y.get_num().get_mpz_t(), y.get_den().get_mpz_t());
    return f.get_si();
}

}  // namespace

Restriction restrict_index(const GRMat<ExactC>& a, const std::vector<std::vector<int64_t>>& subgroup) {
    if (a.g.family() != Family::free_abelian)
        throw ValidationError("index restriction needs a free abelian group");
    int n = a.g.zn_data().n;
    if (n > kMaxRestrictRank) throw ResourceError("index restriction rank cap exceeded");
    if (static_cast<int>(subgroup.size()) != n)
        throw ValidationError("subgroup basis needs one row per rank");
    std::vector<std::vector<Rational>> s(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(subgroup[i].size()) != n)
            throw ValidationError("subgroup basis rows need one entry per rank");
        for (int j = 0; j < n; ++j) s[i][j] = Rational(static_cast<long>(subgroup[i][j]));
    }
    Rational det = rational_det(s);
    if (det == 0) throw ValidationError("subgroup basis is singular; the index is not finite");
    Rational idx_q = abs(det);
    if (idx_q.get_den() != 1) throw std::logic_error("integer basis produced a fractional determinant");
    long index = idx_q.get_num().get_si();
    if (index > kMaxRestrictIndex) throw ResourceError("subgroup index cap exceeded");
    auto sinv = rational_inverse(s);

    // canonical coset representative: subtract the floor in subgroup
    // coordinates, landing in the fundamental parallelepiped
    auto canonical = [&](const std::vector<int64_t>& x) {
        std::vector<int64_t> f(n);
        for (int j = 0; j < n; ++j) {
            Rational y(0);
            for (int i = 0; i < n; ++i) y += Rational(static_cast<long>(x[i])) * sinv[i][j];
            f[j] = floor_to_int(y);
        }
        std::vector<int64_t> rep(x);
        for (int d = 0; d < n; ++d)
            for (int j = 0; j < n; ++j) rep[d] -= f[j] * subgroup[j][d];
        return rep;
    };

    // breadth-first walk over cosets by unit steps fixes the indexing
    std::map<std::vector<int64_t>, int> coset_of;
    std::vector<std::vector<int64_t>> transversal;
    std::deque<std::vector<int64_t>> queue;
    std::vector<int64_t> origin(n, 0);
    coset_of[origin] = 0;
    transversal.push_back(origin);
    queue.push_back(origin);
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        for (int d = 0; d < n; ++d)
            for (int sgn : {1, -1}) {
                auto step = cur;
                step[d] += sgn;
                auto rep = canonical(step);
                if (coset_of.count(rep)) continue;
                coset_of[rep] = static_cast<int>(transversal.size());
                transversal.push_back(rep);
                queue.push_back(rep);
            }
    }
    if (static_cast<long>(transversal.size()) != index)
        throw std::logic_error("coset walk found a different number of cosets than the index");

    Group h = Group::free_abelian(n);
    std::vector<std::vector<std::pair<GroupElement, ExactC>>> entries(
        static_cast<size_t>(a.rows) * index * a.cols * index);
    auto slot = [&](int i, int ca, int j, int cb) {
        return (static_cast<size_t>(i) * index + ca) * (static_cast<size_t>(a.cols) * index) +
               static_cast<size_t>(j) * index + cb;
    };
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            for (const auto& [e, c] : a.at(i, j).terms) {
                const auto& w = std::get<GroupElement::ZnWord>(e.v);
                for (long ca = 0; ca < index; ++ca) {
                    std::vector<int64_t> x(transversal[ca]);
                    for (int d = 0; d < n; ++d) x[d] += w[d];
                    auto rep = canonical(x);
                    auto it = coset_of.find(rep);
                    if (it == coset_of.end()) throw std::logic_error("coset representative missing");
                    int cb = it->second;
                    GroupElement::ZnWord coords(n);
                    for (int jj = 0; jj < n; ++jj) {
                        Rational y(0);
                        for (int ii = 0; ii < n; ++ii)
                            y += Rational(static_cast<long>(x[ii] - rep[ii])) * sinv[ii][jj];
                        if (y.get_den() != 1) throw std::logic_error("subgroup shift has fractional coordinates");
                        coords[jj] = y.get_num().get_si();
                    }
                    entries[slot(i, static_cast<int>(ca), j, cb)].emplace_back(GroupElement(coords), c);
                }
            }
    Restriction out;
    out.index = index;
    out.transversal = std::move(transversal);
    out.mat = mat_zero<ExactC>(h, a.rows * static_cast<int>(index), a.cols * static_cast<int>(index));
    for (int i = 0; i < out.mat.rows; ++i)
        for (int j = 0; j < out.mat.cols; ++j) {
            auto& terms = entries[static_cast<size_t>(i) * out.mat.cols + j];
            if (!terms.empty()) out.mat.at(i, j) = r_elem(h, std::move(terms));
        }
    return out;
}

}  // namespace l2lab
