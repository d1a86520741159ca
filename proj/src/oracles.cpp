#include "l2lab/oracles.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "l2lab/error.hpp"
#include "l2lab/linalg.hpp"

namespace l2lab {

namespace {

constexpr int kMaxRegDim = 4096;
constexpr int kMaxSymbolicSize = 8;

// right regular representation: block (i,j) holds A[i][j](x_a^{-1} x_b) at
// position (a,b), a homomorphism with tr = |G| tr_CG
std::vector<std::vector<ExactC>> regular_rep(const GRMat<ExactC>& a) {
    if (a.g.family() != Family::finite) throw ValidationError("finite oracle needs a finite group");
    const auto& fd = a.g.finite_data();
    int m = fd.order;
    if (a.rows * m > kMaxRegDim || a.cols * m > kMaxRegDim)
        throw ResourceError("regular representation exceeds the size cap");
    std::vector<std::vector<ExactC>> out(a.rows * m, std::vector<ExactC>(a.cols * m));
    std::vector<ExactC> coeffs(m);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) {
            std::fill(coeffs.begin(), coeffs.end(), ExactC());
            for (const auto& [e, c] : a.at(i, j).terms) coeffs[std::get<int64_t>(e.v)] = c;
            for (int x = 0; x < m; ++x)
                for (int y = 0; y < m; ++y) out[i * m + x][j * m + y] = coeffs[fd.table[fd.inverse[x]][y]];
        }
    return out;
}

Eigen::VectorXd gram_eigenvalues(const std::vector<std::vector<ExactC>>& reg) {
    int rm = static_cast<int>(reg.size());
    int cm = rm ? static_cast<int>(reg[0].size()) : 0;
    Eigen::MatrixXcd mf(rm, cm);
    for (int i = 0; i < rm; ++i)
        for (int j = 0; j < cm; ++j) mf(i, j) = to_float(reg[i][j]);
    Eigen::MatrixXcd gram = mf * mf.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
    return es.eigenvalues();  // ascending
}

void require_zn(const GRMat<ExactC>& a, int max_rank, const char* what) {
    if (a.g.family() != Family::free_abelian)
        throw ValidationError(std::string(what) + " needs a free abelian group");
    if (a.g.zn_data().n > max_rank)
        throw ResourceError(std::string(what) + " supports rank up to " + std::to_string(max_rank));
}

Eigen::MatrixXcd eval_at(const GRMat<ExactC>& a, const std::vector<double>& theta) {
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

uint64_t splitmix64(uint64_t& s) {
    uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

int generic_rank(const GRMat<ExactC>& a) {
    int n = a.g.zn_data().n;
    uint64_t seed = 0x5eedc0de12345678ULL;
    int rank = -1;
    for (int s = 0; s < 8; ++s) {
        std::vector<double> theta(n);
        for (int d = 0; d < n; ++d)
            theta[d] = 2.0 * M_PI * std::ldexp(static_cast<double>(splitmix64(seed) >> 11), -53);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eval_at(a, theta));
        const auto& sv = svd.singularValues();
        double thresh = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
        int r = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) > thresh) ++r;
        if (rank >= 0 && r != rank)
            throw OracleError("rank differs across sample points; generic rank undecided");
        rank = r;
    }
    return rank;
}

// one midpoint-grid pass; visit receives the ascending Gram eigenvalues
template <class F>
long grid_pass(const GRMat<ExactC>& a, int log2_grid, F&& visit) {
    int n = a.g.zn_data().n;
    long side = 1L << log2_grid;
    long points = n == 1 ? side : side * side;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es;
    std::vector<double> theta(n);
    for (long j = 0; j < points; ++j) {
        if (n == 1) {
            theta[0] = 2.0 * M_PI * (static_cast<double>(j) + 0.5) / static_cast<double>(side);
        } else {
            theta[0] = 2.0 * M_PI * (static_cast<double>(j / side) + 0.5) / static_cast<double>(side);
            theta[1] = 2.0 * M_PI * (static_cast<double>(j % side) + 0.5) / static_cast<double>(side);
        }
        Eigen::MatrixXcd m = eval_at(a, theta);
        es.compute(m * m.adjoint(), Eigen::EigenvaluesOnly);
        visit(es.eigenvalues());
    }
    return points;
}

}  // namespace

FiniteOracle finite_oracle(const GRMat<ExactC>& a) {
    auto reg = regular_rep(a);
    int m = a.g.finite_data().order;
    FiniteOracle out;
    out.reg_dim = a.rows * m;
    out.rank = exact_rank(reg);
    out.kernel_dim = Rational(out.reg_dim - out.rank, m);
    out.kernel_dim.canonicalize();
    Eigen::VectorXd ev = gram_eigenvalues(reg);
    int zeros = out.reg_dim - out.rank;
    double acc = 0.0;
    for (int i = zeros; i < ev.size(); ++i) acc += std::log(std::max(ev(i), 1e-300));
    out.log_det = acc / (2.0 * m);
    return out;
}

std::vector<double> finite_char_seq(const GRMat<ExactC>& a, double k_squared, int p_max) {
    if (k_squared <= 0) throw ValidationError("k_squared must be positive");
    Eigen::VectorXd ev = gram_eigenvalues(regular_rep(a));
    int m = a.g.finite_data().order;
    std::vector<double> out(p_max, 0.0);
    for (int i = 0; i < ev.size(); ++i) {
        double base = 1.0 - ev(i) / k_squared;
        double pw = 1.0;
        for (int p = 0; p < p_max; ++p) {
            pw *= base;
            out[p] += pw;
        }
    }
    for (auto& v : out) v /= m;
    return out;
}

Rational torus_kernel_dim(const GRMat<ExactC>& a) {
    require_zn(a, 3, "torus kernel oracle");
    return Rational(a.rows - generic_rank(a));
}

double torus_density(const GRMat<ExactC>& a, double lambda, int log2_grid) {
    require_zn(a, 2, "torus density oracle");
    if (lambda < 0) throw ValidationError("lambda must be non-negative");
    if (log2_grid < 1 || log2_grid > 22) throw ValidationError("log2_grid out of range");
    double cut = lambda * lambda;
    long total = 0;
    long points = grid_pass(a, log2_grid, [&](const Eigen::VectorXd& ev) {
        for (int i = 0; i < ev.size(); ++i)
            if (ev(i) <= cut) ++total;
    });
    return static_cast<double>(total) / static_cast<double>(points);
}

TorusDensity torus_density_refined(const GRMat<ExactC>& a, double lambda, int log2_grid) {
    TorusDensity out;
    out.coarse = torus_density(a, lambda, log2_grid);
    out.fine = torus_density(a, lambda, log2_grid + 1);
    out.extrapolated = 2.0 * out.fine - out.coarse;
    return out;
}

TorusDet torus_fk_det(const GRMat<ExactC>& a, double rel_tol, int max_log2) {
    require_zn(a, 2, "torus determinant oracle");
    int n = a.g.zn_data().n;
    if (max_log2 <= 0) max_log2 = n == 1 ? 22 : 11;
    int skip = a.rows - generic_rank(a);
    TorusDet out;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int lg = n == 1 ? 10 : 6; lg <= max_log2; ++lg) {
        double acc = 0.0;
        long points = grid_pass(a, lg, [&](const Eigen::VectorXd& ev) {
            for (int i = skip; i < ev.size(); ++i) acc += std::log(std::max(ev(i), 1e-300));
        });
        double val = 0.5 * acc / static_cast<double>(points);
        out.log_det = val;
        out.points = points;
        if (!std::isnan(prev)) {
            out.est_error = std::abs(val - prev);
            if (out.est_error <= rel_tol * std::max(1.0, std::abs(val))) return out;
        }
        prev = val;
    }
    return out;
}

double mahler_log(const RElem<ExactC>& p) {
    if (p.terms.empty()) throw OracleError("mahler measure of the zero polynomial");
    int64_t kmin = 0, kmax = 0;
    bool first = true;
    for (const auto& [e, c] : p.terms) {
        const auto* w = std::get_if<GroupElement::ZnWord>(&e.v);
        if (!w || w->size() != 1) throw ValidationError("mahler oracle needs one-variable input");
        int64_t k = (*w)[0];
        kmin = first ? k : std::min(kmin, k);
        kmax = first ? k : std::max(kmax, k);
        first = false;
    }
    int d = static_cast<int>(kmax - kmin);
    std::vector<FloatC> c(d + 1, FloatC(0.0));
    for (const auto& [e, co] : p.terms) c[std::get<GroupElement::ZnWord>(e.v)[0] - kmin] = to_float(co);

    double from_roots;
    if (d == 0) {
        from_roots = std::log(std::abs(c[0]));
    } else {
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
        for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
        for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        from_roots = std::log(std::abs(c[d]));
        for (int i = 0; i < d; ++i) {
            double r = std::abs(es.eigenvalues()(i));
            if (r > 1.0) from_roots += std::log(r);
        }
    }

    // circle integral of ln|p|, midpoint rule with doubling
    double circle = std::numeric_limits<double>::quiet_NaN();
    for (long npts = 1L << 10; npts <= (1L << 22); npts <<= 1) {
        double acc = 0.0;
        for (long j = 0; j < npts; ++j) {
            double th = 2.0 * M_PI * (static_cast<double>(j) + 0.5) / static_cast<double>(npts);
            FloatC z = std::exp(FloatC(0.0, th));
            FloatC val = c[d];
            for (int i = d - 1; i >= 0; --i) val = val * z + c[i];
            double av = std::abs(val);
            if (av > 0.0) acc += std::log(av);
        }
        double est = acc / static_cast<double>(npts);
        if (!std::isnan(circle) && std::abs(est - circle) <= 1e-9 * std::max(1.0, std::abs(est))) {
            circle = est;
            break;
        }
        circle = est;
    }
    if (std::abs(circle - from_roots) > 1e-5 * std::max(1.0, std::abs(from_roots)))
        throw OracleError("mahler cross-check failed: roots vs circle integral disagree");
    return from_roots;
}

RElem<ExactC> symbolic_det(const GRMat<ExactC>& a) {
    if (a.rows != a.cols) throw ValidationError("symbolic determinant needs a square matrix");
    if (a.g.family() != Family::free_abelian)
        throw ValidationError("symbolic determinant needs a commutative group");
    if (a.rows > kMaxSymbolicSize) throw ResourceError("symbolic determinant size cap exceeded");
    std::vector<int> cols(a.cols);
    for (int j = 0; j < a.cols; ++j) cols[j] = j;
    std::function<RElem<ExactC>(int, std::vector<int>)> rec = [&](int row, std::vector<int> cs) {
        if (cs.size() == 1) return a.at(row, cs[0]);
        RElem<ExactC> acc;
        for (size_t t = 0; t < cs.size(); ++t) {
            const RElem<ExactC>& pivot = a.at(row, cs[t]);
            if (pivot.terms.empty()) continue;
            std::vector<int> rest;
            for (size_t u = 0; u < cs.size(); ++u)
                if (u != t) rest.push_back(cs[u]);
            RElem<ExactC> minor = rec(row + 1, std::move(rest));
            RElem<ExactC> term = rmul(a.g, pivot, minor);
            if (t % 2) term = rscale(term, ExactC(-1));
            acc = radd(acc, term);
        }
        return acc;
    };
    return rec(0, std::move(cols));
}

double mahler_log_matrix(const GRMat<ExactC>& a) {
    require_zn(a, 1, "matrix mahler oracle");
    if (a.rows != a.cols) throw ValidationError("matrix mahler oracle needs a square matrix");
    if (a.rows > 6) throw ResourceError("matrix mahler oracle size cap exceeded");
    RElem<ExactC> det = symbolic_det(a);
    if (det.terms.empty()) throw OracleError("determinant vanishes identically");
    return mahler_log(det);
}

}  // namespace l2lab
