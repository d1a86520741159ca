#pragma once

#include <array>
#include <vector>

#include "l2lab/gr_matrix.hpp"

namespace l2lab {

// Closed-form reference values computed by routes independent of the power
// iteration: regular representation for finite groups, torus function
// calculus for free abelian groups, Mahler measures for one variable.
// Inputs are exact; float only enters through eigenvalue solvers inside.

struct FiniteOracle {
    Rational kernel_dim;  // exact, from the rank over Q(i)
    double log_det = 0.0;
    int rank = 0;
    int reg_dim = 0;  // rows * |G|
};

// Kernel dimension and log-determinant through the regular representation.
// The rank is exact; zero eigenvalues are identified by count, not threshold.
FiniteOracle finite_oracle(const GRMat<ExactC>& a);

// tr((1 - k^{-2} A A†)^p) for p = 1..p_max from the eigenvalues of the
// represented Gram matrix.
std::vector<double> finite_char_seq(const GRMat<ExactC>& a, double k_squared, int p_max);

// rows - generic rank, sampled at seeded random torus points which must all
// agree. Free abelian rank <= 3.
Rational torus_kernel_dim(const GRMat<ExactC>& a);

// Spectral distribution value: the average over a midpoint grid of the count
// of eigenvalues of A(z)A(z)† that are <= lambda^2. Free abelian rank <= 2.
double torus_density(const GRMat<ExactC>& a, double lambda, int log2_grid);

struct TorusDensity {
    double coarse = 0.0;
    double fine = 0.0;
    double extrapolated = 0.0;  // 2*fine - coarse, first-order step halving
};

TorusDensity torus_density_refined(const GRMat<ExactC>& a, double lambda, int log2_grid);

struct TorusDet {
    double log_det = 0.0;
    double est_error = 0.0;  // last doubling difference
    long points = 0;
};

// Log-determinant by doubling midpoint quadrature of the positive part of
// ln det(A(z)A(z)†)^{1/2}; the fixed number of zero modes per point comes
// from the generic rank. Free abelian rank <= 2.
TorusDet torus_fk_det(const GRMat<ExactC>& a, double rel_tol = 1e-9, int max_log2 = 0);

// ln of the Mahler measure of a one-variable Laurent polynomial: companion
// matrix roots, cross-checked against the circle integral. Throws on the
// zero polynomial.
double mahler_log(const RElem<ExactC>& p);

// Symbolic determinant of a square matrix over one variable (cofactor
// expansion, exact), then its Mahler measure. Square, free abelian rank 1,
// size <= 6. Throws when the determinant vanishes identically.
double mahler_log_matrix(const GRMat<ExactC>& a);

RElem<ExactC> symbolic_det(const GRMat<ExactC>& a);

}  // namespace l2lab
