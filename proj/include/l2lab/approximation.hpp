#pragma once

#include <vector>

#include "l2lab/complexes.hpp"
#include "l2lab/gr_matrix.hpp"

namespace l2lab {

// Finite quotient approximations of kernel dimensions. Each quotient value
// is a rational with denominator dividing the quotient order; the sequence
// over growing parameters approaches the value over the full group.

// Free abelian rank n: evaluation at all k-th root of unity tuples, kernel
// counted per point through a singular value threshold.
Rational zn_quotient_kernel_dim(const GRMat<ExactC>& a, long k);

// Lamplighter: the wreath-product quotient with cyclic base of size n_quot,
// decomposed over lamp characters into n_quot x n_quot blocks per subset,
// ranks exact over Q(i). n_quot <= 14.
Rational lamplighter_quotient_kernel_dim(const GRMat<ExactC>& a, int n_quot);

// Dispatch on the group family; param is k or n_quot.
Rational quotient_kernel_dim(const GRMat<ExactC>& a, long param);

struct QuotientLevel {
    long param = 0;
    Rational value;
};

std::vector<QuotientLevel> kernel_dim_tower(const GRMat<ExactC>& a, const std::vector<long>& params);

// Betti numbers of the quotient complex, exact in the quotient: kernel
// dimension of each differential minus the image dimension of the next.
std::vector<Rational> quotient_betti(const ChainComplex<ExactC>& cc, long param);

// Restriction of scalars to a finite-index subgroup of a free abelian group.
// The subgroup is given by its basis rows; the result is a matrix over a
// free abelian group of the same rank whose size is scaled by the index.
// Kernel dimensions scale by the index, log-determinants likewise.
struct Restriction {
    GRMat<ExactC> mat;
    long index = 0;
    std::vector<std::vector<int64_t>> transversal;
};

Restriction restrict_index(const GRMat<ExactC>& a, const std::vector<std::vector<int64_t>>& subgroup);

}  // namespace l2lab
