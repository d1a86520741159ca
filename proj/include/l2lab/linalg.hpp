#pragma once

#include <utility>
#include <vector>

#include "l2lab/scalar.hpp"

namespace l2lab {

inline ExactC exact_inv(const ExactC& a) {
    Rational n = a.re * a.re + a.im * a.im;
    return {a.re / n, -a.im / n};
}

// row-echelon rank over Q(i); pivots are exact, so no thresholds
inline int exact_rank(std::vector<std::vector<ExactC>> m) {
    if (m.empty()) return 0;
    int rows = static_cast<int>(m.size());
    int cols = static_cast<int>(m[0].size());
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (!is_zero(m[r][c])) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[rank], m[piv]);
        ExactC inv = exact_inv(m[rank][c]);
        for (int j = c; j < cols; ++j) m[rank][j] = m[rank][j] * inv;
        for (int r = rank + 1; r < rows; ++r) {
            if (is_zero(m[r][c])) continue;
            ExactC f = m[r][c];
            for (int j = c; j < cols; ++j) m[r][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace l2lab
