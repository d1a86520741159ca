#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace l2lab {

using Rational = mpq_class;

// Exact complex scalar: a pair of arbitrary-precision rationals kept in
// lowest terms (gmp canonicalizes on every operation).
struct ExactC {
    Rational re, im;

    ExactC() : re(0), im(0) {}
    ExactC(long r) : re(r), im(0) {}
    ExactC(Rational r) : re(std::move(r)), im(0) {}
    ExactC(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    ExactC& operator+=(const ExactC& o) { re += o.re; im += o.im; return *this; }
    ExactC& operator-=(const ExactC& o) { re -= o.re; im -= o.im; return *this; }

    friend ExactC operator+(const ExactC& a, const ExactC& b) { return {a.re + b.re, a.im + b.im}; }
    friend ExactC operator-(const ExactC& a, const ExactC& b) { return {a.re - b.re, a.im - b.im}; }
    friend ExactC operator-(const ExactC& a) { return {-a.re, -a.im}; }
    friend ExactC operator*(const ExactC& a, const ExactC& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const ExactC& a, const ExactC& b) { return a.re == b.re && a.im == b.im; }
};

using FloatC = std::complex<double>;

enum class ScalarMode { exact, floating };

inline ExactC conj_c(const ExactC& a) { return {a.re, -a.im}; }
inline FloatC conj_c(const FloatC& a) { return std::conj(a); }

inline bool is_zero(const ExactC& a) { return a.re == 0 && a.im == 0; }
inline bool is_zero(const FloatC& a) { return a == FloatC(0.0, 0.0); }

inline double to_double(const Rational& r) { return r.get_d(); }
inline double abs_c(const ExactC& a) { return std::hypot(a.re.get_d(), a.im.get_d()); }
inline double abs_c(const FloatC& a) { return std::abs(a); }

// |re| + |im|, an exact rational upper bound for the modulus; equals it for
// real scalars. Used where an exact K bound is required.
inline Rational abs_bound(const ExactC& a) { return abs(a.re) + abs(a.im); }

inline double real_part(const ExactC& a) { return a.re.get_d(); }
inline double real_part(const FloatC& a) { return a.real(); }

inline FloatC to_float(const ExactC& a) { return {a.re.get_d(), a.im.get_d()}; }
inline FloatC to_float(const FloatC& a) { return a; }

template <class C>
struct scalar_traits;

template <>
struct scalar_traits<ExactC> {
    static constexpr bool exact = true;
    static constexpr ScalarMode mode = ScalarMode::exact;
    // exact mode drops nothing but true zeros
    static constexpr double drop_floor = 0.0;
    using real_type = Rational;
};

template <>
struct scalar_traits<FloatC> {
    static constexpr bool exact = false;
    static constexpr ScalarMode mode = ScalarMode::floating;
    // subnormal dust is dropped so supports cannot fill up with noise
    static constexpr double drop_floor = 1e-300;
    using real_type = double;
};

inline std::string rational_str(const Rational& r) { return r.get_str(); }

}  // namespace l2lab
