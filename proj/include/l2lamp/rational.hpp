#pragma once

// Exact rational arithmetic, dense rational matrices, kernel computations,
// and the closed-form series identities used by the summation engine.
//
// Rational is GMP's canonical fraction type: always in lowest terms,
// denominator > 0.  Everything in this header is exact; no floating point
// enters any computation.  Decimal strings are a display-only concern.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace l2lamp {

using Rational = mpq_class;
using Integer = mpz_class;

// canonicalized fraction n/d, d != 0
Rational rat(long n, long d = 1);
Rational rat(const Integer& n, const Integer& d);

// "n/d" (or "n" when d = 1); parse accepts both forms
std::string rat_string(const Rational& x);
Rational rat_parse(const std::string& s);

struct RationalMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Rational> entries;  // row-major, entries.size() == rows*cols

    RationalMatrix() = default;
    RationalMatrix(int r, int c) : rows(r), cols(c), entries(size_t(r) * c) {}

    Rational& at(int i, int j) { return entries[size_t(i) * cols + j]; }
    const Rational& at(int i, int j) const { return entries[size_t(i) * cols + j]; }

    static RationalMatrix identity(int n);

    std::vector<Rational> apply(const std::vector<Rational>& v) const;
    bool operator==(const RationalMatrix& o) const = default;
};

// rank by fraction-free (Bareiss) elimination; exact division throughout
int matrix_rank(const RationalMatrix& m);

// dim ker = cols - rank
int kernel_dimension(const RationalMatrix& m);

// basis of the right kernel; m * v = 0 exactly for each returned v
std::vector<std::vector<Rational>> kernel_basis(const RationalMatrix& m);

// sum_{n>=1} (n+C) x^n = x/(1-x)^2 + C x/(1-x), for 0 <= x < 1
Rational moment_sum(const Rational& C, const Rational& x);

// sum_{n>=1} x^n = x/(1-x), for 0 <= x < 1
Rational geometric_sum(const Rational& x);

struct RationalInterval {
    Rational lo, hi;  // lo <= hi

    RationalInterval() = default;
    RationalInterval(Rational l, Rational h);

    Rational width() const { return hi - lo; }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool contains(const RationalInterval& o) const { return lo <= o.lo && o.hi <= hi; }
    bool intersects(const RationalInterval& o) const { return lo <= o.hi && o.lo <= hi; }
};

// decimal expansion with the given number of fractional digits,
// rounded toward -inf (round_up = false) or +inf (round_up = true)
std::string decimal_string(const Rational& x, int digits, bool round_up = false);

// digits certified by the enclosure: the common prefix of the two
// directed renderings of lo and hi
std::string certified_decimal(const RationalInterval& iv, int digits);

}  // namespace l2lamp
