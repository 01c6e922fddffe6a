#include "l2lamp/rational.hpp"

#include <algorithm>
#include <stdexcept>

namespace l2lamp {

Rational rat(long n, long d) {
    if (d == 0) throw std::domain_error("rat: zero denominator");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

Rational rat(const Integer& n, const Integer& d) {
    if (d == 0) throw std::domain_error("rat: zero denominator");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string rat_string(const Rational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational rat_parse(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("rat_parse: bad rational '" + s + "'");
    q.canonicalize();
    return q;
}

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

std::vector<Rational> RationalMatrix::apply(const std::vector<Rational>& v) const {
    if (int(v.size()) != cols) throw std::invalid_argument("apply: size mismatch");
    std::vector<Rational> out(rows);
    for (int i = 0; i < rows; ++i) {
        Rational s = 0;
        for (int j = 0; j < cols; ++j)
            if (at(i, j) != 0) s += at(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

namespace {

// Fraction-free row echelon form (one-step Bareiss with column skipping).
// Input rows are scaled to integers first; thereafter every update
//   a[i][j] <- (piv * a[i][j] - a[i][pc] * a[r][j]) / prev
// divides exactly (the entries are minors of the scaled matrix).
struct Echelon {
    int rows, cols;
    std::vector<Integer> a;  // row-major
    std::vector<int> pivot_cols;

    Integer& at(int i, int j) { return a[size_t(i) * cols + j]; }
};

Echelon echelonize(const RationalMatrix& m) {
    Echelon e;
    e.rows = m.rows;
    e.cols = m.cols;
    e.a.resize(size_t(m.rows) * m.cols);
    for (int i = 0; i < m.rows; ++i) {
        Integer den = 1;
        for (int j = 0; j < m.cols; ++j) den = lcm(den, m.at(i, j).get_den());
        for (int j = 0; j < m.cols; ++j) {
            const Rational& q = m.at(i, j);
            e.at(i, j) = q.get_num() * (den / q.get_den());
        }
    }

    Integer prev = 1;
    int r = 0;
    for (int c = 0; c < e.cols && r < e.rows; ++c) {
        int piv = -1;
        for (int i = r; i < e.rows; ++i)
            if (e.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < e.cols; ++j) swap(e.at(piv, j), e.at(r, j));
        for (int i = r + 1; i < e.rows; ++i) {
            for (int j = c + 1; j < e.cols; ++j) {
                Integer num = e.at(r, c) * e.at(i, j) - e.at(i, c) * e.at(r, j);
                Integer q, rem;
                mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
                if (rem != 0) throw std::logic_error("bareiss: inexact division");
                e.at(i, j) = q;
            }
            e.at(i, c) = 0;
        }
        prev = e.at(r, c);
        e.pivot_cols.push_back(c);
        ++r;
    }
    return e;
}

}  // namespace

int matrix_rank(const RationalMatrix& m) { return int(echelonize(m).pivot_cols.size()); }

int kernel_dimension(const RationalMatrix& m) { return m.cols - matrix_rank(m); }

std::vector<std::vector<Rational>> kernel_basis(const RationalMatrix& m) {
    Echelon e = echelonize(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : e.pivot_cols) is_pivot[c] = true;

    std::vector<std::vector<Rational>> basis;
    for (int f = 0; f < m.cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(m.cols);
        v[f] = 1;
        // back-substitute through the echelon rows
        for (int r = int(e.pivot_cols.size()) - 1; r >= 0; --r) {
            int pc = e.pivot_cols[r];
            Rational s = 0;
            for (int j = pc + 1; j < m.cols; ++j)
                if (e.at(r, j) != 0 && v[j] != 0) s += rat(e.at(r, j), 1) * v[j];
            v[pc] = -s / rat(e.at(r, pc), 1);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

Rational moment_sum(const Rational& C, const Rational& x) {
    if (x < 0 || x >= 1) throw std::domain_error("moment_sum: requires 0 <= x < 1");
    Rational one_minus = 1 - x;
    return x / (one_minus * one_minus) + C * x / one_minus;
}

Rational geometric_sum(const Rational& x) {
    if (x < 0 || x >= 1) throw std::domain_error("geometric_sum: requires 0 <= x < 1");
    return x / (1 - x);
}

RationalInterval::RationalInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (lo > hi) throw std::invalid_argument("RationalInterval: lo > hi");
}

std::string decimal_string(const Rational& x, int digits, bool round_up) {
    if (digits < 0) throw std::invalid_argument("decimal_string: digits < 0");
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    // n = floor/ceil of x * 10^digits
    Integer num = x.get_num() * scale, n;
    if (round_up)
        mpz_cdiv_q(n.get_mpz_t(), num.get_mpz_t(), x.get_den().get_mpz_t());
    else
        mpz_fdiv_q(n.get_mpz_t(), num.get_mpz_t(), x.get_den().get_mpz_t());
    bool neg = n < 0;
    if (neg) n = -n;
    Integer ip = n / scale, fp = n % scale;
    std::string out = neg ? "-" : "";
    out += ip.get_str();
    if (digits > 0) {
        std::string frac = fp.get_str();
        frac.insert(0, size_t(digits) - frac.size(), '0');
        out += "." + frac;
    }
    return out;
}

std::string certified_decimal(const RationalInterval& iv, int digits) {
    // two guard digits keep the directed roundings from eating the last
    // requested digit when the enclosure is much tighter than 10^-digits
    std::string lo = decimal_string(iv.lo, digits + 2, false);
    std::string hi = decimal_string(iv.hi, digits + 2, true);
    size_t n = 0;
    while (n < lo.size() && n < hi.size() && lo[n] == hi[n]) ++n;
    std::string out = lo.substr(0, n);
    size_t dot = out.find('.');
    if (dot != std::string::npos && out.size() > dot + 1 + size_t(digits))
        out.resize(dot + 1 + size_t(digits));
    return out;
}

}  // namespace l2lamp
