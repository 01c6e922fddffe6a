#include "l2lamp/rational.hpp"

#include <doctest.h>

#include <random>

using namespace l2lamp;

namespace {

RationalMatrix from_rows(const std::vector<std::vector<long>>& rows) {
    RationalMatrix m(int(rows.size()), rows.empty() ? 0 : int(rows[0].size()));
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m.at(i, j) = rat(rows[i][j]);
    return m;
}

// independent oracle: plain rational Gaussian elimination
int gauss_rank(RationalMatrix m) {
    int r = 0;
    for (int c = 0; c < m.cols && r < m.rows; ++c) {
        int piv = -1;
        for (int i = r; i < m.rows; ++i)
            if (m.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        for (int j = 0; j < m.cols; ++j) std::swap(m.at(r, j), m.at(piv, j));
        for (int i = 0; i < m.rows; ++i) {
            if (i == r || m.at(i, c) == 0) continue;
            Rational f = m.at(i, c) / m.at(r, c);
            for (int j = 0; j < m.cols; ++j) m.at(i, j) -= f * m.at(r, j);
        }
        ++r;
    }
    return r;
}

bool is_zero(const std::vector<Rational>& v) {
    for (const Rational& x : v)
        if (x != 0) return false;
    return true;
}

}  // namespace

TEST_CASE("kernel_dimension on pinned matrices") {
    CHECK(kernel_dimension(from_rows({{1, 0}, {-1, 1}})) == 0);
    // matrix of T^{h(1)} in basis (c1, d1, f)
    CHECK(kernel_dimension(from_rows({{1, 0, 0}, {1, 1, 0}, {0, -1, 0}})) == 1);
    CHECK(kernel_dimension(from_rows({{0}})) == 1);
}

TEST_CASE("kernel_basis on pinned matrices") {
    auto h1 = from_rows({{1, 0, 0}, {1, 1, 0}, {0, -1, 0}});
    auto basis = kernel_basis(h1);
    REQUIRE(basis.size() == 1);
    CHECK(basis[0] == std::vector<Rational>{0, 0, 1});

    CHECK(kernel_basis(RationalMatrix::identity(2)).empty());

    // matrix of T^{j(2,1)} produced by the closure (8 vertices; the paper's
    // dichotomy gives dim 2 at k=2, l=1)
    auto j21 = from_rows({{0, 0, 0, 0, 0, 0, 0, 0},
                          {-1, 1, 0, 0, 1, 0, 0, 0},
                          {1, 0, 1, 0, 0, 0, -1, 0},
                          {0, -1, 0, 0, 0, 0, 0, 0},
                          {0, 0, -1, 0, 1, 0, 0, 0},
                          {0, 0, -2, 0, 0, 1, 0, 0},
                          {0, 0, 0, 0, 0, 0, 1, -1},
                          {0, 0, 0, 0, 0, -1, 0, 1}});
    auto jb = kernel_basis(j21);
    CHECK(jb.size() == 2);
    for (const auto& v : jb) CHECK(is_zero(j21.apply(v)));
}

TEST_CASE("kernel dimension equals basis size and vectors annihilate") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<int> dim(1, 7), entry(-4, 4), den(1, 3);
    for (int trial = 0; trial < 400; ++trial) {
        RationalMatrix m(dim(rng), dim(rng));
        for (auto& e : m.entries) e = rat(entry(rng), den(rng));
        auto basis = kernel_basis(m);
        CHECK(int(basis.size()) == kernel_dimension(m));
        for (const auto& v : basis) CHECK(is_zero(m.apply(v)));
        CHECK(kernel_dimension(m) == m.cols - gauss_rank(m));
    }
}

TEST_CASE("kernel dimension invariant under permutation and row scaling") {
    std::mt19937_64 rng(999);
    std::uniform_int_distribution<int> dim(2, 6), entry(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        int r = dim(rng), c = dim(rng);
        RationalMatrix m(r, c);
        for (auto& e : m.entries) e = rat(entry(rng));
        int want = kernel_dimension(m);

        RationalMatrix perm(r, c);
        std::vector<int> rp(r), cp(c);
        for (int i = 0; i < r; ++i) rp[i] = i;
        for (int j = 0; j < c; ++j) cp[j] = j;
        std::shuffle(rp.begin(), rp.end(), rng);
        std::shuffle(cp.begin(), cp.end(), rng);
        std::uniform_int_distribution<int> nz(1, 5);
        for (int i = 0; i < r; ++i) {
            Rational scale = rat(nz(rng), nz(rng));
            for (int j = 0; j < c; ++j) perm.at(i, j) = scale * m.at(rp[i], cp[j]);
        }
        CHECK(kernel_dimension(perm) == want);
    }
}

TEST_CASE("moment_sum closed form") {
    CHECK(moment_sum(rat(0), rat(1, 2)) == 2);
    CHECK(moment_sum(rat(1), rat(1, 2)) == 3);
    CHECK(moment_sum(rat(0), rat(0)) == 0);
    CHECK_THROWS_AS(moment_sum(rat(0), rat(1)), std::domain_error);
    CHECK_THROWS_AS(moment_sum(rat(0), rat(-1, 2)), std::domain_error);
    CHECK_THROWS_AS(moment_sum(rat(0), rat(3, 2)), std::domain_error);
}

TEST_CASE("moment_sum matches partial sums within the geometric tail bound") {
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<int> num(0, 9), cd(0, 20);
    const int N = 50;
    for (int trial = 0; trial < 100; ++trial) {
        Rational x = rat(num(rng), 10);  // 0 <= x < 1
        Rational C = rat(cd(rng), 4);
        Rational partial = 0, xn = 1;
        for (int n = 1; n <= N; ++n) {
            xn *= x;
            partial += (Rational(n) + C) * xn;
        }
        Rational closed = moment_sum(C, x);
        Rational err = closed - partial;
        CHECK(err >= 0);
        // tail <= x^{N+1} (N+1+C+1/(1-x)) / (1-x)
        Rational bound = xn * x * (Rational(N + 1) + C + 1 / (1 - x)) / (1 - x);
        CHECK(err <= bound);
    }
}

TEST_CASE("interval and decimal rendering") {
    RationalInterval iv(rat(744, 1000), rat(745, 1000));
    CHECK(iv.width() == rat(1, 1000));
    CHECK(iv.contains(rat(7445, 10000)));
    CHECK_THROWS_AS(RationalInterval(rat(2), rat(1)), std::invalid_argument);

    CHECK(decimal_string(rat(47, 64), 6) == "0.734375");
    CHECK(decimal_string(rat(1, 3), 4) == "0.3333");
    CHECK(decimal_string(rat(1, 3), 4, true) == "0.3334");
    CHECK(decimal_string(rat(-1, 3), 2) == "-0.34");
    CHECK(decimal_string(rat(-1, 3), 2, true) == "-0.33");
    CHECK(decimal_string(rat(5, 1), 0) == "5");

    CHECK(certified_decimal(RationalInterval(rat(12344, 10000), rat(12346, 10000)), 6) == "1.234");
}

TEST_CASE("rational string round trip") {
    CHECK(rat_string(rat(-3, 6)) == "-1/2");
    CHECK(rat_string(rat(4, 2)) == "2");
    CHECK(rat_parse("45/64") == rat(45, 64));
    CHECK(rat_parse("7") == rat(7));
}
