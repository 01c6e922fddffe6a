#include "l2lamp/dimension.hpp"

#include "l2lamp/families.hpp"

#include <stdexcept>

namespace l2lamp {

namespace {

int64_t term_exponent(int k) { return int64_t(k) + (int64_t(1) << (k - 1)); }

Rational rat_pow(const Rational& x, int64_t e) {
    Rational out = 1;
    Rational base = x;
    for (int64_t n = e; n > 0; n >>= 1) {
        if (n & 1) out *= base;
        if (n > 1) base *= base;
    }
    return out;
}

}  // namespace

int effective_lacunary_terms(int kmax) {
    if (kmax < 1) throw std::domain_error("effective_lacunary_terms: Kmax >= 1 required");
    int k = 1;
    while (k < kmax && k + 1 <= 62 && term_exponent(k + 1) <= kLacunaryExponentCap) ++k;
    return k;
}

RationalInterval lacunary_series(int p, int kmax) {
    if (p < 2) throw std::domain_error("lacunary_series: p >= 2 required");
    const int keff = effective_lacunary_terms(kmax);
    Rational beta = rat(p - 1, p), alpha = rat(1, p);
    Rational partial = 0;
    for (int k = 1; k <= keff; ++k) partial += rat_pow(beta, term_exponent(k));
    // remaining exponents are >= E(keff+1) and strictly increasing, so the
    // full geometric series from E(keff+1) dominates the tail
    Rational tail = rat_pow(beta, term_exponent(keff + 1)) / alpha;
    return {partial, partial + tail};
}

DimensionResult graph_sum_dimension(const System& sys, int kmax) {
    if (kmax < 1) throw std::domain_error("graph_sum_dimension: Kmax >= 1 required");
    const int p = sys.p;
    Rational alpha = rat(1, p), beta = rat(p - 1, p);
    Rational a3 = alpha * alpha * alpha;

    DimensionResult res;
    res.p = p;
    res.kmax = kmax;
    res.kmax_effective = effective_lacunary_terms(kmax);
    res.method = "graph-sum";

    // mu(g)/|V| dim ker T^g summed per family class
    Rational u_part = mu_closed_form(FamilyId::u(), p);                 // dim 1
    Rational g_part = 0;                                                // dim 0
    Rational h_part = a3 / 8 * geometric_sum(beta);                     // dim 1 each
    Rational j_generic = a3 / 8 * geometric_sum(beta) * geometric_sum(beta);  // every j has dim >= 1
    // the dichotomy adds one more kernel dimension exactly at l = 2^{k-1}-1:
    // sum_k (1/8) a^3 b^{k + 2^{k-1} - 1}
    RationalInterval lac = lacunary_series(p, kmax);
    Rational lac_coef = a3 / 8 / beta;

    Rational head = u_part + g_part + h_part + j_generic + lac_coef * lac.lo;
    res.enclosure = {head, head + lac_coef * lac.width()};
    res.contributions = {
        {"u", u_part},
        {"g", g_part},
        {"h", h_part},
        {"j-generic", j_generic},
        {"j-dichotomy-partial", lac_coef * lac.lo},
    };
    return res;
}

DimensionResult closed_form_dimension(int p, int kmax) {
    if (p < 2) throw std::domain_error("closed_form_dimension: p >= 2 required");
    if (kmax < 1) throw std::domain_error("closed_form_dimension: Kmax >= 1 required");

    DimensionResult res;
    res.p = p;
    res.kmax = kmax;
    res.kmax_effective = effective_lacunary_terms(kmax);
    res.method = "closed-form";

    Rational head_rational = rat(4 * int64_t(p) * p * p + 3 * int64_t(p) * p + 2 * p - 1,
                                 8 * int64_t(p) * p * p);
    Rational coef = rat(1, 8 * int64_t(p) * p * (p - 1));
    RationalInterval lac = lacunary_series(p, kmax);

    Rational lo = head_rational + coef * lac.lo;
    res.enclosure = {lo, lo + coef * lac.width()};
    res.contributions = {
        {"rational-head", head_rational},
        {"series-partial", coef * lac.lo},
    };
    return res;
}

CrossCheckReport cross_check(const System& sys, int kmax) {
    DimensionResult gs = graph_sum_dimension(sys, kmax);
    DimensionResult cf = closed_form_dimension(sys.p, kmax);
    CrossCheckReport rep;
    rep.defect = gs.head() - cf.head();
    rep.heads_equal = (rep.defect == 0);
    rep.enclosures_intersect = gs.enclosure.intersects(cf.enclosure);
    return rep;
}

}  // namespace l2lamp
