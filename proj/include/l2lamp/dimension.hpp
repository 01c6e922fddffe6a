#pragma once

// The von Neumann dimension of ker T, assembled two ways: through the
// decomposition theorem's sum over family classes, and through the direct
// closed form
//
//   (4p^3 + 3p^2 + 2p - 1) / (8p^3) + 1/(8p^2(p-1)) sum_k beta^{k + 2^{k-1}}
//
// with beta = (p-1)/p.  Both routes produce exact rational enclosures whose
// width is the geometric tail bound of the truncated lacunary series.

#include "l2lamp/rational.hpp"
#include "l2lamp/system.hpp"

#include <map>
#include <string>
#include <vector>

namespace l2lamp {

// Exact summation keeps the lacunary exponent k + 2^{k-1} below this bound;
// terms past it are covered by the tail interval instead (an exact rational
// with a 2^39-bit denominator is not a number anyone can store).  At the
// cap the enclosure width is below beta^32784, i.e. ~1e-9869 for p = 2.
inline constexpr int64_t kLacunaryExponentCap = 65536;

// largest K <= kmax whose term exponent stays within the cap
int effective_lacunary_terms(int kmax);

// [partial sum, partial sum + beta^{E(K+1)}/(1-beta)] where E(k) = k + 2^{k-1}
// and K is the effective truncation; always contains the full series
RationalInterval lacunary_series(int p, int kmax);

struct DimensionResult {
    int p = 2;
    int kmax = 0;            // requested truncation
    int kmax_effective = 0;  // actual truncation after the exponent cap
    std::string method;      // "graph-sum" or "closed-form"
    RationalInterval enclosure;
    std::vector<std::pair<std::string, Rational>> contributions;

    const Rational& head() const { return enclosure.lo; }
    std::string decimal(int digits) const { return certified_decimal(enclosure, digits); }
};

// sum over the census: mu(u)*1 + 0 (g) + closed-form h and generic-j parts
// + the truncated lacunary extra from the j dichotomy.  The family
// invariants backing the lemma values are the callers' responsibility
// (cmd_verify_graphs / the acceptance suite run them).
DimensionResult graph_sum_dimension(const System& sys, int kmax);

// direct evaluation of the corollary formula
DimensionResult closed_form_dimension(int p, int kmax);

struct CrossCheckReport {
    bool heads_equal = false;  // exact equality of the two truncated heads
    bool enclosures_intersect = false;
    Rational defect;           // graph head - closed-form head, exact
    bool ok() const { return heads_equal && enclosures_intersect; }
};

CrossCheckReport cross_check(const System& sys, int kmax);

}  // namespace l2lamp
