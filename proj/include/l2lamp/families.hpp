#pragma once

// The family census: seed cylinders, generated template graphs, closed-form
// measures, the kernel-dimension lemma values, and the exact
// probability-sum identity.

#include "l2lamp/decomposer.hpp"
#include "l2lamp/system.hpp"

#include <string>
#include <vector>

namespace l2lamp {

// the quoted seed cylinders: (0 1^{k-1} underline1 0 0, A),
// (0 0 underline1 1^{l-1} 0, C), (0 1^k underline0 1^l 0, I);
// u seeds from any U-labeled cylinder
CylinderSet seed_cylinder(FamilyId id);

// closure of the seed extended by the generic (all-zero) boundary;
// this is what System::family_template caches
SGraph generate_template(FamilyId id, const System& sys);

// exact measure of the family class, alpha = 1/p, beta = (p-1)/p
Rational mu_closed_form(FamilyId id, int p);

// lemma values: u -> 1, g -> 0, h -> 1, j -> 2 iff l = 2^{k-1}-1 else 1
int expected_kernel_dim(FamilyId id);

struct ProbabilitySumReport {
    Rational mu_u, g_total, h_total, j_total;
    Rational total;   // exact
    bool ok = false;  // total == 1
};

// mu(u) + sum_k mu(g(k)) + sum_l mu(h(l)) + sum_{k,l} mu(j(k,l)), each
// family summed in closed form through moment_sum
ProbabilitySumReport verify_probability_sum(int p);

struct CensusRow {
    FamilyId id;
    int vertices = 0;
    Rational mu;
    int kernel_dim = 0;
};

// rows for u and all families with k,l <= range, canonical order
std::vector<CensusRow> family_census(int p, int range);
std::string census_csv(const std::vector<CensusRow>& rows, int decimal_digits = 12);

}  // namespace l2lamp
