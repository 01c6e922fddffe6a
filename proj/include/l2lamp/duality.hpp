#pragma once

// Pontryagin-duality export: T rewritten as an element of the rational
// group ring of (Z/p wr Z) x ((Z/2)^3 semidirect GL_3(Z/2)).  Each cylinder
// characteristic function becomes a product of shifted idempotents
//   sigma_i = (1/p) sum_v (v e_i)          (Zero constraint at i)
//   1 - sigma_i                            (NonZero constraint)
// and the rank-one character sum with +-1/8 coefficients for the torsion
// label; all coefficients stay rational, which is the K = Q claim.
//
// Convention: the GL_3 factor acts on the dual (Z/2)^3 by inverse-transpose
// (the adjoint of the natural action under the dot-product character
// pairing); the resulting group is the same semidirect product up to the
// isomorphism M -> M^{-T}.

#include "l2lamp/crossed_op.hpp"
#include "l2lamp/dynamics.hpp"
#include "l2lamp/rational.hpp"
#include "l2lamp/system.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace l2lamp {

// group word (lamp configuration, shift, torsion character, matrix)
struct DualWord {
    std::map<int64_t, int> lamps;  // position -> value in 1..p-1, zeros omitted
    int64_t shift = 0;
    F2Vec torsion = 0;
    F2Matrix mat;

    bool is_identity() const;
    auto operator<=>(const DualWord&) const = default;
};

DualWord word_mul(const DualWord& a, const DualWord& b, int p);
DualWord word_inverse(const DualWord& a, int p);

struct GroupRingElement {
    int p = 2;
    std::map<DualWord, Rational> terms;  // merged; zero coefficients dropped

    void add_term(const DualWord& w, const Rational& c);
    GroupRingElement operator+(const GroupRingElement& o) const;
    GroupRingElement operator*(const GroupRingElement& o) const;  // convolution
    GroupRingElement scaled(const Rational& c) const;
    bool operator==(const GroupRingElement&) const = default;
};

GroupRingElement ring_identity(int p);
GroupRingElement sigma_idempotent(int64_t position, int p);
GroupRingElement label_delta(F2Vec label_vec, int p);

// the dual of T over the 15-piece partition (the U piece has zero
// coefficient and contributes nothing)
GroupRingElement export_group_ring(const CPElement& T, const System& sys);

// Character evaluation of the function part against a point of X: exact in
// Q, using the relation 1 + w + ... + w^{p-1} = 0 for the p-th root of
// unity.  Collects the words with the given (shift, matrix) part.  Fails
// (returns false) if the cyclotomic combination is not rational.
bool evaluate_bucket(const GroupRingElement& e, const GammaElement& gamma, const LazyPoint& x,
                     const TorsionAssignment& ta, Rational* value);

// all distinct (shift, matrix) parts occurring in e
std::vector<GammaElement> gamma_buckets(const GroupRingElement& e);

nlohmann::json to_json(const GroupRingElement& e);
GroupRingElement group_ring_from_json(const nlohmann::json& j);

// --- finite groups and the regular representation -----------------------

struct FiniteGroup {
    int order = 0;
    int identity = 0;
    std::vector<int> mul;  // order x order, row-major
    std::vector<int> inv;

    int op(int a, int b) const { return mul[size_t(a) * order + b]; }

    static FiniteGroup cyclic(int n);
    static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);
    // (Z/2)^3 semidirect GL_3(F2), 1344 elements, built once
    static const FiniteGroup& torsion_group();
};

using SparseGroupRing = std::vector<std::pair<int, Rational>>;  // element index -> coeff

// left-regular permutation action weighted by coefficients;
// tr(iota(theta)) = |G| * theta(e) exactly
RationalMatrix regular_embedding(const FiniteGroup& g, const SparseGroupRing& theta);

// |H| dim_vN ker((1-pi) + pi theta) = dim_vN ker theta for G = Z/n, H = Z/2,
// pi = (e + h)/2; both sides computed exactly through regular
// representations (dim_vN = kernel dim / group order)
bool scaling_lemma_check(int n, const std::vector<Rational>& theta_on_zn);

}  // namespace l2lamp
