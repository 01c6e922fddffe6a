#pragma once

// The operators S and T as finite formal sums over the 15-piece cylinder
// partition of X, plus the exact partition verifier and JSON round-trip.

#include "l2lamp/dynamics.hpp"
#include "l2lamp/rational.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace l2lamp {

struct CPCoef {
    Rational coeff;
    GammaElement gamma;
    bool operator==(const CPCoef&) const = default;
};

// one summand theta_i * chi_i; a missing cylinder marks the U piece
// (complement of the other fourteen)
struct CPTerm {
    std::vector<CPCoef> theta;           // gammas pairwise distinct
    std::optional<CylinderSet> chi;
    bool operator==(const CPTerm&) const = default;
};

struct CPElement {
    int p = 2;
    std::vector<CPTerm> terms;  // piece i at index i-1; the U piece is last

    bool operator==(const CPElement&) const = default;
};

inline constexpr int kPieceCount = 15;
inline constexpr int kPieceU = 15;          // 1-based index of the U piece
inline constexpr int kPieceIDrop = 1;       // (1 underline0 1, I)
inline constexpr int kPieceFDrop = 14;      // (underline1 0, F)

// T = S + (1 - chi(U) - chi(1underline{0}1,I) - chi(underline{1}0,F)):
// the identity survives on every piece except these three
bool piece_keeps_identity(int piece);

// the fourteen summands of S in paper order, followed by 0*chi(U)
CPElement build_S(int p, const TransitionFamily& tf);

// same partition, identity absorbed per piece
CPElement build_T(const CPElement& S);

// the twelve cylinders whose union is U
std::vector<CylinderSet> u_complement_pieces();

// 1-based piece index of the piece containing x
int piece_of_point(const CPElement& S, const LazyPoint& x);

// exact measure of piece i (U computed as 1 minus the rest)
Rational piece_measure(const CPElement& S, int piece);

struct PartitionReport {
    bool ok = false;
    std::string detail;          // first violation, empty when ok
    Rational total;              // exact sum over the 14 cylinders + 12 U pieces
    Rational mu_u;               // exact measure of U
};

// certifies pairwise disjointness of the 15 pieces, total measure 1,
// and that the 12-piece expansion of U is disjoint and exhausts the
// complement (by exhausting all label x window sign patterns)
PartitionReport verify_partition(const CPElement& S, int p);

nlohmann::json to_json(const CPElement& e);
CPElement cpelement_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CylinderSet& c);
CylinderSet cylinder_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GammaElement& g);
GammaElement gamma_from_json(const nlohmann::json& j);

}  // namespace l2lamp
