#pragma once

// S-graphs: finite directed graphs with vertices labeled by summand piece
// and edges labeled by elements of Gamma, the structural conditions of the
// decomposition theorem, the induced finite-dimensional operator T^g, and
// the flow-lemma verifier.

#include "l2lamp/crossed_op.hpp"
#include "l2lamp/dynamics.hpp"
#include "l2lamp/rational.hpp"

#include <nlohmann/json_fwd.hpp>

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace l2lamp {

struct SGraphEdge {
    int src = 0;
    int dst = 0;
    GammaElement gamma;
    bool operator==(const SGraphEdge&) const = default;
};

struct SGraph {
    std::vector<int> piece;                  // per-vertex summand index, 1..15
    std::vector<SGraphEdge> edges;

    // present on closure outputs: vertex v embeds as the point
    // (source, offset[v], label[v])
    struct EmbeddedVertex {
        int64_t offset = 0;
        Letter label = Letter::U1;
        bool operator==(const EmbeddedVertex&) const = default;
    };
    std::optional<std::vector<EmbeddedVertex>> embedding;
    std::shared_ptr<const PointSource> source;  // backs the embedding, may be null

    int vertex_count() const { return int(piece.size()); }
    std::vector<std::vector<int>> out_edge_index() const;  // vertex -> edge ids
};

struct ConditionReport {
    bool ok = false;
    std::string violation;  // first failure with witness vertex/edge
};

// Definition conditions: (1) out-edge labels pairwise distinct,
// (2) an out-edge for every gamma in supp theta_{L(v)}; when an embedding
// is present also phi(t(e)) = rho(L(e))(phi(s(e))), injectivity, and
// piece(phi(v)) = L(v).
ConditionReport check_conditions(const SGraph& g, const CPElement& S, const TorsionAssignment& ta);

// true iff every closed path has trivial label; edge labels multiply
// left-to-right along the traversal, reversed edges contribute inverses.
// Throws std::invalid_argument on disconnected input.
bool is_simply_connected(const SGraph& g);

// label-preserving digraph automorphisms (vertex pieces and edge gammas)
bool has_trivial_automorphisms(const SGraph& g);

// vertex bijection preserving pieces and gamma-labeled edges
bool isomorphic(const SGraph& a, const SGraph& b);

// The matrix of T^g on the basis {zeta_v}: column v collects
// theta_{L(v)}(gamma) at the gamma-edge target, the identity coefficient
// lands on the diagonal.  Pass the normalized T (or S for S^g).
RationalMatrix induced_operator(const SGraph& g, const CPElement& T);

// flow identities for a kernel vector: at vertices whose piece keeps the
// identity, -<zeta, zeta_v> equals the incoming flow; at I/F/U pieces the
// incoming flow vanishes.  Checks T^g v = 0 first.
bool verify_flow_lemma(const SGraph& g, const CPElement& T, std::span<const Rational> v,
                       std::string* first_failure = nullptr);

nlohmann::json to_json(const SGraph& g);
SGraph sgraph_from_json(const nlohmann::json& j);
std::string to_dot(const SGraph& g);

}  // namespace l2lamp
