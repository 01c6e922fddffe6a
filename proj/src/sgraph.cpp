#include "l2lamp/sgraph.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace l2lamp {

std::vector<std::vector<int>> SGraph::out_edge_index() const {
    std::vector<std::vector<int>> idx(piece.size());
    for (int e = 0; e < int(edges.size()); ++e) idx[edges[e].src].push_back(e);
    return idx;
}

ConditionReport check_conditions(const SGraph& g, const CPElement& S, const TorsionAssignment& ta) {
    ConditionReport rep;
    auto out = g.out_edge_index();
    for (int v = 0; v < g.vertex_count(); ++v) {
        // (1) out-labels pairwise distinct
        std::set<GammaElement> labels;
        for (int e : out[v])
            if (!labels.insert(g.edges[e].gamma).second) {
                rep.violation = "vertex " + std::to_string(v) + ": repeated out-label";
                return rep;
            }
        // (2) an edge for every gamma in supp theta_{L(v)}
        for (const CPCoef& c : S.terms[g.piece[v] - 1].theta)
            if (c.coeff != 0 && !labels.contains(c.gamma)) {
                rep.violation = "vertex " + std::to_string(v) + ": missing edge for support gamma";
                return rep;
            }
    }
    if (g.embedding) {
        const auto& phi = *g.embedding;
        if (int(phi.size()) != g.vertex_count()) {
            rep.violation = "embedding size mismatch";
            return rep;
        }
        std::set<std::pair<int64_t, Letter>> seen;
        for (int v = 0; v < g.vertex_count(); ++v)
            if (!seen.insert({phi[v].offset, phi[v].label}).second) {
                rep.violation = "embedding not injective at vertex " + std::to_string(v);
                return rep;
            }
        for (const SGraphEdge& e : g.edges) {
            LazyPoint src{g.source.get(), phi[e.src].offset, phi[e.src].label};
            LazyPoint dst = act_point(e.gamma, src, ta);
            if (dst.offset != phi[e.dst].offset || dst.label != phi[e.dst].label) {
                rep.violation = "embedding equation fails on an edge from vertex " +
                                std::to_string(e.src);
                return rep;
            }
        }
        if (g.source)
            for (int v = 0; v < g.vertex_count(); ++v) {
                LazyPoint x{g.source.get(), phi[v].offset, phi[v].label};
                if (piece_of_point(S, x) != g.piece[v]) {
                    rep.violation = "vertex " + std::to_string(v) + ": piece label disagrees with point";
                    return rep;
                }
            }
    }
    rep.ok = true;
    return rep;
}

bool is_simply_connected(const SGraph& g) {
    const int n = g.vertex_count();
    if (n == 0) return true;

    // undirected adjacency: (neighbor, edge id, traversed forward?)
    std::vector<std::vector<std::tuple<int, int, bool>>> adj(n);
    for (int e = 0; e < int(g.edges.size()); ++e) {
        adj[g.edges[e].src].push_back({g.edges[e].dst, e, true});
        adj[g.edges[e].dst].push_back({g.edges[e].src, e, false});
    }

    // spanning tree; pot[v] = path label from the root, left-to-right
    std::vector<int> state(n, 0);
    std::vector<GammaElement> pot(n);
    std::vector<bool> tree_edge(g.edges.size(), false);
    std::queue<int> q;
    q.push(0);
    state[0] = 1;
    int visited = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (auto [w, e, fwd] : adj[v]) {
            if (state[w]) continue;
            state[w] = 1;
            ++visited;
            pot[w] = fwd ? pot[v] * g.edges[e].gamma : pot[v] * g.edges[e].gamma.inverse();
            tree_edge[e] = true;
            q.push(w);
        }
    }
    if (visited != n) throw std::invalid_argument("is_simply_connected: disconnected graph");

    // each non-tree edge closes a loop with label pot(src) * gamma * pot(dst)^{-1}
    for (int e = 0; e < int(g.edges.size()); ++e) {
        if (tree_edge[e]) continue;
        if (pot[g.edges[e].src] * g.edges[e].gamma != pot[g.edges[e].dst]) return false;
    }
    return true;
}

namespace {

// structural signature used to prune the mapping search: piece label plus
// sorted multisets of (gamma, neighbor piece) over out- and in-edges
std::vector<std::string> vertex_signatures(const SGraph& g) {
    std::vector<std::string> sig(g.piece.size());
    std::vector<std::vector<std::string>> outs(g.piece.size()), ins(g.piece.size());
    auto gkey = [](const GammaElement& gm) {
        return std::to_string(gm.shift) + "m" + std::to_string(gm.mat.bits());
    };
    for (const SGraphEdge& e : g.edges) {
        outs[e.src].push_back(gkey(e.gamma) + ">" + std::to_string(g.piece[e.dst]));
        ins[e.dst].push_back(gkey(e.gamma) + "<" + std::to_string(g.piece[e.src]));
    }
    for (size_t v = 0; v < g.piece.size(); ++v) {
        std::sort(outs[v].begin(), outs[v].end());
        std::sort(ins[v].begin(), ins[v].end());
        std::string s = std::to_string(g.piece[v]) + "|";
        for (const auto& t : outs[v]) s += t + ",";
        s += "|";
        for (const auto& t : ins[v]) s += t + ",";
        sig[v] = std::move(s);
    }
    return sig;
}

// edge lookup key
struct EdgeKey {
    int src;
    GammaElement gamma;
    auto operator<=>(const EdgeKey&) const = default;
};

// count mappings a -> b preserving pieces and labeled edges, up to the
// given limit (2 suffices to decide automorphism triviality)
int count_isomorphisms(const SGraph& a, const SGraph& b, int limit) {
    const int n = a.vertex_count();
    if (n != b.vertex_count() || a.edges.size() != b.edges.size()) return 0;
    auto sig_a = vertex_signatures(a), sig_b = vertex_signatures(b);
    {
        auto sa = sig_a, sb = sig_b;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return 0;
    }
    std::map<EdgeKey, int> out_b;  // (src, gamma) -> dst; valid by condition (1)
    for (const SGraphEdge& e : b.edges) out_b[{e.src, e.gamma}] = e.dst;

    std::vector<int> map_ab(n, -1), map_ba(n, -1);
    auto adj_a = a.out_edge_index();

    int found = 0;
    // order a's vertices rarest-signature-first
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::map<std::string, int> freq;
    for (const auto& s : sig_a) ++freq[s];
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        if (freq[sig_a[x]] != freq[sig_a[y]]) return freq[sig_a[x]] < freq[sig_a[y]];
        return x < y;
    });

    // propagate forced assignments along edges before trying the next free vertex
    auto rec = [&](auto&& self, int depth) -> void {
        if (found >= limit) return;
        if (depth == n) {
            // all vertices mapped; verify every edge of a maps to an edge of b
            for (const SGraphEdge& e : a.edges) {
                auto it = out_b.find({map_ab[e.src], e.gamma});
                if (it == out_b.end() || it->second != map_ab[e.dst]) return;
            }
            ++found;
            return;
        }
        int v = order[depth];
        if (map_ab[v] != -1) {
            self(self, depth + 1);
            return;
        }
        for (int w = 0; w < n && found < limit; ++w) {
            if (map_ba[w] != -1 || sig_b[w] != sig_a[v]) continue;
            // tentative v -> w, then force along out-edges as far as possible
            std::vector<std::pair<int, int>> stamped;
            bool ok = true;
            std::vector<std::pair<int, int>> stack{{v, w}};
            while (ok && !stack.empty()) {
                auto [x, y] = stack.back();
                stack.pop_back();
                if (map_ab[x] != -1) {
                    if (map_ab[x] != y) ok = false;
                    continue;
                }
                if (map_ba[y] != -1 || sig_a[x] != sig_b[y]) {
                    ok = false;
                    continue;
                }
                map_ab[x] = y;
                map_ba[y] = x;
                stamped.push_back({x, y});
                for (int e : adj_a[x]) {
                    auto it = out_b.find({y, a.edges[e].gamma});
                    if (it == out_b.end()) {
                        ok = false;
                        break;
                    }
                    stack.push_back({a.edges[e].dst, it->second});
                }
            }
            if (ok) self(self, depth + 1);
            for (auto [x, y] : stamped) {
                map_ab[x] = -1;
                map_ba[y] = -1;
            }
        }
    };
    rec(rec, 0);
    return found;
}

}  // namespace

bool has_trivial_automorphisms(const SGraph& g) { return count_isomorphisms(g, g, 2) == 1; }

bool isomorphic(const SGraph& a, const SGraph& b) { return count_isomorphisms(a, b, 1) > 0; }

RationalMatrix induced_operator(const SGraph& g, const CPElement& T) {
    const int n = g.vertex_count();
    RationalMatrix m(n, n);
    std::map<EdgeKey, int> out;
    for (const SGraphEdge& e : g.edges) out[{e.src, e.gamma}] = e.dst;
    for (int v = 0; v < n; ++v) {
        for (const CPCoef& c : T.terms[g.piece[v] - 1].theta) {
            if (c.gamma.is_identity()) {
                m.at(v, v) += c.coeff;
                continue;
            }
            auto it = out.find({v, c.gamma});
            if (it == out.end())
                throw std::invalid_argument("induced_operator: missing edge for support gamma");
            m.at(it->second, v) += c.coeff;
        }
    }
    return m;
}

bool verify_flow_lemma(const SGraph& g, const CPElement& T, std::span<const Rational> v,
                       std::string* first_failure) {
    const int n = g.vertex_count();
    if (int(v.size()) != n) throw std::invalid_argument("verify_flow_lemma: vector size mismatch");
    auto fail = [&](const std::string& msg) {
        if (first_failure) *first_failure = msg;
        return false;
    };

    std::vector<Rational> img = induced_operator(g, T).apply({v.begin(), v.end()});
    for (int i = 0; i < n; ++i)
        if (img[i] != 0) return fail("vector is not in ker T^g");

    // incoming flow at w: sum over edges into w of theta coefficient times
    // the coordinate at the edge source
    std::vector<Rational> flow(n);
    for (const SGraphEdge& e : g.edges) {
        for (const CPCoef& c : T.terms[g.piece[e.src] - 1].theta)
            if (c.gamma == e.gamma) flow[e.dst] += c.coeff * v[e.src];
    }
    for (int w = 0; w < n; ++w) {
        if (piece_keeps_identity(g.piece[w])) {
            if (-v[w] != flow[w])
                return fail("flow identity fails at vertex " + std::to_string(w));
        } else if (flow[w] != 0) {
            return fail("nonzero incoming flow at I/F/U vertex " + std::to_string(w));
        }
    }
    return true;
}

nlohmann::json to_json(const SGraph& g) {
    nlohmann::json verts = nlohmann::json::array();
    for (int v = 0; v < g.vertex_count(); ++v) {
        nlohmann::json jv{{"id", v}, {"piece", g.piece[v]}};
        if (g.embedding) {
            jv["offset"] = (*g.embedding)[v].offset;
            jv["label"] = to_string((*g.embedding)[v].label);
        }
        verts.push_back(jv);
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const SGraphEdge& e : g.edges)
        edges.push_back({{"src", e.src}, {"dst", e.dst}, {"gamma", to_json(e.gamma)}});
    return nlohmann::json{{"vertices", verts}, {"edges", edges}};
}

SGraph sgraph_from_json(const nlohmann::json& j) {
    SGraph g;
    bool embedded = !j.at("vertices").empty() && j.at("vertices").front().contains("offset");
    if (embedded) g.embedding.emplace();
    for (const auto& jv : j.at("vertices")) {
        g.piece.push_back(jv.at("piece").get<int>());
        if (embedded) {
            auto l = letter_from_string(jv.at("label").get<std::string>());
            if (!l) throw std::invalid_argument("sgraph_from_json: bad label");
            g.embedding->push_back({jv.at("offset").get<int64_t>(), *l});
        }
    }
    for (const auto& je : j.at("edges"))
        g.edges.push_back({je.at("src").get<int>(), je.at("dst").get<int>(),
                           gamma_from_json(je.at("gamma"))});
    return g;
}

std::string to_dot(const SGraph& g) {
    std::ostringstream os;
    os << "digraph sgraph {\n";
    for (int v = 0; v < g.vertex_count(); ++v) {
        os << "  v" << v << " [label=\"" << v << ":p" << g.piece[v];
        if (g.embedding) os << " " << to_string((*g.embedding)[v].label);
        os << "\"];\n";
    }
    for (const SGraphEdge& e : g.edges) {
        os << "  v" << e.src << " -> v" << e.dst << " [label=\"t^" << e.gamma.shift;
        if (!e.gamma.mat.is_identity()) os << " m" << e.gamma.mat.bits();
        os << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace l2lamp
