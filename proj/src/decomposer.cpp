#include "l2lamp/decomposer.hpp"

#include "l2lamp/families.hpp"

#include <algorithm>
#include <array>
#include <thread>

namespace l2lamp {

namespace {

struct VertexKey {
    int64_t offset;
    Letter label;
    bool operator==(const VertexKey&) const = default;
};

}  // namespace

ClosureResult closure_from_point(std::shared_ptr<const PointSource> source, int64_t offset,
                                 Letter label, const System& sys, int cap, bool lifo) {
    // (piece j, gamma) pairs driving the backward step
    struct BackPair {
        int piece;
        GammaElement gamma_inv;
    };
    std::vector<BackPair> back;
    for (int j = 1; j <= kPieceCount; ++j)
        for (const CPCoef& c : sys.S.terms[j - 1].theta) back.push_back({j, c.gamma.inverse()});

    SGraph g;
    g.embedding.emplace();
    g.source = source;

    std::vector<VertexKey> keys;
    auto find_or_add = [&](const LazyPoint& pt, bool& added) -> int {
        VertexKey key{pt.offset, pt.label};
        for (size_t i = 0; i < keys.size(); ++i)
            if (keys[i] == key) {
                added = false;
                return int(i);
            }
        keys.push_back(key);
        g.piece.push_back(piece_of_point(sys.S, pt));
        g.embedding->push_back({pt.offset, pt.label});
        added = true;
        return int(keys.size()) - 1;
    };

    LazyPoint start{source.get(), offset, label};
    bool added;
    std::vector<int> frontier{find_or_add(start, added)};

    while (!frontier.empty()) {
        int v;
        if (lifo) {
            v = frontier.back();
            frontier.pop_back();
        } else {
            v = frontier.front();
            frontier.erase(frontier.begin());
        }
        LazyPoint x{source.get(), (*g.embedding)[v].offset, (*g.embedding)[v].label};

        // forward: an edge for every gamma in the support of x's piece
        for (const CPCoef& c : sys.S.terms[g.piece[v] - 1].theta) {
            LazyPoint y = act_point(c.gamma, x, sys.assignment);
            int w = find_or_add(y, added);
            if (added) {
                if (g.vertex_count() > cap) return {std::nullopt, true};
                frontier.push_back(w);
            }
            g.edges.push_back({v, w, c.gamma});
        }

        // backward: pull in preimages that land in a support piece; their
        // own forward step adds the connecting edge
        for (const BackPair& bp : back) {
            LazyPoint z = act_point(bp.gamma_inv, x, sys.assignment);
            if (piece_of_point(sys.S, z) != bp.piece) continue;
            int w = find_or_add(z, added);
            if (added) {
                if (g.vertex_count() > cap) return {std::nullopt, true};
                frontier.push_back(w);
            }
        }
    }
    return {std::move(g), false};
}

ClosureResult closure_from_point(const LazyPoint& x, const System& sys, int cap) {
    // non-owning source: wrap in a no-op deleter
    std::shared_ptr<const PointSource> alias(x.source, [](const PointSource*) {});
    return closure_from_point(std::move(alias), x.offset, x.label, sys, cap);
}

FamilyId classify(const SGraph& g, const System& sys) {
    std::array<int, kPieceCount + 1> count{};
    for (int p : g.piece) ++count[p];
    const int n = g.vertex_count();

    FamilyId cand = FamilyId::unknown();
    if (count[kPieceU] > 0) {
        cand = FamilyId::u();
    } else if (count[kPieceFDrop] == 0) {
        cand = FamilyId::g(1 + count[8]);
    } else if (count[kPieceIDrop] > 0) {
        cand = FamilyId::j(1 + count[8], 1 + count[10]);
    } else {
        cand = FamilyId::h(1 + count[10]);
    }
    if (cand.vertex_count() != n) return FamilyId::unknown();
    if (!isomorphic(g, sys.family_template(cand))) return FamilyId::unknown();
    return cand;
}

bool FrequencyReport::within_sigma(const FrequencyRow& row, int sigmas) const {
    Rational emp = rat(Integer(row.count), Integer(samples));
    Rational dev = emp - row.expected_mu;
    Rational var = row.expected_mu * (1 - row.expected_mu) / Rational(Integer(samples));
    return dev * dev <= Rational(sigmas * sigmas) * var;
}

bool FrequencyReport::distribution_ok(const Rational& mu_floor, int sigmas) const {
    if (unknown_count > 0 || cap_exceeded_count > 0 || hypothesis_failures > 0) return false;
    for (const FrequencyRow& row : rows)
        if (row.expected_mu >= mu_floor && !within_sigma(row, sigmas)) return false;
    return true;
}

namespace {

// All family classes with mu >= floor (plus u), canonical order.  The mu
// sequences rise to a peak near k = p before decaying, so scan past the
// peak before trusting a below-floor value as final.
std::vector<FamilyId> expected_classes(int p, const Rational& mu_floor) {
    const int past_peak = 12 * p + 12;
    auto scan = [&](auto make_id, auto& out) {
        for (int k = 1; k < 100'000; ++k) {
            FamilyId id = make_id(k);
            if (mu_closed_form(id, p) >= mu_floor)
                out.push_back(id);
            else if (k > past_peak)
                break;
        }
    };
    std::vector<FamilyId> ids{FamilyId::u()};
    scan([](int k) { return FamilyId::g(k); }, ids);
    scan([](int l) { return FamilyId::h(l); }, ids);
    for (int k = 1; k < 100'000; ++k) {
        bool row_hit = false;
        for (int l = 1; l < 100'000; ++l) {
            FamilyId id = FamilyId::j(k, l);
            if (mu_closed_form(id, p) >= mu_floor) {
                ids.push_back(id);
                row_hit = true;
            } else if (l > past_peak) {
                break;
            }
        }
        if (!row_hit && k > past_peak) break;
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

struct WorkerTally {
    std::map<FamilyId, uint64_t> counts;
    uint64_t unknown = 0;
    uint64_t cap_exceeded = 0;
    uint64_t checked = 0;
    uint64_t check_failures = 0;
    std::string first_failure;
};

}  // namespace

FrequencyReport monte_carlo(const System& sys, const MonteCarloOptions& opt) {
    if (opt.samples < 1) throw std::invalid_argument("monte_carlo: N >= 1 required");
    const int workers = std::max(1, opt.workers);

    auto run_range = [&](uint64_t begin, uint64_t end, WorkerTally& tally) {
        for (uint64_t s = begin; s < end; ++s) {
            uint64_t sample_seed = mix64(opt.seed, s);
            auto source = std::make_shared<HashSource>(mix64(sample_seed, 0x636f6f7264ull), sys.p);
            // uniform label: measure 1/8 per letter, matching the Haar factor
            Letter label = kAllLetters[mix64(sample_seed, 0x6c6162656cull) % 8];

            ClosureResult res = closure_from_point(source, 0, label, sys, opt.cap);
            if (res.cap_exceeded) {
                ++tally.cap_exceeded;
                continue;
            }
            const SGraph& g = *res.graph;

            if (s < opt.hypothesis_checks) {
                ++tally.checked;
                std::string why;
                ConditionReport cr = check_conditions(g, sys.S, sys.assignment);
                if (!cr.ok)
                    why = "conditions: " + cr.violation;
                else if (!is_simply_connected(g))
                    why = "not simply connected";
                else if (!has_trivial_automorphisms(g))
                    why = "non-trivial automorphism";
                if (!why.empty()) {
                    if (tally.check_failures == 0)
                        tally.first_failure = "sample " + std::to_string(s) + ": " + why;
                    ++tally.check_failures;
                }
            }

            FamilyId id = classify(g, sys);
            if (id.kind == FamilyId::Kind::Unknown)
                ++tally.unknown;
            else
                ++tally.counts[id];
        }
    };

    std::vector<WorkerTally> tallies(workers);
    if (workers == 1) {
        run_range(0, opt.samples, tallies[0]);
    } else {
        std::vector<std::thread> threads;
        uint64_t chunk = (opt.samples + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            uint64_t begin = chunk * w, end = std::min(opt.samples, chunk * (w + 1));
            if (begin >= end) break;
            threads.emplace_back(run_range, begin, end, std::ref(tallies[w]));
        }
        for (auto& t : threads) t.join();
    }

    FrequencyReport rep;
    rep.p = sys.p;
    rep.samples = opt.samples;
    rep.seed = opt.seed;
    rep.cap = opt.cap;
    rep.workers = workers;

    std::map<FamilyId, uint64_t> merged;
    for (const WorkerTally& t : tallies) {
        for (const auto& [id, c] : t.counts) merged[id] += c;
        rep.unknown_count += t.unknown;
        rep.cap_exceeded_count += t.cap_exceeded;
        rep.hypothesis_checked += t.checked;
        rep.hypothesis_failures += t.check_failures;
        if (rep.first_hypothesis_failure.empty() && !t.first_failure.empty())
            rep.first_hypothesis_failure = t.first_failure;
    }
    for (FamilyId id : expected_classes(sys.p, opt.mu_floor))
        if (!merged.contains(id)) merged[id] = 0;
    for (const auto& [id, c] : merged)
        rep.rows.push_back({id, c, mu_closed_form(id, sys.p)});
    return rep;
}

}  // namespace l2lamp
