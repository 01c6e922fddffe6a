#pragma once

// Orbit decomposition: grow the maximal embedded S-graph through a point
// by forward/backward closure, classify it against the family templates,
// and estimate class frequencies by Monte Carlo.

#include "l2lamp/sgraph.hpp"
#include "l2lamp/system.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace l2lamp {

struct ClosureResult {
    std::optional<SGraph> graph;  // empty iff cap exceeded
    bool cap_exceeded = false;
};

// Breadth-first closure from x.  Forward: for each gamma in the support of
// the piece of a vertex, its image is a vertex connected by a gamma-edge.
// Backward: for each (piece j, gamma in supp theta_j), the preimage of a
// vertex under gamma is pulled in when it lies in X_j.  Stops when closed;
// reports cap_exceeded past the vertex cap.  lifo switches the frontier to
// a stack (used to confirm order-independence of the closure).
ClosureResult closure_from_point(std::shared_ptr<const PointSource> source, int64_t offset,
                                 Letter label, const System& sys, int cap, bool lifo = false);
ClosureResult closure_from_point(const LazyPoint& x, const System& sys, int cap);

// label-multiset candidate followed by exact isomorphism against the
// cached template; Unknown when nothing admissible matches
FamilyId classify(const SGraph& g, const System& sys);

struct FrequencyRow {
    FamilyId id;
    uint64_t count = 0;
    Rational expected_mu;   // exact
};

struct FrequencyReport {
    int p = 2;
    uint64_t samples = 0;
    uint64_t seed = 0;
    int cap = 0;
    int workers = 1;
    std::vector<FrequencyRow> rows;  // canonical order; includes all classes
                                     // with expected_mu >= mu_floor
    uint64_t unknown_count = 0;
    uint64_t cap_exceeded_count = 0;

    // structural checks run on the first hypothesis_checked samples
    uint64_t hypothesis_checked = 0;
    uint64_t hypothesis_failures = 0;
    std::string first_hypothesis_failure;

    // exact gate: (count/N - mu)^2 <= sigmas^2 mu(1-mu)/N
    bool within_sigma(const FrequencyRow& row, int sigmas) const;
    // all rows with expected_mu >= mu_floor pass the gate, no unknowns,
    // no cap exceedances
    bool distribution_ok(const Rational& mu_floor, int sigmas) const;
};

struct MonteCarloOptions {
    uint64_t samples = 1'000'000;
    uint64_t seed = 0;
    int cap = 10'000;
    int workers = 1;
    uint64_t hypothesis_checks = 0;      // verify theorem hypotheses on this many samples
    Rational mu_floor = rat(1, 10'000);  // report floor for expected classes
};

// Deterministic for a fixed seed: sample s draws its label and coordinates
// from a stream derived from (seed, s), so the tally is independent of the
// worker count.
FrequencyReport monte_carlo(const System& sys, const MonteCarloOptions& opt);

}  // namespace l2lamp
