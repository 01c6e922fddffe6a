// Command-line entry points: every subcommand re-verifies part of the
// pipeline and exits nonzero on the first failed identity, so the binary
// doubles as a CI acceptance gate.

#include "l2lamp/decomposer.hpp"
#include "l2lamp/dimension.hpp"
#include "l2lamp/duality.hpp"
#include "l2lamp/families.hpp"
#include "l2lamp/system.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>

using namespace l2lamp;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct RunConfig {
    int p = 2;
    int kmax = 40;
    uint64_t samples = 1'000'000;
    uint64_t seed = 0;
    int cap = 10'000;
    int precision = 30;
    std::string format = "json";
    std::string out;
    int workers = 1;
    bool no_timestamp = false;
    bool inject_fault = false;  // testing aid: breaks one S coefficient
    bool alternate = false;     // alternate letter assignment + family

    int graph_range() const { return std::min(kmax, 10); }
};

System make_system(const RunConfig& cfg) {
    System sys = System::make(cfg.p, cfg.alternate);
    if (cfg.inject_fault) {
        // halve the doubling coefficient of summand (4); the g-cycle then
        // acquires a kernel vector and every lemma check downstream fails
        sys.S.terms[3].theta[0].coeff = rat(-1);
        sys.T = build_T(sys.S);
    }
    return sys;
}

json config_json(const RunConfig& cfg) {
    return json{{"p", cfg.p},           {"kmax", cfg.kmax},       {"samples", cfg.samples},
                {"seed", cfg.seed},     {"cap", cfg.cap},         {"precision", cfg.precision},
                {"workers", cfg.workers}, {"alternate", cfg.alternate}};
}

json envelope(const std::string& command, const RunConfig& cfg) {
    json j{{"command", command}, {"version", kVersion}, {"config", config_json(cfg)}};
    if (!cfg.no_timestamp) {
        auto now = std::chrono::system_clock::now();
        j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    }
    return j;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw std::runtime_error("cannot open output file " + cfg.out);
    f << text << "\n";
}

// CSV reports carry the envelope as one comment line
std::string csv_header(const std::string& command, const RunConfig& cfg) {
    std::string h = "# l2lamp " + std::string(kVersion) + " " + command +
                    " p=" + std::to_string(cfg.p) + " seed=" + std::to_string(cfg.seed) +
                    " samples=" + std::to_string(cfg.samples) + " kmax=" + std::to_string(cfg.kmax);
    if (!cfg.no_timestamp) {
        auto now = std::chrono::system_clock::now();
        h += " time=" + std::to_string(
                 std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
    }
    return h + "\n";
}

// ---- verify-graphs -------------------------------------------------------

int run_verify_graphs(const RunConfig& cfg, json& out) {
    System sys = make_system(cfg);
    const int range = cfg.graph_range();
    json failures = json::array();
    auto record = [&](const std::string& what) { failures.push_back(what); };

    std::vector<FamilyId> ids{FamilyId::u()};
    for (int k = 1; k <= range; ++k) ids.push_back(FamilyId::g(k));
    for (int l = 1; l <= range; ++l) ids.push_back(FamilyId::h(l));
    for (int k = 1; k <= range; ++k)
        for (int l = 1; l <= range; ++l) ids.push_back(FamilyId::j(k, l));
    // the dichotomy flip, probed around l = 2^{k-1}-1 for k <= 5
    json dichotomy = json::array();
    for (int k = 1; k <= 5; ++k) {
        int pivot = (1 << (k - 1)) - 1;
        for (int l : {pivot - 1, pivot, pivot + 1})
            if (l >= 1) ids.push_back(FamilyId::j(k, l));
    }

    int checked = 0;
    for (FamilyId id : ids) {
        const SGraph& g = sys.family_template(id);
        if (g.vertex_count() != id.vertex_count())
            record(id.name() + ": vertex count " + std::to_string(g.vertex_count()));
        ConditionReport cr = check_conditions(g, sys.S, sys.assignment);
        if (!cr.ok) record(id.name() + ": " + cr.violation);
        if (!is_simply_connected(g)) record(id.name() + ": not simply connected");
        if (!has_trivial_automorphisms(g)) record(id.name() + ": non-trivial automorphism");

        RationalMatrix op = induced_operator(g, sys.T);
        int dim = kernel_dimension(op);
        if (dim != expected_kernel_dim(id))
            record(id.name() + ": kernel dim " + std::to_string(dim) + " != " +
                   std::to_string(expected_kernel_dim(id)));
        auto basis = kernel_basis(op);
        if (int(basis.size()) != dim) record(id.name() + ": basis size mismatch");
        for (const auto& v : basis) {
            std::string why;
            if (!verify_flow_lemma(g, sys.T, v, &why)) record(id.name() + ": flow lemma: " + why);
        }
        if (id.kind == FamilyId::Kind::J)
            dichotomy.push_back({{"k", id.k}, {"l", id.l},
                                 {"dim", kernel_dimension(op)}});
        ++checked;
    }

    out["templates_checked"] = checked;
    out["range"] = range;
    out["dichotomy"] = dichotomy;
    out["failures"] = failures;
    out["ok"] = failures.empty();
    return failures.empty() ? 0 : 1;
}

// ---- measures ------------------------------------------------------------

int run_measures(const RunConfig& cfg, json& out) {
    System sys = make_system(cfg);
    PartitionReport part = verify_partition(sys.S, cfg.p);
    ProbabilitySumReport prob = verify_probability_sum(cfg.p);

    out["partition"] = {{"ok", part.ok},
                        {"detail", part.detail},
                        {"total", rat_string(part.total)},
                        {"mu_u", rat_string(part.mu_u)}};
    out["probability_sum"] = {{"ok", prob.ok},
                              {"total", rat_string(prob.total)},
                              {"mu_u", rat_string(prob.mu_u)},
                              {"g_total", rat_string(prob.g_total)},
                              {"h_total", rat_string(prob.h_total)},
                              {"j_total", rat_string(prob.j_total)}};

    bool consistent = true;
    for (int k = 1; k <= cfg.graph_range(); ++k) {
        FamilyId g = FamilyId::g(k), h = FamilyId::h(k);
        if (mu_closed_form(g, cfg.p) != g.vertex_count() * cylinder_measure(seed_cylinder(g), cfg.p))
            consistent = false;
        if (mu_closed_form(h, cfg.p) != h.vertex_count() * cylinder_measure(seed_cylinder(h), cfg.p))
            consistent = false;
        for (int l = 1; l <= cfg.graph_range(); ++l) {
            FamilyId j = FamilyId::j(k, l);
            if (mu_closed_form(j, cfg.p) != j.vertex_count() * cylinder_measure(seed_cylinder(j), cfg.p))
                consistent = false;
        }
    }
    out["measure_consistency_ok"] = consistent;

    auto census = family_census(cfg.p, cfg.graph_range());
    if (cfg.format == "csv") {
        out["census_csv"] = census_csv(census, cfg.precision);
    } else {
        json rows = json::array();
        for (const CensusRow& r : census)
            rows.push_back({{"family", r.id.name()},
                            {"vertices", r.vertices},
                            {"mu", rat_string(r.mu)},
                            {"mu_decimal", decimal_string(r.mu, cfg.precision)},
                            {"kernel_dim", r.kernel_dim}});
        out["census"] = rows;
    }
    out["ok"] = part.ok && prob.ok && consistent;
    return out["ok"].get<bool>() ? 0 : 1;
}

// ---- monte carlo -----------------------------------------------------------

int run_monte_carlo(const RunConfig& cfg, json& out) {
    System sys = make_system(cfg);
    MonteCarloOptions opt;
    opt.samples = cfg.samples;
    opt.seed = cfg.seed;
    opt.cap = cfg.cap;
    opt.workers = cfg.workers;
    opt.hypothesis_checks = std::min<uint64_t>(cfg.samples, 100'000);
    FrequencyReport rep = monte_carlo(sys, opt);

    json rows = json::array();
    std::string csv = "family,count,frequency,expected_mu,deviation_sigma\n";
    for (const FrequencyRow& row : rep.rows) {
        double emp = double(row.count) / double(rep.samples);
        double mu = row.expected_mu.get_d();
        double se = std::sqrt(mu * (1.0 - mu) / double(rep.samples));
        double dev = se > 0 ? (emp - mu) / se : 0.0;
        char fbuf[64], dbuf[64];
        std::snprintf(fbuf, sizeof fbuf, "%.9g", emp);
        std::snprintf(dbuf, sizeof dbuf, "%.6g", dev);
        rows.push_back({{"family", row.id.name()},
                        {"count", row.count},
                        {"frequency", emp},
                        {"expected_mu", rat_string(row.expected_mu)},
                        {"deviation_sigma", dev}});
        csv += row.id.name() + "," + std::to_string(row.count) + "," + fbuf + "," +
               rat_string(row.expected_mu) + "," + dbuf + "\n";
    }
    if (cfg.format == "csv")
        out["rows_csv"] = csv;
    else
        out["rows"] = rows;
    out["unknown_count"] = rep.unknown_count;
    out["cap_exceeded_count"] = rep.cap_exceeded_count;
    out["hypothesis_checked"] = rep.hypothesis_checked;
    out["hypothesis_failures"] = rep.hypothesis_failures;
    if (!rep.first_hypothesis_failure.empty())
        out["first_hypothesis_failure"] = rep.first_hypothesis_failure;

    bool ok = rep.distribution_ok(rat(1, 10'000), 5);
    out["ok"] = ok;
    return ok ? 0 : 1;
}

// ---- dimension -------------------------------------------------------------

int run_dimension(const RunConfig& cfg, json& out) {
    System sys = make_system(cfg);
    DimensionResult gs = graph_sum_dimension(sys, cfg.kmax);
    DimensionResult cf = closed_form_dimension(cfg.p, cfg.kmax);
    CrossCheckReport cc = cross_check(sys, cfg.kmax);

    auto render = [&](const DimensionResult& r) {
        json contribs = json::object();
        for (const auto& [name, value] : r.contributions) contribs[name] = rat_string(value);
        return json{{"method", r.method},
                    {"head", rat_string(r.head())},
                    {"enclosure_lo", rat_string(r.enclosure.lo)},
                    {"enclosure_hi", rat_string(r.enclosure.hi)},
                    {"decimal", r.decimal(cfg.precision)},
                    {"kmax", r.kmax},
                    {"kmax_effective", r.kmax_effective},
                    {"contributions", contribs}};
    };
    out["graph_sum"] = render(gs);
    out["closed_form"] = render(cf);
    out["cross_check"] = {{"heads_equal", cc.heads_equal},
                          {"enclosures_intersect", cc.enclosures_intersect},
                          {"defect", rat_string(cc.defect)}};
    out["ok"] = cc.ok();
    return cc.ok() ? 0 : 1;
}

// ---- export ----------------------------------------------------------------

int run_export(const RunConfig& cfg, json& out) {
    System sys = make_system(cfg);
    GroupRingElement exported = export_group_ring(sys.T, sys);
    json failures = json::array();

    // idempotent laws
    GroupRingElement sigma = sigma_idempotent(0, cfg.p);
    if (!(sigma * sigma == sigma)) failures.push_back("sigma not idempotent");
    for (F2Vec v = 0; v < 8; ++v) {
        GroupRingElement d = label_delta(v, cfg.p);
        if (!(d * d == d)) failures.push_back("label delta not idempotent");
    }

    // serialization round trip
    if (group_ring_from_json(to_json(exported)) != exported)
        failures.push_back("serialization round trip");

    // 1000-point evaluation round trip
    std::vector<GammaElement> buckets = gamma_buckets(exported);
    for (uint64_t s = 0; s < 1000; ++s) {
        HashSource src(mix64(cfg.seed + 101, s), cfg.p);
        LazyPoint x{&src, 0, kAllLetters[mix64(s, 55) % 8]};
        for (const GammaElement& gamma : buckets) {
            Rational got;
            if (!evaluate_bucket(exported, gamma, x, sys.assignment, &got)) {
                failures.push_back("bucket evaluation not rational");
                break;
            }
            LazyPoint y = act_point(gamma.inverse(), x, sys.assignment);
            Rational want = 0;
            for (const CPCoef& c : sys.T.terms[size_t(piece_of_point(sys.T, y)) - 1].theta)
                if (c.gamma == gamma) want = c.coeff;
            if (got != want) {
                failures.push_back("round trip mismatch at sample " + std::to_string(s));
                break;
            }
        }
        if (!failures.empty()) break;
    }

    // trace identity on the 1344-element torsion group
    const FiniteGroup& h = FiniteGroup::torsion_group();
    std::mt19937_64 rng(cfg.seed + 7);
    std::uniform_int_distribution<int> pick(0, h.order - 1), num(-5, 5), den(1, 4), nterms(1, 6);
    int trace_ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
        SparseGroupRing theta;
        Rational c_e = 0;
        for (int t = nterms(rng); t > 0; --t) {
            int g = pick(rng);
            Rational c = rat(num(rng), den(rng));
            theta.push_back({g, c});
            if (g == h.identity) c_e += c;
        }
        RationalMatrix m = regular_embedding(h, theta);
        Rational trace = 0;
        for (int i = 0; i < h.order; ++i) trace += m.at(i, i);
        if (trace == h.order * c_e)
            ++trace_ok;
        else
            failures.push_back("trace identity failed on trial " + std::to_string(trial));
    }

    // scaling-lemma toys
    std::uniform_int_distribution<int> tnum(-3, 3), tden(1, 3);
    int scaling_ok = 0, scaling_total = 0;
    for (int n = 1; n <= 8; ++n)
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Rational> theta(static_cast<size_t>(n));
            for (auto& c : theta) c = rat(tnum(rng), tden(rng));
            ++scaling_total;
            if (scaling_lemma_check(n, theta))
                ++scaling_ok;
            else
                failures.push_back("scaling lemma failed at n=" + std::to_string(n));
        }

    out["word_count"] = exported.terms.size();
    out["gamma_buckets"] = buckets.size();
    out["trace_trials_ok"] = trace_ok;
    out["scaling_trials_ok"] = scaling_ok;
    out["scaling_trials"] = scaling_total;
    out["failures"] = failures;
    out["export"] = to_json(exported);
    out["ok"] = failures.empty();
    return failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computation of the transcendental von Neumann kernel dimension "
                 "over the lamplighter crossed product"};
    app.require_subcommand(1);

    RunConfig cfg;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--p", cfg.p, "modulus p >= 2 (need not be prime)")->envname("L2LAMP_P");
        cmd->add_option("--kmax", cfg.kmax, "series truncation")->envname("L2LAMP_KMAX");
        cmd->add_option("--samples", cfg.samples, "Monte Carlo samples")->envname("L2LAMP_SAMPLES");
        cmd->add_option("--seed", cfg.seed, "master random seed")->envname("L2LAMP_SEED");
        cmd->add_option("--cap", cfg.cap, "closure vertex cap")->envname("L2LAMP_CAP");
        cmd->add_option("--precision", cfg.precision, "decimal digits")->envname("L2LAMP_PRECISION");
        cmd->add_option("--format", cfg.format, "json or csv")->envname("L2LAMP_FORMAT");
        cmd->add_option("--out", cfg.out, "output path (default stdout)")->envname("L2LAMP_OUT");
        cmd->add_option("--workers", cfg.workers, "Monte Carlo worker threads")
            ->envname("L2LAMP_WORKERS");
        cmd->add_flag("--no-timestamp", cfg.no_timestamp, "omit timestamp for byte-stable reports")
            ->envname("L2LAMP_NO_TIMESTAMP");
        cmd->add_flag("--alternate-conventions", cfg.alternate,
                      "use the alternate letter assignment and transition family")
            ->envname("L2LAMP_ALTERNATE_CONVENTIONS");
        cmd->add_flag("--inject-fault", cfg.inject_fault,
                      "tamper one S coefficient (negative-control testing aid)")
            ->envname("L2LAMP_INJECT_FAULT");
    };

    struct Cmd {
        std::string name;
        std::string help;
        int (*run)(const RunConfig&, json&);
        CLI::App* app = nullptr;
    };
    std::vector<Cmd> cmds = {
        {"verify-graphs", "kernel-dimension lemmas, flow lemma, theorem hypotheses", run_verify_graphs},
        {"measures", "partition, probability-sum identity, family census", run_measures},
        {"monte-carlo", "empirical family frequencies against exact measures", run_monte_carlo},
        {"dimension", "certified enclosures of dim_vN ker T", run_dimension},
        {"export", "group-ring export and duality verification", run_export},
    };
    for (Cmd& c : cmds) {
        c.app = app.add_subcommand(c.name, c.help);
        add_common(c.app);
    }
    CLI::App* all = app.add_subcommand("all", "run every verification in sequence");
    add_common(all);

    CLI11_PARSE(app, argc, argv);

    try {
        if (all->parsed()) {
            json report = envelope("all", cfg);
            int status = 0;
            for (Cmd& c : cmds) {
                json section;
                int rc = c.run(cfg, section);
                report[c.name] = section;
                std::cerr << (rc == 0 ? "PASS " : "FAIL ") << c.name << "\n";
                status |= rc;
            }
            report["ok"] = (status == 0);
            emit(cfg, report.dump(2));
            return status;
        }
        for (Cmd& c : cmds) {
            if (!c.app->parsed()) continue;
            json report = envelope(c.name, cfg);
            json section;
            int rc = c.run(cfg, section);
            if (cfg.format == "csv" && section.contains("census_csv")) {
                emit(cfg, csv_header(c.name, cfg) + section["census_csv"].get<std::string>());
                return rc;
            }
            if (cfg.format == "csv" && section.contains("rows_csv")) {
                emit(cfg, csv_header(c.name, cfg) + section["rows_csv"].get<std::string>());
                return rc;
            }
            report.update(section);
            emit(cfg, report.dump(2));
            return rc;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
