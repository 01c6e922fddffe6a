#include "l2lamp/crossed_op.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>

namespace l2lamp {

bool piece_keeps_identity(int piece) {
    return piece != kPieceIDrop && piece != kPieceFDrop && piece != kPieceU;
}

CPElement build_S(int p, const TransitionFamily& tf) {
    using enum Letter;
    if (p < 2) throw std::domain_error("build_S: p >= 2 required");

    auto t = [](int64_t n) { return gamma_shift(n); };
    auto M = [&](Letter x, Letter y) { return GammaElement{0, tf.at(x, y)}; };

    CPElement S;
    S.p = p;
    auto add = [&](std::vector<CPCoef> theta, std::optional<CylinderSet> chi) {
        S.terms.push_back({std::move(theta), std::move(chi)});
    };

    // summands (1)-(14); patterns are written left to right with the
    // underlined coordinate at position 0
    add({{rat(-1), t(1) * M(I, D)}, {rat(1), t(-1) * M(I, A)}}, cyl("101", -1, I));   // (1)
    add({{rat(-1), t(2) * M(A, C)}, {rat(-2), t(-1)}}, cyl("1101", -1, A));           // (2)
    add({{rat(-1), t(2) * M(A, C)}}, cyl("0101", -1, A));                             // (3)
    add({{rat(-2), t(-1)}}, cyl("1100", -1, A));                                      // (4)
    add({}, cyl("0100", -1, A));                                                      // (5)
    add({{rat(-2), t(-1)}}, cyl("111", -1, A));                                       // (6)
    add({{rat(-1), M(A, B)}}, cyl("011", -1, A));                                     // (7)
    add({{rat(-1), t(1)}}, cyl("11", 0, B));                                          // (8)
    add({{rat(-1), M(B, A)}}, cyl("10", 0, B));                                       // (9)
    add({{rat(-1), t(1)}, {rat(1), M(C, D)}}, cyl("11", 0, C));                       // (10)
    add({{rat(1), M(C, D)}}, cyl("10", 0, C));                                        // (11)
    add({{rat(-1), t(1)}}, cyl("11", 0, D));                                          // (12)
    add({{rat(-1), M(D, F)}}, cyl("10", 0, D));                                       // (13)
    add({}, cyl("10", 0, F));                                                         // (14)
    add({}, std::nullopt);                                                            // U
    return S;
}

CPElement build_T(const CPElement& S) {
    CPElement T = S;
    for (int piece = 1; piece <= kPieceCount; ++piece)
        if (piece_keeps_identity(piece))
            T.terms[piece - 1].theta.push_back({rat(1), GammaElement{}});
    return T;
}

std::vector<CylinderSet> u_complement_pieces() {
    using enum Letter;
    return {
        cyl("0", 0, A), cyl("0", 0, B), cyl("0", 0, C), cyl("0", 0, D),
        CylinderSet{{}, U1}, CylinderSet{{}, U2},
        cyl("0", 0, F), cyl("11", 0, F),
        cyl("1", 0, I), cyl("100", -1, I), cyl("001", -1, I), cyl("000", -1, I),
    };
}

int piece_of_point(const CPElement& S, const LazyPoint& x) {
    for (int i = 1; i < kPieceCount; ++i)
        if (point_in_cylinder(x, *S.terms[i - 1].chi)) return i;
    return kPieceU;
}

Rational piece_measure(const CPElement& S, int piece) {
    if (piece != kPieceU) return cylinder_measure(*S.terms[piece - 1].chi, S.p);
    Rational rest = 0;
    for (int i = 1; i < kPieceCount; ++i) rest += cylinder_measure(*S.terms[i - 1].chi, S.p);
    return 1 - rest;
}

namespace {

// does the cylinder contain the sign pattern given by window[pos]
// (window covers every constrained position of the partition)
bool covers(const CylinderSet& c, const std::map<int64_t, bool>& window, Letter label) {
    if (c.label != label) return false;
    for (const auto& [pos, sym] : c.constraints)
        if (window.at(pos) != (sym == Sym::NonZero)) return false;
    return true;
}

}  // namespace

PartitionReport verify_partition(const CPElement& S, int p) {
    PartitionReport rep;
    std::vector<CylinderSet> cylinders;
    for (int i = 1; i < kPieceCount; ++i) cylinders.push_back(*S.terms[i - 1].chi);

    for (size_t a = 0; a < cylinders.size(); ++a)
        for (size_t b = a + 1; b < cylinders.size(); ++b)
            if (!cylinders_disjoint(cylinders[a], cylinders[b])) {
                rep.detail = "pieces " + std::to_string(a + 1) + " and " + std::to_string(b + 1) +
                             " intersect";
                return rep;
            }

    // the twelve-piece expansion of U refines the complement
    std::vector<CylinderSet> u_pieces = u_complement_pieces();
    std::vector<CylinderSet> all = cylinders;
    all.insert(all.end(), u_pieces.begin(), u_pieces.end());
    for (size_t a = 0; a < all.size(); ++a)
        for (size_t b = a + 1; b < all.size(); ++b)
            if (!cylinders_disjoint(all[a], all[b])) {
                rep.detail = "26-piece refinement: pieces " + std::to_string(a) + " and " +
                             std::to_string(b) + " intersect";
                return rep;
            }

    // exhaustiveness: every sign pattern on the constrained window is
    // covered exactly once (p-independent combinatorial fact)
    int64_t lo = 0, hi = 0;
    for (const CylinderSet& c : all)
        for (const auto& [pos, sym] : c.constraints) {
            lo = std::min(lo, pos);
            hi = std::max(hi, pos);
        }
    const int w = int(hi - lo + 1);
    for (Letter label : kAllLetters) {
        for (uint32_t bits = 0; bits < (1u << w); ++bits) {
            std::map<int64_t, bool> window;
            for (int i = 0; i < w; ++i) window[lo + i] = (bits >> i) & 1;
            int hits = 0;
            for (const CylinderSet& c : all) hits += covers(c, window, label);
            if (hits != 1) {
                rep.detail = std::string("window pattern covered ") + std::to_string(hits) +
                             " times (label " + to_string(label) + ")";
                return rep;
            }
        }
    }

    rep.total = 0;
    for (const CylinderSet& c : all) rep.total += cylinder_measure(c, p);
    rep.mu_u = 0;
    for (const CylinderSet& c : u_pieces) rep.mu_u += cylinder_measure(c, p);
    if (rep.total != 1) {
        rep.detail = "total measure " + rat_string(rep.total) + " != 1";
        return rep;
    }
    rep.ok = true;
    return rep;
}

nlohmann::json to_json(const GammaElement& g) {
    return nlohmann::json{{"shift", g.shift}, {"matrix", g.mat.bits()}};
}

GammaElement gamma_from_json(const nlohmann::json& j) {
    GammaElement g;
    g.shift = j.at("shift").get<int64_t>();
    g.mat = F2Matrix::from_bits(j.at("matrix").get<uint16_t>());
    if (!g.mat.invertible()) throw std::invalid_argument("gamma_from_json: singular matrix");
    return g;
}

nlohmann::json to_json(const CylinderSet& c) {
    nlohmann::json cons = nlohmann::json::object();
    for (const auto& [pos, sym] : c.constraints)
        cons[std::to_string(pos)] = (sym == Sym::NonZero) ? "1" : "0";
    return nlohmann::json{{"label", to_string(c.label)}, {"constraints", cons}};
}

CylinderSet cylinder_from_json(const nlohmann::json& j) {
    CylinderSet c;
    auto l = letter_from_string(j.at("label").get<std::string>());
    if (!l) throw std::invalid_argument("cylinder_from_json: bad label");
    c.label = *l;
    for (const auto& [key, val] : j.at("constraints").items())
        c.constraints[std::stoll(key)] = (val.get<std::string>() == "1") ? Sym::NonZero : Sym::Zero;
    return c;
}

nlohmann::json to_json(const CPElement& e) {
    nlohmann::json terms = nlohmann::json::array();
    for (const CPTerm& t : e.terms) {
        nlohmann::json theta = nlohmann::json::array();
        for (const CPCoef& c : t.theta)
            theta.push_back({{"coeff", rat_string(c.coeff)}, {"gamma", to_json(c.gamma)}});
        nlohmann::json term{{"theta", theta}};
        if (t.chi)
            term["chi"] = to_json(*t.chi);
        else
            term["chi"] = "complement";
        terms.push_back(term);
    }
    return nlohmann::json{{"p", e.p}, {"terms", terms}};
}

CPElement cpelement_from_json(const nlohmann::json& j) {
    CPElement e;
    e.p = j.at("p").get<int>();
    for (const auto& term : j.at("terms")) {
        CPTerm t;
        for (const auto& c : term.at("theta"))
            t.theta.push_back({rat_parse(c.at("coeff").get<std::string>()),
                               gamma_from_json(c.at("gamma"))});
        if (!term.at("chi").is_string()) t.chi = cylinder_from_json(term.at("chi"));
        e.terms.push_back(std::move(t));
    }
    return e;
}

}  // namespace l2lamp
