#include "l2lamp/duality.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <stdexcept>

namespace l2lamp {

bool DualWord::is_identity() const {
    return lamps.empty() && shift == 0 && torsion == 0 && mat.is_identity();
}

DualWord word_mul(const DualWord& a, const DualWord& b, int p) {
    DualWord r;
    r.lamps = a.lamps;
    // conjugating b's lamp part by t^{a.shift} moves position q to q - shift
    for (const auto& [pos, val] : b.lamps) {
        int64_t q = pos - a.shift;
        int v = (r.lamps.count(q) ? r.lamps[q] : 0) + val;
        v %= p;
        if (v == 0)
            r.lamps.erase(q);
        else
            r.lamps[q] = v;
    }
    r.shift = a.shift + b.shift;
    r.torsion = a.torsion ^ a.mat.dual_apply(b.torsion);
    r.mat = a.mat * b.mat;
    return r;
}

DualWord word_inverse(const DualWord& a, int p) {
    DualWord r;
    r.shift = -a.shift;
    r.mat = a.mat.inverse();
    for (const auto& [pos, val] : a.lamps) r.lamps[pos + a.shift] = (p - val) % p;
    r.torsion = r.mat.dual_apply(a.torsion);
    return r;
}

void GroupRingElement::add_term(const DualWord& w, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms.try_emplace(w, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
    GroupRingElement r = *this;
    for (const auto& [w, c] : o.terms) r.add_term(w, c);
    return r;
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
    GroupRingElement r;
    r.p = p;
    for (const auto& [wa, ca] : terms)
        for (const auto& [wb, cb] : o.terms) r.add_term(word_mul(wa, wb, p), ca * cb);
    return r;
}

GroupRingElement GroupRingElement::scaled(const Rational& c) const {
    GroupRingElement r;
    r.p = p;
    if (c == 0) return r;
    for (const auto& [w, coef] : terms) r.terms[w] = coef * c;
    return r;
}

GroupRingElement ring_identity(int p) {
    GroupRingElement e;
    e.p = p;
    e.terms[DualWord{}] = 1;
    return e;
}

GroupRingElement sigma_idempotent(int64_t position, int p) {
    GroupRingElement e;
    e.p = p;
    for (int v = 0; v < p; ++v) {
        DualWord w;
        if (v != 0) w.lamps[position] = v;
        e.terms[w] = rat(1, p);
    }
    return e;
}

GroupRingElement label_delta(F2Vec label_vec, int p) {
    GroupRingElement e;
    e.p = p;
    for (F2Vec w = 0; w < 8; ++w) {
        DualWord word;
        word.torsion = w;
        int sign = std::popcount(unsigned(w & label_vec)) & 1;
        e.terms[word] = sign ? rat(-1, 8) : rat(1, 8);
    }
    return e;
}

GroupRingElement export_group_ring(const CPElement& T, const System& sys) {
    const int p = T.p;
    GroupRingElement out;
    out.p = p;
    for (const CPTerm& term : T.terms) {
        if (!term.chi || term.theta.empty()) continue;  // U carries coefficient zero
        GroupRingElement chi_hat = label_delta(sys.assignment.vec(term.chi->label), p);
        for (const auto& [pos, sym] : term.chi->constraints) {
            GroupRingElement sigma = sigma_idempotent(pos, p);
            if (sym == Sym::NonZero) sigma = ring_identity(p) + sigma.scaled(-1);
            chi_hat = chi_hat * sigma;
        }
        for (const CPCoef& c : term.theta) {
            DualWord gamma_word;
            gamma_word.shift = c.gamma.shift;
            gamma_word.mat = c.gamma.mat;
            GroupRingElement g;
            g.p = p;
            g.terms[gamma_word] = c.coeff;
            out = out + (g * chi_hat);
        }
    }
    return out;
}

std::vector<GammaElement> gamma_buckets(const GroupRingElement& e) {
    std::vector<GammaElement> out;
    for (const auto& [w, c] : e.terms) {
        GammaElement g{w.shift, w.mat};
        bool seen = false;
        for (const GammaElement& h : out)
            if (h == g) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(g);
    }
    return out;
}

bool evaluate_bucket(const GroupRingElement& e, const GammaElement& gamma, const LazyPoint& x,
                     const TorsionAssignment& ta, Rational* value) {
    const int p = e.p;
    // character sum lands in Z[w]/(1 + w + ... + w^{p-1}); collect the
    // coefficient of each power of w
    std::vector<Rational> d(static_cast<size_t>(p));
    for (const auto& [w, c] : e.terms) {
        if (w.shift != gamma.shift || w.mat != gamma.mat) continue;
        int64_t r = 0;
        for (const auto& [pos, val] : w.lamps) r += int64_t(val) * x.coord(pos);
        int sign = std::popcount(unsigned(w.torsion & ta.vec(x.label))) & 1;
        d[size_t(r % p)] += sign ? -c : c;
    }
    // rational iff all coefficients of nonconstant powers agree
    for (int r = 2; r < p; ++r)
        if (d[size_t(r)] != d[1]) return false;
    if (value) *value = p > 1 ? d[0] - d[1] : d[0];
    return true;
}

nlohmann::json to_json(const GroupRingElement& e) {
    nlohmann::json words = nlohmann::json::array();
    for (const auto& [w, c] : e.terms) {
        nlohmann::json lamps = nlohmann::json::array();
        for (const auto& [pos, val] : w.lamps) lamps.push_back({pos, val});
        words.push_back({{"coeff", rat_string(c)},
                         {"lamps", lamps},
                         {"shift", w.shift},
                         {"torsion", w.torsion},
                         {"matrix", w.mat.bits()}});
    }
    return nlohmann::json{{"p", e.p}, {"words", words}};
}

GroupRingElement group_ring_from_json(const nlohmann::json& j) {
    GroupRingElement e;
    e.p = j.at("p").get<int>();
    for (const auto& jw : j.at("words")) {
        DualWord w;
        for (const auto& lamp : jw.at("lamps"))
            w.lamps[lamp.at(0).get<int64_t>()] = lamp.at(1).get<int>();
        w.shift = jw.at("shift").get<int64_t>();
        w.torsion = jw.at("torsion").get<F2Vec>();
        w.mat = F2Matrix::from_bits(jw.at("matrix").get<uint16_t>());
        e.add_term(w, rat_parse(jw.at("coeff").get<std::string>()));
    }
    return e;
}

FiniteGroup FiniteGroup::cyclic(int n) {
    FiniteGroup g;
    g.order = n;
    g.identity = 0;
    g.mul.resize(size_t(n) * n);
    g.inv.resize(size_t(n));
    for (int a = 0; a < n; ++a) {
        g.inv[a] = (n - a) % n;
        for (int b = 0; b < n; ++b) g.mul[size_t(a) * n + b] = (a + b) % n;
    }
    return g;
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
    FiniteGroup g;
    g.order = a.order * b.order;
    g.identity = a.identity * b.order + b.identity;
    g.mul.resize(size_t(g.order) * g.order);
    g.inv.resize(size_t(g.order));
    auto idx = [&](int x, int y) { return x * b.order + y; };
    for (int x1 = 0; x1 < a.order; ++x1)
        for (int y1 = 0; y1 < b.order; ++y1) {
            g.inv[idx(x1, y1)] = idx(a.inv[x1], b.inv[y1]);
            for (int x2 = 0; x2 < a.order; ++x2)
                for (int y2 = 0; y2 < b.order; ++y2)
                    g.mul[size_t(idx(x1, y1)) * g.order + idx(x2, y2)] =
                        idx(a.op(x1, x2), b.op(y1, y2));
        }
    return g;
}

const FiniteGroup& FiniteGroup::torsion_group() {
    static const FiniteGroup h = [] {
        const auto& mats = gl3();
        FiniteGroup g;
        g.order = 8 * int(mats.size());  // 1344
        g.mul.resize(size_t(g.order) * g.order);
        g.inv.resize(size_t(g.order));
        std::map<uint16_t, int> mat_index;
        for (int i = 0; i < int(mats.size()); ++i) mat_index[mats[i].bits()] = i;
        auto idx = [&](F2Vec v, int mi) { return int(v) + 8 * mi; };
        g.identity = idx(0, mat_index.at(F2Matrix::identity().bits()));
        for (int mi = 0; mi < int(mats.size()); ++mi) {
            const F2Matrix& m = mats[mi];
            F2Matrix m_inv = m.inverse();
            int mi_inv = mat_index.at(m_inv.bits());
            for (F2Vec v = 0; v < 8; ++v) {
                g.inv[idx(v, mi)] = idx(m_inv.dual_apply(v), mi_inv);
                for (int ni = 0; ni < int(mats.size()); ++ni)
                    for (F2Vec w = 0; w < 8; ++w)
                        g.mul[size_t(idx(v, mi)) * g.order + idx(w, ni)] =
                            idx(F2Vec(v ^ m.dual_apply(w)), mat_index.at((m * mats[ni]).bits()));
            }
        }
        return g;
    }();
    return h;
}

RationalMatrix regular_embedding(const FiniteGroup& g, const SparseGroupRing& theta) {
    RationalMatrix m(g.order, g.order);
    for (const auto& [h, c] : theta) {
        if (h < 0 || h >= g.order) throw std::invalid_argument("regular_embedding: bad element");
        for (int x = 0; x < g.order; ++x) m.at(g.op(h, x), x) += c;
    }
    return m;
}

bool scaling_lemma_check(int n, const std::vector<Rational>& theta_on_zn) {
    if (n < 1 || int(theta_on_zn.size()) != n)
        throw std::invalid_argument("scaling_lemma_check: theta must have n coefficients");
    FiniteGroup zn = FiniteGroup::cyclic(n);
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    FiniteGroup gh = FiniteGroup::product(zn, z2);
    auto idx = [&](int a, int b) { return a * 2 + b; };

    // (1 - pi) + pi theta with pi = (e + h)/2
    SparseGroupRing op;
    auto add = [&](int e, Rational c) {
        if (c != 0) op.push_back({e, std::move(c)});
    };
    add(gh.identity, rat(1, 1) - rat(1, 2));
    add(idx(0, 1), rat(-1, 2));
    for (int a = 0; a < n; ++a) {
        add(idx(a, 0), theta_on_zn[a] / 2);
        add(idx(a, 1), theta_on_zn[a] / 2);
    }

    SparseGroupRing theta;
    for (int a = 0; a < n; ++a)
        if (theta_on_zn[a] != 0) theta.push_back({a, theta_on_zn[a]});

    int k_big = kernel_dimension(regular_embedding(gh, op));
    int k_small = kernel_dimension(regular_embedding(zn, theta));
    // |H| * k_big/|G x H| == k_small/|G|  <=>  k_big == k_small
    return k_big == k_small;
}

}  // namespace l2lamp
