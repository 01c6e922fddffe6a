#include "l2lamp/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace l2lamp {

F2Vec F2Matrix::apply(F2Vec v) const {
    F2Vec out = 0;
    for (int i = 0; i < 3; ++i) out |= F2Vec((std::popcount(unsigned(row[i] & v)) & 1) << i);
    return out;
}

F2Matrix F2Matrix::operator*(const F2Matrix& o) const {
    // row i of the product = row[i] combined over o's rows
    F2Matrix r;
    for (int i = 0; i < 3; ++i) {
        uint8_t acc = 0;
        for (int k = 0; k < 3; ++k)
            if (row[i] >> k & 1) acc ^= o.row[k];
        r.row[i] = acc;
    }
    return r;
}

F2Matrix F2Matrix::transpose() const {
    F2Matrix r;
    for (int i = 0; i < 3; ++i) {
        uint8_t acc = 0;
        for (int j = 0; j < 3; ++j) acc |= uint8_t(((row[j] >> i) & 1) << j);
        r.row[i] = acc;
    }
    return r;
}

bool F2Matrix::invertible() const {
    // det over F2 via the 3x3 formula
    auto e = [&](int i, int j) { return (row[i] >> j) & 1; };
    int det = e(0, 0) & ((e(1, 1) & e(2, 2)) ^ (e(1, 2) & e(2, 1)));
    det ^= e(0, 1) & ((e(1, 0) & e(2, 2)) ^ (e(1, 2) & e(2, 0)));
    det ^= e(0, 2) & ((e(1, 0) & e(2, 1)) ^ (e(1, 1) & e(2, 0)));
    return det != 0;
}

F2Matrix F2Matrix::inverse() const {
    // Gauss-Jordan on [M | I], rows as 6-bit words
    uint8_t aug[3];
    for (int i = 0; i < 3; ++i) aug[i] = uint8_t(row[i] | (1 << (i + 3)));
    for (int c = 0; c < 3; ++c) {
        int piv = -1;
        for (int i = c; i < 3; ++i)
            if (aug[i] >> c & 1) { piv = i; break; }
        if (piv < 0) throw std::domain_error("F2Matrix::inverse: singular matrix");
        std::swap(aug[c], aug[piv]);
        for (int i = 0; i < 3; ++i)
            if (i != c && (aug[i] >> c & 1)) aug[i] ^= aug[c];
    }
    F2Matrix r;
    for (int i = 0; i < 3; ++i) r.row[i] = uint8_t(aug[i] >> 3);
    return r;
}

F2Vec F2Matrix::dual_apply(F2Vec v) const { return inverse().transpose().apply(v); }

F2Matrix F2Matrix::from_bits(uint16_t b) {
    F2Matrix m;
    m.row = {uint8_t(b & 7), uint8_t((b >> 3) & 7), uint8_t((b >> 6) & 7)};
    return m;
}

const std::vector<F2Matrix>& gl3() {
    static const std::vector<F2Matrix> table = [] {
        std::vector<F2Matrix> v;
        for (uint16_t b = 0; b < 512; ++b) {
            F2Matrix m = F2Matrix::from_bits(b);
            if (m.invertible()) v.push_back(m);
        }
        return v;  // 168 elements
    }();
    return table;
}

const char* to_string(Letter l) {
    switch (l) {
        case Letter::A: return "A";
        case Letter::B: return "B";
        case Letter::C: return "C";
        case Letter::D: return "D";
        case Letter::F: return "F";
        case Letter::I: return "I";
        case Letter::U1: return "U1";
        case Letter::U2: return "U2";
    }
    return "?";
}

std::optional<Letter> letter_from_string(const std::string& s) {
    for (Letter l : kAllLetters)
        if (s == to_string(l)) return l;
    return std::nullopt;
}

TorsionAssignment TorsionAssignment::from_vectors(const std::array<F2Vec, 8>& vecs) {
    TorsionAssignment ta;
    ta.vec_of_letter = vecs;
    std::array<bool, 8> seen{};
    for (Letter l : kAllLetters) {
        F2Vec v = vecs[size_t(l)];
        if (v > 7 || seen[v]) throw std::invalid_argument("TorsionAssignment: not a bijection");
        seen[v] = true;
        ta.letter_of_vec[v] = l;
    }
    for (Letter l : kCoreLetters)
        if (vecs[size_t(l)] == 0)
            throw std::invalid_argument("TorsionAssignment: core letter on zero vector");
    return ta;
}

TorsionAssignment TorsionAssignment::canonical() {
    // A..I enumerate 1..6 in letter order, U2 takes the leftover nonzero
    // vector, U1 is zero
    return from_vectors({1, 2, 3, 4, 5, 6, 0, 7});
}

TorsionAssignment TorsionAssignment::alternate() {
    // a second valid choice, with the zero vector on U2 this time
    return from_vectors({5, 3, 6, 1, 7, 2, 4, 0});
}

const F2Matrix& TransitionFamily::at(Letter x, Letter y) const {
    if (x == y || size_t(x) > 5 || size_t(y) > 5)
        throw std::invalid_argument("TransitionFamily::at: need distinct core letters");
    return m[size_t(x)][size_t(y)];
}

namespace {

std::vector<F2Matrix> senders(const TorsionAssignment& ta, Letter x, Letter y, bool rev) {
    std::vector<F2Matrix> out;
    for (const F2Matrix& m : gl3())
        if (m.apply(ta.vec(x)) == ta.vec(y)) out.push_back(m);
    if (rev) std::reverse(out.begin(), out.end());
    return out;  // 24 elements: coset of a point stabilizer
}

}  // namespace

TransitionFamily solve_transition_family(const TorsionAssignment& ta, bool reverse_order) {
    using enum Letter;
    TransitionFamily tf;
    auto set_pair = [&](Letter x, Letter y, const F2Matrix& m) {
        tf.m[size_t(x)][size_t(y)] = m;
        tf.m[size_t(y)][size_t(x)] = m.inverse();
    };

    // eq. (2) couples [AC], [CD], [AI], [ID]; search the free choices and
    // read off the fourth
    bool found = false;
    for (const F2Matrix& ac : senders(ta, A, C, reverse_order)) {
        for (const F2Matrix& cd : senders(ta, C, D, reverse_order)) {
            F2Matrix lhs = ac * cd;
            for (const F2Matrix& id : senders(ta, I, D, reverse_order)) {
                F2Matrix ai = lhs * id.inverse();
                if (ai.apply(ta.vec(A)) == ta.vec(I)) {
                    set_pair(A, C, ac);
                    set_pair(C, D, cd);
                    set_pair(I, D, id);
                    set_pair(A, I, ai);
                    found = true;
                }
                if (found) break;
            }
            if (found) break;
        }
        if (found) break;
    }
    if (!found) throw std::runtime_error("solve_transition_family: no solution (internal error)");

    // remaining pairs are unconstrained beyond [xy](x)=y and eq. (1)
    for (size_t i = 0; i < 6; ++i) {
        for (size_t j = i + 1; j < 6; ++j) {
            Letter x = kCoreLetters[i], y = kCoreLetters[j];
            if ((x == A && (y == C || y == I)) || (x == C && y == D) || (x == D && y == I)) continue;
            set_pair(x, y, senders(ta, x, y, reverse_order).front());
        }
    }
    return tf;
}

std::string transition_family_violation(const TransitionFamily& tf, const TorsionAssignment& ta) {
    using enum Letter;
    for (Letter x : kCoreLetters) {
        for (Letter y : kCoreLetters) {
            if (x == y) continue;
            const F2Matrix& m = tf.at(x, y);
            if (!m.invertible()) return std::string("[") + to_string(x) + to_string(y) + "] singular";
            if (m.apply(ta.vec(x)) != ta.vec(y))
                return std::string("[") + to_string(x) + to_string(y) + "] does not send x to y";
            if (!(m * tf.at(y, x)).is_identity())
                return std::string("[") + to_string(x) + to_string(y) + "] violates [xy]=[yx]^{-1}";
        }
    }
    if (tf.at(A, C) * tf.at(C, D) != tf.at(A, I) * tf.at(I, D)) return "[AC][CD] != [AI][ID]";
    return {};
}

CylinderSet cyl(const std::string& pattern, int64_t leftmost, Letter label) {
    CylinderSet c;
    c.label = label;
    int64_t pos = leftmost;
    for (char ch : pattern) {
        switch (ch) {
            case '0': c.constraints[pos++] = Sym::Zero; break;
            case '1': c.constraints[pos++] = Sym::NonZero; break;
            case '*': ++pos; break;
            default: throw std::invalid_argument("cyl: pattern characters are 0/1/*");
        }
    }
    return c;
}

CylinderSet act_cylinder(const GammaElement& g, const CylinderSet& c, const TorsionAssignment& ta) {
    CylinderSet out;
    for (const auto& [pos, sym] : c.constraints) out.constraints[pos - g.shift] = sym;
    out.label = ta.letter(g.mat.apply(ta.vec(c.label)));
    return out;
}

Rational cylinder_measure(const CylinderSet& c, int p) {
    if (p < 2) throw std::domain_error("cylinder_measure: p >= 2 required");
    Rational mu = rat(1, 8);
    for (const auto& [pos, sym] : c.constraints)
        mu *= (sym == Sym::Zero) ? rat(1, p) : rat(p - 1, p);
    return mu;
}

bool cylinders_disjoint(const CylinderSet& a, const CylinderSet& b) {
    if (a.label != b.label) return true;
    for (const auto& [pos, sym] : a.constraints) {
        auto it = b.constraints.find(pos);
        if (it != b.constraints.end() && it->second != sym) return true;
    }
    return false;
}

uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

int HashSource::coord(int64_t abs_pos) const {
    // rejection keeps the draw exactly uniform; still a pure function of
    // (seed, position)
    uint64_t h = mix64(seed_, uint64_t(abs_pos));
    uint64_t rem = (UINT64_MAX % uint64_t(p_) + 1) % uint64_t(p_);  // 2^64 mod p
    if (rem)
        while (h > UINT64_MAX - rem) h = mix64(h);
    return int(h % uint64_t(p_));
}

PatternSource PatternSource::from_cylinder(const CylinderSet& c, int p) {
    std::map<int64_t, int> vals;
    for (const auto& [pos, sym] : c.constraints) vals[pos] = (sym == Sym::Zero) ? 0 : 1;
    return PatternSource(std::move(vals), p);
}

int PatternSource::coord(int64_t abs_pos) const {
    auto it = values_.find(abs_pos);
    return it == values_.end() ? 0 : it->second;
}

LazyPoint act_point(const GammaElement& g, const LazyPoint& x, const TorsionAssignment& ta) {
    return {x.source, x.offset + g.shift, ta.letter(g.mat.apply(ta.vec(x.label)))};
}

bool point_in_cylinder(const LazyPoint& x, const CylinderSet& c) {
    if (x.label != c.label) return false;
    for (const auto& [pos, sym] : c.constraints)
        if ((x.coord(pos) != 0) != (sym == Sym::NonZero)) return false;
    return true;
}

}  // namespace l2lamp
