#include "l2lamp/families.hpp"

#include "l2lamp/decomposer.hpp"

#include <sstream>
#include <stdexcept>

namespace l2lamp {

CylinderSet seed_cylinder(FamilyId id) {
    using enum Letter;
    switch (id.kind) {
        case FamilyId::Kind::U:
            return CylinderSet{{}, U1};
        case FamilyId::Kind::G: {
            // (0 1^{k-1} underline1 0 0, A)
            if (id.k < 1) throw std::invalid_argument("seed_cylinder: k >= 1");
            return cyl("0" + std::string(size_t(id.k), '1') + "00", -id.k, A);
        }
        case FamilyId::Kind::H: {
            // (0 0 underline1 1^{l-1} 0, C)
            if (id.l < 1) throw std::invalid_argument("seed_cylinder: l >= 1");
            return cyl("00" + std::string(size_t(id.l), '1') + "0", -2, C);
        }
        case FamilyId::Kind::J: {
            // (0 1^k underline0 1^l 0, I)
            if (id.k < 1 || id.l < 1) throw std::invalid_argument("seed_cylinder: k,l >= 1");
            return cyl("0" + std::string(size_t(id.k), '1') + "0" + std::string(size_t(id.l), '1') + "0",
                       -id.k - 1, I);
        }
        case FamilyId::Kind::Unknown: break;
    }
    throw std::invalid_argument("seed_cylinder: no seed for unknown family");
}

SGraph generate_template(FamilyId id, const System& sys) {
    CylinderSet seed = seed_cylinder(id);
    auto source = std::make_shared<PatternSource>(PatternSource::from_cylinder(seed, sys.p));
    int cap = std::max(64, 8 * id.vertex_count());
    ClosureResult res = closure_from_point(source, 0, seed.label, sys, cap);
    if (res.cap_exceeded) throw std::logic_error("generate_template: closure exceeded cap");
    return std::move(*res.graph);
}

Rational mu_closed_form(FamilyId id, int p) {
    if (p < 2) throw std::domain_error("mu_closed_form: p >= 2 required");
    Rational alpha = rat(1, p), beta = rat(p - 1, p);
    auto beta_pow = [&](int e) {
        Rational r = 1;
        for (int i = 0; i < e; ++i) r *= beta;
        return r;
    };
    Rational a3 = alpha * alpha * alpha;
    switch (id.kind) {
        case FamilyId::Kind::U:
            return rat(1, 8) *
                   (2 + 5 * alpha + a3 + 2 * beta * alpha * alpha + beta + beta * beta);
        case FamilyId::Kind::G:
            return Rational(2 * id.k) * rat(1, 8) * a3 * beta_pow(id.k);
        case FamilyId::Kind::H:
            return Rational(2 * id.l + 1) * rat(1, 8) * a3 * beta_pow(id.l);
        case FamilyId::Kind::J:
            return Rational(2 * id.k + 2 * id.l + 2) * rat(1, 8) * a3 * beta_pow(id.k + id.l);
        case FamilyId::Kind::Unknown: break;
    }
    throw std::invalid_argument("mu_closed_form: unknown family");
}

int expected_kernel_dim(FamilyId id) {
    switch (id.kind) {
        case FamilyId::Kind::U: return 1;
        case FamilyId::Kind::G: return 0;
        case FamilyId::Kind::H: return 1;
        case FamilyId::Kind::J: {
            // dichotomy: 2 iff l = 2^{k-1} - 1
            Integer target = (Integer(1) << (id.k - 1)) - 1;
            return target == id.l ? 2 : 1;
        }
        case FamilyId::Kind::Unknown: break;
    }
    throw std::invalid_argument("expected_kernel_dim: unknown family");
}

ProbabilitySumReport verify_probability_sum(int p) {
    if (p < 2) throw std::domain_error("verify_probability_sum: p >= 2 required");
    Rational alpha = rat(1, p), beta = rat(p - 1, p);
    Rational a3 = alpha * alpha * alpha;

    ProbabilitySumReport rep;
    rep.mu_u = mu_closed_form(FamilyId::u(), p);
    // sum_k 2k (1/8) a^3 b^k = (a^3/4) sum k b^k
    rep.g_total = a3 / 4 * moment_sum(0, beta);
    // sum_l (2l+1) (1/8) a^3 b^l = (a^3/4) sum l b^l + (a^3/8) sum b^l
    rep.h_total = a3 / 4 * moment_sum(0, beta) + a3 / 8 * geometric_sum(beta);
    // sum_{k,l} (2k+2l+2) (1/8) a^3 b^{k+l}
    //   = (a^2 b/4) sum (k+1) b^k + (a b/4) sum b^k
    rep.j_total = alpha * alpha * beta / 4 * moment_sum(1, beta) +
                  alpha * beta / 4 * geometric_sum(beta);
    rep.total = rep.mu_u + rep.g_total + rep.h_total + rep.j_total;
    rep.ok = (rep.total == 1);
    return rep;
}

std::vector<CensusRow> family_census(int p, int range) {
    std::vector<CensusRow> rows;
    auto push = [&](FamilyId id) {
        rows.push_back({id, id.vertex_count(), mu_closed_form(id, p), expected_kernel_dim(id)});
    };
    push(FamilyId::u());
    for (int k = 1; k <= range; ++k) push(FamilyId::g(k));
    for (int l = 1; l <= range; ++l) push(FamilyId::h(l));
    for (int k = 1; k <= range; ++k)
        for (int l = 1; l <= range; ++l) push(FamilyId::j(k, l));
    return rows;
}

std::string census_csv(const std::vector<CensusRow>& rows, int decimal_digits) {
    std::ostringstream os;
    os << "family,vertices,mu_exact,mu_decimal,kernel_dim\n";
    for (const CensusRow& r : rows)
        os << r.id.name() << "," << r.vertices << "," << rat_string(r.mu) << ","
           << decimal_string(r.mu, decimal_digits) << "," << r.kernel_dim << "\n";
    return os.str();
}

}  // namespace l2lamp
