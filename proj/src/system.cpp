#include "l2lamp/system.hpp"

#include "l2lamp/families.hpp"

#include <mutex>

namespace l2lamp {

int FamilyId::vertex_count() const {
    switch (kind) {
        case Kind::U: return 1;
        case Kind::G: return 2 * k;
        case Kind::H: return 2 * l + 1;
        case Kind::J: return 2 * k + 2 * l + 2;
        case Kind::Unknown: return 0;
    }
    return 0;
}

std::string FamilyId::name() const {
    switch (kind) {
        case Kind::U: return "u";
        case Kind::G: return "g(" + std::to_string(k) + ")";
        case Kind::H: return "h(" + std::to_string(l) + ")";
        case Kind::J: return "j(" + std::to_string(k) + "," + std::to_string(l) + ")";
        case Kind::Unknown: return "unknown";
    }
    return "unknown";
}

System System::make(int p, bool alternate_conventions) {
    System sys;
    sys.p = p;
    sys.assignment = alternate_conventions ? TorsionAssignment::alternate()
                                           : TorsionAssignment::canonical();
    sys.transitions = solve_transition_family(sys.assignment, alternate_conventions);
    sys.S = build_S(p, sys.transitions);
    sys.T = build_T(sys.S);
    return sys;
}

const SGraph& System::family_template(FamilyId id) const {
    {
        std::shared_lock lock(cache_->mutex);
        auto it = cache_->map.find(id);
        if (it != cache_->map.end()) return *it->second;
    }
    SGraph g = generate_template(id, *this);
    std::unique_lock lock(cache_->mutex);
    auto [it, inserted] = cache_->map.try_emplace(id, nullptr);
    if (inserted) it->second = std::make_unique<SGraph>(std::move(g));
    return *it->second;
}

}  // namespace l2lamp
