#pragma once

// Bundles one concrete instantiation of the dynamical system: the prime p,
// a torsion assignment, a transition family, and the operators S and T
// built from them.  Holds the family-template cache shared by the
// classifier.

#include "l2lamp/crossed_op.hpp"
#include "l2lamp/dynamics.hpp"
#include "l2lamp/sgraph.hpp"

#include <map>
#include <memory>
#include <shared_mutex>

namespace l2lamp {

struct FamilyId {
    enum class Kind : uint8_t { U, G, H, J, Unknown };
    Kind kind = Kind::Unknown;
    int k = 0;  // G and J
    int l = 0;  // H and J

    static FamilyId u() { return {Kind::U, 0, 0}; }
    static FamilyId g(int k) { return {Kind::G, k, 0}; }
    static FamilyId h(int l) { return {Kind::H, 0, l}; }
    static FamilyId j(int k, int l) { return {Kind::J, k, l}; }
    static FamilyId unknown() { return {Kind::Unknown, 0, 0}; }

    int vertex_count() const;
    std::string name() const;  // "u", "g(3)", "h(2)", "j(1,4)", "unknown"

    auto operator<=>(const FamilyId&) const = default;
};

class System {
public:
    int p;
    TorsionAssignment assignment;
    TransitionFamily transitions;
    CPElement S;
    CPElement T;

    static System make(int p, bool alternate_conventions = false);

    // canonical template for the family, generated once by closure from the
    // seed cylinder and cached; thread-safe
    const SGraph& family_template(FamilyId id) const;

private:
    struct TemplateCache {
        std::shared_mutex mutex;
        std::map<FamilyId, std::unique_ptr<SGraph>> map;
    };
    std::unique_ptr<TemplateCache> cache_ = std::make_unique<TemplateCache>();
};

}  // namespace l2lamp
