#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinelab/graph.hpp"

namespace spinelab {

class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GraphAutomorphism {
    std::vector<int> vperm;
    std::vector<int> hperm;

    static GraphAutomorphism identity(const HalfEdgeGraph& g);
    bool is_identity() const;
    int order() const;
    GraphAutomorphism inverse() const;
    GraphAutomorphism power(int k) const;

    auto operator<=>(const GraphAutomorphism&) const = default;
};

// (a * b)(x) = a(b(x))
GraphAutomorphism compose(const GraphAutomorphism& a, const GraphAutomorphism& b);
bool is_automorphism(const HalfEdgeGraph& g, const GraphAutomorphism& a);
Forest apply(const HalfEdgeGraph& g, const GraphAutomorphism& a, const Forest& f);

nlohmann::ordered_json to_json(const GraphAutomorphism& a);
GraphAutomorphism automorphism_from_json(const nlohmann::json& j);

// An isomorphism g1 -> g2: vertex and half-edge maps.
struct Isomorphism {
    std::vector<int> vertex_map;
    std::vector<int> half_edge_map;
};

struct CanonicalForm {
    std::vector<std::uint32_t> code;
    auto operator<=>(const CanonicalForm&) const = default;
    std::string to_string() const;
};

CanonicalForm canonical_form(const HalfEdgeGraph& g);

struct CanonicalRepresentative {
    HalfEdgeGraph graph;
    Isomorphism iso;  // from the input graph to `graph`
};

CanonicalRepresentative canonical_representative(const HalfEdgeGraph& g);
std::optional<Isomorphism> find_isomorphism(const HalfEdgeGraph& from, const HalfEdgeGraph& to);
bool isomorphic(const HalfEdgeGraph& a, const HalfEdgeGraph& b);

// Conjugate automorphism of `from` to an automorphism of `to` along iso.
GraphAutomorphism transport(const Isomorphism& iso, const GraphAutomorphism& a);
Forest transport(const HalfEdgeGraph& from, const HalfEdgeGraph& to, const Isomorphism& iso, const Forest& f);

constexpr std::uint64_t kDefaultElementCap = 1000000;

class AutGroup {
public:
    AutGroup() = default;
    AutGroup(HalfEdgeGraph g, std::vector<GraphAutomorphism> elements, std::vector<GraphAutomorphism> generators);

    const HalfEdgeGraph& graph() const { return graph_; }
    const std::vector<GraphAutomorphism>& elements() const { return elements_; }
    const std::vector<GraphAutomorphism>& generators() const { return generators_; }
    std::uint64_t order() const { return elements_.size(); }
    bool contains(const GraphAutomorphism& a) const;

private:
    HalfEdgeGraph graph_;
    std::vector<GraphAutomorphism> elements_;  // sorted
    std::vector<GraphAutomorphism> generators_;
};

// |Aut(g)| without listing elements.
std::uint64_t automorphism_group_order(const HalfEdgeGraph& g);
AutGroup automorphism_group(const HalfEdgeGraph& g, std::uint64_t cap = kDefaultElementCap);

// Subgroup generated by gens, listed in full.
AutGroup generated_subgroup(const HalfEdgeGraph& g, const std::vector<GraphAutomorphism>& gens,
                            std::uint64_t cap = kDefaultElementCap);
AutGroup subgroup_from_elements(const HalfEdgeGraph& g, std::vector<GraphAutomorphism> elements);

std::vector<GraphAutomorphism> elements_of_order(const AutGroup& grp, int k);
std::uint64_t sylow_p_order(std::uint64_t order, std::uint64_t p);
std::uint64_t sylow_p_order(const AutGroup& grp, std::uint64_t p);
std::vector<GraphAutomorphism> centralizer(const AutGroup& grp, const GraphAutomorphism& a);
bool is_abelian(const std::vector<GraphAutomorphism>& elements);
std::uint64_t abelianization_order(const AutGroup& grp);

AutGroup forest_stabilizer(const AutGroup& grp, const Forest& f);

// Orbit partition of `items` under the action; each orbit is sorted so its
// first entry is the representative. Orbits are listed by representative.
// Checks the identity acts trivially, generator images stay inside `items`,
// and orbit-stabilizer for every orbit.
template <typename T, typename Act>
std::vector<std::vector<T>> orbits(const AutGroup& grp, const std::vector<T>& items, Act act) {
    std::map<T, int> index;
    for (std::size_t i = 0; i < items.size(); ++i) index.emplace(items[i], static_cast<int>(i));
    const GraphAutomorphism id = GraphAutomorphism::identity(grp.graph());
    for (const T& x : items)
        if (!(act(id, x) == x)) throw std::logic_error("orbits: identity does not act trivially");
    std::vector<int> seen(items.size(), 0);
    std::vector<std::vector<T>> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (seen[i]) continue;
        std::vector<int> stack{static_cast<int>(i)};
        seen[i] = 1;
        std::vector<T> orbit;
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            orbit.push_back(items[cur]);
            for (const auto& gen : grp.generators()) {
                auto it = index.find(act(gen, items[cur]));
                if (it == index.end()) throw std::logic_error("orbits: action leaves the item set");
                if (!seen[it->second]) {
                    seen[it->second] = 1;
                    stack.push_back(it->second);
                }
            }
        }
        std::sort(orbit.begin(), orbit.end());
        std::uint64_t stab = 0;
        for (const auto& a : grp.elements())
            if (act(a, orbit.front()) == orbit.front()) ++stab;
        if (stab * orbit.size() != grp.order()) throw std::logic_error("orbits: orbit-stabilizer identity fails");
        out.push_back(std::move(orbit));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

}  // namespace spinelab
