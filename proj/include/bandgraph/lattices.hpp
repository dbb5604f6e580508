#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bandgraph/graph.hpp"

namespace bandgraph {

/// Finite connected graph used to decorate a periodic graph. Vertex 0 is the
/// root that gets identified with a vertex of the periodic graph.
struct FiniteGraph {
    std::string name;
    std::size_t vertex_count = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    static FiniteGraph path(int n);      // root at an endpoint
    static FiniteGraph cycle(int n);
    static FiniteGraph complete(int n);
    static FiniteGraph claw(int k);      // root at the center, k leaves

    bool connected() const;
};

namespace lattices {

PeriodicGraphSpec cubic(int d);
PeriodicGraphSpec triangular();
PeriodicGraphSpec hexagonal();
PeriodicGraphSpec bcc();
PeriodicGraphSpec fcc();
/// Cubic lattice with nu - 1 pendant vertices on its single vertex (the hub, last).
PeriodicGraphSpec star(int d, int nu);
/// Cubic lattice with every edge subdivided by n vertices; hub last.
PeriodicGraphSpec subdivided(int d, int n);
/// 2-periodic chain of nu vertices joined by double edges, with loops along
/// the two axes at the two ends. Bipartite and 4-regular.
PeriodicGraphSpec bipartite_path(int nu);

}  // namespace lattices

/// Glues `attachment` to `base` by identifying its root with `attach_vertex`.
/// New edges carry zero index. Throws ValidationError for a disconnected attachment.
PeriodicGraphSpec decorate(const PeriodicGraphSpec& base, const FiniteGraph& attachment,
                           std::size_t attach_vertex);

struct LatticeKind {
    enum class Family { cubic, triangular, hexagonal, bcc, fcc, star, subdivided, decorated, bipartite_path };

    Family family = Family::cubic;
    std::vector<int> params;
    std::shared_ptr<const LatticeKind> base;   // decorated only
    std::optional<FiniteGraph> attachment;     // decorated only
    std::optional<std::vector<double>> potentials;

    /// Canonical identifier, e.g. "decorated(cubic(2),path(3),0)".
    std::string id() const;
};

/// Parses identifiers such as "cubic(3)", "star(2,3)" or
/// "decorated(triangular,claw(2),0)". Throws ParseError.
LatticeKind parse_lattice_kind(std::string_view id);
FiniteGraph parse_finite_graph(std::string_view id);

/// Throws ParameterError on out-of-range parameters.
PeriodicGraphSpec generate(const LatticeKind& kind);
PeriodicGraphSpec generate_builtin(std::string_view id);

struct BuiltinInfo {
    std::string signature;
    std::string description;
};

const std::vector<BuiltinInfo>& builtin_catalog();

}  // namespace bandgraph
