#pragma once

#include <random>
#include <string>
#include <vector>

#include "bandgraph/lattices.hpp"

namespace support {

inline const std::vector<std::string>& builtin_ids() {
    static const std::vector<std::string> ids{
        "cubic(1)",       "cubic(2)",        "cubic(3)",          "triangular",        "hexagonal",
        "bcc",            "fcc",             "star(1,2)",         "star(2,3)",         "star(3,4)",
        "subdivided(1,2)", "subdivided(2,1)", "subdivided(2,2)",  "bipartite_path(2)", "bipartite_path(3)",
        "decorated(cubic(2),path(3),0)",     "decorated(triangular,claw(2),0)"};
    return ids;
}

/// Loop-graph base decorated with one or two random finite graphs, random
/// potentials in [-3, 3]. At most 11 vertices.
inline bandgraph::PeriodicGraphSpec random_decorated_loop_graph(std::mt19937_64& rng) {
    using namespace bandgraph;
    std::uniform_int_distribution<int> pick(0, 3), size(2, 4), coin(0, 1);
    std::uniform_real_distribution<double> pot(-3.0, 3.0);

    PeriodicGraphSpec spec = [&] {
        switch (pick(rng)) {
            case 0: return lattices::cubic(1 + coin(rng));
            case 1: return lattices::triangular();
            case 2: return lattices::star(2, 2 + coin(rng));
            default: return lattices::bipartite_path(2);
        }
    }();
    const int rounds = 1 + coin(rng);
    for (int r = 0; r < rounds; ++r) {
        FiniteGraph g = [&] {
            const int k = size(rng);
            switch (pick(rng)) {
                case 0: return FiniteGraph::path(k);
                case 1: return FiniteGraph::cycle(k + 1);
                case 2: return FiniteGraph::complete(k);
                default: return FiniteGraph::claw(k - 1);
            }
        }();
        std::uniform_int_distribution<std::size_t> at(0, spec.vertex_count() - 1);
        spec = decorate(spec, g, at(rng));
    }
    std::vector<double> q(spec.vertex_count());
    for (auto& x : q) x = pot(rng);
    return spec.with_potentials(q);
}

}  // namespace support
