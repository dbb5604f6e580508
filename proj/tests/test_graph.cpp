#include <doctest.h>

#include <cmath>
#include <limits>

#include "bandgraph/errors.hpp"
#include "bandgraph/graph.hpp"
#include "bandgraph/lattices.hpp"

using namespace bandgraph;

TEST_SUITE("graph") {

TEST_CASE("structural validation") {
    CHECK_THROWS_AS(PeriodicGraphSpec(0, {{"v", 0.0, {}}}, {}), ValidationError);
    CHECK_THROWS_AS(PeriodicGraphSpec(1, {}, {}), ValidationError);
    CHECK_THROWS_AS(PeriodicGraphSpec(2, {{"v", 0.0, {}}}, {{0, 0, {1}}}), ValidationError);
    CHECK_THROWS_AS(PeriodicGraphSpec(1, {{"v", 0.0, {}}}, {{0, 1, {1}}}), ValidationError);
    CHECK_THROWS_AS(PeriodicGraphSpec(1, {{"v", std::nan(""), {}}}, {{0, 0, {1}}}), ValidationError);
    CHECK_THROWS_AS(PeriodicGraphSpec(1, {{"v", 0.0, std::vector<double>{1.0}}}, {{0, 0, {1}}}), ValidationError);
    CHECK_THROWS_AS(PeriodicGraphSpec(1, {{"v", 0.0, std::vector<double>{0.1, 0.2}}}, {{0, 0, {1}}}),
                    ValidationError);
    CHECK_THROWS_AS(PeriodicGraphSpec(1, {{"a", 0.0, std::vector<double>{0.5}}, {"b", 0.0, std::vector<double>{0.5}}},
                                      {{0, 1, {0}}, {0, 0, {1}}}),
                    ValidationError);
    CHECK_NOTHROW(PeriodicGraphSpec(1, {{"v", 0.0, {}}}, {{0, 0, {1}}}));
}

TEST_CASE("oriented edges and degrees") {
    const auto hex = lattices::hexagonal();
    const auto arcs = oriented_edges(hex);
    CHECK(arcs.size() == 2 * hex.edges().size());
    CHECK(degrees(hex) == std::vector<int>{3, 3});
    CHECK(degrees(lattices::cubic(3)) == std::vector<int>{6});
    CHECK(degrees(lattices::bcc()) == std::vector<int>{8, 14});
    CHECK(degrees(lattices::fcc()) == std::vector<int>{4, 4, 4, 18});
    CHECK(degrees(lattices::star(2, 3)) == std::vector<int>{1, 1, 6});
}

TEST_CASE("bridge counts") {
    for (int d = 1; d <= 4; ++d) CHECK(bridge_count(lattices::cubic(d)).beta == 2 * d);
    CHECK(bridge_count(lattices::hexagonal()).beta == 4);
    CHECK(bridge_count(lattices::triangular()).beta == 6);
    CHECK(bridge_count(lattices::bcc()).beta == 20);
    CHECK(bridge_count(lattices::fcc()).beta == 24);
    CHECK(bridge_count(lattices::subdivided(2, 3)).beta == 4);
}

TEST_CASE("connectivity of the cover") {
    CHECK(is_connected_periodic(lattices::hexagonal()));
    CHECK(is_connected_periodic(lattices::fcc()));
    const PeriodicGraphSpec doubled(1, {{"v", 0.0, {}}}, {{0, 0, {2}}});
    CHECK_FALSE(is_connected_periodic(doubled));
    CHECK_THROWS_AS(require_connected(doubled), DisconnectedGraphError);
    const PeriodicGraphSpec split(1, {{"a", 0.0, {}}, {"b", 0.0, {}}}, {{0, 0, {1}}, {1, 1, {1}}});
    CHECK_FALSE(is_connected_periodic(split));
    const PeriodicGraphSpec skew(2, {{"v", 0.0, {}}}, {{0, 0, {1, 1}}, {0, 0, {1, -1}}});
    CHECK_FALSE(is_connected_periodic(skew));
    const PeriodicGraphSpec full(2, {{"v", 0.0, {}}}, {{0, 0, {1, 1}}, {0, 0, {1, 0}}});
    CHECK(is_connected_periodic(full));
}

TEST_CASE("bipartiteness") {
    CHECK(fundamental_bipartite(lattices::hexagonal()));
    CHECK_FALSE(fundamental_bipartite(lattices::cubic(2)));
    const auto z = periodic_bipartite(lattices::cubic(2));
    CHECK(z.bipartite);
    CHECK(z.parity == std::vector<int>{1, 1});
    CHECK_FALSE(periodic_bipartite(lattices::triangular()).bipartite);
    CHECK(periodic_bipartite(lattices::hexagonal()).bipartite);
    CHECK(periodic_bipartite(lattices::bcc()).bipartite == false);
    CHECK(periodic_bipartite(lattices::bipartite_path(4)).bipartite);
}

TEST_CASE("classification of builtins") {
    const auto cubic = classify(lattices::cubic(3));
    CHECK(cubic.is_loop_graph);
    CHECK(cubic.precise_quasimomentum.has_value());
    CHECK(cubic.single_vertex_bridges);
    CHECK(cubic.is_regular);
    CHECK(cubic.kappa_max == 6);

    const auto tri = classify(lattices::triangular());
    CHECK(tri.is_loop_graph);
    CHECK_FALSE(tri.precise_quasimomentum.has_value());

    const auto hex = classify(lattices::hexagonal());
    CHECK_FALSE(hex.is_loop_graph);
    CHECK(hex.is_regular);
    CHECK(hex.periodic_bipartite);

    const auto star = classify(lattices::star(2, 3));
    CHECK(star.is_loop_graph);
    CHECK(star.single_vertex_bridges);
    REQUIRE(star.precise_quasimomentum.has_value());
    CHECK(*star.precise_quasimomentum == std::vector<double>{M_PI, M_PI});
    CHECK_FALSE(star.is_regular);

    const auto chain = classify(lattices::bipartite_path(3));
    CHECK(chain.is_regular);
    CHECK(chain.kappa_max == 4);
    CHECK(chain.periodic_bipartite);
    CHECK(chain.is_loop_graph);
    CHECK_FALSE(chain.single_vertex_bridges);
}

TEST_CASE("origin shift keeps the graph and moves indices consistently") {
    const auto hex = lattices::hexagonal();
    const auto moved = shift_origin(hex, {0.25, 0.5});
    CHECK(moved.vertex_count() == hex.vertex_count());
    CHECK(moved.edges().size() == hex.edges().size());
    CHECK(is_connected_periodic(moved));
    for (const auto& v : moved.vertices())
        for (double x : *v.position) CHECK((x >= 0.0 && x < 1.0));
    // Loops never change.
    const auto s = shift_origin(lattices::star(2, 3), {0.3, 0.7});
    for (std::size_t i = 0; i < s.edges().size(); ++i)
        if (s.edges()[i].is_loop()) CHECK(s.edges()[i].index == lattices::star(2, 3).edges()[i].index);
    CHECK(shift_origin(hex, {0.0, 0.0}) == hex);

    const PeriodicGraphSpec bare(1, {{"v", 0.0, {}}}, {{0, 0, {1}}});
    CHECK_THROWS_AS(shift_origin(bare, {0.5}), PreconditionError);
}

TEST_CASE("bridge minimization finds a better origin") {
    const PeriodicGraphSpec g(1, {{"a", 0.0, std::vector<double>{0.1}}, {"b", 0.0, std::vector<double>{0.9}}},
                              {{0, 1, {-1}}, {0, 0, {1}}});
    CHECK(bridge_count(g).beta == 4);
    const auto m = minimize_bridges(g);
    CHECK(bridge_count(m.spec).beta == 2);
    CHECK(bridge_count(minimize_bridges(lattices::hexagonal()).spec).beta == 4);
}

}
