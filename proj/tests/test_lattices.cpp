#include <doctest.h>

#include <random>

#include "bandgraph/errors.hpp"
#include "bandgraph/floquet.hpp"
#include "bandgraph/lattices.hpp"
#include "oracles.hpp"

using namespace bandgraph;

namespace {

double charpoly(const PeriodicGraphSpec& spec, MatrixKind kind, double lambda, const std::vector<double>& t) {
    auto m = fiber_matrix(spec, kind, Quasimomentum(t)).entries;
    m -= CMatrix::identity(m.rows()) * Complex(lambda);
    return determinant(m).real();
}

}  // namespace

TEST_SUITE("lattices") {

TEST_CASE("identifier parsing") {
    CHECK(parse_lattice_kind("cubic(3)").id() == "cubic(3)");
    CHECK(parse_lattice_kind(" star( 2 , 3 ) ").id() == "star(2,3)");
    CHECK(parse_lattice_kind("decorated(triangular, claw(2), 0)").id() == "decorated(triangular,claw(2),0)");
    CHECK(parse_lattice_kind("decorated(decorated(cubic(1),path(2),0),cycle(3),1)").id() ==
          "decorated(decorated(cubic(1),path(2),0),cycle(3),1)");
    CHECK_THROWS_AS(parse_lattice_kind("cubic"), ParseError);
    CHECK_THROWS_AS(parse_lattice_kind("cubic(2"), ParseError);
    CHECK_THROWS_AS(parse_lattice_kind("hcp"), ParseError);
    CHECK_THROWS_AS(parse_lattice_kind("star(2)"), ParseError);
    CHECK_THROWS_AS(parse_lattice_kind("cubic(2) extra"), ParseError);
    CHECK_THROWS_AS(parse_finite_graph("wheel(4)"), ParseError);
}

TEST_CASE("parameter ranges") {
    CHECK_THROWS_AS(generate_builtin("cubic(0)"), ParameterError);
    CHECK_THROWS_AS(generate_builtin("star(2,1)"), ParameterError);
    CHECK_THROWS_AS(generate_builtin("subdivided(2,0)"), ParameterError);
    CHECK_THROWS_AS(generate_builtin("bipartite_path(1)"), ParameterError);
    CHECK_THROWS_AS(generate_builtin("decorated(cubic(1),path(2),3)"), ParameterError);
    CHECK_THROWS_AS(generate_builtin("cycle(2)"), ParseError);
}

TEST_CASE("generator shapes") {
    CHECK(lattices::hexagonal().vertex_count() == 2);
    CHECK(lattices::bcc().edges().size() == 11);
    CHECK(lattices::fcc().vertex_count() == 4);
    const auto star = lattices::star(3, 5);
    CHECK(star.vertex_count() == 5);
    CHECK(star.dimension() == 3);
    const auto sub = lattices::subdivided(2, 3);
    CHECK(sub.vertex_count() == 7);
    CHECK(sub.edges().size() == 8);
    for (const auto& spec : {lattices::hexagonal(), lattices::bcc(), lattices::fcc(), star, sub})
        CHECK(spec.has_positions());
}

TEST_CASE("decoration") {
    const auto g = generate_builtin("decorated(cubic(2),claw(3),0)");
    CHECK(g.vertex_count() == 4);
    CHECK(g.edges().size() == 5);
    CHECK(degrees(g) == std::vector<int>{7, 1, 1, 1});
    CHECK(classify(g).is_loop_graph);
    FiniteGraph broken{"broken", 3, {{0, 1}}};
    CHECK_THROWS_AS(decorate(lattices::cubic(1), broken, 0), ValidationError);
    CHECK(FiniteGraph::cycle(5).connected());
    CHECK(FiniteGraph::complete(4).edges.size() == 6);
}

TEST_CASE("catalog") {
    const auto& cat = builtin_catalog();
    CHECK(cat.size() >= 8);
    bool fcc = false, star = false;
    for (const auto& b : cat) {
        fcc = fcc || b.signature == "fcc";
        star = star || b.signature == "star(d, nu)";
    }
    CHECK(fcc);
    CHECK(star);
}

TEST_CASE("characteristic polynomials against closed forms") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> lam(-2.0, 30.0), pot(-3.0, 3.0);
    auto close = [](double got, double want) { return std::abs(got - want) <= 1e-8 * std::max(1.0, std::abs(want)); };

    for (int rep = 0; rep < 50; ++rep) {
        const double l = lam(rng);
        {
            const double m = pot(rng);
            const auto t = oracle::random_theta(2, rng);
            const auto spec = lattices::hexagonal().with_potentials({m, -m});
            CHECK(close(charpoly(spec, MatrixKind::schrodinger, l, t), oracle::hexagonal_charpoly(l, t, m)));
        }
        {
            const double q1 = 10 * pot(rng);
            const auto t = oracle::random_theta(3, rng);
            const auto spec = lattices::bcc().with_potentials({q1, 0});
            CHECK(close(charpoly(spec, MatrixKind::schrodinger, l, t), oracle::bcc_charpoly(l, t, q1)));
        }
        {
            const std::vector<double> q{pot(rng), pot(rng), pot(rng), 0.0};
            const auto t = oracle::random_theta(3, rng);
            const auto spec = lattices::fcc().with_potentials(q);
            CHECK(close(charpoly(spec, MatrixKind::schrodinger, l, t), oracle::fcc_charpoly(l, t, q)));
        }
        for (int d = 1; d <= 3; ++d)
            for (int nu = 2; nu <= 4; ++nu) {
                std::vector<double> q(static_cast<std::size_t>(nu));
                for (auto& x : q) x = pot(rng);
                const auto t = oracle::random_theta(d, rng);
                const auto spec = lattices::star(d, nu).with_potentials(q);
                CHECK(close(charpoly(spec, MatrixKind::schrodinger, l, t), oracle::star_charpoly(l, t, q)));
            }
        for (int d = 1; d <= 3; ++d)
            for (int n = 1; n <= 3; ++n) {
                const auto t = oracle::random_theta(d, rng);
                CHECK(close(charpoly(lattices::subdivided(d, n), MatrixKind::laplacian, l, t),
                            oracle::subdivided_charpoly(l, t, n)));
            }
    }
}

TEST_CASE("flat band of the fcc lattice under equal potentials") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 20; ++rep) {
        const auto t = oracle::random_theta(3, rng);
        CHECK(std::abs(oracle::fcc_charpoly(5.0, t, {1, 1, 0})) < 1e-9);
        CHECK(std::abs(charpoly(lattices::fcc().with_potentials({1, 1, 0, 0}), MatrixKind::schrodinger, 5.0, t)) < 1e-9);
    }
}

}
