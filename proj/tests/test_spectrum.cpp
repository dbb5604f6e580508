#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bandgraph/errors.hpp"
#include "bandgraph/lattices.hpp"
#include "bandgraph/spectrum.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace bandgraph;
constexpr double pi = std::numbers::pi;

namespace {

void check_bands(const BandStructure& bs, const std::vector<std::pair<double, double>>& want, double tol = 1e-9) {
    REQUIRE(bs.bands.size() == want.size());
    for (std::size_t n = 0; n < want.size(); ++n) {
        CHECK(std::abs(bs.bands[n].lower - want[n].first) <= tol);
        CHECK(std::abs(bs.bands[n].upper - want[n].second) <= tol);
    }
}

SpectrumOptions small_grid(int m = 24) {
    SpectrumOptions o;
    o.grid = m;
    return o;
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("grid layout") {
    CHECK(grid_coordinate(48, 96) == pi);
    CHECK(grid_coordinate(0, 7) == 0.0);
    CHECK(default_grid_size(1) == 96);
    CHECK(default_grid_size(2) == 96);
    CHECK(default_grid_size(3) == 24);
    CHECK(default_grid_size(5) == 12);

    const TorusGrid even(2, 4);
    CHECK(even.size() == 16);
    CHECK(even.point(1) == std::vector<double>{0.0, pi / 2});
    CHECK(even.point(4) == std::vector<double>{pi / 2, 0.0});

    const TorusGrid odd(2, 3);
    CHECK(odd.size() == 12);
    CHECK(odd.point(9) == std::vector<double>{0.0, pi});
    CHECK(odd.point(11) == std::vector<double>{pi, pi});
    CHECK_THROWS_AS(TorusGrid(2, 1), ParameterError);
}

TEST_CASE("grid eigenvalues agree with inertia bisection") {
    const auto spec = lattices::fcc().with_potentials({0.5, -1.0, 2.0, 0.25});
    const TorusGrid grid(3, 4);
    const auto samples = sample_grid(spec, MatrixKind::schrodinger, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto m = schrodinger_floquet(spec, Quasimomentum(grid.point(i))).entries;
        const auto want = oracle::bisection_eigenvalues(m);
        for (std::size_t n = 0; n < 4; ++n) CHECK(std::abs(samples.at(i, n) - want[n]) <= 1e-10);
    }
}

TEST_CASE("sampling is independent of the thread count") {
    const auto spec = lattices::star(2, 4).with_potentials({0.1, 0.2, -0.3, 1.0});
    const TorusGrid grid(2, 17);
    const auto ref = sample_grid(spec, MatrixKind::schrodinger, grid, 1);
    for (unsigned t : {2u, 3u, 8u}) CHECK(sample_grid(spec, MatrixKind::schrodinger, grid, t).values == ref.values);
}

TEST_CASE("cubic lattices") {
    for (int d = 1; d <= 3; ++d) {
        const auto bs = compute_band_structure(lattices::cubic(d), MatrixKind::laplacian);
        check_bands(bs, {{0.0, 4.0 * d}});
        CHECK(bs.spectrum_measure == doctest::Approx(4.0 * d));
        CHECK(bs.gaps.empty());
    }
}

TEST_CASE("hexagonal lattice") {
    check_bands(compute_band_structure(lattices::hexagonal(), MatrixKind::laplacian), {{0, 3}, {3, 6}});
    const auto bs = compute_band_structure(lattices::hexagonal().with_potentials({1, -1}), MatrixKind::schrodinger);
    check_bands(bs, {{3 - std::sqrt(10.0), 2}, {4, 3 + std::sqrt(10.0)}});
    REQUIRE(bs.gaps.size() == 1);
    CHECK(bs.gaps[0].lower == doctest::Approx(2.0));
    CHECK(bs.gaps[0].upper == doctest::Approx(4.0));
}

TEST_CASE("triangular lattice") {
    check_bands(compute_band_structure(lattices::triangular(), MatrixKind::laplacian), {{0, 9}});
}

TEST_CASE("body-centered cubic lattice") {
    check_bands(compute_band_structure(lattices::bcc(), MatrixKind::laplacian), {{0, 8}, {12, 20}});
    const auto bs = compute_band_structure(lattices::bcc().with_potentials({32, 0}), MatrixKind::schrodinger);
    check_bands(bs, {{24 - std::sqrt(320.0), 20}, {40, 24 + std::sqrt(320.0)}});
}

TEST_CASE("face-centered cubic lattice") {
    const auto bs = compute_band_structure(lattices::fcc(), MatrixKind::laplacian);
    REQUIRE(bs.flat_bands.size() == 1);
    CHECK(bs.flat_bands[0].value == doctest::Approx(4.0));
    CHECK(bs.flat_bands[0].multiplicity == 2);
    CHECK(bs.bands[1].width() <= 1e-9);
    CHECK(bs.bands[2].width() <= 1e-9);
    CHECK(std::abs(bs.bands[0].lower) <= 1e-9);
    CHECK(std::abs(bs.bands[0].upper - 4) <= 1e-9);
    CHECK(std::abs(bs.bands[3].lower - 16) <= 1e-9);
    CHECK(std::abs(bs.bands[3].upper - 24) <= 1e-9);

    const auto equal = compute_band_structure(lattices::fcc().with_potentials({1, 1, 0, 0}), MatrixKind::schrodinger);
    REQUIRE(equal.flat_bands.size() == 1);
    CHECK(equal.flat_bands[0].value == doctest::Approx(5.0));
    CHECK(equal.flat_bands[0].multiplicity == 1);

    const auto distinct =
        compute_band_structure(lattices::fcc().with_potentials({1, 2, 3, 0}), MatrixKind::schrodinger);
    CHECK(distinct.flat_bands.empty());
}

TEST_CASE("star lattice") {
    const auto bs = compute_band_structure(lattices::star(2, 3), MatrixKind::laplacian);
    const double x = 5.5, r = std::sqrt(x * x - 8);
    check_bands(bs, {{0, x - r}, {1, 1}, {3, x + r}});
    REQUIRE(bs.flat_bands.size() == 1);
    CHECK(bs.flat_bands[0].multiplicity == 1);
    CHECK(std::abs(bs.spectrum_measure - 8) <= 1e-9);
    CHECK(std::abs(bs.band_length_sum() - 8) <= 1e-9);
}

TEST_CASE("star lattice flat bands follow repeated potentials") {
    const auto spec = lattices::star(2, 5).with_potentials({0.5, 0.5, 0.5, -1.0, 0.0});
    const auto bs = compute_band_structure(spec, MatrixKind::schrodinger, small_grid());
    REQUIRE(bs.flat_bands.size() == 1);
    CHECK(bs.flat_bands[0].value == doctest::Approx(1.5));
    CHECK(bs.flat_bands[0].multiplicity == 2);
    CHECK(std::abs(bs.spectrum_measure - 8) <= 1e-9);
    const auto distinct = lattices::star(2, 4).with_potentials({0.5, -0.5, 1.5, 0.0});
    CHECK(compute_band_structure(distinct, MatrixKind::schrodinger, small_grid()).flat_bands.empty());
}

TEST_CASE("subdivided lattices") {
    for (int n = 1; n <= 2; ++n) {
        const auto bs = compute_band_structure(lattices::subdivided(2, n), MatrixKind::laplacian);
        REQUIRE(bs.flat_bands.size() == static_cast<std::size_t>(n));
        CHECK(bs.open_bands.size() == static_cast<std::size_t>(n + 1));
        for (int k = 1; k <= n; ++k) {
            const double mu = 2 - 2 * std::cos(pi * k / (n + 1));
            const auto& f = bs.flat_bands[static_cast<std::size_t>(k - 1)];
            CHECK(std::abs(f.value - mu) <= 1e-9);
            CHECK(f.multiplicity == 1);
            bool endpoint = false;
            for (const auto& b : bs.open_bands)
                endpoint = endpoint || std::abs(b.lower - mu) <= 1e-9 || std::abs(b.upper - mu) <= 1e-9;
            CHECK(endpoint);
        }
    }
    const auto first = check_first_band_nondegenerate(lattices::subdivided(2, 2));
    CHECK_FALSE(first.modulus_varies);
    CHECK(first.nondegenerate);
    CHECK(first.first_band_width > 0.5);
}

TEST_CASE("first band with varying moduli") {
    const auto c = check_first_band_nondegenerate(lattices::hexagonal().with_potentials({0.3, 0.0}), small_grid());
    CHECK(c.modulus_varies);
    CHECK(c.nondegenerate);
}

TEST_CASE("flat band blocks") {
    const auto fcc = check_flat_band_block(lattices::fcc(), {3}, MatrixKind::laplacian, small_grid(8));
    REQUIRE(fcc.size() == 1);
    CHECK(fcc[0].eta == doctest::Approx(4.0));
    CHECK(fcc[0].block_multiplicity == 3);
    CHECK(fcc[0].band_multiplicity == 2);
    CHECK(fcc[0].pass);

    const auto star = check_flat_band_block(lattices::star(2, 4), {3}, MatrixKind::laplacian, small_grid());
    REQUIRE(star.size() == 1);
    CHECK(star[0].block_multiplicity == 3);
    CHECK(star[0].band_multiplicity == 2);

    const auto sub = check_flat_band_block(lattices::subdivided(2, 1), {2}, MatrixKind::laplacian, small_grid());
    REQUIRE(sub.size() == 1);
    CHECK(sub[0].eta == doctest::Approx(2.0));
    CHECK(sub[0].pass);

    CHECK_THROWS_AS(check_flat_band_block(lattices::fcc(), {0, 1}), ParameterError);
}

TEST_CASE("report mechanics") {
    EstimateReport r;
    r.add_le("a", 1.0, 1.0 - 1e-9, 1e-8);
    r.add_le("b", 1.0, 0.9, 1e-8);
    r.add_lt("c", 1.0, 1.0);
    r.add_eq("d", 2.0, 2.0 + 1e-10, 1e-9);
    CHECK(r.find("a")->pass);
    CHECK_FALSE(r.find("b")->pass);
    CHECK_FALSE(r.find("c")->pass);
    CHECK(r.find("d")->pass);
    CHECK(r.find("missing") == nullptr);
    CHECK_FALSE(r.all_pass());
}

TEST_CASE("estimates hold on every builtin") {
    for (const auto& id : support::builtin_ids()) {
        CAPTURE(id);
        const auto report = applicable_estimates(generate_builtin(id), small_grid());
        for (const auto& c : report.checks) {
            CAPTURE(c.name);
            CAPTURE(c.slack);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("estimates hold on random decorated loop graphs") {
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 25; ++rep) {
        const auto spec = support::random_decorated_loop_graph(rng);
        const auto report = applicable_estimates(spec, small_grid(16));
        CHECK(report.find("measure_le_band_sum") != nullptr);
        CHECK(report.find("loop_lower_endpoints_at_zero") != nullptr);
        for (const auto& c : report.checks) {
            CAPTURE(c.name);
            CAPTURE(c.slack);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("precise loop graphs attain the band-length bound") {
    const auto spec = lattices::star(3, 4).with_potentials({0.4, -2.0, 1.0, 0.3});
    const auto report = verify_total_band_bound(spec, small_grid(12));
    REQUIRE(report.find("measure_eq_two_beta") != nullptr);
    CHECK(report.all_pass());
}

TEST_CASE("loop graph endpoints from two fibers") {
    const auto spec = lattices::star(2, 3).with_potentials({0.2, -0.7, 1.1});
    const auto fast = loop_band_endpoints(spec);
    const auto grid = compute_band_structure(spec, MatrixKind::schrodinger);
    for (std::size_t n = 0; n < 3; ++n) {
        CHECK(std::abs(fast.bands[n].lower - grid.bands[n].lower) <= 1e-9);
        CHECK(std::abs(fast.bands[n].upper - grid.bands[n].upper) <= 1e-9);
    }
    CHECK_THROWS_AS(loop_band_endpoints(lattices::hexagonal()), PreconditionError);
}

TEST_CASE("bipartite loop endpoints") {
    const auto spec = lattices::bipartite_path(3);
    const auto fast = bipartite_loop_endpoints(spec);
    const auto grid = compute_band_structure(spec, MatrixKind::laplacian, small_grid());
    for (std::size_t n = 0; n < 3; ++n) {
        CHECK(std::abs(fast.bands[n].lower - grid.bands[n].lower) <= 1e-9);
        CHECK(std::abs(fast.bands[n].upper - grid.bands[n].upper) <= 1e-9);
    }
    CHECK_THROWS_AS(bipartite_loop_endpoints(lattices::star(2, 3)), PreconditionError);
}

TEST_CASE("uniform extremizers") {
    const auto cubic = find_uniform_extremizers(lattices::cubic(2), small_grid());
    REQUIRE(cubic.lower.has_value());
    REQUIRE(cubic.upper.has_value());
    CHECK(*cubic.lower == std::vector<double>{0, 0});
    CHECK(*cubic.upper == std::vector<double>{pi, pi});

    const auto hex = find_uniform_extremizers(lattices::hexagonal(), small_grid());
    CHECK_FALSE(hex.lower.has_value());
    CHECK(hex.failing_lower_band == 2);
}

TEST_CASE("stability of identical graphs") {
    const auto spec = lattices::star(2, 3).with_potentials({0.3, 0.1, -0.2});
    const auto r = stability_constants(spec, spec, small_grid());
    CHECK(r.c == 0.0);
    CHECK(r.report.all_pass());
}

TEST_CASE("stability under a potential change") {
    const auto a = lattices::star(2, 3).with_potentials({0.3, 0, 0});
    const auto b = lattices::star(2, 3);
    const auto r = stability_constants(a, b, small_grid());
    CHECK(r.c == doctest::Approx(0.6));
    REQUIRE(r.report.find("c_eq_twice_potential_difference") != nullptr);
    CHECK(r.report.all_pass());
}

TEST_CASE("stability against a bipartite regular loop graph") {
    const auto r = stability_constants(lattices::star(2, 3), lattices::bipartite_path(3), small_grid());
    REQUIRE(r.c_precise.has_value());
    CHECK(r.report.find("precise_gap_variation_le_two_c") != nullptr);
    CHECK(r.report.all_pass());

    const auto both = stability_constants(lattices::bipartite_path(3), lattices::bipartite_path(3), small_grid());
    REQUIRE(both.c_bipartite.has_value());
    CHECK(*both.c_bipartite == 0.0);
    CHECK(both.report.all_pass());
}

TEST_CASE("stability preconditions") {
    CHECK_THROWS_AS(stability_constants(lattices::hexagonal(), lattices::fcc()), PreconditionError);
    CHECK_THROWS_AS(stability_constants(lattices::hexagonal(), lattices::star(2, 2)), PreconditionError);
}

TEST_CASE("large coupling") {
    const auto star = lattices::star(2, 3).with_potentials({-1, 1, 0});
    const auto r = large_coupling_analysis(star, 400, small_grid());
    CHECK(std::abs(r.measure - 8) <= 1e-2);
    CHECK(r.c_constant == doctest::Approx(8.0));
    const double d100 = large_coupling_analysis(star, 100, small_grid()).max_deviation;
    const double d200 = large_coupling_analysis(star, 200, small_grid()).max_deviation;
    CHECK(d200 / d100 == doctest::Approx(0.25).epsilon(0.1));

    const auto hex = large_coupling_analysis(lattices::hexagonal().with_potentials({1, -1}), 400);
    CHECK(std::abs(hex.measure * 400 - 9) <= 0.45);
    CHECK_THROWS_AS(large_coupling_analysis(lattices::star(2, 3), 10), PreconditionError);
    CHECK_THROWS_AS(large_coupling_analysis(star, -1), ParameterError);
}

TEST_CASE("dirac point") {
    const auto r = dirac_expansion_check(0.5, 1e-2);
    CHECK(std::abs(r.lower_edge - 2.5) <= 1e-12);
    CHECK(std::abs(r.upper_edge - 3.5) <= 1e-12);
    CHECK(r.ratio >= 0.15);
    CHECK(r.ratio <= 0.35);
    CHECK(r.literal_ratio > 0.4);
}

TEST_CASE("refinement reaches off-grid extrema") {
    auto opts = small_grid(10);
    const auto spec = lattices::hexagonal().with_potentials({1, -1});
    const auto coarse = compute_band_structure(spec, MatrixKind::schrodinger, opts);
    CHECK(2.0 - coarse.bands[0].upper > 1e-4);
    opts.refine = true;
    const auto fine = compute_band_structure(spec, MatrixKind::schrodinger, opts);
    CHECK(std::abs(fine.bands[0].upper - 2.0) <= 1e-6);
    CHECK(std::abs(fine.bands[1].lower - 4.0) <= 1e-6);
}

TEST_CASE("input errors") {
    const PeriodicGraphSpec split(1, {{"a", 0.0, {}}, {"b", 0.0, {}}}, {{0, 0, {1}}, {1, 1, {1}}});
    CHECK_THROWS_AS(compute_band_structure(split, MatrixKind::laplacian), DisconnectedGraphError);
    SpectrumOptions bad;
    bad.grid = 1;
    CHECK_THROWS_AS(compute_band_structure(lattices::cubic(1), MatrixKind::laplacian, bad), ParameterError);
}

}
