#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bandgraph/errors.hpp"
#include "bandgraph/floquet.hpp"
#include "bandgraph/graph.hpp"
#include "bandgraph/io.hpp"
#include "bandgraph/lattices.hpp"
#include "bandgraph/spectrum.hpp"

namespace py = pybind11;
using namespace bandgraph;

namespace {

SpectrumOptions make_options(int grid, double flat_tol, bool refine, unsigned threads) {
    SpectrumOptions o;
    o.grid = grid;
    o.flat_tol = flat_tol;
    o.refine = refine;
    o.threads = threads;
    return o;
}

py::dict checks_dict(const EstimateReport& report) {
    py::dict out;
    for (const auto& c : report.checks) {
        py::dict row;
        row["relation"] = c.relation == Relation::le ? "<=" : c.relation == Relation::lt ? "<" : "==";
        row["lhs"] = c.lhs;
        row["rhs"] = c.rhs;
        row["slack"] = c.slack;
        row["pass"] = c.pass;
        out[py::str(c.name)] = row;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Band spectra of Schrodinger operators on periodic graphs.";

    auto base = py::register_exception<Error>(m, "BandgraphError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());

    py::class_<PeriodicGraphSpec>(m, "Graph")
        .def_static("from_json", [](const std::string& text) { return io::parse_graph(text); }, py::arg("text"))
        .def_static("load", &io::load_graph, py::arg("path"))
        .def_property_readonly("dimension", &PeriodicGraphSpec::dimension)
        .def_property_readonly("vertex_count", &PeriodicGraphSpec::vertex_count)
        .def_property_readonly("edge_count", [](const PeriodicGraphSpec& g) { return g.edges().size(); })
        .def_property_readonly("potentials", &PeriodicGraphSpec::potentials)
        .def("with_potentials", &PeriodicGraphSpec::with_potentials, py::arg("q"))
        .def("to_json", &io::serialize_graph)
        .def(py::self == py::self)
        .def("__repr__", [](const PeriodicGraphSpec& g) {
            return "<Graph d=" + std::to_string(g.dimension()) + " vertices=" + std::to_string(g.vertex_count()) +
                   " edges=" + std::to_string(g.edges().size()) + ">";
        });

    py::class_<Band>(m, "Band")
        .def_readonly("lower", &Band::lower)
        .def_readonly("upper", &Band::upper)
        .def_readonly("argmin", &Band::argmin)
        .def_readonly("argmax", &Band::argmax)
        .def_readonly("flat", &Band::flat)
        .def_property_readonly("width", &Band::width);

    py::class_<FlatBand>(m, "FlatBand")
        .def_readonly("value", &FlatBand::value)
        .def_readonly("multiplicity", &FlatBand::multiplicity);

    py::class_<BandStructure>(m, "BandStructure")
        .def_readonly("bands", &BandStructure::bands)
        .def_readonly("flat_bands", &BandStructure::flat_bands)
        .def_property_readonly("open_bands",
                               [](const BandStructure& b) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const auto& i : b.open_bands) out.emplace_back(i.lower, i.upper);
                                   return out;
                               })
        .def_property_readonly("gaps",
                               [](const BandStructure& b) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const auto& i : b.gaps) out.emplace_back(i.lower, i.upper);
                                   return out;
                               })
        .def_readonly("spectrum_measure", &BandStructure::spectrum_measure)
        .def_property_readonly("band_length_sum", &BandStructure::band_length_sum)
        .def_property_readonly("gap_length_sum", &BandStructure::gap_length_sum);

    m.def("builtin", &generate_builtin, py::arg("id"));
    m.def("builtins", [] {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& b : builtin_catalog()) out.emplace_back(b.signature, b.description);
        return out;
    });

    m.def(
        "classify",
        [](const PeriodicGraphSpec& g) {
            const auto c = classify(g);
            py::dict d;
            d["connected"] = c.is_connected;
            d["regular"] = c.is_regular;
            d["kappa_max"] = c.kappa_max;
            d["fundamental_bipartite"] = c.fundamental_bipartite;
            d["periodic_bipartite"] = c.periodic_bipartite;
            d["loop_graph"] = c.is_loop_graph;
            d["precise_quasimomentum"] = c.precise_quasimomentum;
            d["beta"] = c.beta;
            return d;
        },
        py::arg("graph"));

    m.def(
        "fiber_matrix",
        [](const PeriodicGraphSpec& g, const std::vector<double>& theta, const std::string& kind) {
            const auto f = fiber_matrix(g, parse_matrix_kind(kind), Quasimomentum(theta));
            const auto n = static_cast<py::ssize_t>(f.dim());
            py::array_t<std::complex<double>> out({n, n});
            auto w = out.mutable_unchecked<2>();
            for (py::ssize_t j = 0; j < n; ++j)
                for (py::ssize_t k = 0; k < n; ++k)
                    w(j, k) = f(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
            return out;
        },
        py::arg("graph"), py::arg("theta"), py::arg("kind") = "schrodinger");

    m.def(
        "eigenvalues",
        [](const PeriodicGraphSpec& g, const std::vector<double>& theta, const std::string& kind) {
            return eigenvalues_at(g, parse_matrix_kind(kind), theta);
        },
        py::arg("graph"), py::arg("theta"), py::arg("kind") = "schrodinger");

    m.def(
        "band_structure",
        [](const PeriodicGraphSpec& g, const std::string& kind, int grid, double flat_tol, bool refine,
           unsigned threads) {
            py::gil_scoped_release release;
            return compute_band_structure(g, parse_matrix_kind(kind), make_options(grid, flat_tol, refine, threads));
        },
        py::arg("graph"), py::arg("kind") = "schrodinger", py::arg("grid") = 0, py::arg("flat_tol") = 1e-9,
        py::arg("refine") = false, py::arg("threads") = 0);

    m.def(
        "estimates",
        [](const PeriodicGraphSpec& g, int grid, unsigned threads) {
            EstimateReport r;
            {
                py::gil_scoped_release release;
                r = applicable_estimates(g, make_options(grid, 1e-9, false, threads));
            }
            return checks_dict(r);
        },
        py::arg("graph"), py::arg("grid") = 0, py::arg("threads") = 0);

    m.def(
        "analyze_json",
        [](const PeriodicGraphSpec& g, const std::string& kind, int grid, double flat_tol, bool refine,
           unsigned threads) {
            py::gil_scoped_release release;
            const auto o = make_options(grid, flat_tol, refine, threads);
            return io::report_text(io::analyze(g, parse_matrix_kind(kind), o), o);
        },
        py::arg("graph"), py::arg("kind") = "schrodinger", py::arg("grid") = 0, py::arg("flat_tol") = 1e-9,
        py::arg("refine") = false, py::arg("threads") = 0);

    m.def(
        "stability",
        [](const PeriodicGraphSpec& a, const PeriodicGraphSpec& b, int grid) {
            StabilityResult r;
            {
                py::gil_scoped_release release;
                r = stability_constants(a, b, make_options(grid, 1e-9, false, 0));
            }
            py::dict d;
            d["c"] = r.c;
            d["c_bipartite"] = r.c_bipartite;
            d["c_precise"] = r.c_precise;
            d["checks"] = checks_dict(r.report);
            d["notes"] = r.notes;
            return d;
        },
        py::arg("a"), py::arg("b"), py::arg("grid") = 0);

    m.def(
        "dirac_check",
        [](double q1, double radius, int samples) {
            const auto r = dirac_expansion_check(q1, radius, samples);
            py::dict d;
            d["ratio"] = r.ratio;
            d["literal_ratio"] = r.literal_ratio;
            d["error_r"] = r.error_r;
            d["error_half"] = r.error_half;
            d["edges"] = std::make_pair(r.lower_edge, r.upper_edge);
            return d;
        },
        py::arg("q1"), py::arg("radius"), py::arg("samples") = 64);
}
