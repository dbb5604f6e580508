#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bandgraph/errors.hpp"
#include "bandgraph/io.hpp"

namespace {

using namespace bandgraph;

struct Common {
    std::string builtin;
    std::string file;
    std::vector<double> q;
    std::string kind = "schrodinger";
    int grid = 0;
    double flat_tol = 1e-9;
    bool refine = false;
    unsigned threads = 0;
};

void add_spectrum_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--kind", c.kind, "laplacian | schrodinger | normalized | adjacency | fluctuation");
    cmd->add_option("--grid", c.grid, "samples per axis (default from BANDGRAPH_GRID or by dimension)");
    cmd->add_option("--flat-tol", c.flat_tol, "relative width under which a band is flat");
    cmd->add_flag("--refine", c.refine, "polish band extrema by coordinate descent");
    cmd->add_option("--threads", c.threads, "worker threads (0 = hardware concurrency)");
}

void add_input_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("file", c.file, "graph file");
    cmd->add_option("--builtin", c.builtin, "builtin lattice id, see `builtins`");
    cmd->add_option("--q", c.q, "vertex potentials, comma separated")->delimiter(',');
}

SpectrumOptions options_from(const Common& c) {
    SpectrumOptions o;
    o.grid = c.grid;
    if (o.grid == 0) {
        if (const char* env = std::getenv("BANDGRAPH_GRID")) {
            try {
                o.grid = std::stoi(env);
            } catch (const std::exception&) {
                throw ParameterError("BANDGRAPH_GRID must be an integer");
            }
            if (o.grid < 2) throw ParameterError("BANDGRAPH_GRID must be >= 2");
        }
    } else if (o.grid < 2) {
        throw ParameterError("--grid must be >= 2");
    }
    if (!(c.flat_tol >= 0.0)) throw ParameterError("--flat-tol must be nonnegative");
    o.flat_tol = c.flat_tol;
    o.refine = c.refine;
    o.threads = c.threads;
    return o;
}

io::InputSource source_from(const Common& c) {
    if (c.builtin.empty() == c.file.empty()) throw ParameterError("give either a graph file or --builtin <id>");
    io::InputSource src;
    if (!c.builtin.empty()) src.builtin = c.builtin;
    else src.file = c.file;
    if (!c.q.empty()) src.potentials = c.q;
    return src;
}

int finish(const io::CommandResult& r) {
    std::cout << r.output;
    std::cerr << r.error;
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Band structure and spectral estimates for periodic graphs"};
    app.require_subcommand(1);

    Common analyze;
    auto* a = app.add_subcommand("analyze", "classify a graph, compute its bands and verify the estimates");
    add_input_flags(a, analyze);
    add_spectrum_flags(a, analyze);

    Common disp;
    std::string path;
    int samples = 48;
    auto* d = app.add_subcommand("dispersion", "tabulate eigenvalues over the grid or along a path");
    add_input_flags(d, disp);
    add_spectrum_flags(d, disp);
    d->add_option("--path", path, "polyline vertices, e.g. \"0,0;2pi/3,-2pi/3;pi,pi;0,0\"");
    d->add_option("--samples", samples, "points per path segment");

    Common cmp;
    std::string first, second;
    auto* c = app.add_subcommand("compare", "stability constants between two graphs of equal vertex count");
    c->add_option("first", first, "graph file or builtin:<id>")->required();
    c->add_option("second", second, "graph file or builtin:<id>")->required();
    add_spectrum_flags(c, cmp);

    app.add_subcommand("builtins", "list builtin lattices");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (a->parsed())
            return finish(io::cmd_analyze(source_from(analyze), parse_matrix_kind(analyze.kind), options_from(analyze)));
        if (d->parsed()) {
            std::optional<std::string> p;
            if (!path.empty()) p = path;
            return finish(io::cmd_dispersion(source_from(disp), parse_matrix_kind(disp.kind), options_from(disp), p,
                                             samples));
        }
        if (c->parsed())
            return finish(io::cmd_compare(io::InputSource::from_argument(first),
                                          io::InputSource::from_argument(second), options_from(cmp)));
        return finish(io::cmd_builtins());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
