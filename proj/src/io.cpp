#include "bandgraph/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bandgraph/errors.hpp"
#include "bandgraph/lattices.hpp"

namespace bandgraph::io {

using Json = nlohmann::ordered_json;

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void only_keys(const Json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ParseError(path, "expected an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key)) throw ParseError(at(path, key), "unknown field");
}

const Json& field(const Json& obj, const std::string& path, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(at(path, key), "missing required field");
    return *it;
}

long long integer(const Json& j, const std::string& path, long long lo, long long hi) {
    if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
    long long v = 0;
    if (j.is_number_unsigned()) {
        const auto u = j.get<unsigned long long>();
        if (u > static_cast<unsigned long long>(hi)) throw ParseError(path, "integer out of range");
        v = static_cast<long long>(u);
    } else {
        v = j.get<long long>();
    }
    if (v < lo || v > hi) throw ParseError(path, "integer out of range");
    return v;
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ParseError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(path, "expected a finite number");
    return v;
}

const Json& array(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ParseError(path, "expected an array");
    return j;
}

void emit(const Json& j, std::string& out, int indent);

void emit_scalar(const Json& j, std::string& out) {
    if (j.is_number_float()) {
        out += format_double(j.get<double>());
    } else {
        out += j.dump();
    }
}

bool is_flat(const Json& j) {
    if (j.is_array()) return std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
    return j.is_primitive();
}

void emit(const Json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(key).dump() + ": ";
            emit(value, out, indent + 2);
        }
        out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
    } else if (j.is_array()) {
        if (is_flat(j)) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                emit_scalar(j[i], out);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            emit(j[i], out, indent + 2);
        }
        out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
    } else {
        emit_scalar(j, out);
    }
}

std::string dump(const Json& j) {
    std::string out;
    emit(j, out, 0);
    return out + "\n";
}

Json vec(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

Json checks_json(const EstimateReport& report) {
    Json a = Json::array();
    for (const auto& c : report.checks) {
        const char* rel = c.relation == Relation::le ? "<=" : c.relation == Relation::lt ? "<" : "==";
        a.push_back(Json{{"name", c.name}, {"relation", rel}, {"lhs", c.lhs}, {"rhs", c.rhs},
                         {"slack", c.slack}, {"pass", c.pass}});
    }
    return a;
}

Json options_json(const SpectrumOptions& o) {
    return Json{{"flat_tol", o.flat_tol},       {"merge_tol", o.merge_tol}, {"check_tol", o.check_tol},
                {"equality_tol", o.equality_tol}, {"refine", o.refine}};
}

Json bands_json(const BandStructure& b) {
    Json out = Json::object();
    out["kind"] = std::string(to_string(b.kind));
    Json bands = Json::array();
    for (std::size_t n = 0; n < b.bands.size(); ++n) {
        const auto& band = b.bands[n];
        bands.push_back(Json{{"index", n + 1},
                             {"lower", band.lower},
                             {"upper", band.upper},
                             {"argmin", vec(band.argmin)},
                             {"argmax", vec(band.argmax)},
                             {"flat", band.flat}});
    }
    out["bands"] = bands;
    Json flats = Json::array();
    for (const auto& f : b.flat_bands) flats.push_back(Json{{"value", f.value}, {"multiplicity", f.multiplicity}});
    out["flat_bands"] = flats;
    Json gaps = Json::array();
    for (const auto& g : b.gaps) gaps.push_back(Json{{"lower", g.lower}, {"upper", g.upper}, {"length", g.length()}});
    out["gaps"] = gaps;
    out["spectrum_measure"] = b.spectrum_measure;
    out["band_length_sum"] = b.band_length_sum();
    out["gap_length_sum"] = b.gap_length_sum();
    return out;
}

template <class F>
CommandResult guarded(F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {1, "", std::string("error: ") + e.what() + "\n"};
    }
}

}  // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    if (x == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

PeriodicGraphSpec parse_graph(std::string_view text) {
    Json root;
    try {
        root = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        std::string msg = e.what();
        if (auto p = msg.find("parse error"); p != std::string::npos) msg = msg.substr(p);
        throw ParseError("", msg);
    }
    const std::string r = "$";
    only_keys(root, r, {"format_version", "dimension", "vertices", "edges"});
    if (integer(field(root, r, "format_version"), at(r, "format_version"), std::numeric_limits<int>::min(),
                std::numeric_limits<int>::max()) != 1)
        throw ParseError(at(r, "format_version"), "unsupported version (expected 1)");
    const int d = static_cast<int>(integer(field(root, r, "dimension"), at(r, "dimension"), 1, 64));

    const std::string vp = at(r, "vertices");
    const auto& vjs = array(field(root, r, "vertices"), vp);
    if (vjs.empty()) throw ParseError(vp, "at least one vertex is required");
    std::vector<VertexInfo> vertices;
    for (std::size_t i = 0; i < vjs.size(); ++i) {
        const std::string p = at(vp, i);
        only_keys(vjs[i], p, {"label", "q", "position"});
        VertexInfo v;
        const auto& label = field(vjs[i], p, "label");
        if (!label.is_string()) throw ParseError(at(p, "label"), "expected a string");
        v.label = label.get<std::string>();
        if (vjs[i].contains("q")) v.potential = number(vjs[i]["q"], at(p, "q"));
        if (vjs[i].contains("position")) {
            const std::string pp = at(p, "position");
            const auto& pos = array(vjs[i]["position"], pp);
            if (pos.size() != static_cast<std::size_t>(d))
                throw ParseError(pp, "expected " + std::to_string(d) + " coordinates");
            std::vector<double> x;
            for (std::size_t s = 0; s < pos.size(); ++s) {
                x.push_back(number(pos[s], at(pp, s)));
                if (x.back() < 0.0 || x.back() >= 1.0) throw ParseError(at(pp, s), "coordinate outside [0, 1)");
            }
            v.position = std::move(x);
        }
        vertices.push_back(std::move(v));
    }

    const std::string ep = at(r, "edges");
    const auto& ejs = array(field(root, r, "edges"), ep);
    const auto last = static_cast<long long>(vertices.size()) - 1;
    std::vector<EdgeRecord> edges;
    for (std::size_t i = 0; i < ejs.size(); ++i) {
        const std::string p = at(ep, i);
        only_keys(ejs[i], p, {"tail", "head", "index"});
        EdgeRecord e;
        e.tail = static_cast<std::size_t>(integer(field(ejs[i], p, "tail"), at(p, "tail"), 0, last));
        e.head = static_cast<std::size_t>(integer(field(ejs[i], p, "head"), at(p, "head"), 0, last));
        const std::string ip = at(p, "index");
        const auto& idx = array(field(ejs[i], p, "index"), ip);
        if (idx.size() != static_cast<std::size_t>(d))
            throw ParseError(ip, "expected " + std::to_string(d) + " integers");
        for (std::size_t s = 0; s < idx.size(); ++s)
            e.index.push_back(static_cast<int>(integer(idx[s], at(ip, s), -1'000'000, 1'000'000)));
        edges.push_back(std::move(e));
    }
    try {
        return PeriodicGraphSpec(d, std::move(vertices), std::move(edges));
    } catch (const ValidationError& e) {
        throw ParseError(r, e.what());
    }
}

PeriodicGraphSpec load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_graph(ss.str());
    } catch (const ParseError& e) {
        const std::string message = std::string(e.what()).substr(e.path().empty() ? 0 : e.path().size() + 2);
        throw ParseError(e.path().empty() ? path : path + ": " + e.path(), message);
    }
}

std::string serialize_graph(const PeriodicGraphSpec& spec) {
    Json root = Json::object();
    root["format_version"] = 1;
    root["dimension"] = spec.dimension();
    Json vs = Json::array();
    for (const auto& v : spec.vertices()) {
        Json o{{"label", v.label}, {"q", v.potential}};
        if (v.position) o["position"] = vec(*v.position);
        vs.push_back(o);
    }
    root["vertices"] = vs;
    Json es = Json::array();
    for (const auto& e : spec.edges()) es.push_back(Json{{"tail", e.tail}, {"head", e.head}, {"index", e.index}});
    root["edges"] = es;
    return dump(root);
}

double parse_angle(std::string_view token) {
    auto fail = [&]() -> double { throw ParseError("path", "bad coordinate '" + std::string(token) + "'"); };
    std::string t;
    for (char c : token)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) return fail();

    std::size_t i = 0;
    double sign = 1.0;
    if (t[i] == '+' || t[i] == '-') sign = t[i++] == '-' ? -1.0 : 1.0;

    auto read_number = [&](double& out) {
        const char* begin = t.data() + i;
        auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), out);
        if (ec != std::errc() || ptr == begin) return false;
        i += static_cast<std::size_t>(ptr - begin);
        return true;
    };

    double value = 1.0;
    const bool has_number = read_number(value);
    bool has_pi = false;
    if (has_number && i < t.size() && t[i] == '*') ++i;
    if (t.compare(i, 2, "pi") == 0) {
        has_pi = true;
        i += 2;
    }
    if (!has_number && !has_pi) return fail();
    if (has_pi) value *= std::numbers::pi;
    if (i < t.size() && t[i] == '/') {
        ++i;
        double denom = 0.0;
        if (!read_number(denom) || denom == 0.0) return fail();
        value /= denom;
    }
    if (i != t.size()) return fail();
    return sign * value;
}

std::vector<std::vector<double>> parse_path(std::string_view text, int dimension, int samples) {
    if (samples < 1) throw ParameterError("path samples must be >= 1");
    std::vector<std::vector<double>> vertices;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(';', start), text.size());
        const auto part = text.substr(start, end - start);
        std::vector<double> point;
        std::size_t s = 0;
        while (s <= part.size()) {
            const auto e = std::min(part.find(',', s), part.size());
            point.push_back(parse_angle(part.substr(s, e - s)));
            s = e + 1;
        }
        if (point.size() != static_cast<std::size_t>(dimension))
            throw ParseError("path", "vertex " + std::to_string(vertices.size() + 1) + " has " +
                                         std::to_string(point.size()) + " coordinates, expected " +
                                         std::to_string(dimension));
        vertices.push_back(std::move(point));
        start = end + 1;
    }
    if (vertices.size() < 2) throw ParseError("path", "at least two vertices are required");

    std::vector<std::vector<double>> points;
    for (std::size_t v = 0; v + 1 < vertices.size(); ++v)
        for (int k = 0; k < samples; ++k) {
            const double t = static_cast<double>(k) / samples;
            std::vector<double> p(static_cast<std::size_t>(dimension));
            for (std::size_t s = 0; s < p.size(); ++s)
                p[s] = k == 0 ? vertices[v][s] : vertices[v][s] + t * (vertices[v + 1][s] - vertices[v][s]);
            points.push_back(std::move(p));
        }
    points.push_back(vertices.back());
    return points;
}

InputSource InputSource::from_argument(const std::string& argument) {
    InputSource src;
    constexpr std::string_view prefix = "builtin:";
    if (argument.starts_with(prefix))
        src.builtin = argument.substr(prefix.size());
    else
        src.file = argument;
    return src;
}

PeriodicGraphSpec load_input(const InputSource& source) {
    if (source.file.has_value() == source.builtin.has_value())
        throw ParameterError("exactly one of a graph file or a builtin id is required");
    PeriodicGraphSpec spec = source.file ? load_graph(*source.file) : generate_builtin(*source.builtin);
    if (source.potentials) spec = spec.with_potentials(*source.potentials);
    return spec;
}

AnalysisResult analyze(const PeriodicGraphSpec& spec, MatrixKind kind, const SpectrumOptions& options) {
    require_connected(spec);
    auto cls = classify(spec);
    auto h = compute_band_structure(spec, MatrixKind::schrodinger, options);
    auto lap = compute_band_structure(spec, MatrixKind::laplacian, options);
    BandStructure bands = kind == MatrixKind::schrodinger ? h
                          : kind == MatrixKind::laplacian ? lap
                                                          : compute_band_structure(spec, kind, options);
    auto estimates = applicable_estimates(spec, cls, h, lap, options);
    return {spec, std::move(cls), kind, std::move(bands), std::move(h), std::move(lap), std::move(estimates)};
}

std::string report_text(const AnalysisResult& result, const SpectrumOptions& options) {
    const auto& c = result.classification;
    Json root = Json::object();
    root["grid"] = Json{{"per_axis", result.bands.grid.per_axis()}, {"points", result.bands.grid.size()}};
    root["tolerances"] = options_json(options);
    root["dimension"] = result.spec.dimension();
    root["vertex_count"] = result.spec.vertex_count();
    root["classification"] = Json{{"connected", c.is_connected},
                                  {"regular", c.is_regular},
                                  {"fundamental_bipartite", c.fundamental_bipartite},
                                  {"periodic_bipartite", c.periodic_bipartite},
                                  {"loop_graph", c.is_loop_graph},
                                  {"precise", c.precise_quasimomentum.has_value()},
                                  {"precise_quasimomentum", c.precise_quasimomentum ? vec(*c.precise_quasimomentum)
                                                                                    : Json(nullptr)},
                                  {"single_vertex_bridges", c.single_vertex_bridges}};
    root["beta"] = c.beta;
    root["kappa_max"] = c.kappa_max;
    const Json bands = bands_json(result.bands);
    for (const auto& [key, value] : bands.items()) root[key] = value;
    root["checks"] = checks_json(result.estimates);
    root["all_pass"] = result.estimates.all_pass();
    return dump(root);
}

std::string compare_text(const StabilityResult& result, const SpectrumOptions& options) {
    Json root = Json::object();
    root["tolerances"] = options_json(options);
    root["c"] = result.c;
    root["c_bipartite"] = result.c_bipartite ? Json(*result.c_bipartite) : Json(nullptr);
    root["c_precise"] = result.c_precise ? Json(*result.c_precise) : Json(nullptr);
    root["checks"] = checks_json(result.report);
    Json notes = Json::array();
    for (const auto& n : result.notes) notes.push_back(n);
    root["notes"] = notes;
    root["all_pass"] = result.report.all_pass();
    return dump(root);
}

namespace {

std::string table_header(int d, std::size_t nu) {
    std::string out;
    for (int s = 1; s <= d; ++s) out += (s > 1 ? "\ttheta" : "theta") + std::to_string(s);
    for (std::size_t n = 1; n <= nu; ++n) out += "\tlambda" + std::to_string(n);
    return out + "\n";
}

void table_row(std::string& out, const std::vector<double>& theta, const double* lambda, std::size_t nu) {
    for (std::size_t s = 0; s < theta.size(); ++s) out += (s ? "\t" : "") + format_double(theta[s]);
    for (std::size_t n = 0; n < nu; ++n) out += "\t" + format_double(lambda[n]);
    out += "\n";
}

}  // namespace

std::string dispersion_table(const PeriodicGraphSpec& spec, MatrixKind kind,
                             const std::vector<std::vector<double>>& points) {
    std::string out = table_header(spec.dimension(), spec.vertex_count());
    for (const auto& p : points) {
        const auto ev = eigenvalues_at(spec, kind, p);
        table_row(out, p, ev.data(), ev.size());
    }
    return out;
}

std::string dispersion_grid_table(const PeriodicGraphSpec& spec, MatrixKind kind, const TorusGrid& grid,
                                  unsigned threads) {
    const auto samples = sample_grid(spec, kind, grid, threads);
    std::string out = table_header(spec.dimension(), samples.nu);
    for (std::size_t i = 0; i < grid.size(); ++i)
        table_row(out, grid.point(i), samples.values.data() + i * samples.nu, samples.nu);
    return out;
}

std::string builtins_listing() {
    std::string out;
    for (const auto& b : builtin_catalog()) out += b.signature + "\t" + b.description + "\n";
    return out;
}

CommandResult cmd_analyze(const InputSource& input, MatrixKind kind, const SpectrumOptions& options) {
    return guarded([&]() -> CommandResult {
        const auto result = analyze(load_input(input), kind, options);
        return {result.estimates.all_pass() ? 0 : 2, report_text(result, options), ""};
    });
}

CommandResult cmd_dispersion(const InputSource& input, MatrixKind kind, const SpectrumOptions& options,
                             const std::optional<std::string>& path, int samples) {
    return guarded([&]() -> CommandResult {
        const auto spec = load_input(input);
        require_connected(spec);
        if (path) return {0, dispersion_table(spec, kind, parse_path(*path, spec.dimension(), samples)), ""};
        const TorusGrid grid(spec.dimension(), options.grid_for(spec.dimension()));
        return {0, dispersion_grid_table(spec, kind, grid, options.threads), ""};
    });
}

CommandResult cmd_compare(const InputSource& a, const InputSource& b, const SpectrumOptions& options) {
    return guarded([&]() -> CommandResult {
        const auto sa = load_input(a);
        const auto sb = load_input(b);
        require_connected(sa);
        require_connected(sb);
        const auto result = stability_constants(sa, sb, options);
        return {result.report.all_pass() ? 0 : 2, compare_text(result, options), ""};
    });
}

CommandResult cmd_builtins() { return {0, builtins_listing(), ""}; }

}  // namespace bandgraph::io
