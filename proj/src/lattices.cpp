#include "bandgraph/lattices.hpp"

#include <cctype>
#include <deque>
#include <string>

#include "bandgraph/errors.hpp"

namespace bandgraph {

namespace {

IndexVector unit(int d, int s) {
    IndexVector e(d, 0);
    e[s] = 1;
    return e;
}

VertexInfo vertex(std::string label, std::vector<double> position) {
    return {std::move(label), 0.0, std::move(position)};
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ParameterError(message);
}

/// Parse tree of an identifier: either an integer leaf or name(args...).
struct Node {
    std::string name;
    bool is_int = false;
    long value = 0;
    std::vector<Node> args;
};

class IdParser {
public:
    explicit IdParser(std::string_view text) : text_(text) {}

    Node parse() {
        Node n = node();
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("builtin", what + " at offset " + std::to_string(pos_) + " in '" +
                                        std::string(text_) + "'");
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Node node() {
        skip();
        Node n;
        if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-')) {
            const std::size_t start = pos_++;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            try {
                n.value = std::stol(std::string(text_.substr(start, pos_ - start)));
            } catch (const std::exception&) {
                pos_ = start;
                fail("bad integer");
            }
            n.is_int = true;
            return n;
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) fail("expected a name");
        n.name = std::string(text_.substr(start, pos_ - start));
        if (eat('(')) {
            do n.args.push_back(node());
            while (eat(','));
            if (!eat(')')) fail("expected ')'");
        }
        return n;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

std::vector<int> int_args(const Node& n, std::size_t count) {
    if (n.args.size() != count)
        throw ParseError("builtin", "'" + n.name + "' takes " + std::to_string(count) + " argument(s), got " +
                                        std::to_string(n.args.size()));
    std::vector<int> out;
    for (const auto& a : n.args) {
        if (!a.is_int) throw ParseError("builtin", "'" + n.name + "' expects integer arguments");
        out.push_back(static_cast<int>(a.value));
    }
    return out;
}

FiniteGraph finite_from(const Node& n) {
    if (n.is_int) throw ParseError("builtin", "expected a finite graph, got an integer");
    const int k = int_args(n, 1)[0];
    if (n.name == "path") return FiniteGraph::path(k);
    if (n.name == "cycle") return FiniteGraph::cycle(k);
    if (n.name == "complete") return FiniteGraph::complete(k);
    if (n.name == "claw") return FiniteGraph::claw(k);
    throw ParseError("builtin", "unknown finite graph '" + n.name + "'");
}

LatticeKind kind_from(const Node& n) {
    using F = LatticeKind::Family;
    if (n.is_int) throw ParseError("builtin", "expected a lattice name, got an integer");
    LatticeKind k;
    if (n.name == "cubic") {
        k.family = F::cubic;
        k.params = int_args(n, 1);
    } else if (n.name == "triangular") {
        k.family = F::triangular;
        int_args(n, 0);
    } else if (n.name == "hexagonal") {
        k.family = F::hexagonal;
        int_args(n, 0);
    } else if (n.name == "bcc") {
        k.family = F::bcc;
        int_args(n, 0);
    } else if (n.name == "fcc") {
        k.family = F::fcc;
        int_args(n, 0);
    } else if (n.name == "star") {
        k.family = F::star;
        k.params = int_args(n, 2);
    } else if (n.name == "subdivided") {
        k.family = F::subdivided;
        k.params = int_args(n, 2);
    } else if (n.name == "bipartite_path") {
        k.family = F::bipartite_path;
        k.params = int_args(n, 1);
    } else if (n.name == "decorated") {
        k.family = F::decorated;
        if (n.args.size() != 3 || !n.args[2].is_int)
            throw ParseError("builtin", "'decorated' takes (base, attachment, attach_vertex)");
        k.base = std::make_shared<const LatticeKind>(kind_from(n.args[0]));
        k.attachment = finite_from(n.args[1]);
        k.params = {static_cast<int>(n.args[2].value)};
    } else {
        throw ParseError("builtin", "unknown builtin '" + n.name + "'");
    }
    return k;
}

std::string call(const std::string& name, const std::vector<int>& params) {
    std::string s = name + "(";
    for (std::size_t i = 0; i < params.size(); ++i) s += (i ? "," : "") + std::to_string(params[i]);
    return s + ")";
}

}  // namespace

FiniteGraph FiniteGraph::path(int n) {
    require(n >= 1, "path needs at least 1 vertex");
    FiniteGraph g{"path(" + std::to_string(n) + ")", static_cast<std::size_t>(n), {}};
    for (int i = 0; i + 1 < n; ++i) g.edges.emplace_back(i, i + 1);
    return g;
}

FiniteGraph FiniteGraph::cycle(int n) {
    require(n >= 3, "cycle needs at least 3 vertices");
    FiniteGraph g{"cycle(" + std::to_string(n) + ")", static_cast<std::size_t>(n), {}};
    for (int i = 0; i < n; ++i) g.edges.emplace_back(i, (i + 1) % n);
    return g;
}

FiniteGraph FiniteGraph::complete(int n) {
    require(n >= 1, "complete graph needs at least 1 vertex");
    FiniteGraph g{"complete(" + std::to_string(n) + ")", static_cast<std::size_t>(n), {}};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
    return g;
}

FiniteGraph FiniteGraph::claw(int k) {
    require(k >= 1, "claw needs at least 1 leaf");
    FiniteGraph g{"claw(" + std::to_string(k) + ")", static_cast<std::size_t>(k) + 1, {}};
    for (int i = 1; i <= k; ++i) g.edges.emplace_back(0, i);
    return g;
}

bool FiniteGraph::connected() const {
    if (vertex_count == 0) return false;
    std::vector<std::vector<std::size_t>> adj(vertex_count);
    for (const auto& [a, b] : edges) {
        if (a >= vertex_count || b >= vertex_count) return false;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<bool> seen(vertex_count, false);
    std::deque<std::size_t> queue{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
        const auto u = queue.front();
        queue.pop_front();
        for (auto w : adj[u])
            if (!seen[w]) {
                seen[w] = true;
                ++count;
                queue.push_back(w);
            }
    }
    return count == vertex_count;
}

namespace lattices {

PeriodicGraphSpec cubic(int d) {
    require(d >= 1 && d <= 16, "cubic(d) needs 1 <= d <= 16");
    std::vector<EdgeRecord> edges;
    for (int s = 0; s < d; ++s) edges.push_back({0, 0, unit(d, s)});
    return PeriodicGraphSpec(d, {vertex("v", std::vector<double>(d, 0.0))}, std::move(edges));
}

PeriodicGraphSpec triangular() {
    return PeriodicGraphSpec(2, {vertex("v", {0.0, 0.0})},
                             {{0, 0, {1, 0}}, {0, 0, {0, 1}}, {0, 0, {1, 1}}});
}

PeriodicGraphSpec hexagonal() {
    const double third = 1.0 / 3.0;
    return PeriodicGraphSpec(2, {vertex("v1", {0.0, 0.0}), vertex("v2", {third, third})},
                             {{0, 1, {0, 0}}, {0, 1, {1, 0}}, {0, 1, {0, 1}}});
}

PeriodicGraphSpec bcc() {
    std::vector<EdgeRecord> edges{{1, 1, {1, 0, 0}}, {1, 1, {0, 1, 0}}, {1, 1, {0, 0, 1}}};
    for (IndexVector tau : {IndexVector{0, 0, 0}, IndexVector{1, 0, 0}, IndexVector{0, 1, 0},
                            IndexVector{0, 0, 1}, IndexVector{1, 1, 0}, IndexVector{1, 0, 1},
                            IndexVector{0, 1, 1}, IndexVector{1, 1, 1}})
        edges.push_back({0, 1, tau});
    return PeriodicGraphSpec(3, {vertex("v1", {0.5, 0.5, 0.5}), vertex("v2", {0.0, 0.0, 0.0})},
                             std::move(edges));
}

PeriodicGraphSpec fcc() {
    std::vector<EdgeRecord> edges{{3, 3, {1, 0, 0}}, {3, 3, {0, 1, 0}}, {3, 3, {0, 0, 1}}};
    const IndexVector zero{0, 0, 0};
    // Each face center meets the four corners of its face.
    for (IndexVector tau : {zero, IndexVector{1, 0, 0}, IndexVector{0, 1, 0}, IndexVector{1, 1, 0}})
        edges.push_back({0, 3, tau});
    for (IndexVector tau : {zero, IndexVector{1, 0, 0}, IndexVector{0, 0, 1}, IndexVector{1, 0, 1}})
        edges.push_back({1, 3, tau});
    for (IndexVector tau : {zero, IndexVector{0, 1, 0}, IndexVector{0, 0, 1}, IndexVector{0, 1, 1}})
        edges.push_back({2, 3, tau});
    return PeriodicGraphSpec(3,
                             {vertex("v1", {0.5, 0.5, 0.0}), vertex("v2", {0.5, 0.0, 0.5}),
                              vertex("v3", {0.0, 0.5, 0.5}), vertex("v4", {0.0, 0.0, 0.0})},
                             std::move(edges));
}

PeriodicGraphSpec star(int d, int nu) {
    require(d >= 1 && d <= 16, "star(d, nu) needs 1 <= d <= 16");
    require(nu >= 2, "star(d, nu) needs nu >= 2");
    std::vector<VertexInfo> vs;
    std::vector<EdgeRecord> edges;
    const auto hub = static_cast<std::size_t>(nu - 1);
    for (int j = 1; j < nu; ++j) {
        vs.push_back(vertex("v" + std::to_string(j), std::vector<double>(d, j / (2.0 * nu))));
        edges.push_back({static_cast<std::size_t>(j - 1), hub, IndexVector(d, 0)});
    }
    vs.push_back(vertex("v" + std::to_string(nu), std::vector<double>(d, 0.0)));
    for (int s = 0; s < d; ++s) edges.push_back({hub, hub, unit(d, s)});
    return PeriodicGraphSpec(d, std::move(vs), std::move(edges));
}

PeriodicGraphSpec subdivided(int d, int n) {
    require(d >= 1 && d <= 16, "subdivided(d, N) needs 1 <= d <= 16");
    require(n >= 1, "subdivided(d, N) needs N >= 1");
    std::vector<VertexInfo> vs;
    std::vector<EdgeRecord> edges;
    const auto hub = static_cast<std::size_t>(d * n);
    const IndexVector zero(d, 0);
    for (int s = 0; s < d; ++s)
        for (int k = 1; k <= n; ++k) {
            std::vector<double> pos(d, 0.0);
            pos[s] = static_cast<double>(k) / (n + 1);
            vs.push_back(vertex("w" + std::to_string(s + 1) + "_" + std::to_string(k), std::move(pos)));
        }
    vs.push_back(vertex("hub", std::vector<double>(d, 0.0)));
    for (int s = 0; s < d; ++s) {
        const auto first = static_cast<std::size_t>(s * n);
        edges.push_back({hub, first, zero});
        for (int k = 1; k < n; ++k) edges.push_back({first + k - 1, first + k, zero});
        edges.push_back({first + n - 1, hub, unit(d, s)});
    }
    return PeriodicGraphSpec(d, std::move(vs), std::move(edges));
}

PeriodicGraphSpec bipartite_path(int nu) {
    require(nu >= 2, "bipartite_path(nu) needs nu >= 2");
    std::vector<VertexInfo> vs;
    std::vector<EdgeRecord> edges;
    for (int j = 0; j < nu; ++j) {
        const double x = static_cast<double>(j) / nu;
        vs.push_back(vertex("v" + std::to_string(j + 1), {x, x}));
    }
    edges.push_back({0, 0, {1, 0}});
    for (int j = 0; j + 1 < nu; ++j) {
        edges.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>(j + 1), {0, 0}});
        edges.push_back({static_cast<std::size_t>(j), static_cast<std::size_t>(j + 1), {0, 0}});
    }
    const auto last = static_cast<std::size_t>(nu - 1);
    edges.push_back({last, last, {0, 1}});
    return PeriodicGraphSpec(2, std::move(vs), std::move(edges));
}

}  // namespace lattices

PeriodicGraphSpec decorate(const PeriodicGraphSpec& base, const FiniteGraph& attachment,
                           std::size_t attach_vertex) {
    if (attach_vertex >= base.vertex_count()) throw ParameterError("attach vertex out of range");
    if (!attachment.connected()) throw ValidationError("attachment graph is not connected");

    const std::size_t offset = base.vertex_count();
    auto map = [&](std::size_t a) { return a == 0 ? attach_vertex : offset + a - 1; };

    std::vector<VertexInfo> vs;
    for (const auto& v : base.vertices()) vs.push_back({v.label, v.potential, std::nullopt});
    for (std::size_t a = 1; a < attachment.vertex_count; ++a)
        vs.push_back({"d" + std::to_string(offset + a - 1 + 1), 0.0, std::nullopt});
    auto edges = base.edges();
    const IndexVector zero(base.dimension(), 0);
    for (const auto& [a, b] : attachment.edges) edges.push_back({map(a), map(b), zero});
    return PeriodicGraphSpec(base.dimension(), std::move(vs), std::move(edges));
}

std::string LatticeKind::id() const {
    switch (family) {
        case Family::cubic: return call("cubic", params);
        case Family::triangular: return "triangular";
        case Family::hexagonal: return "hexagonal";
        case Family::bcc: return "bcc";
        case Family::fcc: return "fcc";
        case Family::star: return call("star", params);
        case Family::subdivided: return call("subdivided", params);
        case Family::bipartite_path: return call("bipartite_path", params);
        case Family::decorated:
            return "decorated(" + base->id() + "," + attachment->name + "," + std::to_string(params.at(0)) + ")";
    }
    return "";
}

LatticeKind parse_lattice_kind(std::string_view id) { return kind_from(IdParser(id).parse()); }

FiniteGraph parse_finite_graph(std::string_view id) { return finite_from(IdParser(id).parse()); }

PeriodicGraphSpec generate(const LatticeKind& kind) {
    using F = LatticeKind::Family;
    auto spec = [&]() -> PeriodicGraphSpec {
        switch (kind.family) {
            case F::cubic: return lattices::cubic(kind.params.at(0));
            case F::triangular: return lattices::triangular();
            case F::hexagonal: return lattices::hexagonal();
            case F::bcc: return lattices::bcc();
            case F::fcc: return lattices::fcc();
            case F::star: return lattices::star(kind.params.at(0), kind.params.at(1));
            case F::subdivided: return lattices::subdivided(kind.params.at(0), kind.params.at(1));
            case F::bipartite_path: return lattices::bipartite_path(kind.params.at(0));
            case F::decorated: {
                if (!kind.base || !kind.attachment) throw ParameterError("decorated needs a base and an attachment");
                const int v = kind.params.at(0);
                if (v < 0) throw ParameterError("attach vertex must be nonnegative");
                return decorate(generate(*kind.base), *kind.attachment, static_cast<std::size_t>(v));
            }
        }
        throw ParameterError("unknown lattice family");
    }();
    if (kind.potentials) return spec.with_potentials(*kind.potentials);
    return spec;
}

PeriodicGraphSpec generate_builtin(std::string_view id) { return generate(parse_lattice_kind(id)); }

const std::vector<BuiltinInfo>& builtin_catalog() {
    static const std::vector<BuiltinInfo> catalog{
        {"cubic(d)", "square/cubic lattice Z^d: one vertex, d loops with indices e_s"},
        {"triangular", "triangular lattice: one vertex, loops (1,0), (0,1), (1,1)"},
        {"hexagonal", "hexagonal lattice (graphene): two vertices, three edges"},
        {"bcc", "body-centered cubic lattice: degrees 8 and 14"},
        {"fcc", "face-centered cubic lattice: three face centers of degree 4, corner of degree 18"},
        {"star(d, nu)", "cubic lattice with nu-1 pendant vertices at each site; hub vertex last"},
        {"subdivided(d, N)", "cubic lattice with N vertices inserted on every edge; hub vertex last"},
        {"bipartite_path(nu)", "bipartite 4-regular chain in Z^2 with end loops along each axis"},
        {"decorated(base, graph, v)",
         "base lattice with a finite graph glued at vertex v; graph is path(n), cycle(n), complete(n) or claw(k)"},
    };
    return catalog;
}

}  // namespace bandgraph
