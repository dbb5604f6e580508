#include "bandgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

#include "bandgraph/errors.hpp"
#include "bandgraph/linalg.hpp"

namespace bandgraph {

namespace {

bool all_zero(const IndexVector& v) {
    return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

IndexVector negated(const IndexVector& v) {
    IndexVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
    return out;
}

void require_positions(const PeriodicGraphSpec& spec) {
    if (!spec.has_positions()) throw PreconditionError("positions required");
}

}  // namespace

bool EdgeRecord::is_bridge() const noexcept { return !all_zero(index); }
bool OrientedEdge::is_bridge() const noexcept { return !all_zero(index); }

PeriodicGraphSpec::PeriodicGraphSpec(int dimension, std::vector<VertexInfo> vertices,
                                     std::vector<EdgeRecord> edges)
    : dimension_(dimension), vertices_(std::move(vertices)), edges_(std::move(edges)) {
    if (dimension_ < 1) throw ValidationError("dimension must be >= 1");
    if (vertices_.empty()) throw ValidationError("at least one vertex required");
    const auto d = static_cast<std::size_t>(dimension_);
    const std::size_t nu = vertices_.size();

    for (std::size_t j = 0; j < nu; ++j) {
        const auto& v = vertices_[j];
        if (!std::isfinite(v.potential))
            throw ValidationError("vertex " + std::to_string(j) + ": potential is not finite");
        if (!v.position) continue;
        if (v.position->size() != d)
            throw ValidationError("vertex " + std::to_string(j) + ": position has wrong length");
        for (double x : *v.position)
            if (!std::isfinite(x) || x < 0.0 || x >= 1.0)
                throw ValidationError("vertex " + std::to_string(j) + ": position outside [0,1)^d");
    }
    for (std::size_t j = 0; j < nu; ++j)
        for (std::size_t k = j + 1; k < nu; ++k)
            if (vertices_[j].position && vertices_[k].position &&
                *vertices_[j].position == *vertices_[k].position)
                throw ValidationError("vertices " + std::to_string(j) + " and " + std::to_string(k) +
                                      " share a position");

    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto& r = edges_[e];
        if (r.tail >= nu || r.head >= nu)
            throw ValidationError("edge " + std::to_string(e) + ": vertex index out of range");
        if (r.index.size() != d)
            throw ValidationError("edge " + std::to_string(e) + ": index has wrong length");
    }
}

std::vector<double> PeriodicGraphSpec::potentials() const {
    std::vector<double> q;
    q.reserve(vertices_.size());
    for (const auto& v : vertices_) q.push_back(v.potential);
    return q;
}

bool PeriodicGraphSpec::has_positions() const {
    return std::all_of(vertices_.begin(), vertices_.end(),
                       [](const VertexInfo& v) { return v.position.has_value(); });
}

PeriodicGraphSpec PeriodicGraphSpec::with_potentials(const std::vector<double>& q) const {
    if (q.size() != vertices_.size())
        throw ValidationError("expected " + std::to_string(vertices_.size()) + " potentials, got " +
                              std::to_string(q.size()));
    auto vs = vertices_;
    for (std::size_t j = 0; j < vs.size(); ++j) vs[j].potential = q[j];
    return PeriodicGraphSpec(dimension_, std::move(vs), edges_);
}

std::vector<OrientedEdge> oriented_edges(const PeriodicGraphSpec& spec) {
    std::vector<OrientedEdge> out;
    out.reserve(2 * spec.edges().size());
    for (const auto& r : spec.edges()) {
        out.push_back({r.tail, r.head, r.index});
        out.push_back({r.head, r.tail, negated(r.index)});
    }
    return out;
}

std::vector<int> degrees(const PeriodicGraphSpec& spec) {
    std::vector<int> kappa(spec.vertex_count(), 0);
    for (const auto& r : spec.edges()) {
        ++kappa[r.tail];
        ++kappa[r.head];
    }
    return kappa;
}

BridgeCount bridge_count(const PeriodicGraphSpec& spec) {
    BridgeCount out;
    for (auto& e : oriented_edges(spec))
        if (e.is_bridge()) out.bridges.push_back(std::move(e));
    out.beta = static_cast<int>(out.bridges.size());
    return out;
}

PeriodicGraphSpec shift_origin(const PeriodicGraphSpec& spec, const std::vector<double>& b) {
    require_positions(spec);
    const auto d = static_cast<std::size_t>(spec.dimension());
    if (b.size() != d) throw ParameterError("shift vector has wrong length");

    // [v - b] per vertex, and the new fractional positions.
    std::vector<IndexVector> cell(spec.vertex_count(), IndexVector(d));
    auto vertices = spec.vertices();
    for (std::size_t j = 0; j < vertices.size(); ++j) {
        auto& pos = *vertices[j].position;
        for (std::size_t s = 0; s < d; ++s) {
            const double x = pos[s] - b[s];
            const double f = std::floor(x);
            cell[j][s] = static_cast<int>(f);
            double frac = x - f;
            if (frac >= 1.0) frac = 0.0;  // x - floor(x) can round up to 1 for tiny negative x
            pos[s] = frac;
        }
    }

    auto edges = spec.edges();
    for (auto& r : edges) {
        if (r.is_loop()) continue;
        for (std::size_t s = 0; s < d; ++s) r.index[s] += cell[r.head][s] - cell[r.tail][s];
    }
    return PeriodicGraphSpec(spec.dimension(), std::move(vertices), std::move(edges));
}

MinimizedBridges minimize_bridges(const PeriodicGraphSpec& spec) {
    require_positions(spec);
    const auto d = static_cast<std::size_t>(spec.dimension());

    std::vector<std::vector<double>> candidates(d);
    for (std::size_t s = 0; s < d; ++s) {
        std::vector<double> xs;
        for (const auto& v : spec.vertices()) xs.push_back((*v.position)[s]);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        auto& c = candidates[s];
        c.push_back(0.0);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) c.push_back(0.5 * (xs[i] + xs[i + 1]));
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
    }

    std::vector<double> best_shift(d, 0.0);
    int best_beta = bridge_count(spec).beta;
    std::vector<std::size_t> odometer(d, 0);
    std::vector<double> b(d);
    auto advance = [&] {
        for (std::size_t s = d; s-- > 0;) {
            if (++odometer[s] < candidates[s].size()) return true;
            odometer[s] = 0;
        }
        return false;
    };
    // Lexicographic enumeration, so the first strict improvement wins ties.
    do {
        for (std::size_t s = 0; s < d; ++s) b[s] = candidates[s][odometer[s]];
        const int beta = bridge_count(shift_origin(spec, b)).beta;
        if (beta < best_beta) {
            best_beta = beta;
            best_shift = b;
        }
    } while (advance());
    return {best_shift, shift_origin(spec, best_shift)};
}

bool is_connected_periodic(const PeriodicGraphSpec& spec) {
    const std::size_t nu = spec.vertex_count();
    const auto d = static_cast<std::size_t>(spec.dimension());
    const auto arcs = oriented_edges(spec);

    std::vector<std::vector<std::size_t>> out(nu);
    for (std::size_t a = 0; a < arcs.size(); ++a) out[arcs[a].tail].push_back(a);

    // Spanning-tree potentials: p(head) = p(tail) + tau along tree arcs.
    std::vector<std::optional<IntVector>> p(nu);
    p[0] = IntVector(d, 0);
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t a : out[u]) {
            const auto& e = arcs[a];
            if (p[e.head]) continue;
            IntVector ph = *p[u];
            for (std::size_t s = 0; s < d; ++s) ph[s] += e.index[s];
            p[e.head] = std::move(ph);
            queue.push_back(e.head);
        }
    }
    if (std::any_of(p.begin(), p.end(), [](const auto& x) { return !x.has_value(); })) return false;

    std::vector<IntVector> cycles;
    for (const auto& e : arcs) {
        IntVector c(d);
        for (std::size_t s = 0; s < d; ++s) c[s] = e.index[s] + (*p[e.tail])[s] - (*p[e.head])[s];
        cycles.push_back(std::move(c));
    }
    return integer_lattice_full(cycles, d);
}

void require_connected(const PeriodicGraphSpec& spec) {
    if (!is_connected_periodic(spec))
        throw DisconnectedGraphError("periodic graph is not connected");
}

bool fundamental_bipartite(const PeriodicGraphSpec& spec) {
    const std::size_t nu = spec.vertex_count();
    std::vector<std::vector<std::size_t>> adj(nu);
    for (const auto& r : spec.edges()) {
        if (r.is_loop()) return false;
        adj[r.tail].push_back(r.head);
        adj[r.head].push_back(r.tail);
    }
    std::vector<int> color(nu, -1);
    for (std::size_t start = 0; start < nu; ++start) {
        if (color[start] >= 0) continue;
        color[start] = 0;
        std::deque<std::size_t> queue{start};
        while (!queue.empty()) {
            const std::size_t u = queue.front();
            queue.pop_front();
            for (std::size_t w : adj[u]) {
                if (color[w] < 0) {
                    color[w] = 1 - color[u];
                    queue.push_back(w);
                } else if (color[w] == color[u]) {
                    return false;
                }
            }
        }
    }
    return true;
}

PeriodicBipartiteResult periodic_bipartite(const PeriodicGraphSpec& spec) {
    const std::size_t nu = spec.vertex_count();
    const auto d = static_cast<std::size_t>(spec.dimension());
    // Unknowns (c_1..c_nu, p_1..p_d); one row per unoriented edge (the reverse
    // orientation gives the same equation mod 2).
    BitMatrix a;
    BitVector rhs;
    for (const auto& r : spec.edges()) {
        BitVector row(nu + d, 0);
        row[r.tail] ^= 1;
        row[r.head] ^= 1;
        for (std::size_t s = 0; s < d; ++s) row[nu + s] = static_cast<std::uint8_t>(r.index[s] & 1);
        a.push_back(std::move(row));
        rhs.push_back(1);
    }
    PeriodicBipartiteResult out;
    if (a.empty()) return out;
    const auto x = gf2_solve(a, rhs);
    if (!x) return out;
    out.bipartite = true;
    for (std::size_t j = 0; j < nu; ++j) out.coloring.push_back((*x)[j]);
    for (std::size_t s = 0; s < d; ++s) out.parity.push_back((*x)[nu + s]);
    return out;
}

GraphClassification classify(const PeriodicGraphSpec& spec) {
    GraphClassification c;
    c.is_connected = is_connected_periodic(spec);

    const auto kappa = degrees(spec);
    c.kappa_max = *std::max_element(kappa.begin(), kappa.end());
    c.is_regular = std::all_of(kappa.begin(), kappa.end(), [&](int k) { return k == kappa.front(); });
    c.fundamental_bipartite = fundamental_bipartite(spec);
    c.periodic_bipartite = periodic_bipartite(spec).bipartite;

    const auto bridges = bridge_count(spec);
    c.beta = bridges.beta;
    c.is_loop_graph = std::all_of(bridges.bridges.begin(), bridges.bridges.end(),
                                  [](const OrientedEdge& e) { return e.tail == e.head; });
    c.single_vertex_bridges =
        c.is_loop_graph && !bridges.bridges.empty() &&
        std::all_of(bridges.bridges.begin(), bridges.bridges.end(),
                    [&](const OrientedEdge& e) { return e.tail == bridges.bridges.front().tail; });

    if (c.is_loop_graph && !bridges.bridges.empty()) {
        const auto d = static_cast<std::size_t>(spec.dimension());
        BitMatrix a;
        for (const auto& e : bridges.bridges) {
            BitVector row(d);
            for (std::size_t s = 0; s < d; ++s) row[s] = static_cast<std::uint8_t>(e.index[s] & 1);
            a.push_back(std::move(row));
        }
        if (const auto x = gf2_solve(a, BitVector(a.size(), 1))) {
            std::vector<double> theta(d);
            for (std::size_t s = 0; s < d; ++s) theta[s] = (*x)[s] ? std::numbers::pi : 0.0;
            c.precise_quasimomentum = std::move(theta);
        }
    }
    return c;
}

}  // namespace bandgraph
