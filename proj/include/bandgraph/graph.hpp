#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace bandgraph {

/// Integer edge index tau in Z^d.
using IndexVector = std::vector<int>;

struct VertexInfo {
    std::string label;
    double potential = 0.0;
    /// Fractional position in [0,1)^d, expressed in the period basis.
    std::optional<std::vector<double>> position;

    friend bool operator==(const VertexInfo&, const VertexInfo&) = default;
};

/// Unoriented edge of the fundamental graph. A record (j, k, tau) stands for the
/// oriented pair (j, k, tau) and (k, j, -tau).
struct EdgeRecord {
    std::size_t tail = 0;
    std::size_t head = 0;
    IndexVector index;

    bool is_loop() const noexcept { return tail == head; }
    bool is_bridge() const noexcept;

    friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct OrientedEdge {
    std::size_t tail = 0;
    std::size_t head = 0;
    IndexVector index;

    bool is_bridge() const noexcept;

    friend bool operator==(const OrientedEdge&, const OrientedEdge&) = default;
    friend auto operator<=>(const OrientedEdge&, const OrientedEdge&) = default;
};

/// Fundamental graph of a Z^d-periodic graph: vertices with potentials and
/// optional positions, plus index-carrying edges. Structurally validated on
/// construction; connectivity of the periodic cover is checked separately by
/// is_connected_periodic().
class PeriodicGraphSpec {
public:
    PeriodicGraphSpec(int dimension, std::vector<VertexInfo> vertices, std::vector<EdgeRecord> edges);

    int dimension() const noexcept { return dimension_; }
    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    const std::vector<VertexInfo>& vertices() const noexcept { return vertices_; }
    const std::vector<EdgeRecord>& edges() const noexcept { return edges_; }

    std::vector<double> potentials() const;
    bool has_positions() const;

    /// Copy with the potentials replaced. Throws ValidationError on length mismatch.
    PeriodicGraphSpec with_potentials(const std::vector<double>& q) const;

    friend bool operator==(const PeriodicGraphSpec&, const PeriodicGraphSpec&) = default;

private:
    int dimension_;
    std::vector<VertexInfo> vertices_;
    std::vector<EdgeRecord> edges_;
};

struct GraphClassification {
    bool is_connected = false;
    bool is_regular = false;
    int kappa_max = 0;                       // max degree
    bool fundamental_bipartite = false;
    bool periodic_bipartite = false;
    bool is_loop_graph = false;
    /// theta_0 in {0, pi}^d when the loop graph passes the parity test.
    std::optional<std::vector<double>> precise_quasimomentum;
    int beta = 0;                            // oriented bridge count
    /// True when every bridge is a loop at one and the same vertex.
    bool single_vertex_bridges = false;
};

struct BridgeCount {
    int beta = 0;
    std::vector<OrientedEdge> bridges;
};

struct PeriodicBipartiteResult {
    bool bipartite = false;
    std::vector<int> coloring;  // c in {0,1}^nu
    std::vector<int> parity;    // p in {0,1}^d
};

struct MinimizedBridges {
    std::vector<double> shift;
    PeriodicGraphSpec spec;
};

/// Both orientations of every edge record, record order preserved.
std::vector<OrientedEdge> oriented_edges(const PeriodicGraphSpec& spec);

/// Vertex degrees; a loop counts twice.
std::vector<int> degrees(const PeriodicGraphSpec& spec);

/// Oriented edges with nonzero index.
BridgeCount bridge_count(const PeriodicGraphSpec& spec);

/// Re-expresses the graph in a coordinate system with origin moved by `b`.
PeriodicGraphSpec shift_origin(const PeriodicGraphSpec& spec, const std::vector<double>& b);

/// Exhaustive search over midpoint shifts for the smallest bridge count.
MinimizedBridges minimize_bridges(const PeriodicGraphSpec& spec);

bool is_connected_periodic(const PeriodicGraphSpec& spec);

/// Throws DisconnectedGraphError unless is_connected_periodic(spec).
void require_connected(const PeriodicGraphSpec& spec);

bool fundamental_bipartite(const PeriodicGraphSpec& spec);
PeriodicBipartiteResult periodic_bipartite(const PeriodicGraphSpec& spec);

GraphClassification classify(const PeriodicGraphSpec& spec);

}  // namespace bandgraph
