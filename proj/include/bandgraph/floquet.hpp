#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bandgraph/graph.hpp"
#include "bandgraph/linalg.hpp"

namespace bandgraph {

/// Point of the torus R^d / (2 pi Z)^d.
class Quasimomentum {
public:
    Quasimomentum() = default;
    explicit Quasimomentum(std::vector<double> theta) : theta_(std::move(theta)) {}

    static Quasimomentum zero(int d) { return Quasimomentum(std::vector<double>(d, 0.0)); }

    const std::vector<double>& theta() const& noexcept { return theta_; }
    std::vector<double> theta() && noexcept { return std::move(theta_); }
    std::size_t dimension() const noexcept { return theta_.size(); }
    double operator[](std::size_t s) const { return theta_[s]; }

    /// Representative in [0, 2 pi)^d.
    Quasimomentum canonical() const;

    friend bool operator==(const Quasimomentum&, const Quasimomentum&) = default;

private:
    std::vector<double> theta_;
};

enum class MatrixKind { adjacency, laplacian, schrodinger, normalized, fluctuation };

std::string_view to_string(MatrixKind kind);
/// Accepts the names produced by to_string. Throws ParameterError otherwise.
MatrixKind parse_matrix_kind(std::string_view name);

struct FloquetMatrix {
    MatrixKind kind = MatrixKind::laplacian;
    CMatrix entries;

    std::size_t dim() const noexcept { return entries.rows(); }
    const Complex& operator()(std::size_t j, std::size_t k) const { return entries(j, k); }
};

/// A_jk(theta) = sum over oriented edges (j,k) of exp(i <tau, theta>).
FloquetMatrix adjacency_floquet(const PeriodicGraphSpec& spec, const Quasimomentum& theta);

/// Delta(theta) = diag(kappa) - A(theta).
FloquetMatrix laplacian_floquet(const PeriodicGraphSpec& spec, const Quasimomentum& theta);

/// H(theta) = Delta(theta) + diag(q).
FloquetMatrix schrodinger_floquet(const PeriodicGraphSpec& spec, const Quasimomentum& theta);

/// I - kappa^{-1/2} A(theta) kappa^{-1/2}.
FloquetMatrix normalized_floquet(const PeriodicGraphSpec& spec, const Quasimomentum& theta);

struct FluctuationSplit {
    FloquetMatrix h0;      // theta-average of H: zero-index edges only
    FloquetMatrix dtilde;  // bridge terms only
};

FluctuationSplit fluctuation_split(const PeriodicGraphSpec& spec, const Quasimomentum& theta);

/// Dispatch on `kind`; `fluctuation` yields the bridge part.
FloquetMatrix fiber_matrix(const PeriodicGraphSpec& spec, MatrixKind kind, const Quasimomentum& theta);

/// Precomputes edge data of a spec so that repeated fiber evaluations on a
/// grid avoid re-walking the edge list. Thread-safe for concurrent calls.
class FloquetAssembler {
public:
    FloquetAssembler(const PeriodicGraphSpec& spec, MatrixKind kind);

    MatrixKind kind() const noexcept { return kind_; }
    std::size_t dim() const noexcept { return nu_; }

    CMatrix operator()(const std::vector<double>& theta) const;

private:
    struct Arc {
        std::size_t tail;
        std::size_t head;
        std::vector<int> index;
        bool bridge;
    };

    MatrixKind kind_;
    std::size_t nu_;
    std::vector<Arc> arcs_;
    std::vector<double> diagonal_;
    std::vector<double> inv_sqrt_kappa_;
};

}  // namespace bandgraph
