#include "bandgraph/floquet.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "bandgraph/errors.hpp"

namespace bandgraph {

Quasimomentum Quasimomentum::canonical() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> t(theta_.size());
    for (std::size_t s = 0; s < t.size(); ++s) {
        double x = std::fmod(theta_[s], two_pi);
        if (x < 0.0) x += two_pi;
        if (x >= two_pi) x = 0.0;
        t[s] = x;
    }
    return Quasimomentum(std::move(t));
}

std::string_view to_string(MatrixKind kind) {
    switch (kind) {
        case MatrixKind::adjacency: return "adjacency";
        case MatrixKind::laplacian: return "laplacian";
        case MatrixKind::schrodinger: return "schrodinger";
        case MatrixKind::normalized: return "normalized";
        case MatrixKind::fluctuation: return "fluctuation";
    }
    return "unknown";
}

MatrixKind parse_matrix_kind(std::string_view name) {
    for (auto k : {MatrixKind::adjacency, MatrixKind::laplacian, MatrixKind::schrodinger,
                   MatrixKind::normalized, MatrixKind::fluctuation})
        if (name == to_string(k)) return k;
    throw ParameterError("unknown matrix kind '" + std::string(name) + "'");
}

FloquetAssembler::FloquetAssembler(const PeriodicGraphSpec& spec, MatrixKind kind)
    : kind_(kind), nu_(spec.vertex_count()) {
    for (auto& e : oriented_edges(spec)) {
        const bool bridge = e.is_bridge();
        arcs_.push_back({e.tail, e.head, std::move(e.index), bridge});
    }
    const auto kappa = degrees(spec);
    const auto q = spec.potentials();
    diagonal_.assign(nu_, 0.0);
    inv_sqrt_kappa_.assign(nu_, 0.0);
    for (std::size_t j = 0; j < nu_; ++j) {
        if (kind == MatrixKind::laplacian) diagonal_[j] = kappa[j];
        if (kind == MatrixKind::schrodinger) diagonal_[j] = kappa[j] + q[j];
        if (kind == MatrixKind::normalized) {
            if (kappa[j] < 1) throw PreconditionError("normalized Laplacian needs positive degrees");
            inv_sqrt_kappa_[j] = 1.0 / std::sqrt(static_cast<double>(kappa[j]));
        }
    }
}

CMatrix FloquetAssembler::operator()(const std::vector<double>& theta) const {
    CMatrix m(nu_, nu_);
    // Adjacency kinds add +phase, Laplacian-like kinds subtract it.
    const double sign = kind_ == MatrixKind::adjacency ? 1.0 : -1.0;
    for (const auto& a : arcs_) {
        if (kind_ == MatrixKind::fluctuation && !a.bridge) continue;
        double phase = 0.0;
        for (std::size_t s = 0; s < a.index.size(); ++s) phase += a.index[s] * theta[s];
        Complex z = a.bridge ? std::polar(1.0, phase) : Complex(1.0, 0.0);
        if (kind_ == MatrixKind::normalized) z *= inv_sqrt_kappa_[a.tail] * inv_sqrt_kappa_[a.head];
        m(a.tail, a.head) += sign * z;
    }
    if (kind_ == MatrixKind::normalized)
        for (std::size_t j = 0; j < nu_; ++j) m(j, j) += 1.0;
    else
        for (std::size_t j = 0; j < nu_; ++j) m(j, j) += diagonal_[j];
    return hermitian_part(m);
}

namespace {

FloquetMatrix assemble(const PeriodicGraphSpec& spec, MatrixKind kind, const Quasimomentum& theta) {
    if (theta.dimension() != static_cast<std::size_t>(spec.dimension()))
        throw ParameterError("quasimomentum has wrong dimension");
    return {kind, FloquetAssembler(spec, kind)(theta.canonical().theta())};
}

}  // namespace

FloquetMatrix adjacency_floquet(const PeriodicGraphSpec& spec, const Quasimomentum& theta) {
    return assemble(spec, MatrixKind::adjacency, theta);
}

FloquetMatrix laplacian_floquet(const PeriodicGraphSpec& spec, const Quasimomentum& theta) {
    return assemble(spec, MatrixKind::laplacian, theta);
}

FloquetMatrix schrodinger_floquet(const PeriodicGraphSpec& spec, const Quasimomentum& theta) {
    return assemble(spec, MatrixKind::schrodinger, theta);
}

FloquetMatrix normalized_floquet(const PeriodicGraphSpec& spec, const Quasimomentum& theta) {
    return assemble(spec, MatrixKind::normalized, theta);
}

FluctuationSplit fluctuation_split(const PeriodicGraphSpec& spec, const Quasimomentum& theta) {
    FluctuationSplit out;
    out.dtilde = assemble(spec, MatrixKind::fluctuation, theta);

    const std::size_t nu = spec.vertex_count();
    const auto kappa = degrees(spec);
    const auto q = spec.potentials();
    CMatrix h0(nu, nu);
    for (std::size_t j = 0; j < nu; ++j) h0(j, j) = kappa[j] + q[j];
    for (const auto& r : spec.edges()) {
        if (r.is_bridge()) continue;
        h0(r.tail, r.head) -= 1.0;
        h0(r.head, r.tail) -= 1.0;
    }
    out.h0 = {MatrixKind::schrodinger, hermitian_part(h0)};
    return out;
}

FloquetMatrix fiber_matrix(const PeriodicGraphSpec& spec, MatrixKind kind, const Quasimomentum& theta) {
    return assemble(spec, kind, theta);
}

}  // namespace bandgraph
