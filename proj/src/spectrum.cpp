#include "bandgraph/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "bandgraph/errors.hpp"
#include "bandgraph/lattices.hpp"
#include "bandgraph/linalg.hpp"

namespace bandgraph {

namespace {

constexpr double pi = std::numbers::pi;

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Corners of {0, pi}^d in lexicographic order, 0 before pi.
std::vector<std::vector<double>> torus_corners(int d) {
    std::vector<std::vector<double>> out;
    const std::size_t count = std::size_t{1} << d;
    for (std::size_t mask = 0; mask < count; ++mask) {
        std::vector<double> c(d);
        for (int s = 0; s < d; ++s) c[s] = (mask >> (d - 1 - s)) & 1U ? pi : 0.0;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<double> canonical(const std::vector<double>& theta) {
    return Quasimomentum(theta).canonical().theta();
}

/// Coordinate descent on theta -> sign * lambda_n(theta) from `start`.
void polish(const FloquetAssembler& fiber, std::size_t n, double sign, int per_axis,
            std::vector<double>& theta, double& value) {
    double step = pi / per_axis;
    double best = sign * value;
    for (int iter = 0; iter < 40; ++iter) {
        bool improved = false;
        for (std::size_t s = 0; s < theta.size(); ++s)
            for (double dir : {1.0, -1.0}) {
                auto trial = theta;
                trial[s] += dir * step;
                const double v = sign * hermitian_eigenvalues(fiber(trial))[n];
                if (v < best) {
                    best = v;
                    theta = std::move(trial);
                    improved = true;
                }
            }
        if (!improved) step *= 0.5;
    }
    theta = canonical(theta);
    value = sign * best;
}

std::vector<Band> raw_bands(const GridSamples& samples) {
    const std::size_t nu = samples.nu;
    const std::size_t points = samples.grid.size();
    std::vector<Band> bands(nu);
    for (std::size_t n = 0; n < nu; ++n) {
        std::size_t imin = 0, imax = 0;
        for (std::size_t i = 1; i < points; ++i) {
            const double v = samples.at(i, n);
            if (v < samples.at(imin, n)) imin = i;
            if (v > samples.at(imax, n)) imax = i;
        }
        bands[n].lower = samples.at(imin, n);
        bands[n].upper = samples.at(imax, n);
        bands[n].argmin = samples.grid.point(imin);
        bands[n].argmax = samples.grid.point(imax);
    }
    return bands;
}

double l1_distance(const CMatrix& a, const CMatrix& b) { return (a - b).entrywise_l1(); }

CMatrix fiber(const PeriodicGraphSpec& spec, MatrixKind kind, const std::vector<double>& theta) {
    return fiber_matrix(spec, kind, Quasimomentum(theta)).entries;
}

/// Signed gap lengths lambda_{n+1}^- - lambda_n^+.
std::vector<double> signed_gaps(const BandStructure& bs) {
    std::vector<double> g;
    for (std::size_t n = 0; n + 1 < bs.bands.size(); ++n)
        g.push_back(bs.bands[n + 1].lower - bs.bands[n].upper);
    return g;
}

double gap_variation(const BandStructure& a, const BandStructure& b) {
    const auto ga = signed_gaps(a);
    const auto gb = signed_gaps(b);
    double s = 0.0;
    for (std::size_t n = 0; n < ga.size(); ++n) s += std::abs(ga[n] - gb[n]);
    return s;
}

double band_variation(const BandStructure& a, const BandStructure& b) {
    double s = 0.0;
    for (std::size_t n = 0; n < a.bands.size(); ++n) s += std::abs(a.bands[n].width() - b.bands[n].width());
    return s;
}

bool bipartite_regular_loop(const GraphClassification& c) {
    return c.periodic_bipartite && c.is_regular && c.is_loop_graph;
}

}  // namespace

int default_grid_size(int dimension) {
    if (dimension <= 2) return 96;
    if (dimension == 3) return 24;
    return 12;
}

double grid_coordinate(int k, int m) {
    if (2 * k == m) return pi;
    return (2.0 * pi) * k / m;
}

TorusGrid::TorusGrid(int dimension, int per_axis) : dimension_(dimension), per_axis_(per_axis) {
    if (dimension < 1) throw ParameterError("grid dimension must be >= 1");
    if (per_axis < 2) throw ParameterError("grid needs at least 2 samples per axis");
    regular_ = 1;
    for (int s = 0; s < dimension; ++s) regular_ *= static_cast<std::size_t>(per_axis);
    if (per_axis % 2 != 0)
        for (auto& c : torus_corners(dimension))
            if (std::any_of(c.begin(), c.end(), [](double x) { return x != 0.0; }))
                extra_corners_.push_back(std::move(c));
}

std::vector<double> TorusGrid::point(std::size_t i) const {
    if (i >= regular_) return extra_corners_.at(i - regular_);
    std::vector<double> theta(dimension_);
    for (int s = dimension_ - 1; s >= 0; --s) {
        theta[s] = grid_coordinate(static_cast<int>(i % per_axis_), per_axis_);
        i /= per_axis_;
    }
    return theta;
}

GridSamples sample_grid(const PeriodicGraphSpec& spec, MatrixKind kind, const TorusGrid& grid,
                        unsigned threads) {
    if (grid.dimension() != spec.dimension()) throw ParameterError("grid dimension does not match graph");
    const FloquetAssembler assembler(spec, kind);
    GridSamples out{grid, spec.vertex_count(), {}};
    out.values.resize(grid.size() * out.nu);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto ev = hermitian_eigenvalues(assembler(grid.point(i)));
            std::copy(ev.begin(), ev.end(), out.values.begin() + static_cast<std::ptrdiff_t>(i * out.nu));
        }
    };

    const std::size_t total = grid.size();
    const std::size_t workers = std::min<std::size_t>(resolve_threads(threads), total);
    if (workers <= 1) {
        work(0, total);
        return out;
    }
    // Contiguous chunks; every point is computed independently, so the result
    // does not depend on the number of workers.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (total + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(total, begin + chunk);
        pool.emplace_back([&, w, begin, end] {
            try {
                work(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<double> eigenvalues_at(const PeriodicGraphSpec& spec, MatrixKind kind,
                                   const std::vector<double>& theta) {
    return hermitian_eigenvalues(fiber(spec, kind, theta));
}

double BandStructure::band_length_sum() const {
    double s = 0.0;
    for (const auto& b : bands) s += b.width();
    return s;
}

double BandStructure::gap_length_sum() const {
    double s = 0.0;
    for (const auto& g : gaps) s += g.length();
    return s;
}

BandStructure band_structure_from_bands(std::vector<Band> bands, MatrixKind kind, const TorusGrid& grid,
                                        const SpectrumOptions& options) {
    if (bands.empty()) throw ParameterError("no bands");
    BandStructure bs;
    bs.kind = kind;
    bs.grid = grid;

    double max_abs = 0.0;
    for (const auto& b : bands) max_abs = std::max({max_abs, std::abs(b.lower), std::abs(b.upper)});
    bs.flat_threshold = options.flat_tol * (1.0 + max_abs);

    std::vector<double> flat_values;
    for (auto& b : bands) {
        b.flat = b.width() <= bs.flat_threshold;
        if (b.flat)
            flat_values.push_back(0.5 * (b.lower + b.upper));
        else
            bs.open_bands.push_back({b.lower, b.upper});
    }
    bs.bands = std::move(bands);

    std::sort(flat_values.begin(), flat_values.end());
    for (std::size_t i = 0; i < flat_values.size();) {
        std::size_t j = i + 1;
        double sum = flat_values[i];
        while (j < flat_values.size() && flat_values[j] - flat_values[j - 1] <= options.merge_tol)
            sum += flat_values[j++];
        bs.flat_bands.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
        i = j;
    }

    // Connected components of the closed spectrum; touching within the flat
    // threshold counts as touching.
    std::vector<Interval> pieces = bs.open_bands;
    for (const auto& f : bs.flat_bands) pieces.push_back({f.value, f.value});
    std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
        return a.lower < b.lower || (a.lower == b.lower && a.upper < b.upper);
    });
    std::vector<Interval> components;
    for (const auto& p : pieces) {
        if (!components.empty() && p.lower <= components.back().upper + bs.flat_threshold)
            components.back().upper = std::max(components.back().upper, p.upper);
        else
            components.push_back(p);
    }
    for (std::size_t i = 0; i + 1 < components.size(); ++i)
        bs.gaps.push_back({components[i].upper, components[i + 1].lower});
    for (const auto& c : components) bs.spectrum_measure += c.length();
    return bs;
}

BandStructure band_structure_from_samples(const GridSamples& samples, MatrixKind kind,
                                          const SpectrumOptions& options) {
    return band_structure_from_bands(raw_bands(samples), kind, samples.grid, options);
}

BandStructure compute_band_structure(const PeriodicGraphSpec& spec, MatrixKind kind,
                                     const SpectrumOptions& options) {
    require_connected(spec);
    const TorusGrid grid(spec.dimension(), options.grid_for(spec.dimension()));
    const auto samples = sample_grid(spec, kind, grid, options.threads);
    auto bands = raw_bands(samples);
    if (options.refine) {
        const FloquetAssembler assembler(spec, kind);
        for (std::size_t n = 0; n < bands.size(); ++n) {
            polish(assembler, n, 1.0, grid.per_axis(), bands[n].argmin, bands[n].lower);
            polish(assembler, n, -1.0, grid.per_axis(), bands[n].argmax, bands[n].upper);
        }
    }
    return band_structure_from_bands(std::move(bands), kind, grid, options);
}

void EstimateReport::add_le(std::string name, double lhs, double rhs, double tol) {
    const double slack = rhs - lhs;
    checks.push_back({std::move(name), lhs, rhs, slack, Relation::le, slack >= -tol});
}

void EstimateReport::add_lt(std::string name, double lhs, double rhs) {
    const double slack = rhs - lhs;
    checks.push_back({std::move(name), lhs, rhs, slack, Relation::lt, slack > 0.0});
}

void EstimateReport::add_eq(std::string name, double lhs, double rhs, double tol) {
    const double slack = rhs - lhs;
    checks.push_back({std::move(name), lhs, rhs, slack, Relation::eq, std::abs(slack) <= tol});
}

void EstimateReport::append(const EstimateReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

bool EstimateReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const EstimateCheck& c) { return c.pass; });
}

const EstimateCheck* EstimateReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

EstimateReport verify_total_band_bound(const PeriodicGraphSpec& spec, const BandStructure& h,
                                       const SpectrumOptions& options) {
    const auto cls = classify(spec);
    const double two_beta = 2.0 * cls.beta;
    const double band_sum = h.band_length_sum();
    EstimateReport r;
    r.add_le("measure_le_band_sum", h.spectrum_measure, band_sum, options.check_tol);
    r.add_le("band_sum_le_two_beta", band_sum, two_beta, options.check_tol);
    if (cls.precise_quasimomentum && cls.single_vertex_bridges) {
        r.add_eq("measure_eq_two_beta", h.spectrum_measure, two_beta, options.equality_tol);
        r.add_eq("band_sum_eq_two_beta", band_sum, two_beta, options.equality_tol);
    }
    return r;
}

EstimateReport verify_total_band_bound(const PeriodicGraphSpec& spec, const SpectrumOptions& options) {
    return verify_total_band_bound(spec, compute_band_structure(spec, MatrixKind::schrodinger, options),
                                   options);
}

EstimateReport verify_gap_bound(const PeriodicGraphSpec& spec, const BandStructure& h,
                                const BandStructure& laplacian, const SpectrumOptions& options) {
    const auto cls = classify(spec);
    const double two_beta = 2.0 * cls.beta;
    const auto q = spec.potentials();
    const auto [qmin, qmax] = std::minmax_element(q.begin(), q.end());
    const double q_spread = *qmax - *qmin;
    const double c0 = std::max(laplacian.upper() - q_spread, q_spread - 2.0 * cls.kappa_max);
    const double hull_bound = h.upper() - h.lower() - two_beta;

    EstimateReport r;
    r.add_le("gap_sum_ge_hull_minus_two_beta", hull_bound, h.gap_length_sum(), options.check_tol);
    r.add_le("hull_bound_ge_c0_minus_two_beta", c0 - two_beta, hull_bound, options.check_tol);
    if (cls.precise_quasimomentum && cls.single_vertex_bridges)
        r.add_eq("gap_sum_eq_hull_minus_two_beta", h.gap_length_sum(), hull_bound, options.equality_tol);
    return r;
}

EstimateReport verify_gap_bound(const PeriodicGraphSpec& spec, const SpectrumOptions& options) {
    return verify_gap_bound(spec, compute_band_structure(spec, MatrixKind::schrodinger, options),
                            compute_band_structure(spec, MatrixKind::laplacian, options), options);
}

FirstBandCheck check_first_band_nondegenerate(const PeriodicGraphSpec& spec, const BandStructure& h,
                                              const SpectrumOptions& options) {
    const TorusGrid grid(spec.dimension(), options.grid_for(spec.dimension()));
    const FloquetAssembler laplacian(spec, MatrixKind::laplacian);
    const std::size_t nu = spec.vertex_count();
    std::vector<double> lo(nu * nu, std::numeric_limits<double>::infinity());
    std::vector<double> hi(nu * nu, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto m = laplacian(grid.point(i));
        for (std::size_t j = 0; j < nu; ++j)
            for (std::size_t k = 0; k < nu; ++k) {
                const double a = std::abs(m(j, k));
                lo[j * nu + k] = std::min(lo[j * nu + k], a);
                hi[j * nu + k] = std::max(hi[j * nu + k], a);
            }
    }
    FirstBandCheck out;
    for (std::size_t e = 0; e < nu * nu; ++e)
        if (hi[e] - lo[e] > 1e-9) out.modulus_varies = true;
    out.first_band_width = h.bands.front().width();
    out.nondegenerate = out.first_band_width > 1e-9;
    return out;
}

FirstBandCheck check_first_band_nondegenerate(const PeriodicGraphSpec& spec, const SpectrumOptions& options) {
    return check_first_band_nondegenerate(spec, compute_band_structure(spec, MatrixKind::schrodinger, options),
                                          options);
}

BandStructure loop_band_endpoints(const PeriodicGraphSpec& spec, const SpectrumOptions& options) {
    const auto cls = classify(spec);
    if (!cls.is_connected) throw DisconnectedGraphError("periodic graph is not connected");
    if (!cls.is_loop_graph) throw PreconditionError("not a loop graph: some bridge joins distinct vertices");
    const int d = spec.dimension();
    const TorusGrid grid(d, options.grid_for(d));
    const std::vector<double> zero(d, 0.0);

    const auto lower = eigenvalues_at(spec, MatrixKind::schrodinger, zero);
    std::vector<Band> bands(lower.size());
    for (std::size_t n = 0; n < bands.size(); ++n) {
        bands[n].lower = lower[n];
        bands[n].argmin = zero;
    }
    if (cls.precise_quasimomentum) {
        const auto& theta0 = *cls.precise_quasimomentum;
        const auto upper = eigenvalues_at(spec, MatrixKind::schrodinger, theta0);
        for (std::size_t n = 0; n < bands.size(); ++n) {
            bands[n].upper = upper[n];
            bands[n].argmax = theta0;
        }
    } else {
        const auto fallback = raw_bands(sample_grid(spec, MatrixKind::schrodinger, grid, options.threads));
        for (std::size_t n = 0; n < bands.size(); ++n) {
            bands[n].upper = fallback[n].upper;
            bands[n].argmax = fallback[n].argmax;
        }
    }
    return band_structure_from_bands(std::move(bands), MatrixKind::schrodinger, grid, options);
}

BandStructure bipartite_loop_endpoints(const PeriodicGraphSpec& spec, const SpectrumOptions& options) {
    const auto cls = classify(spec);
    if (!cls.is_connected) throw DisconnectedGraphError("periodic graph is not connected");
    const auto bip = periodic_bipartite(spec);
    if (!bip.bipartite) throw PreconditionError("periodic graph is not bipartite");
    if (!cls.is_regular) throw PreconditionError("graph is not regular");
    if (!cls.is_loop_graph) throw PreconditionError("fundamental graph is not a loop graph");

    const int d = spec.dimension();
    const std::vector<double> zero(d, 0.0);
    // Delta(theta + pi p) is unitarily equivalent to 2 kappa - Delta(theta).
    std::vector<double> mirror(d);
    for (int s = 0; s < d; ++s) mirror[s] = bip.parity[s] ? pi : 0.0;

    const auto ev = eigenvalues_at(spec, MatrixKind::laplacian, zero);
    const std::size_t nu = ev.size();
    const double two_kappa = 2.0 * cls.kappa_max;
    std::vector<Band> bands(nu);
    for (std::size_t n = 0; n < nu; ++n) {
        bands[n].lower = ev[n];
        bands[n].upper = two_kappa - ev[nu - 1 - n];
        bands[n].argmin = zero;
        bands[n].argmax = mirror;
    }
    return band_structure_from_bands(std::move(bands), MatrixKind::laplacian,
                                     TorusGrid(d, options.grid_for(d)), options);
}

LargeCouplingReport large_coupling_analysis(const PeriodicGraphSpec& spec, double t,
                                            const SpectrumOptions& options) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("coupling constant must be positive");
    const auto q = spec.potentials();
    const std::size_t nu = q.size();
    for (std::size_t j = 0; j < nu; ++j)
        for (std::size_t k = j + 1; k < nu; ++k)
            if (q[j] == q[k]) throw PreconditionError("potentials must be pairwise distinct");

    std::vector<std::size_t> order(nu);
    for (std::size_t j = 0; j < nu; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return q[a] < q[b]; });

    std::vector<double> tq(nu);
    for (std::size_t j = 0; j < nu; ++j) tq[j] = t * q[j];
    const auto scaled = spec.with_potentials(tq);

    const TorusGrid grid(spec.dimension(), options.grid_for(spec.dimension()));
    const FloquetAssembler laplacian(spec, MatrixKind::laplacian);
    const auto samples = sample_grid(scaled, MatrixKind::schrodinger, grid, options.threads);

    LargeCouplingReport out;
    out.t = t;
    std::vector<double> dmin(nu, std::numeric_limits<double>::infinity());
    std::vector<double> dmax(nu, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto lap = laplacian(grid.point(i));
        for (std::size_t r = 0; r < nu; ++r) {
            const std::size_t n = order[r];
            double correction = 0.0;
            for (std::size_t j = 0; j < nu; ++j)
                if (j != n) correction += std::norm(lap(j, n)) / (q[j] - q[n]);
            const double expansion = t * q[n] + lap(n, n).real() - correction / t;
            out.max_deviation = std::max(out.max_deviation, std::abs(samples.at(i, r) - expansion));
            dmin[n] = std::min(dmin[n], lap(n, n).real());
            dmax[n] = std::max(dmax[n], lap(n, n).real());
        }
    }
    for (std::size_t n = 0; n < nu; ++n) out.c_constant += dmax[n] - dmin[n];
    out.measure = band_structure_from_samples(samples, MatrixKind::schrodinger, options).spectrum_measure;
    out.measure_minus_c = out.measure - out.c_constant;
    return out;
}

UniformExtremizers find_uniform_extremizers(const PeriodicGraphSpec& spec, const BandStructure& bands) {
    constexpr double tol = 1e-8;
    UniformExtremizers out;
    int best_lower = -1, best_upper = -1;
    const std::size_t nu = bands.bands.size();
    for (const auto& corner : torus_corners(spec.dimension())) {
        const auto ev = eigenvalues_at(spec, bands.kind, corner);
        auto first_failure = [&](bool upper) -> std::size_t {
            for (std::size_t n = 0; n < nu; ++n) {
                const double target = upper ? bands.bands[n].upper : bands.bands[n].lower;
                if (std::abs(ev[n] - target) > tol) return n;
            }
            return nu;
        };
        const std::size_t lf = first_failure(false);
        const std::size_t uf = first_failure(true);
        if (!out.lower && static_cast<int>(lf) > best_lower) {
            best_lower = static_cast<int>(lf);
            if (lf == nu) out.lower = corner;
        }
        if (!out.upper && static_cast<int>(uf) > best_upper) {
            best_upper = static_cast<int>(uf);
            if (uf == nu) out.upper = corner;
        }
    }
    out.failing_lower_band = out.lower ? 0 : best_lower + 1;
    out.failing_upper_band = out.upper ? 0 : best_upper + 1;
    return out;
}

UniformExtremizers find_uniform_extremizers(const PeriodicGraphSpec& spec, const SpectrumOptions& options) {
    return find_uniform_extremizers(spec, compute_band_structure(spec, MatrixKind::schrodinger, options));
}

StabilityResult stability_constants(const PeriodicGraphSpec& a, const PeriodicGraphSpec& b,
                                    const SpectrumOptions& options) {
    if (a.vertex_count() != b.vertex_count())
        throw PreconditionError("vertex counts differ: " + std::to_string(a.vertex_count()) + " vs " +
                                std::to_string(b.vertex_count()));
    const std::size_t nu = a.vertex_count();
    StabilityResult out;

    const auto ha = compute_band_structure(a, MatrixKind::schrodinger, options);
    const auto hb = compute_band_structure(b, MatrixKind::schrodinger, options);
    const auto ea = find_uniform_extremizers(a, ha);
    const auto eb = find_uniform_extremizers(b, hb);
    auto require = [](const UniformExtremizers& e, const char* which) {
        if (!e.lower)
            throw PreconditionError(std::string("no uniform minimizer for the ") + which + " graph (band " +
                                    std::to_string(e.failing_lower_band) + ")");
        if (!e.upper)
            throw PreconditionError(std::string("no uniform maximizer for the ") + which + " graph (band " +
                                    std::to_string(e.failing_upper_band) + ")");
    };
    require(ea, "first");
    require(eb, "second");

    using MK = MatrixKind;
    out.c = l1_distance(fiber(a, MK::schrodinger, *ea.lower), fiber(b, MK::schrodinger, *eb.lower)) +
            l1_distance(fiber(a, MK::schrodinger, *ea.upper), fiber(b, MK::schrodinger, *eb.upper));
    const double extreme = std::abs(ha.lower() - hb.lower()) + std::abs(ha.upper() - hb.upper());
    out.report.add_le("gap_variation_le_two_c", extreme + gap_variation(ha, hb), 2.0 * out.c,
                      options.check_tol);
    out.report.add_le("band_variation_le_two_c", band_variation(ha, hb), 2.0 * out.c, options.check_tol);

    const bool same_laplacian =
        (fiber(a, MK::laplacian, *ea.lower) - fiber(b, MK::laplacian, *eb.lower)).max_abs() <= 1e-12 &&
        (fiber(a, MK::laplacian, *ea.upper) - fiber(b, MK::laplacian, *eb.upper)).max_abs() <= 1e-12;
    if (same_laplacian) {
        const auto qa = a.potentials();
        const auto qb = b.potentials();
        double s = 0.0;
        for (std::size_t n = 0; n < nu; ++n) s += std::abs(qa[n] - qb[n]);
        out.report.add_eq("c_eq_twice_potential_difference", out.c, 2.0 * s, options.equality_tol);
    }

    const auto ca = classify(a);
    const auto cb = classify(b);
    const std::vector<double> zero(a.dimension(), 0.0);
    const std::vector<double> zero_b(b.dimension(), 0.0);

    if (bipartite_regular_loop(ca) && bipartite_regular_loop(cb) && ca.kappa_max == cb.kappa_max) {
        const auto la = compute_band_structure(a, MK::laplacian, options);
        const auto lb = compute_band_structure(b, MK::laplacian, options);
        const double c = l1_distance(fiber(a, MK::laplacian, zero), fiber(b, MK::laplacian, zero_b));
        out.c_bipartite = c;
        out.report.add_le("bipartite_gap_variation_le_four_c", gap_variation(la, lb), 4.0 * c,
                          options.check_tol);
        out.report.add_le("bipartite_band_variation_le_four_c", band_variation(la, lb), 4.0 * c,
                          options.check_tol);
    } else {
        out.notes.push_back("bipartite-regular comparison skipped: both graphs must be bipartite, "
                            "regular of the same degree, and loop graphs");
    }

    const PeriodicGraphSpec* precise = nullptr;
    const PeriodicGraphSpec* bipartite = nullptr;
    const GraphClassification* pc = nullptr;
    const GraphClassification* bc = nullptr;
    const BandStructure* hp = nullptr;
    if (ca.precise_quasimomentum && bipartite_regular_loop(cb)) {
        precise = &a, bipartite = &b, pc = &ca, bc = &cb, hp = &ha;
    } else if (cb.precise_quasimomentum && bipartite_regular_loop(ca)) {
        precise = &b, bipartite = &a, pc = &cb, bc = &ca, hp = &hb;
    }
    if (precise) {
        const std::vector<double> z(precise->dimension(), 0.0);
        const std::vector<double> zb(bipartite->dimension(), 0.0);
        const double two_kappa = 2.0 * bc->kappa_max;
        const auto lb = compute_band_structure(*bipartite, MK::laplacian, options);
        const CMatrix lap0 = fiber(*bipartite, MK::laplacian, zb);
        const double c = l1_distance(fiber(*precise, MK::schrodinger, z), lap0) +
                         (fiber(*precise, MK::schrodinger, *pc->precise_quasimomentum) + lap0 -
                          CMatrix::identity(nu) * Complex(two_kappa))
                             .entrywise_l1();
        out.c_precise = c;
        const double ends = std::abs(hp->lower()) + std::abs(two_kappa - hp->upper());
        out.report.add_le("precise_gap_variation_le_two_c", ends + gap_variation(*hp, lb), 2.0 * c,
                          options.check_tol);
        out.report.add_le("precise_band_variation_le_two_c", band_variation(*hp, lb), 2.0 * c,
                          options.check_tol);
    } else {
        out.notes.push_back("precise-vs-bipartite comparison skipped: needs one precise loop graph and one "
                            "bipartite regular loop graph");
    }
    return out;
}

DiracReport dirac_expansion_check(double q1, double radius, int samples) {
    if (!(radius > 0.0)) throw ParameterError("radius must be positive");
    if (samples < 1) throw ParameterError("need at least one sample per circle");
    const auto spec = lattices::hexagonal().with_potentials({q1, -q1});
    const std::vector<double> theta0{2.0 * pi / 3.0, -2.0 * pi / 3.0};
    const double sqrt3 = std::sqrt(3.0);
    const Complex i(0.0, 1.0);

    DiracReport out;
    out.mass = q1;
    out.radius = radius;
    const auto edges = eigenvalues_at(spec, MatrixKind::schrodinger, theta0);
    out.lower_edge = edges[0];
    out.upper_edge = edges[1];

    auto errors = [&](double r) {
        double gauged = 0.0, literal = 0.0;
        for (int k = 0; k < samples; ++k) {
            const double phi = 2.0 * pi * k / samples;
            const double t1 = r * std::cos(phi), t2 = r * std::sin(phi);
            const std::vector<double> theta{theta0[0] + t1 + t2 / sqrt3, theta0[1] + t1 - t2 / sqrt3};
            CMatrix h = fiber(spec, MatrixKind::schrodinger, theta) - CMatrix::identity(2) * Complex(3.0);

            CMatrix dirac(2, 2);
            dirac(0, 0) = q1;
            dirac(1, 1) = -q1;
            dirac(0, 1) = Complex(t1, -t2);
            dirac(1, 0) = Complex(t1, t2);
            literal = std::max(literal, (h - dirac).frobenius_norm());
            // Conjugation by diag(1, -i).
            dirac(0, 1) *= i;
            dirac(1, 0) *= -i;
            gauged = std::max(gauged, (h - dirac).frobenius_norm());
        }
        return std::pair{gauged, literal};
    };
    const auto [er, lr] = errors(radius);
    const auto [eh, lh] = errors(0.5 * radius);
    out.error_r = er;
    out.error_half = eh;
    out.ratio = er > 0.0 ? eh / er : 0.0;
    out.literal_ratio = lr > 0.0 ? lh / lr : 0.0;
    return out;
}

std::vector<FlatBlockResult> check_flat_band_block(const PeriodicGraphSpec& spec,
                                                   const std::vector<std::size_t>& border, MatrixKind kind,
                                                   const SpectrumOptions& options) {
    if (border.size() != 1) throw ParameterError("border must consist of exactly one vertex");
    const std::size_t v = border.front();
    if (v >= spec.vertex_count()) throw ParameterError("border vertex out of range");
    std::vector<FlatBlockResult> out;
    if (spec.vertex_count() < 3) return out;

    const auto bs = compute_band_structure(spec, kind, options);
    const FloquetAssembler assembler(spec, kind);
    const TorusGrid& grid = bs.grid;
    const double tol = options.merge_tol;

    auto block_eigs = [&](std::size_t i) { return hermitian_eigenvalues(remove_row_col(assembler(grid.point(i)), v)); };
    auto count_near = [&](const std::vector<double>& ev, double eta) {
        return static_cast<int>(std::count_if(ev.begin(), ev.end(), [&](double x) { return std::abs(x - eta) <= tol; }));
    };

    // Candidate values: clusters of the block spectrum at the first grid point.
    const auto ev0 = block_eigs(0);
    std::vector<std::pair<double, int>> candidates;
    for (std::size_t i = 0; i < ev0.size();) {
        std::size_t j = i + 1;
        while (j < ev0.size() && ev0[j] - ev0[j - 1] <= tol) ++j;
        if (j - i >= 2) candidates.emplace_back(ev0[i], static_cast<int>(j - i));
        i = j;
    }
    for (std::size_t p = 1; p < grid.size() && !candidates.empty(); ++p) {
        const auto ev = block_eigs(p);
        for (auto& [eta, m] : candidates) m = std::min(m, count_near(ev, eta));
        std::erase_if(candidates, [](const auto& c) { return c.second < 2; });
    }
    for (const auto& [eta, m] : candidates) {
        FlatBlockResult r;
        r.eta = eta;
        r.block_multiplicity = m;
        for (const auto& f : bs.flat_bands)
            if (std::abs(f.value - eta) <= tol) r.band_multiplicity += f.multiplicity;
        r.pass = r.band_multiplicity >= m - 1;
        out.push_back(r);
    }
    return out;
}

EstimateReport applicable_estimates(const PeriodicGraphSpec& spec, const GraphClassification& cls,
                                    const BandStructure& h, const BandStructure& laplacian,
                                    const SpectrumOptions& options) {
    EstimateReport r = verify_total_band_bound(spec, h, options);
    r.append(verify_gap_bound(spec, h, laplacian, options));

    const int d = spec.dimension();
    const std::vector<double> zero(d, 0.0);
    const double two_kappa = 2.0 * cls.kappa_max;
    r.add_le("laplacian_spectrum_nonnegative", 0.0, laplacian.lower(), options.check_tol);
    r.add_le("laplacian_spectrum_le_two_kappa", laplacian.upper(), two_kappa, options.check_tol);
    r.add_eq("laplacian_bottom_is_zero", eigenvalues_at(spec, MatrixKind::laplacian, zero).front(), 0.0,
             options.equality_tol);

    const auto h0 = eigenvalues_at(spec, MatrixKind::schrodinger, zero);
    r.add_le("spectrum_minimum_at_zero", h0.front(), h.lower(), options.check_tol);

    const auto first = check_first_band_nondegenerate(spec, h, options);
    if (first.modulus_varies) r.add_lt("first_band_open", h.flat_threshold, first.first_band_width);

    if (cls.is_loop_graph) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n < h0.size(); ++n) worst = std::max(worst, h0[n] - h.bands[n].lower);
        r.add_le("loop_lower_endpoints_at_zero", worst, 0.0, options.check_tol);
    }
    if (cls.precise_quasimomentum) {
        const auto top = eigenvalues_at(spec, MatrixKind::schrodinger, *cls.precise_quasimomentum);
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n < top.size(); ++n) worst = std::max(worst, h.bands[n].upper - top[n]);
        r.add_le("precise_upper_endpoints_at_theta0", worst, 0.0, options.check_tol);
        r.add_eq("precise_band_sum_eq_two_beta", h.band_length_sum(), 2.0 * cls.beta, options.equality_tol);
    }
    if (cls.periodic_bipartite && cls.is_regular) {
        r.add_le("bipartite_gap_sum_ge_two_kappa_minus_beta", 2.0 * (cls.kappa_max - cls.beta),
                 laplacian.gap_length_sum(), options.check_tol);
        r.add_eq("bipartite_spectrum_symmetric", laplacian.lower() + laplacian.upper(), two_kappa,
                 options.equality_tol);
        if (cls.is_loop_graph) {
            const auto ends = bipartite_loop_endpoints(spec, options);
            double dev = 0.0;
            for (std::size_t n = 0; n < ends.bands.size(); ++n)
                dev = std::max({dev, std::abs(ends.bands[n].lower - laplacian.bands[n].lower),
                                std::abs(ends.bands[n].upper - laplacian.bands[n].upper)});
            r.add_eq("bipartite_endpoints_match_grid", dev, 0.0, options.equality_tol);
        }
    }
    return r;
}

EstimateReport applicable_estimates(const PeriodicGraphSpec& spec, const SpectrumOptions& options) {
    const auto cls = classify(spec);
    return applicable_estimates(spec, cls, compute_band_structure(spec, MatrixKind::schrodinger, options),
                                compute_band_structure(spec, MatrixKind::laplacian, options), options);
}

}  // namespace bandgraph
