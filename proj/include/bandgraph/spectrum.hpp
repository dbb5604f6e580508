#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bandgraph/floquet.hpp"
#include "bandgraph/graph.hpp"

namespace bandgraph {

/// Per-axis default sample count: 96 for d <= 2, 24 for d = 3, 12 beyond.
int default_grid_size(int dimension);

/// theta = 2 pi k / m, with k = m/2 mapped to pi exactly.
double grid_coordinate(int k, int m);

/// Uniform torus grid {2 pi k / M}^d, augmented with the corners {0, pi}^d
/// when M is odd. Point order: lexicographic in (k_1, ..., k_d), corners last.
class TorusGrid {
public:
    TorusGrid(int dimension, int per_axis);

    int dimension() const noexcept { return dimension_; }
    int per_axis() const noexcept { return per_axis_; }
    std::size_t size() const noexcept { return regular_ + extra_corners_.size(); }

    std::vector<double> point(std::size_t i) const;

    friend bool operator==(const TorusGrid&, const TorusGrid&) = default;

private:
    int dimension_;
    int per_axis_;
    std::size_t regular_;
    std::vector<std::vector<double>> extra_corners_;
};

struct SpectrumOptions {
    int grid = 0;               // per-axis samples, 0 selects default_grid_size
    double flat_tol = 1e-9;     // band is flat if width <= flat_tol * (1 + max|lambda|)
    double merge_tol = 1e-7;    // flat values closer than this are merged
    double check_tol = 1e-8;    // inequality checks pass with slack >= -check_tol
    double equality_tol = 1e-9; // equality checks pass with |lhs - rhs| <= equality_tol
    unsigned threads = 0;       // 0 selects std::thread::hardware_concurrency
    bool refine = false;        // coordinate-descent polish of band extrema

    int grid_for(int dimension) const { return grid > 0 ? grid : default_grid_size(dimension); }
};

/// Sorted eigenvalues at every grid point; values[i * nu + n].
struct GridSamples {
    TorusGrid grid;
    std::size_t nu = 0;
    std::vector<double> values;

    double at(std::size_t point, std::size_t n) const { return values[point * nu + n]; }
};

GridSamples sample_grid(const PeriodicGraphSpec& spec, MatrixKind kind, const TorusGrid& grid,
                        unsigned threads = 0);

/// Sorted eigenvalues of the fiber matrix at one quasimomentum.
std::vector<double> eigenvalues_at(const PeriodicGraphSpec& spec, MatrixKind kind,
                                   const std::vector<double>& theta);

struct Band {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> argmin;
    std::vector<double> argmax;
    bool flat = false;

    double width() const noexcept { return upper - lower; }
};

struct FlatBand {
    double value = 0.0;
    int multiplicity = 0;
};

struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    double length() const noexcept { return upper - lower; }
};

struct BandStructure {
    MatrixKind kind = MatrixKind::schrodinger;
    TorusGrid grid{1, 2};
    std::vector<Band> bands;            // raw sorted branches, nu entries
    std::vector<FlatBand> flat_bands;   // merged flat values
    std::vector<Interval> open_bands;   // non-flat raw bands
    std::vector<Interval> gaps;         // complement of the closed spectrum inside its hull
    double spectrum_measure = 0.0;
    double flat_threshold = 0.0;        // absolute width under which a band counts as flat

    double lower() const { return bands.front().lower; }
    double upper() const { return bands.back().upper; }
    double band_length_sum() const;
    double gap_length_sum() const;
};

/// Bands over the grid; throws DisconnectedGraphError for a disconnected cover
/// and ParameterError for a grid with fewer than 2 samples per axis.
BandStructure compute_band_structure(const PeriodicGraphSpec& spec, MatrixKind kind,
                                     const SpectrumOptions& options = {});

BandStructure band_structure_from_samples(const GridSamples& samples, MatrixKind kind,
                                          const SpectrumOptions& options = {});

/// Band structure from explicit endpoints; flat bands, gaps and measure are derived.
BandStructure band_structure_from_bands(std::vector<Band> bands, MatrixKind kind, const TorusGrid& grid,
                                        const SpectrumOptions& options = {});

enum class Relation { le, lt, eq };

struct EstimateCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs
    Relation relation = Relation::le;
    bool pass = false;
};

struct EstimateReport {
    std::vector<EstimateCheck> checks;

    void add_le(std::string name, double lhs, double rhs, double tol);
    /// Strict: passes only when rhs > lhs.
    void add_lt(std::string name, double lhs, double rhs);
    void add_eq(std::string name, double lhs, double rhs, double tol);
    void append(const EstimateReport& other);

    bool all_pass() const;
    const EstimateCheck* find(const std::string& name) const;
};

/// Measure <= sum of band lengths <= 2 beta, with the equalities asserted
/// for precise loop graphs whose bridges all sit at one vertex.
EstimateReport verify_total_band_bound(const PeriodicGraphSpec& spec, const SpectrumOptions& options = {});
EstimateReport verify_total_band_bound(const PeriodicGraphSpec& spec, const BandStructure& h,
                                       const SpectrumOptions& options = {});

/// Gap sum >= lambda_nu^+ - lambda_1^- - 2 beta >= C0 - 2 beta.
EstimateReport verify_gap_bound(const PeriodicGraphSpec& spec, const SpectrumOptions& options = {});
EstimateReport verify_gap_bound(const PeriodicGraphSpec& spec, const BandStructure& h,
                                const BandStructure& laplacian, const SpectrumOptions& options = {});

struct FirstBandCheck {
    bool modulus_varies = false;  // some |Delta_jk| is non-constant on the grid
    bool nondegenerate = false;   // first band of H has positive width
    double first_band_width = 0.0;
};

FirstBandCheck check_first_band_nondegenerate(const PeriodicGraphSpec& spec,
                                              const SpectrumOptions& options = {});
FirstBandCheck check_first_band_nondegenerate(const PeriodicGraphSpec& spec, const BandStructure& h,
                                              const SpectrumOptions& options = {});

/// Bands of H from H(0) and H(theta_0) alone. Upper endpoints fall back to grid
/// maxima when the loop graph has no precise quasimomentum.
BandStructure loop_band_endpoints(const PeriodicGraphSpec& spec, const SpectrumOptions& options = {});

/// Laplacian band endpoints from Delta(0) and 2 kappa - Delta(0).
BandStructure bipartite_loop_endpoints(const PeriodicGraphSpec& spec, const SpectrumOptions& options = {});

struct LargeCouplingReport {
    double t = 0.0;
    double max_deviation = 0.0;  // max over grid and n of |lambda_n - two-term expansion|
    double measure = 0.0;        // |sigma(H_t)|
    double c_constant = 0.0;     // sum over n of the range of Delta_nn
    double measure_minus_c = 0.0;
};

/// Spectrum of Delta + t Q against its large-t expansion. Requires pairwise
/// distinct potentials.
LargeCouplingReport large_coupling_analysis(const PeriodicGraphSpec& spec, double t,
                                            const SpectrumOptions& options = {});

struct UniformExtremizers {
    std::optional<std::vector<double>> lower;  // theta_- minimizing every band
    std::optional<std::vector<double>> upper;  // theta_+ maximizing every band
    int failing_lower_band = 0;                // 1-based band index, 0 when found
    int failing_upper_band = 0;
};

/// Scans {0, pi}^d for a point attaining every band minimum (maximum) within 1e-8.
UniformExtremizers find_uniform_extremizers(const PeriodicGraphSpec& spec, const BandStructure& bands);
UniformExtremizers find_uniform_extremizers(const PeriodicGraphSpec& spec,
                                            const SpectrumOptions& options = {});

struct StabilityResult {
    double c = 0.0;                      // general constant from the extremal fibers
    std::optional<double> c_bipartite;   // both graphs bipartite-regular Laplacians
    std::optional<double> c_precise;     // one precise, one bipartite-regular
    EstimateReport report;
    std::vector<std::string> notes;      // variants that were not applicable
};

/// Band and gap stability between two graphs with the same vertex count.
/// Throws PreconditionError when the vertex counts differ or when a uniform
/// extremizer is missing.
StabilityResult stability_constants(const PeriodicGraphSpec& a, const PeriodicGraphSpec& b,
                                    const SpectrumOptions& options = {});

struct DiracReport {
    double mass = 0.0;
    double radius = 0.0;
    double error_r = 0.0;        // max E over |t| = r
    double error_half = 0.0;     // max E over |t| = r/2
    double ratio = 0.0;          // error_half / error_r
    double literal_ratio = 0.0;  // same ratio without the diagonal phase gauge
    double lower_edge = 0.0;     // eigenvalues of H(theta^0)
    double upper_edge = 0.0;
};

/// Hexagonal lattice with q = (q1, -q1) near the Dirac point.
DiracReport dirac_expansion_check(double q1, double radius, int samples = 64);

struct FlatBlockResult {
    double eta = 0.0;
    int block_multiplicity = 0;   // m: multiplicity of the constant block eigenvalue
    int band_multiplicity = 0;    // multiplicity of eta among the flat bands
    bool pass = false;            // band_multiplicity >= m - 1
};

/// Constant eigenvalues of the fiber with one border vertex removed, matched
/// against the detected flat bands. `border` must hold exactly one vertex.
std::vector<FlatBlockResult> check_flat_band_block(const PeriodicGraphSpec& spec,
                                                   const std::vector<std::size_t>& border,
                                                   MatrixKind kind = MatrixKind::laplacian,
                                                   const SpectrumOptions& options = {});

/// Every estimate applicable to the spec's classification, evaluated for H.
EstimateReport applicable_estimates(const PeriodicGraphSpec& spec, const GraphClassification& cls,
                                    const BandStructure& h, const BandStructure& laplacian,
                                    const SpectrumOptions& options = {});
EstimateReport applicable_estimates(const PeriodicGraphSpec& spec, const SpectrumOptions& options = {});

}  // namespace bandgraph
