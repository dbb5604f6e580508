#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bandgraph/floquet.hpp"
#include "bandgraph/graph.hpp"
#include "bandgraph/spectrum.hpp"

namespace bandgraph::io {

/// Parses a graph document (format_version 1). Unknown fields, wrong types and
/// structural violations raise ParseError whose path names the offending field.
PeriodicGraphSpec parse_graph(std::string_view text);
PeriodicGraphSpec load_graph(const std::string& path);

/// Canonical text form; parse_graph(serialize_graph(s)) == s.
std::string serialize_graph(const PeriodicGraphSpec& spec);

/// 17 significant digits, "null" for non-finite values.
std::string format_double(double x);

/// Parses a coordinate such as "0", "-0.25", "pi", "2pi/3" or "-pi/2".
double parse_angle(std::string_view token);

/// Polyline through the given vertices with `samples` points per segment;
/// each vertex appears exactly once.
std::vector<std::vector<double>> parse_path(std::string_view text, int dimension, int samples);

/// A graph file path, or "builtin:<id>".
struct InputSource {
    std::optional<std::string> file;
    std::optional<std::string> builtin;
    std::optional<std::vector<double>> potentials;

    static InputSource from_argument(const std::string& argument);
};

PeriodicGraphSpec load_input(const InputSource& source);

struct AnalysisResult {
    PeriodicGraphSpec spec;
    GraphClassification classification;
    MatrixKind kind;
    BandStructure bands;          // for `kind`
    BandStructure schrodinger;
    BandStructure laplacian;
    EstimateReport estimates;
};

AnalysisResult analyze(const PeriodicGraphSpec& spec, MatrixKind kind, const SpectrumOptions& options);
std::string report_text(const AnalysisResult& result, const SpectrumOptions& options);
std::string compare_text(const StabilityResult& result, const SpectrumOptions& options);

/// Tab-separated columns theta_1..theta_d, lambda_1..lambda_nu with a header line.
std::string dispersion_table(const PeriodicGraphSpec& spec, MatrixKind kind,
                             const std::vector<std::vector<double>>& points);
std::string dispersion_grid_table(const PeriodicGraphSpec& spec, MatrixKind kind, const TorusGrid& grid,
                                  unsigned threads = 0);

std::string builtins_listing();

/// Exit codes: 0 all checks pass, 2 some check violated, 1 input error.
struct CommandResult {
    int exit_code = 0;
    std::string output;
    std::string error;
};

CommandResult cmd_analyze(const InputSource& input, MatrixKind kind, const SpectrumOptions& options);
CommandResult cmd_dispersion(const InputSource& input, MatrixKind kind, const SpectrumOptions& options,
                             const std::optional<std::string>& path, int samples);
CommandResult cmd_compare(const InputSource& a, const InputSource& b, const SpectrumOptions& options);
CommandResult cmd_builtins();

}  // namespace bandgraph::io
