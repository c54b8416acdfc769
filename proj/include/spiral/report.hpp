#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spiral/bound.hpp"
#include "spiral/config.hpp"
#include "spiral/fd.hpp"

namespace spiral {

/// Columnar table, written as whitespace-separated columns under a
/// '# '-prefixed header line. Values are printed with 17 significant digits.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_table(const Table& table, const std::filesystem::path& file);
/// Reads a file written by write_table; the name is the file stem.
Table read_table(const std::filesystem::path& file);

struct Gate {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Report {
    std::string pipeline;
    nlohmann::json config;
    nlohmann::json results = nlohmann::json::object();
    std::vector<Table> tables;
    std::vector<Gate> gates;

    bool passed() const;
    void gate(std::string name, bool passed, std::string detail = {});
    nlohmann::json to_json() const;
};

struct ComparisonRow {
    double lambda = 0.0;
    double sigma = 0.0;
    double numerical_moment = 0.0;
    /// Extrapolation error budget of the moment.
    double moment_error = 0.0;
    double bound_total = 0.0;
    BoundReport bound_pieces;
    /// bound_total / (numerical_moment + moment_error); inf when the moment vanishes.
    double ratio = 0.0;
    /// NaN below sigma = 3/2.
    double asymptotic_bound = 0.0;
    /// Model lower bound with w = 0.
    double lower_bound_example = 0.0;
};

/// Eigenvalues below a cutoff on the two finest meshes plus a
/// truncation-radius check on the coarser one.
struct SpectrumRun {
    EigenResult fine;
    std::optional<EigenResult> coarse;
    std::optional<EigenResult> sensitivity;
    /// Values used for moments: extrapolated when a coarse mesh exists,
    /// else the fine eigenvalues with zero error.
    Extrapolation extrapolation;
    /// Largest relative change of a retained eigenvalue between r_max and
    /// sensitivity_factor * r_max (coarsest solved mesh).
    double sensitivity_change = 0.0;
};

/// Solves on the finest mesh first, then on the next coarser mesh with the
/// cutoff raised by 10% steps until it holds at least as many eigenvalues.
SpectrumRun solve_spectrum(const SpiralProfile& profile, const EigsConfig& eigs, double cutoff,
                           unsigned threads = 1, std::uint64_t seed = 20240611);

/// Rebuilds the cache with a larger theta_max until the threshold set at
/// 2 lambda_max ends inside the tabulated range.
GeometryCache build_cache_for(const SpiralProfile& profile, GeometryOptions options,
                              double lambda_max);

ComparisonRow make_comparison_row(const StripGeometry& strip, const Extrapolation& values,
                                  const BoundParams& params, const SupW& sup);

// Pipelines. Each fills `report` as it goes so a failure leaves the partial
// results in place.
void run_geometry(const RunConfig& config, Report& report);
void run_bound(const RunConfig& config, Report& report);
void run_horn(const RunConfig& config, Report& report);
void run_eigs(const RunConfig& config, Report& report);
void run_compare(const RunConfig& config, Report& report);
void run_multiarm(const RunConfig& config, Report& report);

const std::vector<std::string>& pipeline_names();
/// Runs the named pipeline. Throws ConfigError for an unknown name.
Report run_pipeline(const std::string& pipeline, const RunConfig& config);

/// Writes every table of the report as <dir>/<name>.dat.
std::vector<std::filesystem::path> emit_plot_data(const Report& report,
                                                  const std::filesystem::path& dir);

/// Runs the pipeline and writes report.json and the tables under out_dir;
/// on error writes the partial tables and failure_manifest.json instead.
/// Returns 0 iff the run completed and every gate passed.
int run(const std::string& pipeline, const RunConfig& config,
        const std::filesystem::path& out_dir);

}  // namespace spiral
