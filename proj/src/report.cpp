#include "spiral/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "spiral/errors.hpp"
#include "spiral/geometry.hpp"
#include "spiral/horn.hpp"
#include "spiral/numerics.hpp"
#include "spiral/parallel.hpp"

namespace spiral {

namespace {

using nlohmann::json;
constexpr const char* kModule = "cli_report";
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double max_lambda(const std::vector<double>& lambdas) {
    return lambdas.empty() ? 0.0 : *std::max_element(lambdas.begin(), lambdas.end());
}

void require_single_arm(const RunConfig& config, const std::string& pipeline) {
    if (config.arm_offsets.size() != 1) {
        throw ConfigError(kModule, "the " + pipeline +
                                       " pipeline handles one arm; use multiarm for several");
    }
}

json bound_json(const BoundReport& b) {
    return {{"sigma", b.params.sigma},
            {"lambda", b.params.lambda},
            {"variant", to_string(b.params.variant)},
            {"mode", to_string(b.params.mode)},
            {"prefactor", b.prefactor},
            {"integral_term", b.integral_term},
            {"c1", b.c1},
            {"c1_term", b.c1_term},
            {"c2_term", b.c2_term},
            {"total", b.total},
            {"sup_W", b.sup_W},
            {"s0", b.s0},
            {"threshold_empty", b.threshold.empty},
            {"s_star", b.threshold.s_star},
            {"width_integral", b.threshold.width_integral},
            {"multiple_crossings", b.threshold.multiple_crossings},
            {"s_star_2lambda", b.threshold_2lambda.s_star},
            {"width_integral_2lambda", b.threshold_2lambda.width_integral},
            {"central_area", b.central_area},
            {"central_area_error", b.central_area_error}};
}

json eigen_json(const EigenResult& r) {
    return {{"h", r.h},
            {"cutoff", r.cutoff},
            {"dimension", r.dimension},
            {"inertia_count", r.inertia_count},
            {"slices", r.slices},
            {"eigenvalues", r.eigenvalues},
            {"residuals", r.residuals}};
}

BoundParams params_for(const BoundConfig& b, double sigma, double lambda) {
    BoundParams p{sigma, lambda, b.variant, effective_mode(b, sigma)};
    p.validate();
    return p;
}

struct Job {
    double sigma;
    double lambda;
};

std::vector<Job> jobs_of(const BoundConfig& b) {
    std::vector<Job> jobs;
    for (double sigma : b.sigma) {
        for (double lambda : b.lambda) jobs.push_back({sigma, lambda});
    }
    return jobs;
}

double max_residual(const EigenResult& r) {
    double m = 0.0;
    for (double x : r.residuals) m = std::max(m, x);
    return m;
}

double relative_change(const std::vector<double>& a, const std::vector<double>& b,
                       std::size_t n) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(a[i] - b[i]) / a[i]);
    return change;
}

EigenResult solve_mesh(const SpiralProfile& profile, double h, double r_max, double cutoff,
                       const EigsConfig& eigs, unsigned threads, std::uint64_t seed) {
    const auto mask = build_mask(profile, h, r_max, threads);
    const auto A = assemble(mask);
    EigenOptions options;
    options.residual_tol = eigs.residual_tol;
    options.per_slice = eigs.per_slice;
    options.seed = seed;
    return eigenvalues_below(A, cutoff, options, h);
}

// Raises the cutoff by 10% steps until at least `count` eigenvalues are found.
EigenResult solve_covering(const SpiralProfile& profile, double h, double r_max, double cutoff,
                           std::size_t count, const EigsConfig& eigs, unsigned threads,
                           std::uint64_t seed) {
    for (int attempt = 0; attempt < 20; ++attempt) {
        auto r = solve_mesh(profile, h, r_max, cutoff, eigs, threads, seed);
        if (r.eigenvalues.size() >= count) return r;
        cutoff *= 1.1;
    }
    throw NumericalError(kModule, "coarse mesh never reached the fine eigenvalue count");
}

void spectrum_tables(const SpectrumRun& run, Report& report) {
    Table spectrum{"spectrum",
                   {"index", "fine", "coarse", "extrapolated", "error", "residual"},
                   {}};
    for (std::size_t i = 0; i < run.fine.eigenvalues.size(); ++i) {
        spectrum.rows.push_back({static_cast<double>(i), run.fine.eigenvalues[i],
                                 run.coarse ? run.coarse->eigenvalues[i] : kNaN,
                                 run.extrapolation.values[i], run.extrapolation.errors[i],
                                 run.fine.residuals[i]});
    }
    report.tables.push_back(std::move(spectrum));

    json eig{{"fine", eigen_json(run.fine)},
             {"extrapolated", run.extrapolation.values},
             {"extrapolation_errors", run.extrapolation.errors},
             {"sensitivity_change", run.sensitivity_change}};
    if (run.coarse) eig["coarse"] = eigen_json(*run.coarse);
    if (run.sensitivity) eig["sensitivity"] = eigen_json(*run.sensitivity);
    report.results["eigs"] = eig;
}

void spectrum_gates(const SpectrumRun& run, const EigsConfig& eigs, Report& report) {
    double worst = max_residual(run.fine);
    if (run.coarse) worst = std::max(worst, max_residual(*run.coarse));
    report.gate("residuals", worst <= eigs.residual_tol,
                "max residual " + format_double(worst));
    if (run.sensitivity) {
        report.gate("truncation_sensitivity", run.sensitivity_change <= eigs.sensitivity_tol,
                    "max relative change " + format_double(run.sensitivity_change));
    }
}

void geometry_table(const GeometryCache& cache, std::size_t points, const std::string& name,
                    Report& report) {
    Table t{name, {"s", "theta", "d", "gamma", "W"}, {}};
    if (points >= 2) {
        const double lo = cache.s0();
        const double hi = lo + 0.99 * (cache.s_end() - lo);
        for (double s : numerics::geometric_grid(lo, hi, points)) {
            t.rows.push_back({s, cache.theta_of_s(s), cache.d_of_s(s), cache.gamma_of_s(s),
                              potential_W(cache, s)});
        }
    }
    report.tables.push_back(std::move(t));
}

json cache_json(const GeometryCache& cache, const SupW& sup) {
    const auto area = cache.central_area();
    return {{"lag", cache.lag()},
            {"theta_max", cache.theta_max()},
            {"s_max", cache.s_max()},
            {"nodes", cache.theta_nodes().size()},
            {"s0", cache.s0()},
            {"theta0", cache.theta0()},
            {"sup_W", sup.value},
            {"sup_W_at", sup.s_at},
            {"central_area", area.area},
            {"central_area_error", area.std_error},
            {"central_area_samples", area.samples}};
}

std::vector<GeometryCache> arm_caches(const RunConfig& config, double lambda_max) {
    const auto profile = make_profile(config.profile);
    auto options = geometry_options(config);
    std::vector<GeometryCache> caches;
    for (double lag : arm_lags(config.arm_offsets)) {
        options.lag = lag;
        caches.push_back(build_cache_for(profile, options, lambda_max));
    }
    return caches;
}

void bound_rows(const std::vector<BoundReport>& reports, Table& t) {
    for (const auto& b : reports) {
        t.rows.push_back({b.params.sigma, b.params.lambda, b.total, b.integral_term, b.c1_term,
                          b.c2_term});
    }
}

}  // namespace

// ---------------------------------------------------------------------------

void write_table(const Table& table, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw Error(kModule, "cannot write " + file.string());
    out << '#';
    for (const auto& c : table.columns) out << ' ' << c;
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ' ';
            out << format_double(row[i]);
        }
        out << '\n';
    }
}

Table read_table(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(kModule, "cannot read " + file.string());
    Table t;
    t.name = file.stem().string();
    std::string line;
    if (!std::getline(in, line) || line.empty() || line[0] != '#') {
        throw Error(kModule, file.string() + " has no header line");
    }
    std::istringstream header(line.substr(1));
    for (std::string c; header >> c;) t.columns.push_back(c);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::vector<double> row;
        for (std::string f; fields >> f;) row.push_back(std::strtod(f.c_str(), nullptr));
        if (row.size() != t.columns.size()) {
            throw Error(kModule, file.string() + " has a row of the wrong width");
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

bool Report::passed() const {
    return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.passed; });
}

void Report::gate(std::string name, bool ok, std::string detail) {
    gates.push_back({std::move(name), ok, std::move(detail)});
}

json Report::to_json() const {
    json g = json::array();
    for (const auto& x : gates) g.push_back({{"name", x.name}, {"passed", x.passed}, {"detail", x.detail}});
    json files = json::array();
    for (const auto& t : tables) files.push_back(t.name + ".dat");
    return {{"pipeline", pipeline}, {"config", config}, {"results", results},
            {"gates", g},           {"passed", passed()}, {"tables", files}};
}

// ---------------------------------------------------------------------------

GeometryCache build_cache_for(const SpiralProfile& profile, GeometryOptions options,
                              double lambda_max) {
    for (int attempt = 0;; ++attempt) {
        auto cache = GeometryCache::build(profile, options);
        if (lambda_max <= 0.0) return cache;
        try {
            threshold_set(cache, 2.0 * lambda_max);
            return cache;
        } catch (const RangeError&) {
            if (attempt >= 6) throw;
        }
        options.theta_max *= 4.0;
    }
}

SpectrumRun solve_spectrum(const SpiralProfile& profile, const EigsConfig& eigs, double cutoff,
                           unsigned threads, std::uint64_t seed) {
    if (eigs.h.empty()) throw ConfigError(kModule, "no mesh sizes given");
    SpectrumRun run;
    const double h_fine = eigs.h.back();
    run.fine = solve_mesh(profile, h_fine, eigs.r_max, cutoff, eigs, threads, seed);
    const std::size_t n = run.fine.eigenvalues.size();

    const EigenResult* check_base = &run.fine;
    if (eigs.h.size() >= 2) {
        run.coarse = solve_covering(profile, eigs.h[eigs.h.size() - 2], eigs.r_max, cutoff, n,
                                    eigs, threads, seed);
        run.extrapolation = extrapolate(*run.coarse, run.fine);
        check_base = &*run.coarse;
    } else {
        run.extrapolation.values = run.fine.eigenvalues;
        run.extrapolation.errors.assign(n, 0.0);
        run.extrapolation.h_fine = h_fine;
    }

    if (eigs.sensitivity_factor > 0.0) {
        run.sensitivity = solve_covering(profile, check_base->h,
                                         eigs.r_max * eigs.sensitivity_factor, check_base->cutoff,
                                         n, eigs, threads, seed);
        run.sensitivity_change =
            relative_change(check_base->eigenvalues, run.sensitivity->eigenvalues, n);
    }
    return run;
}

ComparisonRow make_comparison_row(const StripGeometry& strip, const Extrapolation& values,
                                  const BoundParams& params, const SupW& sup) {
    ComparisonRow row;
    row.lambda = params.lambda;
    row.sigma = params.sigma;
    row.numerical_moment = moment(values.values, params.sigma, params.lambda);
    row.moment_error = moment_error_budget(values, params.sigma, params.lambda);
    row.bound_pieces = evaluate_bound(strip, params, sup);
    row.bound_total = row.bound_pieces.total;
    const double denom = row.numerical_moment + row.moment_error;
    row.ratio = denom > 0.0 ? row.bound_total / denom : std::numeric_limits<double>::infinity();
    row.asymptotic_bound =
        params.sigma >= 1.5 ? asymptotic_bound(strip, params.sigma, params.lambda) : kNaN;
    row.lower_bound_example =
        params.lambda > 1.0 ? lower_bound_example(params.sigma, params.lambda, 0.0) : kNaN;
    return row;
}

// ---------------------------------------------------------------------------

void run_geometry(const RunConfig& config, Report& report) {
    const auto profile = make_profile(config.profile);
    const auto caches = arm_caches(config, 0.0);
    try {
        const auto c = classify(profile, config.geometry.theta_max);
        report.results["class"] = to_string(c);
        report.gate("simple_spiral", true, to_string(c));
    } catch (const NotSimpleError& e) {
        report.results["class"] = nullptr;
        report.gate("simple_spiral", false, e.what());
    }
    json arms = json::array();
    for (std::size_t j = 0; j < caches.size(); ++j) {
        const auto sup = sup_W(caches[j]);
        arms.push_back(cache_json(caches[j], sup));
        const std::string name = caches.size() == 1 ? "geometry" : "geometry_arm" + std::to_string(j);
        geometry_table(caches[j], config.geometry.plot_points, name, report);
        if (config.geometry.central_area) {
            const auto area = caches[j].central_area();
            report.gate(name + "_central_area",
                        area.std_error <= config.geometry.area_rel_error * area.area,
                        format_double(area.area) + " +- " + format_double(area.std_error));
        }
    }
    report.results["arms"] = arms;
}

void run_bound(const RunConfig& config, Report& report) {
    require_single_arm(config, "bound");
    const auto profile = make_profile(config.profile);
    const auto cache =
        build_cache_for(profile, geometry_options(config), max_lambda(config.bound.lambda));
    const auto sup = sup_W(cache);
    report.results["geometry"] = cache_json(cache, sup);

    const auto jobs = jobs_of(config.bound);
    std::vector<BoundReport> bounds(jobs.size());
    std::vector<double> asym(jobs.size(), kNaN);
    std::vector<double> lower(jobs.size(), kNaN);
    parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
        const auto params = params_for(config.bound, jobs[i].sigma, jobs[i].lambda);
        bounds[i] = evaluate_bound(cache, params, sup);
        if (params.sigma >= 1.5) asym[i] = asymptotic_bound(cache, params.sigma, params.lambda);
        if (params.lambda > 1.0) lower[i] = lower_bound_example(params.sigma, params.lambda, 0.0);
    });

    Table t{"bound",
            {"sigma", "lambda", "total", "integral_term", "c1_term", "c2_term", "asymptotic",
             "lower_bound_example"},
            {}};
    json rows = json::array();
    bool positive = true;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& b = bounds[i];
        t.rows.push_back({b.params.sigma, b.params.lambda, b.total, b.integral_term, b.c1_term,
                          b.c2_term, asym[i], lower[i]});
        auto r = bound_json(b);
        r["asymptotic"] = asym[i];
        r["lower_bound_example"] = lower[i];
        rows.push_back(r);
        positive = positive && std::isfinite(b.total) && b.total > 0.0;
    }
    report.tables.push_back(std::move(t));
    report.results["bounds"] = rows;
    report.gate("bound_finite_positive", positive);
}

void run_horn(const RunConfig& config, Report& report) {
    const auto horn = make_horn(config.horn);
    const auto& lambdas = config.horn.lambda;
    const bool fd = config.horn.h > 0.0 && std::isfinite(horn.length());

    std::optional<SparseMatrix> A;
    if (fd) {
        const auto mask = build_mask(horn, config.horn.h);
        A = assemble(mask);
        report.results["fd_dimension"] = mask.active_count;
    }
    std::vector<double> weyl(lambdas.size()), lower(lambdas.size()), count(lambdas.size(), kNaN);
    parallel_for(lambdas.size(), config.threads, [&](std::size_t i) {
        weyl[i] = weyl_horn_count(horn, lambdas[i]);
        lower[i] = count_lower_estimate(horn, lambdas[i]);
        if (A) count[i] = static_cast<double>(inertia_count(*A, lambdas[i]));
    });

    Table t{"horn", {"lambda", "weyl", "lower_estimate", "fd_count", "ratio"}, {}};
    json rows = json::array();
    bool ordered = true;
    bool close = true;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double ratio = count[i] / weyl[i];
        t.rows.push_back({lambdas[i], weyl[i], lower[i], count[i], ratio});
        rows.push_back({{"lambda", lambdas[i]},
                        {"weyl", weyl[i]},
                        {"lower_estimate", lower[i]},
                        {"fd_count", count[i]},
                        {"ratio", ratio}});
        ordered = ordered && lower[i] <= weyl[i];
        if (fd && weyl[i] >= 50.0) close = close && ratio >= 0.7 && ratio <= 1.3;
    }
    report.tables.push_back(std::move(t));
    report.results["horn"] = rows;
    report.gate("lower_estimate_below_weyl", ordered);
    if (fd) report.gate("fd_count_near_weyl", close, "ratio within [0.7, 1.3] where weyl >= 50");
}

void run_eigs(const RunConfig& config, Report& report) {
    require_single_arm(config, "eigs");
    const auto profile = make_profile(config.profile);
    const double lambda_max = max_lambda(config.bound.lambda);
    Table moments{"moment", {"sigma", "lambda", "moment", "error"}, {}};
    if (lambda_max <= 0.0) {
        report.tables.push_back(Table{"spectrum",
                                      {"index", "fine", "coarse", "extrapolated", "error",
                                       "residual"},
                                      {}});
        report.tables.push_back(std::move(moments));
        return;
    }
    const auto run = solve_spectrum(profile, config.eigs, config.eigs.cutoff_factor * lambda_max,
                                    config.threads, config.seed);
    spectrum_tables(run, report);
    for (const auto& job : jobs_of(config.bound)) {
        moments.rows.push_back({job.sigma, job.lambda,
                                moment(run.extrapolation.values, job.sigma, job.lambda),
                                moment_error_budget(run.extrapolation, job.sigma, job.lambda)});
    }
    report.tables.push_back(std::move(moments));
    spectrum_gates(run, config.eigs, report);
}

void run_compare(const RunConfig& config, Report& report) {
    require_single_arm(config, "compare");
    const auto profile = make_profile(config.profile);
    const double lambda_max = max_lambda(config.bound.lambda);
    const auto cache = build_cache_for(profile, geometry_options(config), lambda_max);
    const auto sup = sup_W(cache);
    report.results["geometry"] = cache_json(cache, sup);

    SpectrumRun run;
    if (lambda_max > 0.0) {
        run = solve_spectrum(profile, config.eigs, config.eigs.cutoff_factor * lambda_max,
                             config.threads, config.seed);
        spectrum_tables(run, report);
        spectrum_gates(run, config.eigs, report);
    }

    const auto jobs = jobs_of(config.bound);
    std::vector<ComparisonRow> rows(jobs.size());
    parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
        rows[i] = make_comparison_row(cache, run.extrapolation,
                                      params_for(config.bound, jobs[i].sigma, jobs[i].lambda),
                                      sup);
    });

    Table bound{"bound",
                {"sigma", "lambda", "total", "integral_term", "c1_term", "c2_term", "asymptotic",
                 "lower_bound_example"},
                {}};
    Table mom{"moment", {"sigma", "lambda", "moment", "error"}, {}};
    Table ratio{"ratio", {"sigma", "lambda", "ratio"}, {}};
    json out = json::array();
    bool dominated = true;
    for (const auto& r : rows) {
        const auto& b = r.bound_pieces;
        bound.rows.push_back({r.sigma, r.lambda, r.bound_total, b.integral_term, b.c1_term,
                              b.c2_term, r.asymptotic_bound, r.lower_bound_example});
        mom.rows.push_back({r.sigma, r.lambda, r.numerical_moment, r.moment_error});
        ratio.rows.push_back({r.sigma, r.lambda, r.ratio});
        out.push_back({{"lambda", r.lambda},
                       {"sigma", r.sigma},
                       {"numerical_moment", r.numerical_moment},
                       {"moment_error", r.moment_error},
                       {"bound_total", r.bound_total},
                       {"bound_pieces", bound_json(b)},
                       {"ratio", r.ratio},
                       {"asymptotic_bound", r.asymptotic_bound},
                       {"lower_bound_example", r.lower_bound_example}});
        if (r.numerical_moment > 0.0) dominated = dominated && r.ratio >= 1.0;
    }
    report.tables.push_back(std::move(bound));
    report.tables.push_back(std::move(mom));
    report.tables.push_back(std::move(ratio));
    report.results["comparison"] = out;
    report.gate("bound_dominates_moment", dominated,
                "bound >= moment + error budget at every (sigma, Lambda)");
}

void run_multiarm(const RunConfig& config, Report& report) {
    const auto caches = arm_caches(config, max_lambda(config.bound.lambda));
    const auto jobs = jobs_of(config.bound);
    std::vector<MultiArmReport> results(jobs.size());
    parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
        results[i] = multi_arm_bound(caches, params_for(config.bound, jobs[i].sigma, jobs[i].lambda));
    });

    const std::vector<std::string> cols{"sigma", "lambda", "total", "integral_term", "c1_term",
                                        "c2_term"};
    std::vector<Table> arms;
    for (std::size_t j = 0; j < caches.size(); ++j) {
        arms.push_back(Table{"bound_arm" + std::to_string(j), cols, {}});
    }
    Table total{"bound_total", {"sigma", "lambda", "total", "c_tilde", "asymptotic"}, {}};
    json out = json::array();
    bool sums = true;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& r = results[i];
        double sum = 0.0;
        json per_arm = json::array();
        for (std::size_t j = 0; j < r.arms.size(); ++j) {
            bound_rows({r.arms[j]}, arms[j]);
            per_arm.push_back(bound_json(r.arms[j]));
            sum += r.arms[j].total;
        }
        const double asym = jobs[i].sigma >= 1.5 ? r.asymptotic : kNaN;
        total.rows.push_back({jobs[i].sigma, jobs[i].lambda, r.total, r.c_tilde, asym});
        out.push_back({{"sigma", jobs[i].sigma},
                       {"lambda", jobs[i].lambda},
                       {"total", r.total},
                       {"c_tilde", r.c_tilde},
                       {"asymptotic", asym},
                       {"arms", per_arm}});
        sums = sums && std::abs(sum - r.total) <= 1e-12 * std::abs(r.total);
    }
    for (auto& t : arms) report.tables.push_back(std::move(t));
    report.tables.push_back(std::move(total));
    json geo = json::array();
    for (std::size_t j = 0; j < caches.size(); ++j) {
        geo.push_back({{"lag", caches[j].lag()}, {"s0", caches[j].s0()}});
    }
    report.results["arms"] = geo;
    report.results["multiarm"] = out;
    report.gate("total_is_sum_of_arms", sums);
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& pipeline_names() {
    static const std::vector<std::string> names{"geometry", "bound",   "horn",
                                                "eigs",     "compare", "multiarm"};
    return names;
}

namespace {

void dispatch(const std::string& pipeline, const RunConfig& config, Report& report) {
    static const std::map<std::string, std::function<void(const RunConfig&, Report&)>> table{
        {"geometry", run_geometry}, {"bound", run_bound},     {"horn", run_horn},
        {"eigs", run_eigs},         {"compare", run_compare}, {"multiarm", run_multiarm}};
    const auto it = table.find(pipeline);
    if (it == table.end()) throw ConfigError(kModule, "unknown pipeline '" + pipeline + "'");
    it->second(config, report);
}

std::string error_type(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const RangeError*>(&e)) return "RangeError";
    if (dynamic_cast<const GeometryError*>(&e)) return "GeometryError";
    if (dynamic_cast<const AssumptionViolation*>(&e)) return "AssumptionViolation";
    if (dynamic_cast<const NotSimpleError*>(&e)) return "NotSimpleError";
    if (dynamic_cast<const NumericalError*>(&e)) return "NumericalError";
    if (dynamic_cast<const MissedEigenvalueError*>(&e)) return "MissedEigenvalueError";
    if (dynamic_cast<const Error*>(&e)) return "Error";
    return "std::exception";
}

void write_json(const json& j, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw Error(kModule, "cannot write " + file.string());
    out << j.dump(2) << '\n';
}

}  // namespace

Report run_pipeline(const std::string& pipeline, const RunConfig& config) {
    Report report;
    report.pipeline = pipeline;
    report.config = to_json(config);
    dispatch(pipeline, config, report);
    return report;
}

std::vector<std::filesystem::path> emit_plot_data(const Report& report,
                                                  const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> files;
    for (const auto& t : report.tables) {
        files.push_back(dir / (t.name + ".dat"));
        write_table(t, files.back());
    }
    return files;
}

int run(const std::string& pipeline, const RunConfig& config,
        const std::filesystem::path& out_dir) {
    Report report;
    report.pipeline = pipeline;
    report.config = to_json(config);
    std::filesystem::create_directories(out_dir);
    try {
        dispatch(pipeline, config, report);
    } catch (const std::exception& e) {
        const auto* err = dynamic_cast<const Error*>(&e);
        const std::string module = err ? err->module() : "unknown";
        std::cerr << "[" << module << "] " << error_type(e) << ": " << e.what() << '\n';
        json written = json::array();
        for (const auto& f : emit_plot_data(report, out_dir)) written.push_back(f.filename().string());
        json manifest{{"pipeline", pipeline},
                      {"error", {{"module", module}, {"type", error_type(e)}, {"message", e.what()}}},
                      {"partial_results", report.results},
                      {"gates", report.to_json()["gates"]},
                      {"files", written},
                      {"config", report.config}};
        if (const auto* ne = dynamic_cast<const NumericalError*>(&e)) {
            manifest["error"]["best_estimate"] = ne->best_estimate();
            manifest["error"]["error_bound"] = ne->error_bound();
        }
        write_json(manifest, out_dir / "failure_manifest.json");
        return 2;
    }
    emit_plot_data(report, out_dir);
    write_json(report.to_json(), out_dir / "report.json");
    for (const auto& g : report.gates) {
        std::cerr << (g.passed ? "gate ok   " : "gate FAIL ") << g.name
                  << (g.detail.empty() ? "" : ": " + g.detail) << '\n';
    }
    return report.passed() ? 0 : 1;
}

}  // namespace spiral
