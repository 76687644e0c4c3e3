#include "pwlab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include <json.hpp>

#include "pwlab/bohmian.hpp"
#include "pwlab/correlations.hpp"
#include "pwlab/csv.hpp"
#include "pwlab/defaults.hpp"
#include "pwlab/errors.hpp"
#include "pwlab/measurement_chain.hpp"
#include "pwlab/two_slit.hpp"

namespace pwlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
    T v{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw ConfigError("cannot parse value '" + text + "' for " + what);
    return v;
}

} // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::map<std::string, std::string> entries;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " is not key=value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + " has an empty key");
        if (!entries.emplace(key, value).second)
            throw ConfigError("duplicate config key '" + key + "'");
    }
    return entries;
}

std::pair<double, double> parse_domain(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw ConfigError("domain must be MIN,MAX");
    const double lo = parse_number<double>(trim(text.substr(0, comma)), "domain");
    const double hi = parse_number<double>(trim(text.substr(comma + 1)), "domain");
    return {lo, hi};
}

ScenarioConfig resolve_config(const std::string& scenario,
                              const std::map<std::string, std::string>& file_entries,
                              const ConfigOverrides& flags) {
    static const std::set<std::string> known_scenarios = {
        "neumaier-correlations", "measurement-chain", "ghose-two-slit", "equivariance"};
    if (!known_scenarios.count(scenario))
        throw ConfigError("unknown scenario '" + scenario + "'");
    static const std::set<std::string> known_keys = {"seed",   "grid-n", "nmax",   "tau-frac",
                                                     "samples", "domain", "out",    "slit-k",
                                                     "slit-a",  "slit-l"};
    for (const auto& [key, value] : file_entries)
        if (!known_keys.count(key)) throw ConfigError("unknown config key '" + key + "'");

    ScenarioConfig c;
    c.scenario = scenario;
    c.seed = defaults::seed;
    c.grid_n = scenario == "measurement-chain" ? defaults::grid_n_measurement : defaults::grid_n;
    c.nmax = defaults::nmax;
    c.samples = scenario == "neumaier-correlations" ? defaults::samples_correlations
                : scenario == "ghose-two-slit"      ? defaults::samples_ghose
                : scenario == "equivariance"        ? defaults::samples_equivariance
                                                    : 0;
    c.domain_min = defaults::domain_min;
    c.domain_max = defaults::domain_max;
    c.tau_frac = defaults::tau_frac;
    c.slit_k = defaults::slit_k;
    c.slit_a = defaults::slit_a;
    c.slit_l = defaults::slit_l;
    c.out_dir = "out";

    auto file = [&](const char* key) -> const std::string* {
        const auto it = file_entries.find(key);
        return it == file_entries.end() ? nullptr : &it->second;
    };
    if (const std::string* v = file("seed")) c.seed = parse_number<std::uint64_t>(*v, "seed");
    if (const std::string* v = file("grid-n")) c.grid_n = parse_number<int>(*v, "grid-n");
    if (const std::string* v = file("nmax")) c.nmax = parse_number<int>(*v, "nmax");
    if (const std::string* v = file("tau-frac")) c.tau_frac = parse_number<double>(*v, "tau-frac");
    if (const std::string* v = file("samples")) c.samples = parse_number<int>(*v, "samples");
    if (const std::string* v = file("domain")) std::tie(c.domain_min, c.domain_max) = parse_domain(*v);
    if (const std::string* v = file("out")) c.out_dir = *v;
    if (const std::string* v = file("slit-k")) c.slit_k = parse_number<double>(*v, "slit-k");
    if (const std::string* v = file("slit-a")) c.slit_a = parse_number<double>(*v, "slit-a");
    if (const std::string* v = file("slit-l")) c.slit_l = parse_number<double>(*v, "slit-l");

    if (flags.seed) c.seed = *flags.seed;
    if (flags.grid_n) c.grid_n = *flags.grid_n;
    if (flags.nmax) c.nmax = *flags.nmax;
    if (flags.tau_frac) c.tau_frac = *flags.tau_frac;
    if (flags.samples) c.samples = *flags.samples;
    if (flags.domain) std::tie(c.domain_min, c.domain_max) = *flags.domain;
    if (flags.out_dir) c.out_dir = *flags.out_dir;

    const bool oscillator = scenario != "ghose-two-slit";
    const int max_grid = scenario == "measurement-chain" ? 256 : 1024;
    if (c.grid_n < 16 || c.grid_n > max_grid)
        throw ConfigError("grid-n must lie in [16, " + std::to_string(max_grid) + "] for " + scenario);
    if (c.nmax < 1 || c.nmax >= c.grid_n)
        throw ConfigError("nmax must lie in [1, grid-n - 1]");
    if (!std::isfinite(c.domain_min) || !std::isfinite(c.domain_max) || !(c.domain_min < c.domain_max))
        throw ConfigError("domain must satisfy min < max");
    if (oscillator &&
        std::abs(c.domain_min + c.domain_max) > 1e-9 * (c.domain_max - c.domain_min))
        throw ConfigError("oscillator scenarios need a symmetric domain (min = -max)");
    if (!(c.tau_frac >= 0.0 && c.tau_frac <= 2.0))
        throw ConfigError("tau-frac must lie in [0, 2]");
    const int min_samples = scenario == "ghose-two-slit"      ? 100
                            : scenario == "measurement-chain" ? 0
                                                              : 1000;
    if (c.samples < min_samples)
        throw ConfigError("samples must be at least " + std::to_string(min_samples) + " for " + scenario);
    SlitParams{c.slit_k, c.slit_a, c.slit_l, 1.0, 1.0}.validate();
    if (c.out_dir.empty()) throw ConfigError("output directory must not be empty");
    return c;
}

bool RunReport::all_pass() const {
    return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.pass; });
}

namespace {

Metric check(const std::string& name, double value, double target, double tolerance) {
    Metric m;
    m.name = name;
    m.value = value;
    m.target = target;
    m.tolerance = tolerance;
    m.pass = std::isfinite(value) && std::abs(value - target) <= tolerance;
    m.informational = false;
    return m;
}

Metric info(const std::string& name, double value) {
    Metric m;
    m.name = name;
    m.value = value;
    m.pass = true;
    m.informational = true;
    return m;
}

nlohmann::ordered_json config_json(const ScenarioConfig& c) {
    nlohmann::ordered_json j;
    j["scenario"] = c.scenario;
    j["seed"] = c.seed;
    j["grid_n"] = c.grid_n;
    j["nmax"] = c.nmax;
    j["samples"] = c.samples;
    j["domain_min"] = c.domain_min;
    j["domain_max"] = c.domain_max;
    j["tau_frac"] = c.tau_frac;
    j["slit_k"] = c.slit_k;
    j["slit_a"] = c.slit_a;
    j["slit_l"] = c.slit_l;
    j["out_dir"] = c.out_dir;
    return j;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed on " + path);
}

void write_report(const RunReport& rep, const Error* err) {
    nlohmann::ordered_json j;
    j["scenario"] = rep.config.scenario;
    j["defaults_version"] = defaults::version;
    j["config"] = config_json(rep.config);
    nlohmann::ordered_json metrics = nlohmann::ordered_json::array();
    for (const Metric& m : rep.metrics) {
        nlohmann::ordered_json e;
        e["name"] = m.name;
        e["value"] = m.value;
        if (m.informational) {
            e["target"] = nullptr;
            e["tolerance"] = nullptr;
        } else {
            e["target"] = m.target;
            e["tolerance"] = m.tolerance;
        }
        e["pass"] = m.pass;
        e["informational"] = m.informational;
        metrics.push_back(e);
    }
    j["metrics"] = metrics;
    j["all_pass"] = err == nullptr && rep.all_pass();
    if (err != nullptr) {
        j["error"] = {{"kind", err->kind()}, {"message", err->what()}};
    }
    j["wall_time_s"] = rep.wall_time_s;
    write_json(rep.config.out_dir + "/report.json", j);
}

// Second moment of |psi|^2 under the cell convention.
double second_moment(const WaveFunction1D& psi) {
    double q = 0.0;
    for (int i = 0; i < psi.grid.size(); ++i) {
        const double x = psi.grid.point(i);
        q += x * x * std::norm(psi.amp[i]);
    }
    return q * psi.grid.spacing();
}

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    v.back() = hi;
    return v;
}

WaveFunction1D two_state_superposition(const OscillatorParams& params, const Grid1D& grid) {
    const WaveFunction1D g0 = ho_eigenstate(0, params, grid);
    const WaveFunction1D g1 = ho_eigenstate(1, params, grid);
    WaveFunction1D psi{grid, std::vector<cdouble>(grid.size()), 0.0};
    const double inv = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < grid.size(); ++i) psi.amp[i] = (g0.amp[i] + g1.amp[i]) * inv;
    psi.normalize();
    return psi;
}

void write_distribution_csv(const std::string& path, const TwoTimeJointDistribution& dist) {
    CsvWriter csv(path, "x,xp,p");
    const int n = dist.grid.size();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            csv.row({dist.grid.point(i), dist.grid.point(j),
                     dist.p[static_cast<std::size_t>(i) * n + j]});
}

void run_neumaier(const ScenarioConfig& c, RunReport& rep) {
    const OscillatorParams params;
    const Grid1D grid(c.domain_min, c.domain_max, c.grid_n);
    const HOEigenbasis basis_tr = HOEigenbasis::truncated(params, grid, c.nmax);
    const HOEigenbasis basis_full = HOEigenbasis::complete(params, grid);
    const WaveFunction1D psi0 = ho_eigenstate(0, params, grid);
    const double T = params.period();
    const double half = 0.5 * T;
    const double tau = c.tau_frac * T;
    const double x2 = second_moment(psi0);

    const DensityOperator rho = DensityOperator::pure(psi0);
    const TwoTimeJointDistribution dist_half = joint_two_time_distribution(rho, 0.0, half, basis_full);
    const double corr_half = correlation_from_distribution(dist_half);
    rep.metrics.push_back(check("quantum_corr_halfT", corr_half, -x2, 1e-6));

    const double heis_half = heisenberg_two_time_expectation(psi0, 0.0, half, basis_tr);
    rep.metrics.push_back(check("heisenberg_corr_halfT", heis_half, -x2, 1e-6));

    const BohmianCorrelation bohm =
        bohmian_two_time_expectation(psi0, 0.0, half, params, c.samples, c.seed, &basis_tr);
    rep.metrics.push_back(check("bohmian_corr_halfT", bohm.quadrature, x2, 1e-6));
    rep.metrics.push_back(check("bohmian_corr_halfT_mc", bohm.value, x2, 0.01));

    // U(T/2)^dag X U(T/2) + X should vanish entrywise in the eigenbasis.
    const std::vector<double> xmat = position_matrix(basis_tr);
    const int m = basis_tr.nstates();
    const double ih = 1.0 / params.hbar;
    double dev = 0.0;
    for (int n = 0; n < m; ++n)
        for (int l = 0; l < m; ++l) {
            const cdouble rot =
                std::polar(1.0, (basis_tr.energy(n) - basis_tr.energy(l)) * half * ih);
            const double x_nl = xmat[static_cast<std::size_t>(n) * m + l];
            dev = std::max(dev, std::abs(rot * x_nl + x_nl));
        }
    rep.metrics.push_back(check("heisenberg_identity_max_abs_dev", dev, 0.0, 1e-8));

    if (c.tau_frac == 0.5) {
        rep.metrics.push_back(info("sequential_corr_tau", corr_half));
        rep.metrics.push_back(info("heisenberg_corr_tau", heis_half));
        rep.metrics.push_back(info("ket_deficit_max", dist_half.ket_deficit_max));
        write_distribution_csv(c.out_dir + "/distribution.csv", dist_half);
    } else {
        const TwoTimeJointDistribution dist_tau =
            joint_two_time_distribution(rho, 0.0, tau, basis_full);
        rep.metrics.push_back(info("sequential_corr_tau", correlation_from_distribution(dist_tau)));
        rep.metrics.push_back(
            info("heisenberg_corr_tau", heisenberg_two_time_expectation(psi0, 0.0, tau, basis_tr)));
        rep.metrics.push_back(info("ket_deficit_max", dist_half.ket_deficit_max));
        write_distribution_csv(c.out_dir + "/distribution.csv", dist_tau);
    }
}

double pointer_correlation(const PointerJointDistribution& dist, const Grid1D& grid) {
    double acc = 0.0;
    for (int a = 0; a < dist.n; ++a) {
        double row = 0.0;
        const double* pr = dist.p.data() + static_cast<std::size_t>(a) * dist.n;
        for (int b = 0; b < dist.n; ++b) row += grid.point(b) * pr[b];
        acc += grid.point(a) * row;
    }
    return acc;
}

void write_pointer_csv(const std::string& path, const PointerJointDistribution& dist,
                       const Grid1D& grid) {
    CsvWriter csv(path, "x,xp,p");
    for (int a = 0; a < dist.n; ++a)
        for (int b = 0; b < dist.n; ++b)
            csv.row({grid.point(a), grid.point(b), dist.p[static_cast<std::size_t>(a) * dist.n + b]});
}

void run_measurement(const ScenarioConfig& c, RunReport& rep) {
    const OscillatorParams params;
    const Grid1D grid(c.domain_min, c.domain_max, c.grid_n);
    const HOEigenbasis basis = HOEigenbasis::complete(params, grid);
    const WaveFunction1D psi0 = ho_eigenstate(0, params, grid);
    const double T = params.period();
    const double tau = c.tau_frac * T;
    const double x2 = second_moment(psi0);

    auto pipeline = [&](double t) {
        GlobalState s = prepare_global(psi0);
        s = apply_first_measurement(s);
        s = evolve_between_measurements(s, t, basis);
        s = apply_second_measurement(s);
        return s;
    };

    const GlobalState chain = pipeline(tau);
    const PointerJointDistribution pointer = joint_pointer_distribution(chain);
    const DensityOperator rho = DensityOperator::pure(psi0);
    const TwoTimeJointDistribution trace = joint_two_time_distribution(rho, 0.0, tau, basis);

    double dev = 0.0;
    for (std::size_t idx = 0; idx < pointer.p.size(); ++idx)
        dev = std::max(dev, std::abs(pointer.p[idx] - trace.p[idx]));
    rep.metrics.push_back(check("pipeline_vs_trace_max_abs_dev", dev, 0.0, 1e-8));

    double corr_pipe, corr_trace;
    if (c.tau_frac == 0.5) {
        corr_pipe = pointer_correlation(pointer, grid);
        corr_trace = correlation_from_distribution(trace);
    } else {
        const double half = 0.5 * T;
        corr_pipe = pointer_correlation(joint_pointer_distribution(pipeline(half)), grid);
        corr_trace = correlation_from_distribution(
            joint_two_time_distribution(rho, 0.0, half, basis));
    }
    rep.metrics.push_back(check("corr_sum_pipeline_halfT", corr_pipe, -x2, 1e-5));
    rep.metrics.push_back(check("corr_sum_trace_halfT", corr_trace, -x2, 1e-5));
    rep.metrics.push_back(check("pointer_total_prob_dev", std::abs(pointer.total() - 1.0), 0.0, 1e-8));
    rep.metrics.push_back(info("branch_deficit_max", chain.branch_deficit_max));

    write_pointer_csv(c.out_dir + "/pipeline_distribution.csv", pointer, grid);
    write_distribution_csv(c.out_dir + "/trace_distribution.csv", trace);
}

void run_ghose(const ScenarioConfig& c, RunReport& rep) {
    const SlitParams slit{c.slit_k, c.slit_a, c.slit_l, 1.0, 1.0};
    const GhoseCheckReport scan = ghose_claim_check(slit, c.samples, c.seed);
    const double scale = slit.sum_rate() * 2.0 * slit.window();

    rep.metrics.push_back(check("sum_identity_max_abs_dev", scan.analytic_max_abs_dev, 0.0,
                                1e-12 * scale));
    rep.metrics.push_back(check("fd_identity_max_abs_dev", scan.fd_max_abs_dev, 0.0, 1e-8 * scale));
    rep.metrics.push_back(info("fd_identity_median_abs_dev", scan.fd_median_abs_dev));
    rep.metrics.push_back(check("nonvanishing_sum_fraction", scan.nonvanishing_fraction, 1.0, 0.0));
    rep.metrics.push_back(check("skipped_node_fraction", scan.skipped_fraction, 0.0, 0.05));

    // Sum trajectory against the exponential law. The start keeps the pair
    // separation safely inside the first interference node over [0, 1].
    const double node_sep = std::numbers::pi * slit.L / (2.0 * slit.k * slit.a);
    const double s0 = 0.1;
    const double d0 = -std::min(0.2, 0.25 * node_sep * std::exp(-slit.sum_rate()));
    const PairConfiguration start{0.5 * (s0 - d0), 0.5 * (s0 + d0)};
    const std::vector<double> times = linspace(0.0, 1.0, 101);
    const PairTrajectory traj = integrate_pair_trajectories(start, slit, 1.0, 1e-10, times);
    double rel_dev = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double expected = s0 * std::exp(slit.sum_rate() * traj.times[i]);
        rel_dev = std::max(rel_dev, std::abs(traj.x1[i] + traj.x2[i] - expected) / expected);
    }
    rep.metrics.push_back(check("sum_trajectory_max_rel_dev", rel_dev, 0.0, 1e-6));

    {
        CsvWriter csv(c.out_dir + "/velocity_field.csv", "x1,x2,v1,v2,vsum,predicted_vsum");
        for (const GhoseSample& s : scan.samples)
            csv.row({s.x1, s.x2, s.v1, s.v2, s.vsum, s.predicted_vsum});
    }
    {
        CsvWriter csv(c.out_dir + "/pair_trajectory.csv", "member,t,x");
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            csv.row({1.0, traj.times[i], traj.x1[i]});
        for (std::size_t i = 0; i < traj.times.size(); ++i)
            csv.row({2.0, traj.times[i], traj.x2[i]});
    }
}

void run_equivariance(const ScenarioConfig& c, RunReport& rep) {
    const OscillatorParams params;
    const Grid1D grid(c.domain_min, c.domain_max, c.grid_n);
    const HOEigenbasis basis = HOEigenbasis::truncated(params, grid, c.nmax);
    const double T = params.period();

    const WaveFunction1D ground = ho_eigenstate(0, params, grid);
    const WaveFunction1D super = two_state_superposition(params, grid);
    const WaveFunction1D displaced = displaced_ground_state(2.0, params, grid);

    rep.metrics.push_back(
        check("ks_ground", equivariance_check(ground, T, c.samples, c.seed, basis), 0.0, 0.03));
    rep.metrics.push_back(check("ks_superposition_halfT",
                                equivariance_check(super, 0.5 * T, c.samples, c.seed + 1, basis),
                                0.0, 0.03));
    rep.metrics.push_back(check("ks_displaced_fullT",
                                equivariance_check(displaced, T, c.samples, c.seed + 2, basis),
                                0.0, 0.03));

    // O(n^{-1/2}) convergence: quadrupling the ensemble should halve the
    // median KS distance over a fixed seed family.
    const int n_small = c.samples / 4;
    std::vector<double> ks_small, ks_big;
    for (int f = 0; f < 5; ++f) {
        const std::uint64_t fseed = c.seed + 1000 * (f + 1);
        ks_small.push_back(equivariance_check(super, 0.5 * T, n_small, fseed, basis));
        ks_big.push_back(equivariance_check(super, 0.5 * T, c.samples, fseed, basis));
    }
    std::sort(ks_small.begin(), ks_small.end());
    std::sort(ks_big.begin(), ks_big.end());
    const double ratio = ks_small[2] / ks_big[2];
    rep.metrics.push_back(
        check("ks_scaling_log2_ratio", std::log2(ratio), 1.0, std::log2(1.5)));

    // Stationary-state trajectories must not move.
    const Ensemble stat = sample_ensemble(ground, 100, c.seed + 7);
    const SpectralEvolution ground_source(basis, ground);
    const std::vector<double> times = linspace(0.0, T, 65);
    double dev = 0.0;
    for (double x0 : stat.initial_positions) {
        const Trajectory tr = integrate_trajectory(x0, ground_source, 0.0, T, 1e-9, times);
        for (double x : tr.positions) dev = std::max(dev, std::abs(x - x0));
    }
    rep.metrics.push_back(check("ground_constancy_max_abs_dev", dev, 0.0, 1e-9));

    // Trajectory bundle for the superposition ensemble's leading members.
    const int bundle = std::min(200, c.samples);
    const Ensemble ens = sample_ensemble(super, bundle, c.seed + 1);
    const SpectralEvolution super_source(basis, super);
    const std::vector<double> bundle_times = linspace(0.0, 0.5 * T, 33);
    CsvWriter csv(c.out_dir + "/trajectories.csv", "member,t,x");
    for (int member = 0; member < bundle; ++member) {
        const Trajectory tr = integrate_trajectory(ens.initial_positions[member], super_source,
                                                   0.0, 0.5 * T, 1e-9, bundle_times);
        for (std::size_t i = 0; i < tr.times.size(); ++i)
            csv.row({static_cast<double>(member), tr.times[i], tr.positions[i]});
    }
}

} // namespace

RunReport run_scenario(const ScenarioConfig& config) {
    RunReport rep;
    rep.config = config;
    std::filesystem::create_directories(config.out_dir);
    const auto t_begin = std::chrono::steady_clock::now();
    try {
        if (config.scenario == "neumaier-correlations") run_neumaier(config, rep);
        else if (config.scenario == "measurement-chain") run_measurement(config, rep);
        else if (config.scenario == "ghose-two-slit") run_ghose(config, rep);
        else if (config.scenario == "equivariance") run_equivariance(config, rep);
        else throw ConfigError("unknown scenario '" + config.scenario + "'");
    } catch (const Error& e) {
        rep.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
        write_report(rep, &e);
        throw;
    }
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
    write_report(rep, nullptr);
    return rep;
}

} // namespace pwlab
