#include "fpulab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

namespace fpulab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Single-mode (+-k for periodic) initial datum with the given energy per
// excited mode, as a position excitation.
LatticeState packet_initial_state(const ChainParams& params, int mode,
                                  double mode_energy) {
    const int n = paper_mode_count(params);
    ModeCoeffs c;
    c.k = mode_indices(n, params.boundary);
    c.phat.assign(c.k.size(), 0.0);
    c.qhat.assign(c.k.size(), 0.0);
    const std::vector<double> w = frequencies(n, params.boundary);
    for (std::size_t i = 0; i < c.k.size(); ++i)
        if (std::abs(c.k[i]) == mode)
            c.qhat[i] = std::sqrt(2.0 * mode_energy) / w[i];
    return from_modes(c, params);
}

}  // namespace

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: malformed line: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config: empty key in line: " + line);
        cfg.values_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

std::string Config::get_string(const std::string& key,
                               std::optional<std::string> fallback) const {
    auto it = values_.find(key);
    if (it != values_.end()) return it->second;
    if (fallback) return *fallback;
    throw std::invalid_argument("config: missing key " + key);
}

double Config::get_double(const std::string& key,
                          std::optional<double> fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) {
        if (fallback) return *fallback;
        throw std::invalid_argument("config: missing key " + key);
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: key " + key +
                                    " is not a number: " + it->second);
    }
}

int Config::get_int(const std::string& key, std::optional<int> fallback) const {
    if (!has(key) && fallback) return *fallback;
    const double v = get_double(key);
    const int i = static_cast<int>(std::llround(v));
    if (std::abs(v - i) > 1e-9)
        throw std::invalid_argument("config: key " + key + " is not an integer");
    return i;
}

std::uint64_t Config::get_uint64(const std::string& key,
                                 std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    return std::stoull(get_string(key));
}

std::vector<double> Config::get_list(const std::string& key) const {
    std::istringstream in(get_string(key));
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        if (!tok.empty() && tok.back() == ',') tok.pop_back();
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw std::invalid_argument("config: empty list " + key);
    return out;
}

void Config::set(const std::string& key, const std::string& value) {
    values_[key] = value;
}

std::uint64_t Config::hash() const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a offset basis
    auto mix = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= '\n';
        h *= 1099511628211ull;
    };
    for (const auto& [k, v] : values_) {
        mix(k);
        mix(v);
    }
    return h;
}

ChainParams Config::chain(const std::string& section) const {
    ChainParams c;
    c.sites = get_int(section + ".sites");
    const std::string b = get_string(section + ".boundary", "periodic");
    if (b == "periodic") c.boundary = Boundary::periodic;
    else if (b == "dirichlet") c.boundary = Boundary::dirichlet;
    else throw std::invalid_argument("config: unknown boundary " + b);
    c.quartic = get_double(section + ".quartic", 1.0);
    const std::string m = get_string(section + ".model", "fpu");
    if (m == "fpu") c.model = Model::fpu;
    else if (m == "toda") c.model = Model::toda;
    else throw std::invalid_argument("config: unknown model " + m);
    c.validate();
    return c;
}

IntegratorConfig Config::integrator(const std::string& section) const {
    IntegratorConfig ic;
    ic.dt = get_double(section + ".dt", 0.05);
    const std::string s = get_string(section + ".scheme", "yoshida4");
    if (s == "verlet") ic.scheme = Scheme::verlet;
    else if (s == "yoshida4") ic.scheme = Scheme::yoshida4;
    else throw std::invalid_argument("config: unknown scheme " + s);
    ic.total_time = get_double(section + ".total_time", 0.0);
    ic.stride = get_int(section + ".stride", 1);
    ic.validate();
    return ic;
}

GibbsConfig Config::gibbs(const std::string& section) const {
    GibbsConfig g;
    g.beta = get_double(section + ".beta", 100.0);
    g.chain = chain(section + ".chain");
    g.burnin_sweeps = get_int(section + ".burnin_sweeps", 2000);
    g.samples = get_int(section + ".samples", 1000);
    g.thin = get_int(section + ".thin", 10);
    g.proposal_width = get_double(section + ".proposal_width", 0.5);
    g.seed = get_uint64(section + ".seed", 0);
    g.validate();
    return g;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns,
                     std::uint64_t config_hash)
    : columns_(columns.size()) {
    std::filesystem::create_directories(
        std::filesystem::path(path).parent_path());
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open output file " + path);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(config_hash));
    out_ << "# config_hash=" << buf << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_)
        throw std::invalid_argument("csv: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format17(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

namespace experiments {

namespace {

std::vector<std::string> abs_k_columns(int n, const std::string& prefix) {
    std::vector<std::string> cols;
    for (int k = 1; k <= n; ++k) cols.push_back(prefix + std::to_string(k));
    return cols;
}

std::vector<double> aggregate_abs_k(const std::vector<int>& ks,
                                    const std::vector<double>& energies,
                                    int n) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const int a = std::abs(ks[i]);
        if (a >= 1 && a <= n) out[a - 1] += energies[i];
    }
    return out;
}

}  // namespace

FpuRecurrenceResult run_fpu_recurrence(const Config& cfg,
                                       const std::string& out_dir) {
    const ChainParams chain = cfg.chain();
    IntegratorConfig ic = cfg.integrator();
    const int n = paper_mode_count(chain);
    const int mode = cfg.get_int("initial.mode", 1);
    const double specific = cfg.get_double("initial.specific_energy");
    // total energy specific*N split over the excited modes
    const int excited = chain.boundary == Boundary::periodic ? 2 : 1;
    const double mode_energy = specific * n / excited;
    const std::uint64_t h = cfg.hash();

    LatticeState s0 = mode_energy > 0.0
                          ? packet_initial_state(chain, mode, mode_energy)
                          : LatticeState::zero(chain.sites);

    FpuRecurrenceResult res;
    EnergyTrace trace;
    trace.k = mode_indices(n, chain.boundary);
    bool blown_up = false;
    std::string blowup_note;
    try {
        trace = evolve(s0, chain, ic).trace;
    } catch (const BlowupError& e) {
        trace = e.partial_trace();
        blown_up = true;
        blowup_note = e.what();
    }

    {
        auto cols = abs_k_columns(n, "E");
        cols.insert(cols.begin(), "t");
        CsvWriter csv(out_dir + "/mode_energies.csv", cols, h);
        for (std::size_t i = 0; i < trace.times.size(); ++i) {
            std::vector<double> row =
                aggregate_abs_k(trace.k, trace.energies[i], n);
            row.insert(row.begin(), trace.times[i]);
            csv.row(row);
        }
    }

    // time averages on a coarse grid of horizons
    {
        auto cols = abs_k_columns(n, "avgE");
        cols.insert(cols.begin(), "T");
        CsvWriter csv(out_dir + "/time_averages.csv", cols, h);
        const int points = 100;
        for (int i = 1; i <= points; ++i) {
            const double T = trace.times.back() * i / points;
            std::vector<double> avg = time_average(trace, T);
            std::vector<double> row = aggregate_abs_k(trace.k, avg, n);
            row.insert(row.begin(), T);
            csv.row(row);
        }
    }

    // recurrence of the initially excited mode
    std::vector<double> e_mode(trace.times.size());
    for (std::size_t i = 0; i < trace.times.size(); ++i)
        e_mode[i] =
            aggregate_abs_k(trace.k, trace.energies[i], n)[mode - 1];
    res.e1_initial = e_mode.front();
    bool dipped = false;
    for (std::size_t i = 0; i < e_mode.size(); ++i) {
        if (!dipped && res.e1_initial > 0.0 &&
            e_mode[i] < 0.5 * res.e1_initial)
            dipped = true;
        else if (dipped && e_mode[i] > res.recurrence_ratio * res.e1_initial) {
            res.recurrence_ratio = e_mode[i] / res.e1_initial;
            res.recurrence_time = trace.times[i];
        }
    }

    res.final_averages =
        aggregate_abs_k(trace.k, time_average(trace, trace.times.back()), n);
    try {
        res.packet = packet_fit(res.final_averages);
    } catch (const std::invalid_argument&) {
        res.packet = {};
    }
    double total = 0.0;
    for (double e : res.final_averages) total += e;
    res.n_eff_final =
        total > 0.0 ? spectral_entropy(res.final_averages).n_eff : 0.0;

    {
        CsvWriter csv(out_dir + "/recurrence_report.csv",
                      {"e1_initial", "recurrence_time", "recurrence_ratio",
                       "packet_sigma", "packet_r2", "n_eff_final"},
                      h);
        csv.row({res.e1_initial, res.recurrence_time, res.recurrence_ratio,
                 res.packet.sigma, res.packet.r_squared, res.n_eff_final});
    }

    if (blown_up) {
        CsvWriter csv(out_dir + "/error_record.csv", {"blowup_time"}, h);
        csv.row({trace.times.empty() ? 0.0 : trace.times.back()});
        throw BlowupError(trace.times.empty() ? 0.0 : trace.times.back(),
                          std::move(trace));
    }
    return res;
}

KdvCompareResult run_kdv_compare(const Config& cfg, const std::string& out_dir) {
    const std::uint64_t h = cfg.hash();
    const int grid = cfg.get_int("kdv.grid", 256);
    const double dtau = cfg.get_double("kdv.dtau", 1e-4) * 256.0 / grid;
    const double t_f = cfg.get_double("scan.t_f", 1.0);
    const double amplitude = cfg.get_double("profile.amplitude", 1.0);
    const int snapshots = cfg.get_int("scan.snapshots", 25);
    const double quartic = cfg.get_double("scan.quartic", 1.0);
    IntegratorConfig ic = cfg.integrator();

    std::vector<double> n_list = cfg.get_list("scan.n_values");

    KdvCompareResult res;
    res.min_packet_sigma = 1e300;
    std::vector<double> log_mu, log_err;

    CsvWriter scan_csv(out_dir + "/mu_scan.csv",
                       {"n", "mu", "max_error", "min_sigma"}, h);

    for (double n_val : n_list) {
        const int n = static_cast<int>(n_val);
        const ModulationParams mp(1.0 / n);
        const double mu = mp.mu;
        ChainParams chain{.sites = 2 * n + 2, .boundary = Boundary::periodic,
                          .quartic = quartic, .model = Model::fpu};

        KdVField f0 = KdVField::zero(grid);
        KdVField g0 = KdVField::zero(grid);
        for (int i = 0; i < grid; ++i) {
            const double y = 2.0 * i / grid;
            f0.u[i] = amplitude * std::cos(M_PI * y);
            g0.u[i] = amplitude * std::cos(M_PI * y);
        }

        const LatticeState s0 = lattice_from_profiles(f0, g0, mp, chain);
        const double horizon = t_f / (mu * mu * mu);
        IntegratorConfig run = ic;
        run.total_time = horizon;
        run.store_snapshots = true;
        run.stride = std::max<int>(
            1, static_cast<int>(std::llround(horizon / ic.dt)) / snapshots);

        const EvolveResult ev = evolve(s0, chain, run);
        KdVReference ref(f0, g0, mp, chain, horizon * 1.01, dtau);
        const std::vector<ErrorPoint> curve =
            compare_fpu_kdv(ev.snapshots, chain, ref);

        CsvWriter err_csv(out_dir + "/error_curve_n" + std::to_string(n) +
                              ".csv",
                          {"t", "sup_error"}, h);
        double max_err = 0.0;
        for (const ErrorPoint& pt : curve) {
            err_csv.row({pt.t, pt.error});
            max_err = std::max(max_err, pt.error);
        }

        // packet shape along the run
        double min_sigma = 1e300;
        for (std::size_t i = 0; i < ev.trace.times.size(); ++i) {
            std::vector<double> ek =
                aggregate_abs_k(ev.trace.k, ev.trace.energies[i], n);
            for (double& e : ek) e /= n;  // specific energies
            const PacketFit fit = packet_fit(ek);
            min_sigma = std::min(min_sigma, fit.sigma);
            // smallest C such that E_k <= C (mu^4 e^{-sigma k} + mu^5)
            for (int k = 1; k <= n; ++k) {
                const double bound =
                    std::pow(mu, 4) * std::exp(-fit.sigma * k) +
                    std::pow(mu, 5);
                res.max_specific_tail =
                    std::max(res.max_specific_tail, ek[k - 1] / bound);
            }
        }
        res.min_packet_sigma = std::min(res.min_packet_sigma, min_sigma);

        res.lattice_n.push_back(n);
        res.max_error.push_back(max_err);
        scan_csv.row({double(n), mu, max_err, min_sigma});
        log_mu.push_back(std::log(mu));
        log_err.push_back(std::log(max_err));
    }

    if (log_mu.size() >= 2) res.order = fit_line(log_mu, log_err).slope;

    CsvWriter summary(out_dir + "/kdv_summary.csv",
                      {"order", "min_packet_sigma", "max_specific_tail"}, h);
    summary.row({res.order, res.min_packet_sigma, res.max_specific_tail});
    return res;
}

TodaDriftResult run_toda_drift(const Config& cfg, const std::string& out_dir) {
    const std::uint64_t h = cfg.hash();
    IntegratorConfig ic = cfg.integrator();
    const int snapshots = cfg.get_int("snapshots.count", 21);
    const double sigma = cfg.get_double("drift.sigma", 0.25);

    TodaDriftResult res;

    auto packet_run = [&](const ChainParams& chain, double mode_energy,
                          double total_time, double dt) {
        IntegratorConfig run = ic;
        run.dt = dt;
        run.total_time = total_time;
        run.store_snapshots = true;
        run.stride = std::max<int>(
            1, static_cast<int>(std::llround(total_time / dt)) / snapshots);
        const LatticeState s0 = packet_initial_state(chain, 1, mode_energy);
        return evolve(s0, chain, run);
    };

    // 1. Toda-flow Lax drift at reference settings, plus a dt/2 control run
    {
        const int n = cfg.get_int("reference.n", 15);
        const double specific = cfg.get_double("reference.specific_energy", 1e-4);
        const double T = cfg.get_double("reference.t", 1e4);
        ChainParams chain{.sites = 2 * n + 2, .boundary = Boundary::periodic,
                          .quartic = 1.0, .model = Model::toda};
        const double mode_energy = specific * n / 2.0;

        const EvolveResult full = packet_run(chain, mode_energy, T, ic.dt);
        const EvolveResult half = packet_run(chain, mode_energy, T, ic.dt / 2);
        const auto drift_full = spectrum_drift(full.snapshots, chain);
        const auto drift_half = spectrum_drift(half.snapshots, chain);

        CsvWriter csv(out_dir + "/lax_drift.csv",
                      {"t", "drift_dt", "drift_half_dt"}, h);
        for (std::size_t i = 0;
             i < std::min(drift_full.size(), drift_half.size()); ++i) {
            csv.row({drift_full[i].t, drift_full[i].drift,
                     drift_half[i].drift});
            res.toda_drift = std::max(res.toda_drift, drift_full[i].drift);
            res.toda_drift_half_dt =
                std::max(res.toda_drift_half_dt, drift_half[i].drift);
        }

        // packet profile over the long horizon: max_k E_k e^{2 sigma k}/mu^4
        const double packet_t = cfg.get_double("packet.t", 1e5);
        const EvolveResult lng = packet_run(chain, mode_energy, packet_t, ic.dt);
        const double mu4 = std::pow(1.0 / n, 4);
        for (const auto& row : lng.trace.energies) {
            const std::vector<double> ek = aggregate_abs_k(lng.trace.k, row, n);
            for (int k = 1; k <= n; ++k)
                res.packet_weighted_max =
                    std::max(res.packet_weighted_max,
                             (ek[k - 1] / n) * std::exp(2.0 * sigma * k) / mu4);
        }
    }

    // 2. FPU flow, A = 1 vs A = 2, paired runs
    {
        const int n = cfg.get_int("pair.n", 15);
        const double r = cfg.get_double("pair.r", 1.0);
        const double T = cfg.get_double("pair.t", 1e4);
        const double mu4 = std::pow(1.0 / n, 4);
        const double mode_energy = n * r * r * mu4;  // specific E = R^2 mu^4
        CsvWriter csv(out_dir + "/a_scan.csv", {"t", "drift_a1", "drift_a2"}, h);
        std::vector<DriftPoint> d1, d2;
        for (double a : {1.0, 2.0}) {
            ChainParams chain{.sites = 2 * n + 2,
                              .boundary = Boundary::periodic,
                              .quartic = a, .model = Model::fpu};
            const EvolveResult ev = packet_run(chain, mode_energy, T, ic.dt);
            auto drift = spectrum_drift(ev.snapshots, chain);
            (a == 1.0 ? d1 : d2) = std::move(drift);
        }
        for (std::size_t i = 0; i < std::min(d1.size(), d2.size()); ++i) {
            csv.row({d1[i].t, d1[i].drift, d2[i].drift});
            res.fpu_drift_a1 = std::max(res.fpu_drift_a1, d1[i].drift);
            res.fpu_drift_a2 = std::max(res.fpu_drift_a2, d2[i].drift);
        }
    }

    // 3. mu-scan of the weighted action drift plateau under FPU, A = 2
    {
        const std::vector<double> n_list = cfg.has("scan.n_values")
                                               ? cfg.get_list("scan.n_values")
                                               : std::vector<double>{16, 32, 64};
        const double r = cfg.get_double("scan.r", 1.0);
        const double a = cfg.get_double("scan.quartic", 2.0);
        const double t_factor = cfg.get_double("scan.t_factor", 1.0);
        CsvWriter csv(out_dir + "/mu_scan_drift.csv",
                      {"n", "mu", "drift_plateau"}, h);
        std::vector<double> lm, ld;
        for (double n_val : n_list) {
            const int n = static_cast<int>(n_val);
            const double mu = 1.0 / n;
            ChainParams chain{.sites = 2 * n + 2,
                              .boundary = Boundary::periodic,
                              .quartic = a, .model = Model::fpu};
            const double mode_energy = n * r * r * std::pow(mu, 4);
            const double T = t_factor / (mu * mu * mu);
            const EvolveResult ev = packet_run(chain, mode_energy, T, ic.dt);
            const auto drift = weighted_action_drift(ev.snapshots, chain, sigma);
            double plateau = 0.0;
            for (std::size_t i = drift.size() / 2; i < drift.size(); ++i)
                plateau = std::max(plateau, drift[i].drift);
            csv.row({double(n), mu, plateau});
            res.scan_n.push_back(n);
            res.scan_drift.push_back(plateau);
            lm.push_back(std::log(mu));
            ld.push_back(std::log(plateau));
        }
        if (lm.size() >= 2) res.scan_exponent = fit_line(lm, ld).slope;
    }

    CsvWriter summary(out_dir + "/toda_summary.csv",
                      {"toda_drift", "toda_drift_half_dt", "fpu_drift_a1",
                       "fpu_drift_a2", "scan_exponent", "packet_weighted_max"},
                      h);
    summary.row({res.toda_drift, res.toda_drift_half_dt, res.fpu_drift_a1,
                 res.fpu_drift_a2, res.scan_exponent, res.packet_weighted_max});
    return res;
}

GibbsAdiabaticResult run_gibbs_adiabatic(const Config& cfg,
                                         const std::string& out_dir) {
    const std::uint64_t h = cfg.hash();
    IntegratorConfig ic = cfg.integrator();
    const std::vector<double> betas = cfg.has("probe.beta_values")
                                          ? cfg.get_list("probe.beta_values")
                                          : std::vector<double>{25, 50, 100};
    const double delta1 = cfg.get_double("probe.delta1", 1.0);
    const int trajectories = cfg.get_int("probe.trajectories", 200);
    const double horizon_factor = cfg.get_double("probe.horizon_factor", 4.0);
    const int threads = cfg.get_int("experiment.threads", 1);

    ModeProfile profile = ModeProfile::raised_cosine(
        cfg.get_double("profile.center", 0.25),
        cfg.get_double("profile.width", 0.2),
        cfg.get_double("profile.amplitude", 1.0));
    const std::string family = cfg.get_string("profile.family", "bump");
    if (family == "constant")
        profile = ModeProfile::constant(cfg.get_double("profile.amplitude", 1.0));
    else if (family == "plateau")
        profile = ModeProfile::plateau(cfg.get_double("profile.lo", 0.2),
                                       cfg.get_double("profile.hi", 0.7),
                                       cfg.get_double("profile.edge", 0.1),
                                       cfg.get_double("profile.amplitude", 1.0));

    GibbsAdiabaticResult res;
    std::vector<double> fit_beta, fit_tstar;
    CsvWriter tstar_csv(out_dir + "/t_star.csv",
                        {"beta", "t_star", "sigma_phi",
                         "exceedance_at_quarter_beta"},
                        h);

    for (double beta : betas) {
        GibbsConfig gc = cfg.gibbs("gibbs");
        gc.beta = beta;
        const double horizon = horizon_factor * beta;
        const AdiabaticResult probe = adiabatic_probe(
            profile, gc, ic, delta1, horizon, trajectories, threads);

        CsvWriter csv(out_dir + "/exceedance_beta" +
                          std::to_string(static_cast<int>(beta)) + ".csv",
                      {"t", "exceedance", "std_error", "median_drift"}, h);
        for (std::size_t i = 0; i < probe.times.size(); ++i)
            csv.row({probe.times[i], probe.exceedance[i],
                     probe.exceedance_se[i], probe.median_drift[i]});

        // exceedance sampled at t = beta/4
        double p_quarter = 0.0;
        for (std::size_t i = 0; i < probe.times.size(); ++i)
            if (probe.times[i] <= beta / 4.0) p_quarter = probe.exceedance[i];
        res.betas.push_back(beta);
        res.exceedance_at_quarter_beta.push_back(p_quarter);
        const double tstar = probe.t_star_reached
                                 ? probe.t_star
                                 : std::numeric_limits<double>::quiet_NaN();
        res.t_star.push_back(tstar);
        tstar_csv.row({beta, tstar, probe.sigma_phi, p_quarter});
        if (probe.t_star_reached) {
            fit_beta.push_back(beta);
            fit_tstar.push_back(probe.t_star);
        }
    }

    if (fit_beta.size() >= 2) {
        const LineFit fit = fit_line(fit_beta, fit_tstar);
        res.slope = fit.slope;
        res.r_squared = fit.r_squared;
    }

    // autocorrelation of Phi_g at the largest beta, coarse time grid
    {
        GibbsConfig gc = cfg.gibbs("gibbs");
        gc.beta = betas.back();
        const ModeProfile prof = profile;
        const ObservableFn obs = [prof, gc](const LatticeState& s) {
            return phi_g(s, prof, gc.chain);
        };
        std::vector<double> times;
        const double horizon = horizon_factor * betas.back();
        for (int i = 0; i <= 20; ++i) times.push_back(horizon * i / 20.0);
        const AutocorrCurve ac = autocorrelation(
            obs, gc, ic, times,
            cfg.get_int("probe.autocorr_trajectories", trajectories), threads);
        CsvWriter csv(out_dir + "/autocorrelation.csv",
                      {"t", "c_phi", "std_error"}, h);
        for (std::size_t i = 0; i < ac.times.size(); ++i)
            csv.row({ac.times[i], ac.value[i], ac.std_error[i]});
    }

    CsvWriter summary(out_dir + "/gibbs_summary.csv",
                      {"slope", "r_squared"}, h);
    summary.row({res.slope, res.r_squared});
    return res;
}

}  // namespace experiments

}  // namespace fpulab
