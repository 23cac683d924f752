#include "fpulab/gibbs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace fpulab {

namespace {

// FPU bond potential V(r) = r^2/2 + r^3/6 + A r^4/24.
inline double bond_v(double r, double a) {
    const double r2 = r * r;
    return r2 / 2.0 + r2 * r / 6.0 + a * r2 * r2 / 24.0;
}

double smootherstep(double u) {
    u = std::clamp(u, 0.0, 1.0);
    return u * u * u * (u * (u * 6.0 - 15.0) + 10.0);
}

}  // namespace

void GibbsConfig::validate() const {
    chain.validate();
    if (!(beta > 0.0)) throw std::invalid_argument("gibbs: beta must be positive");
    if (chain.boundary != Boundary::dirichlet)
        throw std::invalid_argument("gibbs: Dirichlet boundary required");
    if (samples < 2) throw std::invalid_argument("gibbs: need at least 2 samples");
    if (thin < 1) throw std::invalid_argument("gibbs: thinning stride must be >= 1");
    if (burnin_sweeps < 0) throw std::invalid_argument("gibbs: negative burn-in");
    if (!(proposal_width > 0.0))
        throw std::invalid_argument("gibbs: proposal width must be positive");
}

GibbsSampler::GibbsSampler(const GibbsConfig& config)
    : config_(config),
      q_(config.chain.sites, 0.0),
      width_(config.proposal_width),
      rng_(config.seed) {
    config.validate();

    // burn-in with width adaptation every 50 sweeps towards acceptance 0.3-0.5
    const int window = 50;
    for (int s = 0; s < config_.burnin_sweeps; ++s) {
        sweep();
        if ((s + 1) % window == 0) {
            const double rate =
                static_cast<double>(accepted_) / static_cast<double>(proposed_);
            if (rate > 0.5) width_ *= 1.25;
            else if (rate < 0.3) width_ /= 1.25;
            accepted_ = proposed_ = 0;
        }
    }
    accepted_ = proposed_ = 0;
    const int check = std::max(window, config_.burnin_sweeps / 10);
    for (int s = 0; s < check; ++s) sweep();
    acceptance_rate_ =
        static_cast<double>(accepted_) / static_cast<double>(proposed_);
    if (acceptance_rate_ < 0.05 || acceptance_rate_ > 0.95)
        throw std::runtime_error(
            "gibbs: Metropolis acceptance rate " +
            std::to_string(acceptance_rate_) +
            " outside [0.05, 0.95] after adaptation");
}

void GibbsSampler::sweep() {
    const int m = config_.chain.sites;
    const double a = config_.chain.quartic;
    const double beta = config_.beta;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> prop(-width_, width_);
    for (int i = 0; i < m; ++i) {
        const double ql = i > 0 ? q_[i - 1] : 0.0;
        const double qr = i + 1 < m ? q_[i + 1] : 0.0;
        const double rl = ql - q_[i];
        const double rr = q_[i] - qr;
        const double delta = prop(rng_);
        const double du = bond_v(rl - delta, a) + bond_v(rr + delta, a) -
                          bond_v(rl, a) - bond_v(rr, a);
        ++proposed_;
        if (du <= 0.0 || unit(rng_) < std::exp(-beta * du)) {
            q_[i] += delta;
            ++accepted_;
        }
    }
}

LatticeState GibbsSampler::draw() {
    for (int s = 0; s < config_.thin; ++s) sweep();
    LatticeState out;
    out.q = q_;
    out.p.resize(q_.size());
    std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(config_.beta));
    for (double& v : out.p) v = gauss(rng_);
    out.t = 0.0;
    return out;
}

double ModeProfile::operator()(double x) const {
    switch (family) {
        case Family::constant:
            return amplitude;
        case Family::bump: {
            const double d = std::abs(x - center);
            if (d >= width) return 0.0;
            return amplitude * 0.5 * (1.0 + std::cos(M_PI * d / width));
        }
        case Family::plateau: {
            if (x <= lo || x >= hi) return 0.0;
            if (x < lo + edge) return amplitude * smootherstep((x - lo) / edge);
            if (x > hi - edge) return amplitude * smootherstep((hi - x) / edge);
            return amplitude;
        }
    }
    return 0.0;
}

bool ModeProfile::derivative_zero_at_origin() const {
    switch (family) {
        case Family::constant:
            return true;
        case Family::bump:
            // either the support starts at x > 0, or the bump is centered at
            // the origin where the cosine crest is flat
            return center - width >= 0.0 || center == 0.0;
        case Family::plateau:
            return lo >= 0.0;  // smootherstep edges have zero endpoint slope
    }
    return false;
}

ModeProfile ModeProfile::constant(double value) {
    ModeProfile p;
    p.family = Family::constant;
    p.amplitude = value;
    return p;
}

ModeProfile ModeProfile::raised_cosine(double center, double half_width,
                                       double amplitude) {
    ModeProfile p;
    p.family = Family::bump;
    p.center = center;
    p.width = half_width;
    p.amplitude = amplitude;
    return p;
}

ModeProfile ModeProfile::plateau(double lo, double hi, double edge,
                                 double amplitude) {
    ModeProfile p;
    p.family = Family::plateau;
    p.lo = lo;
    p.hi = hi;
    p.edge = edge;
    p.amplitude = amplitude;
    return p;
}

double phi_g(const ModeSpectrum& spectrum, const ModeProfile& profile) {
    const bool periodic = !spectrum.k.empty() && spectrum.k.front() < 1;
    const int n = periodic ? (static_cast<int>(spectrum.k.size()) - 2) / 2
                           : static_cast<int>(spectrum.k.size());
    double phi = 0.0;
    for (std::size_t i = 0; i < spectrum.k.size(); ++i) {
        const int a = std::abs(spectrum.k[i]);
        if (a < 1) continue;
        phi += profile(static_cast<double>(a) / (n + 1)) * spectrum.energy[i];
    }
    return phi;
}

double phi_g(const LatticeState& state, const ModeProfile& profile,
             const ChainParams& params) {
    return phi_g(mode_energies(state, params), profile);
}

EnsembleStats ensemble_stats(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("ensemble_stats: need >= 2 draws");

    EnsembleStats st;
    double sum = 0.0;
    for (double v : values) sum += v;
    st.mean = sum / static_cast<double>(n);

    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    if (*mn == *mx) {
        st.mean = *mn;
        st.variance = 0.0;
        st.degenerate = true;
        st.ess = static_cast<double>(n);
        st.autocorr = {1.0};
        return st;
    }

    std::vector<double> centered(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        centered[i] = values[i] - st.mean;
        ss += centered[i] * centered[i];
    }
    st.variance = ss / static_cast<double>(n);
    if (st.variance == 0.0) {
        st.degenerate = true;
        st.ess = static_cast<double>(n);
        st.autocorr = {1.0};
        return st;
    }

    // normalized autocorrelation; integrated time by Geyer-style truncation
    // at the first non-positive coefficient
    const std::size_t max_lag = std::min<std::size_t>(n / 4, 1000);
    st.autocorr.push_back(1.0);
    double tau = 1.0;
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double c = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i)
            c += centered[i] * centered[i + lag];
        const double rho = c / ss;
        if (rho <= 0.0) break;
        st.autocorr.push_back(rho);
        tau += 2.0 * rho;
    }
    st.ess = std::min(static_cast<double>(n), static_cast<double>(n) / tau);

    // batch-means standard error of the mean
    const std::size_t n_batches =
        std::max<std::size_t>(2, static_cast<std::size_t>(std::sqrt(double(n))));
    const std::size_t batch = n / n_batches;
    std::vector<double> means;
    for (std::size_t b = 0; b + 1 <= n_batches; ++b) {
        double bs = 0.0;
        for (std::size_t i = b * batch; i < (b + 1) * batch; ++i)
            bs += values[i];
        means.push_back(bs / static_cast<double>(batch));
    }
    double bm = 0.0;
    for (double v : means) bm += v;
    bm /= static_cast<double>(means.size());
    double bvar = 0.0;
    for (double v : means) bvar += (v - bm) * (v - bm);
    bvar /= static_cast<double>(means.size() - 1);
    st.std_error = std::sqrt(bvar / static_cast<double>(means.size()));
    return st;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

namespace {

// Evolves each drawn state, collecting the observable at the requested
// sample times; blow-ups are recorded as NaN rows and filtered by callers.
struct EnsembleRun {
    std::vector<std::vector<double>> values;  // trajectory x time
    int excluded = 0;
};

EnsembleRun run_ensemble(const std::vector<LatticeState>& draws,
                         const ChainParams& chain,
                         const IntegratorConfig& dynamics,
                         const std::vector<double>& times,
                         const ObservableFn& observable, int threads) {
    EnsembleRun run;
    run.values.assign(draws.size(),
                      std::vector<double>(times.size(),
                                          std::numeric_limits<double>::quiet_NaN()));
    std::atomic<int> excluded{0};
    parallel_for(static_cast<int>(draws.size()), threads, [&](int i) {
        LatticeState s = draws[i];
        try {
            double t_prev = 0.0;
            for (std::size_t j = 0; j < times.size(); ++j) {
                const double t = times[j];
                if (t > t_prev) {
                    IntegratorConfig leg = dynamics;
                    leg.total_time = t - t_prev;
                    leg.stride = 1 << 30;
                    s = evolve(s, chain, leg).final_state;
                    t_prev = t;
                }
                run.values[i][j] = observable(s);
            }
        } catch (const BlowupError&) {
            excluded.fetch_add(1);
            run.values[i].assign(times.size(),
                                 std::numeric_limits<double>::quiet_NaN());
        }
    });
    run.excluded = excluded.load();
    if (run.excluded > std::max<int>(1, static_cast<int>(draws.size()) / 100))
        throw std::runtime_error("ensemble run: more than 1% of trajectories blew up (" +
                                 std::to_string(run.excluded) + ")");
    return run;
}

std::vector<LatticeState> draw_ensemble(const GibbsConfig& gibbs, int count) {
    GibbsConfig cfg = gibbs;
    cfg.samples = std::max(cfg.samples, count);
    GibbsSampler sampler(cfg);
    std::vector<LatticeState> draws;
    draws.reserve(count);
    for (int i = 0; i < count; ++i) draws.push_back(sampler.draw());
    return draws;
}

}  // namespace

AutocorrCurve autocorrelation(const ObservableFn& observable,
                              const GibbsConfig& gibbs,
                              const IntegratorConfig& dynamics,
                              const std::vector<double>& times,
                              int trajectories, int threads) {
    if (times.empty() || times.front() < 0.0)
        throw std::invalid_argument("autocorrelation: times must be >= 0");
    if (!std::is_sorted(times.begin(), times.end()))
        throw std::invalid_argument("autocorrelation: times must be increasing");
    const std::vector<LatticeState> draws = draw_ensemble(gibbs, trajectories);
    const EnsembleRun run = run_ensemble(draws, gibbs.chain, dynamics, times,
                                         observable, threads);

    AutocorrCurve curve;
    curve.times = times;
    curve.excluded = run.excluded;

    // F(0) per surviving trajectory: time index of t=0 if present, else
    // evaluate on the draw directly
    std::vector<double> f0;
    std::vector<const std::vector<double>*> rows;
    for (std::size_t i = 0; i < run.values.size(); ++i) {
        if (std::isnan(run.values[i][0])) continue;
        rows.push_back(&run.values[i]);
        f0.push_back(times.front() == 0.0 ? run.values[i][0]
                                          : observable(draws[i]));
    }
    const std::size_t m = rows.size();
    double mean0 = 0.0;
    for (double v : f0) mean0 += v;
    mean0 /= static_cast<double>(m);

    for (std::size_t j = 0; j < times.size(); ++j) {
        std::vector<double> prod(m);
        for (std::size_t i = 0; i < m; ++i) prod[i] = f0[i] * (*rows[i])[j];
        double mp = 0.0;
        for (double v : prod) mp += v;
        mp /= static_cast<double>(m);
        double var = 0.0;
        for (double v : prod) var += (v - mp) * (v - mp);
        var /= static_cast<double>(m);
        curve.value.push_back(mp - mean0 * mean0);
        curve.std_error.push_back(std::sqrt(var / static_cast<double>(m)));
    }
    return curve;
}

AdiabaticResult adiabatic_probe(const ModeProfile& profile,
                                const GibbsConfig& gibbs,
                                const IntegratorConfig& dynamics,
                                double delta1, double horizon,
                                int trajectories, int threads) {
    if (!profile.derivative_zero_at_origin())
        throw std::invalid_argument("adiabatic_probe: profile must have g'(0) = 0");
    if (!(delta1 > 0.0))
        throw std::invalid_argument("adiabatic_probe: delta1 must be positive");

    const std::vector<LatticeState> draws = draw_ensemble(gibbs, trajectories);

    AdiabaticResult res;
    {
        std::vector<double> phis;
        phis.reserve(draws.size());
        for (const LatticeState& s : draws)
            phis.push_back(phi_g(s, profile, gibbs.chain));
        res.sigma_phi = std::sqrt(ensemble_stats(phis).variance);
    }

    const double sample_dt = dynamics.dt * dynamics.stride;
    std::vector<double> times{0.0};
    for (double t = sample_dt; t <= horizon * (1 + 1e-12); t += sample_dt)
        times.push_back(t);

    const ObservableFn obs = [&](const LatticeState& s) {
        return phi_g(s, profile, gibbs.chain);
    };
    const EnsembleRun run = run_ensemble(draws, gibbs.chain, dynamics, times,
                                         obs, threads);
    res.excluded = run.excluded;
    res.times = times;

    const double threshold = delta1 * res.sigma_phi;
    for (std::size_t j = 0; j < times.size(); ++j) {
        std::vector<double> drifts;
        int exceed = 0;
        for (const auto& row : run.values) {
            if (std::isnan(row[j])) continue;
            const double d = std::abs(row[j] - row[0]);
            drifts.push_back(d / res.sigma_phi);
            if (d >= threshold) ++exceed;
        }
        const double m = static_cast<double>(drifts.size());
        const double p = exceed / m;
        res.exceedance.push_back(p);
        res.exceedance_se.push_back(std::sqrt(p * (1.0 - p) / m));
        std::nth_element(drifts.begin(), drifts.begin() + drifts.size() / 2,
                         drifts.end());
        res.median_drift.push_back(drifts[drifts.size() / 2]);
    }

    // first crossing of median normalized drift through 0.2, interpolated
    for (std::size_t j = 1; j < times.size(); ++j) {
        if (res.median_drift[j] >= 0.2) {
            const double d0 = res.median_drift[j - 1];
            const double d1 = res.median_drift[j];
            const double frac = (0.2 - d0) / (d1 - d0);
            res.t_star = times[j - 1] + frac * (times[j] - times[j - 1]);
            res.t_star_reached = true;
            break;
        }
    }
    return res;
}

}  // namespace fpulab
