#include "fpulab/integrators.hpp"

#include <cmath>

namespace fpulab {

namespace {

constexpr double kBlowupLimit = 1e8;

// Yoshida triple-composition coefficients (w1, w0, w1).
const double kW1 = 1.0 / (2.0 - std::cbrt(2.0));
const double kW0 = 1.0 - 2.0 * kW1;

void force_into(const LatticeState& state, const ChainParams& params,
                std::vector<double>& f) {
    f = forces(state, params);
}

void verlet_substep(LatticeState& s, const ChainParams& params, double h,
                    std::vector<double>& f) {
    const int m = params.sites;
    force_into(s, params, f);
    for (int j = 0; j < m; ++j) s.p[j] += 0.5 * h * f[j];
    for (int j = 0; j < m; ++j) s.q[j] += h * s.p[j];
    force_into(s, params, f);
    for (int j = 0; j < m; ++j) s.p[j] += 0.5 * h * f[j];
}

bool finite_state(const LatticeState& s) {
    for (double v : s.q)
        if (!std::isfinite(v) || std::abs(v) > kBlowupLimit) return false;
    for (double v : s.p)
        if (!std::isfinite(v) || std::abs(v) > kBlowupLimit) return false;
    return true;
}

void step_in_place(LatticeState& s, const ChainParams& params,
                   const IntegratorConfig& config, std::vector<double>& f) {
    if (config.scheme == Scheme::verlet) {
        verlet_substep(s, params, config.dt, f);
    } else {
        verlet_substep(s, params, kW1 * config.dt, f);
        verlet_substep(s, params, kW0 * config.dt, f);
        verlet_substep(s, params, kW1 * config.dt, f);
    }
    s.t += config.dt;
}

}  // namespace

LatticeState step(const LatticeState& state, const ChainParams& params,
                  const IntegratorConfig& config) {
    config.validate();
    LatticeState s = state;
    std::vector<double> f;
    step_in_place(s, params, config, f);
    if (!finite_state(s)) throw BlowupError(s.t, {});
    return s;
}

EvolveResult evolve(const LatticeState& initial, const ChainParams& params,
                    const IntegratorConfig& config, const Observer& observer) {
    config.validate();
    const long long n_steps = std::llround(config.total_time / config.dt);

    EvolveResult result;
    result.trace.k = mode_indices(paper_mode_count(params), params.boundary);

    LatticeState s = initial;
    std::vector<double> f;

    auto sample = [&](const LatticeState& st) {
        result.trace.times.push_back(st.t);
        result.trace.energies.push_back(mode_energies(st, params).energy);
        if (config.store_snapshots) result.snapshots.push_back(st);
        if (observer) observer(st);
    };

    sample(s);
    for (long long i = 1; i <= n_steps; ++i) {
        step_in_place(s, params, config, f);
        if (!finite_state(s))
            throw BlowupError(s.t, std::move(result.trace));
        if (i % config.stride == 0 || i == n_steps) sample(s);
    }
    result.final_state = std::move(s);
    return result;
}

}  // namespace fpulab
