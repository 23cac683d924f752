#include "fpulab/chain.hpp"

#include <cmath>
#include <numeric>

namespace fpulab {

namespace {

void check_state(const LatticeState& state, const ChainParams& params) {
    params.validate();
    if (state.q.size() != state.p.size())
        throw std::invalid_argument("lattice state: q and p length mismatch");
    if (static_cast<int>(state.q.size()) != params.sites)
        throw std::invalid_argument(
            "lattice state length " + std::to_string(state.q.size()) +
            " does not match chain size " + std::to_string(params.sites));
}

void check_exp_range(const std::vector<double>& r) {
    for (std::size_t j = 0; j < r.size(); ++j) {
        if (std::abs(r[j]) > 700.0)
            throw std::domain_error("toda: exp overflow at bond " +
                                    std::to_string(j) +
                                    " (|r| = " + std::to_string(std::abs(r[j])) +
                                    " > 700)");
    }
}

// FPU bond potential derivative V'(r) = r + r^2/2 + A r^3/6.
inline double fpu_dv(double r, double a) {
    return r + r * r / 2.0 + a * r * r * r / 6.0;
}

}  // namespace

void ChainParams::validate() const {
    const int min_sites = boundary == Boundary::periodic ? 2 : 1;
    if (sites < min_sites)
        throw std::invalid_argument("chain: need at least " +
                                    std::to_string(min_sites) + " sites");
}

std::vector<double> bond_differences(const LatticeState& state,
                                     const ChainParams& params) {
    check_state(state, params);
    const int m = params.sites;
    std::vector<double> r(params.bond_count());
    if (params.boundary == Boundary::periodic) {
        for (int j = 0; j < m; ++j) r[j] = state.q[j] - state.q[(j + 1) % m];
    } else {
        // bond 0 joins the fixed left wall to particle 0, bond M the last
        // particle to the fixed right wall
        r[0] = -state.q[0];
        for (int j = 1; j < m; ++j) r[j] = state.q[j - 1] - state.q[j];
        r[m] = state.q[m - 1];
    }
    return r;
}

double fpu_energy(const LatticeState& state, const ChainParams& params) {
    const std::vector<double> r = bond_differences(state, params);
    const double a = params.quartic;
    double e = 0.0;
    for (double pj : state.p) e += pj * pj / 2.0;
    for (double rj : r) {
        const double r2 = rj * rj;
        e += r2 / 2.0 + r2 * rj / 6.0 + a * r2 * r2 / 24.0;
    }
    return e;
}

std::vector<double> fpu_forces(const LatticeState& state,
                               const ChainParams& params) {
    const std::vector<double> r = bond_differences(state, params);
    const int m = params.sites;
    const double a = params.quartic;
    std::vector<double> f(m);
    if (params.boundary == Boundary::periodic) {
        for (int j = 0; j < m; ++j)
            f[j] = fpu_dv(r[(j + m - 1) % m], a) - fpu_dv(r[j], a);
    } else {
        // particle j sits between bonds j and j+1
        for (int j = 0; j < m; ++j) f[j] = fpu_dv(r[j], a) - fpu_dv(r[j + 1], a);
    }
    return f;
}

double toda_energy(const LatticeState& state, const ChainParams& params) {
    const std::vector<double> r = bond_differences(state, params);
    check_exp_range(r);
    double e = 0.0;
    for (double pj : state.p) e += pj * pj / 2.0;
    for (double rj : r) e += std::exp(rj);
    return e;
}

std::vector<double> toda_forces(const LatticeState& state,
                                const ChainParams& params) {
    const std::vector<double> r = bond_differences(state, params);
    check_exp_range(r);
    const int m = params.sites;
    std::vector<double> f(m);
    if (params.boundary == Boundary::periodic) {
        for (int j = 0; j < m; ++j)
            f[j] = std::exp(r[(j + m - 1) % m]) - std::exp(r[j]);
    } else {
        for (int j = 0; j < m; ++j) f[j] = std::exp(r[j]) - std::exp(r[j + 1]);
    }
    return f;
}

double toda_fpu_gap(const LatticeState& state, const ChainParams& params) {
    if (params.boundary != Boundary::periodic)
        throw std::invalid_argument("toda_fpu_gap requires a periodic chain");
    // per-bond evaluation of (A-1) r^4/24 - sum_{l>=5} r^l / l!; the naive
    // difference of total energies cancels catastrophically at small amplitude
    double gap = 0.0;
    for (double r : bond_differences(state, params)) {
        const double r2 = r * r;
        double tail;  // sum_{l>=5} r^l / l!
        if (std::abs(r) < 0.5) {
            tail = 0.0;
            double term = r2 * r2 * r / 120.0;
            for (int l = 5; l < 40 && term != 0.0; ++l) {
                tail += term;
                term *= r / (l + 1);
            }
        } else {
            tail = std::expm1(r) - r - r2 / 2.0 - r2 * r / 6.0 - r2 * r2 / 24.0;
        }
        gap += (params.quartic - 1.0) * r2 * r2 / 24.0 - tail;
    }
    return gap;
}

LatticeState project_zero_mean(const LatticeState& state) {
    LatticeState out = state;
    if (out.q.empty()) return out;
    const double n = static_cast<double>(out.q.size());
    // iterate until the computed mean is exactly zero so the projection is
    // bitwise idempotent
    auto project = [n](std::vector<double>& v) {
        for (int pass = 0; pass < 10; ++pass) {
            const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
            if (m == 0.0) break;
            for (double& x : v) x -= m;
        }
    };
    project(out.q);
    project(out.p);
    return out;
}

std::vector<double> forces(const LatticeState& state,
                           const ChainParams& params) {
    return params.model == Model::fpu ? fpu_forces(state, params)
                                      : toda_forces(state, params);
}

double energy(const LatticeState& state, const ChainParams& params) {
    return params.model == Model::fpu ? fpu_energy(state, params)
                                      : toda_energy(state, params);
}

}  // namespace fpulab
