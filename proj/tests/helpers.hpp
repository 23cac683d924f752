#ifndef FPULAB_TEST_HELPERS_HPP
#define FPULAB_TEST_HELPERS_HPP

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "fpulab/chain.hpp"
#include "fpulab/spectral.hpp"

namespace fpulab::testing {

inline LatticeState random_state(int sites, std::mt19937_64& rng,
                                 double amplitude = 0.5) {
    std::uniform_real_distribution<double> u(-amplitude, amplitude);
    LatticeState s = LatticeState::zero(sites);
    for (int j = 0; j < sites; ++j) {
        s.q[j] = u(rng);
        s.p[j] = u(rng);
    }
    return s;
}

// Independent naive-loop energy oracle: re-derives bond differences with
// explicit branch-per-boundary code, no shared helpers with the library.
inline double naive_fpu_energy(const LatticeState& s, const ChainParams& c) {
    double e = 0.0;
    for (double pj : s.p) e += pj * pj / 2.0;
    auto v = [&](double r) {
        return r * r / 2.0 + r * r * r / 6.0 +
               c.quartic * r * r * r * r / 24.0;
    };
    const int m = c.sites;
    if (c.boundary == Boundary::periodic) {
        for (int j = 0; j < m; ++j) {
            const int jp = (j + 1 == m) ? 0 : j + 1;
            e += v(s.q[j] - s.q[jp]);
        }
    } else {
        e += v(0.0 - s.q[0]);
        for (int j = 0; j + 1 < m; ++j) e += v(s.q[j] - s.q[j + 1]);
        e += v(s.q[m - 1] - 0.0);
    }
    return e;
}

inline double naive_toda_energy(const LatticeState& s, const ChainParams& c) {
    double e = 0.0;
    for (double pj : s.p) e += pj * pj / 2.0;
    const int m = c.sites;
    if (c.boundary == Boundary::periodic) {
        for (int j = 0; j < m; ++j) {
            const int jp = (j + 1 == m) ? 0 : j + 1;
            e += std::exp(s.q[j] - s.q[jp]);
        }
    } else {
        e += std::exp(0.0 - s.q[0]);
        for (int j = 0; j + 1 < m; ++j) e += std::exp(s.q[j] - s.q[j + 1]);
        e += std::exp(s.q[m - 1] - 0.0);
    }
    return e;
}

// Central finite differences of an energy functional w.r.t. q.
inline std::vector<double> finite_difference_forces(
    const LatticeState& s, const ChainParams& c,
    const std::function<double(const LatticeState&, const ChainParams&)>& en,
    double h = 1e-6) {
    std::vector<double> f(c.sites);
    LatticeState pert = s;
    for (int j = 0; j < c.sites; ++j) {
        pert.q[j] = s.q[j] + h;
        const double ep = en(pert, c);
        pert.q[j] = s.q[j] - h;
        const double em = en(pert, c);
        pert.q[j] = s.q[j];
        f[j] = -(ep - em) / (2.0 * h);
    }
    return f;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Single-mode initial datum with prescribed harmonic energy in mode +-k
// (position excitation, zero momentum). Periodic chains excite the +-k pair
// with equal energies; Dirichlet chains excite mode k.
inline LatticeState single_mode_state(const ChainParams& params, int k,
                                      double mode_energy) {
    const int n = paper_mode_count(params);
    ModeCoeffs c;
    c.k = mode_indices(n, params.boundary);
    c.phat.assign(c.k.size(), 0.0);
    c.qhat.assign(c.k.size(), 0.0);
    const std::vector<double> w = frequencies(n, params.boundary);
    for (std::size_t i = 0; i < c.k.size(); ++i) {
        if (std::abs(c.k[i]) == k)
            c.qhat[i] = std::sqrt(2.0 * mode_energy) / w[i];
    }
    LatticeState s = from_modes(c, params);
    s.t = 0.0;
    return s;
}

}  // namespace fpulab::testing

#endif
