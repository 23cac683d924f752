#ifndef FPULAB_SPECTRAL_HPP
#define FPULAB_SPECTRAL_HPP

#include <span>
#include <vector>

#include "fpulab/chain.hpp"

namespace fpulab {

/// Paper-style mode count N: a periodic chain has M = 2N+2 sites and mode
/// indices k = -N-1..N; a Dirichlet chain of M interior particles has N = M
/// modes k = 1..N.
int paper_mode_count(const ChainParams& params);

/// Harmonic frequencies omega_k = 2 sin(|k| pi / (2(N+1))).
/// Dirichlet: length N, k = 1..N.  Periodic: length 2N+2, ascending
/// k = -N-1..N (so entry 0 is the top mode with omega = 2).
std::vector<double> frequencies(int n_modes, Boundary boundary);

/// Mode index array matching the frequency/coefficient ordering.
std::vector<int> mode_indices(int n_modes, Boundary boundary);

/// Fourier coefficients of a state, ordered as mode_indices().
struct ModeCoeffs {
    std::vector<int> k;
    std::vector<double> phat;
    std::vector<double> qhat;
};

struct ModeSpectrum {
    std::vector<int> k;
    std::vector<double> omega;
    std::vector<double> energy;    // E_k = (phat^2 + omega^2 qhat^2)/2
    std::vector<double> specific;  // E_k / N
    double t = 0.0;

    /// Energies aggregated by |k| for |k| = 1..N (index 0 holds |k| = 1).
    /// Periodic spectra sum the +-k pair; the k = 0 and k = -N-1 entries
    /// are not included.
    std::vector<double> abs_k_energies() const;
};

ModeCoeffs to_modes(const LatticeState& state, const ChainParams& params);
LatticeState from_modes(const ModeCoeffs& coeffs, const ChainParams& params);

/// O(M^2) direct-basis transforms; used as the oracle for the fast path.
ModeCoeffs to_modes_direct(const LatticeState& state,
                           const ChainParams& params);
LatticeState from_modes_direct(const ModeCoeffs& coeffs,
                               const ChainParams& params);

ModeSpectrum mode_energies(const LatticeState& state,
                           const ChainParams& params);

/// Quadratic part of the energy, evaluated directly in real space:
/// sum p^2/2 + sum_bonds r^2/2.
double harmonic_energy(const LatticeState& state, const ChainParams& params);

/// Per-mode energies sampled along a trajectory (rows = sample times).
struct EnergyTrace {
    std::vector<int> k;
    std::vector<double> times;
    std::vector<std::vector<double>> energies;
};

/// Trapezoidal time averages <E_k>(T) = (1/(T - t0)) int_{t0}^{T} E_k dt of
/// the stored samples. T must lie within the sampled range.
std::vector<double> time_average(const EnergyTrace& trace, double T);

struct PacketFit {
    double sigma = 0.0;      // decay rate of <E_k> ~ exp(-sigma k)
    double r_squared = 0.0;  // goodness of the log-linear fit
    int modes_used = 0;
};

/// Least-squares slope of log(averages) vs mode number over the contiguous
/// leading block of entries above 1e-300. Requires at least 4 usable points.
PacketFit packet_fit(std::span<const double> averages);

struct SpectralEntropy {
    double entropy = 0.0;
    double n_eff = 0.0;  // exp(S) / number of modes, in (0, 1]
};

SpectralEntropy spectral_entropy(std::span<const double> energies);

/// Generic least-squares line fit y = a + b x; returns (a, b, R^2).
struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace fpulab

#endif
