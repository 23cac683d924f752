#ifndef FPULAB_TODA_HPP
#define FPULAB_TODA_HPP

#include <vector>

#include "fpulab/chain.hpp"
#include "fpulab/spectral.hpp"

namespace fpulab {

/// Flaschka variables of a periodic chain:
/// a_j = exp(r_j/2)/2 > 0, b_j = -p_j/2.
struct FlaschkaState {
    std::vector<double> a;
    std::vector<double> b;

    /// Recovers r_j = 2 log(2 a_j).
    std::vector<double> bond_differences() const;
};

FlaschkaState flaschka(const LatticeState& state, const ChainParams& params);

/// Eigenvalues of the two symmetric periodic Jacobi matrices L^+- with
/// diagonal b, off-diagonal a and corner entries +-a_M. Both spectra are
/// conserved by the Toda flow; together they carry the full periodic
/// invariant set.
struct LaxSpectra {
    std::vector<double> plus;   // sorted ascending
    std::vector<double> minus;  // sorted ascending
};

LaxSpectra lax_spectra(const FlaschkaState& fl);

struct DriftPoint {
    double t;
    double drift;
};

/// Sorted-spectrum max deviation max_k |lambda_k(t) - lambda_k(0)| of L^+
/// along trajectory snapshots.
std::vector<DriftPoint> spectrum_drift(const std::vector<LatticeState>& snapshots,
                                       const ChainParams& params);

/// Linear action proxies I_k = E_k / omega_k over the modes 1 <= |k| <= N
/// (the k = 0 and k = -N-1 entries of a periodic spectrum are dropped).
/// Throws if a selected frequency is not positive.
std::vector<double> linear_actions(const ModeSpectrum& spectrum);

/// Frequencies aligned with linear_actions (modes 1 <= |k| <= N).
std::vector<double> action_frequencies(const ModeSpectrum& spectrum);
std::vector<int> action_mode_indices(const ModeSpectrum& spectrum);

/// Weighted analytic-norm of a state:
/// sqrt( (1/N) sum_{1<=|k|<=N} e^{2 sigma |k|} omega_k (X_k^2 + Y_k^2)/2 )
/// with X_k = phat_k / sqrt(omega_k), Y_k = sqrt(omega_k) qhat_k, so the
/// summand is just e^{2 sigma |k|} E_k.
double sigma_norm(const LatticeState& state, const ChainParams& params,
                  double sigma);

/// Drift curve (1/N) sum_{1<=|k|<=N} e^{2 sigma |k|} omega_k |I_k(t) - I_k(0)|.
std::vector<DriftPoint> weighted_action_drift(
    const std::vector<LatticeState>& snapshots, const ChainParams& params,
    double sigma);

}  // namespace fpulab

#endif
