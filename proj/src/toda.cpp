#include "fpulab/toda.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace fpulab {

namespace {

void check_sigma_range(double sigma, int n) {
    if (sigma < 0.0)
        throw std::invalid_argument("sigma must be non-negative");
    if (2.0 * sigma * n > 700.0)
        throw std::domain_error("sigma-weight overflow: 2*sigma*N > 700");
}

Eigen::VectorXd jacobi_eigenvalues(const FlaschkaState& fl, double corner_sign) {
    const int m = static_cast<int>(fl.a.size());
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j) l(j, j) = fl.b[j];
    for (int j = 0; j + 1 < m; ++j) l(j, j + 1) = l(j + 1, j) = fl.a[j];
    l(0, m - 1) += corner_sign * fl.a[m - 1];
    l(m - 1, 0) += corner_sign * fl.a[m - 1];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l,
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error(
            "lax_spectra: eigensolver failed to converge (matrix norm " +
            std::to_string(l.norm()) + ")");
    return solver.eigenvalues();  // sorted ascending
}

}  // namespace

std::vector<double> FlaschkaState::bond_differences() const {
    std::vector<double> r(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) r[j] = 2.0 * std::log(2.0 * a[j]);
    return r;
}

FlaschkaState flaschka(const LatticeState& state, const ChainParams& params) {
    if (params.boundary != Boundary::periodic)
        throw std::invalid_argument("flaschka requires a periodic chain");
    const std::vector<double> r = bond_differences(state, params);
    FlaschkaState fl;
    fl.a.resize(r.size());
    fl.b.resize(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        if (std::abs(r[j]) > 700.0)
            throw std::domain_error("flaschka: exp overflow at bond " +
                                    std::to_string(j));
        fl.a[j] = 0.5 * std::exp(0.5 * r[j]);
        fl.b[j] = -0.5 * state.p[j];
    }
    return fl;
}

LaxSpectra lax_spectra(const FlaschkaState& fl) {
    if (fl.a.size() != fl.b.size() || fl.a.size() < 2)
        throw std::invalid_argument("lax_spectra: invalid Flaschka state");
    LaxSpectra spectra;
    const Eigen::VectorXd ep = jacobi_eigenvalues(fl, +1.0);
    const Eigen::VectorXd em = jacobi_eigenvalues(fl, -1.0);
    spectra.plus.assign(ep.data(), ep.data() + ep.size());
    spectra.minus.assign(em.data(), em.data() + em.size());
    return spectra;
}

std::vector<DriftPoint> spectrum_drift(
    const std::vector<LatticeState>& snapshots, const ChainParams& params) {
    std::vector<DriftPoint> curve;
    if (snapshots.empty()) return curve;
    const LaxSpectra ref = lax_spectra(flaschka(snapshots.front(), params));
    curve.reserve(snapshots.size());
    for (const LatticeState& s : snapshots) {
        const LaxSpectra spec = lax_spectra(flaschka(s, params));
        double d = 0.0;
        for (std::size_t i = 0; i < ref.plus.size(); ++i)
            d = std::max(d, std::abs(spec.plus[i] - ref.plus[i]));
        curve.push_back({s.t, d});
    }
    return curve;
}

std::vector<int> action_mode_indices(const ModeSpectrum& spectrum) {
    std::vector<int> out;
    const bool periodic = !spectrum.k.empty() && spectrum.k.front() < 1;
    const int n = periodic ? (static_cast<int>(spectrum.k.size()) - 2) / 2
                           : static_cast<int>(spectrum.k.size());
    for (std::size_t i = 0; i < spectrum.k.size(); ++i) {
        const int a = std::abs(spectrum.k[i]);
        if (a >= 1 && a <= n) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<double> linear_actions(const ModeSpectrum& spectrum) {
    std::vector<double> actions;
    for (int i : action_mode_indices(spectrum)) {
        if (!(spectrum.omega[i] > 0.0))
            throw std::invalid_argument(
                "linear_actions: zero frequency at mode index " +
                std::to_string(spectrum.k[i]));
        actions.push_back(spectrum.energy[i] / spectrum.omega[i]);
    }
    return actions;
}

std::vector<double> action_frequencies(const ModeSpectrum& spectrum) {
    std::vector<double> w;
    for (int i : action_mode_indices(spectrum)) w.push_back(spectrum.omega[i]);
    return w;
}

double sigma_norm(const LatticeState& state, const ChainParams& params,
                  double sigma) {
    const ModeSpectrum spec = mode_energies(state, params);
    const int n = paper_mode_count(params);
    check_sigma_range(sigma, n);
    double sum = 0.0;
    for (int i : action_mode_indices(spec))
        sum += std::exp(2.0 * sigma * std::abs(spec.k[i])) * spec.energy[i];
    return std::sqrt(sum / n);
}

std::vector<DriftPoint> weighted_action_drift(
    const std::vector<LatticeState>& snapshots, const ChainParams& params,
    double sigma) {
    std::vector<DriftPoint> curve;
    if (snapshots.empty()) return curve;
    const int n = paper_mode_count(params);
    check_sigma_range(sigma, n);

    const ModeSpectrum spec0 = mode_energies(snapshots.front(), params);
    const std::vector<double> i0 = linear_actions(spec0);
    const std::vector<double> w = action_frequencies(spec0);
    const std::vector<int> sel = action_mode_indices(spec0);

    curve.reserve(snapshots.size());
    for (const LatticeState& s : snapshots) {
        const ModeSpectrum spec = mode_energies(s, params);
        const std::vector<double> ik = linear_actions(spec);
        double d = 0.0;
        for (std::size_t i = 0; i < ik.size(); ++i)
            d += std::exp(2.0 * sigma * std::abs(spec.k[sel[i]])) * w[i] *
                 std::abs(ik[i] - i0[i]);
        curve.push_back({s.t, d / n});
    }
    return curve;
}

}  // namespace fpulab
