#include "fpulab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>

namespace fpulab {

namespace {

constexpr double kPi = 3.14159265358979323846;

// FFTW planning is not thread-safe; plans are created once per (kind, size)
// under a lock and then executed through the new-array interface.
class PlanCache {
  public:
    enum Kind { r2c, c2r, rodft00 };

    fftw_plan get(Kind kind, int n) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::make_pair(kind, n);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<double> re(n);
        std::vector<std::complex<double>> cx(n / 2 + 1);
        fftw_plan plan = nullptr;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        switch (kind) {
            case r2c:
                plan = fftw_plan_dft_r2c_1d(
                    n, re.data(), reinterpret_cast<fftw_complex*>(cx.data()),
                    flags);
                break;
            case c2r:
                plan = fftw_plan_dft_c2r_1d(
                    n, reinterpret_cast<fftw_complex*>(cx.data()), re.data(),
                    flags);
                break;
            case rodft00: {
                std::vector<double> out(n);
                plan = fftw_plan_r2r_1d(n, re.data(), out.data(), FFTW_RODFT00,
                                        flags);
                break;
            }
        }
        plans_[key] = plan;
        return plan;
    }

  private:
    std::mutex mutex_;
    std::map<std::pair<Kind, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

void real_fft(const std::vector<double>& in,
              std::vector<std::complex<double>>& out) {
    const int n = static_cast<int>(in.size());
    out.resize(n / 2 + 1);
    std::vector<double> tmp(in);
    fftw_execute_dft_r2c(plan_cache().get(PlanCache::r2c, n), tmp.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void real_ifft(const std::vector<std::complex<double>>& in, int n,
               std::vector<double>& out) {
    out.resize(n);
    std::vector<std::complex<double>> tmp(in);
    fftw_execute_dft_c2r(plan_cache().get(PlanCache::c2r, n),
                         reinterpret_cast<fftw_complex*>(tmp.data()),
                         out.data());
}

// Unnormalized DST-I: y_k = 2 sum_{j=1}^{n} x_j sin(pi j k/(n+1)).
std::vector<double> dst1(const std::vector<double>& in) {
    const int n = static_cast<int>(in.size());
    std::vector<double> tmp(in), out(n);
    fftw_execute_r2r(plan_cache().get(PlanCache::rodft00, n), tmp.data(),
                     out.data());
    return out;
}

int periodic_index(int k, int n_modes) { return k + n_modes + 1; }

void check_lengths(const LatticeState& state, const ChainParams& params) {
    if (state.q.size() != state.p.size() ||
        static_cast<int>(state.q.size()) != params.sites)
        throw std::invalid_argument("state length does not match chain size");
}

// Forward transform of one real array to the basis-coefficient layout.
std::vector<double> forward_periodic(const std::vector<double>& x) {
    const int m = static_cast<int>(x.size());
    const int n = m / 2 - 1;
    const double s = std::sqrt(m / 2.0);
    std::vector<std::complex<double>> c;
    real_fft(x, c);
    std::vector<double> out(m);
    out[periodic_index(0, n)] = c[0].real() / std::sqrt(double(m));
    out[periodic_index(-n - 1, n)] = c[m / 2].real() / std::sqrt(double(m));
    for (int k = 1; k <= n; ++k) {
        out[periodic_index(k, n)] = -c[k].imag() / s;
        out[periodic_index(-k, n)] = c[k].real() / s;
    }
    return out;
}

std::vector<double> inverse_periodic(const std::vector<double>& xh, int m) {
    const int n = m / 2 - 1;
    const double s = std::sqrt(m / 2.0);
    std::vector<std::complex<double>> c(m / 2 + 1, {0.0, 0.0});
    c[0] = {xh[periodic_index(0, n)] / std::sqrt(double(m)), 0.0};
    c[m / 2] = {xh[periodic_index(-n - 1, n)] / std::sqrt(double(m)), 0.0};
    for (int k = 1; k <= n; ++k) {
        c[k] = {xh[periodic_index(-k, n)] / (2.0 * s),
                -xh[periodic_index(k, n)] / (2.0 * s)};
    }
    std::vector<double> out;
    real_ifft(c, m, out);
    return out;
}

std::vector<double> forward_dirichlet(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> out = dst1(x);
    const double scale = 1.0 / std::sqrt(2.0 * (n + 1));
    for (double& v : out) v *= scale;
    return out;
}

// DST-I is self-inverse up to the factor 2(n+1); the same scaling applies.
std::vector<double> inverse_dirichlet(const std::vector<double>& xh) {
    return forward_dirichlet(xh);
}

double basis_periodic(int k, int j, int m) {
    const int n = m / 2 - 1;
    const double s = std::sqrt(m / 2.0);
    if (k == 0) return 1.0 / std::sqrt(double(m));
    if (k == -n - 1) return (j % 2 == 0 ? 1.0 : -1.0) / std::sqrt(double(m));
    const double arg = 2.0 * kPi * j * std::abs(k) / m;
    return (k > 0 ? std::sin(arg) : std::cos(arg)) / s;
}

double basis_dirichlet(int k, int j, int n) {
    // j is the storage index of paper particle j+1
    return std::sqrt(2.0 / (n + 1)) * std::sin(kPi * (j + 1) * k / (n + 1));
}

}  // namespace

int paper_mode_count(const ChainParams& params) {
    params.validate();
    if (params.boundary == Boundary::periodic) {
        if (params.sites % 2 != 0)
            throw std::invalid_argument(
                "periodic mode analysis needs an even site count M = 2N+2");
        return params.sites / 2 - 1;
    }
    return params.sites;
}

std::vector<int> mode_indices(int n_modes, Boundary boundary) {
    if (n_modes < 0 || (boundary == Boundary::dirichlet && n_modes < 1))
        throw std::invalid_argument("mode count must be positive");
    std::vector<int> k;
    if (boundary == Boundary::periodic) {
        for (int i = -n_modes - 1; i <= n_modes; ++i) k.push_back(i);
    } else {
        for (int i = 1; i <= n_modes; ++i) k.push_back(i);
    }
    return k;
}

std::vector<double> frequencies(int n_modes, Boundary boundary) {
    if (n_modes < 1)
        throw std::invalid_argument("mode count must be at least 1");
    const std::vector<int> ks = mode_indices(n_modes, boundary);
    std::vector<double> w(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i)
        w[i] = 2.0 * std::sin(std::abs(ks[i]) * kPi / (2.0 * (n_modes + 1)));
    return w;
}

ModeCoeffs to_modes(const LatticeState& state, const ChainParams& params) {
    check_lengths(state, params);
    const int n = paper_mode_count(params);
    ModeCoeffs c;
    c.k = mode_indices(n, params.boundary);
    if (params.boundary == Boundary::periodic) {
        c.phat = forward_periodic(state.p);
        c.qhat = forward_periodic(state.q);
    } else {
        c.phat = forward_dirichlet(state.p);
        c.qhat = forward_dirichlet(state.q);
    }
    return c;
}

LatticeState from_modes(const ModeCoeffs& coeffs, const ChainParams& params) {
    const int n = paper_mode_count(params);
    const std::size_t expect = params.boundary == Boundary::periodic
                                   ? static_cast<std::size_t>(2 * n + 2)
                                   : static_cast<std::size_t>(n);
    if (coeffs.phat.size() != expect || coeffs.qhat.size() != expect)
        throw std::invalid_argument("mode coefficient length mismatch");
    LatticeState s;
    if (params.boundary == Boundary::periodic) {
        s.q = inverse_periodic(coeffs.qhat, params.sites);
        s.p = inverse_periodic(coeffs.phat, params.sites);
    } else {
        s.q = inverse_dirichlet(coeffs.qhat);
        s.p = inverse_dirichlet(coeffs.phat);
    }
    return s;
}

ModeCoeffs to_modes_direct(const LatticeState& state,
                           const ChainParams& params) {
    check_lengths(state, params);
    const int n = paper_mode_count(params);
    const int m = params.sites;
    ModeCoeffs c;
    c.k = mode_indices(n, params.boundary);
    c.phat.assign(c.k.size(), 0.0);
    c.qhat.assign(c.k.size(), 0.0);
    for (std::size_t i = 0; i < c.k.size(); ++i) {
        for (int j = 0; j < m; ++j) {
            const double e = params.boundary == Boundary::periodic
                                 ? basis_periodic(c.k[i], j, m)
                                 : basis_dirichlet(c.k[i], j, n);
            c.phat[i] += state.p[j] * e;
            c.qhat[i] += state.q[j] * e;
        }
    }
    return c;
}

LatticeState from_modes_direct(const ModeCoeffs& coeffs,
                               const ChainParams& params) {
    const int n = paper_mode_count(params);
    const int m = params.sites;
    LatticeState s = LatticeState::zero(m);
    for (int j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < coeffs.k.size(); ++i) {
            const double e = params.boundary == Boundary::periodic
                                 ? basis_periodic(coeffs.k[i], j, m)
                                 : basis_dirichlet(coeffs.k[i], j, n);
            s.q[j] += coeffs.qhat[i] * e;
            s.p[j] += coeffs.phat[i] * e;
        }
    }
    return s;
}

ModeSpectrum mode_energies(const LatticeState& state,
                           const ChainParams& params) {
    const int n = paper_mode_count(params);
    const ModeCoeffs c = to_modes(state, params);
    ModeSpectrum spec;
    spec.k = c.k;
    spec.omega = frequencies(n, params.boundary);
    spec.energy.resize(c.k.size());
    spec.specific.resize(c.k.size());
    for (std::size_t i = 0; i < c.k.size(); ++i) {
        const double w = spec.omega[i];
        spec.energy[i] =
            (c.phat[i] * c.phat[i] + w * w * c.qhat[i] * c.qhat[i]) / 2.0;
        spec.specific[i] = spec.energy[i] / n;
    }
    spec.t = state.t;
    return spec;
}

std::vector<double> ModeSpectrum::abs_k_energies() const {
    if (k.empty()) return {};
    const bool periodic = k.front() < 1;
    if (!periodic) return energy;
    const int n = (static_cast<int>(k.size()) - 2) / 2;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < k.size(); ++i) {
        const int a = std::abs(k[i]);
        if (a >= 1 && a <= n) out[a - 1] += energy[i];
    }
    return out;
}

double harmonic_energy(const LatticeState& state, const ChainParams& params) {
    const std::vector<double> r = bond_differences(state, params);
    double e = 0.0;
    for (double pj : state.p) e += pj * pj / 2.0;
    for (double rj : r) e += rj * rj / 2.0;
    return e;
}

std::vector<double> time_average(const EnergyTrace& trace, double T) {
    if (trace.times.empty())
        throw std::invalid_argument("time_average: empty trace");
    const double t0 = trace.times.front();
    if (T < t0 || T > trace.times.back() + 1e-12)
        throw std::invalid_argument("time_average: T outside sampled range");
    const std::size_t n_modes = trace.energies.front().size();
    if (T <= t0) return trace.energies.front();
    std::vector<double> integral(n_modes, 0.0);
    for (std::size_t i = 1; i < trace.times.size(); ++i) {
        const double ta = trace.times[i - 1];
        const double tb = trace.times[i];
        if (T >= tb) {
            const double h = tb - ta;
            for (std::size_t m = 0; m < n_modes; ++m)
                integral[m] +=
                    0.5 * h * (trace.energies[i - 1][m] + trace.energies[i][m]);
            if (T <= tb) break;
        } else {
            // partial last interval, linear interpolation at T
            const double frac = (T - ta) / (tb - ta);
            for (std::size_t m = 0; m < n_modes; ++m) {
                const double ea = trace.energies[i - 1][m];
                const double eT = ea + frac * (trace.energies[i][m] - ea);
                integral[m] += 0.5 * (T - ta) * (ea + eT);
            }
            break;
        }
    }
    for (double& v : integral) v /= (T - t0);
    return integral;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return f;
}

PacketFit packet_fit(std::span<const double> averages) {
    constexpr double kFloor = 1e-300;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < averages.size(); ++i) {
        if (!(averages[i] > kFloor)) break;  // contiguous leading block only
        x.push_back(static_cast<double>(i + 1));
        y.push_back(std::log(averages[i]));
    }
    if (x.size() < 4)
        throw std::invalid_argument(
            "packet_fit: fewer than 4 usable mode averages");
    const LineFit f = fit_line(x, y);
    PacketFit out;
    out.sigma = -f.slope;
    out.r_squared = f.r_squared;
    out.modes_used = static_cast<int>(x.size());
    return out;
}

SpectralEntropy spectral_entropy(std::span<const double> energies) {
    double total = 0.0;
    for (double e : energies) total += e;
    if (!(total > 0.0))
        throw std::invalid_argument("spectral_entropy: all-zero spectrum");
    double s = 0.0;
    for (double e : energies) {
        const double w = e / total;
        if (w > 0.0) s -= w * std::log(w);
    }
    SpectralEntropy out;
    out.entropy = s;
    out.n_eff = std::exp(s) / static_cast<double>(energies.size());
    return out;
}

}  // namespace fpulab
