#include "fpulab/kdv.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

namespace fpulab {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Spectrum = std::vector<std::complex<double>>;

// Local r2c/c2r plan pair per grid size (KdV grids are few and fixed).
struct Plans {
    fftw_plan fwd;
    fftw_plan bwd;
};

Plans& plans_for(int n) {
    static std::mutex mutex;
    static std::map<int, Plans> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> re(n);
    Spectrum cx(n / 2 + 1);
    Plans p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.fwd = fftw_plan_dft_r2c_1d(n, re.data(),
                                 reinterpret_cast<fftw_complex*>(cx.data()),
                                 flags);
    p.bwd = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(cx.data()),
                                 re.data(), flags);
    return cache.emplace(n, p).first->second;
}

// Normalized spectrum: f(y) = sum_m c_m e^{i pi m y} (+ conjugates).
Spectrum analyze(const std::vector<double>& f) {
    const int n = static_cast<int>(f.size());
    Spectrum c(n / 2 + 1);
    std::vector<double> tmp(f);
    fftw_execute_dft_r2c(plans_for(n).fwd, tmp.data(),
                         reinterpret_cast<fftw_complex*>(c.data()));
    for (auto& v : c) v /= n;
    return c;
}

std::vector<double> synthesize(const Spectrum& c, int n) {
    Spectrum tmp(c);
    std::vector<double> f(n);
    fftw_execute_dft_c2r(plans_for(n).bwd,
                         reinterpret_cast<fftw_complex*>(tmp.data()), f.data());
    return f;
}

int dealias_cutoff(int n) { return n / 3; }

// Nonlinear term N(c) = -(i kappa / 2) FFT(f^2), dealiased by the 2/3 rule.
Spectrum nonlinear(const Spectrum& c, int n) {
    std::vector<double> f = synthesize(c, n);
    for (double& v : f) v *= v;
    Spectrum w = analyze(f);
    const int cut = dealias_cutoff(n);
    Spectrum out(w.size(), {0.0, 0.0});
    for (int m = 1; m <= cut; ++m) {
        const double kappa = kPi * m;
        out[m] = std::complex<double>(0.0, -kappa / 2.0) * w[m];
    }
    return out;
}

void dealias_state(Spectrum& c, int n) {
    const int cut = dealias_cutoff(n);
    for (int m = cut + 1; m < static_cast<int>(c.size()); ++m) c[m] = 0.0;
}

double wrap_period2(double y) {
    double w = std::fmod(y, 2.0);
    if (w < 0.0) w += 2.0;
    return w;
}

double eval_spectrum(const Spectrum& c, int n, double y) {
    double f = c[0].real();
    for (int m = 1; m < n / 2; ++m) {
        const double arg = kPi * m * y;
        f += 2.0 * (c[m].real() * std::cos(arg) - c[m].imag() * std::sin(arg));
    }
    f += c[n / 2].real() * std::cos(kPi * (n / 2) * y);
    return f;
}

}  // namespace

void KdVField::validate() const {
    const int n = grid();
    if (n < 32 || (n & (n - 1)) != 0)
        throw std::invalid_argument(
            "kdv: grid size must be a power of two >= 32");
}

KdVField kdv_step(const KdVField& field, double dtau) {
    field.validate();
    if (!(dtau > 0.0)) throw std::invalid_argument("kdv: dtau must be positive");
    const int n = field.grid();

    double fmax = 0.0;
    for (double v : field.u) fmax = std::max(fmax, std::abs(v));
    const double kappa_max = kPi * dealias_cutoff(n);
    if (dtau * fmax * kappa_max > 2.0)
        throw StabilityError("kdv: advection stability bound violated (dtau " +
                             std::to_string(dtau) + ", max|f| " +
                             std::to_string(fmax) + ")");

    Spectrum c = analyze(field.u);
    dealias_state(c, n);

    // integrating-factor RK4: exact phases for the dispersive term
    const int nh = n / 2 + 1;
    Spectrum e_half(nh), e_full(nh);
    for (int m = 0; m < nh; ++m) {
        const double kappa = kPi * m;
        const double phase = kappa * kappa * kappa;  // L = +i kappa^3
        e_half[m] = std::polar(1.0, phase * dtau / 2.0);
        e_full[m] = std::polar(1.0, phase * dtau);
    }

    auto axpy = [&](const Spectrum& base, const Spectrum& dir, double scale) {
        Spectrum out(nh);
        for (int m = 0; m < nh; ++m) out[m] = base[m] + scale * dir[m];
        return out;
    };
    auto mul = [&](const Spectrum& phases, const Spectrum& v) {
        Spectrum out(nh);
        for (int m = 0; m < nh; ++m) out[m] = phases[m] * v[m];
        return out;
    };

    const Spectrum na = nonlinear(c, n);
    const Spectrum nb = nonlinear(mul(e_half, axpy(c, na, dtau / 2.0)), n);
    const Spectrum nc = nonlinear(axpy(mul(e_half, c), nb, dtau / 2.0), n);
    const Spectrum nd = nonlinear(axpy(mul(e_full, c), mul(e_half, nc), dtau), n);

    Spectrum next(nh);
    for (int m = 0; m < nh; ++m) {
        next[m] = e_full[m] * c[m] +
                  (dtau / 6.0) * (e_full[m] * na[m] +
                                  2.0 * e_half[m] * (nb[m] + nc[m]) + nd[m]);
    }
    dealias_state(next, n);

    KdVField out;
    out.u = synthesize(next, n);
    out.tau = field.tau + dtau;
    return out;
}

KdVField kdv_integrate(KdVField field, double tau_target, double dtau) {
    while (field.tau < tau_target - 1e-14) {
        const double h = std::min(dtau, tau_target - field.tau);
        field = kdv_step(field, h);
    }
    field.tau = tau_target;
    return field;
}

double kdv_eval(const KdVField& field, double y) {
    field.validate();
    const Spectrum c = analyze(field.u);
    return eval_spectrum(c, field.grid(), wrap_period2(y));
}

double kdv_mass(const KdVField& field) {
    const double h = 2.0 / field.grid();
    return h * std::accumulate(field.u.begin(), field.u.end(), 0.0);
}

double kdv_momentum(const KdVField& field) {
    const double h = 2.0 / field.grid();
    double s = 0.0;
    for (double v : field.u) s += v * v;
    return h * s;
}

int ModulationParams::lattice_n() const {
    const double n = 1.0 / mu;
    const int ni = static_cast<int>(std::lround(n));
    if (std::abs(n - ni) > 1e-9)
        throw std::invalid_argument("modulation: 1/mu must be an integer");
    return ni;
}

namespace {

void check_profile_chain(const ModulationParams& mp, const ChainParams& chain) {
    chain.validate();
    if (chain.boundary != Boundary::periodic)
        throw std::invalid_argument("kdv bridge requires a periodic chain");
    if (chain.sites != 2 * mp.lattice_n() + 2)
        throw std::invalid_argument(
            "kdv bridge: chain must have M = 2N+2 sites with N = 1/mu");
}

std::vector<double> zero_mean(std::vector<double> v) {
    const double mean =
        std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double& x : v) x -= mean;
    return v;
}

}  // namespace

LatticeState lattice_from_profiles(const KdVField& f0, const KdVField& g0,
                                   const ModulationParams& mp,
                                   const ChainParams& chain) {
    f0.validate();
    g0.validate();
    check_profile_chain(mp, chain);
    const int m = chain.sites;
    const double mu2 = mp.mu * mp.mu;
    // sampling wavelength 2/M closes the period-2 profile exactly around the
    // ring of M = 2N+2 sites (mu = 1/N is the amplitude normalization only)
    const double mux = 2.0 / m;

    const Spectrum cf = analyze(f0.u);
    const Spectrum cg = analyze(g0.u);
    std::vector<double> r(m), p(m);
    for (int j = 0; j < m; ++j) {
        const double fv = eval_spectrum(cf, f0.grid(), wrap_period2(mux * j));
        const double gv = eval_spectrum(cg, g0.grid(), wrap_period2(-mux * j));
        r[j] = mu2 * (fv + gv);
        p[j] = mu2 * (fv - gv);
    }
    r = zero_mean(r);

    LatticeState s = LatticeState::zero(m);
    s.p = zero_mean(p);
    for (int j = 0; j + 1 < m; ++j) s.q[j + 1] = s.q[j] - r[j];
    s.q = zero_mean(s.q);
    s.t = 0.0;
    return s;
}

// The lattice dispersion relation omega = 2 sin(kappa/2) = kappa -
// kappa^3/24 + ... fixes the bridge normalization: the modulation profiles
// evolve as f(y, tau) = (1/12) F(y, tau/24) with F a solution of the
// normalized equation F_tau + F_yyy + F F_y = 0 and F(0) = 12 f(0).
constexpr double kBridgeAmplitude = 12.0;
constexpr double kBridgeTime = 24.0;

KdVReference::KdVReference(const KdVField& f0, const KdVField& g0,
                           const ModulationParams& mp, const ChainParams& chain,
                           double t_max, double dtau)
    : mp_(mp), sites_(chain.sites), t_max_(t_max), dtau_(dtau), f_(f0) {
    f0.validate();
    g0.validate();
    check_profile_chain(mp, chain);
    // the left-mover profile solves the same normalized equation as f when
    // kept in its own (reflected) coordinates and evaluated at -y
    h_ = g0;
    for (double& v : f_.u) v *= kBridgeAmplitude;
    for (double& v : h_.u) v *= kBridgeAmplitude;
    f_.tau = 0.0;
    h_.tau = 0.0;
}

std::vector<double> KdVReference::r_at(double t) {
    if (t < 0.0 || t > t_max_ * (1.0 + 1e-12))
        throw std::invalid_argument(
            "kdv reference: requested time beyond the integrated horizon");
    const double mux = 2.0 / sites_;
    const double tau = mux * mux * mux * t / kBridgeTime;
    if (tau < f_.tau - 1e-12)
        throw std::invalid_argument(
            "kdv reference: times must be requested in increasing order");
    f_ = kdv_integrate(std::move(f_), tau, dtau_);
    h_ = kdv_integrate(std::move(h_), tau, dtau_);

    const Spectrum cf = analyze(f_.u);
    const Spectrum ch = analyze(h_.u);
    std::vector<double> r(sites_);
    for (int j = 0; j < sites_; ++j) {
        const double fv =
            eval_spectrum(cf, f_.grid(), wrap_period2(mux * (j - t)));
        const double hv =
            eval_spectrum(ch, h_.grid(), wrap_period2(-mux * (j + t)));
        r[j] = mp_.mu * mp_.mu * (fv + hv) / kBridgeAmplitude;
    }
    return zero_mean(r);
}

std::vector<ErrorPoint> compare_fpu_kdv(
    const std::vector<LatticeState>& snapshots, const ChainParams& chain,
    KdVReference& reference) {
    std::vector<ErrorPoint> curve;
    curve.reserve(snapshots.size());
    for (const LatticeState& s : snapshots) {
        if (static_cast<int>(s.q.size()) != chain.sites)
            throw std::invalid_argument("compare_fpu_kdv: chain size mismatch");
        const std::vector<double> r = bond_differences(s, chain);
        const std::vector<double> rref = reference.r_at(s.t);
        double err = 0.0;
        for (int j = 0; j < chain.sites; ++j)
            err = std::max(err, std::abs(r[j] - rref[j]));
        curve.push_back({s.t, err});
    }
    return curve;
}

}  // namespace fpulab
