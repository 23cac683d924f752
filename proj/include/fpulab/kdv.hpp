#ifndef FPULAB_KDV_HPP
#define FPULAB_KDV_HPP

#include <complex>
#include <stdexcept>
#include <vector>

#include "fpulab/chain.hpp"

namespace fpulab {

/// Periodic profile on the period-2 domain, sampled on the uniform grid
/// y_i = 2 i / n with n a power of two >= 32.
struct KdVField {
    std::vector<double> u;
    double tau = 0.0;

    void validate() const;
    int grid() const { return static_cast<int>(u.size()); }

    static KdVField zero(int n) { return KdVField{std::vector<double>(n, 0.0), 0.0}; }
};

/// Thrown when a step violates the pseudo-spectral stability bound.
class StabilityError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One integrating-factor RK4 step of f_tau + f_yyy + f f_y = 0 with 2/3-rule
/// dealiasing. The third-derivative term is propagated exactly in Fourier
/// space; only the advection term is stepped explicitly.
KdVField kdv_step(const KdVField& field, double dtau);

/// Advances to tau_target with steps of at most dtau.
KdVField kdv_integrate(KdVField field, double tau_target, double dtau);

/// Trigonometric (spectral) interpolation at an arbitrary point of [0, 2).
double kdv_eval(const KdVField& field, double y);

double kdv_mass(const KdVField& field);      // int f dy
double kdv_momentum(const KdVField& field);  // int f^2 dy

/// Long-wave small-amplitude scaling. The standard-KdV pipeline requires
/// eps = mu^2, which the constructor enforces.
struct ModulationParams {
    double mu;   // 1/N
    double eps;  // amplitude parameter, = mu^2

    explicit ModulationParams(double mu_in) : mu(mu_in), eps(mu_in * mu_in) {
        if (!(mu > 0.0) || mu > 0.125 + 1e-15)
            throw std::invalid_argument("modulation: need 0 < mu <= 1/8");
    }

    int lattice_n() const;  // N = 1/mu, must be integral
};

/// Builds the lattice state interpolating the two KdV profiles:
/// r_j(0) = mu^2 [f0(mu j) + g0(-mu j)], p_j(0) = mu^2 [f0(mu j) - g0(-mu j)],
/// q reconstructed by cumulative summation with sum q = 0. Both r and p are
/// projected onto zero mean so the construction closes on the circle.
LatticeState lattice_from_profiles(const KdVField& f0, const KdVField& g0,
                                   const ModulationParams& mp,
                                   const ChainParams& chain);

/// Evolves the two KdV profiles and evaluates the reference differences
/// r^KdV_j(t) = mu^2 [f(mu(j-t), mu^3 t) + g(-mu(j+t), mu^3 t)] (zero-mean
/// projected). Requests must not exceed the horizon fixed at construction.
class KdVReference {
  public:
    KdVReference(const KdVField& f0, const KdVField& g0,
                 const ModulationParams& mp, const ChainParams& chain,
                 double t_max, double dtau = 1e-4);

    std::vector<double> r_at(double t);
    double t_max() const { return t_max_; }

  private:
    ModulationParams mp_;
    int sites_;
    double t_max_;
    double dtau_;
    KdVField f_;  // right mover
    KdVField h_;  // left-mover profile, evaluated at reflected arguments
};

struct ErrorPoint {
    double t;
    double error;  // sup_j |r_j(t) - r^KdV_j(t)|
};

/// Max-norm error curve between FPU trajectory snapshots and the KdV
/// reference of Theorem-1 type.
std::vector<ErrorPoint> compare_fpu_kdv(const std::vector<LatticeState>& snapshots,
                                        const ChainParams& chain,
                                        KdVReference& reference);

}  // namespace fpulab

#endif
