#ifndef FPULAB_GIBBS_HPP
#define FPULAB_GIBBS_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "fpulab/chain.hpp"
#include "fpulab/integrators.hpp"
#include "fpulab/spectral.hpp"

namespace fpulab {

struct GibbsConfig {
    double beta = 100.0;
    ChainParams chain;  // Dirichlet boundary enforced
    int burnin_sweeps = 2000;
    int samples = 1000;
    int thin = 10;
    double proposal_width = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Canonical-ensemble sampler: momenta drawn exactly from independent
/// Gaussians with variance 1/beta, positions via single-site Metropolis
/// sweeps under the FPU potential. The proposal width is adapted during
/// burn-in towards acceptance 0.3-0.5.
class GibbsSampler {
  public:
    explicit GibbsSampler(const GibbsConfig& config);

    /// Next retained draw (after thinning).
    LatticeState draw();

    double acceptance_rate() const { return acceptance_rate_; }
    double proposal_width() const { return width_; }

  private:
    void sweep();

    GibbsConfig config_;
    std::vector<double> q_;
    double width_;
    double acceptance_rate_ = 0.0;
    std::uint64_t accepted_ = 0;
    std::uint64_t proposed_ = 0;
    std::mt19937_64 rng_;
};

/// Smooth nonnegative mode-weight profiles on [0, 1] with g'(0) = 0 by
/// construction.
struct ModeProfile {
    enum class Family { constant, bump, plateau };

    Family family = Family::bump;
    double amplitude = 1.0;
    double center = 0.25;  // bump center
    double width = 0.25;   // bump half-width
    double lo = 0.2;       // plateau rise start
    double hi = 0.7;       // plateau fall end
    double edge = 0.1;     // plateau smooth-edge width

    double operator()(double x) const;
    /// Symbolic check that the family/parameter combination has g'(0) = 0.
    bool derivative_zero_at_origin() const;

    static ModeProfile constant(double value);
    static ModeProfile raised_cosine(double center, double half_width,
                                     double amplitude = 1.0);
    static ModeProfile plateau(double lo, double hi, double edge,
                               double amplitude = 1.0);
};

/// Phi_g = sum_k g(|k|/(N+1)) E_k.
double phi_g(const ModeSpectrum& spectrum, const ModeProfile& profile);
double phi_g(const LatticeState& state, const ModeProfile& profile,
             const ChainParams& params);

struct EnsembleStats {
    double mean = 0.0;
    double variance = 0.0;   // population variance (matches C_F(0))
    double std_error = 0.0;  // batch-means standard error of the mean
    double ess = 0.0;        // effective sample size
    std::vector<double> autocorr;  // normalized autocorrelation by lag
    bool degenerate = false;       // constant observable
};

EnsembleStats ensemble_stats(std::span<const double> values);

using ObservableFn = std::function<double(const LatticeState&)>;

struct AutocorrCurve {
    std::vector<double> times;
    std::vector<double> value;      // C_F(t)
    std::vector<double> std_error;  // ensemble standard error
    int excluded = 0;               // blown-up trajectories dropped
};

/// Time autocorrelation C_F(t) = <F(0)F(t)> - <F>^2 over an ensemble of
/// Gibbs-drawn trajectories evolved with the symplectic integrator.
/// Trajectories that blow up are excluded; more than 1% excluded aborts.
AutocorrCurve autocorrelation(const ObservableFn& observable,
                              const GibbsConfig& gibbs,
                              const IntegratorConfig& dynamics,
                              const std::vector<double>& times,
                              int trajectories, int threads = 1);

struct AdiabaticResult {
    std::vector<double> times;
    std::vector<double> exceedance;     // P(|Phi(t)-Phi(0)| >= delta1 sigma)
    std::vector<double> exceedance_se;  // binomial error bars
    std::vector<double> median_drift;   // median |Phi(t)-Phi(0)| / sigma
    double sigma_phi = 0.0;             // Monte Carlo estimate
    double t_star = 0.0;   // time at which the median drift reaches 0.2
    bool t_star_reached = false;
    int excluded = 0;
};

/// Monte Carlo probe of the adiabatic invariance of Phi_g: exceedance curve
/// with binomial error bars plus the t*(0.2) crossing report.
AdiabaticResult adiabatic_probe(const ModeProfile& profile,
                                const GibbsConfig& gibbs,
                                const IntegratorConfig& dynamics,
                                double delta1, double horizon,
                                int trajectories, int threads = 1);

/// Runs fn(i) for i in [0, n) over the given number of worker threads.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace fpulab

#endif
