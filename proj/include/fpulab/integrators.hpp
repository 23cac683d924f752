#ifndef FPULAB_INTEGRATORS_HPP
#define FPULAB_INTEGRATORS_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "fpulab/chain.hpp"
#include "fpulab/spectral.hpp"

namespace fpulab {

enum class Scheme { verlet, yoshida4 };

struct IntegratorConfig {
    double dt = 0.05;
    Scheme scheme = Scheme::yoshida4;
    double total_time = 0.0;
    int stride = 1;               // sample every this many steps
    bool store_snapshots = false;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("integrator: dt must be positive");
        if (stride < 1) throw std::invalid_argument("integrator: stride must be >= 1");
        if (total_time < 0.0)
            throw std::invalid_argument("integrator: total time must be >= 0");
    }
};

/// Thrown when a trajectory leaves the finite range (|q| or |p| > 1e8 or
/// non-finite values). Carries the blow-up time and the trace so far.
class BlowupError : public std::runtime_error {
  public:
    BlowupError(double time, EnergyTrace partial)
        : std::runtime_error("trajectory blow-up at t = " +
                             std::to_string(time)),
          time_(time),
          partial_(std::move(partial)) {}

    double time() const { return time_; }
    const EnergyTrace& partial_trace() const { return partial_; }

  private:
    double time_;
    EnergyTrace partial_;
};

/// One symplectic step (velocity Verlet or the 4th-order Yoshida
/// triple-composition of Verlet).
LatticeState step(const LatticeState& state, const ChainParams& params,
                  const IntegratorConfig& config);

using Observer = std::function<void(const LatticeState&)>;

struct EvolveResult {
    EnergyTrace trace;
    std::vector<LatticeState> snapshots;  // filled if store_snapshots
    LatticeState final_state;
};

/// Integrates to total_time, sampling mode energies (and invoking the
/// observer) every stride steps, always including the initial and final
/// samples. Deterministic given its inputs.
EvolveResult evolve(const LatticeState& initial, const ChainParams& params,
                    const IntegratorConfig& config, const Observer& observer = {});

}  // namespace fpulab

#endif
