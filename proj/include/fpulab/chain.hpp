#ifndef FPULAB_CHAIN_HPP
#define FPULAB_CHAIN_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace fpulab {

enum class Boundary { periodic, dirichlet };
enum class Model { fpu, toda };

/// Parameters of an M-site chain. For periodic boundaries the indices wrap
/// mod M; for Dirichlet two phantom fixed endpoints q_0 = q_{M+1} = 0 are
/// implied and only the M interior particles are stored.
struct ChainParams {
    int sites = 2;                          // M
    Boundary boundary = Boundary::periodic;
    double quartic = 1.0;                   // A, coefficient of the r^4/24 term
    Model model = Model::fpu;

    void validate() const;
    int bond_count() const {
        return boundary == Boundary::periodic ? sites : sites + 1;
    }
};

/// Phase-space point (q, p) plus time stamp. q and p always have equal
/// length = ChainParams::sites.
struct LatticeState {
    std::vector<double> q;
    std::vector<double> p;
    double t = 0.0;

    static LatticeState zero(int sites) {
        return LatticeState{std::vector<double>(sites, 0.0),
                            std::vector<double>(sites, 0.0), 0.0};
    }
};

/// Displacement differences r_j = q_j - q_{j+1} over all bonds
/// (M bonds periodic, M+1 bonds Dirichlet including the phantom endpoints).
std::vector<double> bond_differences(const LatticeState& state,
                                     const ChainParams& params);

double fpu_energy(const LatticeState& state, const ChainParams& params);
std::vector<double> fpu_forces(const LatticeState& state,
                               const ChainParams& params);

double toda_energy(const LatticeState& state, const ChainParams& params);
std::vector<double> toda_forces(const LatticeState& state,
                                const ChainParams& params);

/// H_FPU - H_Toda + M for a periodic chain; equals
/// (A-1) sum r^4/24 - sum_{l>=5} sum_j r_j^l / l!.
double toda_fpu_gap(const LatticeState& state, const ChainParams& params);

/// Subtracts the mean from q and p (periodic zero-mean submanifold).
/// Idempotent.
LatticeState project_zero_mean(const LatticeState& state);

/// Forces for the model selected in params.
std::vector<double> forces(const LatticeState& state,
                           const ChainParams& params);

/// Total energy for the model selected in params.
double energy(const LatticeState& state, const ChainParams& params);

}  // namespace fpulab

#endif
