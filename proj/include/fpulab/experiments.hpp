#ifndef FPULAB_EXPERIMENTS_HPP
#define FPULAB_EXPERIMENTS_HPP

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fpulab/gibbs.hpp"
#include "fpulab/integrators.hpp"
#include "fpulab/kdv.hpp"
#include "fpulab/spectral.hpp"
#include "fpulab/toda.hpp"

namespace fpulab {

/// Flat key = value configuration with [section] headers. Keys are stored as
/// "section.key". Lines starting with # or ; are comments.
class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    std::string get_string(const std::string& key,
                           std::optional<std::string> fallback = {}) const;
    double get_double(const std::string& key,
                      std::optional<double> fallback = {}) const;
    int get_int(const std::string& key, std::optional<int> fallback = {}) const;
    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value);

    /// FNV-1a hash of the canonicalized (sorted) key/value pairs.
    std::uint64_t hash() const;

    ChainParams chain(const std::string& section = "chain") const;
    IntegratorConfig integrator(const std::string& section = "integrator") const;
    GibbsConfig gibbs(const std::string& section = "gibbs") const;

  private:
    std::map<std::string, std::string> values_;
};

/// CSV writer: header row, one provenance comment with the config hash, and
/// floats serialized with 17 significant digits.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns,
              std::uint64_t config_hash);
    void row(const std::vector<double>& values);

  private:
    std::ofstream out_;
    std::size_t columns_;
};

namespace experiments {

struct FpuRecurrenceResult {
    double e1_initial = 0.0;
    double recurrence_time = 0.0;
    double recurrence_ratio = 0.0;  // best E1 return after the first dip
    PacketFit packet;               // fit of <E_k>(T) at final T
    double n_eff_final = 0.0;
    std::vector<double> final_averages;
};

FpuRecurrenceResult run_fpu_recurrence(const Config& cfg,
                                       const std::string& out_dir);

struct KdvCompareResult {
    std::vector<int> lattice_n;
    std::vector<double> max_error;       // sup_t sup_j |r - r^KdV| per N
    double order = 0.0;                  // fitted mu-exponent of the error
    double min_packet_sigma = 0.0;       // smallest fitted sigma along runs
    double max_specific_tail = 0.0;      // largest E_k(t)/(mu^4 e^{-sigma k}+mu^5)
};

KdvCompareResult run_kdv_compare(const Config& cfg, const std::string& out_dir);

struct TodaDriftResult {
    double toda_drift = 0.0;        // Lax drift under the Toda flow
    double toda_drift_half_dt = 0.0;
    double fpu_drift_a1 = 0.0;      // Lax drift under FPU flow, A = 1
    double fpu_drift_a2 = 0.0;      // Lax drift under FPU flow, A = 2
    std::vector<int> scan_n;
    std::vector<double> scan_drift;  // weighted action drift plateau per N
    double scan_exponent = 0.0;      // fitted mu-exponent
    double packet_weighted_max = 0.0;  // max_t max_k E_k e^{2 sigma k} / mu^4
};

TodaDriftResult run_toda_drift(const Config& cfg, const std::string& out_dir);

struct GibbsAdiabaticResult {
    std::vector<double> betas;
    std::vector<double> t_star;       // t*(0.2) per beta
    std::vector<double> exceedance_at_quarter_beta;  // P at t = beta/4, delta1 from cfg
    double slope = 0.0;               // linear fit t* vs beta
    double r_squared = 0.0;
};

GibbsAdiabaticResult run_gibbs_adiabatic(const Config& cfg,
                                         const std::string& out_dir);

}  // namespace experiments

}  // namespace fpulab

#endif
