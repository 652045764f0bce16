#pragma once

// Analytic checks on configurations: capacity sums, the iterated-log sums,
// (k-est) ratios, the product lower bound and the unavoidability certificate.

#include <optional>
#include <string>
#include <vector>

#include "champagne/config.hpp"
#include "champagne/wos_engine.hpp"

namespace champagne {

// sum over bubbles of phi(r_x) f(phi(r_x)), in log space.
double capacity_sum(const ChampagneConfig& cfg, const CapacityWeight& w);
// d=2: sum (log 1/r)^-1 (log^(n+1) 1/r)^-1; d>=3: sum r^{d-2} (log^(n) 1/r)^-1.
double theorem1_sum(const ChampagneConfig& cfg, int n);
// Weight whose capacity sum equals theorem1_sum for the given n.
CapacityWeight theorem1_weight(int d, int n);
// 1 - prod (1 - gamma_j), via log1p.
double product_lower_bound(const std::vector<double>& gammas);
// (#X_k phi(r_k) f(phi(r_k))) / (beta_k f(alpha_k^{d-1})) for a shell record.
double kest_ratio(const ChampagneConfig& cfg, const CapacityWeight& w, std::size_t shell_record);

// One shell's contribution for the unit-ball construction, from closed forms
// (no net is built): log of count * phi * f(phi) where the count is the
// exact d=2 net size or the d=3 upper bound.
double log_shell_term(const Schedule& s, const CapacityWeight& w, long k);

struct DeltaResult {
    double delta = 0;
    long k_lo = 0;
    long k_hi = 0;
    double partial = 0;     // sum of shell terms over [k_lo, k_hi]
    double tail_bound = 0;  // analytic bound beyond k_hi
    double total() const { return partial + tail_bound; }
    bool pass() const { return total() < delta; }
};
// Smallest k_lo (>= max(k0, k1)) whose truncated sum plus tail bound is below
// delta, with k_hi = k_lo + horizon.
DeltaResult find_k_lo_for_delta(const Schedule& s, const CapacityWeight& w, double delta, long horizon = 1000);
DeltaResult delta_total(const Schedule& s, const CapacityWeight& w, long k_lo, long horizon = 1000);

struct CertificateReport {
    double bound = 0;           // 1 - prod (1 - gamma_hat)
    double sigma_combined = 0;  // delta-method sigma of p_hat - bound
    double gamma_partial_sum = 0;
    double extrapolated = 0;    // 1 - exp(-sum gamma_hat), extrapolation only
    double p_hat = 0;
    std::vector<double> trajectory;  // bound after each shell
    bool pass = false;          // p_hat >= bound - 3 sigma_combined
};
CertificateReport unavoidability_certificate(const std::vector<double>& gamma_hat,
                                             const std::vector<double>& gamma_sigma, const HitEstimate& global);

struct ShellRow {
    std::int32_t cluster = -1;
    long k = 0;
    std::uint64_t count = 0;
    double phi_r = 0;
    double cap_term = 0;
    double kest = 0;
    std::optional<double> gamma_hat;
    std::optional<double> cum_bound;
};

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    std::string construction;
    std::string weight;
    std::vector<ShellRow> rows;
    double capacity_total = 0;
    double kest_max = 0;
    double kest_min = 0;
    std::vector<Check> checks;
    std::optional<CertificateReport> certificate;

    bool pass() const;
    std::string to_json() const;
    std::string to_csv() const;
    std::string to_table() const;
};

struct VerifyOptions {
    std::optional<double> delta;                    // capacity sum < delta
    std::optional<std::vector<HitEstimate>> results;  // certificate input (first row is the global run)
    std::size_t gamma_samples = 8;
    std::uint64_t gamma_trials = 2000;
    std::uint64_t seed = 1;
    bool audit = true;
    WosParams wos;
};

VerificationReport verify_config(const ChampagneConfig& cfg, const CapacityWeight& w, const VerifyOptions& opt);

// Per-level estimate of H_{V_{n+1} \ E_n} 1_{E_n} on the boundary of V_n for
// general configurations (E_n: the level-n bubbles).
struct LevelGamma {
    int n = 0;
    std::vector<HitEstimate> points;
    double min_p = 1;
    double min_lower = 1;
};
LevelGamma level_gamma_estimate(const ChampagneConfig& cfg, int n, std::size_t z_samples, std::uint64_t trials,
                                std::uint64_t seed, const WosParams& p = {});
// Exhaustion level containing z (smallest n with z in closed V_n), L+1 if none.
int first_level_containing(const ChampagneConfig& cfg, const Vec3& z);

}  // namespace champagne
