#pragma once

// Assembly of champagne configurations: unit-ball shells, the localized
// y-ball construction, and general domains through an exhaustion.

#include <cstdint>
#include <optional>
#include <vector>

#include "champagne/config.hpp"
#include "champagne/sphere_nets.hpp"
#include "champagne/wos_engine.hpp"

namespace champagne {

// Smallest k >= k0 with r_j < a_j / 100 for all j >= k (scanned to `horizon`,
// the ratio being eventually decreasing for every built-in family).
long compute_k1(const Schedule& s, long horizon = 100'000);
// log(r_k / a_k)
double log_radius_ratio(const Schedule& s, long k);

struct BuildOptions {
    std::optional<long> k2;             // default: k1
    std::size_t net_cap = kDefaultNetCap;
    std::uint64_t max_bubbles = 20'000'000;
    bool audit = true;                  // disjointness sweep after building
    long k_search_horizon = 400;        // Corollary shell search window
};

ChampagneConfig build_ball_config(const Schedule& s, const CapacityWeight& w, long k_lo, long k_hi, int d,
                                  std::uint64_t seed, const BuildOptions& opt = {});

// Shell window [k_first, k_last) of a y-ball construction at scale R.
struct CorollaryPlan {
    long k_first = 0;
    long k_last = 0;
    double log_product = 0;       // sum m_k log(1 - c alpha_k) over the window
    double capacity = 0;          // placed capacity at scale R
    std::uint64_t bubble_estimate = 0;
};

CorollaryPlan plan_corollary(double r, double R, double gamma, double delta_y, const Schedule& s,
                             const CapacityWeight& w, double c_eff, const BuildOptions& opt = {});

ChampagneConfig build_corollary_config(const Vec3& y, double r, double R, double gamma, double delta_y,
                                       const Schedule& s, const CapacityWeight& w, double c_eff,
                                       std::uint64_t seed, const BuildOptions& opt = {});

// Exhaustion by inner parallel sets V_n = U.shrink(shrink[n-1]); the amounts
// must be strictly decreasing and positive. The last level uses U itself as
// V_{L+1}.
struct Exhaustion {
    std::vector<double> shrink;
};
Exhaustion auto_exhaustion(const Domain& dom, int levels);
// b_n for n = 1..L.
std::vector<double> exhaustion_scales(const Exhaustion& ex);

ChampagneConfig build_general_config(const Domain& dom, const Exhaustion& ex, double delta, const Schedule& s,
                                     const CapacityWeight& w, double c_eff, std::uint64_t seed,
                                     const BuildOptions& opt = {});

// Points of the boundary of D whose b/2-balls cover it and whose b/6-balls
// are pairwise disjoint.
std::vector<Vec3> boundary_net(const Domain& D, double b, std::uint64_t seed);

struct NetAudit {
    double max_nearest = 0;
    double min_pairwise = 0;
    bool pass = false;
};
NetAudit audit_boundary_net(const Domain& D, const std::vector<Vec3>& Y, double b, std::size_t samples,
                            std::uint64_t seed);

// First pair of intersecting closed bubbles, if any.
std::optional<std::pair<std::size_t, std::size_t>> find_overlap(const std::vector<Bubble>& bubbles);
std::optional<std::pair<std::size_t, std::size_t>> find_overlap_brute(const std::vector<Bubble>& bubbles);
// sup_x r_x / dist(x, complement of U); 0 for radii below the double range.
double max_radius_to_gap(const ChampagneConfig& cfg);

// Capacity terms, computed from the shell table in log space.
double shell_capacity_term(const ShellRecord& sh, const CapacityWeight& w, int d);
double config_capacity(const ChampagneConfig& cfg, const CapacityWeight& w);

struct Calibration {
    double c_eff = 0;
    struct Row {
        long k, j;
        double alpha, min_p, min_lower, ratio;
    };
    std::vector<Row> rows;
};
// min over shells k_first..k_first+shells-1 and j in {0, m/2, m-1} of
// (min_z p_hat - 3 sigma) / alpha_k, on unit-ball shells.
Calibration calibrate_c_eff(const Schedule& s, long k_first, int shells, std::size_t z_samples,
                            std::uint64_t trials, std::uint64_t seed, const WosParams& p = {});

}  // namespace champagne
