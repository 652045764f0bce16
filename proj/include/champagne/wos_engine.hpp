#pragma once

// Walk-on-spheres estimates of hitting probabilities for champagne
// configurations.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "champagne/config.hpp"
#include "champagne/obstacle_index.hpp"

namespace champagne {

struct WosParams {
    double eps_obstacle = 1e-3;  // absorption layer, relative to the bubble radius
    double eps_boundary = -1;    // absolute; <= 0 means 1e-6 * domain diameter
    std::uint64_t max_steps = 1'000'000;
    double timeout_cap = 1e-3;
    int threads = 0;             // 0: CHAMPAGNE_THREADS or hardware concurrency
    bool annulus_jump = true;    // exact jump across the annulus around tiny bubbles
};

enum class Limiter { Bubble, DomainBoundary, None };

struct NearestGap {
    double gap = 0;
    Limiter limiter = Limiter::None;
    std::int64_t bubble = -1;
};

enum class Outcome { HitObstacle, HitBoundary, Timeout };

struct TrialResult {
    Outcome outcome = Outcome::Timeout;
    std::int64_t bubble = -1;
    std::uint64_t steps = 0;
};

struct HitEstimate {
    Vec3 start;
    int d = 2;
    double p_hat = 0;
    std::uint64_t trials = 0;
    std::uint64_t hits_obstacle = 0;
    std::uint64_t hits_boundary = 0;
    std::uint64_t timeouts = 0;
    double ci_halfwidth_3sigma = 0;
    std::uint64_t seed = 0;
    std::uint64_t steps = 0;
    bool flagged = false;  // timeout fraction above the cap

    double sigma() const { return ci_halfwidth_3sigma / 3.0; }
};

// Domain plus read-only obstacle index; shareable across threads.
class WosEngine {
public:
    WosEngine(const Domain& domain, const std::vector<Bubble>& bubbles);
    explicit WosEngine(const ChampagneConfig& cfg) : WosEngine(cfg.domain, cfg.bubbles) {}

    NearestGap nearest_gap(const Vec3& z) const;
    TrialResult trial(const Vec3& z0, const WosParams& p, std::uint64_t seed, std::uint64_t trial_index) const;
    HitEstimate hit_probability(const Vec3& z0, std::uint64_t trials, const WosParams& p, std::uint64_t seed) const;

    const Domain& domain() const noexcept { return domain_; }
    std::size_t bubble_count() const noexcept { return radius_.size(); }
    // Closed-bubble membership, exact.
    bool inside_bubble(const Vec3& z) const;

private:
    Domain domain_;
    ObstacleIndex index_;
    std::vector<Vec3> center_;
    std::vector<double> radius_;
    std::vector<double> log_radius_;
    double scale_;
};

int resolve_threads(int requested);

// Estimates over the intermediate ball V_{n+1} for shell k and offset j:
// starts on |z - c| = R + j sep, exits at R + (j+1) sep, only shell-k bubbles.
struct ShellGammaResult {
    long k = 0;
    long j = 0;
    double rho_n = 0;
    double rho_next = 0;
    double alpha = 0;
    std::vector<HitEstimate> points;
    double min_p = 1;          // min p_hat over points
    double min_lower = 1;      // min of p_hat - 3 sigma
};

ShellGammaResult shell_gamma_estimate(const ChampagneConfig& cfg, std::size_t shell_record, long j,
                                      std::size_t z_samples, std::uint64_t trials, std::uint64_t seed,
                                      const WosParams& p = {});
// First shell record whose k matches (outside clusters); throws if absent.
std::size_t find_shell(const ChampagneConfig& cfg, long k, std::int32_t cluster = -1);

// CSV with 17 significant digits: x0..x{d-1},trials,hits_obstacle,hits_boundary,timeouts,p_hat,ci3sigma,seed
std::string estimate_csv_header(int d);
std::string estimate_csv_row(const HitEstimate& e);
std::vector<HitEstimate> read_estimates_csv(std::istream& in);

}  // namespace champagne
