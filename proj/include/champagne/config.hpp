#pragma once

// The persisted champagne configuration and its JSON form.

#include <cstdint>
#include <string>
#include <vector>

#include "champagne/domain.hpp"
#include "champagne/schedules.hpp"
#include "champagne/vec.hpp"

namespace champagne {

struct Bubble {
    Vec3 center;
    double radius = 0;      // 0 when below the double range
    double log_radius = 0;  // authoritative
    std::int32_t shell_k = 0;
    std::int32_t group = -1;  // cluster id, -1 outside clusters
    std::int64_t net_index = 0;
};

// One placed shell: a net of `count` bubbles of equal radius on a sphere.
struct ShellRecord {
    std::int32_t cluster = -1;
    long k = 0;
    std::uint64_t count = 0;
    double R = 0;      // sphere radius, after scaling
    double sep = 0;    // net separation a_k, after scaling
    double alpha = 0;  // gamma_n for the intermediate balls of this shell
    std::uint64_t m = 0;
    double log_r = 0;  // bubble log-radius, after scaling
    std::uint64_t first_bubble = 0;
};

// A localized Corollary construction around y.
struct Cluster {
    std::int32_t id = 0;
    std::int32_t level = 0;
    Vec3 y;
    double R_outer = 0;
    double r_inner = 0;
    double delta_y = 0;
    long k_first = 0;
    long k_last = 0;  // exclusive
    double capacity = 0;
};

// One exhaustion level of the general-domain construction.
struct LevelRecord {
    int n = 0;
    double shrink = 0;
    double b = 0;
    std::uint64_t y_count = 0;
    double delta_y = 0;
    double delta_level = 0;
};

struct ChampagneConfig {
    std::string construction = "custom";  // ball | corollary | general | custom
    int d = 2;
    Domain domain;
    Schedule schedule;
    CapacityWeight weight;
    long k_lo = 0;
    long k_hi = -1;
    std::uint64_t seed = 0;
    double c_eff = 0;
    double delta = 0;
    std::vector<Bubble> bubbles;
    std::vector<ShellRecord> shells;
    std::vector<Cluster> clusters;
    std::vector<LevelRecord> levels;
    double capacity_sum = 0;

    double min_radius() const;  // smallest positive radius, +inf if none
};

// Single centered bubble B(0, r) inside B(0, R): the annulus test geometry.
ChampagneConfig make_annulus_config(int d, double r, double R);

std::string config_to_json(const ChampagneConfig& cfg, int indent = -1);
ChampagneConfig config_from_json(const std::string& text);
void save_config(const ChampagneConfig& cfg, const std::string& path);
ChampagneConfig load_config(const std::string& path);

}  // namespace champagne
