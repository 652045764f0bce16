#pragma once

// Finite point sets on spheres whose sep/3-balls cover the sphere and whose
// sep/9-balls are pairwise disjoint.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "champagne/vec.hpp"

namespace champagne {

inline constexpr std::size_t kDefaultNetCap = 4'000'000;

struct SphereNet {
    Vec3 center;
    double R = 1.0;
    double sep = 0.1;
    int d = 2;
    std::vector<Vec3> points;
};

// Bounds on #points * (sep/R)^{d-1} that every net from build_net satisfies.
// d=2: [6 pi, 6 pi + 1]. d=3: [36, 256] from the covering and packing areas.
struct NetCountBounds {
    double lo;
    double hi;
};
NetCountBounds net_count_bounds(int d);

// Exact count for d=2; for d=3 a typical count (the greedy constant times the
// area ratio), used for the memory cap and for nets that are never built.
double net_count_estimate(double R, double sep, int d);
// log of an upper bound on the count, finite for any sep > 0.
double log_net_count_upper(double R, double log_sep, int d);

SphereNet build_net(const Vec3& center, double R, double sep, int d, std::uint64_t seed,
                    std::size_t cap = kDefaultNetCap);

struct NetReport {
    std::size_t samples = 0;
    double max_nearest = 0;        // over the random probes
    double covering_limit = 0;     // sep/3
    double min_pairwise = 0;
    double separation_limit = 0;   // 2 sep/9
    bool covering_ok = false;
    bool separation_ok = false;
    bool pass() const { return covering_ok && separation_ok; }
};

NetReport verify_net(const SphereNet& net, std::size_t samples, std::uint64_t seed);

// Uniform point on the sphere |z - center| = R.
Vec3 sphere_point(const Vec3& center, double R, int d, double u1, double u2);

}  // namespace champagne
