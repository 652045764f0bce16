#include "champagne/sphere_nets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "champagne/errors.hpp"
#include "champagne/philox.hpp"
#include "champagne/point_grid.hpp"

namespace champagne {

namespace {

constexpr double kPi = std::numbers::pi;
// d=3 candidates come from a Fibonacci lattice with spacing h; its covering
// radius is below 0.77 h, so a maximal thr-separated subset covers within
// thr + 0.77 h < sep/3.
constexpr double kCandidateSpacing = 1.0 / 10.0;  // h / sep
constexpr double kThinning = 1.0 / 4.0;           // thr / sep
// Measured #points (sep/R)^2 for the greedy d=3 nets.
constexpr double kGreedyConstant3 = 148.0;

struct Rotation {
    double m[3][3];
    Vec3 apply(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z, m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }
};

Rotation random_rotation(std::uint64_t seed) {
    if (seed == 0) return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    // uniform unit quaternion (Shoemake)
    PhiloxStream rng(seed, 0x6e6574ull);
    const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
    const double a = std::sqrt(1 - u1), b = std::sqrt(u1);
    const double w = a * std::sin(2 * kPi * u2), x = a * std::cos(2 * kPi * u2);
    const double y = b * std::sin(2 * kPi * u3), z = b * std::cos(2 * kPi * u3);
    return {{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
             {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
             {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

double circle_count(double R, double sep) { return std::ceil(6.0 * kPi * R / sep * (1.0 - 1e-12)); }

}  // namespace

NetCountBounds net_count_bounds(int d) {
    if (d == 2) return {6.0 * kPi, 6.0 * kPi + 1.0};
    if (d == 3) return {36.0, 16.0 / (kThinning * kThinning)};
    throw DomainError("nets are implemented for d in {2, 3}");
}

double net_count_estimate(double R, double sep, int d) {
    if (d == 2) return circle_count(R, sep);
    if (d == 3) return kGreedyConstant3 * (R / sep) * (R / sep);
    throw DomainError("nets are implemented for d in {2, 3}");
}

double log_net_count_upper(double R, double log_sep, int d) {
    const double hi = net_count_bounds(d).hi;
    return std::log(hi) + (d - 1) * (std::log(R) - log_sep);
}

Vec3 sphere_point(const Vec3& center, double R, int d, double u1, double u2) {
    if (d == 2) {
        const double t = 2 * kPi * u1;
        return center + Vec3{R * std::cos(t), R * std::sin(t), 0.0};
    }
    const double z = 2 * u1 - 1;
    const double rho = std::sqrt(std::max(0.0, 1 - z * z));
    const double t = 2 * kPi * u2;
    return center + Vec3{R * rho * std::cos(t), R * rho * std::sin(t), R * z};
}

SphereNet build_net(const Vec3& center, double R, double sep, int d, std::uint64_t seed, std::size_t cap) {
    if (d != 2 && d != 3) throw DomainError("nets are implemented for d in {2, 3}");
    if (!(sep > 0) || !(R > 0)) throw DomainError("net radius and separation must be positive");
    if (!(sep < 2 * R)) throw DomainError("net separation must be smaller than the sphere diameter");
    const double expected = net_count_estimate(R, sep, d);
    if (expected > static_cast<double>(cap)) throw NetTooLarge(static_cast<std::uint64_t>(std::min(expected, 1.8e19)), cap);

    SphereNet net{center, R, sep, d, {}};
    if (d == 2) {
        const auto n = static_cast<std::size_t>(circle_count(R, sep));
        double offset = 0.0;
        if (seed != 0) offset = PhiloxStream(seed, 0x6e6574ull).uniform() * 2 * kPi / static_cast<double>(n);
        net.points.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double t = offset + 2 * kPi * static_cast<double>(j) / static_cast<double>(n);
            net.points.push_back(center + Vec3{R * std::cos(t), R * std::sin(t), 0.0});
        }
        return net;
    }

    const double h = kCandidateSpacing * sep;
    const double thr = kThinning * sep;
    const auto n_cand = static_cast<std::size_t>(std::ceil(4 * kPi * R * R / (h * h)));
    const Rotation rot = random_rotation(seed);
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    PointGrid grid(thr, 3);
    for (std::size_t i = 0; i < n_cand; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(n_cand);
        const double rho = std::sqrt(std::max(0.0, 1 - z * z));
        const double t = golden * static_cast<double>(i);
        const Vec3 p = rot.apply({rho * std::cos(t), rho * std::sin(t), z}) * R;
        if (!grid.any_within(p, thr)) grid.insert(p);
    }
    net.points.reserve(grid.points().size());
    for (const auto& p : grid.points()) net.points.push_back(center + p);
    return net;
}

NetReport verify_net(const SphereNet& net, std::size_t samples, std::uint64_t seed) {
    NetReport rep;
    rep.samples = samples;
    rep.covering_limit = net.sep / 3.0;
    rep.separation_limit = 2.0 * net.sep / 9.0;
    const double cell = std::max(net.sep / 3.0, 1e-300);
    PointGrid grid(cell, net.d);
    for (const auto& p : net.points) grid.insert(p - net.center);
    PhiloxStream rng(seed, 0x617564ull);
    for (std::size_t i = 0; i < samples; ++i) {
        const double u1 = rng.uniform(), u2 = rng.uniform();
        const Vec3 q = sphere_point({}, net.R, net.d, u1, u2);
        rep.max_nearest = std::max(rep.max_nearest, grid.nearest_distance(q));
    }
    rep.min_pairwise = grid.min_pairwise_distance();
    const double tol = 1e-12 * net.R;
    rep.covering_ok = !net.points.empty() && rep.max_nearest <= rep.covering_limit + tol;
    rep.separation_ok = rep.min_pairwise > rep.separation_limit;
    return rep;
}

}  // namespace champagne
