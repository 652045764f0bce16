#include <cmath>
#include <numbers>

#include "champagne/philox.hpp"
#include "champagne/potential.hpp"
#include "champagne/schedules.hpp"
#include "doctest.h"

using namespace champagne;
using doctest::Approx;

TEST_CASE("kernels") {
    CHECK(kernel_N(0.5, 2) == Approx(std::log(2.0)));
    CHECK(kernel_N(0.5, 3) == Approx(2.0));
    CHECK(phi(1e-5, 3) == Approx(1e-5));
    CHECK(phi(std::exp(-64.0), 2) == Approx(1.0 / 64));
    CHECK(kernel_N_log(-1e5, 2) == Approx(1e5));
    CHECK(log_phi_from_log_radius(-1e5, 2) == Approx(-std::log(1e5)));
    CHECK(log_phi_from_log_radius(-10.0, 3) == Approx(-10.0));
}

TEST_CASE("ball Green function") {
    const double s = 0.3;
    CHECK(green_ball(1.0, {}, {s, 0, 0}, 3) == Approx(1.0 / s - 1.0));
    CHECK(green_ball(1.0, {}, {0.5, 0, 0}, 2) == Approx(std::log(2.0)));
    PhiloxStream rng(3, 0);
    for (int d : {2, 3}) {
        for (int i = 0; i < 100; ++i) {
            Vec3 x = uniform_direction(rng, d) * (0.95 * rng.uniform());
            Vec3 y = uniform_direction(rng, d) * (0.95 * rng.uniform());
            const double gxy = green_ball(1.0, x, y, d);
            const double gyx = green_ball(1.0, y, x, d);
            CHECK(std::abs(gxy - gyx) <= 1e-12 * std::max(1.0, std::abs(gxy)));
            CHECK(gxy > 0);
        }
        // tends to zero at the sphere
        CHECK(std::abs(green_ball(1.0, {0.2, 0.1, 0}, {0.6 * (1 - 1e-10), 0.8 * (1 - 1e-10), 0}, d)) < 1e-8);
        CHECK_THROWS(green_ball(1.0, {0.2, 0.1, 0}, {0.6, 0.8, 0.1}, d));
    }
}

TEST_CASE("annulus hitting probabilities") {
    CHECK(annulus_hit_prob(1.0 / 7, 1.0, 0.5, 3) == Approx(1.0 / 6).epsilon(1e-14));
    CHECK(annulus_hit_prob(1.0 / 7, 1.0, 0.5, 2) == Approx(std::log(2.0) / std::log(7.0)).epsilon(1e-14));
    CHECK(annulus_hit_prob(1.0 / 7, 1.0, 0.5, 2) == Approx(0.356207).epsilon(1e-6));
    for (int d : {2, 3, 4}) CHECK(annulus_hit_prob(0.2, 1.0, 0.2, d) == Approx(1.0));
    CHECK(annulus_hit_prob_log(std::log(1.0 / 7), 0.0, std::log(0.5), 2) ==
          Approx(annulus_hit_prob(1.0 / 7, 1.0, 0.5, 2)).epsilon(1e-14));
    // tiny inner radius: p ~ log(R/s) / log(R/r)
    CHECK(annulus_hit_prob_log(-1e6, 0.0, std::log(0.5), 2) == Approx(std::log(2.0) / 1e6).epsilon(1e-9));
}

TEST_CASE("eta") {
    CHECK(eta(3) == Approx(1.0 / 12).epsilon(1e-15));
    CHECK(eta(2) == Approx(0.178103).epsilon(1e-6));
    CHECK(eta(4) == Approx(1.0 / 32).epsilon(1e-15));
}

TEST_CASE("one-bubble barrier") {
    const double a = 0.01, alpha = 0.01;
    const double r = radius_from_alpha(a, alpha, 3);
    CHECK(r == Approx(1e-4));
    const Vec3 x{0.5, 0, 0};
    CHECK(one_bubble_barrier(x + Vec3{a, 0, 0}, x, r, a, 3) == Approx(0.0));
    CHECK(one_bubble_barrier(x + Vec3{r, 0, 0}, x, r, a, 3) == Approx(1.0 - phi(r, 3) * kernel_N(a, 3)));
    const double g = one_bubble_barrier(x + Vec3{a / 3, 0, 0}, x, r, a, 3);
    CHECK(g == Approx(0.02));
    CHECK(g > alpha);
    // d=2, log form agrees with the direct one
    const double r2 = radius_from_alpha(0.05, 0.1, 2);
    const Vec3 z = x + Vec3{0.01, 0, 0};
    CHECK(one_bubble_barrier_log(z, x, std::log(r2), 0.05, 2) == Approx(one_bubble_barrier(z, x, r2, 0.05, 2)));
}

TEST_CASE("shell potential at the center") {
    const double R = 0.6, sep = 0.05, rho = 0.7;
    const SphereNet net = build_net({}, R, sep, 3, 0);
    const double expect = sep * sep * static_cast<double>(net.points.size()) * (1.0 / R - 1.0 / rho);
    CHECK(shell_potential({}, net, rho, 3) == Approx(expect).epsilon(1e-12));
    const SphereNet net2 = build_net({}, R, sep, 2, 0);
    CHECK(shell_potential({}, net2, rho, 2) ==
          Approx(sep * static_cast<double>(net2.points.size()) * std::log(rho / R)).epsilon(1e-12));
    CHECK(shell_potential({0.3, 0.2, 0.1}, net, rho, 3) > 0);
}
