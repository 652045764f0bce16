#include <cmath>
#include <sstream>

#include "champagne/builder.hpp"
#include "champagne/errors.hpp"
#include "champagne/philox.hpp"
#include "champagne/potential.hpp"
#include "champagne/wos_engine.hpp"
#include "doctest.h"

using namespace champagne;
using doctest::Approx;

namespace {
Bubble bubble(Vec3 c, double r) {
    Bubble b;
    b.center = c;
    b.radius = r;
    b.log_radius = std::log(r);
    return b;
}
}  // namespace

TEST_CASE("nearest gap") {
    const WosEngine e(Domain::unit_ball(2), {bubble({0.5, 0, 0}, 0.1)});
    const NearestGap g = e.nearest_gap({0, 0, 0});
    CHECK(g.gap == Approx(0.4));
    CHECK(g.limiter == Limiter::Bubble);
    CHECK(g.bubble == 0);
    const NearestGap h = e.nearest_gap({-0.95, 0, 0});
    CHECK(h.gap == Approx(0.05));
    CHECK(h.limiter == Limiter::DomainBoundary);
}

TEST_CASE("nearest gap matches brute force") {
    PhiloxStream rng(5, 1);
    for (int d : {2, 3}) {
        std::vector<Bubble> bs;
        for (int i = 0; i < 2000; ++i) {
            const Vec3 c = uniform_direction(rng, d) * (0.9 * rng.uniform());
            bs.push_back(bubble(c, 1e-4 + 2e-3 * rng.uniform()));
        }
        const Domain D = Domain::unit_ball(d);
        const WosEngine e(D, bs);
        for (int q = 0; q < 10000; ++q) {
            const Vec3 z = uniform_direction(rng, d) * rng.uniform();
            bool inside = false;
            for (const auto& b : bs) inside = inside || distance(z, b.center) <= b.radius;
            if (inside) continue;
            double best = D.boundary_gap(z);
            Limiter lim = Limiter::DomainBoundary;
            for (const auto& b : bs) {
                const double g = distance(z, b.center) - b.radius;
                if (g < best) {
                    best = g;
                    lim = Limiter::Bubble;
                }
            }
            const NearestGap g = e.nearest_gap(z);
            CHECK(g.gap == best);
            CHECK(g.limiter == lim);
        }
    }
}

TEST_CASE("trial edge cases") {
    const WosEngine e(Domain::unit_ball(2), {bubble({0.5, 0, 0}, 0.1)});
    const TrialResult t = e.trial({0.5 + 0.1 + 1e-6, 0, 0}, {}, 1, 0);
    CHECK(t.outcome == Outcome::HitObstacle);
    CHECK(t.steps == 0);
    const WosEngine empty(Domain::unit_ball(2), {});
    const HitEstimate h = empty.hit_probability({0.2, 0.1, 0}, 2000, {}, 3);
    CHECK(h.hits_boundary == 2000);
    CHECK(h.p_hat == 0.0);
    CHECK(h.steps / 2000 < 100);
    CHECK_THROWS_AS(e.hit_probability({0, 0, 0}, 0, {}, 1), DomainError);
    CHECK(e.inside_bubble({0.55, 0, 0}));
    CHECK_FALSE(e.inside_bubble({0.3, 0, 0}));
}

TEST_CASE("annulus oracle") {
    for (int d : {2, 3}) {
        const WosEngine e(make_annulus_config(d, 1.0 / 7, 1.0));
        const HitEstimate h = e.hit_probability({0.5, 0, 0}, 20000, {}, 11);
        const double exact = annulus_hit_prob(1.0 / 7, 1.0, 0.5, d);
        CHECK(std::abs(h.p_hat - exact) <= h.ci_halfwidth_3sigma);
        CHECK(h.timeouts == 0);
        CHECK_FALSE(h.flagged);
    }
}

TEST_CASE("tiny bubble: annulus jump agrees with the closed form") {
    // log r = -200 is far below anything a walk could resolve step by step
    ChampagneConfig cfg = make_annulus_config(2, 0.1, 1.0);
    cfg.bubbles[0].radius = std::exp(-200.0);
    cfg.bubbles[0].log_radius = -200.0;
    const WosEngine e(cfg);
    const HitEstimate h = e.hit_probability({0.5, 0, 0}, 40000, {}, 2);
    const double exact = annulus_hit_prob_log(-200.0, 0.0, std::log(0.5), 2);
    CHECK(std::abs(h.p_hat - exact) <= h.ci_halfwidth_3sigma + 1e-3);
}

TEST_CASE("determinism across thread counts") {
    const ChampagneConfig cfg = build_ball_config(Schedule::tower(2, 1), CapacityWeight::iter_log_cubed(1), 3, 3, 2, 1);
    const WosEngine e(cfg);
    WosParams p1, p4;
    p1.threads = 1;
    p4.threads = 4;
    const HitEstimate a = e.hit_probability({0.1, 0.2, 0}, 3000, p1, 42);
    const HitEstimate b = e.hit_probability({0.1, 0.2, 0}, 3000, p4, 42);
    CHECK(estimate_csv_row(a) == estimate_csv_row(b));
    CHECK(a.steps == b.steps);
}

TEST_CASE("confidence width follows the square-root law") {
    const WosEngine e(make_annulus_config(3, 1.0 / 7, 1.0));
    const HitEstimate a = e.hit_probability({0.5, 0, 0}, 10000, {}, 1);
    const HitEstimate b = e.hit_probability({0.5, 0, 0}, 40000, {}, 1);
    CHECK(a.ci_halfwidth_3sigma / b.ci_halfwidth_3sigma == Approx(2.0).epsilon(0.2));
}

TEST_CASE("shell estimate at a bubble is 1") {
    const ChampagneConfig cfg = build_ball_config(Schedule::one_bubble(2), CapacityWeight::power(2), 9, 9, 2, 0);
    const auto est = shell_gamma_estimate(cfg, 0, 0, 4, 2000, 3);
    CHECK(est.rho_next - est.rho_n == Approx(cfg.shells[0].sep));
    CHECK(est.min_p > 0);
    for (const auto& p : est.points) CHECK(p.p_hat >= one_bubble_barrier_log(p.start, cfg.bubbles[0].center,
                                                                               cfg.bubbles[0].log_radius,
                                                                               cfg.shells[0].sep, 2) -
                                                          p.ci_halfwidth_3sigma);
    // the bubble center's own sphere: start exactly on a bubble
    const WosEngine e(cfg);
    const Vec3 on = cfg.bubbles[0].center + Vec3{cfg.bubbles[0].radius, 0, 0};
    CHECK(e.hit_probability(on, 100, {}, 1).p_hat == 1.0);
}

TEST_CASE("CSV round trip") {
    const WosEngine e(make_annulus_config(2, 1.0 / 7, 1.0));
    const HitEstimate h = e.hit_probability({0.5, 0.125, 0}, 500, {}, 9);
    std::stringstream ss;
    ss << "# comment\n" << estimate_csv_header(2) << "\n" << estimate_csv_row(h) << "\n";
    const auto back = read_estimates_csv(ss);
    REQUIRE(back.size() == 1);
    CHECK(back[0].p_hat == h.p_hat);
    CHECK(back[0].start == h.start);
    CHECK(back[0].trials == 500);
    CHECK(back[0].seed == 9);
    CHECK(estimate_csv_row(back[0]) == estimate_csv_row(h));
}
