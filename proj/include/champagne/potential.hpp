#pragma once

// Closed-form kernels: N, phi, the ball Green function, annulus hitting
// probabilities and the barrier functions used by the construction.

#include "champagne/sphere_nets.hpp"
#include "champagne/vec.hpp"

namespace champagne {

// N(t) = log(1/t) for d=2, t^{2-d} for d>=3.
double kernel_N(double t, int d);
// N(exp(log_t)), finite far below the double range when d=2.
double kernel_N_log(double log_t, int d);
// phi = 1/N; for d=2 only on (0,1).
double phi(double t, int d);
double log_phi_from_log_radius(double log_r, int d);

// Green function of B(0, rho) via Kelvin reflection.
double green_ball(double rho, const Vec3& x, const Vec3& y, int d);

// P(Brownian motion from |z| = s hits |z| = r before |z| = R).
double annulus_hit_prob(double r, double R, double s, int d);
// Same with log radii; stable when r is far below the double range.
double annulus_hit_prob_log(double log_r, double log_R, double log_s, int d);

// Half the annulus hitting probability for (1/7, 1, 1/2).
double eta(int d);

// g(z) = phi(r)(N(|z-x|) - N(a)), the one-bubble barrier.
double one_bubble_barrier(const Vec3& z, const Vec3& x, double r, double a, int d);
double one_bubble_barrier_log(const Vec3& z, const Vec3& x, double log_r, double a, int d);

// a^{d-1} sum_{x in net} G_{B(0,rho)}(z, x), where z and the net share the
// net's center as origin.
double shell_potential(const Vec3& z, const SphereNet& net, double rho_next, int d);

}  // namespace champagne
