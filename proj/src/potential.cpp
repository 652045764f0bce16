#include "champagne/potential.hpp"

#include <cmath>

#include "champagne/errors.hpp"

namespace champagne {

namespace {
void check_dim(int d) {
    if (d < 2) throw DomainError("dimension must be at least 2");
}
}  // namespace

double kernel_N(double t, int d) {
    check_dim(d);
    if (!(t > 0)) throw DomainError("kernel argument must be positive");
    return d == 2 ? -std::log(t) : std::pow(t, 2.0 - d);
}

double kernel_N_log(double log_t, int d) {
    check_dim(d);
    return d == 2 ? -log_t : std::exp((2.0 - d) * log_t);
}

double phi(double t, int d) {
    if (d == 2 && !(t > 0 && t < 1)) throw DomainError("phi in the plane needs t in (0,1)");
    return 1.0 / kernel_N(t, d);
}

double log_phi_from_log_radius(double log_r, int d) {
    check_dim(d);
    if (d == 2) {
        if (!(log_r < 0)) throw DomainError("phi in the plane needs r < 1");
        return -std::log(-log_r);
    }
    return (d - 2.0) * log_r;
}

double green_ball(double rho, const Vec3& x, const Vec3& y, int d) {
    check_dim(d);
    const double r2 = rho * rho;
    const double xx = dot(x, x), yy = dot(y, y);
    if (!(xx < r2) || !(yy < r2)) throw DomainError("green_ball: points must lie inside the ball");
    const double dxy = distance(x, y);
    if (!(dxy > 0)) throw DomainError("green_ball: x and y coincide");
    // T = |x| |y - x*| / rho, written without dividing by |x|
    const double T2 = xx * yy / r2 - 2.0 * dot(x, y) + r2;
    const double T = std::sqrt(std::max(T2, 0.0));
    if (d == 2) return std::log(T / dxy);
    return std::pow(dxy, 2.0 - d) - std::pow(T, 2.0 - d);
}

double annulus_hit_prob(double r, double R, double s, int d) {
    check_dim(d);
    if (!(r > 0) || !(r <= s) || !(s <= R)) throw DomainError("annulus_hit_prob needs 0 < r <= s <= R");
    if (r == R) return 1.0;
    return annulus_hit_prob_log(std::log(r), std::log(R), std::log(s), d);
}

double annulus_hit_prob_log(double log_r, double log_R, double log_s, int d) {
    check_dim(d);
    if (!(log_r <= log_s) || !(log_s <= log_R)) throw DomainError("annulus_hit_prob needs r <= s <= R");
    if (log_s == log_r) return 1.0;
    if (d == 2) return (log_R - log_s) / (log_R - log_r);
    // ((s/r)^{2-d} - (R/r)^{2-d}) / (1 - (R/r)^{2-d})
    const double q = 2.0 - d;
    const double num = std::exp(q * (log_s - log_r)) - std::exp(q * (log_R - log_r));
    const double den = -std::expm1(q * (log_R - log_r));
    return num / den;
}

double eta(int d) { return 0.5 * annulus_hit_prob(1.0 / 7.0, 1.0, 0.5, d); }

double one_bubble_barrier(const Vec3& z, const Vec3& x, double r, double a, int d) {
    if (!(r > 0)) throw DomainError("one_bubble_barrier needs r > 0");
    return one_bubble_barrier_log(z, x, std::log(r), a, d);
}

double one_bubble_barrier_log(const Vec3& z, const Vec3& x, double log_r, double a, int d) {
    const double dz = distance(z, x);
    if (!(dz > 0)) throw DomainError("one_bubble_barrier: z coincides with the bubble center");
    if (!(log_r < std::log(a))) throw DomainError("one_bubble_barrier needs r < a");
    const double p = std::exp(log_phi_from_log_radius(log_r, d));
    return p * (kernel_N(dz, d) - kernel_N(a, d));
}

double shell_potential(const Vec3& z, const SphereNet& net, double rho_next, int d) {
    const Vec3 zc = z - net.center;
    if (!(norm(zc) < rho_next)) throw DomainError("shell_potential: z outside the ball");
    double sum = 0.0;
    for (const auto& x : net.points) sum += green_ball(rho_next, zc, x - net.center, d);
    return std::pow(net.sep, d - 1.0) * sum;
}

}  // namespace champagne
