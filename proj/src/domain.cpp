#include "champagne/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "champagne/errors.hpp"
#include "champagne/philox.hpp"
#include "champagne/sphere_nets.hpp"

namespace champagne {

namespace {
void check_dim(int d) {
    if (d != 2 && d != 3) throw DomainError("domains are implemented for d in {2, 3}");
}
Vec3 flat(Vec3 v, int d) {
    if (d == 2) v.z = 0;
    return v;
}
}  // namespace

Domain Domain::unit_ball(int d) {
    check_dim(d);
    Domain D;
    D.kind = DomainKind::UnitBall;
    D.d = d;
    D.balls = {{{}, 1.0}};
    return D;
}

Domain Domain::ball(int d, const Vec3& center, double R) {
    check_dim(d);
    if (!(R > 0)) throw DomainError("ball radius must be positive");
    Domain D;
    D.kind = DomainKind::Ball;
    D.d = d;
    D.balls = {{flat(center, d), R}};
    return D;
}

Domain Domain::box(int d, const Vec3& lo, const Vec3& hi) {
    check_dim(d);
    for (int i = 0; i < d; ++i)
        if (!(lo[i] < hi[i])) throw DomainError("box corners must satisfy lo < hi");
    Domain D;
    D.kind = DomainKind::Box;
    D.d = d;
    D.lo = flat(lo, d);
    D.hi = flat(hi, d);
    return D;
}

Domain Domain::union_of_balls(int d, std::vector<BallShape> balls) {
    check_dim(d);
    if (balls.empty()) throw DomainError("union of balls needs at least one ball");
    for (auto& b : balls) {
        if (!(b.radius > 0)) throw DomainError("ball radius must be positive");
        b.center = flat(b.center, d);
    }
    Domain D;
    D.kind = DomainKind::UnionOfBalls;
    D.d = d;
    D.balls = std::move(balls);
    if (!D.connected()) throw DomainError("union of balls is not connected");
    return D;
}

double Domain::boundary_gap(const Vec3& z) const {
    if (kind == DomainKind::Box) {
        double g = std::numeric_limits<double>::infinity();
        for (int i = 0; i < d; ++i) g = std::min({g, z[i] - lo[i], hi[i] - z[i]});
        return g;
    }
    double g = -std::numeric_limits<double>::infinity();
    for (const auto& b : balls) g = std::max(g, b.radius - distance(z, b.center));
    return g;
}

Vec3 Domain::bbox_lo() const {
    if (kind == DomainKind::Box) return lo;
    Vec3 m{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity()};
    for (const auto& b : balls)
        for (int i = 0; i < 3; ++i) m[i] = std::min(m[i], b.center[i] - b.radius);
    if (d == 2) m.z = 0;
    return m;
}

Vec3 Domain::bbox_hi() const {
    if (kind == DomainKind::Box) return hi;
    Vec3 m{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
    for (const auto& b : balls)
        for (int i = 0; i < 3; ++i) m[i] = std::max(m[i], b.center[i] + b.radius);
    if (d == 2) m.z = 0;
    return m;
}

double Domain::diameter() const {
    if (kind == DomainKind::Box) return distance(lo, hi);
    // exact for unions of balls: farthest pair of points on two spheres
    double m = 0;
    for (const auto& a : balls)
        for (const auto& b : balls) m = std::max(m, distance(a.center, b.center) + a.radius + b.radius);
    return m;
}

Domain Domain::shrink(double s) const {
    if (!(s >= 0)) throw DomainError("shrink amount must be non-negative");
    Domain D = *this;
    if (kind == DomainKind::Box) {
        for (int i = 0; i < d; ++i) {
            D.lo[i] += s;
            D.hi[i] -= s;
            if (!(D.lo[i] < D.hi[i])) throw DomainError("shrink removes the whole box");
        }
        return D;
    }
    D.balls.clear();
    for (const auto& b : balls)
        if (b.radius > s) D.balls.push_back({b.center, b.radius - s});
    if (D.balls.empty()) throw DomainError("shrink removes the whole domain");
    if (kind == DomainKind::UnitBall && s > 0) D.kind = DomainKind::Ball;
    return D;
}

bool Domain::connected() const {
    if (kind != DomainKind::UnionOfBalls || balls.size() <= 1) return true;
    std::vector<int> seen(balls.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const auto i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < balls.size(); ++j)
            if (!seen[j] && distance(balls[i].center, balls[j].center) < balls[i].radius + balls[j].radius) {
                seen[j] = 1;
                stack.push_back(j);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](int v) { return v != 0; });
}

std::string Domain::kind_name() const {
    switch (kind) {
        case DomainKind::UnitBall: return "unit-ball";
        case DomainKind::Ball: return "ball";
        case DomainKind::Box: return "box";
        case DomainKind::UnionOfBalls: return "union-of-balls";
    }
    return "?";
}

Vec3 sample_boundary(const Domain& D, PhiloxStream& rng) {
    if (D.kind == DomainKind::Box) {
        // pick a face with probability proportional to its area
        std::vector<double> w;
        for (int a = 0; a < D.d; ++a) {
            double area = 1;
            for (int b = 0; b < D.d; ++b)
                if (b != a) area *= D.hi[b] - D.lo[b];
            w.push_back(area);
            w.push_back(area);
        }
        double total = 0;
        for (double v : w) total += v;
        double u = rng.uniform() * total;
        std::size_t f = 0;
        while (f + 1 < w.size() && u > w[f]) u -= w[f++];
        const int axis = static_cast<int>(f / 2);
        Vec3 p;
        for (int b = 0; b < D.d; ++b) p[b] = D.lo[b] + rng.uniform() * (D.hi[b] - D.lo[b]);
        p[axis] = f % 2 == 0 ? D.lo[axis] : D.hi[axis];
        return p;
    }
    std::vector<double> w;
    double total = 0;
    for (const auto& b : D.balls) {
        const double area = D.d == 2 ? b.radius : b.radius * b.radius;
        w.push_back(area);
        total += area;
    }
    for (int attempt = 0; attempt < 1'000'000; ++attempt) {
        double u = rng.uniform() * total;
        std::size_t i = 0;
        while (i + 1 < w.size() && u > w[i]) u -= w[i++];
        const double u1 = rng.uniform(), u2 = rng.uniform();
        const Vec3 p = sphere_point(D.balls[i].center, D.balls[i].radius, D.d, u1, u2);
        bool covered = false;
        for (std::size_t j = 0; j < D.balls.size() && !covered; ++j)
            covered = j != i && distance(p, D.balls[j].center) < D.balls[j].radius;
        if (!covered) return p;
    }
    throw DomainError("boundary sampling failed");
}

}  // namespace champagne
