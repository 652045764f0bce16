#pragma once

#include <string>
#include <vector>

#include "champagne/vec.hpp"

namespace champagne {

enum class DomainKind { UnitBall, Ball, Box, UnionOfBalls };

struct BallShape {
    Vec3 center;
    double radius = 1.0;
};

// Bounded open set U. Planar domains ignore the z coordinate.
struct Domain {
    DomainKind kind = DomainKind::UnitBall;
    int d = 2;
    std::vector<BallShape> balls;  // one for UnitBall/Ball, several for UnionOfBalls
    Vec3 lo, hi;                   // Box corners

    static Domain unit_ball(int d);
    static Domain ball(int d, const Vec3& center, double R);
    static Domain box(int d, const Vec3& lo, const Vec3& hi);
    static Domain union_of_balls(int d, std::vector<BallShape> balls);

    bool contains(const Vec3& z) const { return boundary_gap(z) > 0; }
    // Signed distance-like gap: positive inside. Exact distance to the
    // complement for balls and boxes; for unions the lower bound
    // max_i (R_i - |z - c_i|).
    double boundary_gap(const Vec3& z) const;
    double diameter() const;
    Vec3 bbox_lo() const;
    Vec3 bbox_hi() const;

    // Inner parallel set {gap > s} for balls and boxes; for unions the union
    // of the shrunk balls. Boundaries of shrinks by s > s' are at least s - s'
    // apart.
    Domain shrink(double s) const;
    // Overlap graph of a union is connected (always true for the primitives).
    bool connected() const;

    std::string kind_name() const;
};

}  // namespace champagne

namespace champagne {

class PhiloxStream;

// Uniform point on the boundary of the domain (area measure; for unions only
// the parts of each sphere outside the other balls).
Vec3 sample_boundary(const Domain& D, PhiloxStream& rng);

}  // namespace champagne
