#pragma once

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "champagne/vec.hpp"

namespace champagne {

// Uniform hash grid over points, used for greedy thinning and net audits.
class PointGrid {
public:
    PointGrid(double cell, int d);

    std::uint32_t insert(const Vec3& p);
    const std::vector<Vec3>& points() const noexcept { return points_; }

    // True if some stored point lies at distance < radius from p.
    // radius must not exceed the cell size.
    bool any_within(const Vec3& p, double radius) const;

    // Distance from p to the closest stored point (+inf when empty).
    double nearest_distance(const Vec3& p) const;

    // Smallest pairwise distance among stored points (+inf for < 2 points).
    // Exact when it is below the cell size; otherwise some value >= cell size.
    double min_pairwise_distance() const;

private:
    struct Key {
        std::int64_t i, j, k;
    };
    Key key_of(const Vec3& p) const;
    static std::uint64_t hash(std::int64_t i, std::int64_t j, std::int64_t k);
    const std::vector<std::uint32_t>* cell(std::int64_t i, std::int64_t j, std::int64_t k) const;

    double cell_;
    int d_;
    std::vector<Vec3> points_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
};

}  // namespace champagne
