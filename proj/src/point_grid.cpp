#include "champagne/point_grid.hpp"

#include <algorithm>
#include <cmath>

#include "champagne/errors.hpp"

namespace champagne {

PointGrid::PointGrid(double cell, int d) : cell_(cell), d_(d) {
    if (!(cell > 0)) throw DomainError("grid cell size must be positive");
}

PointGrid::Key PointGrid::key_of(const Vec3& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / cell_)), static_cast<std::int64_t>(std::floor(p.y / cell_)),
            d_ == 2 ? 0 : static_cast<std::int64_t>(std::floor(p.z / cell_))};
}

std::uint64_t PointGrid::hash(std::int64_t i, std::int64_t j, std::int64_t k) {
    const auto u = [](std::int64_t v) { return static_cast<std::uint64_t>(v); };
    return u(i) * 0x9E3779B97F4A7C15ull ^ (u(j) * 0xC2B2AE3D27D4EB4Full + 0x165667B19E3779F9ull) ^ (u(k) * 0xD6E8FEB86659FD93ull);
}

const std::vector<std::uint32_t>* PointGrid::cell(std::int64_t i, std::int64_t j, std::int64_t k) const {
    auto it = cells_.find(hash(i, j, k));
    return it == cells_.end() ? nullptr : &it->second;
}

std::uint32_t PointGrid::insert(const Vec3& p) {
    const auto id = static_cast<std::uint32_t>(points_.size());
    points_.push_back(p);
    const Key k = key_of(p);
    cells_[hash(k.i, k.j, k.k)].push_back(id);
    return id;
}

bool PointGrid::any_within(const Vec3& p, double radius) const {
    const Key c = key_of(p);
    const double r2 = radius * radius;
    const std::int64_t kz = d_ == 2 ? 0 : 1;
    for (std::int64_t di = -1; di <= 1; ++di)
        for (std::int64_t dj = -1; dj <= 1; ++dj)
            for (std::int64_t dk = -kz; dk <= kz; ++dk) {
                const auto* ids = cell(c.i + di, c.j + dj, c.k + dk);
                if (!ids) continue;
                for (auto id : *ids) {
                    const Vec3 diff = points_[id] - p;
                    if (dot(diff, diff) < r2) return true;
                }
            }
    return false;
}

double PointGrid::nearest_distance(const Vec3& p) const {
    if (points_.empty()) return std::numeric_limits<double>::infinity();
    const Key c = key_of(p);
    double best2 = std::numeric_limits<double>::infinity();
    const std::int64_t kz = d_ == 2 ? 0 : 1;
    for (std::int64_t di = -1; di <= 1; ++di)
        for (std::int64_t dj = -1; dj <= 1; ++dj)
            for (std::int64_t dk = -kz; dk <= kz; ++dk) {
                const auto* ids = cell(c.i + di, c.j + dj, c.k + dk);
                if (!ids) continue;
                for (auto id : *ids) {
                    const Vec3 diff = points_[id] - p;
                    best2 = std::min(best2, dot(diff, diff));
                }
            }
    // anything outside the 3^d block is farther than one cell
    if (best2 <= cell_ * cell_) return std::sqrt(best2);
    for (const auto& q : points_) {
        const Vec3 diff = q - p;
        best2 = std::min(best2, dot(diff, diff));
    }
    return std::sqrt(best2);
}

double PointGrid::min_pairwise_distance() const {
    double best2 = std::numeric_limits<double>::infinity();
    const std::int64_t kz = d_ == 2 ? 0 : 1;
    for (std::size_t a = 0; a < points_.size(); ++a) {
        const Key c = key_of(points_[a]);
        for (std::int64_t di = -1; di <= 1; ++di)
            for (std::int64_t dj = -1; dj <= 1; ++dj)
                for (std::int64_t dk = -kz; dk <= kz; ++dk) {
                    const auto* ids = cell(c.i + di, c.j + dj, c.k + dk);
                    if (!ids) continue;
                    for (auto id : *ids) {
                        if (id <= a) continue;
                        const Vec3 diff = points_[id] - points_[a];
                        best2 = std::min(best2, dot(diff, diff));
                    }
                }
    }
    if (best2 == std::numeric_limits<double>::infinity() && points_.size() >= 2) {
        // every pair is farther apart than one cell
        for (std::size_t a = 0; a < points_.size(); ++a)
            for (std::size_t b = a + 1; b < points_.size(); ++b) {
                const Vec3 diff = points_[a] - points_[b];
                best2 = std::min(best2, dot(diff, diff));
            }
    }
    return std::sqrt(best2);
}

}  // namespace champagne
