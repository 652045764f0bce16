#pragma once

// Bounding-volume tree over the bubbles. Each node keeps the box of its
// centers and its largest radius, which gives an exact lower bound for
// |z - c| - r over the node.

#include <cstdint>
#include <vector>

#include "champagne/config.hpp"

namespace champagne {

struct GapQuery {
    double gap = 0;          // min |z - c| - r over all bubbles (+inf if none)
    std::int64_t id = -1;    // achieving bubble
    double second = 0;       // same minimum with `id` excluded
};

class ObstacleIndex {
public:
    ObstacleIndex() = default;
    explicit ObstacleIndex(const std::vector<Bubble>& bubbles);

    GapQuery query(const Vec3& z) const;
    // Closest bubble other than `skip`.
    GapQuery query_excluding(const Vec3& z, std::int64_t skip) const;
    std::size_t size() const noexcept { return order_.size(); }

private:
    struct Node {
        double lo[3];
        double hi[3];
        double max_r;
        std::uint32_t begin, end;  // leaf range into items_
        std::int32_t left = -1, right = -1;
    };
    struct Item {
        double x, y, z, r;
    };
    std::int32_t build(std::uint32_t begin, std::uint32_t end);
    void search(std::int32_t node, const Vec3& z, std::int64_t skip, GapQuery& q) const;

    std::vector<Node> nodes_;
    std::vector<Item> items_;
    std::vector<std::int64_t> order_;  // items_ index -> bubble id
};

}  // namespace champagne
