#include "champagne/obstacle_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace champagne {

namespace {
constexpr std::uint32_t kLeafSize = 8;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

ObstacleIndex::ObstacleIndex(const std::vector<Bubble>& bubbles) {
    items_.reserve(bubbles.size());
    order_.resize(bubbles.size());
    std::iota(order_.begin(), order_.end(), std::int64_t{0});
    for (const auto& b : bubbles) items_.push_back({b.center.x, b.center.y, b.center.z, b.radius});
    if (!items_.empty()) {
        nodes_.reserve(2 * items_.size() / kLeafSize + 2);
        build(0, static_cast<std::uint32_t>(items_.size()));
    }
}

std::int32_t ObstacleIndex::build(std::uint32_t begin, std::uint32_t end) {
    Node n{};
    for (int a = 0; a < 3; ++a) {
        n.lo[a] = kInf;
        n.hi[a] = -kInf;
    }
    n.max_r = 0;
    for (auto i = begin; i < end; ++i) {
        const double c[3] = {items_[i].x, items_[i].y, items_[i].z};
        for (int a = 0; a < 3; ++a) {
            n.lo[a] = std::min(n.lo[a], c[a]);
            n.hi[a] = std::max(n.hi[a], c[a]);
        }
        n.max_r = std::max(n.max_r, items_[i].r);
    }
    n.begin = begin;
    n.end = end;
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(n);
    if (end - begin <= kLeafSize) return id;

    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (n.hi[a] - n.lo[a] > n.hi[axis] - n.lo[axis]) axis = a;
    const auto mid = begin + (end - begin) / 2;
    // sort a permutation so items_ and order_ move together
    std::vector<std::uint32_t> perm(end - begin);
    std::iota(perm.begin(), perm.end(), begin);
    auto coord = [&](std::uint32_t i) { return axis == 0 ? items_[i].x : (axis == 1 ? items_[i].y : items_[i].z); };
    std::nth_element(perm.begin(), perm.begin() + (mid - begin), perm.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return coord(a) < coord(b); });
    std::vector<Item> it(end - begin);
    std::vector<std::int64_t> ord(end - begin);
    for (std::size_t j = 0; j < perm.size(); ++j) {
        it[j] = items_[perm[j]];
        ord[j] = order_[perm[j]];
    }
    std::copy(it.begin(), it.end(), items_.begin() + begin);
    std::copy(ord.begin(), ord.end(), order_.begin() + begin);

    const auto l = build(begin, mid);
    const auto r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
}

void ObstacleIndex::search(std::int32_t node, const Vec3& z, std::int64_t skip, GapQuery& q) const {
    const Node& n = nodes_[node];
    if (n.left < 0) {
        for (auto i = n.begin; i < n.end; ++i) {
            const auto id = order_[i];
            if (id == skip) continue;
            const auto& b = items_[i];
            const double dx = z.x - b.x, dy = z.y - b.y, dz = z.z - b.z;
            const double g = std::sqrt(dx * dx + dy * dy + dz * dz) - b.r;
            if (g < q.gap) {
                q.second = q.gap;
                q.gap = g;
                q.id = id;
            } else if (g < q.second) {
                q.second = g;
            }
        }
        return;
    }
    auto bound = [&](std::int32_t c) {
        const Node& m = nodes_[c];
        double s = 0;
        const double p[3] = {z.x, z.y, z.z};
        for (int a = 0; a < 3; ++a) {
            const double e = p[a] < m.lo[a] ? m.lo[a] - p[a] : (p[a] > m.hi[a] ? p[a] - m.hi[a] : 0.0);
            s += e * e;
        }
        return std::sqrt(s) - m.max_r;
    };
    const double bl = bound(n.left), br = bound(n.right);
    const auto first = bl <= br ? n.left : n.right;
    const auto second = bl <= br ? n.right : n.left;
    const double b1 = std::min(bl, br), b2 = std::max(bl, br);
    if (b1 < q.second) search(first, z, skip, q);
    if (b2 < q.second) search(second, z, skip, q);
}

GapQuery ObstacleIndex::query(const Vec3& z) const { return query_excluding(z, -1); }

GapQuery ObstacleIndex::query_excluding(const Vec3& z, std::int64_t skip) const {
    GapQuery q{kInf, -1, kInf};
    if (!nodes_.empty()) search(0, z, skip, q);
    return q;
}

}  // namespace champagne
