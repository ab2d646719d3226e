#include "tiptrait/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace tiptrait::geometry {

namespace {

// Hull construction runs in the y-up plane so "counter-clockwise" has its
// mathematical meaning; negation is exact, so no precision is lost.
TipPoint flip(const TipPoint& p) noexcept { return {p.x, -p.y}; }

double cross(const TipPoint& o, const TipPoint& a, const TipPoint& b) noexcept
{
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double distance_to_segment(const TipPoint& a, const TipPoint& b, const TipPoint& p) noexcept
{
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    }
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

}  // namespace

double orientation(const TipPoint& a, const TipPoint& b, const TipPoint& c) noexcept
{
    return cross(flip(a), flip(b), flip(c));
}

ConvexHull convex_hull(std::span<const TipPoint> points)
{
    std::vector<TipPoint> pts;
    pts.reserve(points.size());
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw InvalidArgument("convex_hull: non-finite coordinate");
        }
        pts.push_back(flip(p));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    ConvexHull hull;
    if (pts.size() < 3) {
        for (const auto& p : pts) {
            hull.vertices.push_back(flip(p));
        }
        return hull;
    }

    std::vector<TipPoint> chain(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(chain[k - 2], chain[k - 1], p) <= 0.0) {
            --k;
        }
        chain[k++] = p;
    }
    const std::size_t lower_end = k + 1;
    for (std::size_t i = pts.size() - 1; i-- > 0;) {
        const auto& p = pts[i];
        while (k >= lower_end && cross(chain[k - 2], chain[k - 1], p) <= 0.0) {
            --k;
        }
        chain[k++] = p;
    }
    chain.resize(k - 1);  // last point repeats the first

    if (chain.size() < 3) {
        // all collinear: the chain has collapsed to the two extremes
        hull.vertices = {flip(pts.front()), flip(pts.back())};
        return hull;
    }

    hull.degenerate = false;
    hull.vertices.reserve(chain.size());
    for (const auto& p : chain) {
        hull.vertices.push_back(flip(p));
    }
    return hull;
}

double polygon_area(const ConvexHull& hull) noexcept
{
    if (hull.degenerate || hull.vertices.size() < 3) {
        return 0.0;
    }
    const auto& v = hull.vertices;
    double twice = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto a = flip(v[i]);
        const auto b = flip(v[(i + 1) % v.size()]);
        twice += a.x * b.y - b.x * a.y;
    }
    return std::max(0.0, 0.5 * twice);
}

Spreads spreads(std::span<const TipPoint> points)
{
    if (points.empty()) {
        throw InvalidArgument("spreads: empty point set");
    }
    auto [min_x, max_x] = std::minmax_element(points.begin(), points.end(),
                                              [](const auto& a, const auto& b) { return a.x < b.x; });
    auto [min_y, max_y] = std::minmax_element(points.begin(), points.end(),
                                              [](const auto& a, const auto& b) { return a.y < b.y; });
    return {max_x->x - min_x->x, max_y->y - min_y->y};
}

bool contains(const ConvexHull& hull, const TipPoint& p, double tolerance) noexcept
{
    const auto& v = hull.vertices;
    if (v.empty()) {
        return false;
    }
    if (hull.degenerate || v.size() < 3) {
        if (v.size() == 1) {
            return std::hypot(p.x - v[0].x, p.y - v[0].y) <= tolerance;
        }
        return distance_to_segment(v.front(), v.back(), p) <= tolerance;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        // signed distance of p to the left of edge a->b in the y-up plane
        if (orientation(a, b, p) / len < -tolerance) {
            return false;
        }
    }
    return true;
}

}  // namespace tiptrait::geometry
