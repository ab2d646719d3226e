#pragma once

#include "tiptrait/core.hpp"

#include <span>

namespace tiptrait::geometry {

// Twice the signed area of triangle (a, b, c) in the y-up plane: positive for
// a counter-clockwise turn once raster y is flipped, zero when collinear.
double orientation(const TipPoint& a, const TipPoint& b, const TipPoint& c) noexcept;

// Monotone-chain hull. Duplicate points are collapsed and collinear boundary
// points dropped. Fewer than three non-collinear points give a degenerate hull
// whose vertices are the distinct extreme points (0, 1 or 2 of them).
// Throws InvalidArgument on a non-finite coordinate.
ConvexHull convex_hull(std::span<const TipPoint> points);

// Shoelace area in px^2; 0 for degenerate hulls.
double polygon_area(const ConvexHull& hull) noexcept;

struct Spreads {
    double horizontal = 0.0;
    double vertical = 0.0;

    friend bool operator==(const Spreads&, const Spreads&) = default;
};

// Axis-aligned extents. Throws InvalidArgument on an empty point set.
Spreads spreads(std::span<const TipPoint> points);

// On-or-inside test against a hull, allowing `tolerance` px of outward slack
// measured perpendicular to each edge. Degenerate hulls test against their
// segment or point.
bool contains(const ConvexHull& hull, const TipPoint& p, double tolerance) noexcept;

}  // namespace tiptrait::geometry
