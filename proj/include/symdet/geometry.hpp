#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "symdet/grid.hpp"

namespace symdet {

/// Counter-clockwise hull (Andrew's monotone chain), collinear points dropped.
std::vector<Point2> convex_hull(std::span<const Point2> points);

/// Parameter interval [t0, t1] over which origin + t * direction stays inside
/// a convex polygon (counter-clockwise, >= 3 vertices). Empty if the line
/// misses it.
std::optional<std::pair<double, double>> clip_line(std::span<const Point2> hull, Point2 origin,
                                                   Point2 direction);

}  // namespace symdet
