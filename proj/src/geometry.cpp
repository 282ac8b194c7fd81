#include "symdet/geometry.hpp"

#include <algorithm>
#include <limits>

namespace symdet {

namespace {
double cross(const Point2& o, const Point2& a, const Point2& b) noexcept {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}
}  // namespace

std::vector<Point2> convex_hull(std::span<const Point2> points) {
  std::vector<Point2> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(),
            [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;

  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point2& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::optional<std::pair<double, double>> clip_line(std::span<const Point2> hull, Point2 origin,
                                                   Point2 direction) {
  if (hull.size() < 3) return std::nullopt;
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  // Cyrus-Beck: the interior of a CCW polygon lies left of every edge.
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point2& a = hull[i];
    const Point2& b = hull[(i + 1) % hull.size()];
    const double ex = b.x - a.x, ey = b.y - a.y;
    // side(t) = cross(edge, p(t) - a) >= 0 inside
    const double base = ex * (origin.y - a.y) - ey * (origin.x - a.x);
    const double slope = ex * direction.y - ey * direction.x;
    if (slope == 0.0) {
      if (base < 0.0) return std::nullopt;
      continue;
    }
    const double t = -base / slope;
    if (slope > 0.0)
      t0 = std::max(t0, t);
    else
      t1 = std::min(t1, t);
  }
  if (t0 > t1) return std::nullopt;
  return std::make_pair(t0, t1);
}

}  // namespace symdet
