#include "anchortrack/geometry.hpp"

#include <algorithm>

namespace anchortrack {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.right(), b.right()) - std::max(a.left(), b.left());
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top(), b.top());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

double center_error(const BoundingBox& a, const BoundingBox& b) {
  return distance(a.center, b.center);
}

}  // namespace anchortrack
