#pragma once

#include <cmath>

namespace anchortrack {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

inline double squared_norm(Point2 p) { return p.x * p.x + p.y * p.y; }
inline double norm(Point2 p) { return std::sqrt(squared_norm(p)); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Axis-aligned box stored as center + size. Corner form is derived for I/O;
/// the center is real-valued so fractional scale updates are not lost.
struct BoundingBox {
  Point2 center;
  double width = 0.0;
  double height = 0.0;

  static BoundingBox from_corner(double x, double y, double w, double h) {
    return {{x + w / 2.0, y + h / 2.0}, w, h};
  }

  double left() const { return center.x - width / 2.0; }
  double top() const { return center.y - height / 2.0; }
  double right() const { return center.x + width / 2.0; }
  double bottom() const { return center.y + height / 2.0; }
  double area() const { return width * height; }
  bool valid() const { return width > 0.0 && height > 0.0; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Intersection over union; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Euclidean distance between box centers.
double center_error(const BoundingBox& a, const BoundingBox& b);

}  // namespace anchortrack
