#include "anchortrack/keypoints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace anchortrack {
namespace {

constexpr int kBorder = 2;

struct Nearest {
  int index = -1;
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
};

double l2(const Descriptor& a, const Descriptor& b) {
  double acc = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return std::sqrt(acc);
}

bool passes_ratio(const Nearest& n, double ratio) {
  if (n.index < 0) return false;
  if (n.second == 0.0) return false;
  return !(n.best > ratio * n.second);
}

constexpr int kRefineRadius = 2;

// Offset of the vertex of the parabola through (-1, a), (0, b), (1, c).
double parabolic_offset(double a, double b, double c) {
  const double denom = a - 2.0 * b + c;
  if (denom >= 0.0) return 0.0;
  return std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
}

// Point q minimising sum over the window of (g_i . (q - p_i))^2: every edge
// gradient near a corner is orthogonal to the line joining it to the corner.
// Falls back to a parabolic fit of the response when the system is
// ill-conditioned or the solution leaves the pixel neighbourhood.
Point2 refine_corner(const Frame& frame, const std::vector<float>& response, int x, int y) {
  const int w = frame.width();
  const int h = frame.height();
  const auto r = [&](int xx, int yy) { return response[static_cast<std::size_t>(yy) * w + xx]; };
  const Point2 fallback{x + parabolic_offset(r(x - 1, y), r(x, y), r(x + 1, y)),
                        y + parabolic_offset(r(x, y - 1), r(x, y), r(x, y + 1))};

  const int x0 = std::max(1, x - kRefineRadius), x1 = std::min(w - 2, x + kRefineRadius);
  const int y0 = std::max(1, y - kRefineRadius), y1 = std::min(h - 2, y + kRefineRadius);
  double a = 0.0, b = 0.0, c = 0.0, bx = 0.0, by = 0.0;
  for (int yy = y0; yy <= y1; ++yy) {
    for (int xx = x0; xx <= x1; ++xx) {
      const auto g = [&](int px, int py) { return static_cast<double>(frame.gray_at(px, py)); };
      const double gx = ((g(xx + 1, yy - 1) + 2.0 * g(xx + 1, yy) + g(xx + 1, yy + 1)) -
                         (g(xx - 1, yy - 1) + 2.0 * g(xx - 1, yy) + g(xx - 1, yy + 1))) / 8.0;
      const double gy = ((g(xx - 1, yy + 1) + 2.0 * g(xx, yy + 1) + g(xx + 1, yy + 1)) -
                         (g(xx - 1, yy - 1) + 2.0 * g(xx, yy - 1) + g(xx + 1, yy - 1))) / 8.0;
      const double gxx = gx * gx, gxy = gx * gy, gyy = gy * gy;
      a += gxx;
      b += gxy;
      c += gyy;
      bx += gxx * (xx - x) + gxy * (yy - y);
      by += gxy * (xx - x) + gyy * (yy - y);
    }
  }
  const double det = a * c - b * b;
  const double trace = a + c;
  if (!(det > 1e-3 * trace * trace)) return fallback;
  const double qx = (c * bx - b * by) / det;
  const double qy = (a * by - b * bx) / det;
  if (std::abs(qx) > 1.0 || std::abs(qy) > 1.0) return fallback;
  return {x + qx, y + qy};
}

}  // namespace

std::vector<float> corner_response(const Frame& frame) {
  const int w = frame.width();
  const int h = frame.height();
  const auto gray = frame.gray();
  const auto at = [&](int x, int y) { return static_cast<float>(gray[static_cast<std::size_t>(y) * w + x]); };

  std::vector<float> ixx(static_cast<std::size_t>(w) * h, 0.0f);
  std::vector<float> ixy(ixx.size(), 0.0f);
  std::vector<float> iyy(ixx.size(), 0.0f);
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      const float gx = ((at(x + 1, y - 1) + 2.0f * at(x + 1, y) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2.0f * at(x - 1, y) + at(x - 1, y + 1))) / 8.0f;
      const float gy = ((at(x - 1, y + 1) + 2.0f * at(x, y + 1) + at(x + 1, y + 1)) -
                        (at(x - 1, y - 1) + 2.0f * at(x, y - 1) + at(x + 1, y - 1))) / 8.0f;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      ixx[i] = gx * gx;
      ixy[i] = gx * gy;
      iyy[i] = gy * gy;
    }
  }

  std::vector<float> response(ixx.size(), 0.0f);
  for (int y = kBorder; y < h - kBorder; ++y) {
    for (int x = kBorder; x < w - kBorder; ++x) {
      float a = 0.0f, b = 0.0f, c = 0.0f;
      for (int dy = -1; dy <= 1; ++dy) {
        const std::size_t row = static_cast<std::size_t>(y + dy) * w;
        for (int dx = -1; dx <= 1; ++dx) {
          a += ixx[row + x + dx];
          b += ixy[row + x + dx];
          c += iyy[row + x + dx];
        }
      }
      a /= 9.0f;
      b /= 9.0f;
      c /= 9.0f;
      const float half_trace = 0.5f * (a + c);
      const float half_diff = 0.5f * (a - c);
      const float lambda_min = half_trace - std::sqrt(half_diff * half_diff + b * b);
      response[static_cast<std::size_t>(y) * w + x] = std::max(lambda_min, 0.0f);
    }
  }
  return response;
}

std::vector<Keypoint> detect(const Frame& frame, const std::optional<BoundingBox>& region,
                             const TrackerConfig& cfg) {
  const int w = frame.width();
  const int h = frame.height();

  int x0 = kBorder, x1 = w - kBorder - 1, y0 = kBorder, y1 = h - kBorder - 1;
  if (region) {
    // Pixel i belongs to the region when left <= i < right.
    x0 = std::max(x0, static_cast<int>(std::ceil(region->left())));
    y0 = std::max(y0, static_cast<int>(std::ceil(region->top())));
    x1 = std::min(x1, static_cast<int>(std::ceil(region->right())) - 1);
    y1 = std::min(y1, static_cast<int>(std::ceil(region->bottom())) - 1);
  }
  if (x0 > x1 || y0 > y1) return {};

  const std::vector<float> r = corner_response(frame);
  const auto at = [&](int x, int y) { return r[static_cast<std::size_t>(y) * w + x]; };
  const float floor = static_cast<float>(cfg.corner_min_response);

  std::vector<Keypoint> out;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const float v = at(x, y);
      if (!(v > floor)) continue;
      // Strict against raster-earlier neighbours, inclusive against later
      // ones, so a plateau yields exactly one maximum.
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const float n = at(x + dx, y + dy);
          const bool earlier = dy < 0 || (dy == 0 && dx < 0);
          if (earlier ? !(v > n) : !(v >= n)) {
            is_max = false;
            break;
          }
        }
      }
      if (!is_max) continue;
      out.push_back({refine_corner(frame, r, x, y), static_cast<double>(v), {}});
    }
  }

  std::sort(out.begin(), out.end(), [](const Keypoint& a, const Keypoint& b) {
    if (a.response != b.response) return a.response > b.response;
    if (a.position.y != b.position.y) return a.position.y < b.position.y;
    return a.position.x < b.position.x;
  });
  if (out.size() > static_cast<std::size_t>(cfg.max_anchors)) out.resize(cfg.max_anchors);
  for (auto& kp : out) kp.descriptor = describe(frame, kp.position, cfg);
  return out;
}

Descriptor describe(const Frame& frame, Point2 position, const TrackerConfig& cfg) {
  const int side = cfg.descriptor_patch;
  const int half = side / 2;
  const int cx = std::clamp(static_cast<int>(std::lround(position.x)), half, frame.width() - 1 - half);
  const int cy = std::clamp(static_cast<int>(std::lround(position.y)), half, frame.height() - 1 - half);

  const std::size_t n = static_cast<std::size_t>(side) * side;
  std::vector<double> patch;
  patch.reserve(n);
  double mean = 0.0;
  for (int y = cy - half; y <= cy + half; ++y) {
    for (int x = cx - half; x <= cx + half; ++x) {
      patch.push_back(frame.gray_at(x, y));
      mean += patch.back();
    }
  }
  mean /= static_cast<double>(n);

  double sq = 0.0;
  for (auto& v : patch) {
    v -= mean;
    sq += v * v;
  }
  const double len = std::sqrt(sq);

  Descriptor d(n);
  if (len < 1e-6) {
    std::fill(d.begin(), d.end(), static_cast<float>(1.0 / std::sqrt(static_cast<double>(n))));
    return d;
  }
  for (std::size_t i = 0; i < n; ++i) d[i] = static_cast<float>(patch[i] / len);
  return d;
}

std::vector<MatchPair> match_descriptors(std::span<const Descriptor> model,
                                         std::span<const Descriptor> frame, double ratio) {
  const std::size_t m = model.size();
  const std::size_t f = frame.size();
  if (m == 0 || f == 0) return {};

  std::vector<double> dist(m * f);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < f; ++j) dist[i * f + j] = l2(model[i], frame[j]);
  }

  const auto update = [](Nearest& n, int index, double d) {
    if (d < n.best) {
      n.second = n.best;
      n.best = d;
      n.index = index;
    } else if (d < n.second) {
      n.second = d;
    }
  };

  std::vector<Nearest> forward(m);
  std::vector<Nearest> backward(f);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < f; ++j) {
      const double d = dist[i * f + j];
      update(forward[i], static_cast<int>(j), d);
      update(backward[j], static_cast<int>(i), d);
    }
  }

  std::vector<MatchPair> out;
  for (std::size_t i = 0; i < m; ++i) {
    const Nearest& fw = forward[i];
    if (!passes_ratio(fw, ratio)) continue;
    const Nearest& bw = backward[fw.index];
    if (!passes_ratio(bw, ratio) || bw.index != static_cast<int>(i)) continue;
    out.push_back({static_cast<int>(i), fw.index, fw.best});
  }
  return out;
}

}  // namespace anchortrack
