#include "anchortrack/global_models.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "anchortrack/errors.hpp"

namespace anchortrack {
namespace {

// Outer ring of the 5x5 neighbourhood, row-major.
constexpr std::array<std::array<int, 2>, 16> kRing = {{
    {-2, -2}, {-1, -2}, {0, -2}, {1, -2}, {2, -2},
    {-2, -1}, {2, -1},
    {-2, 0}, {2, 0},
    {-2, 1}, {2, 1},
    {-2, 2}, {-1, 2}, {0, 2}, {1, 2}, {2, 2},
}};

}  // namespace

std::vector<std::uint8_t> normalized_patch(const Frame& frame, const BoundingBox& box, int n,
                                           int channels) {
  const auto src = channels == 1 ? frame.gray() : frame.rgb();
  const int w = frame.width();
  const int h = frame.height();
  std::vector<std::uint8_t> out(static_cast<std::size_t>(n) * n * channels);
  const double sx = box.width / n;
  const double sy = box.height / n;
  for (int j = 0; j < n; ++j) {
    const double y = std::clamp(box.top() + (j + 0.5) * sy - 0.5, 0.0, h - 1.0);
    const int y0 = static_cast<int>(std::floor(y));
    const int y1 = std::min(y0 + 1, h - 1);
    const double fy = y - y0;
    for (int i = 0; i < n; ++i) {
      const double x = std::clamp(box.left() + (i + 0.5) * sx - 0.5, 0.0, w - 1.0);
      const int x0 = static_cast<int>(std::floor(x));
      const int x1 = std::min(x0 + 1, w - 1);
      const double fx = x - x0;
      for (int c = 0; c < channels; ++c) {
        const auto px = [&](int xx, int yy) {
          return static_cast<double>(src[(static_cast<std::size_t>(yy) * w + xx) * channels + c]);
        };
        const double top = px(x0, y0) * (1.0 - fx) + px(x1, y0) * fx;
        const double bottom = px(x0, y1) * (1.0 - fx) + px(x1, y1) * fx;
        const double v = top * (1.0 - fy) + bottom * fy;
        out[(static_cast<std::size_t>(j) * n + i) * channels + c] =
            static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
      }
    }
  }
  return out;
}

LbspGrid lbsp_from_patch(const std::vector<std::uint8_t>& gray, int n, int threshold) {
  LbspGrid grid{n, std::vector<std::uint16_t>(static_cast<std::size_t>(n) * n, 0)};
  const auto at = [&](int x, int y) { return static_cast<int>(gray[static_cast<std::size_t>(y) * n + x]); };
  for (int y = 2; y < n - 2; ++y) {
    for (int x = 2; x < n - 2; ++x) {
      const int center = at(x, y);
      std::uint16_t code = 0;
      for (std::size_t k = 0; k < kRing.size(); ++k) {
        const int v = at(x + kRing[k][0], y + kRing[k][1]);
        if (std::abs(v - center) <= threshold) code |= static_cast<std::uint16_t>(1u << k);
      }
      grid.at(x, y) = code;
    }
  }
  return grid;
}

LbspGrid compute_lbsp(const Frame& frame, const BoundingBox& box, const TrackerConfig& cfg) {
  const int n = cfg.patch_norm_size;
  return lbsp_from_patch(normalized_patch(frame, box, n, 1), n, cfg.lbsp_threshold);
}

double lbsp_similarity(const LbspGrid& a, const LbspGrid& b) {
  if (a.size != b.size || a.codes.size() != b.codes.size()) {
    throw SizeMismatch("LBSP grids differ in size");
  }
  long long differing = 0;
  for (int y = 2; y < a.size - 2; ++y) {
    for (int x = 2; x < a.size - 2; ++x) {
      differing += std::popcount(static_cast<unsigned>(a.at(x, y) ^ b.at(x, y)));
    }
  }
  const double total = 16.0 * a.interior_count();
  return total > 0.0 ? 1.0 - static_cast<double>(differing) / total : 1.0;
}

WeightedHistogram hist_from_patch(const std::vector<std::uint8_t>& rgb, int n, int bins_per_channel) {
  const int b = bins_per_channel;
  WeightedHistogram hist{b, std::vector<double>(static_cast<std::size_t>(b) * b * b, 0.0)};
  const double c = n / 2.0;
  const double half_diagonal = std::sqrt(2.0) * n / 2.0;
  double total = 0.0;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const double dx = x + 0.5 - c;
      const double dy = y + 0.5 - c;
      const double r2 = (dx * dx + dy * dy) / (half_diagonal * half_diagonal);
      const double weight = std::max(0.0, 1.0 - r2);
      if (weight == 0.0) continue;
      const std::size_t o = (static_cast<std::size_t>(y) * n + x) * 3;
      const int r = rgb[o] * b / 256;
      const int g = rgb[o + 1] * b / 256;
      const int bl = rgb[o + 2] * b / 256;
      hist.bins[(static_cast<std::size_t>(r) * b + g) * b + bl] += weight;
      total += weight;
    }
  }
  if (total > 0.0) {
    for (auto& v : hist.bins) v /= total;
  }
  return hist;
}

WeightedHistogram compute_weighted_hist(const Frame& frame, const BoundingBox& box,
                                        const TrackerConfig& cfg) {
  const int n = cfg.patch_norm_size;
  return hist_from_patch(normalized_patch(frame, box, n, 3), n, cfg.hist_bins_per_channel);
}

double hist_distance(const WeightedHistogram& a, const WeightedHistogram& b) {
  if (a.bins.size() != b.bins.size()) throw SizeMismatch("histograms differ in bin count");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.bins.size(); ++i) {
    const double d = a.bins[i] - b.bins[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

ReferenceModels build_references(const Frame& frame, const BoundingBox& box, const TrackerConfig& cfg) {
  return {compute_lbsp(frame, box, cfg), compute_weighted_hist(frame, box, cfg)};
}

GateReading evaluate_gate(const Frame& frame, const BoundingBox& box, const ReferenceModels& refs,
                          const TrackerConfig& cfg) {
  GateReading g;
  g.lbsp_similarity = lbsp_similarity(compute_lbsp(frame, box, cfg), refs.lbsp);
  g.hist_distance = hist_distance(compute_weighted_hist(frame, box, cfg), refs.hist);
  g.passed = g.lbsp_similarity >= cfg.gate_lbsp_min && g.hist_distance <= cfg.gate_hist_max;
  return g;
}

}  // namespace anchortrack
