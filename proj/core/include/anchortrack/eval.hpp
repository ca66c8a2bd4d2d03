#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "anchortrack/geometry.hpp"

namespace anchortrack {

using GroundTruth = std::vector<BoundingBox>;

/// One-pass evaluation curves. precision[t] is the fraction of frames whose
/// center error is <= t pixels (t = 0..50); success[k] is the fraction whose
/// overlap is > 0.05 k (k = 0..20).
struct EvalCurves {
  static constexpr int kPrecisionSteps = 51;
  static constexpr int kSuccessSteps = 21;

  std::array<double, kPrecisionSteps> precision{};
  std::array<double, kSuccessSteps> success{};
  double precision_at_20 = 0.0;
  double auc = 0.0;
  double mean_center_error = 0.0;
};

constexpr double success_threshold(int k) { return 0.05 * k; }

/// Fills precision and precision_at_20. Throws LengthMismatch.
void precision_curve(std::span<const BoundingBox> results, std::span<const BoundingBox> gt,
                     EvalCurves& curves);

/// Fills success and auc (mean of the 21 success values). Throws LengthMismatch.
void success_auc(std::span<const BoundingBox> results, std::span<const BoundingBox> gt,
                 EvalCurves& curves);

EvalCurves evaluate(std::span<const BoundingBox> results, std::span<const BoundingBox> gt);

/// Scalars first, then one `precision,<t>,<value>` / `success,<theta>,<value>` row per point.
void write_metrics_csv(std::ostream& os, const EvalCurves& curves);

}  // namespace anchortrack
