#include "anchortrack/eval.hpp"

#include <cstdio>
#include <ostream>

#include "anchortrack/errors.hpp"

namespace anchortrack {
namespace {

void check_lengths(std::span<const BoundingBox> results, std::span<const BoundingBox> gt) {
  if (results.size() != gt.size()) throw LengthMismatch(results.size(), gt.size());
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void precision_curve(std::span<const BoundingBox> results, std::span<const BoundingBox> gt,
                     EvalCurves& curves) {
  check_lengths(results, gt);
  curves.precision.fill(0.0);
  curves.mean_center_error = 0.0;
  if (results.empty()) {
    curves.precision_at_20 = 0.0;
    return;
  }
  const double n = static_cast<double>(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double e = center_error(results[i], gt[i]);
    curves.mean_center_error += e / n;
    for (int t = 0; t < EvalCurves::kPrecisionSteps; ++t) {
      if (e <= t) curves.precision[t] += 1.0;
    }
  }
  for (auto& p : curves.precision) p /= n;
  curves.precision_at_20 = curves.precision[20];
}

void success_auc(std::span<const BoundingBox> results, std::span<const BoundingBox> gt,
                 EvalCurves& curves) {
  check_lengths(results, gt);
  curves.success.fill(0.0);
  curves.auc = 0.0;
  if (results.empty()) return;
  const double n = static_cast<double>(results.size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double o = iou(results[i], gt[i]);
    for (int k = 0; k < EvalCurves::kSuccessSteps; ++k) {
      if (o > success_threshold(k)) curves.success[k] += 1.0;
    }
  }
  for (auto& s : curves.success) {
    s /= n;
    curves.auc += s;
  }
  curves.auc /= EvalCurves::kSuccessSteps;
}

EvalCurves evaluate(std::span<const BoundingBox> results, std::span<const BoundingBox> gt) {
  EvalCurves curves;
  precision_curve(results, gt, curves);
  success_auc(results, gt, curves);
  return curves;
}

void write_metrics_csv(std::ostream& os, const EvalCurves& curves) {
  os << "metric,threshold,value\n";
  os << "precision_at_20,20," << fixed(curves.precision_at_20) << '\n';
  os << "auc,," << fixed(curves.auc) << '\n';
  os << "mean_center_error,," << fixed(curves.mean_center_error) << '\n';
  for (int t = 0; t < EvalCurves::kPrecisionSteps; ++t) {
    os << "precision," << t << ',' << fixed(curves.precision[t]) << '\n';
  }
  for (int k = 0; k < EvalCurves::kSuccessSteps; ++k) {
    char th[16];
    std::snprintf(th, sizeof th, "%.2f", success_threshold(k));
    os << "success," << th << ',' << fixed(curves.success[k]) << '\n';
  }
}

}  // namespace anchortrack
