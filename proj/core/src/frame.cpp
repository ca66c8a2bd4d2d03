#include "anchortrack/frame.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace anchortrack {

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const double y = 0.299 * r + 0.587 * g + 0.114 * b;
  return static_cast<std::uint8_t>(std::lround(y));
}

Frame::Frame(int width, int height, std::vector<std::uint8_t> rgb, std::int64_t index)
    : width_(width), height_(height), index_(index), rgb_(std::move(rgb)) {
  if (width < kMinSide || height < kMinSide) {
    throw std::invalid_argument("frame must be at least 16x16, got " + std::to_string(width) +
                                "x" + std::to_string(height));
  }
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (rgb_.size() != n * 3) {
    throw std::invalid_argument("rgb buffer size does not match frame dimensions");
  }
  gray_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    gray_[i] = luma(rgb_[3 * i], rgb_[3 * i + 1], rgb_[3 * i + 2]);
  }
}

Frame Frame::with_index(std::int64_t index) const {
  Frame copy = *this;
  copy.index_ = index;
  return copy;
}

}  // namespace anchortrack
