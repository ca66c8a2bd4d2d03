#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace anchortrack {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

/// One video frame: interleaved 8-bit RGB plus the luma plane derived from it.
/// Immutable after construction.
class Frame {
 public:
  static constexpr int kMinSide = 16;

  /// Throws std::invalid_argument when a side is below kMinSide or the
  /// buffer size does not match width * height * 3.
  Frame(int width, int height, std::vector<std::uint8_t> rgb, std::int64_t index = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t index() const { return index_; }

  std::span<const std::uint8_t> rgb() const { return rgb_; }
  std::span<const std::uint8_t> gray() const { return gray_; }

  std::uint8_t gray_at(int x, int y) const {
    return gray_[static_cast<std::size_t>(y) * width_ + x];
  }
  Rgb rgb_at(int x, int y) const {
    const std::size_t o = (static_cast<std::size_t>(y) * width_ + x) * 3;
    return {rgb_[o], rgb_[o + 1], rgb_[o + 2]};
  }
  bool contains(double x, double y) const {
    return x >= 0.0 && y >= 0.0 && x <= width_ - 1 && y <= height_ - 1;
  }

  /// Same pixels, different sequence position.
  Frame with_index(std::int64_t index) const;

 private:
  int width_;
  int height_;
  std::int64_t index_;
  std::vector<std::uint8_t> rgb_;
  std::vector<std::uint8_t> gray_;
};

/// round(0.299 R + 0.587 G + 0.114 B)
std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b);

}  // namespace anchortrack
