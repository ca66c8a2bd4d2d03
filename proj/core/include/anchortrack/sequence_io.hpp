#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anchortrack/eval.hpp"
#include "anchortrack/frame.hpp"
#include "anchortrack/pipeline.hpp"

namespace anchortrack {

namespace fs = std::filesystem;

/// Reads PPM/PGM natively and PNG/JPEG/BMP through OpenCV's codecs.
Frame read_image(const fs::path& path, std::int64_t index = 0);

/// Writes an interleaved RGB buffer; the format follows the extension
/// (.ppm natively, anything else through OpenCV).
void write_image(const fs::path& path, int width, int height, std::span<const std::uint8_t> rgb);

/// Frames of a directory, ordered by the number in each file name. Files are
/// decoded lazily. Throws MissingFrames when the directory holds no image or
/// the numbering has a gap.
class DirectorySequence final : public FrameSource {
 public:
  explicit DirectorySequence(const fs::path& dir);
  std::size_t size() const override { return paths_.size(); }
  Frame frame(std::size_t i) const override;
  const std::vector<fs::path>& paths() const { return paths_; }

 private:
  std::vector<fs::path> paths_;
};

/// Parses "x,y,w,h" (comma, tab or space separated). Coordinates use a
/// 1-based pixel origin and are shifted to 0-based.
BoundingBox parse_box(std::string_view text);

/// One box per non-empty line. Throws ParseError naming the line.
GroundTruth parse_gt(std::string_view text, const std::string& source = "<gt>");
GroundTruth load_gt(const fs::path& path);
void save_gt(std::ostream& os, std::span<const BoundingBox> boxes);

/// Corner form, 1-based origin, fixed 3 decimals.
std::string format_box(const BoundingBox& box);

/// frame_index,x,y,w,h,status,matched_count,gate_passed,applied_scale
void write_results_csv(std::ostream& os, std::span<const FrameResult> results);

/// Boxes of a results file. Accepts results lines (>= 9 fields, box in
/// fields 2-5) or plain ground-truth style lines.
GroundTruth load_result_boxes(const fs::path& path);

std::string read_text(const fs::path& path);

/// Writes through a temporary sibling and renames it into place, so a failed
/// write never leaves a partial file behind.
void atomic_write(const fs::path& path, const std::function<void(std::ostream&)>& writer);
void atomic_write_image(const fs::path& path, int width, int height, std::span<const std::uint8_t> rgb);

}  // namespace anchortrack
