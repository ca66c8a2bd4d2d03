#include "anchortrack/sequence_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "anchortrack/errors.hpp"

namespace anchortrack {
namespace {

bool is_image_extension(std::string ext) {
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".ppm" || ext == ".pgm" ||
         ext == ".bmp";
}

std::string lower_ext(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Last run of digits in the file stem.
std::optional<long long> frame_number(const fs::path& p) {
  const std::string stem = p.stem().string();
  auto end = stem.find_last_of("0123456789");
  if (end == std::string::npos) return std::nullopt;
  auto begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1]))) --begin;
  long long n = 0;
  std::from_chars(stem.data() + begin, stem.data() + end + 1, n);
  return n;
}

// Next whitespace-delimited token of a PNM header, skipping comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  char c;
  while (in.get(c)) {
    if (c == '#') {
      std::string ignored;
      std::getline(in, ignored);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(c);
  }
  return tok;
}

Frame read_pnm(const fs::path& path, std::int64_t index) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string magic = pnm_token(in);
  if (magic != "P6" && magic != "P5") throw IoError(path.string() + ": unsupported PNM type " + magic);
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(pnm_token(in));
    h = std::stoi(pnm_token(in));
    maxval = std::stoi(pnm_token(in));
  } catch (const std::exception&) {
    throw IoError(path.string() + ": malformed PNM header");
  }
  if (maxval != 255) throw IoError(path.string() + ": only 8-bit PNM is supported");
  const int channels = magic == "P6" ? 3 : 1;
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(w) * h * channels);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw IoError(path.string() + ": truncated pixel data");
  }
  if (channels == 3) return Frame(w, h, std::move(raw), index);
  std::vector<std::uint8_t> rgb(raw.size() * 3);
  for (std::size_t i = 0; i < raw.size(); ++i) rgb[3 * i] = rgb[3 * i + 1] = rgb[3 * i + 2] = raw[i];
  return Frame(w, h, std::move(rgb), index);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ',' || line[i] == '\t' || line[i] == ' ' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ',' && line[j] != '\t' && line[j] != ' ' && line[j] != '\r') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool to_double(std::string_view s, double& v) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size();
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

template <typename LineFn>
void for_each_line(std::string_view text, LineFn fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    fn(line, line_no);
  }
}

bool blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

BoundingBox box_from_fields(std::span<const std::string_view> f, bool& ok) {
  double v[4];
  ok = f.size() == 4;
  for (std::size_t i = 0; ok && i < 4; ++i) ok = to_double(f[i], v[i]);
  if (!ok || v[2] <= 0.0 || v[3] <= 0.0) {
    ok = false;
    return {};
  }
  return BoundingBox::from_corner(v[0] - 1.0, v[1] - 1.0, v[2], v[3]);
}

}  // namespace

Frame read_image(const fs::path& path, std::int64_t index) {
  const std::string ext = lower_ext(path);
  if (ext == ".ppm" || ext == ".pgm") return read_pnm(path, index);

  const cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw IoError("cannot decode " + path.string());
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(bgr.cols) * bgr.rows * 3);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      const std::size_t o = (static_cast<std::size_t>(y) * bgr.cols + x) * 3;
      rgb[o] = row[x][2];
      rgb[o + 1] = row[x][1];
      rgb[o + 2] = row[x][0];
    }
  }
  return Frame(bgr.cols, bgr.rows, std::move(rgb), index);
}

void write_image(const fs::path& path, int width, int height, std::span<const std::uint8_t> rgb) {
  if (lower_ext(path) == ".ppm") {
    std::ofstream out(path, std::ios::binary);
    out << "P6\n" << width << ' ' << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(rgb.data()), static_cast<std::streamsize>(rgb.size()));
    if (!out) throw IoError("cannot write " + path.string());
    return;
  }
  cv::Mat bgr(height, width, CV_8UC3);
  for (int y = 0; y < height; ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < width; ++x) {
      const std::size_t o = (static_cast<std::size_t>(y) * width + x) * 3;
      row[x] = cv::Vec3b(rgb[o + 2], rgb[o + 1], rgb[o]);
    }
  }
  // The format is chosen from the extension, so pass the real one.
  std::vector<std::uint8_t> encoded;
  if (!cv::imencode(path.extension().string(), bgr, encoded)) {
    throw IoError("cannot encode " + path.string());
  }
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(encoded.data()), static_cast<std::streamsize>(encoded.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

DirectorySequence::DirectorySequence(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw MissingFrames("not a directory: " + dir.string());
  std::map<long long, fs::path> numbered;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || !is_image_extension(entry.path().extension().string())) continue;
    const auto n = frame_number(entry.path());
    if (!n) continue;
    if (!numbered.emplace(*n, entry.path()).second) {
      throw MissingFrames("duplicate frame number " + std::to_string(*n) + " in " + dir.string());
    }
  }
  if (numbered.empty()) throw MissingFrames("no numbered image files in " + dir.string());
  long long expected = numbered.begin()->first;
  for (const auto& [n, path] : numbered) {
    if (n != expected) {
      throw MissingFrames("frame " + std::to_string(expected) + " missing in " + dir.string());
    }
    paths_.push_back(path);
    ++expected;
  }
}

Frame DirectorySequence::frame(std::size_t i) const {
  return read_image(paths_.at(i), static_cast<std::int64_t>(i));
}

BoundingBox parse_box(std::string_view text) {
  const auto fields = split_fields(text);
  bool ok = false;
  const BoundingBox box = box_from_fields(fields, ok);
  if (!ok) throw ParseError("<box>", 1, "expected x,y,w,h with positive size, got `" + std::string(text) + "`");
  return box;
}

GroundTruth parse_gt(std::string_view text, const std::string& source) {
  GroundTruth gt;
  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (blank(line)) return;
    const auto fields = split_fields(line);
    bool ok = false;
    const BoundingBox box = box_from_fields(fields, ok);
    if (!ok) throw ParseError(source, line_no, "expected x,y,w,h with positive size");
    gt.push_back(box);
  });
  return gt;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GroundTruth load_gt(const fs::path& path) { return parse_gt(read_text(path), path.string()); }

std::string format_box(const BoundingBox& box) {
  return fmt3(box.left() + 1.0) + "," + fmt3(box.top() + 1.0) + "," + fmt3(box.width) + "," +
         fmt3(box.height);
}

void save_gt(std::ostream& os, std::span<const BoundingBox> boxes) {
  for (const auto& b : boxes) os << format_box(b) << '\n';
}

void write_results_csv(std::ostream& os, std::span<const FrameResult> results) {
  for (const auto& r : results) {
    os << r.frame_index << ',' << format_box(r.box) << ',' << to_string(r.status) << ','
       << r.matched_count << ',' << (r.gate_passed ? 1 : 0) << ',' << fmt3(r.applied_scale) << '\n';
  }
}

GroundTruth load_result_boxes(const fs::path& path) {
  const std::string text = read_text(path);
  GroundTruth boxes;
  for_each_line(std::string_view(text), [&](std::string_view line, std::size_t line_no) {
    if (blank(line)) return;
    auto fields = split_fields(line);
    std::span<const std::string_view> box_fields(fields);
    if (fields.size() >= 9) box_fields = box_fields.subspan(1, 4);
    bool ok = false;
    const BoundingBox box = box_from_fields(box_fields, ok);
    if (!ok) throw ParseError(path.string(), line_no, "expected a results line or x,y,w,h");
    boxes.push_back(box);
  });
  return boxes;
}

void atomic_write(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    try {
      writer(out);
    } catch (...) {
      out.close();
      fs::remove(tmp);
      throw;
    }
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw IoError("write failed for " + path.string());
    }
  }
  fs::rename(tmp, path);
}

void atomic_write_image(const fs::path& path, int width, int height, std::span<const std::uint8_t> rgb) {
  // Keep the real extension on the temporary so the encoder picks the format.
  fs::path tmp = path.parent_path() / (".tmp_" + path.filename().string());
  try {
    write_image(tmp, width, height, rgb);
  } catch (...) {
    fs::remove(tmp);
    throw;
  }
  fs::rename(tmp, path);
}

}  // namespace anchortrack
