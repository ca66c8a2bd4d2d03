#include "anchortrack/synth.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <variant>

#include "anchortrack/errors.hpp"

namespace anchortrack {
namespace {

constexpr int kBackgroundCell = 40;

// High-contrast object palette; lumas are spread so neighbouring cells always
// produce strong grey-level corners.
constexpr std::array<Rgb, 6> kPalette = {{
    {235, 45, 40},
    {25, 35, 190},
    {245, 235, 60},
    {15, 15, 15},
    {250, 250, 250},
    {40, 170, 70},
}};

constexpr Rgb kOccluderColor{128, 128, 128};

struct Rgbf {
  double r = 0.0, g = 0.0, b = 0.0;
};

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

class Background {
 public:
  Background(int width, int height, std::mt19937_64& rng)
      : cols_(width / kBackgroundCell + 2), rows_(height / kBackgroundCell + 2) {
    std::uniform_int_distribution<int> level(70, 150);
    knots_.resize(static_cast<std::size_t>(cols_) * rows_);
    for (auto& k : knots_) k = {double(level(rng)), double(level(rng)), double(level(rng))};
  }

  Rgbf at(double x, double y) const {
    const double gx = x / kBackgroundCell;
    const double gy = y / kBackgroundCell;
    const int ix = std::clamp(static_cast<int>(gx), 0, cols_ - 2);
    const int iy = std::clamp(static_cast<int>(gy), 0, rows_ - 2);
    const double tx = smoothstep(std::clamp(gx - ix, 0.0, 1.0));
    const double ty = smoothstep(std::clamp(gy - iy, 0.0, 1.0));
    const auto k = [&](int cx, int cy) { return knots_[static_cast<std::size_t>(cy) * cols_ + cx]; };
    const auto mix = [](Rgbf a, Rgbf b, double t) {
      return Rgbf{a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
    };
    return mix(mix(k(ix, iy), k(ix + 1, iy), tx), mix(k(ix, iy + 1), k(ix + 1, iy + 1), tx), ty);
  }

 private:
  int cols_;
  int rows_;
  std::vector<Rgbf> knots_;
};

// Checker texture of palette indices; horizontally and vertically adjacent
// cells never share a colour.
class Texture {
 public:
  Texture(double width, double height, int cell, std::mt19937_64& rng)
      : cell_(cell),
        cols_(static_cast<int>(std::ceil(width / cell))),
        rows_(static_cast<int>(std::ceil(height / cell))) {
    cells_.resize(static_cast<std::size_t>(cols_) * rows_);
    for (int y = 0; y < rows_; ++y) {
      for (int x = 0; x < cols_; ++x) {
        int c = 0;
        do {
          c = static_cast<int>(rng() % kPalette.size());
        } while ((x > 0 && c == index(x - 1, y)) || (y > 0 && c == index(x, y - 1)));
        cells_[static_cast<std::size_t>(y) * cols_ + x] = c;
      }
    }
  }

  // Colour integrated over [u0, u1) x [v0, v1), base object pixels.
  Rgbf integrate(double u0, double u1, double v0, double v1) const {
    Rgbf sum;
    const int cx0 = std::clamp(static_cast<int>(std::floor(u0 / cell_)), 0, cols_ - 1);
    const int cx1 = std::clamp(static_cast<int>(std::floor(u1 / cell_)), 0, cols_ - 1);
    const int cy0 = std::clamp(static_cast<int>(std::floor(v0 / cell_)), 0, rows_ - 1);
    const int cy1 = std::clamp(static_cast<int>(std::floor(v1 / cell_)), 0, rows_ - 1);
    for (int cy = cy0; cy <= cy1; ++cy) {
      const double dv = std::min(v1, double(cy + 1) * cell_) - std::max(v0, double(cy) * cell_);
      if (dv <= 0.0) continue;
      for (int cx = cx0; cx <= cx1; ++cx) {
        const double du = std::min(u1, double(cx + 1) * cell_) - std::max(u0, double(cx) * cell_);
        if (du <= 0.0) continue;
        const Rgb c = kPalette[index(cx, cy)];
        const double a = du * dv;
        sum.r += a * c.r;
        sum.g += a * c.g;
        sum.b += a * c.b;
      }
    }
    return sum;
  }

 private:
  int index(int x, int y) const { return cells_[static_cast<std::size_t>(y) * cols_ + x]; }

  int cell_;
  int cols_;
  int rows_;
  std::vector<int> cells_;
};

void box_blur(std::vector<double>& img, int w, int h, int k) {
  const int r = k / 2;
  std::vector<double> tmp(img.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int d = -r; d <= r; ++d) {
          const int xx = std::clamp(x + d, 0, w - 1);
          s += img[(static_cast<std::size_t>(y) * w + xx) * 3 + c];
        }
        tmp[(static_cast<std::size_t>(y) * w + x) * 3 + c] = s / k;
      }
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        double s = 0.0;
        for (int d = -r; d <= r; ++d) {
          const int yy = std::clamp(y + d, 0, h - 1);
          s += tmp[(static_cast<std::size_t>(yy) * w + x) * 3 + c];
        }
        img[(static_cast<std::size_t>(y) * w + x) * 3 + c] = s / k;
      }
    }
  }
}

}  // namespace

void SynthSpec::validate() const {
  const auto fail = [](const std::string& what) { throw SpecInvalid("invalid synthetic spec: " + what); };
  if (frame_width < Frame::kMinSide || frame_height < Frame::kMinSide) fail("frame smaller than 16x16");
  if (!(object_width > 0.0) || !(object_height > 0.0)) fail("object size must be positive");
  if (cell_size < 2) fail("cell_size must be >= 2");
  const std::size_t n = translation.size();
  if (n == 0) fail("at least one frame is required");
  if (scale.size() != n || occluder.size() != n || gain.size() != n) fail("scripts must cover every frame");
  for (double s : scale) {
    if (!(s > 0.0)) fail("scale factors must be positive");
  }
  for (double g : gain) {
    if (!(g > 0.0)) fail("gain must be positive");
  }
  if (noise_sigma < 0.0) fail("noise_sigma must be >= 0");
  if (blur_size < 0 || (blur_size > 1 && blur_size % 2 == 0)) fail("blur_size must be 0 or odd");
}

SynthSpec make_spec(const SynthParams& p) {
  if (p.frames < 1) throw SpecInvalid("invalid synthetic spec: frames must be >= 1");
  SynthSpec s;
  s.frame_width = p.width;
  s.frame_height = p.height;
  s.object_width = p.object_width;
  s.object_height = p.object_height;
  s.start_center = {p.start_x, p.start_y};
  s.seed = p.seed;
  s.cell_size = p.cell_size;
  s.noise_sigma = p.noise_sigma;
  s.blur_size = p.blur;

  const std::size_t n = static_cast<std::size_t>(p.frames);
  s.translation.assign(n, {});
  s.scale.assign(n, 1.0);
  s.occluder.assign(n, std::nullopt);
  s.gain.assign(n, 1.0);

  Point2 center = s.start_center;
  Point2 velocity{p.velocity_x, p.velocity_y};
  double size = 1.0;
  std::vector<BoundingBox> boxes{{center, p.object_width, p.object_height}};
  for (std::size_t t = 1; t < n; ++t) {
    s.scale[t] = p.scale_rate;
    size *= p.scale_rate;
    const double hw = p.object_width * size / 2.0;
    const double hh = p.object_height * size / 2.0;
    if (p.bounce) {
      if (center.x + velocity.x + hw > p.width || center.x + velocity.x - hw < 0.0) velocity.x = -velocity.x;
      if (center.y + velocity.y + hh > p.height || center.y + velocity.y - hh < 0.0) velocity.y = -velocity.y;
    }
    s.translation[t] = velocity;
    center = center + velocity;
    boxes.push_back({center, 2.0 * hw, 2.0 * hh});
  }

  if (p.occlude_from >= 0 && p.occlude_to >= p.occlude_from && p.occlude_from < p.frames) {
    const int last = std::min(p.occlude_to, p.frames - 1);
    double left = boxes[p.occlude_from].left();
    double right = boxes[p.occlude_from].right();
    for (int t = p.occlude_from; t <= last; ++t) {
      left = std::min(left, boxes[t].left());
      right = std::max(right, boxes[t].right());
    }
    // A full-height band: its only corners would sit on the frame border.
    const BoundingBox band = BoundingBox::from_corner(left - p.occluder_margin, -1.0,
                                                      right - left + 2.0 * p.occluder_margin,
                                                      p.height + 2.0);
    for (int t = p.occlude_from; t <= last; ++t) s.occluder[t] = band;
  }

  for (std::size_t t = 0; t < n; ++t) {
    const double frac = n > 1 ? static_cast<double>(t) / static_cast<double>(n - 1) : 0.0;
    s.gain[t] = p.gain_start + (p.gain_end - p.gain_start) * frac;
  }
  s.validate();
  return s;
}

SynthSequence generate(const SynthSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const Background background(spec.frame_width, spec.frame_height, rng);
  const Texture texture(spec.object_width, spec.object_height, spec.cell_size, rng);
  std::mt19937_64 noise_rng(spec.seed ^ 0x9E3779B97F4A7C15ull);
  std::normal_distribution<double> noise(0.0, 1.0);

  const int w = spec.frame_width;
  const int h = spec.frame_height;

  std::vector<double> base(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Rgbf c = background.at(x + 0.5, y + 0.5);
      const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
      base[o] = c.r;
      base[o + 1] = c.g;
      base[o + 2] = c.b;
    }
  }

  SynthSequence seq;
  Point2 center = spec.start_center;
  double size = 1.0;
  for (std::size_t t = 0; t < spec.frame_count(); ++t) {
    center = center + spec.translation[t];
    size *= spec.scale[t];
    const BoundingBox box{center, spec.object_width * size, spec.object_height * size};
    seq.truth.push_back(box);

    std::vector<double> img = base;
    const int x0 = std::max(0, static_cast<int>(std::floor(box.left())));
    const int x1 = std::min(w - 1, static_cast<int>(std::ceil(box.right())));
    const int y0 = std::max(0, static_cast<int>(std::floor(box.top())));
    const int y1 = std::min(h - 1, static_cast<int>(std::ceil(box.bottom())));
    // Exact box-filter rendering: each pixel takes the area-weighted mean of
    // the texture cells it overlaps.
    const double area_scale = size * size;
    for (int y = y0; y <= y1; ++y) {
      const double py0 = std::max<double>(y, box.top());
      const double py1 = std::min<double>(y + 1, box.bottom());
      if (py1 <= py0) continue;
      for (int x = x0; x <= x1; ++x) {
        const double px0 = std::max<double>(x, box.left());
        const double px1 = std::min<double>(x + 1, box.right());
        if (px1 <= px0) continue;
        const double cov = (px1 - px0) * (py1 - py0);
        const Rgbf c = texture.integrate((px0 - box.left()) / size, (px1 - box.left()) / size,
                                         (py0 - box.top()) / size, (py1 - box.top()) / size);
        const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
        img[o] = img[o] * (1.0 - cov) + c.r * area_scale;
        img[o + 1] = img[o + 1] * (1.0 - cov) + c.g * area_scale;
        img[o + 2] = img[o + 2] * (1.0 - cov) + c.b * area_scale;
      }
    }

    if (const auto& occ = spec.occluder[t]) {
      const int ox0 = std::max(0, static_cast<int>(std::floor(occ->left())));
      const int ox1 = std::min(w - 1, static_cast<int>(std::ceil(occ->right())) - 1);
      const int oy0 = std::max(0, static_cast<int>(std::floor(occ->top())));
      const int oy1 = std::min(h - 1, static_cast<int>(std::ceil(occ->bottom())) - 1);
      for (int y = oy0; y <= oy1; ++y) {
        for (int x = ox0; x <= ox1; ++x) {
          const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
          img[o] = kOccluderColor.r;
          img[o + 1] = kOccluderColor.g;
          img[o + 2] = kOccluderColor.b;
        }
      }
    }

    if (spec.gain[t] != 1.0) {
      for (auto& v : img) v *= spec.gain[t];
    }
    if (spec.blur_size > 1) box_blur(img, w, h, spec.blur_size);

    std::vector<std::uint8_t> rgb(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
      double v = img[i];
      if (spec.noise_sigma > 0.0) v += spec.noise_sigma * noise(noise_rng);
      rgb[i] = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
    }
    seq.frames.emplace_back(w, h, std::move(rgb), static_cast<std::int64_t>(t));
  }
  return seq;
}

SynthParams preset(std::string_view name) {
  SynthParams p;
  p.noise_sigma = 2.0;
  p.start_x = 70.0;
  p.start_y = 120.0;
  p.velocity_x = 2.0;
  if (name == "translation") return p;
  if (name == "blur") {
    p.blur = 3;
    return p;
  }
  if (name == "gain_ramp") {
    p.gain_end = 0.75;
    return p;
  }
  if (name == "fast_motion") {
    p.frames = 40;
    p.width = 640;
    p.start_x = 80.0;
    p.velocity_x = 25.0;
    p.bounce = true;
    return p;
  }
  if (name == "scale_ramp") {
    p.start_x = 160.0;
    p.velocity_x = 0.0;
    p.object_width = 60.0;
    p.object_height = 48.0;
    p.scale_rate = 1.005;
    return p;
  }
  if (name == "occlusion") {
    p.start_x = 80.0;
    p.velocity_x = 1.0;
    p.occlude_from = 40;
    p.occlude_to = 60;
    return p;
  }
  throw SpecInvalid("unknown synthetic preset `" + std::string(name) + "`");
}

std::vector<std::string> preset_names() {
  return {"translation", "fast_motion", "scale_ramp", "occlusion", "blur", "gain_ramp"};
}

SynthParams parse_synth_params(std::string_view text, const std::string& source) {
  using Field = std::variant<int SynthParams::*, double SynthParams::*, bool SynthParams::*,
                             std::uint64_t SynthParams::*>;
  static const std::map<std::string, Field, std::less<>> fields = {
      {"frames", &SynthParams::frames},
      {"width", &SynthParams::width},
      {"height", &SynthParams::height},
      {"object_width", &SynthParams::object_width},
      {"object_height", &SynthParams::object_height},
      {"start_x", &SynthParams::start_x},
      {"start_y", &SynthParams::start_y},
      {"seed", &SynthParams::seed},
      {"cell_size", &SynthParams::cell_size},
      {"velocity_x", &SynthParams::velocity_x},
      {"velocity_y", &SynthParams::velocity_y},
      {"bounce", &SynthParams::bounce},
      {"scale_rate", &SynthParams::scale_rate},
      {"occlude_from", &SynthParams::occlude_from},
      {"occlude_to", &SynthParams::occlude_to},
      {"occluder_margin", &SynthParams::occluder_margin},
      {"noise_sigma", &SynthParams::noise_sigma},
      {"blur", &SynthParams::blur},
      {"gain_start", &SynthParams::gain_start},
      {"gain_end", &SynthParams::gain_end},
  };

  const auto trim = [](std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string_view::npos) return std::string_view{};
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
  };

  SynthParams p;
  bool field_seen = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected `key = value`");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    // `preset = name` seeds every field; it must come before any override.
    if (key == "preset") {
      if (field_seen) throw ParseError(source, line_no, "`preset` must precede other keys");
      p = preset(value);
      continue;
    }
    field_seen = true;
    const auto it = fields.find(key);
    if (it == fields.end()) throw ParseError(source, line_no, "unknown key `" + std::string(key) + "`");
    const bool ok = std::visit(
        [&](auto member) {
          auto& slot = p.*member;
          using T = std::remove_reference_t<decltype(slot)>;
          if constexpr (std::is_same_v<T, bool>) {
            if (value == "true" || value == "1") return slot = true, true;
            if (value == "false" || value == "0") return slot = false, true;
            return false;
          } else {
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), slot);
            return ec == std::errc() && ptr == value.data() + value.size();
          }
        },
        it->second);
    if (!ok) throw ParseError(source, line_no, "bad value `" + std::string(value) + "` for " + std::string(key));
  }
  return p;
}

}  // namespace anchortrack
