#include "anchortrack/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <variant>

#include "anchortrack/errors.hpp"

namespace anchortrack {
namespace {

using FieldRef = std::variant<double TrackerConfig::*, int TrackerConfig::*, bool TrackerConfig::*>;

const std::map<std::string, FieldRef, std::less<>>& fields() {
  static const std::map<std::string, FieldRef, std::less<>> table = {
      {"closeness_alpha", &TrackerConfig::closeness_alpha},
      {"st_eta", &TrackerConfig::st_eta},
      {"lt_init_floor", &TrackerConfig::lt_init_floor},
      {"lt_delta", &TrackerConfig::lt_delta},
      {"lt_min", &TrackerConfig::lt_min},
      {"ratio_test", &TrackerConfig::ratio_test},
      {"vote_sigma_rel", &TrackerConfig::vote_sigma_rel},
      {"vote_sigma_min", &TrackerConfig::vote_sigma_min},
      {"vote_truncation", &TrackerConfig::vote_truncation},
      {"scale_enabled", &TrackerConfig::scale_enabled},
      {"scale_period", &TrackerConfig::scale_period},
      {"scale_clamp", &TrackerConfig::scale_clamp},
      {"gate_lbsp_min", &TrackerConfig::gate_lbsp_min},
      {"gate_hist_max", &TrackerConfig::gate_hist_max},
      {"lbsp_threshold", &TrackerConfig::lbsp_threshold},
      {"hist_bins_per_channel", &TrackerConfig::hist_bins_per_channel},
      {"patch_norm_size", &TrackerConfig::patch_norm_size},
      {"max_anchors", &TrackerConfig::max_anchors},
      {"descriptor_patch", &TrackerConfig::descriptor_patch},
      {"corner_min_response", &TrackerConfig::corner_min_response},
  };
  return table;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_bool(std::string_view s, bool& out) {
  if (s == "true" || s == "1" || s == "on" || s == "yes") {
    out = true;
    return true;
  }
  if (s == "false" || s == "0" || s == "off" || s == "no") {
    out = false;
    return true;
  }
  return false;
}

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(std::string("invalid config: ") + what);
}

}  // namespace

void TrackerConfig::validate() const {
  require(closeness_alpha > 0.0, "closeness_alpha must be > 0");
  require(st_eta > 0.0, "st_eta must be > 0");
  require(lt_delta > 0.0 && lt_delta < 1.0, "lt_delta must lie in (0, 1)");
  require(lt_min >= 0.0 && lt_min < lt_init_floor && lt_init_floor <= 1.0,
          "need 0 <= lt_min < lt_init_floor <= 1");
  require(ratio_test > 0.0 && ratio_test < 1.0, "ratio_test must lie in (0, 1)");
  require(vote_sigma_rel > 0.0, "vote_sigma_rel must be > 0");
  require(vote_sigma_min > 0.0, "vote_sigma_min must be > 0");
  require(vote_truncation > 0.0, "vote_truncation must be > 0");
  require(scale_period >= 1, "scale_period must be >= 1");
  require(scale_clamp > 0.0, "scale_clamp must be > 0");
  require(gate_lbsp_min >= 0.0 && gate_lbsp_min <= 1.0, "gate_lbsp_min must lie in [0, 1]");
  require(gate_hist_max >= 0.0, "gate_hist_max must be >= 0");
  require(lbsp_threshold >= 0 && lbsp_threshold <= 255, "lbsp_threshold must lie in [0, 255]");
  require(hist_bins_per_channel >= 1 && hist_bins_per_channel <= 256,
          "hist_bins_per_channel must lie in [1, 256]");
  require(patch_norm_size >= 8, "patch_norm_size must be >= 8");
  require(max_anchors >= 1, "max_anchors must be >= 1");
  require(descriptor_patch >= 3 && descriptor_patch % 2 == 1,
          "descriptor_patch must be odd and >= 3");
  require(corner_min_response >= 0.0, "corner_min_response must be >= 0");
}

TrackerConfig parse_config(std::string_view text, const std::string& source) {
  TrackerConfig cfg;
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

    const auto it = fields().find(key);
    if (it == fields().end()) throw ParseError(source, line_no, "unknown key `" + std::string(key) + "`");

    const bool ok = std::visit(
        [&](auto member) {
          auto& slot = cfg.*member;
          using T = std::remove_reference_t<decltype(slot)>;
          if constexpr (std::is_same_v<T, bool>) {
            return parse_bool(value, slot);
          } else {
            return parse_number(value, slot);
          }
        },
        it->second);
    if (!ok) throw ParseError(source, line_no, "bad value `" + std::string(value) + "` for " + std::string(key));
  }
  cfg.validate();
  return cfg;
}

TrackerConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

void write_config(std::ostream& os, const TrackerConfig& cfg) {
  for (const auto& [name, member] : fields()) {
    os << name << " = ";
    std::visit(
        [&](auto m) {
          const auto& v = cfg.*m;
          using T = std::remove_cvref_t<decltype(v)>;
          if constexpr (std::is_same_v<T, bool>) {
            os << (v ? "true" : "false");
          } else if constexpr (std::is_same_v<T, double>) {
            os << std::setprecision(17) << v;
          } else {
            os << v;
          }
        },
        member);
    os << '\n';
  }
}

}  // namespace anchortrack
