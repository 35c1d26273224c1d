#include "pga/enhance.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace pga {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument("not a number");
  return out;
}

int parse_int(std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument("not an integer");
  return out;
}

using Setter = std::function<void(EnhancerConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"xi_min_db", [](EnhancerConfig& c, std::string_view v) { c.presence.xi_min_db = parse_double(v); }},
      {"xi_max_db", [](EnhancerConfig& c, std::string_view v) { c.presence.xi_max_db = parse_double(v); }},
      {"xi_peak_db", [](EnhancerConfig& c, std::string_view v) { c.presence.xi_peak_db = parse_double(v); }},
      {"w_local", [](EnhancerConfig& c, std::string_view v) { c.presence.w_local = parse_int(v); }},
      {"w_global", [](EnhancerConfig& c, std::string_view v) { c.presence.w_global = parse_int(v); }},
      {"alpha_xi", [](EnhancerConfig& c, std::string_view v) { c.presence.alpha_xi = parse_double(v); }},
      {"xi_estimator",
       [](EnhancerConfig& c, std::string_view v) {
         if (v == "as_written") c.presence.xi_estimator = XiEstimator::AsWritten;
         else if (v == "decision_directed") c.presence.xi_estimator = XiEstimator::DecisionDirected;
         else throw std::invalid_argument("expected as_written or decision_directed");
       }},
      {"gain_xi",
       [](EnhancerConfig& c, std::string_view v) {
         if (v == "presence") c.gain_xi = GainXiSource::Presence;
         else if (v == "decision_directed") c.gain_xi = GainXiSource::DecisionDirected;
         else throw std::invalid_argument("expected presence or decision_directed");
       }},
      {"silence_frames", [](EnhancerConfig& c, std::string_view v) { c.silence_frames = parse_int(v); }},
      {"method", [](EnhancerConfig& c, std::string_view v) { c.method = method_from_string(v); }},
      {"frame_len", [](EnhancerConfig& c, std::string_view v) { c.analysis.frame_len = parse_int(v); }},
      {"hop", [](EnhancerConfig& c, std::string_view v) { c.analysis.hop = parse_int(v); }},
      {"window", [](EnhancerConfig& c, std::string_view v) { c.analysis.window = window_from_string(v); }},
      {"cos_delta", [](EnhancerConfig& c, std::string_view v) { c.guards.cos_delta = parse_double(v); }},
      {"h_floor", [](EnhancerConfig& c, std::string_view v) { c.guards.h_floor = parse_double(v); }},
      {"h_ceil", [](EnhancerConfig& c, std::string_view v) { c.guards.h_ceil = parse_double(v); }},
      {"rho_floor", [](EnhancerConfig& c, std::string_view v) { c.guards.rho_floor = parse_double(v); }},
  };
  return table;
}

}  // namespace

void apply_config_text(std::string_view text, EnhancerConfig& cfg) {
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw std::invalid_argument(where + ": expected key=value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    const auto it = setters().find(key);
    if (it == setters().end()) throw std::invalid_argument(where + ": unknown key '" + std::string(key) + "'");
    try {
      it->second(cfg, value);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + ": bad value for '" + std::string(key) + "': " + e.what());
    }
  }
}

void apply_config_file(const std::filesystem::path& path, EnhancerConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(ss.str(), cfg);
}

}  // namespace pga
