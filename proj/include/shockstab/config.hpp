#pragma once

// Run configuration: a flat INI-like text format.
//
//   # comment
//   [case]
//   preset = blunt_body
//   ni = 20
//   [solver]
//   scheme = hllem_fp1d
//   cfl = 0.5
//   [output]
//   directory = out/blunt
//
// Every key belongs to a section; unknown sections or keys are errors.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "shockstab/cases.hpp"
#include "shockstab/euler.hpp"
#include "shockstab/riemann.hpp"

namespace shockstab {

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0, std::string key = {})
      : Error(format(what, line, key)), detail_(what), line_(line), key_(std::move(key)) {}

  int line() const noexcept { return line_; }
  const std::string& what_only() const noexcept { return detail_; }
  const std::string& key() const noexcept { return key_; }

 private:
  static std::string format(const std::string& what, int line, const std::string& key) {
    std::string s = "config error";
    if (line > 0) s += " at line " + std::to_string(line);
    if (!key.empty()) s += " (key '" + key + "')";
    return s + ": " + what;
  }
  std::string detail_;
  int line_;
  std::string key_;
};

struct RunConfig {
  // [case]
  std::string preset;
  std::optional<int> ni;
  std::optional<int> nj;
  std::optional<double> end_time;
  std::optional<long> max_iters;
  // [solver]
  FluxScheme scheme;
  int order = 1;
  /// Unset: the preset's own value (0.5 except supersonic_corner's 0.8).
  std::optional<double> cfl;
  bool local_time_stepping = false;
  double gamma = 1.4;
  // [output]
  std::string directory = "output";
  std::optional<long> snapshot_every;
  std::optional<double> snapshot_interval;
  bool emit_csv = true;
  bool emit_vtk = false;

  CaseOverrides overrides() const { return {ni, nj, end_time, max_iters}; }

  /// Throws ConfigError on any invariant violation.
  void validate() const {
    const auto& names = case_presets();
    if (preset.empty()) throw ConfigError("a case preset is required", 0, "preset");
    if (std::find(names.begin(), names.end(), preset) == names.end())
      throw ConfigError("unknown preset '" + preset + "'", 0, "preset");
    if (ni && *ni < 1) throw ConfigError("must be positive", 0, "ni");
    if (nj && *nj < 1) throw ConfigError("must be positive", 0, "nj");
    if (end_time && !(*end_time > 0.0)) throw ConfigError("must be positive", 0, "end_time");
    if (max_iters && *max_iters < 1) throw ConfigError("must be positive", 0, "max_iters");
    if (!(scheme.r > 0.0 && scheme.r <= 1.0)) throw ConfigError("must lie in (0, 1]", 0, "r");
    if (order != 1 && order != 2) throw ConfigError("must be 1 or 2", 0, "order");
    if (cfl && !(*cfl > 0.0 && *cfl <= 1.0)) throw ConfigError("must lie in (0, 1]", 0, "cfl");
    if (!(gamma > 1.0)) throw ConfigError("must exceed 1", 0, "gamma");
    if (directory.empty()) throw ConfigError("must not be empty", 0, "directory");
    if (snapshot_every && *snapshot_every < 1) throw ConfigError("must be positive", 0, "snapshot_every");
    if (snapshot_interval && !(*snapshot_interval > 0.0))
      throw ConfigError("must be positive", 0, "snapshot_interval");
    if (!emit_csv && !emit_vtk) throw ConfigError("at least one format is required", 0, "formats");
  }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view v, int line, const std::string& key) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end) {
    throw ConfigError("cannot parse '" + std::string(v) + "' as a number", line, key);
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) throw ConfigError("value must be finite", line, key);
  }
  return out;
}

inline bool parse_bool(std::string_view v, int line, const std::string& key) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("expected true or false, got '" + std::string(v) + "'", line, key);
}

inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::vector<std::string> seen;
  std::vector<std::pair<std::string, int>> key_lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no);
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (section != "case" && section != "solver" && section != "output") {
        throw ConfigError("unknown section [" + section + "]", line_no);
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view val = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (section.empty()) throw ConfigError("key outside of any section", line_no, key);
    if (val.empty()) throw ConfigError("empty value", line_no, key);
    const std::string qualified = section + "." + key;
    if (std::find(seen.begin(), seen.end(), qualified) != seen.end())
      throw ConfigError("duplicate key", line_no, key);
    seen.push_back(qualified);
    key_lines.emplace_back(key, line_no);

    using detail::parse_bool;
    using detail::parse_number;
    if (section == "case") {
      if (key == "preset") cfg.preset = std::string(val);
      else if (key == "ni") cfg.ni = parse_number<int>(val, line_no, key);
      else if (key == "nj") cfg.nj = parse_number<int>(val, line_no, key);
      else if (key == "end_time") cfg.end_time = parse_number<double>(val, line_no, key);
      else if (key == "max_iters") cfg.max_iters = parse_number<long>(val, line_no, key);
      else throw ConfigError("unknown key in [case]", line_no, key);
    } else if (section == "solver") {
      if (key == "scheme") {
        try {
          cfg.scheme.kind = parse_flux_kind(val);
        } catch (const Error& e) {
          throw ConfigError(e.what(), line_no, key);
        }
      } else if (key == "r") cfg.scheme.r = parse_number<double>(val, line_no, key);
      else if (key == "order") cfg.order = parse_number<int>(val, line_no, key);
      else if (key == "cfl") cfg.cfl = parse_number<double>(val, line_no, key);
      else if (key == "local_time_stepping") cfg.local_time_stepping = parse_bool(val, line_no, key);
      else if (key == "gamma") cfg.gamma = parse_number<double>(val, line_no, key);
      else throw ConfigError("unknown key in [solver]", line_no, key);
    } else {
      if (key == "directory") cfg.directory = std::string(val);
      else if (key == "snapshot_every") cfg.snapshot_every = parse_number<long>(val, line_no, key);
      else if (key == "snapshot_interval") cfg.snapshot_interval = parse_number<double>(val, line_no, key);
      else if (key == "formats") {
        cfg.emit_csv = cfg.emit_vtk = false;
        std::string_view rest = val;
        while (!rest.empty()) {
          const auto comma = rest.find(',');
          const auto item = detail::trim(rest.substr(0, comma));
          if (item == "csv") cfg.emit_csv = true;
          else if (item == "vtk") cfg.emit_vtk = true;
          else throw ConfigError("unknown format '" + std::string(item) + "'", line_no, key);
          rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
      } else throw ConfigError("unknown key in [output]", line_no, key);
    }
  }
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    // point at the offending line when the key appeared in the text
    for (const auto& [k, l] : key_lines)
      if (k == e.key()) throw ConfigError(e.what_only(), l, k);
    throw;
  }
  return cfg;
}

inline std::string serialize_config(const RunConfig& c) {
  using detail::fmt_double;
  std::ostringstream os;
  os << "[case]\n";
  os << "preset = " << c.preset << "\n";
  if (c.ni) os << "ni = " << *c.ni << "\n";
  if (c.nj) os << "nj = " << *c.nj << "\n";
  if (c.end_time) os << "end_time = " << fmt_double(*c.end_time) << "\n";
  if (c.max_iters) os << "max_iters = " << *c.max_iters << "\n";
  os << "\n[solver]\n";
  os << "scheme = " << to_string(c.scheme.kind) << "\n";
  os << "r = " << fmt_double(c.scheme.r) << "\n";
  os << "order = " << c.order << "\n";
  if (c.cfl) os << "cfl = " << fmt_double(*c.cfl) << "\n";
  os << "local_time_stepping = " << (c.local_time_stepping ? "true" : "false") << "\n";
  os << "gamma = " << fmt_double(c.gamma) << "\n";
  os << "\n[output]\n";
  os << "directory = " << c.directory << "\n";
  if (c.snapshot_every) os << "snapshot_every = " << *c.snapshot_every << "\n";
  if (c.snapshot_interval) os << "snapshot_interval = " << fmt_double(*c.snapshot_interval) << "\n";
  os << "formats = ";
  if (c.emit_csv) os << "csv" << (c.emit_vtk ? "," : "");
  if (c.emit_vtk) os << "vtk";
  os << "\n";
  return os.str();
}

}  // namespace shockstab
