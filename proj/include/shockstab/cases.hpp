#pragma once

// Benchmark problems for shock-instability studies: grids, initial fields,
// boundary conditions, run lengths, contour specs and instability metrics.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "shockstab/boundary.hpp"
#include "shockstab/euler.hpp"
#include "shockstab/grid.hpp"

namespace shockstab {

class SubsonicShock : public Error {
 public:
  using Error::Error;
};

class UnknownCase : public Error {
 public:
  using Error::Error;
};

/// Normal shock of Mach `mach` running in +x into `pre`.
struct ShockJump {
  double mach = 1.0;
  PrimitiveState pre;
  PrimitiveState post;

  double shock_speed(const GasModel& gas) const { return pre.u + mach * sound_speed(pre, gas); }
};

inline ShockJump normal_shock_state(const PrimitiveState& pre, double mach, const GasModel& gas = {}) {
  if (!(mach > 1.0)) throw SubsonicShock("shock Mach number must exceed 1, got " + std::to_string(mach));
  const double g = gas.gamma;
  const double m2 = mach * mach;
  const double a1 = sound_speed(pre, gas);
  const double s = pre.u + mach * a1;
  const double rho2 = pre.rho * (g + 1.0) * m2 / ((g - 1.0) * m2 + 2.0);
  const double p2 = pre.p * (2.0 * g * m2 - (g - 1.0)) / (g + 1.0);
  // shock-frame velocities
  const double w1 = pre.u - s;
  const double w2 = w1 * pre.rho / rho2;
  return {mach, pre, {rho2, w2 + s, pre.v, p2}};
}

/// Relative mass, momentum and energy jump residuals in the shock frame.
inline std::array<double, 3> rankine_hugoniot_residuals(const ShockJump& j, const GasModel& gas = {}) {
  const double s = j.shock_speed(gas);
  auto fluxes = [&](const PrimitiveState& w) {
    const double un = w.u - s;
    const double h = total_enthalpy({w.rho, un, 0.0, w.p}, gas);
    return std::array<double, 3>{w.rho * un, w.rho * un * un + w.p, w.rho * un * h};
  };
  const auto f1 = fluxes(j.pre), f2 = fluxes(j.post);
  std::array<double, 3> r{};
  for (int k = 0; k < 3; ++k) {
    const double scale = std::max({std::abs(f1[k]), std::abs(f2[k]), 1e-300});
    r[k] = std::abs(f2[k] - f1[k]) / scale;
  }
  return r;
}

struct ContourSpec {
  std::string variable = "rho";
  double min = 0.0;
  double max = 1.0;
  int levels = 10;
};

enum class CaseKind { PlanarShock, DoubleMach, ForwardStep, BluntBody, SupersonicCorner };

struct CaseDefinition {
  std::string name;
  CaseKind kind = CaseKind::PlanarShock;
  StructuredGrid grid;
  Field initial;
  BoundarySpec boundaries;
  std::optional<double> end_time;
  std::optional<long> max_iters;
  double cfl = 0.5;
  ContourSpec contours;
  ShockJump shock;  // the jump that defines the case's post-shock state
};

namespace detail {

inline Field uniform_field(const StructuredGrid& g, const PrimitiveState& w, const GasModel& gas) {
  return Field(g.ni(), g.nj(), conserved_from_primitive(w, gas));
}

inline int scaled(int n, double fraction) { return static_cast<int>(std::lround(n * fraction)); }

}  // namespace detail

inline const PrimitiveState kQuiescentGas{1.4, 0.0, 0.0, 1.0};

/// Mach 6 shock down a channel of unit cells with a zig-zag centreline.
inline CaseDefinition build_planar_shock(int ni = 800, int nj = 20, double end_time = 55.0,
                                         const GasModel& gas = {}) {
  if (ni < 10 || nj < 2 || nj % 2 != 0) throw Error("planar shock needs ni >= 10 and even nj");
  std::vector<Point2> v;
  v.reserve(static_cast<std::size_t>(ni + 1) * (nj + 1));
  const int centre = nj / 2;
  for (int j = 0; j <= nj; ++j) {
    for (int i = 0; i <= ni; ++i) {
      double y = j;
      if (j == centre) y += (i % 2 == 0) ? 0.001 : -0.001;
      v.push_back({static_cast<double>(i), y});
    }
  }
  CaseDefinition c;
  c.name = "planar_shock";
  c.kind = CaseKind::PlanarShock;
  c.grid = StructuredGrid(ni, nj, std::move(v));
  c.shock = normal_shock_state(kQuiescentGas, 6.0, gas);
  c.initial = detail::uniform_field(c.grid, kQuiescentGas, gas);
  const auto post = conserved_from_primitive(c.shock.post, gas);
  const double x_shock = 5.0;
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < ni; ++i)
      if (c.grid.centroid(i, j).x < x_shock) c.initial(i, j) = post;
  c.boundaries.set(Edge::West, SupersonicInflow{c.shock.post})
      .set(Edge::East, ZeroGradientOutflow{})
      .set(Edge::South, ReflectiveWall{})
      .set(Edge::North, ReflectiveWall{});
  c.boundaries.validate(c.grid);
  c.end_time = end_time;
  c.contours = {"rho", 1.6, 7.0, 30};
  return c;
}

/// Mach 10 oblique shock at 60 degrees hitting a wall, on [0,4]x[0,1].
inline CaseDefinition build_double_mach(int ni = 480, int nj = 120, double end_time = 0.2,
                                        const GasModel& gas = {}) {
  if (ni < 24 || nj < 1) throw Error("double Mach reflection needs ni >= 24");
  CaseDefinition c;
  c.name = "double_mach";
  c.kind = CaseKind::DoubleMach;
  c.grid = StructuredGrid::cartesian(ni, nj, 0.0, 4.0, 0.0, 1.0);
  const ShockJump normal = normal_shock_state(kQuiescentGas, 10.0, gas);
  const double sqrt3 = std::numbers::sqrt3;
  // post-shock velocity along the shock normal (sin 60, -cos 60)
  PrimitiveState post = normal.post;
  post.u = normal.post.u * (sqrt3 / 2.0);
  post.v = -normal.post.u * 0.5;
  c.shock = {10.0, kQuiescentGas, post};

  const double x0 = 1.0 / 6.0;
  c.initial = detail::uniform_field(c.grid, kQuiescentGas, gas);
  const auto U_post = conserved_from_primitive(post, gas);
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < ni; ++i) {
      const auto p = c.grid.centroid(i, j);
      if (p.x < x0 + p.y / sqrt3) c.initial(i, j) = U_post;
    }
  const int i_wall = detail::scaled(ni, x0 / 4.0);
  c.boundaries.set(Edge::West, SupersonicInflow{post})
      .set(Edge::East, ZeroGradientOutflow{})
      .set(Edge::South, SupersonicInflow{post}, 0, i_wall)
      .set(Edge::South, ReflectiveWall{}, i_wall)
      .set(Edge::North, MovingShockTop{kQuiescentGas, post, x0 + 1.0 / sqrt3,
                                       normal.shock_speed(gas) * 2.0 / sqrt3});
  c.boundaries.validate(c.grid);
  c.end_time = end_time;
  c.contours = {"rho", 2.0, 21.5, 30};
  return c;
}

/// Mach 3 flow over a step 0.2 high starting 0.6 from the inlet, on [0,3]x[0,1].
inline CaseDefinition build_forward_step(int ni = 480, int nj = 160, double end_time = 4.0,
                                         const GasModel& gas = {}) {
  if (ni < 5 || nj < 5) throw Error("forward step needs at least 5x5 cells");
  CaseDefinition c;
  c.name = "forward_step";
  c.kind = CaseKind::ForwardStep;
  c.grid = StructuredGrid::cartesian(ni, nj, 0.0, 3.0, 0.0, 1.0);
  const int i_step = detail::scaled(ni, 0.6 / 3.0);
  const int j_step = detail::scaled(nj, 0.2);
  for (int j = 0; j < j_step; ++j)
    for (int i = i_step; i < ni; ++i) c.grid.blank(i, j);
  const PrimitiveState inflow{1.4, 3.0, 0.0, 1.0};
  c.shock = {3.0, inflow, inflow};
  c.initial = detail::uniform_field(c.grid, inflow, gas);
  c.boundaries.set(Edge::West, SupersonicInflow{inflow})
      .set(Edge::East, ZeroGradientOutflow{})
      .set(Edge::South, ReflectiveWall{})
      .set(Edge::North, ReflectiveWall{});
  c.boundaries.validate(c.grid);
  c.end_time = end_time;
  c.contours = {"rho", 0.2, 7.0, 45};
  return c;
}

/// Mach 20 flow past a unit half-cylinder; outer boundary radius 3. i runs
/// from the outer boundary (i = 0) to the body, j from the lower outflow
/// arc to the upper one.
inline CaseDefinition build_blunt_body(int ni = 40, int nj = 320, long iterations = 100000,
                                       const GasModel& gas = {}) {
  if (ni < 2 || nj < 2 || nj % 2 != 0) throw Error("blunt body needs ni >= 2 and even nj");
  std::vector<Point2> v;
  v.reserve(static_cast<std::size_t>(ni + 1) * (nj + 1));
  for (int j = 0; j <= nj; ++j) {
    // integer numerator keeps phi(nj - j) == -phi(j) exactly
    const double phi = std::numbers::pi * (2 * j - nj) / (2.0 * nj);
    const double cs = std::cos(phi), sn = std::sin(phi);
    for (int i = 0; i <= ni; ++i) {
      const double s = static_cast<double>(ni - i) / ni;  // 0 on the body
      const double r = 1.0 + 2.0 * (0.7 * s + 0.3 * s * s);
      v.push_back({-r * cs, r * sn});
    }
  }
  CaseDefinition c;
  c.name = "blunt_body";
  c.kind = CaseKind::BluntBody;
  c.grid = StructuredGrid(ni, nj, std::move(v));
  const PrimitiveState freestream{1.4, 20.0, 0.0, 1.0};
  c.shock = normal_shock_state({1.4, 0.0, 0.0, 1.0}, 20.0, gas);
  c.initial = detail::uniform_field(c.grid, freestream, gas);
  c.boundaries.set(Edge::West, SupersonicInflow{freestream})
      .set(Edge::East, ReflectiveWall{})
      .set(Edge::South, Extrapolate{})
      .set(Edge::North, Extrapolate{});
  c.boundaries.validate(c.grid);
  c.max_iters = iterations;
  c.contours = {"rho", 2.0, 8.7, 27};
  return c;
}

/// Mach 5.09 shock diffracting round a 90 degree corner at (0.05, 0.45) in
/// the unit square.
inline CaseDefinition build_supersonic_corner(int ni = 400, int nj = 400, double end_time = 0.1561,
                                              const GasModel& gas = {}) {
  if (ni < 20 || nj < 20) throw Error("supersonic corner needs at least 20x20 cells");
  CaseDefinition c;
  c.name = "supersonic_corner";
  c.kind = CaseKind::SupersonicCorner;
  c.grid = StructuredGrid::cartesian(ni, nj, 0.0, 1.0, 0.0, 1.0);
  const int i_corner = detail::scaled(ni, 0.05);
  const int j_corner = detail::scaled(nj, 0.45);
  for (int j = 0; j < j_corner; ++j)
    for (int i = 0; i < i_corner; ++i) c.grid.blank(i, j);
  c.shock = normal_shock_state(kQuiescentGas, 5.09, gas);
  c.initial = detail::uniform_field(c.grid, kQuiescentGas, gas);
  const auto post = conserved_from_primitive(c.shock.post, gas);
  for (int j = 0; j < nj; ++j)
    for (int i = 0; i < ni; ++i)
      if (c.grid.centroid(i, j).x < 0.05) c.initial(i, j) = post;
  c.boundaries.set(Edge::West, ReflectiveWall{}, 0, j_corner)
      .set(Edge::West, SupersonicInflow{c.shock.post}, j_corner)
      .set(Edge::East, ZeroGradientOutflow{})
      .set(Edge::South, ReflectiveWall{}, 0, i_corner)
      .set(Edge::South, Extrapolate{}, i_corner)
      .set(Edge::North, ZeroGradientOutflow{});
  c.boundaries.validate(c.grid);
  c.end_time = end_time;
  c.cfl = 0.8;
  c.contours = {"rho", 0.0, 7.1, 30};
  return c;
}

/// Preset names understood by build_case.
inline const std::vector<std::string>& case_presets() {
  static const std::vector<std::string> names{
      "planar_shock",      "planar_shock_small", "double_mach",  "double_mach_caption",
      "forward_step",      "forward_step_coarse", "blunt_body",  "blunt_body_small",
      "supersonic_corner"};
  return names;
}

/// Optional resolution / run-length overrides applied on top of a preset.
struct CaseOverrides {
  std::optional<int> ni;
  std::optional<int> nj;
  std::optional<double> end_time;
  std::optional<long> max_iters;
};

inline CaseDefinition build_case(const std::string& preset, const CaseOverrides& o = {},
                                 const GasModel& gas = {}) {
  auto pick = [](std::optional<int> v, int d) { return v.value_or(d); };
  CaseDefinition c;
  if (preset == "planar_shock") {
    c = build_planar_shock(pick(o.ni, 800), pick(o.nj, 20), o.end_time.value_or(55.0), gas);
  } else if (preset == "planar_shock_small") {
    c = build_planar_shock(pick(o.ni, 400), pick(o.nj, 20), o.end_time.value_or(55.0), gas);
  } else if (preset == "double_mach") {
    c = build_double_mach(pick(o.ni, 480), pick(o.nj, 120), o.end_time.value_or(0.2), gas);
  } else if (preset == "double_mach_caption") {
    c = build_double_mach(pick(o.ni, 480), pick(o.nj, 120), o.end_time.value_or(0.020026), gas);
  } else if (preset == "forward_step") {
    c = build_forward_step(pick(o.ni, 480), pick(o.nj, 160), o.end_time.value_or(4.0), gas);
  } else if (preset == "forward_step_coarse") {
    c = build_forward_step(pick(o.ni, 120), pick(o.nj, 40), o.end_time.value_or(4.0), gas);
  } else if (preset == "blunt_body") {
    c = build_blunt_body(pick(o.ni, 40), pick(o.nj, 320), o.max_iters.value_or(100000), gas);
  } else if (preset == "blunt_body_small") {
    c = build_blunt_body(pick(o.ni, 20), pick(o.nj, 160), o.max_iters.value_or(20000), gas);
  } else if (preset == "supersonic_corner") {
    c = build_supersonic_corner(pick(o.ni, 400), pick(o.nj, 400), o.end_time.value_or(0.1561), gas);
  } else {
    throw UnknownCase("unknown case preset '" + preset + "'");
  }
  if (c.end_time && o.max_iters) c.max_iters = o.max_iters;
  if (c.max_iters && o.end_time) c.end_time = o.end_time;
  c.name = preset;
  return c;
}

// ---- instability metrics ----

struct Metric {
  std::string name;
  double value = 0.0;
};

struct InstabilityMetrics {
  std::string case_name;
  std::vector<Metric> values;

  std::optional<double> get(const std::string& n) const {
    for (const auto& m : values)
      if (m.name == n) return m.value;
    return std::nullopt;
  }
};

namespace detail {

inline std::vector<PrimitiveState> primitives(const StructuredGrid& g, const Field& f,
                                              const GasModel& gas) {
  std::vector<PrimitiveState> w(g.num_cells(), PrimitiveState{1.0, 0.0, 0.0, 1.0});
  for (int j = 0; j < g.nj(); ++j)
    for (int i = 0; i < g.ni(); ++i)
      if (g.active(i, j)) w[g.cell_index(i, j)] = primitive_from_conserved(f(i, j), gas);
  return w;
}

/// Column (i) of the steepest row-averaged density jump; the shock sits
/// between i and i+1.
inline int shock_column(const StructuredGrid& g, const std::vector<PrimitiveState>& w) {
  std::vector<double> mean(static_cast<std::size_t>(g.ni()), 0.0);
  for (int i = 0; i < g.ni(); ++i) {
    double s = 0.0;
    for (int j = 0; j < g.nj(); ++j) s += w[g.cell_index(i, j)].rho;
    mean[static_cast<std::size_t>(i)] = s / g.nj();
  }
  int best = 0;
  double jump = -1.0;
  for (int i = 0; i + 1 < g.ni(); ++i) {
    const double d = std::abs(mean[static_cast<std::size_t>(i + 1)] - mean[static_cast<std::size_t>(i)]);
    if (d > jump) {
      jump = d;
      best = i;
    }
  }
  return best;
}

}  // namespace detail

/// Alternating-row density component plus the largest transverse velocity
/// over the 10 columns behind the shock front.
inline double odd_even_amplitude(const StructuredGrid& g, const Field& f, const GasModel& gas = {}) {
  const auto w = detail::primitives(g, f, gas);
  const int is = detail::shock_column(g, w);
  double alt = 0.0, vmax = 0.0;
  for (int i = std::max(0, is - 9); i <= is; ++i) {
    double even = 0.0, odd = 0.0;
    int ne = 0, no = 0;
    for (int j = 0; j < g.nj(); ++j) {
      const auto& c = w[g.cell_index(i, j)];
      if (j % 2 == 0) {
        even += c.rho;
        ++ne;
      } else {
        odd += c.rho;
        ++no;
      }
      vmax = std::max(vmax, std::abs(c.v));
    }
    if (ne > 0 && no > 0) alt = std::max(alt, 0.5 * std::abs(even / ne - odd / no));
  }
  return alt + vmax;
}

/// max |rho(i, j) - rho(i, nj-1-j)| / rho at the stagnation point.
inline double symmetry_deviation(const StructuredGrid& g, const Field& f) {
  const int ni = g.ni(), nj = g.nj();
  const double rho_stag = 0.5 * (f(ni - 1, nj / 2 - 1).rho + f(ni - 1, nj / 2).rho);
  double dev = 0.0;
  for (int j = 0; j < nj / 2; ++j)
    for (int i = 0; i < ni; ++i) dev = std::max(dev, std::abs(f(i, j).rho - f(i, nj - 1 - j).rho));
  return dev / rho_stag;
}

/// Largest |v| within 5 columns of the leading shock in the 4 rows around
/// mid-height. The leading shock in a row is its steepest density jump.
inline double shock_band_max_v(const StructuredGrid& g, const Field& f, const GasModel& gas = {}) {
  const auto w = detail::primitives(g, f, gas);
  const int ni = g.ni(), nj = g.nj();
  double vmax = 0.0;
  for (int j = std::max(0, nj / 2 - 2); j < std::min(nj, nj / 2 + 2); ++j) {
    int best = -1;
    double jump = -1.0;
    for (int i = 0; i + 1 < ni; ++i) {
      if (!g.active(i, j) || !g.active(i + 1, j)) continue;
      const double d = std::abs(w[g.cell_index(i + 1, j)].rho - w[g.cell_index(i, j)].rho);
      if (d > jump) {
        jump = d;
        best = i;
      }
    }
    if (best < 0) continue;
    for (int i = std::max(0, best - 5); i <= std::min(ni - 1, best + 5); ++i)
      if (g.active(i, j)) vmax = std::max(vmax, std::abs(w[g.cell_index(i, j)].v));
  }
  return vmax;
}

inline InstabilityMetrics instability_metrics(CaseKind kind, const std::string& name,
                                              const StructuredGrid& g, const Field& f,
                                              const GasModel& gas = {}) {
  InstabilityMetrics m{name, {}};
  switch (kind) {
    case CaseKind::PlanarShock:
      m.values.push_back({"odd_even_amplitude", odd_even_amplitude(g, f, gas)});
      break;
    case CaseKind::BluntBody:
      m.values.push_back({"symmetry_deviation", symmetry_deviation(g, f)});
      break;
    case CaseKind::DoubleMach:
    case CaseKind::ForwardStep:
    case CaseKind::SupersonicCorner:
      m.values.push_back({"shock_band_max_v", shock_band_max_v(g, f, gas)});
      break;
  }
  return m;
}

inline CaseKind case_kind_of(const std::string& name) {
  auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };
  if (starts("planar_shock")) return CaseKind::PlanarShock;
  if (starts("double_mach")) return CaseKind::DoubleMach;
  if (starts("forward_step")) return CaseKind::ForwardStep;
  if (starts("blunt_body")) return CaseKind::BluntBody;
  if (starts("supersonic_corner")) return CaseKind::SupersonicCorner;
  throw UnknownCase("no metrics defined for case '" + name + "'");
}

inline InstabilityMetrics instability_metrics(const std::string& name, const StructuredGrid& g,
                                              const Field& f, const GasModel& gas = {}) {
  return instability_metrics(case_kind_of(name), name, g, f, gas);
}

}  // namespace shockstab
