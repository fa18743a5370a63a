#pragma once

// Cell-centred finite-volume discretisation on structured quadrilateral grids
// with face-normal numerical fluxes, MUSCL/van Leer reconstruction and
// forward-Euler or SSPRK2 time stepping.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "shockstab/boundary.hpp"
#include "shockstab/euler.hpp"
#include "shockstab/grid.hpp"
#include "shockstab/riemann.hpp"

namespace shockstab {

enum class Limiter { VanLeer, None };
enum class TimeIntegrator { Auto, ForwardEuler, SSPRK2 };

struct SolverConfig {
  FluxScheme scheme;
  int order = 1;
  double cfl = 0.5;
  std::optional<double> end_time;
  std::optional<long> max_iters;
  /// Fixed to van Leer for production runs; None is a test hook that makes
  /// order 2 reproduce first-order face states.
  Limiter limiter = Limiter::VanLeer;
  /// Auto: forward Euler for order 1, SSPRK2 for order 2.
  TimeIntegrator integrator = TimeIntegrator::Auto;
  /// Per-cell time steps for steady-state iteration.
  bool local_time_stepping = false;

  void validate() const {
    scheme.validate();
    if (order != 1 && order != 2) throw Error("order must be 1 or 2");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw Error("cfl must lie in (0, 1]");
    if (end_time && !(*end_time > 0.0)) throw Error("end_time must be positive");
    if (max_iters && *max_iters < 1) throw Error("max_iters must be at least 1");
    if (!end_time && !max_iters) throw Error("either end_time or max_iters is required");
  }

  TimeIntegrator resolved_integrator() const {
    if (integrator != TimeIntegrator::Auto) return integrator;
    return order == 2 ? TimeIntegrator::SSPRK2 : TimeIntegrator::ForwardEuler;
  }
};

enum class Direction { I, J };

/// Left (low index) and right (high index) primitive states on every face
/// of one family. I-faces: (ni+1)*nj, index j*(ni+1)+i. J-faces: ni*(nj+1),
/// index j*ni+i.
struct FaceStates {
  std::vector<PrimitiveState> left;
  std::vector<PrimitiveState> right;
};

/// van Leer limited slope, phi(r) * dp with r = dm / dp.
inline double van_leer_slope(double dm, double dp) {
  const double den = std::abs(dm) + std::abs(dp);
  if (den == 0.0) return 0.0;
  return (dm * std::abs(dp) + std::abs(dm) * dp) / den;
}

/// van Leer limiter function phi(r) = (r + |r|) / (1 + |r|).
inline double van_leer_phi(double r) { return (r + std::abs(r)) / (1.0 + std::abs(r)); }

namespace detail {

inline PrimitiveState add_scaled(const PrimitiveState& w, const PrimitiveState& s, double k) {
  return {w.rho + k * s.rho, w.u + k * s.u, w.v + k * s.v, w.p + k * s.p};
}

inline PrimitiveState limited_slope(const PrimitiveState& wm, const PrimitiveState& w,
                                    const PrimitiveState& wp) {
  return {van_leer_slope(w.rho - wm.rho, wp.rho - w.rho), van_leer_slope(w.u - wm.u, wp.u - w.u),
          van_leer_slope(w.v - wm.v, wp.v - w.v), van_leer_slope(w.p - wm.p, wp.p - w.p)};
}

}  // namespace detail

/// Face states in one direction. With Limiter::None (or order 1) the face
/// states are the adjacent cell states. Slopes vanish next to blanked cells
/// and wherever the limited extrapolation would lose positivity.
inline FaceStates muscl_reconstruct(const StructuredGrid& grid, const GhostedField& w,
                                    Direction dir, Limiter limiter) {
  const int ni = grid.ni(), nj = grid.nj();
  const bool along_i = dir == Direction::I;
  const int n_along = along_i ? ni : nj;
  const int n_across = along_i ? nj : ni;

  auto cell = [&](int a, int b) -> const PrimitiveState& { return along_i ? w(a, b) : w(b, a); };
  auto usable = [&](int a, int b) {
    if (a < 0 || a >= n_along) return true;  // ghost
    return along_i ? grid.active(a, b) : grid.active(b, a);
  };

  FaceStates fs;
  const std::size_t n_faces = static_cast<std::size_t>(n_along + 1) * n_across;
  fs.left.resize(n_faces);
  fs.right.resize(n_faces);
  auto face_index = [&](int a, int b) -> std::size_t {
    // a: position along dir (0..n_along), b: across
    return along_i ? static_cast<std::size_t>(b) * (ni + 1) + a
                   : static_cast<std::size_t>(a) * ni + b;
  };

  std::vector<PrimitiveState> slope(static_cast<std::size_t>(n_along + 2));
  for (int b = 0; b < n_across; ++b) {
    // slopes for cells a = -1 .. n_along, stored at a + 1
    for (int a = -1; a <= n_along; ++a) {
      PrimitiveState s{};
      if (limiter == Limiter::VanLeer && usable(a, b) && usable(a - 1, b) && usable(a + 1, b)) {
        const auto& c = cell(a, b);
        s = detail::limited_slope(cell(a - 1, b), c, cell(a + 1, b));
        if (!is_physical(detail::add_scaled(c, s, 0.5)) ||
            !is_physical(detail::add_scaled(c, s, -0.5))) {
          s = {};
        }
      }
      slope[static_cast<std::size_t>(a + 1)] = s;
    }
    for (int a = 0; a <= n_along; ++a) {
      const std::size_t f = face_index(a, b);
      fs.left[f] = detail::add_scaled(cell(a - 1, b), slope[static_cast<std::size_t>(a)], 0.5);
      fs.right[f] = detail::add_scaled(cell(a, b), slope[static_cast<std::size_t>(a + 1)], -0.5);
    }
  }
  return fs;
}

/// Time derivative of every cell plus the net outward flux through the
/// domain boundary and blanked-cell walls.
struct Residual {
  std::vector<Vec4> dudt;
  Vec4 boundary_outflow;
};

class FiniteVolumeSolver {
 public:
  FiniteVolumeSolver(StructuredGrid grid, BoundarySpec bc, GasModel gas, SolverConfig config)
      : grid_(std::move(grid)), bc_(std::move(bc)), gas_(gas), config_(config) {
    gas_.validate();
    bc_.validate(grid_);
    config_.scheme.validate();
    if (config_.order != 1 && config_.order != 2) throw Error("order must be 1 or 2");
  }

  const StructuredGrid& grid() const noexcept { return grid_; }
  const BoundarySpec& boundaries() const noexcept { return bc_; }
  const GasModel& gas() const noexcept { return gas_; }
  const SolverConfig& config() const noexcept { return config_; }

  Residual evaluate(const Field& U, double t) const {
    const int ni = grid_.ni(), nj = grid_.nj();
    const GhostedField w = apply_boundaries(grid_, U, bc_, t, gas_);
    const Limiter lim = config_.order == 2 ? config_.limiter : Limiter::None;
    const FaceStates fi = muscl_reconstruct(grid_, w, Direction::I, lim);
    const FaceStates fj = muscl_reconstruct(grid_, w, Direction::J, lim);

    Residual res;
    std::vector<Vec4> flux_i(static_cast<std::size_t>(ni + 1) * nj);
    std::vector<Vec4> flux_j(static_cast<std::size_t>(ni) * (nj + 1));

    // face with low-side cell (al) and high-side cell (ah); index range
    // checks tell ghosts from interior cells.
    auto face_flux = [&](const FaceStates& fs, std::size_t f, const FaceFrame& frame,
                         bool low_interior, bool low_active, bool high_interior, bool high_active,
                         double outward_low_edge_sign, double outward_high_edge_sign) -> Vec4 {
      const bool low_ok = !low_interior || low_active;
      const bool high_ok = !high_interior || high_active;
      if (!low_ok && !high_ok) return {};
      if (!low_ok && !high_interior) return {};
      if (!high_ok && !low_interior) return {};
      PrimitiveState wl = fs.left[f];
      PrimitiveState wr = fs.right[f];
      bool wall = false;
      if (!high_ok) {
        wr = mirror_state(wl, frame);
        wall = true;
      } else if (!low_ok) {
        wl = mirror_state(wr, frame);
        wall = true;
      }
      Vec4 flux = rotate_from_face(
          numerical_flux(rotate_to_face(wl, frame), rotate_to_face(wr, frame), gas_, config_.scheme),
          frame);
      flux *= frame.length;
      if (wall) {
        res.boundary_outflow += high_ok ? -flux : flux;
      } else if (!low_interior) {
        res.boundary_outflow += outward_low_edge_sign * flux;
      } else if (!high_interior) {
        res.boundary_outflow += outward_high_edge_sign * flux;
      }
      return flux;
    };

    for (int j = 0; j < nj; ++j) {
      for (int i = 0; i <= ni; ++i) {
        const std::size_t f = static_cast<std::size_t>(j) * (ni + 1) + i;
        const bool li = i - 1 >= 0, hi = i < ni;
        flux_i[f] = face_flux(fi, f, grid_.iface(i, j), li, li && grid_.active(i - 1, j), hi,
                              hi && grid_.active(i, j), -1.0, 1.0);
      }
    }
    for (int j = 0; j <= nj; ++j) {
      for (int i = 0; i < ni; ++i) {
        const std::size_t f = static_cast<std::size_t>(j) * ni + i;
        const bool li = j - 1 >= 0, hi = j < nj;
        flux_j[f] = face_flux(fj, f, grid_.jface(i, j), li, li && grid_.active(i, j - 1), hi,
                              hi && grid_.active(i, j), -1.0, 1.0);
      }
    }

    res.dudt.assign(grid_.num_cells(), Vec4{});
    for (int j = 0; j < nj; ++j) {
      for (int i = 0; i < ni; ++i) {
        if (!grid_.active(i, j)) continue;
        const Vec4& fw = flux_i[static_cast<std::size_t>(j) * (ni + 1) + i];
        const Vec4& fe = flux_i[static_cast<std::size_t>(j) * (ni + 1) + i + 1];
        const Vec4& fs = flux_j[static_cast<std::size_t>(j) * ni + i];
        const Vec4& fn = flux_j[static_cast<std::size_t>(j + 1) * ni + i];
        // (W + S) - (E + N) is invariant under i <-> j transposition
        res.dudt[grid_.cell_index(i, j)] = ((fw + fs) - (fe + fn)) / grid_.area(i, j);
      }
    }
    return res;
  }

  /// Sum over faces of (|u.n| + a) * length for every active cell.
  std::vector<double> spectral_sums(const Field& U) const {
    std::vector<double> sums(grid_.num_cells(), 0.0);
    for (int j = 0; j < grid_.nj(); ++j) {
      for (int i = 0; i < grid_.ni(); ++i) {
        if (!grid_.active(i, j)) continue;
        PrimitiveState w;
        try {
          w = primitive_from_conserved(U(i, j), gas_);
        } catch (const NonPhysicalState& e) {
          throw NonPhysicalState(e.detail(), grid_.cell_index(i, j));
        }
        const double a = sound_speed(w, gas_);
        auto term = [&](const FaceFrame& f) { return (std::abs(w.u * f.nx + w.v * f.ny) + a) * f.length; };
        sums[grid_.cell_index(i, j)] =
            (term(grid_.iface(i, j)) + term(grid_.jface(i, j))) +
            (term(grid_.iface(i + 1, j)) + term(grid_.jface(i, j + 1)));
      }
    }
    return sums;
  }

  /// Global step cfl * min(area / sum over faces (|u_n| + a) ds).
  double compute_dt(const Field& U) const { return compute_dt(U, config_.cfl); }

  double compute_dt(const Field& U, double cfl) const {
    const auto sums = spectral_sums(U);
    double dt = std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid_.nj(); ++j)
      for (int i = 0; i < grid_.ni(); ++i)
        if (grid_.active(i, j)) dt = std::min(dt, grid_.area(i, j) / sums[grid_.cell_index(i, j)]);
    return cfl * dt;
  }

  /// Per-cell steps cfl * area / sum; zero for blanked cells.
  std::vector<double> local_dt(const Field& U) const {
    const auto sums = spectral_sums(U);
    std::vector<double> dt(grid_.num_cells(), 0.0);
    for (int j = 0; j < grid_.nj(); ++j)
      for (int i = 0; i < grid_.ni(); ++i)
        if (grid_.active(i, j))
          dt[grid_.cell_index(i, j)] = config_.cfl * grid_.area(i, j) / sums[grid_.cell_index(i, j)];
    return dt;
  }

  /// U + dt * L(U); dt.size() is 1 (global) or num_cells (local).
  Field forward_euler(const Field& U, const std::vector<double>& dt, double t) const {
    return axpy(U, evaluate(U, t).dudt, dt);
  }

  /// u1 = u + dt L(u); u_new = u/2 + (u1 + dt L(u1))/2.
  Field ssprk2(const Field& U, const std::vector<double>& dt, double t) const {
    const Field u1 = axpy(U, evaluate(U, t).dudt, dt);
    const double t1 = dt.size() == 1 ? t + dt[0] : t;
    const Field u2 = axpy(u1, evaluate(u1, t1).dudt, dt);
    Field out = U;
    for (std::size_t c = 0; c < out.cells.size(); ++c) {
      out.cells[c] = ConservedState::from(0.5 * U.cells[c].vec() + 0.5 * u2.cells[c].vec());
    }
    return out;
  }

  Field step(const Field& U, const std::vector<double>& dt, double t) const {
    return config_.resolved_integrator() == TimeIntegrator::SSPRK2 ? ssprk2(U, dt, t)
                                                                   : forward_euler(U, dt, t);
  }

 private:
  Field axpy(const Field& U, const std::vector<Vec4>& dudt, const std::vector<double>& dt) const {
    Field out = U;
    const bool global = dt.size() == 1;
    for (std::size_t c = 0; c < out.cells.size(); ++c) {
      const double h = global ? dt[0] : dt[c];
      out.cells[c] = ConservedState::from(U.cells[c].vec() + h * dudt[c]);
    }
    return out;
  }

  StructuredGrid grid_;
  BoundarySpec bc_;
  GasModel gas_;
  SolverConfig config_;
};

// Free-function entry points over a one-off solver.

inline double compute_dt(const StructuredGrid& grid, const Field& U, double cfl,
                         const GasModel& gas = {}) {
  BoundarySpec none;
  for (auto e : {Edge::West, Edge::East, Edge::South, Edge::North}) none.set(e, ZeroGradientOutflow{});
  SolverConfig cfg;
  cfg.cfl = cfl;
  return FiniteVolumeSolver(grid, none, gas, cfg).compute_dt(U);
}

/// One forward-Euler update with first-order face states.
inline Field fv_update(const StructuredGrid& grid, const BoundarySpec& bc, const Field& U,
                       const FluxScheme& scheme, double dt, double t = 0.0,
                       const GasModel& gas = {}) {
  SolverConfig cfg;
  cfg.scheme = scheme;
  return FiniteVolumeSolver(grid, bc, gas, cfg).forward_euler(U, {dt}, t);
}

/// One SSPRK2 step with MUSCL/van Leer face states.
inline Field ssprk2_step(const StructuredGrid& grid, const BoundarySpec& bc, const Field& U,
                         const FluxScheme& scheme, double dt, double t = 0.0,
                         const GasModel& gas = {}) {
  SolverConfig cfg;
  cfg.scheme = scheme;
  cfg.order = 2;
  return FiniteVolumeSolver(grid, bc, gas, cfg).ssprk2(U, {dt}, t);
}

/// sqrt(sum over cells (drho / dt)^2 / N), summed in cell-index order.
inline double residual_l2(const Field& old_field, const Field& new_field, double dt) {
  if (old_field.cells.size() != new_field.cells.size()) throw Error("residual of mismatched fields");
  double sum = 0.0;
  for (std::size_t c = 0; c < old_field.cells.size(); ++c) {
    const double r = (new_field.cells[c].rho - old_field.cells[c].rho) / dt;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(old_field.cells.size()));
}

/// Local-time-step variant: each cell's change divided by its own step;
/// cells with a zero step (blanked) contribute nothing but are counted.
inline double residual_l2(const Field& old_field, const Field& new_field,
                          const std::vector<double>& dt) {
  if (dt.size() == 1) return residual_l2(old_field, new_field, dt[0]);
  double sum = 0.0;
  for (std::size_t c = 0; c < old_field.cells.size(); ++c) {
    if (dt[c] == 0.0) continue;
    const double r = (new_field.cells[c].rho - old_field.cells[c].rho) / dt[c];
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(old_field.cells.size()));
}

}  // namespace shockstab
