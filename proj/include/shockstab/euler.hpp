#pragma once

// Two-dimensional Euler equations for a calorically perfect gas: state
// vectors, equation of state, physical fluxes and face-frame rotations.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace shockstab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state that cannot be converted to primitive variables (rho <= 0 or
/// p <= 0). Carries the offending cell and step when raised inside a solver.
class NonPhysicalState : public Error {
 public:
  explicit NonPhysicalState(const std::string& what, std::optional<std::size_t> cell = {},
                            std::optional<long> step = {})
      : Error(format(what, cell, step)), detail_(what), cell_(cell), step_(step) {}

  /// The message without cell/step decoration.
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> cell() const noexcept { return cell_; }
  std::optional<long> step() const noexcept { return step_; }

 private:
  static std::string format(const std::string& what, std::optional<std::size_t> cell,
                            std::optional<long> step) {
    std::ostringstream os;
    os << "non-physical state: " << what;
    if (cell) os << " (cell " << *cell << ")";
    if (step) os << " (step " << *step << ")";
    return os.str();
  }

  std::string detail_;
  std::optional<std::size_t> cell_;
  std::optional<long> step_;
};

/// Plain 4-vector used for fluxes and state arithmetic.
struct Vec4 {
  std::array<double, 4> c{};

  constexpr double& operator[](std::size_t k) { return c[k]; }
  constexpr double operator[](std::size_t k) const { return c[k]; }

  constexpr Vec4& operator+=(const Vec4& o) {
    for (std::size_t k = 0; k < 4; ++k) c[k] += o.c[k];
    return *this;
  }
  constexpr Vec4& operator-=(const Vec4& o) {
    for (std::size_t k = 0; k < 4; ++k) c[k] -= o.c[k];
    return *this;
  }
  constexpr Vec4& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }
  friend constexpr Vec4 operator+(Vec4 a, const Vec4& b) { return a += b; }
  friend constexpr Vec4 operator-(Vec4 a, const Vec4& b) { return a -= b; }
  friend constexpr Vec4 operator*(double s, Vec4 a) { return a *= s; }
  friend constexpr Vec4 operator*(Vec4 a, double s) { return a *= s; }
  friend constexpr Vec4 operator/(Vec4 a, double s) {
    for (auto& x : a.c) x /= s;
    return a;
  }
  friend constexpr Vec4 operator-(Vec4 a) {
    for (auto& x : a.c) x = -x;
    return a;
  }
  friend constexpr bool operator==(const Vec4&, const Vec4&) = default;
};

struct GasModel {
  double gamma = 1.4;

  /// Throws if gamma <= 1.
  void validate() const {
    if (!(gamma > 1.0)) throw Error("gas model requires gamma > 1");
  }
};

/// Cell-averaged conserved variables (rho, rho u, rho v, rho E).
struct ConservedState {
  double rho = 0.0;
  double rho_u = 0.0;
  double rho_v = 0.0;
  double rho_E = 0.0;

  constexpr Vec4 vec() const { return {{rho, rho_u, rho_v, rho_E}}; }
  static constexpr ConservedState from(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

  friend constexpr bool operator==(const ConservedState&, const ConservedState&) = default;
};

/// Primitive variables (rho, u, v, p).
struct PrimitiveState {
  double rho = 0.0;
  double u = 0.0;
  double v = 0.0;
  double p = 0.0;

  friend constexpr bool operator==(const PrimitiveState&, const PrimitiveState&) = default;
};

inline double sound_speed(const PrimitiveState& w, const GasModel& gas) {
  return std::sqrt(gas.gamma * w.p / w.rho);
}

/// Mach number based on the full velocity magnitude.
inline double mach_number(const PrimitiveState& w, const GasModel& gas) {
  return std::hypot(w.u, w.v) / sound_speed(w, gas);
}

inline double total_enthalpy(const PrimitiveState& w, const GasModel& gas) {
  return gas.gamma / (gas.gamma - 1.0) * w.p / w.rho + 0.5 * (w.u * w.u + w.v * w.v);
}

inline bool is_physical(const PrimitiveState& w) {
  return std::isfinite(w.rho) && std::isfinite(w.u) && std::isfinite(w.v) && std::isfinite(w.p) &&
         w.rho > 0.0 && w.p > 0.0;
}

inline ConservedState conserved_from_primitive(const PrimitiveState& w, const GasModel& gas) {
  const double kinetic = 0.5 * w.rho * (w.u * w.u + w.v * w.v);
  return {w.rho, w.rho * w.u, w.rho * w.v, w.p / (gas.gamma - 1.0) + kinetic};
}

/// Recovers (rho, u, v, p). Throws NonPhysicalState if rho <= 0 or the
/// recovered pressure is not positive.
inline PrimitiveState primitive_from_conserved(const ConservedState& U, const GasModel& gas) {
  if (!(U.rho > 0.0) || !std::isfinite(U.rho)) {
    throw NonPhysicalState("density " + std::to_string(U.rho));
  }
  const double u = U.rho_u / U.rho;
  const double v = U.rho_v / U.rho;
  const double p = (gas.gamma - 1.0) * (U.rho_E - 0.5 * U.rho * (u * u + v * v));
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw NonPhysicalState("pressure " + std::to_string(p));
  }
  return {U.rho, u, v, p};
}

/// x-directional flux F(U) written in primitive variables.
inline Vec4 physical_flux_x(const PrimitiveState& w, const GasModel& gas) {
  const double rho_E = w.p / (gas.gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v);
  const double mass = w.rho * w.u;
  return {{mass, mass * w.u + w.p, mass * w.v, (rho_E + w.p) * w.u}};
}

/// Unit normal and length of a cell face.
struct FaceFrame {
  double nx = 1.0;
  double ny = 0.0;
  double length = 1.0;

  bool valid() const {
    return std::abs(nx * nx + ny * ny - 1.0) <= 1e-12 && length > 0.0;
  }
};

// T: momentum -> (normal, tangential). T^-1 undoes it.

inline ConservedState rotate_to_face(const ConservedState& U, const FaceFrame& f) {
  return {U.rho, f.nx * U.rho_u + f.ny * U.rho_v, f.nx * U.rho_v - f.ny * U.rho_u, U.rho_E};
}

inline ConservedState rotate_from_face(const ConservedState& U, const FaceFrame& f) {
  return {U.rho, f.nx * U.rho_u - f.ny * U.rho_v, f.ny * U.rho_u + f.nx * U.rho_v, U.rho_E};
}

inline PrimitiveState rotate_to_face(const PrimitiveState& w, const FaceFrame& f) {
  return {w.rho, f.nx * w.u + f.ny * w.v, f.nx * w.v - f.ny * w.u, w.p};
}

inline PrimitiveState rotate_from_face(const PrimitiveState& w, const FaceFrame& f) {
  return {w.rho, f.nx * w.u - f.ny * w.v, f.ny * w.u + f.nx * w.v, w.p};
}

/// Back-rotation of a face-normal flux vector to global axes.
inline Vec4 rotate_from_face(const Vec4& F, const FaceFrame& f) {
  return {{F[0], f.nx * F[1] - f.ny * F[2], f.ny * F[1] + f.nx * F[2], F[3]}};
}

}  // namespace shockstab
