#pragma once

// Discrete stability laboratory for a grid-aligned shock with zero normal
// velocity: linearised amplification matrices, the reduced (eigenvalue)
// Lyapunov test, a quadratic Lyapunov function and the per-scheme
// perturbation recurrences used by the direct Lyapunov test.
//
// Perturbations are (rho^, (rho u)^, p^) about a steady state
// (rho0, u0, p0); u is the velocity tangential to the shock.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "shockstab/euler.hpp"

namespace shockstab {

class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

/// The quadratic Lyapunov function weights (rho u)^ by 1/u0^2.
class ZeroBaseVelocity : public Error {
 public:
  ZeroBaseVelocity() : Error("Lyapunov function undefined for zero base velocity u0") {}
};

enum class SchemeFamily { HLLE, ROE_HLLEM_HLLC, HLL_CPS, HLLCM_HLLEC, HLLS_HLLES, HLLEM_FP1D };

inline constexpr std::array<SchemeFamily, 6> kAllFamilies = {
    SchemeFamily::HLLE,        SchemeFamily::ROE_HLLEM_HLLC, SchemeFamily::HLL_CPS,
    SchemeFamily::HLLCM_HLLEC, SchemeFamily::HLLS_HLLES,     SchemeFamily::HLLEM_FP1D};

inline std::string_view to_string(SchemeFamily f) {
  switch (f) {
    case SchemeFamily::HLLE: return "hlle";
    case SchemeFamily::ROE_HLLEM_HLLC: return "roe_hllem_hllc";
    case SchemeFamily::HLL_CPS: return "hll_cps";
    case SchemeFamily::HLLCM_HLLEC: return "hllcm_hllec";
    case SchemeFamily::HLLS_HLLES: return "hlls_hlles";
    case SchemeFamily::HLLEM_FP1D: return "hllem_fp1d";
  }
  return "?";
}

inline SchemeFamily parse_scheme_family(std::string_view name) {
  for (auto f : kAllFamilies) {
    if (to_string(f) == name) return f;
  }
  throw Error("unknown scheme family '" + std::string(name) + "'");
}

struct BaseState {
  double rho0 = 1.0;
  double u0 = 1.0;
  double p0 = 1.0;
  double a0 = std::sqrt(1.4);
  double nu = 0.45;

  /// Builds a validated base state with a0 = sqrt(gamma p0 / rho0).
  static BaseState make(double rho0, double u0, double p0, double nu, const GasModel& gas = {}) {
    gas.validate();
    if (!(rho0 > 0.0 && p0 > 0.0)) throw Error("base state requires rho0 > 0 and p0 > 0");
    if (!(nu > 0.0 && nu < 1.0)) throw Error("linearised CFL number must lie in (0, 1)");
    if (!std::isfinite(u0)) throw Error("base velocity must be finite");
    return {rho0, u0, p0, std::sqrt(gas.gamma * p0 / rho0), nu};
  }
};

/// Report default: rho0 = p0 = u0 = 1, gamma = 1.4, nu = 0.45.
inline BaseState default_base_state() { return BaseState::make(1.0, 1.0, 1.0, 0.45); }

struct PerturbationState {
  double rho_hat = 0.0;
  double rhou_hat = 0.0;
  double p_hat = 0.0;

  Eigen::Vector3d vec() const { return {rho_hat, rhou_hat, p_hat}; }
  static PerturbationState from(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
  PerturbationState scaled(double s) const { return {s * rho_hat, s * rhou_hat, s * p_hat}; }
  bool is_zero() const { return rho_hat == 0.0 && rhou_hat == 0.0 && p_hat == 0.0; }
};

using Matrix3 = Eigen::Matrix3d;

namespace detail {
inline void require_linear(SchemeFamily f) {
  if (f == SchemeFamily::HLLEM_FP1D) {
    throw UnsupportedFamily("HLLEM-FP1D is nonlinear and has no constant amplification matrix");
  }
}
}  // namespace detail

/// Update matrix for primitive perturbations (rho^, u^, p^) at a general
/// base state; the pressure-to-density feeding coefficient is 2 nu / a0^2.
inline Matrix3 primitive_amplification_matrix(SchemeFamily family, const BaseState& base) {
  detail::require_linear(family);
  const double nu = base.nu;
  const double damp = 1.0 - 2.0 * nu;
  const double feed = -2.0 * nu / (base.a0 * base.a0);
  Matrix3 m = Matrix3::Zero();
  m(2, 2) = damp;
  switch (family) {
    case SchemeFamily::HLLE:
      m(0, 0) = damp;
      m(1, 1) = damp;
      break;
    case SchemeFamily::ROE_HLLEM_HLLC:
      m(0, 0) = 1.0;
      m(0, 2) = feed;
      m(1, 1) = 1.0;
      break;
    case SchemeFamily::HLL_CPS:
      // shear damping 1 - 2 nu / gamma in normalised form, i.e. 1 - 2 nu p0 / (rho0 a0^2)
      m(0, 0) = 1.0;
      m(0, 2) = feed;
      m(1, 1) = 1.0 + feed * base.p0 / base.rho0;
      break;
    case SchemeFamily::HLLCM_HLLEC:
      m(0, 0) = 1.0;
      m(0, 2) = feed;
      m(1, 1) = damp;
      break;
    case SchemeFamily::HLLS_HLLES:
      m(0, 0) = damp;
      m(1, 1) = 1.0;
      break;
    case SchemeFamily::HLLEM_FP1D:
      break;
  }
  return m;
}

/// Tabulated normalised form (rho0 = p0 = 1, hence a0^2 = gamma).
inline Matrix3 primitive_amplification_matrix(SchemeFamily family, double nu, double gamma) {
  if (!(nu > 0.0 && nu < 1.0)) throw Error("linearised CFL number must lie in (0, 1)");
  return primitive_amplification_matrix(family, BaseState::make(1.0, 1.0, 1.0, nu, {gamma}));
}

/// Linear map (rho^, u^, p^) -> (rho^, (rho u)^, p^) at the base state:
/// (rho u)^ = rho0 u^ + u0 rho^.
inline Matrix3 primitive_to_conserved_map(const BaseState& base) {
  Matrix3 t = Matrix3::Identity();
  t(1, 0) = base.u0;
  t(1, 1) = base.rho0;
  return t;
}

/// Update matrix of the conserved-deviation recurrences. HLL-CPS has no
/// such recurrence.
inline Matrix3 conserved_amplification_matrix(SchemeFamily family, const BaseState& base) {
  detail::require_linear(family);
  const double nu = base.nu;
  const double a2 = base.a0 * base.a0;
  const double u0 = base.u0;
  Matrix3 m = Matrix3::Zero();
  m(2, 2) = 1.0 - 2.0 * nu;
  switch (family) {
    case SchemeFamily::HLLE:
      m(0, 0) = 1.0 - 2.0 * nu;
      m(1, 1) = 1.0 - 2.0 * nu;
      break;
    case SchemeFamily::ROE_HLLEM_HLLC:
      m(0, 0) = 1.0;
      m(0, 2) = -2.0 * nu / a2;
      m(1, 1) = 1.0;
      m(1, 2) = -2.0 * nu * u0 / a2;
      break;
    case SchemeFamily::HLLCM_HLLEC:
      m(0, 0) = 1.0;
      m(0, 2) = -2.0 * nu / a2;
      m(1, 0) = 2.0 * nu * u0;
      m(1, 1) = 1.0 - 2.0 * nu;
      m(1, 2) = -2.0 * nu * u0 / a2;
      break;
    case SchemeFamily::HLLS_HLLES:
      m(0, 0) = 1.0 - 2.0 * nu;
      m(1, 0) = -2.0 * nu * u0;
      m(1, 1) = 1.0;
      break;
    case SchemeFamily::HLL_CPS:
      throw UnsupportedFamily("HLL-CPS has no conserved-deviation recurrence");
    case SchemeFamily::HLLEM_FP1D:
      break;
  }
  return m;
}

/// Eigenvalues sorted by descending modulus.
inline std::vector<std::complex<double>> eigenvalues(const Matrix3& m) {
  Eigen::EigenSolver<Matrix3> solver(m, false);
  const auto ev = solver.eigenvalues();
  std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return std::abs(a) > std::abs(b); });
  return out;
}

enum class LyapunovVerdict { AsymptoticallyStable, Inconclusive, Unstable };

inline std::string_view to_string(LyapunovVerdict v) {
  switch (v) {
    case LyapunovVerdict::AsymptoticallyStable: return "AsymptoticallyStable";
    case LyapunovVerdict::Inconclusive: return "Inconclusive";
    case LyapunovVerdict::Unstable: return "Unstable";
  }
  return "?";
}

inline constexpr double kUnitCircleBand = 1e-12;

/// Reduced Lyapunov test on the eigenvalues of a linear update map.
inline LyapunovVerdict reduced_lyapunov_verdict(const Matrix3& m) {
  double radius = 0.0;
  bool on_circle = false;
  for (const auto& ev : eigenvalues(m)) {
    const double mod = std::abs(ev);
    radius = std::max(radius, mod);
    if (std::abs(mod - 1.0) <= kUnitCircleBand) on_circle = true;
  }
  if (radius > 1.0 + kUnitCircleBand) return LyapunovVerdict::Unstable;
  if (on_circle) return LyapunovVerdict::Inconclusive;
  return LyapunovVerdict::AsymptoticallyStable;
}

inline LyapunovVerdict reduced_lyapunov_verdict(SchemeFamily family, double nu, double gamma) {
  return reduced_lyapunov_verdict(primitive_amplification_matrix(family, nu, gamma));
}

/// V = (a0^2/rho0) rho^2 + (a0^2/(rho0 u0^2)) (rho u)^2 + p^2/(rho0 a0^2).
inline double lyapunov_value(const PerturbationState& x, const BaseState& base) {
  if (base.u0 == 0.0) throw ZeroBaseVelocity();
  const double a2 = base.a0 * base.a0;
  return a2 / base.rho0 * x.rho_hat * x.rho_hat +
         a2 / (base.rho0 * base.u0 * base.u0) * x.rhou_hat * x.rhou_hat +
         x.p_hat * x.p_hat / (base.rho0 * a2);
}

/// FP1D anti-diffusion coefficient for a saw-tooth pressure perturbation.
inline double fp1d_delta(double p_hat, double p0, double r = 1.0 / 3.0) {
  const double ap = std::abs(p_hat);
  return 1.0 - std::pow(2.0 * ap / (p0 + ap), r);
}

/// One time step of the family's perturbation recurrence.
inline PerturbationState step_perturbation(SchemeFamily family, const PerturbationState& x,
                                           const BaseState& base) {
  const double nu = base.nu;
  const double a2 = base.a0 * base.a0;
  const double u0 = base.u0;
  const double p_next = x.p_hat - 2.0 * nu * x.p_hat;
  switch (family) {
    case SchemeFamily::HLLE:
      return {x.rho_hat - 2.0 * nu * x.rho_hat, x.rhou_hat - 2.0 * nu * x.rhou_hat, p_next};
    case SchemeFamily::ROE_HLLEM_HLLC:
      return {x.rho_hat - 2.0 * nu * x.p_hat / a2, x.rhou_hat - 2.0 * nu * u0 * x.p_hat / a2,
              p_next};
    case SchemeFamily::HLLCM_HLLEC:
      return {x.rho_hat - 2.0 * nu * x.p_hat / a2,
              x.rhou_hat - 2.0 * nu * (x.rhou_hat - u0 * x.rho_hat + u0 * x.p_hat / a2), p_next};
    case SchemeFamily::HLLS_HLLES:
      return {x.rho_hat - 2.0 * nu * x.rho_hat, x.rhou_hat - 2.0 * nu * u0 * x.rho_hat, p_next};
    case SchemeFamily::HLLEM_FP1D: {
      const double d = fp1d_delta(x.p_hat, base.p0);
      return {x.rho_hat - 2.0 * nu * ((1.0 - d) * x.rho_hat + d * x.p_hat / a2),
              x.rhou_hat - 2.0 * nu * ((1.0 - d) * x.rhou_hat + d * u0 * x.p_hat / a2), p_next};
    }
    case SchemeFamily::HLL_CPS:
      break;
  }
  throw UnsupportedFamily("HLL-CPS has no conserved-deviation recurrence");
}

/// Definitional Lyapunov change V(step(x)) - V(x).
inline double delta_v(SchemeFamily family, const PerturbationState& x, const BaseState& base) {
  return lyapunov_value(step_perturbation(family, x, base), base) - lyapunov_value(x, base);
}

/// Closed-form Lyapunov change of each linear family. The HLLCM/HLLEC
/// expression holds on the zero-shear-perturbation manifold (rho u)^ = u0 rho^.
inline double closed_form_delta_v(SchemeFamily family, const PerturbationState& x,
                                  const BaseState& base) {
  if (base.u0 == 0.0) throw ZeroBaseVelocity();
  const double nu = base.nu;
  const double a2 = base.a0 * base.a0;
  const double r0 = base.rho0;
  const double u0 = base.u0;
  const double rho = x.rho_hat, rhou = x.rhou_hat, p = x.p_hat;
  const double p_term = -4.0 * nu * (1.0 - nu) * p * p / (r0 * a2);
  switch (family) {
    case SchemeFamily::HLLE:
      return -4.0 * nu * (1.0 - nu) *
             (a2 / r0 * rho * rho + a2 / (r0 * u0 * u0) * rhou * rhou + p * p / (r0 * a2));
    case SchemeFamily::ROE_HLLEM_HLLC:
    case SchemeFamily::HLLCM_HLLEC:
      return -4.0 * nu / r0 * rho * p + 4.0 * nu * nu / (r0 * a2) * p * p -
             4.0 * nu / (r0 * u0) * rhou * p + 4.0 * nu * nu / (r0 * a2) * p * p + p_term;
    case SchemeFamily::HLLS_HLLES:
      return -a2 / r0 * 4.0 * nu * (1.0 - 2.0 * nu) * rho * rho -
             a2 / (r0 * u0) * 4.0 * nu * rho * rhou + p_term;
    case SchemeFamily::HLL_CPS:
    case SchemeFamily::HLLEM_FP1D:
      break;
  }
  throw UnsupportedFamily("no closed-form Lyapunov change for " + std::string(to_string(family)));
}

struct TraceEntry {
  long step = 0;
  PerturbationState state;
  double v = 0.0;
  /// Change of V over the step leaving this state.
  double dv = 0.0;
};

struct LyapunovTrace {
  SchemeFamily family = SchemeFamily::HLLE;
  BaseState base;
  std::vector<TraceEntry> entries;
};

/// Iterates the recurrence n_steps times from x0; n_steps + 1 entries.
inline LyapunovTrace phase_portrait(SchemeFamily family, const PerturbationState& x0,
                                   const BaseState& base, long n_steps) {
  if (n_steps < 1) throw Error("phase portrait requires at least one step");
  LyapunovTrace trace{family, base, {}};
  trace.entries.reserve(static_cast<std::size_t>(n_steps) + 1);
  PerturbationState x = x0;
  double v = lyapunov_value(x, base);
  for (long n = 0; n <= n_steps; ++n) {
    const PerturbationState next = step_perturbation(family, x, base);
    const double v_next = lyapunov_value(next, base);
    trace.entries.push_back({n, x, v, v_next - v});
    x = next;
    v = v_next;
  }
  return trace;
}

struct SignSample {
  PerturbationState state;
  double dv = 0.0;
  int sign = 0;
};

/// Evaluates sign(dV) on every sample.
inline std::vector<SignSample> stability_region_map(SchemeFamily family, const BaseState& base,
                                                    const std::vector<PerturbationState>& samples) {
  std::vector<SignSample> out;
  out.reserve(samples.size());
  for (const auto& x : samples) {
    if (!std::isfinite(x.rho_hat) || !std::isfinite(x.rhou_hat) || !std::isfinite(x.p_hat)) {
      throw Error("stability map samples must be finite");
    }
    const double dv = delta_v(family, x, base);
    out.push_back({x, dv, (dv > 0.0) - (dv < 0.0)});
  }
  return out;
}

/// Cartesian grid of n^3 samples; (rho u)^ is scaled by u0 so all three
/// axes span the same relative range [-extent, extent].
inline std::vector<PerturbationState> perturbation_grid(double extent, int n, const BaseState& base) {
  if (n < 2) throw Error("perturbation grid needs at least two points per axis");
  std::vector<PerturbationState> out;
  out.reserve(static_cast<std::size_t>(n) * n * n);
  auto at = [&](int k) { return -extent + 2.0 * extent * k / (n - 1); };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out.push_back({at(a), base.u0 * at(b), at(c)});
  return out;
}

}  // namespace shockstab
