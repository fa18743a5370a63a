#pragma once

// HLL-family face-normal numerical fluxes: HLLE, HLLEM (Park-Kwon contact
// speed), HLLEM with a Dellacherie low-Mach correction, and HLLEM-FP1D with
// pressure-ratio-limited anti-diffusion.
//
// All states passed in are expressed in the face frame: u is the velocity
// component along the face normal and v the tangential component.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "shockstab/euler.hpp"

namespace shockstab {

/// S_R - S_L collapsed to round-off; the HLL average is undefined.
class DegenerateFan : public Error {
 public:
  using Error::Error;
};

enum class FluxKind { HLLE, HLLEM, HLLEM_LM, HLLEM_FP1D };

struct FluxScheme {
  FluxKind kind = FluxKind::HLLEM_FP1D;
  /// Exponent of the pressure-ratio function (HLLEM_FP1D only).
  double r = 1.0 / 3.0;

  void validate() const {
    if (!(r > 0.0 && r <= 1.0)) throw Error("flux scheme exponent r must lie in (0, 1]");
  }
  friend bool operator==(const FluxScheme&, const FluxScheme&) = default;
};

inline std::string_view to_string(FluxKind k) {
  switch (k) {
    case FluxKind::HLLE: return "hlle";
    case FluxKind::HLLEM: return "hllem";
    case FluxKind::HLLEM_LM: return "hllem_lm";
    case FluxKind::HLLEM_FP1D: return "hllem_fp1d";
  }
  return "?";
}

/// Parses "hlle", "hllem", "hllem_lm" or "hllem_fp1d" (case-sensitive).
inline FluxKind parse_flux_kind(std::string_view name) {
  for (auto k : {FluxKind::HLLE, FluxKind::HLLEM, FluxKind::HLLEM_LM, FluxKind::HLLEM_FP1D}) {
    if (to_string(k) == name) return k;
  }
  throw Error("unknown flux scheme '" + std::string(name) + "'");
}

struct RoeAverages {
  double u_n_tilde = 0.0;
  double u_t_tilde = 0.0;
  double a_tilde = 0.0;
  double rho_tilde = 0.0;
  double H_tilde = 0.0;
};

struct WaveSpeeds {
  double s_l = 0.0;
  double s_r = 0.0;
};

/// Anti-diffusion coefficients and wave strengths of the contact (2) and
/// shear (3) waves.
struct AntiDiffusion {
  double delta2 = 0.0;
  double delta3 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
};

inline RoeAverages roe_averages(const PrimitiveState& wl, const PrimitiveState& wr,
                                const GasModel& gas) {
  const double sl = std::sqrt(wl.rho);
  const double sr = std::sqrt(wr.rho);
  const double inv = 1.0 / (sl + sr);
  RoeAverages avg;
  avg.u_n_tilde = (sl * wl.u + sr * wr.u) * inv;
  avg.u_t_tilde = (sl * wl.v + sr * wr.v) * inv;
  avg.H_tilde = (sl * total_enthalpy(wl, gas) + sr * total_enthalpy(wr, gas)) * inv;
  const double q2 = avg.u_n_tilde * avg.u_n_tilde + avg.u_t_tilde * avg.u_t_tilde;
  avg.a_tilde = std::sqrt((gas.gamma - 1.0) * (avg.H_tilde - 0.5 * q2));
  avg.rho_tilde = sl * sr;
  return avg;
}

/// Einfeldt wave-speed estimates. With `clamp_zero` the fan always contains
/// the face (S_L <= 0 <= S_R), which turns the HLL average into the upwind
/// flux for supersonic faces.
inline WaveSpeeds wave_speeds(const PrimitiveState& wl, const PrimitiveState& wr,
                              const RoeAverages& avg, const GasModel& gas, bool clamp_zero = true) {
  double s_l = std::min(wl.u - sound_speed(wl, gas), avg.u_n_tilde - avg.a_tilde);
  double s_r = std::max(wr.u + sound_speed(wr, gas), avg.u_n_tilde + avg.a_tilde);
  if (clamp_zero) {
    s_l = std::min(s_l, 0.0);
    s_r = std::max(s_r, 0.0);
  }
  const double scale = std::max({std::abs(s_l), std::abs(s_r), 1.0});
  if (!(s_r - s_l >= 1e-12 * scale)) {
    throw DegenerateFan("coincident wave speed estimates S_L=" + std::to_string(s_l) +
                        " S_R=" + std::to_string(s_r));
  }
  return {s_l, s_r};
}

/// HLL state between the two acoustic waves. Requires S_L < 0 < S_R.
inline ConservedState hll_intermediate_state(const PrimitiveState& wl, const PrimitiveState& wr,
                                             const GasModel& gas) {
  const auto avg = roe_averages(wl, wr, gas);
  const auto s = wave_speeds(wl, wr, avg, gas, true);
  const Vec4 ul = conserved_from_primitive(wl, gas).vec();
  const Vec4 ur = conserved_from_primitive(wr, gas).vec();
  const Vec4 star = (s.s_r * ur - s.s_l * ul + physical_flux_x(wl, gas) - physical_flux_x(wr, gas)) /
                    (s.s_r - s.s_l);
  return ConservedState::from(star);
}

/// Contact/shear anti-diffusion for `scheme`. HLLE carries none.
inline AntiDiffusion anti_diffusion(const PrimitiveState& wl, const PrimitiveState& wr,
                                    const RoeAverages& avg, const FluxScheme& scheme) {
  AntiDiffusion ad;
  const double a2 = avg.a_tilde * avg.a_tilde;
  ad.alpha2 = (wr.rho - wl.rho) - (wr.p - wl.p) / a2;
  ad.alpha3 = avg.rho_tilde * (wr.v - wl.v);
  if (scheme.kind == FluxKind::HLLE) return ad;

  double delta = avg.a_tilde / (avg.a_tilde + std::abs(avg.u_n_tilde));
  if (scheme.kind == FluxKind::HLLEM_FP1D) {
    const double dp = std::abs(wl.p - wr.p);
    const double p_max = std::max(wl.p, wr.p);
    delta *= 1.0 - std::pow(dp / p_max, scheme.r);
  }
  ad.delta2 = delta;
  ad.delta3 = delta;
  return ad;
}

/// Dellacherie local Mach function min(max(M_L, M_R), 1).
inline double low_mach_theta(const PrimitiveState& wl, const PrimitiveState& wr,
                             const GasModel& gas) {
  return std::min(std::max(mach_number(wl, gas), mach_number(wr, gas)), 1.0);
}

/// HLL average plus explicit anti-diffusion `ad`, minus
/// low_mach_weight * rho~ a~ [0, du_n, 0, 0].
inline Vec4 hllem_flux_with(const PrimitiveState& wl, const PrimitiveState& wr, const GasModel& gas,
                            const RoeAverages& avg, const WaveSpeeds& s, const AntiDiffusion& ad,
                            double low_mach_weight) {
  const Vec4 fl = physical_flux_x(wl, gas);
  const Vec4 fr = physical_flux_x(wr, gas);
  const Vec4 du = conserved_from_primitive(wr, gas).vec() - conserved_from_primitive(wl, gas).vec();
  const double inv = 1.0 / (s.s_r - s.s_l);

  const double un = avg.u_n_tilde;
  const double ut = avg.u_t_tilde;
  const Vec4 r2{{1.0, un, ut, 0.5 * (un * un + ut * ut)}};
  const Vec4 r3{{0.0, 0.0, 1.0, ut}};
  const Vec4 b_du = (ad.delta2 * ad.alpha2) * r2 + (ad.delta3 * ad.alpha3) * r3;

  Vec4 f = (s.s_r * fl - s.s_l * fr) * inv + (s.s_r * s.s_l * inv) * (du - b_du);
  f[1] -= low_mach_weight * avg.rho_tilde * avg.a_tilde * (wr.u - wl.u);
  return f;
}

inline Vec4 hlle_flux(const PrimitiveState& wl, const PrimitiveState& wr, const GasModel& gas) {
  const auto avg = roe_averages(wl, wr, gas);
  const auto s = wave_speeds(wl, wr, avg, gas, true);
  const Vec4 fl = physical_flux_x(wl, gas);
  const Vec4 fr = physical_flux_x(wr, gas);
  const Vec4 du = conserved_from_primitive(wr, gas).vec() - conserved_from_primitive(wl, gas).vec();
  const double inv = 1.0 / (s.s_r - s.s_l);
  return (s.s_r * fl - s.s_l * fr) * inv + (s.s_r * s.s_l * inv) * du;
}

/// HLLEM, HLLEM-LM or HLLEM-FP1D flux (HLLE when scheme.kind is HLLE).
inline Vec4 hllem_family_flux(const PrimitiveState& wl, const PrimitiveState& wr,
                              const GasModel& gas, const FluxScheme& scheme) {
  const auto avg = roe_averages(wl, wr, gas);
  const auto s = wave_speeds(wl, wr, avg, gas, true);
  const auto ad = anti_diffusion(wl, wr, avg, scheme);
  double lm = 0.0;
  if (scheme.kind == FluxKind::HLLEM_LM || scheme.kind == FluxKind::HLLEM_FP1D) {
    lm = 1.0 - low_mach_theta(wl, wr, gas);
  }
  return hllem_flux_with(wl, wr, gas, avg, s, ad, lm);
}

/// Face flux used by the finite-volume engine. A degenerate fan falls back
/// to the upwind flux selected by the sign of the Roe normal velocity.
inline Vec4 numerical_flux(const PrimitiveState& wl, const PrimitiveState& wr, const GasModel& gas,
                           const FluxScheme& scheme) {
  try {
    if (scheme.kind == FluxKind::HLLE) return hlle_flux(wl, wr, gas);
    return hllem_family_flux(wl, wr, gas, scheme);
  } catch (const DegenerateFan&) {
    const auto avg = roe_averages(wl, wr, gas);
    return avg.u_n_tilde >= 0.0 ? physical_flux_x(wl, gas) : physical_flux_x(wr, gas);
  }
}

}  // namespace shockstab
