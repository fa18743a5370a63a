#pragma once

// Reference implementations used only by the tests. Written independently
// of the library: plain arrays, textbook formulas, no shared helpers.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

// ---------- exact Riemann solver for the 1D Euler equations ----------

class ExactRiemann {
 public:
  ExactRiemann(double rl, double ul, double pl, double rr, double ur, double pr, double gamma = 1.4)
      : rl_(rl), ul_(ul), pl_(pl), rr_(rr), ur_(ur), pr_(pr), g_(gamma) {
    al_ = std::sqrt(g_ * pl_ / rl_);
    ar_ = std::sqrt(g_ * pr_ / rr_);
    if (2.0 / (g_ - 1.0) * (al_ + ar_) <= ur_ - ul_) throw std::runtime_error("vacuum generated");
    solve_star();
  }

  double p_star() const { return ps_; }
  double u_star() const { return us_; }

  /// (rho, u, p) on the ray x/t = s.
  std::array<double, 3> sample(double s) const {
    const double g = g_;
    if (s <= us_) {
      if (ps_ > pl_) {  // left shock
        const double q = ps_ / pl_;
        const double sl = ul_ - al_ * std::sqrt((g + 1.0) / (2.0 * g) * q + (g - 1.0) / (2.0 * g));
        if (s <= sl) return {rl_, ul_, pl_};
        const double rho = rl_ * (q + (g - 1.0) / (g + 1.0)) / ((g - 1.0) / (g + 1.0) * q + 1.0);
        return {rho, us_, ps_};
      }
      const double shl = ul_ - al_;
      if (s <= shl) return {rl_, ul_, pl_};
      const double as = al_ * std::pow(ps_ / pl_, (g - 1.0) / (2.0 * g));
      const double stl = us_ - as;
      if (s > stl) return {rl_ * std::pow(ps_ / pl_, 1.0 / g), us_, ps_};
      const double c = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * al_) * (ul_ - s);
      return {rl_ * std::pow(c, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (al_ + (g - 1.0) / 2.0 * ul_ + s),
              pl_ * std::pow(c, 2.0 * g / (g - 1.0))};
    }
    if (ps_ > pr_) {  // right shock
      const double q = ps_ / pr_;
      const double sr = ur_ + ar_ * std::sqrt((g + 1.0) / (2.0 * g) * q + (g - 1.0) / (2.0 * g));
      if (s >= sr) return {rr_, ur_, pr_};
      const double rho = rr_ * (q + (g - 1.0) / (g + 1.0)) / ((g - 1.0) / (g + 1.0) * q + 1.0);
      return {rho, us_, ps_};
    }
    const double shr = ur_ + ar_;
    if (s >= shr) return {rr_, ur_, pr_};
    const double as = ar_ * std::pow(ps_ / pr_, (g - 1.0) / (2.0 * g));
    const double str = us_ + as;
    if (s < str) return {rr_ * std::pow(ps_ / pr_, 1.0 / g), us_, ps_};
    const double c = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * ar_) * (ur_ - s);
    return {rr_ * std::pow(c, 2.0 / (g - 1.0)), 2.0 / (g + 1.0) * (-ar_ + (g - 1.0) / 2.0 * ur_ + s),
            pr_ * std::pow(c, 2.0 * g / (g - 1.0))};
  }

 private:
  // f_K(p) and its derivative
  void pressure_fn(double p, double rk, double pk, double ak, double& f, double& df) const {
    const double g = g_;
    if (p > pk) {
      const double A = 2.0 / ((g + 1.0) * rk);
      const double B = (g - 1.0) / (g + 1.0) * pk;
      const double s = std::sqrt(A / (p + B));
      f = (p - pk) * s;
      df = s * (1.0 - 0.5 * (p - pk) / (B + p));
    } else {
      const double q = p / pk;
      f = 2.0 * ak / (g - 1.0) * (std::pow(q, (g - 1.0) / (2.0 * g)) - 1.0);
      df = 1.0 / (rk * ak) * std::pow(q, -(g + 1.0) / (2.0 * g));
    }
  }

  void solve_star() {
    const double g = g_;
    // two-rarefaction initial guess
    const double z = (g - 1.0) / (2.0 * g);
    double p = std::pow((al_ + ar_ - 0.5 * (g - 1.0) * (ur_ - ul_)) /
                            (al_ / std::pow(pl_, z) + ar_ / std::pow(pr_, z)),
                        1.0 / z);
    p = std::max(p, 1e-14);
    for (int it = 0; it < 200; ++it) {
      double fl, dfl, fr, dfr;
      pressure_fn(p, rl_, pl_, al_, fl, dfl);
      pressure_fn(p, rr_, pr_, ar_, fr, dfr);
      const double f = fl + fr + (ur_ - ul_);
      double pn = p - f / (dfl + dfr);
      if (pn < 0.0) pn = 0.5 * p;
      const double change = 2.0 * std::abs(pn - p) / (pn + p);
      p = pn;
      if (change < 1e-15) break;
    }
    double fl, dfl, fr, dfr;
    pressure_fn(p, rl_, pl_, al_, fl, dfl);
    pressure_fn(p, rr_, pr_, ar_, fr, dfr);
    ps_ = p;
    us_ = 0.5 * (ul_ + ur_) + 0.5 * (fr - fl);
  }

  double rl_, ul_, pl_, rr_, ur_, pr_, g_;
  double al_ = 0, ar_ = 0, ps_ = 0, us_ = 0;
};

// ---------- 1D HLLE (Einfeldt speeds, zero included) ----------

using State1 = std::array<double, 3>;  // rho, rho u, E

inline State1 flux1(const State1& U, double g) {
  const double u = U[1] / U[0];
  const double p = (g - 1.0) * (U[2] - 0.5 * U[1] * u);
  return {U[1], U[1] * u + p, (U[2] + p) * u};
}

inline State1 hlle1(const State1& L, const State1& R, double g) {
  const double ul = L[1] / L[0], ur = R[1] / R[0];
  const double pl = (g - 1.0) * (L[2] - 0.5 * L[1] * ul);
  const double pr = (g - 1.0) * (R[2] - 0.5 * R[1] * ur);
  const double al = std::sqrt(g * pl / L[0]), ar = std::sqrt(g * pr / R[0]);
  const double hl = (L[2] + pl) / L[0], hr = (R[2] + pr) / R[0];
  const double wl = std::sqrt(L[0]), wr = std::sqrt(R[0]);
  const double um = (wl * ul + wr * ur) / (wl + wr);
  const double hm = (wl * hl + wr * hr) / (wl + wr);
  const double am = std::sqrt((g - 1.0) * (hm - 0.5 * um * um));
  const double sl = std::min({0.0, ul - al, um - am});
  const double sr = std::max({0.0, ur + ar, um + am});
  const State1 fl = flux1(L, g), fr = flux1(R, g);
  State1 f{};
  for (int k = 0; k < 3; ++k) f[k] = (sr * fl[k] - sl * fr[k] + sl * sr * (R[k] - L[k])) / (sr - sl);
  return f;
}

/// n forward-Euler steps of first-order HLLE with transmissive ends.
inline std::vector<State1> hlle1_march(std::vector<State1> U, double dx, double dt, int steps,
                                       double g = 1.4) {
  const std::size_t n = U.size();
  for (int s = 0; s < steps; ++s) {
    std::vector<State1> F(n + 1);
    for (std::size_t f = 0; f <= n; ++f) {
      const State1& L = f == 0 ? U[0] : U[f - 1];
      const State1& R = f == n ? U[n - 1] : U[f];
      F[f] = hlle1(L, R, g);
    }
    for (std::size_t c = 0; c < n; ++c)
      for (int k = 0; k < 3; ++k) U[c][k] -= dt / dx * (F[c + 1][k] - F[c][k]);
  }
  return U;
}

// ---------- normal-direction 2D fluxes, written out term by term ----------

/// (rho, u_n, u_t, p) -> F_n = [rho u_n, rho u_n^2 + p, rho u_n u_t, u_n (E + p)].
inline std::array<double, 4> euler_flux_n(double rho, double un, double ut, double p, double g) {
  const double E = p / (g - 1.0) + 0.5 * rho * (un * un + ut * ut);
  return {rho * un, rho * un * un + p, rho * un * ut, un * (E + p)};
}

inline std::array<double, 4> conserved_n(double rho, double un, double ut, double p, double g) {
  return {rho, rho * un, rho * ut, p / (g - 1.0) + 0.5 * rho * (un * un + ut * ut)};
}

struct Prim {
  double rho, un, ut, p;
};

/// HLLE with the zero-including Einfeldt speeds, evaluated directly.
inline std::array<double, 4> hlle2(const Prim& L, const Prim& R, double g) {
  const double al = std::sqrt(g * L.p / L.rho), ar = std::sqrt(g * R.p / R.rho);
  const double wl = std::sqrt(L.rho), wr = std::sqrt(R.rho);
  const double hl = g / (g - 1.0) * L.p / L.rho + 0.5 * (L.un * L.un + L.ut * L.ut);
  const double hr = g / (g - 1.0) * R.p / R.rho + 0.5 * (R.un * R.un + R.ut * R.ut);
  const double un = (wl * L.un + wr * R.un) / (wl + wr);
  const double ut = (wl * L.ut + wr * R.ut) / (wl + wr);
  const double h = (wl * hl + wr * hr) / (wl + wr);
  const double a = std::sqrt((g - 1.0) * (h - 0.5 * (un * un + ut * ut)));
  const double sl = std::min({0.0, L.un - al, un - a});
  const double sr = std::max({0.0, R.un + ar, un + a});
  const auto fl = euler_flux_n(L.rho, L.un, L.ut, L.p, g);
  const auto fr = euler_flux_n(R.rho, R.un, R.ut, R.p, g);
  const auto ul = conserved_n(L.rho, L.un, L.ut, L.p, g);
  const auto ur = conserved_n(R.rho, R.un, R.ut, R.p, g);
  std::array<double, 4> f{};
  for (int k = 0; k < 4; ++k) f[k] = (sr * fl[k] - sl * fr[k]) / (sr - sl) + sr * sl / (sr - sl) * (ur[k] - ul[k]);
  return f;
}

// ---------- Rankine-Hugoniot ----------

/// Post-shock (rho, u, p) behind a shock of Mach m moving into gas at rest.
inline std::array<double, 3> normal_shock_post(double rho1, double p1, double m, double g) {
  const double a1 = std::sqrt(g * p1 / rho1);
  const double p2 = p1 * (2.0 * g * m * m - (g - 1.0)) / (g + 1.0);
  const double rho2 = rho1 * ((g + 1.0) * m * m) / ((g - 1.0) * m * m + 2.0);
  const double u2 = 2.0 * a1 / (g + 1.0) * (m - 1.0 / m);
  return {rho2, u2, p2};
}

}  // namespace oracle
