#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "shockstab/stability.hpp"

using namespace shockstab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> sorted_real(const std::vector<std::complex<double>>& ev) {
  std::vector<double> out;
  for (const auto& e : ev) {
    REQUIRE(std::abs(e.imag()) < 1e-14);
    out.push_back(e.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

const SchemeFamily kLinear[] = {SchemeFamily::HLLE, SchemeFamily::ROE_HLLEM_HLLC, SchemeFamily::HLLCM_HLLEC,
                                SchemeFamily::HLLS_HLLES};

}  // namespace

TEST_CASE("tabulated amplification eigenvalues") {
  for (double nu : {0.1, 0.25, 0.45, 0.49}) {
    const double d = 1.0 - 2.0 * nu;
    const std::pair<SchemeFamily, std::vector<double>> table[] = {
        {SchemeFamily::HLLE, {d, d, d}},
        {SchemeFamily::ROE_HLLEM_HLLC, {1.0, 1.0, d}},
        {SchemeFamily::HLLCM_HLLEC, {1.0, d, d}},
        {SchemeFamily::HLLS_HLLES, {d, 1.0, d}},
        {SchemeFamily::HLL_CPS, {1.0, 1.0 - 2.0 * nu / 1.4, d}},
    };
    for (const auto& [family, expected] : table) {
      const auto got = sorted_real(eigenvalues(primitive_amplification_matrix(family, nu, 1.4)));
      const auto want = sorted(expected);
      for (int k = 0; k < 3; ++k) CHECK_THAT(got[k], WithinAbs(want[k], 1e-12));
    }
  }
}

TEST_CASE("eigenvalues sit on the diagonal of the triangular maps") {
  const auto base = default_base_state();
  for (auto f : kLinear) {
    const Matrix3 m = primitive_amplification_matrix(f, base);
    const auto got = sorted_real(eigenvalues(m));
    const auto diag = sorted({m(0, 0), m(1, 1), m(2, 2)});
    for (int k = 0; k < 3; ++k) CHECK_THAT(got[k], WithinAbs(diag[k], 1e-14));
  }
}

TEST_CASE("reduced Lyapunov verdicts") {
  CHECK(reduced_lyapunov_verdict(SchemeFamily::HLLE, 0.45, 1.4) == LyapunovVerdict::AsymptoticallyStable);
  CHECK(reduced_lyapunov_verdict(SchemeFamily::ROE_HLLEM_HLLC, 0.45, 1.4) == LyapunovVerdict::Inconclusive);
  CHECK(reduced_lyapunov_verdict(SchemeFamily::HLLCM_HLLEC, 0.45, 1.4) == LyapunovVerdict::Inconclusive);
  CHECK(reduced_lyapunov_verdict(SchemeFamily::HLLS_HLLES, 0.45, 1.4) == LyapunovVerdict::Inconclusive);
  CHECK(reduced_lyapunov_verdict(SchemeFamily::HLL_CPS, 0.45, 1.4) == LyapunovVerdict::Inconclusive);
  Matrix3 grow = Matrix3::Identity();
  grow(0, 0) = 1.01;
  CHECK(reduced_lyapunov_verdict(grow) == LyapunovVerdict::Unstable);
  CHECK_THROWS_AS(primitive_amplification_matrix(SchemeFamily::HLLEM_FP1D, 0.45, 1.4), UnsupportedFamily);
}

TEST_CASE("conserved recurrences are the primitive maps in conserved coordinates") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> nu_d(0.01, 0.99), u_d(-3.0, 3.0), pos(0.2, 5.0);
  for (int n = 0; n < 50; ++n) {
    const auto base = BaseState::make(pos(rng), u_d(rng), pos(rng), nu_d(rng));
    const Matrix3 T = primitive_to_conserved_map(base);
    for (auto f : kLinear) {
      const Matrix3 expected = T * primitive_amplification_matrix(f, base) * T.inverse();
      const Matrix3 got = conserved_amplification_matrix(f, base);
      CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-12);
      // and the explicit recurrence agrees with the matrix
      const PerturbationState x{u_d(rng), u_d(rng), u_d(rng)};
      const Eigen::Vector3d y = got * x.vec();
      const auto s = step_perturbation(f, x, base);
      CHECK_THAT(s.rho_hat, WithinAbs(y[0], 1e-12));
      CHECK_THAT(s.rhou_hat, WithinAbs(y[1], 1e-12));
      CHECK_THAT(s.p_hat, WithinAbs(y[2], 1e-12));
    }
  }
  CHECK_THROWS_AS(conserved_amplification_matrix(SchemeFamily::HLL_CPS, default_base_state()), UnsupportedFamily);
  CHECK_THROWS_AS(step_perturbation(SchemeFamily::HLL_CPS, {}, default_base_state()), UnsupportedFamily);
}

TEST_CASE("Lyapunov function") {
  const auto base = BaseState::make(1.0, 2.0, 1.0, 0.3);
  CHECK(lyapunov_value({0.0, 0.0, 0.0}, base) == 0.0);
  // a0^2 = 1.4
  CHECK_THAT(lyapunov_value({1.0, 0.0, 0.0}, base), WithinRel(1.4, 1e-15));
  CHECK_THAT(lyapunov_value({0.0, 2.0, 0.0}, base), WithinRel(1.4, 1e-15));
  CHECK_THAT(lyapunov_value({0.0, 0.0, 1.0}, base), WithinRel(1.0 / 1.4, 1e-15));
  CHECK_THROWS_AS(lyapunov_value({1.0, 0.0, 0.0}, BaseState::make(1.0, 0.0, 1.0, 0.3)), ZeroBaseVelocity);
}

TEST_CASE("closed-form Lyapunov change matches the definition") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> nu_d(0.01, 0.99), x_d(-1.0, 1.0), u_d(0.2, 3.0), pos(0.2, 5.0);
  for (int n = 0; n < 1000; ++n) {
    const auto base = BaseState::make(pos(rng), u_d(rng) * (n % 2 ? 1 : -1), pos(rng), nu_d(rng));
    PerturbationState x{x_d(rng), x_d(rng), x_d(rng)};
    for (auto f : kLinear) {
      if (f == SchemeFamily::HLLCM_HLLEC) x.rhou_hat = base.u0 * x.rho_hat;  // zero shear perturbation
      const double def = delta_v(f, x, base);
      const double closed = closed_form_delta_v(f, x, base);
      CHECK(std::abs(def - closed) <= 1e-12 * std::max(1.0, lyapunov_value(x, base)));
    }
  }
  CHECK_THROWS_AS(closed_form_delta_v(SchemeFamily::HLLEM_FP1D, {1, 1, 1}, default_base_state()),
                  UnsupportedFamily);
}

TEST_CASE("HLLE: Lyapunov function always decreases") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> nu_d(1e-3, 1.0 - 1e-3), x_d(-1.0, 1.0);
  for (int n = 0; n < 5000; ++n) {
    const auto base = BaseState::make(1.0, 1.0, 1.0, nu_d(rng));
    const PerturbationState x{x_d(rng), x_d(rng), x_d(rng)};
    CHECK(delta_v(SchemeFamily::HLLE, x, base) < 0.0);
  }
}

TEST_CASE("Roe/HLLEM/HLLC: neutral without pressure, growing for opposite signs") {
  const auto base = default_base_state();
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> x_d(-1.0, 1.0);
  for (int n = 0; n < 1000; ++n) {
    const PerturbationState x{x_d(rng), x_d(rng), 0.0};
    CHECK(std::abs(delta_v(SchemeFamily::ROE_HLLEM_HLLC, x, base)) <= 1e-14);
  }
  CHECK(delta_v(SchemeFamily::ROE_HLLEM_HLLC, {-1e-3, -1e-3, 1e-3}, base) > 0.0);
  const auto map = stability_region_map(SchemeFamily::ROE_HLLEM_HLLC, base, perturbation_grid(1e-3, 5, base));
  CHECK(std::any_of(map.begin(), map.end(), [](const SignSample& s) { return s.sign > 0; }));
}

TEST_CASE("HLLS/HLLES: non-increasing without density perturbation") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> nu_d(0.01, 0.99), x_d(-1.0, 1.0);
  for (int n = 0; n < 1000; ++n) {
    const auto base = BaseState::make(1.0, 1.0, 1.0, nu_d(rng));
    CHECK(delta_v(SchemeFamily::HLLS_HLLES, {0.0, x_d(rng), x_d(rng)}, base) <= 0.0);
  }
}

TEST_CASE("FP1D coefficient in the shock limit") {
  CHECK(fp1d_delta(0.0, 1.0) == 1.0);
  CHECK_THAT(fp1d_delta(1e-3, 1.0), WithinAbs(1.0 - std::cbrt(2e-3 / 1.001), 1e-15));
  CHECK(fp1d_delta(1.0, 1.0) == 0.0);
  CHECK(fp1d_delta(-1e-3, 1.0) == fp1d_delta(1e-3, 1.0));
}

TEST_CASE("FP1D first-step Lyapunov change for the diverging HLLEM configuration") {
  const auto base = default_base_state();
  // large enough pressure perturbation: the FP1D coefficient drops below
  // a0^2 / (1 + a0^2) and V decreases while HLLEM's grows
  const PerturbationState big{-0.05, -0.05, 0.05};
  CHECK(delta_v(SchemeFamily::ROE_HLLEM_HLLC, big, base) > 0.0);
  CHECK(delta_v(SchemeFamily::HLLEM_FP1D, big, base) < 0.0);
  // tiny perturbations: delta -> 1 and FP1D inherits HLLEM's sign
  const PerturbationState tiny{-1e-3, -1e-3, 1e-3};
  CHECK(fp1d_delta(1e-3, 1.0) > 0.87);
  CHECK(delta_v(SchemeFamily::HLLEM_FP1D, tiny, base) > 0.0);
  CHECK(delta_v(SchemeFamily::HLLEM_FP1D, tiny, base) < delta_v(SchemeFamily::ROE_HLLEM_HLLC, tiny, base));
}

TEST_CASE("phase portraits: HLLEM density drifts, FP1D settles") {
  const auto base = default_base_state();
  const PerturbationState x0{-0.1, -0.1, 0.1};
  const auto em = phase_portrait(SchemeFamily::ROE_HLLEM_HLLC, x0, base, 60);
  const auto fp = phase_portrait(SchemeFamily::HLLEM_FP1D, x0, base, 60);
  REQUIRE(em.entries.size() == 61);
  REQUIRE(fp.entries.size() == 61);
  CHECK(em.entries.front().state.rho_hat == x0.rho_hat);
  // HLLEM: rho^ -> rho^_0 - p^_0 / a0^2 (sum of the geometric pressure decay)
  CHECK_THAT(em.entries.back().state.rho_hat, WithinAbs(-0.1 - 0.1 / 1.4, 1e-10));
  CHECK(std::abs(em.entries.back().state.rho_hat) > std::abs(x0.rho_hat));
  // FP1D: |rho^| ends below its start, p^ -> 0
  CHECK(std::abs(fp.entries.back().state.rho_hat) < std::abs(x0.rho_hat));
  CHECK_THAT(fp.entries.back().state.rho_hat, WithinAbs(-0.051, 2e-3));
  CHECK(std::abs(fp.entries.back().state.p_hat) < 1e-20);
  for (std::size_t k = 0; k + 1 < fp.entries.size(); ++k)
    CHECK_THAT(fp.entries[k].dv, WithinAbs(fp.entries[k + 1].v - fp.entries[k].v, 1e-15));
  CHECK_THROWS_AS(phase_portrait(SchemeFamily::HLLE, x0, base, 0), Error);
}

TEST_CASE("sign maps and perturbation grids") {
  const auto base = BaseState::make(1.0, 2.0, 1.0, 0.45);
  const auto grid = perturbation_grid(1.0, 3, base);
  REQUIRE(grid.size() == 27);
  CHECK(grid.front().rho_hat == -1.0);
  CHECK(grid.front().rhou_hat == -2.0);
  CHECK(grid.back().p_hat == 1.0);
  const auto map = stability_region_map(SchemeFamily::HLLE, base, grid);
  for (const auto& s : map) CHECK(s.sign == (s.state.is_zero() ? 0 : -1));
  CHECK_THROWS_AS(stability_region_map(SchemeFamily::HLLE, base, {{NAN, 0, 0}}), Error);
  CHECK_THROWS_AS(perturbation_grid(1.0, 1, base), Error);
}

TEST_CASE("family names and base-state validation") {
  for (auto f : kAllFamilies) CHECK(parse_scheme_family(to_string(f)) == f);
  CHECK_THROWS_AS(parse_scheme_family("roe"), Error);
  CHECK_THROWS_AS(BaseState::make(1.0, 1.0, 1.0, 1.0), Error);
  CHECK_THROWS_AS(BaseState::make(-1.0, 1.0, 1.0, 0.5), Error);
  const auto b = default_base_state();
  CHECK_THAT(b.a0, WithinRel(std::sqrt(1.4), 1e-15));
  CHECK(b.nu == 0.45);
}
