#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "shockstab/euler.hpp"

using namespace shockstab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PrimitiveState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.05, 10.0), vel(-20.0, 20.0);
  return {pos(rng), vel(rng), vel(rng), pos(rng)};
}

FaceFrame random_frame(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(-M_PI, M_PI);
  const double t = ang(rng);
  return {std::cos(t), std::sin(t), 1.0};
}

}  // namespace

TEST_CASE("conserved from primitive, stagnant and moving gas") {
  const GasModel gas;
  const auto a = conserved_from_primitive({1.4, 0.0, 0.0, 1.0}, gas);
  CHECK(a.rho == 1.4);
  CHECK(a.rho_u == 0.0);
  CHECK(a.rho_v == 0.0);
  CHECK_THAT(a.rho_E, WithinAbs(2.5, 1e-15));
  const auto b = conserved_from_primitive({1.0, 1.0, 0.0, 1.0}, gas);
  CHECK_THAT(b.rho_E, WithinAbs(3.0, 1e-15));
  CHECK(b.rho_u == 1.0);
}

TEST_CASE("primitive recovery") {
  const GasModel gas;
  const auto w = primitive_from_conserved({1.4, 0.0, 0.0, 2.5}, gas);
  CHECK(w.rho == 1.4);
  CHECK_THAT(w.p, WithinAbs(1.0, 1e-15));
  const auto w2 = primitive_from_conserved({1.0, 1.0, 0.0, 3.0}, gas);
  CHECK_THAT(w2.u, WithinAbs(1.0, 1e-15));
  CHECK_THAT(w2.p, WithinAbs(1.0, 1e-15));
  // small but positive internal energy is still valid
  CHECK_THAT(primitive_from_conserved({1.0, 0.0, 0.0, 0.1}, gas).p, WithinAbs(0.04, 1e-16));
}

TEST_CASE("non-physical states are reported") {
  const GasModel gas;
  CHECK_THROWS_AS(primitive_from_conserved({0.0, 0.0, 0.0, 1.0}, gas), NonPhysicalState);
  CHECK_THROWS_AS(primitive_from_conserved({-1.0, 0.0, 0.0, 1.0}, gas), NonPhysicalState);
  // rho E exactly the kinetic energy: p = 0
  CHECK_THROWS_AS(primitive_from_conserved({1.0, 2.0, 0.0, 2.0}, gas), NonPhysicalState);
  CHECK_THROWS_AS(primitive_from_conserved({1.0, 2.0, 0.0, 1.9}, gas), NonPhysicalState);
  CHECK_THROWS_AS(primitive_from_conserved({1.0, NAN, 0.0, 1.9}, gas), NonPhysicalState);

  const NonPhysicalState e("pressure -1", 17, 42);
  CHECK(e.cell() == 17u);
  CHECK(e.step() == 42);
  CHECK(std::string(e.what()).find("cell 17") != std::string::npos);
  CHECK(std::string(e.what()).find("step 42") != std::string::npos);
}

TEST_CASE("gas model validation") {
  CHECK_NOTHROW(GasModel{}.validate());
  CHECK_THROWS_AS(GasModel{1.0}.validate(), Error);
}

TEST_CASE("primitive/conserved round trip on random states") {
  std::mt19937_64 rng(1);
  const GasModel gas;
  for (int n = 0; n < 2000; ++n) {
    const auto w = random_state(rng);
    const auto back = primitive_from_conserved(conserved_from_primitive(w, gas), gas);
    CHECK_THAT(back.rho, WithinRel(w.rho, 1e-12));
    CHECK_THAT(back.u, WithinRel(w.u, 1e-12));
    CHECK_THAT(back.v, WithinRel(w.v, 1e-12));
    CHECK_THAT(back.p, WithinRel(w.p, 1e-10));  // p is a difference of O(rho q^2) terms
  }
}

TEST_CASE("physical x-flux") {
  const GasModel gas;
  const auto f = physical_flux_x({1.4, 0.0, 0.0, 1.0}, gas);
  CHECK(f == Vec4{{0.0, 1.0, 0.0, 0.0}});
  const auto g = physical_flux_x({1.0, 1.0, 0.0, 1.0}, gas);
  CHECK_THAT(g[1], WithinAbs(2.0, 1e-15));
  CHECK_THAT(g[3], WithinAbs(4.0, 1e-15));

  std::mt19937_64 rng(2);
  for (int n = 0; n < 500; ++n) {
    const auto w = random_state(rng);
    const auto ref = oracle::euler_flux_n(w.rho, w.u, w.v, w.p, 1.4);
    const auto got = physical_flux_x(w, gas);
    for (int k = 0; k < 4; ++k) CHECK_THAT(got[k], WithinRel(ref[k], 1e-12) || WithinAbs(ref[k], 1e-12));
  }
}

TEST_CASE("sound speed and Mach number") {
  const GasModel gas;
  CHECK_THAT(sound_speed({1.4, 0.0, 0.0, 1.0}, gas), WithinAbs(1.0, 1e-15));
  CHECK_THAT(mach_number({1.4, 3.0, 4.0, 1.0}, gas), WithinAbs(5.0, 1e-14));
}

TEST_CASE("rotations") {
  const ConservedState U{1.0, 1.0, 0.0, 3.0};
  CHECK(rotate_to_face(U, {1.0, 0.0, 1.0}) == U);
  CHECK(rotate_to_face(U, {0.0, 1.0, 1.0}) == ConservedState{1.0, 0.0, -1.0, 3.0});

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-5.0, 5.0);
  for (int n = 0; n < 1000; ++n) {
    const ConservedState V{std::abs(d(rng)) + 0.1, d(rng), d(rng), std::abs(d(rng)) + 50.0};
    const auto f = random_frame(rng);
    const auto R = rotate_to_face(V, f);
    const auto back = rotate_from_face(R, f);
    CHECK_THAT(back.rho_u, WithinAbs(V.rho_u, 1e-14 * 5));
    CHECK_THAT(back.rho_v, WithinAbs(V.rho_v, 1e-14 * 5));
    CHECK(R.rho == V.rho);
    CHECK(R.rho_E == V.rho_E);
    CHECK_THAT(std::hypot(R.rho_u, R.rho_v), WithinRel(std::hypot(V.rho_u, V.rho_v), 1e-14));
  }
}

TEST_CASE("rotational invariance of the flux") {
  // F(T U) computed in the face frame equals T (F, G).n
  std::mt19937_64 rng(4);
  const GasModel gas;
  for (int n = 0; n < 500; ++n) {
    const auto w = random_state(rng);
    const auto f = random_frame(rng);
    const auto fn = physical_flux_x(rotate_to_face(w, f), gas);
    // (F, G).n directly
    const double E = w.p / 0.4 + 0.5 * w.rho * (w.u * w.u + w.v * w.v);
    const double un = w.u * f.nx + w.v * f.ny;
    const Vec4 proj{{w.rho * un, w.rho * w.u * un + w.p * f.nx, w.rho * w.v * un + w.p * f.ny, (E + w.p) * un}};
    const Vec4 back = rotate_from_face(fn, f);
    for (int k = 0; k < 4; ++k) {
      const double scale = std::max(1.0, std::abs(proj[k]));
      CHECK(std::abs(back[k] - proj[k]) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("face frame validity") {
  CHECK(FaceFrame{1.0, 0.0, 1.0}.valid());
  CHECK_FALSE(FaceFrame{1.0, 0.1, 1.0}.valid());
  CHECK_FALSE(FaceFrame{1.0, 0.0, 0.0}.valid());
}
