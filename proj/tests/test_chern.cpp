#include "oracles.hpp"

#include <velotopo/chern.hpp>

#include <doctest.h>

#include <random>

using namespace velotopo;

namespace {
template <typename F> ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}
}  // namespace

TEST_SUITE("chern") {

TEST_CASE("plaquette values are integers with the pinned sign") {
  const auto inside = chern_plaquette(ModelParams::create(3, 1, 3), 64);
  CHECK(inside.value == 1);
  CHECK(std::abs(inside.raw - 1) <= 1e-9);
  CHECK(inside.method == ChernMethod::PlaquetteSolidAngle);
  CHECK(inside.grid_n == 64);
  const auto outside = chern_plaquette(ModelParams::create(3, 1, 1), 64);
  CHECK(outside.value == 0);
  CHECK(std::abs(outside.raw) <= 1e-9);
}

TEST_CASE("direct quadrature") {
  for (auto [c, expected] : {std::pair{3.0, 1}, std::pair{1.0, 0}, std::pair{5.0, 0}}) {
    const auto res = chern_direct(ModelParams::create(3, 1, c), 256);
    CHECK(res.value == expected);
    CHECK(std::abs(res.raw - expected) <= 1e-3);
    CHECK(res.method == ChernMethod::DirectQuadrature);
  }
}

TEST_CASE("direct quadrature is grid stable") {
  for (double c : {0.7, 2.6, 3.4, 4.6}) {
    const auto p = ModelParams::create(3, 1, c);
    CHECK(std::abs(chern_direct(p, 128).raw - chern_direct(p, 256).raw) < 1e-3);
  }
}

TEST_CASE("direct and plaquette agree on random gapped parameters") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uR(1.5, 4.0), ufrac(0.15, 0.8),
      uc(0.05, 7.0);
  int done = 0;
  while (done < 20) {
    const double R = uR(rng), r = ufrac(rng) * R, c = uc(rng);
    const auto p = ModelParams::create(R, r, c);
    if (gap_min(p) < 0.1) continue;
    INFO("R=" << R << " r=" << r << " c=" << c);
    const auto plaq = chern_plaquette(p, 64);
    const auto direct = chern_direct(p, 256);
    CHECK(plaq.value == direct.value);
    CHECK(std::abs(plaq.raw - plaq.value) <= 1e-9);
    // Origin inside the tube <=> c between R - r and R + r.
    CHECK(plaq.value == ((c > R - r && c < R + r) ? 1 : 0));
    ++done;
  }
}

TEST_CASE("gap minimum") {
  CHECK(gap_min(ModelParams::create(3, 1, 2)) <= 1e-6);
  CHECK(gap_min(ModelParams::create(3, 1, 4)) <= 1e-6);
  // Off-grid gap closing: the descent must find it.
  CHECK(gap_min(ModelParams::create(3, 1, 2), 33) <= 1e-6);
  const double scan = oracle::gap_scan({3, 1, 1}, 1024);
  const double g = gap_min(ModelParams::create(3, 1, 1));
  CHECK(g >= 0.9);
  CHECK(g <= scan + 1e-12);
  CHECK(g == doctest::Approx(scan).epsilon(1e-6));
  CHECK(kind_of([] { gap_min(ModelParams::create(3, 1, 1), 16); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("gapless boundary") {
  auto [lo, hi] = gapless_boundary(3, 1);
  CHECK(lo == 2);
  CHECK(hi == 4);
  std::tie(lo, hi) = gapless_boundary(2, 0.5);
  CHECK(lo == 1.5);
  CHECK(hi == 2.5);
  // The roots are where the numerical gap closes.
  for (auto [R, r] : {std::pair{3.0, 1.0}, std::pair{2.0, 0.5}, std::pair{5.0, 1.3}}) {
    const auto [a, b] = gapless_boundary(R, r);
    CHECK(gap_min(ModelParams::create(R, r, a)) <= 1e-6);
    CHECK(gap_min(ModelParams::create(R, r, b)) <= 1e-6);
  }
  CHECK_THROWS_AS(gapless_boundary(1, 2), Error);
}

TEST_CASE("chern value changes only across the gapless boundary") {
  int previous = chern_plaquette(ModelParams::create(3, 1, 0.1), 64).value;
  for (double c = 0.2; c < 6.0; c += 0.1) {
    const auto p = ModelParams::create(3, 1, c);
    const double gap = gap_min(p);
    if (gap < 0.05) continue;
    const int value = chern_plaquette(p, 96).value;
    if (value != previous) {
      CHECK((std::abs(c - 2.0) < 0.2 || std::abs(c - 4.0) < 0.2));
    }
    previous = value;
  }
}

TEST_CASE("gapless model is refused") {
  CHECK(kind_of([] { chern_plaquette(ModelParams::create(3, 1, 2)); }) ==
        ErrorKind::GaplessModel);
  CHECK(kind_of([] { chern_direct(ModelParams::create(3, 1, 4)); }) ==
        ErrorKind::GaplessModel);
  CHECK(kind_of([] { chern_direct(ModelParams::create(3, 1, 3), 16); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("generic map: a sphere-wrapping model") {
  // Two-band lattice model h = (sin kx, sin ky, m + cos kx + cos ky):
  // |C| = 1 for 0 < |m| < 2.
  struct Qwz {
    double m;
    HVector h(const KPoint& k) const {
      return HVector(std::sin(k.x()), std::sin(k.y()),
                     m + std::cos(k.x()) + std::cos(k.y()));
    }
    Frame frame(const KPoint& k) const {
      return {HVector(std::cos(k.x()), 0, -std::sin(k.x())),
              HVector(0, std::cos(k.y()), -std::sin(k.y()))};
    }
  };
  const auto topo = chern_plaquette(AnyTwoBandMap(Qwz{1.0}), 64);
  CHECK(std::abs(topo.value) == 1);
  const auto direct = chern_direct(AnyTwoBandMap(Qwz{1.0}), 128);
  CHECK(direct.value == topo.value);
  CHECK(chern_plaquette(AnyTwoBandMap(Qwz{3.0}), 64).value == 0);
}

}  // TEST_SUITE
