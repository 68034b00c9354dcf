#include <doctest.h>

#include <cmath>
#include <random>

#include "critlocus/geometry.hpp"
#include "oracles.hpp"

using namespace critlocus;

namespace {
const double kPi = pi_v<double>;

std::vector<ConvexDomain> builtins() {
  Mat2<double> g;
  g << 1.2, 0.5, -0.3, 0.9;
  return {ConvexDomain::disc(),         ConvexDomain::square(),
          ConvexDomain::regular_hexagon(), ConvexDomain::lp_ball(1.5),
          ConvexDomain::lp_ball(3.0),   ConvexDomain::parallelogram(g),
          ConvexDomain::affine(g, ConvexDomain::disc())};
}
}  // namespace

TEST_CASE("gauge closed forms") {
  CHECK(gauge(ConvexDomain::disc(), Vec2<double>(2, 0)) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(gauge(ConvexDomain::disc(), Vec2<double>(0, 0)) == 0.0);
  CHECK(gauge(ConvexDomain::square(), Vec2<double>(0.5, -0.25)) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // L3 gauge of (1,1) is the closed-form p-norm
  CHECK(gauge(ConvexDomain::lp_ball(3.0), Vec2<double>(1, 1)) ==
        doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
}

TEST_CASE("radial values") {
  for (double theta : {0.0, 0.4, 2.0, 5.5})
    CHECK(radial(ConvexDomain::disc(), theta) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(radial(ConvexDomain::square(), kPi / 4) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  // apothem of the regular hexagon, at a side midpoint
  CHECK(radial(ConvexDomain::regular_hexagon(), kPi / 6) ==
        doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-14));
}

TEST_CASE("tangent directions and corners") {
  const Vec2<double> t0 = tangent_dir(ConvexDomain::disc(), 0.0);
  CHECK(t0.x() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(t0.y() == doctest::Approx(1.0).epsilon(1e-15));
  const Vec2<double> t1 = tangent_dir(ConvexDomain::disc(), kPi / 3);
  CHECK(t1.x() == doctest::Approx(-std::sqrt(3.0) / 2));
  CHECK(t1.y() == doctest::Approx(0.5));

  CHECK_THROWS_AS((void)tangent_dir(ConvexDomain::regular_hexagon(), 0.0), CornerPointError);
  CHECK_THROWS_AS((void)tangent_dir(ConvexDomain::square(), kPi / 4), CornerPointError);
  const Vec2<double> ts = tangent_dir(ConvexDomain::square(), 0.0);
  CHECK(ts.x() == doctest::Approx(0.0));
  CHECK(ts.y() == doctest::Approx(1.0));

  // Lp tangent at the axis is vertical, as for the disc
  const Vec2<double> tl = tangent_dir(ConvexDomain::lp_ball(3.0), 0.0);
  CHECK(tl.x() == doctest::Approx(0.0));
  CHECK(tl.y() == doctest::Approx(1.0));
}

TEST_CASE("areas: closed forms against quadrature") {
  CHECK(area(ConvexDomain::disc()) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(area(ConvexDomain::square()) == doctest::Approx(4.0).epsilon(1e-14));
  const double hex_area = area(ConvexDomain::regular_hexagon());
  CHECK(hex_area == doctest::Approx(3 * std::sqrt(3.0) / 2).epsilon(1e-14));
  CHECK(polar_area(ConvexDomain::regular_hexagon()) == doctest::Approx(hex_area).epsilon(1e-10));

  // quadrature area of the Lp ball against the gamma closed form
  for (double p : {1.5, 3.0, 4.0}) {
    const double expect = 4 * std::pow(std::tgamma(1 + 1 / p), 2) / std::tgamma(1 + 2 / p);
    CHECK(area(ConvexDomain::lp_ball(p)) == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("classification bands") {
  const ConvexDomain d = ConvexDomain::disc();
  CHECK(classify(d, Vec2<double>(1, 0)) == Region::Boundary);
  CHECK(classify(d, Vec2<double>(0.5, std::sqrt(3.0) / 2 - 1e-12)) == Region::Boundary);
  CHECK(classify(d, Vec2<double>(0.5, 0.5)) == Region::Interior);
  CHECK(classify(d, Vec2<double>(1.1, 0)) == Region::Exterior);
}

TEST_CASE("gauge symmetry and subadditivity on random samples") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto& K : builtins()) {
    for (int i = 0; i < 10000; ++i) {
      const Vec2<double> x(u(rng), u(rng)), y(u(rng), u(rng));
      const double gx = gauge(K, x);
      CHECK(std::abs(gx - gauge(K, Vec2<double>(-x))) < 1e-12 * (1 + gx));
      CHECK(gauge(K, Vec2<double>(x + y)) <= gx + gauge(K, y) + 1e-12);
    }
  }
}

TEST_CASE("radial consistency and antipodal symmetry") {
  for (const auto& K : builtins()) {
    for (int i = 0; i < 1000; ++i) {
      const double theta = 2 * kPi * i / 1000;
      const double rho = radial(K, theta);
      CHECK(rho > 0.0);
      CHECK(std::isfinite(rho));
      CHECK(gauge(K, boundary_point(K, theta)) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(radial(K, theta + kPi) == doctest::Approx(rho).epsilon(1e-12));
    }
  }
}

TEST_CASE("affine gauge consistency") {
  Mat2<double> g;
  g << 0.8, -1.1, 0.4, 1.7;
  const ConvexDomain base = ConvexDomain::lp_ball(3.0);
  const ConvexDomain img = ConvexDomain::affine(g, base);
  const Mat2<double> gi = g.inverse();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 5000; ++i) {
    const Vec2<double> x(u(rng), u(rng));
    CHECK(std::abs(gauge(img, x) - gauge(base, Vec2<double>(gi * x))) < 1e-10);
  }
  CHECK(area(img) == doctest::Approx(std::abs(g.determinant()) * area(base)).epsilon(1e-9));
}

TEST_CASE("enclosing radius bounds the boundary") {
  for (const auto& K : builtins()) {
    const double R = enclosing_radius(K);
    for (int i = 0; i < 720; ++i) CHECK(radial(K, 2 * kPi * i / 720) <= R * (1 + 1e-9));
  }
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(ConvexDomain::disc(0.0), InvalidDomainError);
  CHECK_THROWS_AS(ConvexDomain::lp_ball(1.0), InvalidDomainError);
  Mat2<double> singular;
  singular << 1, 2, 2, 4;
  CHECK_THROWS_AS(ConvexDomain::parallelogram(singular), InvalidDomainError);
  // collinear vertices collapse the hexagon
  CHECK_THROWS_AS(ConvexDomain::hexagon({1, 0}, {2, 0}, {0, 1}), InvalidDomainError);
}

TEST_CASE("parallelogram detection") {
  CHECK(is_parallelogram(ConvexDomain::square()));
  Mat2<double> g;
  g << 1, 1, 0, 1;
  CHECK(is_parallelogram(ConvexDomain::affine(g, ConvexDomain::square())));
  CHECK_FALSE(is_parallelogram(ConvexDomain::disc()));
  CHECK_FALSE(is_parallelogram(ConvexDomain::regular_hexagon()));
  CHECK_FALSE(is_parallelogram(ConvexDomain::affine(g, ConvexDomain::disc())));
}
