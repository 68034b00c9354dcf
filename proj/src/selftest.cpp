#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "critlocus/analysis.hpp"
#include "critlocus/app.hpp"
#include "critlocus/construct.hpp"
#include "critlocus/critical.hpp"
#include "critlocus/dirichlet.hpp"
#include "critlocus/io.hpp"

namespace critlocus::app {

namespace {

struct Checker {
  std::ostream& out;
  int failures = 0;

  void check(const std::string& name, bool ok, const std::string& detail = "") {
    out << (ok ? "ok " : "FAIL ") << name;
    if (!ok && !detail.empty()) out << " (" << detail << ")";
    out << "\n";
    if (!ok) ++failures;
  }
};

std::vector<ConvexDomain> builtin_domains() {
  Mat2<double> shear;
  shear << 1.0, 0.7, -0.2, 1.1;
  return {ConvexDomain::disc(),
          ConvexDomain::square(),
          ConvexDomain::regular_hexagon(),
          ConvexDomain::lp_ball(1.5),
          ConvexDomain::lp_ball(3.0),
          ConvexDomain::parallelogram(shear)};
}

Lattice2 random_lattice(std::mt19937_64& rng, double min_cross = 0.05) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    const Vec2<double> a(u(rng), u(rng)), b(u(rng), u(rng));
    if (std::abs(cross2(a, b)) > min_cross) return Lattice2(a, b);
  }
}

void geometry_checks(Checker& c) {
  std::mt19937_64 rng(0x5eed0001);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  bool sym = true, subadd = true, radial_ok = true;
  for (const auto& K : builtin_domains()) {
    for (int i = 0; i < 10000; ++i) {
      const Vec2<double> x(u(rng), u(rng)), y(u(rng), u(rng));
      const double gx = gauge(K, x);
      if (std::abs(gx - gauge(K, Vec2<double>(-x))) > 1e-12 * (1 + gx)) sym = false;
      if (gauge(K, Vec2<double>(x + y)) > gx + gauge(K, y) + 1e-12) subadd = false;
    }
    for (int i = 0; i < 1000; ++i) {
      const double theta = 2 * pi_v<double> * i / 1000;
      const double g = gauge(K, boundary_point(K, theta));
      if (std::abs(g - 1.0) > 1e-9) radial_ok = false;
    }
  }
  c.check("gauge symmetry", sym);
  c.check("gauge subadditivity", subadd);
  c.check("radial consistency", radial_ok);

  Mat2<double> g;
  g << 1.3, 0.4, -0.7, 2.0;
  const ConvexDomain base = ConvexDomain::lp_ball(3.0);
  const ConvexDomain img = ConvexDomain::affine(g, base);
  const Mat2<double> gi = g.inverse();
  bool affine_ok = true;
  for (int i = 0; i < 2000; ++i) {
    const Vec2<double> x(u(rng), u(rng));
    if (std::abs(gauge(img, x) - gauge(base, Vec2<double>(gi * x))) > 1e-10) affine_ok = false;
  }
  c.check("affine gauge consistency", affine_ok);
}

void lattice_checks(Checker& c) {
  std::mt19937_64 rng(0x5eed0002);
  bool unimodular = true, covol_ok = true, enum_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const Lattice2 L = random_lattice(rng);
    const Lattice2 W = reduce(L);
    const Mat2<double> X = L.basis().inverse() * W.basis();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (std::abs(X(i, j) - std::round(X(i, j))) > 1e-9) unimodular = false;
    if (std::abs(std::abs(X.determinant()) - 1.0) > 1e-9) unimodular = false;
    if (std::abs(covolume(W) - covolume(L)) > 1e-14 * covolume(L) * 10) covol_ok = false;

    // conditioned lattice so the +-50 coefficient box certainly covers R
    const Lattice2 E = random_lattice(rng, 0.5);
    std::uniform_real_distribution<double> ur(0.5, 5.0);
    const double R = ur(rng);
    auto pts = enumerate_nonzero(E, R);
    std::size_t brute = 0;
    for (int m = -50; m <= 50; ++m)
      for (int n = -50; n <= 50; ++n) {
        if (m == 0 && n == 0) continue;
        if (E.point(m, n).norm() <= R * (1 + 1e-12)) ++brute;
      }
    if (pts.size() != brute) enum_ok = false;
  }
  c.check("reduction is unimodular", unimodular);
  c.check("reduction preserves covolume", covol_ok);
  c.check("enumeration matches brute force", enum_ok);

  bool minkowski = true;
  for (const auto& K : builtin_domains()) {
    const double quarter = area(K) / 4;
    for (int trial = 0; trial < 100; ++trial) {
      const Lattice2 L = random_lattice(rng);
      if (is_admissible(L, K) && covolume(L) < quarter - 1e-9) minkowski = false;
    }
  }
  c.check("Minkowski lower bound", minkowski);
}

void critical_checks(Checker& c) {
  const auto disc_report = critical_search(ConvexDomain::disc());
  c.check("disc delta", std::abs(disc_report.delta_est - std::sqrt(3.0) / 2) < 1e-8,
          io::fmt17(disc_report.delta_est));

  const auto hex_report = critical_search(ConvexDomain::regular_hexagon());
  c.check("hexagon 4*delta = area",
          std::abs(4 * hex_report.delta_est - hex_report.domain_area) < 1e-7);
  c.check("hexagon single minimizer", hex_report.clusters.size() == 1);

  const auto square_report = critical_search(ConvexDomain::square());
  c.check("square delta with warning",
          std::abs(square_report.delta_est - 1.0) < 1e-8 &&
              square_report.parallelogram_warning);

  bool cands_admissible = true;
  for (const auto& K : builtin_domains()) {
    for (int i = 0; i < 50; ++i) {
      const auto cand = hexagon_candidate(K, pi_v<double> * i / 50 + 0.013);
      if (!is_admissible(cand.lattice, K)) cands_admissible = false;
      if (std::abs(gauge(K, cand.p3) - 1.0) > 1e-8) cands_admissible = false;
    }
  }
  c.check("hexagon candidates admissible", cands_admissible);
}

void construct_checks(Checker& c) {
  const auto K = build_construction(ConvexDomain::disc(), cantor_gaps<double>(2));
  bool boundary_ok = true;
  for (double t : {0.0, 1.0 / 3, 2.0 / 3, 1.0, 1.0 / 9, 2.0 / 9})
    if (std::abs(gauge(K.domain, K.phi(t).p) - 1.0) > 1e-9) boundary_ok = false;
  bool interior_ok = true;
  for (double t : {0.5, 1.0 / 6, 5.0 / 6})
    if (gauge(K.domain, K.phi(t).p) >= 1.0 - 1e-9) interior_ok = false;
  c.check("construction keeps Q on the boundary", boundary_ok);
  c.check("construction caps cover the gaps", interior_ok);

  const auto verification = verify_locus(K, 500);
  c.check("locus verification agreement", verification.agreement_fraction == 1.0);
  const auto preservation = delta_preserved(K);
  c.check("delta preserved by construction", preservation.preserved && preservation.monotone);
}

void analysis_checks(Checker& c) {
  const auto series = box_dimension_param(cantor_gaps<double>(6), 6);
  const double want = std::log(2.0) / std::log(3.0);
  c.check("cantor parameter dimension", std::abs(series.slope - want) < 1e-9);

  std::mt19937_64 rng(0x5eed0003);
  std::uniform_int_distribution<int> coef(-4, 4);
  bool embed_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const Lattice2 L = random_lattice(rng);
    int a = 0, b = 0, cc = 0, d = 0;
    do {
      a = coef(rng);
      b = coef(rng);
      cc = coef(rng);
      d = coef(rng);
    } while (std::abs(a * d - b * cc) != 1);
    const Lattice2 M(Vec2<double>(double(a) * L.v1 + double(cc) * L.v2),
                     Vec2<double>(double(b) * L.v1 + double(d) * L.v2));
    if ((embed_lattice(L) - embed_lattice(M)).norm() > 1e-10) embed_ok = false;
  }
  c.check("lattice embedding is basis-invariant", embed_ok);
}

void dirichlet_checks(Checker& c) {
  const double golden = (1 + std::sqrt(5.0)) / 2;
  const auto cf = continued_fraction(golden, 5);
  bool cf_ok = cf.quotients == std::vector<std::int64_t>{1, 1, 1, 1, 1};
  const auto cf2 = continued_fraction(std::sqrt(2.0), 4);
  cf_ok = cf_ok && cf2.quotients == std::vector<std::int64_t>{1, 2, 2, 2};
  for (std::size_t k = 1; k < cf2.convergents.size(); ++k) {
    const auto [pk, qk] = cf2.convergents[k];
    const auto [pk1, qk1] = cf2.convergents[k - 1];
    if (pk * qk1 - pk1 * qk != (k % 2 == 1 ? 1 : -1)) cf_ok = false;
  }
  c.check("continued fractions", cf_ok);

  bool dirichlet_ok = true;
  for (const double alpha : {std::sqrt(2.0), golden, pi_v<double>})
    for (const double T : {2.0, 10.0, 100.0, 1000.0, 123456.0})
      if (!dirichlet_solvable(alpha, 1.0 / T, T).solvable) dirichlet_ok = false;
  c.check("Dirichlet solvable at psi = 1/T", dirichlet_ok);

  bool improvable_fails = true;
  for (const double T : {5.0, 8.0, 13.0, 21.0, 34.0, 55.0})
    if (dirichlet_solvable(golden, 0.4 / T, T).solvable) improvable_fails = false;
  c.check("golden ratio defeats psi = 0.4/T", improvable_fails);

  const auto flow = flow_trajectory(0.0, 3.0, 0.25);
  bool flow_ok = true;
  for (const auto& s : flow) {
    if (std::abs(covolume(s.lattice) - 1.0) > 1e-12) flow_ok = false;
    if (std::abs(s.lambda1_sup - std::exp(-s.t)) > 1e-9) flow_ok = false;
  }
  c.check("flow trajectory (unimodular, alpha = 0 profile)", flow_ok);
}

}  // namespace

int selftest(std::ostream& out) {
  Checker c{out};
  geometry_checks(c);
  lattice_checks(c);
  critical_checks(c);
  construct_checks(c);
  analysis_checks(c);
  dirichlet_checks(c);
  out << (c.failures == 0 ? "selftest passed\n"
                          : "selftest FAILED (" + std::to_string(c.failures) + ")\n");
  return c.failures == 0 ? 0 : 1;
}

}  // namespace critlocus::app
