// Independent oracles used to freeze expected values: brute-force loops and
// closed forms that do not share code paths with the library implementation.
#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "critlocus/construct.hpp"
#include "critlocus/geometry.hpp"
#include "critlocus/lattice.hpp"

namespace oracles {

using critlocus::ClosedSet01;
using critlocus::ConvexDomain;
using critlocus::Lattice2;
using critlocus::Mat2;
using critlocus::Vec2;

/// Lattice points by double loop over coefficients, nothing clever.
inline std::vector<Vec2<double>> brute_points(const Lattice2& L, double R, int coeff = 50) {
  std::vector<Vec2<double>> out;
  for (int m = -coeff; m <= coeff; ++m)
    for (int n = -coeff; n <= coeff; ++n) {
      if (m == 0 && n == 0) continue;
      const Vec2<double> x = L.point(m, n);
      if (x.norm() <= R * (1 + 1e-12)) out.push_back(x);
    }
  return out;
}

/// Admissibility by scanning a coefficient box and evaluating the gauge.
inline bool brute_admissible(const Lattice2& L, const ConvexDomain& K, int coeff = 12) {
  for (int m = -coeff; m <= coeff; ++m)
    for (int n = -coeff; n <= coeff; ++n) {
      if (m == 0 && n == 0) continue;
      if (critlocus::gauge(K, L.point(m, n)) < 1.0 - 1e-9) return false;
    }
  return true;
}

/// Smallest scale c > 0 making c*L admissible (admissibility is monotone in
/// the scale), by bisection on the gauge criterion.
inline double minimal_admissible_scale(const Lattice2& L, const ConvexDomain& K) {
  double lo = 1e-3, hi = 8.0;
  if (!brute_admissible(Lattice2(hi * L.v1, hi * L.v2), K)) return -1.0;
  for (int i = 0; i < 48; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (brute_admissible(Lattice2(mid * L.v1, mid * L.v2), K))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

/// Critical determinant by direct minimization over lattice shapes
/// (rotation, shear, aspect), each scaled until just admissible. A coarse
/// grid plus one zoom pass; agrees with the hexagon search to ~1e-3.
inline double brute_delta(const ConvexDomain& K) {
  auto covolume_at = [&](double theta, double u, double v) {
    Mat2<double> b;
    b << 1.0, u, 0.0, v;
    const Mat2<double> g = critlocus::rotation(theta) * b;
    const Lattice2 L(g.col(0), g.col(1));
    const double c = minimal_admissible_scale(L, K);
    return c > 0 ? c * c * v : std::numeric_limits<double>::infinity();
  };
  double best = std::numeric_limits<double>::infinity();
  double bt = 0, bu = 0, bv = 1;
  const double pi = critlocus::pi_v<double>;
  for (int it = 0; it < 24; ++it)
    for (int iu = 0; iu <= 16; ++iu)
      for (int iv = 0; iv <= 16; ++iv) {
        const double theta = pi * it / 24;
        const double u = -0.5 + iu / 16.0;
        const double v = 0.6 + iv / 16.0;  // reduced-shape aspect range
        const double c = covolume_at(theta, u, v);
        if (c < best) {
          best = c;
          bt = theta;
          bu = u;
          bv = v;
        }
      }
  double ht = pi / 24, hu = 1.0 / 16, hv = 1.0 / 16;
  for (int zoom = 0; zoom < 3; ++zoom) {
    double zt = bt, zu = bu, zv = bv;
    for (int it = -5; it <= 5; ++it)
      for (int iu = -5; iu <= 5; ++iu)
        for (int iv = -5; iv <= 5; ++iv) {
          const double theta = bt + ht * it / 5.0;
          const double u = bu + hu * iu / 5.0;
          const double v = bv + hv * iv / 5.0;
          const double c = covolume_at(theta, u, v);
          if (c < best) {
            best = c;
            zt = theta;
            zu = u;
            zv = v;
          }
        }
    bt = zt;
    bu = zu;
    bv = zv;
    ht /= 5;
    hu /= 5;
    hv /= 5;
  }
  return best;
}

/// Minimum of |q*alpha - round(q*alpha)| over 1 <= q <= q_max, smallest q
/// winning ties.
inline std::pair<long long, double> brute_min_qdist(double alpha, long long q_max) {
  long long best_q = 1;
  double best = std::numeric_limits<double>::infinity();
  for (long long q = 1; q <= q_max; ++q) {
    const double d = std::abs(q * alpha - std::nearbyint(q * alpha));
    if (d < best) {
      best = d;
      best_q = q;
    }
  }
  return {best_q, best};
}

/// Box counting by a per-cell loop: a cell counts when it overlaps a
/// retained interval of Q in positive length or contains an isolated point.
inline long long brute_box_count(const ClosedSet01& Q, long long m) {
  const auto ivs = Q.intervals();
  long long count = 0;
  const double eps = 1.0 / double(m);
  for (long long j = 0; j < m; ++j) {
    const double lo = j * eps, hi = (j + 1) * eps;
    bool hit = false;
    for (const auto& iv : ivs) {
      if (iv.hi > iv.lo) {
        const double overlap = std::min(hi, double(iv.hi)) - std::max(lo, double(iv.lo));
        if (overlap > 1e-9 * eps) hit = true;
      } else {
        const bool inside = (iv.lo >= lo - 1e-9 * eps && iv.lo < hi - 1e-9 * eps) ||
                            (j == m - 1 && std::abs(iv.lo - 1.0) <= 1e-9 * eps);
        if (inside) hit = true;
      }
    }
    if (hit) ++count;
  }
  return count;
}

inline Lattice2 random_lattice(std::mt19937_64& rng, double span = 2.0,
                               double min_cross = 0.05) {
  std::uniform_real_distribution<double> u(-span, span);
  for (;;) {
    const Vec2<double> a(u(rng), u(rng)), b(u(rng), u(rng));
    if (std::abs(critlocus::cross2(a, b)) > min_cross) return Lattice2(a, b);
  }
}

/// Random symmetric convex hexagon: three vertices at increasing angles in
/// (0, pi), rejected until the hull has well-conditioned strict turns.
inline ConvexDomain random_hexagon(std::mt19937_64& rng) {
  const double pi = critlocus::pi_v<double>;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::uniform_real_distribution<double> len(0.7, 1.5);
  for (;;) {
    const double a0 = u01(rng) * pi;
    const double a1 = a0 + (0.35 + 0.6 * u01(rng)) * (pi / 2);
    const double a2 = a1 + (0.35 + 0.6 * u01(rng)) * (pi / 2);
    if (a2 - a0 >= pi * 0.98) continue;
    const Vec2<double> w0 = len(rng) * Vec2<double>(std::cos(a0), std::sin(a0));
    const Vec2<double> w1 = len(rng) * Vec2<double>(std::cos(a1), std::sin(a1));
    const Vec2<double> w2 = len(rng) * Vec2<double>(std::cos(a2), std::sin(a2));
    try {
      const ConvexDomain K = ConvexDomain::hexagon(w0, w1, w2);
      // keep the turns bounded away from degenerate for stable search
      const auto& hex = std::get<ConvexDomain::Hexagon>(K.shape);
      double min_turn = 1e9;
      for (int i = 0; i < 6; ++i) {
        const Vec2<double> e0 = hex.vertex[(i + 1) % 6] - hex.vertex[i];
        const Vec2<double> e1 = hex.vertex[(i + 2) % 6] - hex.vertex[(i + 1) % 6];
        min_turn = std::min(min_turn, critlocus::cross2(e0, e1));
      }
      if (min_turn > 0.08) return K;
    } catch (const critlocus::InvalidDomainError&) {
    }
  }
}

}  // namespace oracles
