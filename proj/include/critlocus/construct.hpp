#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "critlocus/base.hpp"
#include "critlocus/critical.hpp"
#include "critlocus/geometry.hpp"
#include "critlocus/lattice.hpp"
#include "critlocus/parallel.hpp"

namespace critlocus {

/// Closed subset Q of [0,1], stored as the ordered open gaps of its
/// complement. 0 and 1 always belong to Q because the gaps are open.
template <class Scalar>
struct ClosedSet01T {
  std::vector<std::pair<Scalar, Scalar>> gaps;  // sorted, disjoint, inside [0,1]

  /// Normalize raw user gaps: clip to [0,1], drop empty, merge overlaps.
  static ClosedSet01T from_gaps(std::vector<std::pair<Scalar, Scalar>> raw,
                                std::vector<std::string>* warnings = nullptr) {
    auto warn = [&](const std::string& w) {
      if (warnings) warnings->push_back(w);
    };
    ClosedSet01T out;
    std::sort(raw.begin(), raw.end());
    for (auto [a, b] : raw) {
      if (a < Scalar(0) || b > Scalar(1)) {
        warn("gap clipped to [0,1]");
        a = std::max(a, Scalar(0));
        b = std::min(b, Scalar(1));
      }
      if (!(a < b)) continue;
      if (!out.gaps.empty() && a <= out.gaps.back().second) {
        warn("overlapping gaps merged");
        out.gaps.back().second = std::max(out.gaps.back().second, b);
      } else {
        out.gaps.emplace_back(a, b);
      }
    }
    return out;
  }

  bool contains(Scalar t) const {
    for (const auto& [a, b] : gaps)
      if (a < t && t < b) return false;
    return Scalar(0) <= t && t <= Scalar(1);
  }

  Scalar endpoint_distance(Scalar t) const {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (const auto& [a, b] : gaps)
      best = std::min({best, std::abs(t - a), std::abs(t - b)});
    return best;
  }

  struct Interval {
    Scalar lo, hi;  // lo == hi marks an isolated point of Q
  };

  /// Maximal closed intervals of Q, in order, degenerate ones included.
  std::vector<Interval> intervals() const {
    std::vector<Interval> out;
    Scalar cursor = Scalar(0);
    for (const auto& [a, b] : gaps) {
      out.push_back({cursor, a});
      cursor = b;
    }
    out.push_back({cursor, Scalar(1)});
    return out;
  }

  Scalar min_gap_width() const {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (const auto& [a, b] : gaps) best = std::min(best, b - a);
    return best;
  }

  /// Narrowest retained interval of positive length; +inf if none exists.
  Scalar min_interval_width() const {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (const auto& iv : intervals())
      if (iv.hi > iv.lo) best = std::min(best, iv.hi - iv.lo);
    return best;
  }
};

using ClosedSet01 = ClosedSet01T<double>;

/// The 2^depth - 1 open middle-third gaps of the depth-level Cantor
/// approximation, as exactly rounded ternary rationals.
template <class Scalar>
ClosedSet01T<Scalar> cantor_gaps(int depth) {
  if (depth < 0) throw InvalidDomainError("cantor depth must be nonnegative");
  if (depth > 30)
    throw InvalidDomainError("cantor depth > 30: gap widths fall below float resolution");
  ClosedSet01T<Scalar> q;
  std::vector<std::uint64_t> cells = {0};  // retained cell indices at the current level
  std::uint64_t den = 1;                   // 3^(level+1) after the update below
  for (int level = 0; level < depth; ++level) {
    den *= 3;
    std::vector<std::uint64_t> next;
    next.reserve(cells.size() * 2);
    for (const std::uint64_t c : cells) {
      // cell [c, c+1] / 3^level loses its middle third
      q.gaps.emplace_back(Scalar(3 * c + 1) / Scalar(den), Scalar(3 * c + 2) / Scalar(den));
      next.push_back(3 * c);
      next.push_back(3 * c + 2);
    }
    cells = std::move(next);
  }
  std::sort(q.gaps.begin(), q.gaps.end());
  return q;
}

/// Curvilinear triangle over one gap: the region between the tangent lines
/// at p(a), p(b) and the boundary arc they cut off.
template <class Scalar>
struct TangentTriangleT {
  Scalar a, b;  // gap endpoints in parameter space
  Vec2<Scalar> pa, pb, vertex;
};

using TangentTriangle = TangentTriangleT<double>;

/// The constructed domain K: base H with a tangent cap (and its antipode)
/// glued over every gap arc. Carries the base arc parameterization so the
/// locus map phi stays available for verification.
template <class Scalar>
struct CompositeDomainT {
  ConvexDomainT<Scalar> domain;
  LocusArcT<Scalar> arc;
  ClosedSet01T<Scalar> q;
  std::vector<TangentTriangleT<Scalar>> triangles;

  const ConvexDomainT<Scalar>& base() const { return arc.domain; }
  LocusPointT<Scalar> phi(Scalar t) const { return locus_point(arc, t); }
};

using CompositeDomain = CompositeDomainT<double>;

namespace detail {

template <class Scalar>
bool strictly_convex_c1(const ConvexDomainT<Scalar>& K) {
  using D = ConvexDomainT<Scalar>;
  if (std::holds_alternative<typename D::Disc>(K.shape)) return true;
  if (std::holds_alternative<typename D::LpBall>(K.shape)) return true;
  if (const auto* a = std::get_if<typename D::AffineImage>(&K.shape))
    return strictly_convex_c1(*a->base);
  return false;
}

}  // namespace detail

/// Build K from a strictly convex base H and a closed Q in [0,1]: over each
/// gap arc, replace the boundary by the two tangent segments through their
/// intersection point, antipodally on both sides.
template <class Scalar>
CompositeDomainT<Scalar> build_construction(const ConvexDomainT<Scalar>& H,
                                            const ClosedSet01T<Scalar>& Q,
                                            std::vector<std::string>* warnings = nullptr) {
  if (!detail::strictly_convex_c1(H))
    throw InvalidDomainError("construction base must be strictly convex with C1 boundary");
  auto warn = [&](const std::string& w) {
    if (warnings) warnings->push_back(w);
  };

  CompositeDomainT<Scalar> out;
  out.arc = make_locus_arc(H);
  out.q = Q;

  const Scalar span = out.arc.theta1 - out.arc.theta0;
  std::vector<GapBulgeT<Scalar>> bulges;
  for (const auto& [a, b] : Q.gaps) {
    if (b - a < Scalar(1e-7)) {
      warn("gap narrower than 1e-7 dropped: tangent intersection unstable");
      continue;
    }
    const Scalar theta_a = out.arc.theta0 + a * span;
    const Scalar theta_b = out.arc.theta0 + b * span;
    const Vec2<Scalar> pa = boundary_point(H, theta_a);
    const Vec2<Scalar> pb = boundary_point(H, theta_b);
    const Vec2<Scalar> ta = tangent_dir(H, theta_a);
    const Vec2<Scalar> tb = tangent_dir(H, theta_b);
    const Scalar den = cross2(ta, tb);
    if (std::abs(den) < Scalar(1e-14))
      throw TangentIntersectionUnstableError("tangent lines nearly parallel over gap (" +
                                             std::to_string(double(a)) + ", " +
                                             std::to_string(double(b)) + ")");
    const Scalar alpha = cross2<Scalar>(pb - pa, tb) / den;
    const Scalar beta = cross2<Scalar>(pb - pa, ta) / den;
    if (!(alpha > Scalar(0)) || !(beta < Scalar(0)))
      throw TangentIntersectionUnstableError("tangent intersection on the wrong side");
    const Vec2<Scalar> v = pa + alpha * ta;
    if (!(gauge(H, v) > Scalar(1)))
      throw TangentIntersectionUnstableError("cap vertex does not clear the base boundary");

    out.triangles.push_back({a, b, pa, pb, v});
    bulges.push_back({wrap_angle(theta_a), wrap_angle(theta_b),
                      wrap_angle(std::atan2(v.y(), v.x())), pa, v, pb});
    bulges.push_back({wrap_angle(theta_a + pi_v<Scalar>), wrap_angle(theta_b + pi_v<Scalar>),
                      wrap_angle(std::atan2(-v.y(), -v.x())), -pa, -v, -pb});
  }

  out.domain = ConvexDomainT<Scalar>::composite(H, std::move(bulges));

  // convexity sampling: chord midpoints of consecutive boundary samples must
  // not leave K; fails only on a bug or an invalid base
  const int n_check = 2048;
  for (int i = 0; i < n_check; ++i) {
    const Scalar t0 = Scalar(2) * pi_v<Scalar> * Scalar(i) / Scalar(n_check);
    const Scalar t1 = Scalar(2) * pi_v<Scalar> * Scalar(i + 1) / Scalar(n_check);
    const Vec2<Scalar> mid =
        (boundary_point(out.domain, t0) + boundary_point(out.domain, t1)) / Scalar(2);
    if (gauge(out.domain, mid) > Scalar(1) + Scalar(1e-9))
      throw NonConvexResultError("midpoint chord test failed near theta=" +
                                 std::to_string(double(t0)));
  }
  return out;
}

struct LocusMismatch {
  double t;
  bool expected_admissible;
  bool found_admissible;
};

struct LocusVerification {
  double agreement_fraction = 1;
  int scored = 0;
  int excluded = 0;
  std::vector<LocusMismatch> mismatches;
};

/// Compare admissibility of phi(t) against membership t in Q over a uniform
/// grid. Points within 2/n_grid of a gap endpoint are excluded: there the
/// grid cannot separate the boundary band from the gap interior.
template <class Scalar>
LocusVerification verify_locus(const CompositeDomainT<Scalar>& K, const ClosedSet01T<Scalar>& Q,
                               int n_grid) {
  if (n_grid < 1) throw InvalidDomainError("verification grid must be positive");
  LocusVerification report;
  const Scalar band = Scalar(2) / Scalar(n_grid);
  std::vector<int> verdict(static_cast<std::size_t>(n_grid) + 1, -1);
  parallel_for(verdict.size(), [&](std::size_t j) {
    const Scalar t = Scalar(j) / Scalar(n_grid);
    if (Q.endpoint_distance(t) < band) return;  // stays -1: excluded
    const bool actual = is_admissible(K.phi(t).lattice, K.domain);
    const bool expected = Q.contains(t);
    verdict[j] = (actual == expected) ? (expected ? 1 : 0) : (expected ? 2 : 3);
  });
  int agree = 0;
  for (std::size_t j = 0; j < verdict.size(); ++j) {
    const Scalar t = Scalar(j) / Scalar(n_grid);
    switch (verdict[j]) {
      case -1:
        ++report.excluded;
        break;
      case 0:
      case 1:
        ++agree;
        ++report.scored;
        break;
      case 2:
        report.mismatches.push_back({double(t), true, false});
        ++report.scored;
        break;
      case 3:
        report.mismatches.push_back({double(t), false, true});
        ++report.scored;
        break;
    }
  }
  report.agreement_fraction = report.scored ? double(agree) / double(report.scored) : 1.0;
  return report;
}

template <class Scalar>
LocusVerification verify_locus(const CompositeDomainT<Scalar>& K, int n_grid) {
  return verify_locus(K, K.q, n_grid);
}

struct DeltaPreservation {
  bool preserved = false;
  bool monotone = false;  // delta(K) >= delta(H) up to tolerance, from H inside K
  double delta_composite = 0;
  double delta_base = 0;
};

/// The construction must not change the critical determinant: phi(0) stays
/// admissible, so delta(K) = delta(H).
template <class Scalar>
DeltaPreservation delta_preserved(const CompositeDomainT<Scalar>& K, int grid_n = 720,
                                  Scalar tol = Scalar(1e-6)) {
  const auto rk = critical_search(K.domain, grid_n);
  const auto rh = critical_search(K.base(), grid_n);
  DeltaPreservation out;
  out.delta_composite = double(rk.delta_est);
  out.delta_base = double(rh.delta_est);
  out.preserved = std::abs(rk.delta_est - rh.delta_est) <= tol;
  out.monotone = rk.delta_est >= rh.delta_est - tol;
  return out;
}

}  // namespace critlocus
