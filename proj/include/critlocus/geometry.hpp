#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "critlocus/base.hpp"
#include "critlocus/numeric.hpp"

namespace critlocus {

enum class Region { Interior, Boundary, Exterior };

/// One tangent cap glued over an arc of the base boundary: the boundary of
/// the composite follows the chain p_lo -> apex -> p_hi for angles in
/// [theta_lo, theta_hi] and the base boundary elsewhere. Caps come in
/// antipodal pairs so the composite stays centrally symmetric.
template <class Scalar>
struct GapBulgeT {
  Scalar theta_lo, theta_hi, theta_apex;
  Vec2<Scalar> p_lo, apex, p_hi;
};

/// Bounded convex domain symmetric about the origin, described by its gauge
/// (Minkowski functional). All built-in kinds evaluate the gauge in closed
/// form, so membership and the radial function are exact up to rounding.
template <class Scalar>
struct ConvexDomainT {
  struct Disc {
    Scalar radius = Scalar(1);
  };
  struct Parallelogram {
    Mat2<Scalar> g, g_inv;  // image of [-1,1]^2 under g
  };
  struct Hexagon {
    std::array<Vec2<Scalar>, 6> vertex;       // counter-clockwise
    std::array<Vec2<Scalar>, 6> edge_normal;  // n_i . x = 1 on edge vertex[i] -> vertex[i+1]
  };
  struct LpBall {
    Scalar p;  // exponent, p > 1
  };
  struct AffineImage {
    Mat2<Scalar> g, g_inv;
    std::shared_ptr<const ConvexDomainT> base;
  };
  struct Composite {
    std::shared_ptr<const ConvexDomainT> base;
    std::vector<GapBulgeT<Scalar>> bulges;  // disjoint angle intervals, sorted by theta_lo
  };

  using Shape = std::variant<Disc, Parallelogram, Hexagon, LpBall, AffineImage, Composite>;

  Shape shape;
  Scalar tol_boundary = Scalar(1e-9);  // relative width of the boundary band

  static ConvexDomainT disc(Scalar radius = Scalar(1)) {
    if (!(radius > Scalar(0))) throw InvalidDomainError("disc radius must be positive");
    return ConvexDomainT{Disc{radius}};
  }

  static ConvexDomainT parallelogram(const Mat2<Scalar>& g) {
    const Scalar det = g.determinant();
    if (std::abs(det) <= Scalar(1e-12))
      throw InvalidDomainError("parallelogram generator is singular");
    return ConvexDomainT{Parallelogram{g, g.inverse().eval()}};
  }

  static ConvexDomainT square() { return parallelogram(Mat2<Scalar>::Identity()); }

  /// Symmetric hexagon: convex hull of {v1, v2, v3} and their negatives.
  static ConvexDomainT hexagon(const Vec2<Scalar>& v1, const Vec2<Scalar>& v2,
                               const Vec2<Scalar>& v3) {
    std::array<Vec2<Scalar>, 6> w = {v1, v2, v3, -v1, -v2, -v3};
    std::sort(w.begin(), w.end(), [](const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
      return std::atan2(a.y(), a.x()) < std::atan2(b.y(), b.x());
    });
    std::array<Vec2<Scalar>, 6> n;
    for (int i = 0; i < 6; ++i) {
      const Vec2<Scalar>& a = w[i];
      const Vec2<Scalar>& b = w[(i + 1) % 6];
      const Scalar det = cross2(a, b);
      if (det <= Scalar(1e-12))
        throw InvalidDomainError("hexagon vertices not in strictly convex position");
      n[i] = Vec2<Scalar>((b.y() - a.y()) / det, (a.x() - b.x()) / det);
    }
    for (int i = 0; i < 6; ++i) {
      // strict turn at every vertex, otherwise this degenerates to a parallelogram
      const Vec2<Scalar> e0 = w[(i + 1) % 6] - w[i];
      const Vec2<Scalar> e1 = w[(i + 2) % 6] - w[(i + 1) % 6];
      if (cross2(e0, e1) <= Scalar(1e-12))
        throw InvalidDomainError("hexagon has a degenerate vertex");
    }
    return ConvexDomainT{Hexagon{w, n}};
  }

  static ConvexDomainT regular_hexagon(Scalar circumradius = Scalar(1)) {
    if (!(circumradius > Scalar(0)))
      throw InvalidDomainError("hexagon circumradius must be positive");
    const Scalar c = circumradius;
    const Scalar t = pi_v<Scalar> / Scalar(3);
    return hexagon(Vec2<Scalar>(c, 0), c * Vec2<Scalar>(std::cos(t), std::sin(t)),
                   c * Vec2<Scalar>(std::cos(2 * t), std::sin(2 * t)));
  }

  static ConvexDomainT lp_ball(Scalar p) {
    if (!(p > Scalar(1))) throw InvalidDomainError("lp exponent must exceed 1");
    return ConvexDomainT{LpBall{p}};
  }

  static ConvexDomainT affine(const Mat2<Scalar>& g, ConvexDomainT base) {
    const Scalar det = g.determinant();
    if (std::abs(det) <= Scalar(1e-12)) throw InvalidDomainError("affine map is singular");
    return ConvexDomainT{AffineImage{g, g.inverse().eval(),
                                     std::make_shared<const ConvexDomainT>(std::move(base))}};
  }

  static ConvexDomainT composite(ConvexDomainT base, std::vector<GapBulgeT<Scalar>> bulges) {
    std::sort(bulges.begin(), bulges.end(),
              [](const GapBulgeT<Scalar>& a, const GapBulgeT<Scalar>& b) {
                return a.theta_lo < b.theta_lo;
              });
    for (std::size_t i = 0; i + 1 < bulges.size(); ++i)
      if (bulges[i].theta_hi > bulges[i + 1].theta_lo)
        throw InvalidDomainError("composite cap intervals overlap");
    return ConvexDomainT{Composite{std::make_shared<const ConvexDomainT>(std::move(base)),
                                   std::move(bulges)}};
  }
};

using ConvexDomain = ConvexDomainT<double>;

namespace detail {

// Distance from the origin, along direction dir, to the segment [a, b].
template <class Scalar>
Scalar ray_segment_distance(const Vec2<Scalar>& dir, const Vec2<Scalar>& a,
                            const Vec2<Scalar>& b) {
  const Vec2<Scalar> e = b - a;
  const Scalar den = cross2(dir, e);
  if (den == Scalar(0)) return a.norm();  // degenerate cap, treat as flat
  return cross2(a, e) / den;
}

template <class Scalar>
const GapBulgeT<Scalar>* find_bulge(const std::vector<GapBulgeT<Scalar>>& bulges, Scalar theta) {
  auto it = std::upper_bound(bulges.begin(), bulges.end(), theta,
                             [](Scalar t, const GapBulgeT<Scalar>& g) { return t < g.theta_lo; });
  if (it == bulges.begin()) return nullptr;
  --it;
  return theta <= it->theta_hi ? &*it : nullptr;
}

}  // namespace detail

/// Minkowski functional: gauge(x) = inf{ c > 0 : x in c*K }. Total, even,
/// positively homogeneous; the boundary of K is its level set {gauge = 1}.
template <class Scalar>
Scalar gauge(const ConvexDomainT<Scalar>& K, const Vec2<Scalar>& x) {
  using D = ConvexDomainT<Scalar>;
  return std::visit(
      [&](const auto& s) -> Scalar {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, typename D::Disc>) {
          return x.norm() / s.radius;
        } else if constexpr (std::is_same_v<S, typename D::Parallelogram>) {
          return (s.g_inv * x).template lpNorm<Eigen::Infinity>();
        } else if constexpr (std::is_same_v<S, typename D::Hexagon>) {
          Scalar best = Scalar(0);
          for (const auto& n : s.edge_normal) best = std::max(best, n.dot(x));
          return best;
        } else if constexpr (std::is_same_v<S, typename D::LpBall>) {
          const Scalar ax = std::abs(x.x()), ay = std::abs(x.y());
          const Scalar m = std::max(ax, ay);
          if (m == Scalar(0)) return Scalar(0);
          return m * std::pow(std::pow(ax / m, s.p) + std::pow(ay / m, s.p), Scalar(1) / s.p);
        } else if constexpr (std::is_same_v<S, typename D::AffineImage>) {
          return gauge(*s.base, Vec2<Scalar>(s.g_inv * x));
        } else {
          const Scalar r = x.norm();
          if (r == Scalar(0)) return Scalar(0);
          const Scalar theta = wrap_angle(std::atan2(x.y(), x.x()));
          if (const auto* bulge = detail::find_bulge(s.bulges, theta)) {
            const Vec2<Scalar> dir = x / r;
            const Scalar rho = theta <= bulge->theta_apex
                                   ? detail::ray_segment_distance(dir, bulge->p_lo, bulge->apex)
                                   : detail::ray_segment_distance(dir, bulge->apex, bulge->p_hi);
            return r / rho;
          }
          return gauge(*s.base, x);
        }
      },
      K.shape);
}

/// Radial function of the boundary: rho(theta) = 1 / gauge(unit(theta)).
template <class Scalar>
Scalar radial(const ConvexDomainT<Scalar>& K, Scalar theta) {
  return Scalar(1) / gauge(K, Vec2<Scalar>(std::cos(theta), std::sin(theta)));
}

template <class Scalar>
Vec2<Scalar> boundary_point(const ConvexDomainT<Scalar>& K, Scalar theta) {
  const Vec2<Scalar> u(std::cos(theta), std::sin(theta));
  return Vec2<Scalar>(u / gauge(K, u));
}

template <class Scalar>
Region classify(const ConvexDomainT<Scalar>& K, const Vec2<Scalar>& x) {
  const Scalar g = gauge(K, x);
  if (std::abs(g - Scalar(1)) <= K.tol_boundary) return Region::Boundary;
  return g < Scalar(1) ? Region::Interior : Region::Exterior;
}

/// Unit tangent to the boundary at angle theta, counter-clockwise.
/// Throws CornerPoint where the boundary has no unique tangent.
template <class Scalar>
Vec2<Scalar> tangent_dir(const ConvexDomainT<Scalar>& K, Scalar theta) {
  using D = ConvexDomainT<Scalar>;
  constexpr Scalar corner_tol = Scalar(1e-9);
  return std::visit(
      [&](const auto& s) -> Vec2<Scalar> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, typename D::Disc>) {
          return Vec2<Scalar>(-std::sin(theta), std::cos(theta));
        } else if constexpr (std::is_same_v<S, typename D::Parallelogram>) {
          const Vec2<Scalar> u = s.g_inv * Vec2<Scalar>(std::cos(theta), std::sin(theta));
          const Scalar ax = std::abs(u.x()), ay = std::abs(u.y());
          if (std::abs(ax - ay) <= corner_tol * std::max(ax, ay))
            throw CornerPointError("parallelogram vertex at theta=" + std::to_string(theta));
          Vec2<Scalar> t_base;
          if (ax > ay)
            t_base = Vec2<Scalar>(Scalar(0), u.x() > 0 ? Scalar(1) : Scalar(-1));
          else
            t_base = Vec2<Scalar>(u.y() > 0 ? Scalar(-1) : Scalar(1), Scalar(0));
          Vec2<Scalar> t = s.g * t_base;
          if (s.g.determinant() < Scalar(0)) t = -t;
          return Vec2<Scalar>(t.normalized());
        } else if constexpr (std::is_same_v<S, typename D::Hexagon>) {
          const Vec2<Scalar> u(std::cos(theta), std::sin(theta));
          Scalar v0 = -std::numeric_limits<Scalar>::infinity(), v1 = v0;
          int best = 0;
          for (int i = 0; i < 6; ++i) {
            const Scalar v = s.edge_normal[i].dot(u);
            if (v > v0) {
              v1 = v0;
              v0 = v;
              best = i;
            } else if (v > v1) {
              v1 = v;
            }
          }
          if (v0 - v1 <= corner_tol * std::abs(v0))
            throw CornerPointError("hexagon vertex at theta=" + std::to_string(theta));
          const Vec2<Scalar> e = s.vertex[(best + 1) % 6] - s.vertex[best];
          return Vec2<Scalar>(e.normalized());
        } else if constexpr (std::is_same_v<S, typename D::LpBall>) {
          const Vec2<Scalar> b = boundary_point(K, theta);
          auto dpow = [&](Scalar v) {
            return v == Scalar(0) ? Scalar(0)
                                  : std::copysign(std::pow(std::abs(v), s.p - 1), v);
          };
          const Vec2<Scalar> grad(dpow(b.x()), dpow(b.y()));
          return Vec2<Scalar>(perp(grad).normalized());
        } else if constexpr (std::is_same_v<S, typename D::AffineImage>) {
          const Vec2<Scalar> y = s.g_inv * boundary_point(K, theta);
          const Vec2<Scalar> t = s.g * tangent_dir(*s.base, std::atan2(y.y(), y.x()));
          return Vec2<Scalar>(s.g.determinant() < Scalar(0) ? (-t).normalized()
                                                            : t.normalized());
        } else {
          const Scalar th = wrap_angle(theta);
          if (const auto* bulge = detail::find_bulge(s.bulges, th)) {
            if (std::abs(th - bulge->theta_apex) < Scalar(1e-12))
              throw CornerPointError("composite cap apex at theta=" + std::to_string(theta));
            const Vec2<Scalar> e = th < bulge->theta_apex ? bulge->apex - bulge->p_lo
                                                          : bulge->p_hi - bulge->apex;
            return Vec2<Scalar>(e.normalized());
          }
          return tangent_dir(*s.base, theta);
        }
      },
      K.shape);
}

/// Area by polar quadrature, integral of rho^2 over a half turn. Exists as
/// an independent route next to the closed forms in area(). Composite caps
/// are pre-split so the adaptive rule cannot step over a narrow bump.
template <class Scalar>
Scalar polar_area(const ConvexDomainT<Scalar>& K, Scalar tol = Scalar(1e-12)) {
  auto f = [&](Scalar t) {
    const Scalar r = radial(K, t);
    return r * r;
  };
  std::vector<Scalar> cuts = {Scalar(0), pi_v<Scalar>};
  if (const auto* comp = std::get_if<typename ConvexDomainT<Scalar>::Composite>(&K.shape)) {
    for (const auto& bulge : comp->bulges)
      for (Scalar t : {bulge.theta_lo, bulge.theta_apex, bulge.theta_hi}) {
        const Scalar folded = t >= pi_v<Scalar> ? t - pi_v<Scalar> : t;  // rho has period pi
        if (folded > Scalar(0) && folded < pi_v<Scalar>) cuts.push_back(folded);
      }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  }
  Scalar total = Scalar(0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += adaptive_simpson<Scalar>(f, cuts[i], cuts[i + 1], tol, 52);
  return total;
}

template <class Scalar>
Scalar area(const ConvexDomainT<Scalar>& K) {
  using D = ConvexDomainT<Scalar>;
  return std::visit(
      [&](const auto& s) -> Scalar {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, typename D::Disc>) {
          return pi_v<Scalar> * s.radius * s.radius;
        } else if constexpr (std::is_same_v<S, typename D::Parallelogram>) {
          return Scalar(4) * std::abs(s.g.determinant());
        } else if constexpr (std::is_same_v<S, typename D::Hexagon>) {
          Scalar twice = Scalar(0);
          for (int i = 0; i < 6; ++i) twice += cross2(s.vertex[i], s.vertex[(i + 1) % 6]);
          return twice / Scalar(2);
        } else if constexpr (std::is_same_v<S, typename D::LpBall>) {
          return polar_area(K);
        } else if constexpr (std::is_same_v<S, typename D::AffineImage>) {
          return std::abs(s.g.determinant()) * area(*s.base);
        } else {
          // base area plus one term per cap (antipodes are separate entries);
          // a cap adds the origin-cone over its two segments minus the
          // origin-cone over the base arc it replaces
          Scalar total = area(*s.base);
          for (const auto& bulge : s.bulges) {
            const Scalar cone =
                (cross2(bulge.p_lo, bulge.apex) + cross2(bulge.apex, bulge.p_hi)) / Scalar(2);
            Scalar base_cone;
            if (const auto* disc = std::get_if<typename D::Disc>(&s.base->shape)) {
              base_cone = disc->radius * disc->radius * (bulge.theta_hi - bulge.theta_lo) / 2;
            } else {
              auto f = [&](Scalar t) {
                const Scalar r = radial(*s.base, t);
                return r * r / Scalar(2);
              };
              base_cone = adaptive_simpson<Scalar>(f, bulge.theta_lo, bulge.theta_hi,
                                                   Scalar(1e-14), 48);
            }
            total += cone - base_cone;
          }
          return total;
        }
      },
      K.shape);
}

/// Radius of a disc guaranteed to contain K (tight for the built-ins).
template <class Scalar>
Scalar enclosing_radius(const ConvexDomainT<Scalar>& K) {
  using D = ConvexDomainT<Scalar>;
  return std::visit(
      [&](const auto& s) -> Scalar {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, typename D::Disc>) {
          return s.radius;
        } else if constexpr (std::is_same_v<S, typename D::Parallelogram>) {
          return std::max((s.g * Vec2<Scalar>(1, 1)).norm(),
                          (s.g * Vec2<Scalar>(1, -1)).norm());
        } else if constexpr (std::is_same_v<S, typename D::Hexagon>) {
          Scalar best = Scalar(0);
          for (const auto& w : s.vertex) best = std::max(best, Scalar(w.norm()));
          return best;
        } else if constexpr (std::is_same_v<S, typename D::LpBall>) {
          return std::max(Scalar(1), std::pow(Scalar(2), Scalar(0.5) - Scalar(1) / s.p));
        } else if constexpr (std::is_same_v<S, typename D::AffineImage>) {
          // spectral norm of g times the base radius
          const Scalar fro2 = s.g.squaredNorm();
          const Scalar det = s.g.determinant();
          const Scalar disc2 = std::max(Scalar(0), fro2 * fro2 - 4 * det * det);
          const Scalar smax = std::sqrt((fro2 + std::sqrt(disc2)) / 2);
          return smax * enclosing_radius(*s.base);
        } else {
          Scalar best = enclosing_radius(*s.base);
          for (const auto& bulge : s.bulges) best = std::max(best, Scalar(bulge.apex.norm()));
          return best;
        }
      },
      K.shape);
}

/// True when K is a parallelogram or an affine image of one; these have
/// non-unique inscribed-hexagon minimizers (two shear families).
template <class Scalar>
bool is_parallelogram(const ConvexDomainT<Scalar>& K) {
  using D = ConvexDomainT<Scalar>;
  if (std::holds_alternative<typename D::Parallelogram>(K.shape)) return true;
  if (const auto* a = std::get_if<typename D::AffineImage>(&K.shape))
    return is_parallelogram(*a->base);
  return false;
}

}  // namespace critlocus
