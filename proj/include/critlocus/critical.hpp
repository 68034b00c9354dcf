#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "critlocus/base.hpp"
#include "critlocus/geometry.hpp"
#include "critlocus/lattice.hpp"
#include "critlocus/numeric.hpp"
#include "critlocus/parallel.hpp"

namespace critlocus {

/// Inscribed hexagon datum: boundary points p1 = p(s), p2 = p(u) with
/// p3 = p1 + p2 again on the boundary. The lattice spanned by (p1, p2) is
/// then admissible, and every critical lattice arises this way.
template <class Scalar>
struct HexagonCandidateT {
  Scalar s, u;
  Vec2<Scalar> p1, p2, p3;
  Lattice2T<Scalar> lattice;

  Scalar cov() const { return covolume(lattice); }
};

using HexagonCandidate = HexagonCandidateT<double>;

/// The companion angle u in (s, s + pi) with p(s) + p(u) on the boundary.
///
/// f(u) = gauge(p(s) + p(u)) - 1 starts at +1 (u -> s) and ends at -1
/// (u -> s + pi); bisection keeps f > 0 on the left so it converges to the
/// leftmost root when flat sides make the zero set an interval.
template <class Scalar>
Scalar solve_companion(const ConvexDomainT<Scalar>& K, Scalar s) {
  const Vec2<Scalar> p = boundary_point(K, s);
  auto f = [&](Scalar u) { return gauge(K, Vec2<Scalar>(p + boundary_point(K, u))) - Scalar(1); };
  const Scalar eps = Scalar(1e-9);
  return bisect_leftmost<Scalar>(f, s + eps, s + pi_v<Scalar> - eps, 64);
}

/// Width of the flat zero interval of the companion residual at s, or ~0
/// when the root is a clean crossing. Wide intervals mean the companion is
/// non-unique (flat boundary pieces both sides of p3).
template <class Scalar>
Scalar companion_flat_width(const ConvexDomainT<Scalar>& K, Scalar s,
                            Scalar f_tol = Scalar(1e-9)) {
  const Vec2<Scalar> p = boundary_point(K, s);
  auto f = [&](Scalar u) { return gauge(K, Vec2<Scalar>(p + boundary_point(K, u))) - Scalar(1); };
  const Scalar eps = Scalar(1e-9);
  const Scalar u_left = bisect_leftmost<Scalar>(f, s + eps, s + pi_v<Scalar> - eps, 64);
  const Scalar probe = Scalar(1e-3);
  if (u_left + probe < s + pi_v<Scalar> - eps && f(u_left + probe) < -f_tol)
    return Scalar(0);  // crossing, not flat
  auto g = [&](Scalar u) { return f(u) + f_tol; };
  const Scalar u_right = bisect_leftmost<Scalar>(g, u_left, s + pi_v<Scalar> - eps, 64);
  return u_right - u_left;
}

template <class Scalar>
HexagonCandidateT<Scalar> candidate_at(const ConvexDomainT<Scalar>& K, Scalar s, Scalar u) {
  const Vec2<Scalar> p1 = boundary_point(K, s);
  const Vec2<Scalar> p2 = boundary_point(K, u);
  return HexagonCandidateT<Scalar>{s, u, p1, p2, Vec2<Scalar>(p1 + p2),
                                   Lattice2T<Scalar>(p1, p2)};
}

template <class Scalar>
HexagonCandidateT<Scalar> hexagon_candidate(const ConvexDomainT<Scalar>& K, Scalar s) {
  return candidate_at(K, s, solve_companion(K, s));
}

/// The six boundary points of a candidate's lattice, counter-clockwise.
template <class Scalar>
std::array<Vec2<Scalar>, 6> candidate_boundary_points(const HexagonCandidateT<Scalar>& c) {
  std::array<Vec2<Scalar>, 6> pts = {c.p1, c.p3, c.p2, -c.p1, -c.p3, -c.p2};
  std::sort(pts.begin(), pts.end(), [](const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
    return std::atan2(a.y(), a.x()) < std::atan2(b.y(), b.x());
  });
  return pts;
}

template <class Scalar>
struct MinimizerClusterT {
  HexagonCandidateT<Scalar> representative;
  int member_count = 0;
  Scalar s_min = 0, s_max = 0;
};

template <class Scalar>
struct CriticalReportT {
  Scalar delta_est = 0;
  std::vector<MinimizerClusterT<Scalar>> clusters;
  int grid_n = 0;
  Scalar refine_tol = 0;
  bool parallelogram_warning = false;
  Scalar domain_area = 0;

  Scalar minkowski_ratio() const { return delta_est / (domain_area / Scalar(4)); }

  std::vector<HexagonCandidateT<Scalar>> minimizers() const {
    std::vector<HexagonCandidateT<Scalar>> out;
    out.reserve(clusters.size());
    for (const auto& c : clusters) out.push_back(c.representative);
    return out;
  }
};

using CriticalReport = CriticalReportT<double>;

namespace detail {

template <class Scalar>
struct ScoredCandidate {
  HexagonCandidateT<Scalar> cand;
  Scalar cov;
  Scalar s_mod;  // s normalized into [0, pi)
};

template <class Scalar>
Scalar mod_pi(Scalar s) {
  Scalar t = std::fmod(s, pi_v<Scalar>);
  if (t < Scalar(0)) t += pi_v<Scalar>;
  return t;
}

}  // namespace detail

/// Scan of inscribed-hexagon candidates over a uniform angle grid on
/// [0, pi), golden-section refinement around local minima, admissibility
/// filter, and clustering of the minimizer set. Clusters merge contiguous
/// parameter runs (a disc has a whole circle of minima) and relabelings of
/// one lattice (a hexagon's minimizer shows up at three angles).
template <class Scalar>
CriticalReportT<Scalar> critical_search(const ConvexDomainT<Scalar>& K, int grid_n = 720,
                                        Scalar refine_tol = Scalar(1e-9)) {
  if (grid_n < 8) throw InvalidDomainError("critical_search grid too coarse");
  const Scalar step = pi_v<Scalar> / Scalar(grid_n);

  std::vector<detail::ScoredCandidate<Scalar>> pool;
  std::vector<std::optional<HexagonCandidateT<Scalar>>> grid(grid_n);
  std::vector<std::optional<HexagonCandidateT<Scalar>>> flat_extra(grid_n);
  parallel_for(static_cast<std::size_t>(grid_n), [&](std::size_t i) {
    const Scalar s = Scalar(i) * step;
    grid[i] = hexagon_candidate(K, s);
    // flat-sided domains have interval-valued companions; sample both ends
    const Vec2<Scalar> p = grid[i]->p1;
    auto f = [&](Scalar u) {
      return gauge(K, Vec2<Scalar>(p + boundary_point(K, u))) - Scalar(1);
    };
    const Scalar f_tol = Scalar(1e-12);
    const Scalar u_left = grid[i]->u;
    const Scalar hi = s + pi_v<Scalar> - Scalar(1e-9);
    const Scalar probe = Scalar(1e-3);
    if (u_left + probe < hi && f(u_left + probe) >= -f_tol) {
      try {
        auto shifted = [&](Scalar u) { return f(u) + f_tol; };
        const Scalar u_right = bisect_leftmost<Scalar>(shifted, u_left, hi, 64);
        if (u_right - u_left > Scalar(1e-6)) flat_extra[i] = candidate_at(K, s, u_right);
      } catch (const BracketFailureError&) {
        // residue pushed f below -f_tol already at u_left: not flat
      }
    }
  });

  std::vector<Scalar> cov(grid_n);
  for (int i = 0; i < grid_n; ++i) cov[i] = grid[i]->cov();

  // local minima on the cyclic grid (s has period pi)
  std::vector<int> minima;
  for (int i = 0; i < grid_n; ++i) {
    const Scalar prev = cov[(i + grid_n - 1) % grid_n];
    const Scalar next = cov[(i + 1) % grid_n];
    if (cov[i] <= prev && cov[i] <= next) minima.push_back(i);
  }

  std::vector<std::optional<HexagonCandidateT<Scalar>>> refined(minima.size());
  parallel_for(minima.size(), [&](std::size_t k) {
    const Scalar s0 = Scalar(minima[k]) * step;
    auto cov_at = [&](Scalar s) { return hexagon_candidate(K, s).cov(); };
    const auto [s_best, c_best] = golden_min<Scalar>(cov_at, s0 - step, s0 + step, 40);
    (void)c_best;
    refined[k] = hexagon_candidate(K, s_best);
  });

  for (int i = 0; i < grid_n; ++i) {
    pool.push_back({*grid[i], cov[i], detail::mod_pi(Scalar(i) * step)});
    if (flat_extra[i])
      pool.push_back({*flat_extra[i], flat_extra[i]->cov(), detail::mod_pi(Scalar(i) * step)});
  }
  for (const auto& r : refined)
    if (r) pool.push_back({*r, r->cov(), detail::mod_pi(r->s)});

  std::sort(pool.begin(), pool.end(),
            [](const auto& a, const auto& b) { return a.cov < b.cov; });

  // smallest admissible covolume; candidates are admissible in exact
  // arithmetic, the filter only guards against solver residue
  Scalar delta = pool.front().cov;
  for (const auto& sc : pool) {
    if (is_admissible(sc.cand.lattice, K)) {
      delta = sc.cov;
      break;
    }
  }

  std::vector<detail::ScoredCandidate<Scalar>> mins;
  for (const auto& sc : pool)
    if (sc.cov <= delta + refine_tol && is_admissible(sc.cand.lattice, K)) mins.push_back(sc);
  std::sort(mins.begin(), mins.end(),
            [](const auto& a, const auto& b) { return a.s_mod < b.s_mod; });

  // pass 1: contiguous parameter runs
  struct Cluster {
    std::vector<const detail::ScoredCandidate<Scalar>*> members;
    Scalar s_min, s_max;
  };
  std::vector<Cluster> clusters;
  const Scalar merge_gap = Scalar(2) * step;
  for (const auto& sc : mins) {
    if (!clusters.empty() && sc.s_mod - clusters.back().s_max <= merge_gap) {
      clusters.back().members.push_back(&sc);
      clusters.back().s_max = sc.s_mod;
    } else {
      clusters.push_back({{&sc}, sc.s_mod, sc.s_mod});
    }
  }
  if (clusters.size() > 1) {
    // cyclic wrap between the last run and the first
    const Scalar wrap = clusters.front().s_min + pi_v<Scalar> - clusters.back().s_max;
    if (wrap <= merge_gap) {
      for (auto* m : clusters.back().members) clusters.front().members.push_back(m);
      clusters.front().s_min = clusters.back().s_min - pi_v<Scalar>;
      clusters.pop_back();
    }
  }

  // pass 2: merge clusters whose representatives generate the same lattice
  std::vector<MinimizerClusterT<Scalar>> merged;
  auto best_of = [](const Cluster& c) {
    const detail::ScoredCandidate<Scalar>* best = c.members.front();
    for (const auto* m : c.members)
      if (m->cov < best->cov) best = m;
    return best;
  };
  std::vector<char> taken(clusters.size(), 0);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (taken[i]) continue;
    const auto* rep = best_of(clusters[i]);
    MinimizerClusterT<Scalar> out{rep->cand, static_cast<int>(clusters[i].members.size()),
                                  clusters[i].s_min, clusters[i].s_max};
    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
      if (taken[j]) continue;
      const auto* other = best_of(clusters[j]);
      if (same_lattice(rep->cand.lattice, other->cand.lattice, Scalar(1e-6))) {
        out.member_count += static_cast<int>(clusters[j].members.size());
        taken[j] = 1;
      }
    }
    merged.push_back(std::move(out));
  }

  CriticalReportT<Scalar> report;
  report.delta_est = delta;
  report.clusters = std::move(merged);
  report.grid_n = grid_n;
  report.refine_tol = refine_tol;
  report.parallelogram_warning = is_parallelogram(K);
  report.domain_area = area(K);
  return report;
}

/// One point of the critical-locus parameterization phi(t) = [p(t) q(t)]Z^2.
template <class Scalar>
struct LocusPointT {
  Scalar t;
  Vec2<Scalar> p, q;
  Lattice2T<Scalar> lattice;
};

using LocusPoint = LocusPointT<double>;

/// The arc of the boundary between two consecutive points of one chosen
/// critical lattice; p(t) walks it and q(t) is the next critical-lattice
/// point counter-clockwise. Discs use the closed form (the canonical
/// hexagonal basis rotated by t*pi/3).
template <class Scalar>
struct LocusArcT {
  ConvexDomainT<Scalar> domain;
  Scalar theta0 = 0, theta1 = 0;
  bool disc_fast = false;
  Scalar radius = 1;
};

using LocusArc = LocusArcT<double>;

template <class Scalar>
LocusArcT<Scalar> make_locus_arc(const ConvexDomainT<Scalar>& K) {
  LocusArcT<Scalar> arc;
  arc.domain = K;
  if (const auto* d = std::get_if<typename ConvexDomainT<Scalar>::Disc>(&K.shape)) {
    arc.disc_fast = true;
    arc.radius = d->radius;
    arc.theta0 = Scalar(0);
    arc.theta1 = pi_v<Scalar> / Scalar(3);
    return arc;
  }
  if (is_parallelogram(K))
    throw NotIrreducibleError("locus of a parallelogram is not an embedded circle");
  const auto report = critical_search(K);
  if (report.clusters.empty()) throw BracketFailureError("no critical lattice found");
  const auto pts = candidate_boundary_points(report.clusters.front().representative);
  // start at the smallest nonnegative angle; its successor is also in
  // [0, pi), so the arc and its antipode never wrap past a full turn
  std::vector<Scalar> upper;
  for (const auto& w : pts) {
    const Scalar th = std::atan2(w.y(), w.x());
    if (th >= Scalar(0) && th < pi_v<Scalar>) upper.push_back(th);
  }
  std::sort(upper.begin(), upper.end());
  if (upper.size() < 2) throw BracketFailureError("degenerate critical hexagon");
  arc.theta0 = upper[0];
  arc.theta1 = upper[1];
  return arc;
}

template <class Scalar>
LocusPointT<Scalar> locus_point(const LocusArcT<Scalar>& arc, Scalar t) {
  if (arc.disc_fast) {
    const Scalar tau = t * pi_v<Scalar> / Scalar(3);
    const Scalar tau_q = tau + pi_v<Scalar> / Scalar(3);
    const Vec2<Scalar> p = arc.radius * Vec2<Scalar>(std::cos(tau), std::sin(tau));
    const Vec2<Scalar> q = arc.radius * Vec2<Scalar>(std::cos(tau_q), std::sin(tau_q));
    return LocusPointT<Scalar>{t, p, q, Lattice2T<Scalar>(p, q)};
  }
  const Scalar s = arc.theta0 + t * (arc.theta1 - arc.theta0);
  const Vec2<Scalar> p = boundary_point(arc.domain, s);
  const Scalar u = solve_companion(arc.domain, s);
  const Vec2<Scalar> q = p + boundary_point(arc.domain, u);
  return LocusPointT<Scalar>{t, p, q, Lattice2T<Scalar>(p, q)};
}

/// Sample the locus parameterization on a uniform t-grid. With
/// check_irreducible set, a flat companion interval anywhere on the arc
/// raises NotIrreducible instead of silently returning one branch.
template <class Scalar>
std::vector<LocusPointT<Scalar>> locus_parameterize(const ConvexDomainT<Scalar>& K,
                                                    int n_samples,
                                                    bool check_irreducible = true) {
  if (n_samples < 1) throw InvalidDomainError("locus needs at least one sample");
  const LocusArcT<Scalar> arc = make_locus_arc(K);
  std::vector<LocusPointT<Scalar>> out(static_cast<std::size_t>(n_samples) + 1,
                                       LocusPointT<Scalar>{0, {}, {}, Lattice2T<Scalar>::integers()});
  std::vector<Scalar> flat(out.size(), Scalar(0));
  parallel_for(out.size(), [&](std::size_t j) {
    const Scalar t = Scalar(j) / Scalar(n_samples);
    out[j] = locus_point(arc, t);
    if (check_irreducible && !arc.disc_fast) {
      const Scalar s = arc.theta0 + t * (arc.theta1 - arc.theta0);
      flat[j] = companion_flat_width(arc.domain, s);
    }
  });
  for (std::size_t j = 0; j < flat.size(); ++j)
    if (flat[j] > Scalar(1e-4))
      throw NotIrreducibleError("companion is non-unique at t=" +
                                std::to_string(double(out[j].t)));
  return out;
}

/// Critical loci transform equivariantly under GL2: delta scales by |det g|
/// and minimizer lattices map to minimizer lattices of the image domain.
template <class Scalar>
bool equivariance_check(const ConvexDomainT<Scalar>& K, const Mat2<Scalar>& g,
                        int grid_n = 360, Scalar tol = Scalar(1e-6)) {
  const auto base_report = critical_search(K, grid_n);
  const ConvexDomainT<Scalar> KG = ConvexDomainT<Scalar>::affine(g, K);
  const auto image_report = critical_search(KG, grid_n);
  const Scalar scale = std::abs(g.determinant());
  const Scalar expect = scale * base_report.delta_est;
  if (std::abs(image_report.delta_est - expect) > tol * std::max(Scalar(1), expect))
    return false;
  for (const auto& m : base_report.minimizers()) {
    const Lattice2T<Scalar> mapped = transform(g, m.lattice);
    if (!is_admissible(mapped, KG)) return false;
    if (std::abs(covolume(mapped) - scale * m.cov()) >
        Scalar(1e-9) * std::max(Scalar(1), scale * m.cov()))
      return false;
  }
  return true;
}

}  // namespace critlocus
