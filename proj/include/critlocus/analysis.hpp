#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "critlocus/base.hpp"
#include "critlocus/construct.hpp"
#include "critlocus/lattice.hpp"
#include "critlocus/numeric.hpp"

namespace critlocus {

/// Box-counting record: N(eps_k) against eps_k, with the least-squares
/// slope of log N over log(1/eps). The two coarsest scales are left out of
/// the fit; they bias small-depth estimates.
template <class Scalar>
struct BoxCountSeriesT {
  std::vector<Scalar> scales;
  std::vector<long long> counts;
  Scalar slope = 0;
  Scalar r2 = 1;
};

using BoxCountSeries = BoxCountSeriesT<double>;

namespace detail {

inline void fit_box_series(BoxCountSeriesT<double>& s, std::size_t drop_coarsest = 2) {
  std::vector<double> xs, ys;
  std::size_t skip = s.scales.size() >= drop_coarsest + 2 ? drop_coarsest : 0;
  for (std::size_t i = skip; i < s.scales.size(); ++i) {
    xs.push_back(std::log(1.0 / s.scales[i]));
    ys.push_back(std::log(double(s.counts[i])));
  }
  const LineFit fit = fit_line(xs, ys);
  s.slope = fit.slope;
  s.r2 = fit.r2;
}

// Count grid cells of size eps = 1/m hit by Q: a cell counts when it meets
// a retained interval in positive length, or contains an isolated point.
// The snap tolerance absorbs rounding of interval endpoints that are exact
// rationals, keeping counts exact for ternary constructions.
template <class Scalar>
long long count_cells(const ClosedSet01T<Scalar>& Q, long long m) {
  const double snap = 1e-9;
  long long count = 0;
  long long last = -1;  // last counted cell index
  auto count_range = [&](long long lo, long long hi) {
    lo = std::max(lo, last + 1);
    if (hi < lo) return;
    count += hi - lo + 1;
    last = hi;
  };
  for (const auto& iv : Q.intervals()) {
    const double x = double(iv.lo) * double(m);
    const double y = double(iv.hi) * double(m);
    if (iv.hi > iv.lo) {
      auto j_lo = static_cast<long long>(std::floor(x + snap));
      auto j_hi = static_cast<long long>(std::ceil(y - snap)) - 1;
      j_lo = std::clamp(j_lo, 0LL, m - 1);
      j_hi = std::clamp(j_hi, 0LL, m - 1);
      if (j_lo > j_hi) j_lo = j_hi;  // interval narrower than the snap window
      count_range(j_lo, j_hi);
    } else {
      const auto j = std::clamp(static_cast<long long>(std::floor(x + snap)), 0LL, m - 1);
      count_range(j, j);
    }
  }
  return count;
}

template <class Scalar>
void check_resolution(const ClosedSet01T<Scalar>& Q, Scalar eps_min) {
  if (Q.gaps.empty()) return;
  const Scalar w = Q.min_interval_width();
  if (std::isfinite(double(w)) && eps_min < w * (Scalar(1) - Scalar(1e-9)))
    throw ResolutionExceededError(
        "box size below the narrowest retained interval of the approximation");
}

}  // namespace detail

/// Boxes of size 3^-k meeting Q, k = 1..k_max, plus the fitted dimension.
/// Counts are exact for middle-third constructions: N(3^-k) = 2^k.
template <class Scalar>
BoxCountSeriesT<Scalar> box_dimension_param(const ClosedSet01T<Scalar>& Q, int k_max) {
  if (k_max < 1) throw InvalidDomainError("k_max must be positive");
  if (k_max > 30) throw InvalidDomainError("k_max too large for exact ternary scales");
  long long m = 1;
  for (int k = 0; k < k_max; ++k) m *= 3;
  detail::check_resolution(Q, Scalar(1) / Scalar(m));

  BoxCountSeriesT<Scalar> series;
  m = 1;
  for (int k = 1; k <= k_max; ++k) {
    m *= 3;
    series.scales.push_back(Scalar(1) / Scalar(m));
    series.counts.push_back(detail::count_cells(Q, m));
  }
  BoxCountSeriesT<double> tmp{std::vector<double>(series.scales.begin(), series.scales.end()),
                              series.counts, 0, 1};
  detail::fit_box_series(tmp);
  series.slope = Scalar(tmp.slope);
  series.r2 = Scalar(tmp.r2);
  return series;
}

/// Canonical coordinates of a lattice in R^4: Gauss-reduced basis with
/// w1 in the closed upper half-plane (x >= 0 on the axis) and positive
/// orientation. Lattice-invariant away from reduction ties.
template <class Scalar>
Vec4<Scalar> embed_lattice(const Lattice2T<Scalar>& L) {
  const Lattice2T<Scalar> W = reduce(L);
  Vec2<Scalar> u = W.v1, v = W.v2;
  if (u.y() < Scalar(0) || (u.y() == Scalar(0) && u.x() < Scalar(0))) u = -u;
  if (cross2(u, v) < Scalar(0)) v = -v;
  Vec4<Scalar> out;
  out << u.x(), u.y(), v.x(), v.y();
  return out;
}

/// Sample points of Q at the given resolution: every maximal interval is
/// walked with step 1/n_samples and both endpoints are kept; isolated
/// points contribute themselves.
template <class Scalar>
std::vector<Scalar> sample_parameter_set(const ClosedSet01T<Scalar>& Q, int n_samples) {
  const Scalar h = Scalar(1) / Scalar(n_samples);
  std::vector<Scalar> ts;
  for (const auto& iv : Q.intervals()) {
    if (iv.hi > iv.lo) {
      for (Scalar t = iv.lo; t < iv.hi; t += h) ts.push_back(t);
      ts.push_back(iv.hi);
    } else {
      ts.push_back(iv.lo);
    }
  }
  return ts;
}

/// Box counts of the embedded locus phi(Q) in R^4 at dyadic scales 2^-k.
/// The embedding is bi-Lipschitz on the arc, so the slope tracks the
/// parameter-space dimension of Q.
template <class Scalar>
BoxCountSeriesT<Scalar> box_dimension_locus(const CompositeDomainT<Scalar>& K,
                                            const ClosedSet01T<Scalar>& Q, int n_samples,
                                            int k_max) {
  if (k_max < 1 || k_max > 40) throw InvalidDomainError("k_max out of range");
  if (n_samples < 1) throw InvalidDomainError("n_samples must be positive");
  // boxes below the sample spacing undercount: the sample set, not the
  // locus, would be measured; isolated points are sampled exactly
  if (std::isfinite(double(Q.min_interval_width())) &&
      std::ldexp(1.0, -k_max) < 1.0 / double(n_samples))
    throw ResolutionExceededError("dyadic box size below the sampling resolution");

  const std::vector<Scalar> ts = sample_parameter_set(Q, n_samples);
  std::vector<Vec4<Scalar>> pts;
  pts.reserve(ts.size());
  for (const Scalar t : ts) pts.push_back(embed_lattice(K.phi(t).lattice));

  Vec4<Scalar> lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Scalar diameter = (hi - lo).norm();

  BoxCountSeriesT<Scalar> series;
  for (int k = 1; k <= k_max; ++k) {
    const Scalar eps = Scalar(std::ldexp(1.0, -k));
    std::vector<std::array<std::int64_t, 4>> cells;
    cells.reserve(pts.size());
    for (const auto& p : pts) {
      std::array<std::int64_t, 4> cell;
      for (int i = 0; i < 4; ++i)
        cell[i] = static_cast<std::int64_t>(std::floor((p[i] - lo[i]) / eps));
      cells.push_back(cell);
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    series.scales.push_back(eps);
    series.counts.push_back(static_cast<long long>(cells.size()));
  }
  // scales comparable to the diameter see an arc, not the set inside it;
  // fit only boxes a solid factor below, never fewer than two dropped
  std::size_t drop = 2;
  for (std::size_t i = 0; i < series.scales.size(); ++i)
    if (series.scales[i] > diameter / Scalar(32)) drop = std::max(drop, i + 1);
  BoxCountSeriesT<double> tmp{std::vector<double>(series.scales.begin(), series.scales.end()),
                              series.counts, 0, 1};
  detail::fit_box_series(tmp, drop);
  series.slope = Scalar(tmp.slope);
  series.r2 = Scalar(tmp.r2);
  return series;
}

}  // namespace critlocus
