#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "critlocus/base.hpp"
#include "critlocus/lattice.hpp"

namespace critlocus {

/// Continued-fraction expansion with convergents p_k/q_k. Terminates early
/// on rational input; precision_exhausted marks a truncation once the
/// denominators outgrow what doubles can certify.
template <class Scalar>
struct CFExpansionT {
  Scalar alpha = 0;
  std::vector<std::int64_t> quotients;
  std::vector<std::pair<std::int64_t, std::int64_t>> convergents;
  bool terminated = false;
  bool precision_exhausted = false;
};

using CFExpansion = CFExpansionT<double>;

template <class Scalar>
CFExpansionT<Scalar> continued_fraction(Scalar alpha, int n_terms) {
  if (n_terms < 1) throw InvalidDomainError("need at least one term");
  if (!std::isfinite(double(alpha))) throw InvalidDomainError("alpha must be finite");
  CFExpansionT<Scalar> cf;
  cf.alpha = alpha;
  const std::int64_t q_reliable = 60'000'000;  // ~1/sqrt(eps): beyond this the
                                               // floor of 1/frac is noise
  std::int64_t p1 = 1, q1 = 0;  // p_{k-1}, q_{k-1}
  std::int64_t p2 = 0, q2 = 1;  // p_{k-2}, q_{k-2}
  Scalar x = alpha;
  for (int k = 0; k < n_terms; ++k) {
    const Scalar fa = std::floor(x);
    if (std::abs(fa) > Scalar(4e15)) {
      cf.precision_exhausted = true;
      break;
    }
    const auto a = static_cast<std::int64_t>(fa);
    // convergent recurrence, with overflow guard
    const Scalar pk_est = std::abs(Scalar(a) * Scalar(p1)) + std::abs(Scalar(p2));
    const Scalar qk_est = std::abs(Scalar(a) * Scalar(q1)) + std::abs(Scalar(q2));
    if (pk_est > Scalar(4e18) || qk_est > Scalar(4e18)) {
      cf.precision_exhausted = true;
      break;
    }
    const std::int64_t pk = a * p1 + p2;
    const std::int64_t qk = a * q1 + q2;
    cf.quotients.push_back(a);
    cf.convergents.emplace_back(pk, qk);
    p2 = p1;
    q2 = q1;
    p1 = pk;
    q1 = qk;
    const Scalar frac = x - fa;
    if (frac <= Scalar(1e-12)) {
      cf.terminated = true;  // rational to machine precision
      break;
    }
    if (qk > q_reliable) {
      if (k + 1 < n_terms) cf.precision_exhausted = true;
      break;
    }
    x = Scalar(1) / frac;
  }
  return cf;
}

template <class Scalar>
struct DirichletResultT {
  bool solvable = false;
  bool has_witness = false;
  std::int64_t p = 0, q = 0;
  Scalar min_dist = std::numeric_limits<Scalar>::infinity();  // min over q of |q alpha - p|
};

using DirichletResult = DirichletResultT<double>;

namespace detail {

template <class Scalar>
std::pair<std::int64_t, Scalar> min_qdist_brute(Scalar alpha, std::int64_t q_max) {
  std::int64_t best_q = 1;
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (std::int64_t q = 1; q <= q_max; ++q) {
    const Scalar d = std::abs(Scalar(q) * alpha - std::nearbyint(Scalar(q) * alpha));
    if (d < best) {
      best = d;
      best_q = q;
    }
  }
  return {best_q, best};
}

// Best approximation: among 1 <= q <= q_max the distance |q alpha - p| is
// minimized at a convergent denominator, so scanning those suffices.
template <class Scalar>
std::pair<std::int64_t, Scalar> min_qdist(Scalar alpha, std::int64_t q_max) {
  const CFExpansionT<Scalar> cf = continued_fraction(alpha, 64);
  std::int64_t best_q = 0;
  Scalar best = std::numeric_limits<Scalar>::infinity();
  bool covered = false;
  for (const auto& [p, q] : cf.convergents) {
    if (q > q_max) {
      covered = true;
      break;
    }
    if (q < 1) continue;  // k = 0 convergent has q = 1; guard all the same
    const Scalar d = std::abs(Scalar(q) * alpha - std::nearbyint(Scalar(q) * alpha));
    if (d < best) {
      best = d;
      best_q = q;
    }
  }
  if (cf.terminated) covered = true;  // exact rational reached
  if (!covered && cf.precision_exhausted && q_max <= 100'000)
    return min_qdist_brute(alpha, q_max);
  if (best_q == 0) return min_qdist_brute(alpha, std::min<std::int64_t>(q_max, 100'000));
  return {best_q, best};
}

}  // namespace detail

/// Solvability of |alpha q - p| <= psi(T), |q| <= T in nonzero integers.
/// The q = 0 column only helps when psi reaches 1 (then p = +-1 works);
/// otherwise the minimum of |q alpha - p| over 1 <= q <= T decides.
template <class Scalar>
DirichletResultT<Scalar> dirichlet_solvable(Scalar alpha, Scalar psi_at_T, Scalar T) {
  if (!(psi_at_T > Scalar(0)) || psi_at_T > Scalar(1))
    throw InvalidDomainError("psi(T) must lie in (0, 1]");
  if (!(T >= Scalar(1))) throw InvalidDomainError("T must be at least 1");
  const auto q_max = static_cast<std::int64_t>(std::floor(T));
  DirichletResultT<Scalar> out;
  const auto [q_best, dist] = detail::min_qdist(alpha, q_max);
  out.min_dist = dist;
  if (dist <= psi_at_T) {
    out.solvable = true;
    out.has_witness = true;
    out.q = q_best;
    out.p = static_cast<std::int64_t>(std::llround(Scalar(q_best) * alpha));
  } else if (psi_at_T >= Scalar(1)) {
    out.solvable = true;
    out.has_witness = true;
    out.p = 1;
    out.q = 0;
  }
  return out;
}

/// One sample of the diagonal-flow trajectory g_t u_alpha Z^2 with
/// g_t = diag(e^t, e^-t) and u_alpha the shear by alpha.
template <class Scalar>
struct FlowSampleT {
  Scalar t;
  Lattice2T<Scalar> lattice;
  Scalar lambda1_sup;        // first minimum in the supremum norm
  Vec2<Scalar> shortest_sup; // a vector attaining it, sign-canonical
};

using FlowSample = FlowSampleT<double>;

/// Shortest nonzero vector in the sup norm, via Euclidean reduction: any
/// sup-norm-b vector has Euclidean norm at most b*sqrt(2).
template <class Scalar>
std::pair<Scalar, Vec2<Scalar>> sup_shortest(const Lattice2T<Scalar>& L) {
  const Lattice2T<Scalar> W = reduce(L);
  const Scalar bound = std::min(W.v1.template lpNorm<Eigen::Infinity>(),
                                W.v2.template lpNorm<Eigen::Infinity>());
  const Scalar R = bound * std::sqrt(Scalar(2)) * (Scalar(1) + Scalar(1e-12));
  Scalar best = bound;
  Vec2<Scalar> arg = W.v1.template lpNorm<Eigen::Infinity>() <= W.v2.template lpNorm<Eigen::Infinity>()
                         ? W.v1
                         : W.v2;
  for (const auto& x : enumerate_nonzero(W, R)) {
    const Scalar s = x.template lpNorm<Eigen::Infinity>();
    if (s < best - Scalar(1e-15) * best) {
      best = s;
      arg = x;
    }
  }
  if (arg.x() < Scalar(0) || (arg.x() == Scalar(0) && arg.y() < Scalar(0))) arg = -arg;
  return {best, arg};
}

template <class Scalar>
Lattice2T<Scalar> flow_lattice(Scalar alpha, Scalar t) {
  const Scalar et = std::exp(t), emt = std::exp(-t);
  return Lattice2T<Scalar>(Vec2<Scalar>(et, 0), Vec2<Scalar>(et * alpha, emt));
}

template <class Scalar>
std::vector<FlowSampleT<Scalar>> flow_trajectory(Scalar alpha, Scalar t_max, Scalar dt) {
  if (!(t_max > Scalar(0)) || !(dt > Scalar(0)))
    throw InvalidDomainError("t_max and dt must be positive");
  std::vector<FlowSampleT<Scalar>> out;
  const auto n = static_cast<std::int64_t>(std::floor(t_max / dt + Scalar(1e-9)));
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (std::int64_t i = 0; i <= n; ++i) {
    const Scalar t = Scalar(i) * dt;
    Lattice2T<Scalar> L = flow_lattice(alpha, t);
    auto [lam, v] = sup_shortest(L);
    out.push_back(FlowSampleT<Scalar>{t, L, lam, v});
  }
  return out;
}

}  // namespace critlocus
