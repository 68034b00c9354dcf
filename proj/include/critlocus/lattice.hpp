#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "critlocus/base.hpp"
#include "critlocus/geometry.hpp"

namespace critlocus {

/// Rank-2 lattice v1*Z + v2*Z. The basis is not canonical; covolume and
/// membership are basis-independent.
template <class Scalar>
struct Lattice2T {
  Vec2<Scalar> v1, v2;

  Lattice2T(const Vec2<Scalar>& a, const Vec2<Scalar>& b) : v1(a), v2(b) {
    if (std::abs(cross2(v1, v2)) <= Scalar(1e-12))
      throw InvalidDomainError("lattice basis is degenerate");
  }

  static Lattice2T integers() {
    return Lattice2T(Vec2<Scalar>(1, 0), Vec2<Scalar>(0, 1));
  }

  Mat2<Scalar> basis() const {
    Mat2<Scalar> b;
    b.col(0) = v1;
    b.col(1) = v2;
    return b;
  }

  Vec2<Scalar> point(std::int64_t m, std::int64_t n) const {
    return Scalar(m) * v1 + Scalar(n) * v2;
  }
};

using Lattice2 = Lattice2T<double>;

template <class Scalar>
Scalar covolume(const Lattice2T<Scalar>& L) {
  return std::abs(cross2(L.v1, L.v2));
}

template <class Scalar>
Lattice2T<Scalar> transform(const Mat2<Scalar>& g, const Lattice2T<Scalar>& L) {
  return Lattice2T<Scalar>(g * L.v1, g * L.v2);
}

/// Gauss-Lagrange reduction. Returns a basis of the same lattice with
/// |w1| <= |w2| <= |w2 +- w1|; w1 is then a shortest nonzero vector.
/// A relative margin guards the size-reduction step against oscillating on
/// exact ties (hexagonal lattices sit on one).
template <class Scalar>
Lattice2T<Scalar> reduce(const Lattice2T<Scalar>& L) {
  // all comparisons carry a relative margin so exact ties (hexagonal bases,
  // unit squares) keep the input order instead of flipping on rounding noise
  const Scalar margin = Scalar(1e-12);
  Vec2<Scalar> a = L.v1, b = L.v2;
  Scalar na = a.squaredNorm(), nb = b.squaredNorm();
  for (int guard = 0; guard < 256; ++guard) {
    if (na > nb * (Scalar(1) + margin)) {
      std::swap(a, b);
      std::swap(na, nb);
    }
    const Scalar mu = std::round(a.dot(b) / na);
    if (mu == Scalar(0)) break;
    const Vec2<Scalar> cand = b - mu * a;
    const Scalar nc = cand.squaredNorm();
    if (nc >= nb * (Scalar(1) - margin)) break;  // tie or no progress
    b = cand;
    nb = nc;
  }
  if (na > nb * (Scalar(1) + margin)) std::swap(a, b);
  return Lattice2T<Scalar>(a, b);
}

/// All nonzero lattice points with Euclidean norm <= R (once each).
/// Coefficient bounds come from the reduced basis: the component of
/// m*w1 + n*w2 orthogonal to w2 is m * covol / |w2|, and symmetrically.
template <class Scalar>
std::vector<Vec2<Scalar>> enumerate_nonzero(const Lattice2T<Scalar>& L, Scalar R,
                                            std::int64_t cap = 10'000'000) {
  const Lattice2T<Scalar> W = reduce(L);
  const Scalar covol = covolume(W);
  const Scalar n1 = W.v1.norm(), n2 = W.v2.norm();
  const auto m_max = static_cast<std::int64_t>(std::ceil(R * n2 / covol)) + 1;
  const auto n_max = static_cast<std::int64_t>(std::ceil(R * n1 / covol)) + 1;
  const std::int64_t predicted = (2 * m_max + 1) * (2 * n_max + 1);
  if (predicted > cap)
    throw EnumerationTooLargeError("predicted " + std::to_string(predicted) +
                                   " candidates exceeds cap " + std::to_string(cap));
  std::vector<Vec2<Scalar>> out;
  const Scalar r2 = R * R * (Scalar(1) + Scalar(1e-12));
  for (std::int64_t m = -m_max; m <= m_max; ++m) {
    for (std::int64_t n = -n_max; n <= n_max; ++n) {
      if (m == 0 && n == 0) continue;
      const Vec2<Scalar> x = W.point(m, n);
      if (x.squaredNorm() <= r2) out.push_back(x);
    }
  }
  return out;
}

template <class Scalar>
struct LatticePointT {
  std::int64_t m, n;  // coefficients in the lattice's own basis
  Vec2<Scalar> x;
};

/// Like enumerate_nonzero, with coefficients relative to L's given basis.
template <class Scalar>
std::vector<LatticePointT<Scalar>> enumerate_nonzero_indexed(const Lattice2T<Scalar>& L,
                                                             Scalar R,
                                                             std::int64_t cap = 10'000'000) {
  const Mat2<Scalar> inv = L.basis().inverse();
  std::vector<LatticePointT<Scalar>> out;
  for (const auto& x : enumerate_nonzero(L, R, cap)) {
    const Vec2<Scalar> c = inv * x;
    out.push_back({static_cast<std::int64_t>(std::llround(c.x())),
                   static_cast<std::int64_t>(std::llround(c.y())), x});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.m != b.m ? a.m < b.m : a.n < b.n;
  });
  return out;
}

/// K-admissibility: no nonzero lattice point interior to K. Points inside
/// the boundary tolerance band count as boundary and are allowed.
template <class Scalar>
bool is_admissible(const Lattice2T<Scalar>& L, const ConvexDomainT<Scalar>& K) {
  const Scalar R = enclosing_radius(K) * (Scalar(1) + Scalar(1e-9));
  const Lattice2T<Scalar> W = reduce(L);
  if (W.v1.norm() > R) return true;  // shortest vector already outside
  for (const auto& x : enumerate_nonzero(W, R))
    if (classify(K, x) == Region::Interior) return false;
  return true;
}

/// Whether two bases generate the same lattice: the change of basis must be
/// integer with determinant +-1.
template <class Scalar>
bool same_lattice(const Lattice2T<Scalar>& A, const Lattice2T<Scalar>& B,
                  Scalar tol = Scalar(1e-6)) {
  const Mat2<Scalar> X = A.basis().inverse() * B.basis();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (std::abs(X(i, j) - std::round(X(i, j))) > tol) return false;
  return std::abs(std::abs(X.determinant()) - Scalar(1)) <= tol;
}

}  // namespace critlocus
