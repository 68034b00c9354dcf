#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace critlocus {

template <class Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <class Scalar>
using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <class Scalar>
using Vec4 = Eigen::Matrix<Scalar, 4, 1>;

template <class Scalar>
inline Scalar cross2(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Rotate a vector by +90 degrees (counter-clockwise).
template <class Scalar>
inline Vec2<Scalar> perp(const Vec2<Scalar>& a) {
  return Vec2<Scalar>(-a.y(), a.x());
}

template <class Scalar>
inline Mat2<Scalar> rotation(Scalar angle) {
  const Scalar c = std::cos(angle), s = std::sin(angle);
  Mat2<Scalar> r;
  r << c, -s, s, c;
  return r;
}

template <class Scalar>
inline constexpr Scalar pi_v = Scalar(3.141592653589793238462643383279502884L);

/// Normalize an angle into [0, 2*pi).
template <class Scalar>
inline Scalar wrap_angle(Scalar theta) {
  const Scalar two_pi = Scalar(2) * pi_v<Scalar>;
  Scalar t = std::fmod(theta, two_pi);
  if (t < Scalar(0)) t += two_pi;
  if (t >= two_pi) t = Scalar(0);
  return t;
}

// Every failure mode carries a stable kind tag so callers (and the CLI)
// can name the error case without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

struct CornerPointError : Error {
  explicit CornerPointError(const std::string& w) : Error("CornerPoint", w) {}
};

struct EnumerationTooLargeError : Error {
  explicit EnumerationTooLargeError(const std::string& w) : Error("EnumerationTooLarge", w) {}
};

struct BracketFailureError : Error {
  explicit BracketFailureError(const std::string& w) : Error("BracketFailure", w) {}
};

struct NotIrreducibleError : Error {
  explicit NotIrreducibleError(const std::string& w) : Error("NotIrreducible", w) {}
};

struct TangentIntersectionUnstableError : Error {
  explicit TangentIntersectionUnstableError(const std::string& w)
      : Error("TangentIntersectionUnstable", w) {}
};

struct NonConvexResultError : Error {
  explicit NonConvexResultError(const std::string& w) : Error("NonConvexResult", w) {}
};

struct ResolutionExceededError : Error {
  explicit ResolutionExceededError(const std::string& w) : Error("ResolutionExceeded", w) {}
};

struct InvalidDomainError : Error {
  explicit InvalidDomainError(const std::string& w) : Error("InvalidDomain", w) {}
};

}  // namespace critlocus
