#ifndef VELOTOPO_TYPES_HPP
#define VELOTOPO_TYPES_HPP

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace velotopo {

template <typename Scalar> using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar> using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar> using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// Point of the Brillouin zone, (kx, ky) in radians.
template <typename Scalar> using KPointT = Vector2<Scalar>;
/// Bloch vector h(k), the Hamiltonian being h . sigma.
template <typename Scalar> using HVectorT = Vector3<Scalar>;
/// Band velocity (dE/dkx, dE/dky), hbar = 1.
template <typename Scalar> using VelocityT = Vector2<Scalar>;
/// Jacobian of the velocity field, m(i, j) = d v_i / d k_j.
template <typename Scalar> using Jacobian2T = Matrix2<Scalar>;

using KPoint = KPointT<double>;
using HVector = HVectorT<double>;
using Velocity = VelocityT<double>;
using Jacobian2 = Jacobian2T<double>;

/// Tangent frame of the surface k -> h(k).
template <typename Scalar> struct FrameT {
  Vector3<Scalar> d_kx;
  Vector3<Scalar> d_ky;
};
using Frame = FrameT<double>;

enum class Band { Upper, Lower };

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle into the half-open interval [-pi, pi).
template <typename Scalar> Scalar wrap_angle(Scalar k) {
  using std::floor;
  const Scalar two_pi = Scalar(kTwoPi);
  Scalar w = k - two_pi * floor((k + Scalar(kPi)) / two_pi);
  if (w >= Scalar(kPi)) w -= two_pi;
  if (w < -Scalar(kPi)) w = -Scalar(kPi);
  return w;
}

/// Canonical representative of k in the fundamental domain [-pi, pi)^2.
template <typename Scalar> KPointT<Scalar> canonical(const KPointT<Scalar>& k) {
  return KPointT<Scalar>(wrap_angle(k.x()), wrap_angle(k.y()));
}

/// Euclidean distance between two points on the flat BZ torus.
template <typename Scalar>
Scalar torus_distance(const KPointT<Scalar>& a, const KPointT<Scalar>& b) {
  using std::abs;
  using std::hypot;
  const Scalar dx = abs(wrap_angle(a.x() - b.x()));
  const Scalar dy = abs(wrap_angle(a.y() - b.y()));
  return hypot(dx, dy);
}

enum class ErrorKind {
  InvalidParams,
  InvalidArgument,
  GaplessPoint,
  GaplessModel,
  DegenerateField,
  DegenerateZero,
  NonIsolatedZero,
  NonIntegralSum,
  DegenerateTriangle,
  ZeroOnLoop,
  InsufficientSampling,
  Io,
};

inline const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers can map it
/// to an exit code or a sweep-cell tag.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::GaplessPoint: return "GaplessPoint";
    case ErrorKind::GaplessModel: return "GaplessModel";
    case ErrorKind::DegenerateField: return "DegenerateField";
    case ErrorKind::DegenerateZero: return "DegenerateZero";
    case ErrorKind::NonIsolatedZero: return "NonIsolatedZero";
    case ErrorKind::NonIntegralSum: return "NonIntegralSum";
    case ErrorKind::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorKind::ZeroOnLoop: return "ZeroOnLoop";
    case ErrorKind::InsufficientSampling: return "InsufficientSampling";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// True for errors that mean the model itself violates a hypothesis
/// (closed gap, degenerate field) rather than a bad request.
inline bool is_domain_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::GaplessPoint:
    case ErrorKind::GaplessModel:
    case ErrorKind::DegenerateField:
    case ErrorKind::DegenerateZero:
    case ErrorKind::NonIsolatedZero:
    case ErrorKind::NonIntegralSum:
    case ErrorKind::DegenerateTriangle:
    case ErrorKind::ZeroOnLoop:
    case ErrorKind::InsufficientSampling:
      return true;
    default:
      return false;
  }
}

}  // namespace velotopo

#endif  // VELOTOPO_TYPES_HPP
