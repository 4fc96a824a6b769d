#ifndef VELOTOPO_FIELD_HPP
#define VELOTOPO_FIELD_HPP

#include <velotopo/model.hpp>

#include <cmath>
#include <string>

namespace velotopo {

/// Below this |h| a point is treated as gapless.
inline constexpr double kDefaultGapEps = 1e-9;
/// Default central-difference step for velocity Jacobians.
inline constexpr double kDefaultJacobianStep = 1e-5;

namespace detail {
template <typename Scalar>
[[noreturn]] void throw_gapless(const KPointT<Scalar>& k, Scalar norm) {
  throw Error(ErrorKind::GaplessPoint,
              "|h| = " + std::to_string(static_cast<double>(norm)) +
                  " at k = (" + std::to_string(static_cast<double>(k.x())) +
                  ", " + std::to_string(static_cast<double>(k.y())) + ")");
}
}  // namespace detail

/// Closed-form gradient of |h| for the torus:
///   vx = -r0 c sin kx / |h|
///   vy = -(r R / |h|) (1 + (c / r0) cos kx - (r / R) cos ky) sin ky
/// This is the upper-band field; see velocity_band for the lower band.
template <typename Scalar>
VelocityT<Scalar> velocity_closed(const KPointT<Scalar>& k,
                                  const TorusParams<Scalar>& p,
                                  Scalar gap_eps = Scalar(kDefaultGapEps)) {
  using std::cos;
  using std::sin;
  const Scalar norm = h(k, p).norm();
  if (!(norm > gap_eps)) detail::throw_gapless(k, norm);
  const Scalar rho = r0(k.y(), p);
  const Scalar vx = -rho * p.c() * sin(k.x()) / norm;
  const Scalar vy = -(p.r() * p.R() / norm) *
                    (Scalar(1) + (p.c() / rho) * cos(k.x()) -
                     (p.r() / p.R()) * cos(k.y())) *
                    sin(k.y());
  return VelocityT<Scalar>(vx, vy);
}

/// v_i = h_hat . dh/dk_i for any two-band map.
template <TwoBandMap M>
Velocity velocity_generic(const KPoint& k, const M& map,
                          double gap_eps = kDefaultGapEps) {
  const HVector hv = map.h(k);
  const double norm = hv.norm();
  if (!(norm > gap_eps)) detail::throw_gapless(k, norm);
  const HVector unit = hv / norm;
  const Frame f = map.frame(k);
  return Velocity(unit.dot(f.d_kx), unit.dot(f.d_ky));
}

template <typename Scalar>
VelocityT<Scalar> velocity_generic(const KPointT<Scalar>& k,
                                   const TorusParams<Scalar>& p,
                                   Scalar gap_eps = Scalar(kDefaultGapEps)) {
  const HVectorT<Scalar> hv = h(k, p);
  const Scalar norm = hv.norm();
  if (!(norm > gap_eps)) detail::throw_gapless(k, norm);
  const FrameT<Scalar> f = frame(k, p);
  return VelocityT<Scalar>(hv.dot(f.d_kx) / norm, hv.dot(f.d_ky) / norm);
}

/// Velocity of a chosen band. E_- = -E_+, so the lower band is the negated
/// field; zeros and Poincare indexes coincide between bands.
template <typename Scalar>
VelocityT<Scalar> velocity_band(const KPointT<Scalar>& k,
                                const TorusParams<Scalar>& p, Band band,
                                Scalar gap_eps = Scalar(kDefaultGapEps)) {
  const VelocityT<Scalar> v = velocity_closed(k, p, gap_eps);
  return band == Band::Upper ? v : VelocityT<Scalar>(-v);
}

/// Central-difference Jacobian of an arbitrary planar field.
template <typename Field>
Jacobian2 jacobian_fd(const Field& field, const KPoint& k,
                      double step = kDefaultJacobianStep) {
  Jacobian2 m;
  for (int j = 0; j < 2; ++j) {
    KPoint plus = k;
    KPoint minus = k;
    plus(j) += step;
    minus(j) -= step;
    m.col(j) = (field(plus) - field(minus)) / (2.0 * step);
  }
  return m;
}

/// Jacobian of the torus field (velocity_closed). Throws GaplessPoint if k or
/// any stencil point is gapless.
template <typename Scalar>
Jacobian2T<Scalar> jacobian(const KPointT<Scalar>& k,
                            const TorusParams<Scalar>& p,
                            Scalar step = Scalar(kDefaultJacobianStep),
                            Band band = Band::Upper) {
  velocity_closed(k, p);
  Jacobian2T<Scalar> m;
  for (int j = 0; j < 2; ++j) {
    KPointT<Scalar> plus = k;
    KPointT<Scalar> minus = k;
    plus(j) += step;
    minus(j) -= step;
    m.col(j) = (velocity_band(plus, p, band) - velocity_band(minus, p, band)) /
               (Scalar(2) * step);
  }
  return m;
}

}  // namespace velotopo

#endif  // VELOTOPO_FIELD_HPP
