#ifndef VELOTOPO_MODEL_HPP
#define VELOTOPO_MODEL_HPP

#include <velotopo/types.hpp>

#include <cmath>
#include <concepts>
#include <functional>
#include <string>
#include <vector>

namespace velotopo {

/// Parameters of the quantum torus: major radius R, tube radius r and the
/// shift c of the torus along the h_x axis. Requires R > r > 0 and c >= 0.
template <typename Scalar> class TorusParams {
 public:
  static TorusParams create(Scalar R, Scalar r, Scalar c) {
    using std::isfinite;
    if (!isfinite(R) || !isfinite(r) || !isfinite(c))
      throw Error(ErrorKind::InvalidParams, "model parameters must be finite");
    if (!(r > Scalar(0)))
      throw Error(ErrorKind::InvalidParams, "tube radius r must be positive");
    if (!(R > r))
      throw Error(ErrorKind::InvalidParams, "major radius R must exceed r");
    if (c < Scalar(0))
      throw Error(ErrorKind::InvalidParams, "shift c must be non-negative");
    return TorusParams(R, r, c);
  }

  Scalar R() const { return R_; }
  Scalar r() const { return r_; }
  Scalar c() const { return c_; }

  /// Same torus with a different shift; revalidates.
  TorusParams with_c(Scalar c) const { return create(R_, r_, c); }

  bool operator==(const TorusParams&) const = default;

 private:
  TorusParams(Scalar R, Scalar r, Scalar c) : R_(R), r_(r), c_(c) {}
  Scalar R_, r_, c_;
};

using ModelParams = TorusParams<double>;

/// Distance of the tube cross-section point from the torus axis,
/// sqrt(r^2 sin^2 ky + (R + r cos ky)^2).
template <typename Scalar> Scalar r0(Scalar ky, const TorusParams<Scalar>& p) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const Scalar s = p.r() * sin(ky);
  const Scalar t = p.R() + p.r() * cos(ky);
  return sqrt(s * s + t * t);
}

/// d r0 / d ky = -r R sin ky / r0.
template <typename Scalar>
Scalar r0_prime(Scalar ky, const TorusParams<Scalar>& p) {
  using std::sin;
  return -p.r() * p.R() * sin(ky) / r0(ky, p);
}

template <typename Scalar>
HVectorT<Scalar> h(const KPointT<Scalar>& k, const TorusParams<Scalar>& p) {
  using std::cos;
  using std::sin;
  const Scalar rho = r0(k.y(), p);
  return HVectorT<Scalar>(rho * cos(k.x()) + p.c(), rho * sin(k.x()),
                          p.r() * sin(k.y()));
}

/// Band energy E_(+/-) = +/- |h(k)|.
template <typename Scalar>
Scalar energy(const KPointT<Scalar>& k, const TorusParams<Scalar>& p,
              Band band) {
  const Scalar e = h(k, p).norm();
  return band == Band::Upper ? e : -e;
}

template <typename Scalar>
FrameT<Scalar> frame(const KPointT<Scalar>& k, const TorusParams<Scalar>& p) {
  using std::cos;
  using std::sin;
  const Scalar rho = r0(k.y(), p);
  const Scalar drho = r0_prime(k.y(), p);
  const Scalar ckx = cos(k.x());
  const Scalar skx = sin(k.x());
  return {Vector3<Scalar>(-rho * skx, rho * ckx, Scalar(0)),
          Vector3<Scalar>(drho * ckx, drho * skx, p.r() * cos(k.y()))};
}

/// |d_kx x d_ky|; vanishing values mean the k-basis does not map to a basis
/// of the surface tangent plane.
template <typename Scalar>
Scalar frame_regularity(const KPointT<Scalar>& k,
                        const TorusParams<Scalar>& p) {
  const FrameT<Scalar> f = frame(k, p);
  return f.d_kx.cross(f.d_ky).norm();
}

/// A two-band Bloch map: something that yields h(k) and its tangent frame.
template <typename M>
concept TwoBandMap = requires(const M& m, const KPoint& k) {
  { m.h(k) } -> std::convertible_to<HVector>;
  { m.frame(k) } -> std::convertible_to<Frame>;
};

/// The quantum torus as a TwoBandMap.
struct TorusModel {
  ModelParams params;

  HVector h(const KPoint& k) const { return velotopo::h(k, params); }
  Frame frame(const KPoint& k) const { return velotopo::frame(k, params); }
};

/// Type-erased TwoBandMap, so compiled modules can accept arbitrary models.
class AnyTwoBandMap {
 public:
  template <TwoBandMap M>
  explicit AnyTwoBandMap(M map)
      : h_([map](const KPoint& k) { return HVector(map.h(k)); }),
        frame_([map](const KPoint& k) { return Frame(map.frame(k)); }) {}

  HVector h(const KPoint& k) const { return h_(k); }
  Frame frame(const KPoint& k) const { return frame_(k); }

 private:
  std::function<HVector(const KPoint&)> h_;
  std::function<Frame(const KPoint&)> frame_;
};

static_assert(TwoBandMap<TorusModel>);
static_assert(TwoBandMap<AnyTwoBandMap>);

/// One node of a surface/quiver sample: k, h(k) and the band velocity.
struct SurfaceSample {
  KPoint k;
  HVector h;
  Velocity v;
};

/// n x n uniform grid over [-pi, pi)^2, row-major in ky then kx. Velocity is
/// the upper-band field of velocity_closed; gapless nodes carry NaN velocity.
std::vector<SurfaceSample> surface_sample(const ModelParams& p, int n);

/// CSV with header kx,ky,hx,hy,hz,vx,vy and 17 significant digits.
std::string surface_csv(const std::vector<SurfaceSample>& rows);

}  // namespace velotopo

#endif  // VELOTOPO_MODEL_HPP
