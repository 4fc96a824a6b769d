#ifndef VELOTOPO_ZEROMODE_HPP
#define VELOTOPO_ZEROMODE_HPP

#include <velotopo/field.hpp>
#include <velotopo/model.hpp>

#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

namespace velotopo {

/// Small exact rational used for boundary weights and index sums.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t n, std::int64_t d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const std::int64_t g = std::gcd(n, d);
    return g == 0 ? Rational{0, 1} : Rational{n / g, d / g};
  }

  bool is_integer() const { return den == 1; }
  double to_double() const { return static_cast<double>(num) / den; }

  friend Rational operator+(Rational a, Rational b) {
    return make(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(std::int64_t s, Rational a) {
    return make(s * a.num, a.den);
  }
  bool operator==(const Rational&) const = default;
};

enum class ZeroKind { Sink, Source, Saddle };
const char* to_string(ZeroKind kind);

enum class WeightMode {
  /// Representatives in the closed square [-pi, pi]^2; edge points count 1/2,
  /// corners 1/4.
  ClosedBZWeights,
  /// One representative per zero in [-pi, pi)^2, each with weight 1.
  CanonicalCell,
};
const char* to_string(WeightMode mode);

struct ZeroMode {
  KPoint location;
  Jacobian2 jac;
  double det = 0;
  double trace = 0;
  int index = 0;
  ZeroKind kind = ZeroKind::Sink;
  Rational weight{1, 1};
  double residual = 0;  // |v(location)|
};

struct ZeroModeConfig {
  int seeds_per_axis = 64;
  double tol = 1e-12;
  int max_iterations = 50;
  double damping = 0.5;
  double dedup_radius = 1e-6;
  double isolation_radius = 1e-3;
  double det_eps = 1e-8;
  double jacobian_step = kDefaultJacobianStep;
  /// Minimum |h| over the BZ below which the model is rejected as gapless.
  double gap_eps = 1e-6;
  /// Shift c at or below which v_x vanishes identically.
  double degenerate_c = 1e-9;
  /// Which band's gradient field is analysed. The upper band is the field
  /// written in closed form; the lower band swaps sinks and sources.
  Band band = Band::Upper;
  WeightMode weight_mode = WeightMode::ClosedBZWeights;
};

/// A planar vector field on the BZ torus, 2 pi periodic in both arguments.
using PlanarField = std::function<Velocity(const KPoint&)>;

/// Sign rule of the Poincare index: +1 for det > 0, -1 for det < 0.
/// Throws DegenerateZero when |det| <= det_eps.
int index_of(double det, double det_eps = 1e-8);
int index_of(const ZeroMode& z, double det_eps = 1e-8);

/// Sink (det > 0, trace < 0), Source (det > 0, trace > 0) or Saddle (det < 0).
ZeroKind classify(const Jacobian2& j, double det_eps = 1e-8);

/// Boundary weight of a point of the closed square: 1, 1/2 or 1/4.
Rational boundary_weight(const KPoint& k, double tol);

/// Newton search for all isolated zeros of a periodic planar field. Returns
/// canonical representatives in [-pi, pi)^2, sorted by (kx, ky), each with
/// weight 1.
std::vector<ZeroMode> find_field_zeros(const PlanarField& field,
                                       const ZeroModeConfig& cfg = {});

/// Expands canonical representatives into closed-BZ representatives carrying
/// fractional weights (a corner zero appears four times with weight 1/4).
std::vector<ZeroMode> closed_bz_representatives(
    const std::vector<ZeroMode>& canonical_modes, double tol);

/// Zeros of the torus velocity field in the representation selected by
/// cfg.weight_mode. Throws DegenerateField for c ~ 0 and GaplessModel when the
/// gap closes somewhere in the BZ.
std::vector<ZeroMode> find_zero_modes(const ModelParams& p,
                                      const ZeroModeConfig& cfg = {});

/// Exact weighted index sum; throws NonIntegralSum when it is not an integer.
Rational weighted_index_sum(const std::vector<ZeroMode>& modes);

struct EulerResult {
  int chi = 0;
  std::vector<ZeroMode> modes;
  WeightMode weight_mode = WeightMode::ClosedBZWeights;
};

/// Poincare-Hopf sum over the zero modes. Both weight modes are evaluated and
/// must agree; the returned modes follow cfg.weight_mode.
EulerResult euler_characteristic(const ModelParams& p,
                                 const ZeroModeConfig& cfg = {});

/// Same, for an arbitrary periodic planar field.
EulerResult euler_characteristic(const PlanarField& field,
                                 const ZeroModeConfig& cfg = {});

}  // namespace velotopo

#endif  // VELOTOPO_ZEROMODE_HPP
