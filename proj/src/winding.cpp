#include <velotopo/field.hpp>
#include <velotopo/winding.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace velotopo {

namespace {

constexpr double kZeroNorm = 1e-12;

void validate(const LoopSpec& loop) {
  if (!(loop.radius > 0))
    throw Error(ErrorKind::InvalidArgument, "loop radius must be positive");
  if (loop.samples < 16)
    throw Error(ErrorKind::InvalidArgument,
                "loop needs at least 16 samples, got " +
                    std::to_string(loop.samples));
}

}  // namespace

std::vector<KPoint> loop_points(const LoopSpec& loop, int samples) {
  std::vector<KPoint> pts;
  pts.reserve(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i < samples; ++i) {
    const double t = kTwoPi * i / samples;
    pts.emplace_back(loop.center.x() + loop.radius * std::cos(t),
                     loop.center.y() + loop.radius * std::sin(t));
  }
  pts.push_back(pts.front());
  return pts;
}

WindingResult winding_planar(std::span<const Eigen::Vector2d> samples) {
  if (samples.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "need at least two field samples");
  WindingResult res;
  res.min_field_norm = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    const double norm = s.norm();
    if (!(norm > kZeroNorm))
      throw Error(ErrorKind::ZeroOnLoop, "field vanishes on the loop");
    res.min_field_norm = std::min(res.min_field_norm, norm);
  }
  double total = 0;
  const std::size_t n = samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = samples[i];
    const auto& b = samples[(i + 1) % n];
    // Angle from a to b, in (-pi, pi].
    const double d = std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    if (std::abs(d) >= kPi / 2)
      throw Error(ErrorKind::InsufficientSampling,
                  "angle increment " + std::to_string(d) +
                      " exceeds pi/2; sample the loop more densely");
    total += d;
  }
  res.total_angle = total;
  res.w = static_cast<int>(std::lround(total / kTwoPi));
  res.samples_used = static_cast<int>(n);
  return res;
}

WindingResult winding_along(
    std::span<const KPoint> polyline,
    const std::function<Eigen::Vector2d(const KPoint&)>& field) {
  if (polyline.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "loop needs at least two points");
  if (torus_distance(polyline.front(), polyline.back()) > 1e-9)
    throw Error(ErrorKind::InvalidArgument, "loop is not closed");
  std::vector<Eigen::Vector2d> values;
  values.reserve(polyline.size() - 1);
  // The closing point duplicates the first; drop it.
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i)
    values.push_back(field(polyline[i]));
  return winding_planar(values);
}

WindingResult winding_on_loop(
    const LoopSpec& loop,
    const std::function<Eigen::Vector2d(const KPoint&)>& field) {
  validate(loop);
  for (int n = loop.samples;; n *= 2) {
    try {
      return winding_along(loop_points(loop, n), field);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientSampling ||
          n * 2 > std::max(loop.max_samples, loop.samples))
        throw;
    }
  }
}

WindingResult winding_hermitian(const LoopSpec& loop, const ModelParams& p,
                                Band band) {
  return winding_on_loop(loop, [&](const KPoint& k) -> Eigen::Vector2d {
    try {
      return velocity_band(k, p, band);
    } catch (const Error& e) {
      throw Error(ErrorKind::ZeroOnLoop,
                  std::string("loop crosses a gapless point: ") + e.what());
    }
  });
}

WindingResult winding_nonhermitian(const LoopSpec& loop, const ComplexBand& band,
                                   Axis axis) {
  constexpr double fd = 1e-6;
  const KPoint e = axis == Axis::X ? KPoint(fd, 0) : KPoint(0, fd);
  auto velocity = [&](const KPoint& k) {
    return (band(k + e) - band(k - e)) / (2 * fd);
  };
  return winding_on_loop(loop, [&](const KPoint& k) -> Eigen::Vector2d {
    const std::complex<double> v = velocity(k);
    return {v.real(), v.imag()};
  });
}

}  // namespace velotopo
