#ifndef VELOTOPO_WINDING_HPP
#define VELOTOPO_WINDING_HPP

#include <velotopo/model.hpp>

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace velotopo {

struct WindingResult {
  int w = 0;
  double total_angle = 0;
  double min_field_norm = 0;
  int samples_used = 0;
};

/// Circular loop in the BZ, traversed counter-clockwise.
struct LoopSpec {
  KPoint center = KPoint::Zero();
  double radius = 0.3;
  int samples = 256;
  int max_samples = 4096;
};

/// samples + 1 points on the circle; the last repeats the first.
std::vector<KPoint> loop_points(const LoopSpec& loop, int samples);

/// Accumulated unwrapped angle of a sequence of planar vectors, treated as a
/// closed cycle. Throws ZeroOnLoop when a sample has norm <= 1e-12 and
/// InsufficientSampling when an angle increment reaches pi/2.
WindingResult winding_planar(std::span<const Eigen::Vector2d> samples);

/// Winding of a planar field along an explicit closed polyline of k-points.
WindingResult winding_along(
    std::span<const KPoint> polyline,
    const std::function<Eigen::Vector2d(const KPoint&)>& field);

/// Winding of a planar field along a circle, doubling the sample count (up to
/// loop.max_samples) while the increment bound is violated.
WindingResult winding_on_loop(
    const LoopSpec& loop,
    const std::function<Eigen::Vector2d(const KPoint&)>& field);

/// Winding of (v_x, v_y) of the torus model around the loop. For a small loop
/// around a nondegenerate zero this is the Poincare index of that zero.
WindingResult winding_hermitian(const LoopSpec& loop, const ModelParams& p,
                                Band band = Band::Upper);

enum class Axis { X, Y };

using ComplexBand = std::function<std::complex<double>(const KPoint&)>;

/// Winding of (Re dE/dk_axis, Im dE/dk_axis) for a complex band E(k).
/// Derivatives by central differences.
WindingResult winding_nonhermitian(const LoopSpec& loop, const ComplexBand& band,
                                   Axis axis = Axis::X);

}  // namespace velotopo

#endif  // VELOTOPO_WINDING_HPP
