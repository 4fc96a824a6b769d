#ifndef VELOTOPO_CHERN_HPP
#define VELOTOPO_CHERN_HPP

#include <velotopo/model.hpp>

#include <utility>

namespace velotopo {

enum class ChernMethod { DirectQuadrature, PlaquetteSolidAngle };
const char* to_string(ChernMethod method);

struct ChernResult {
  double raw = 0;
  int value = 0;
  double gap_min = 0;
  ChernMethod method = ChernMethod::PlaquetteSolidAngle;
  int grid_n = 0;
};

/// Gap below which the Chern number is refused.
inline constexpr double kChernGapEps = 1e-6;

/// Minimum of |h| over an n x n grid, polished by Gauss-Newton descent from
/// the smallest grid node.
double gap_min(const ModelParams& p, int n = 128);
double gap_min(const AnyTwoBandMap& map, int n = 128);

/// Midpoint-rule quadrature of (1/4 pi) h_hat . (d_x h_hat x d_y h_hat) on an
/// n x n grid; derivatives of h_hat by central differences.
ChernResult chern_direct(const ModelParams& p, int n = 256);
ChernResult chern_direct(const AnyTwoBandMap& map, int n = 256);

/// Sum of signed solid angles of the images of grid triangles under h_hat,
/// divided by 4 pi. Integer up to rounding. Retries with a doubled grid (at
/// most three times) when a triangle has antipodal corners.
ChernResult chern_plaquette(const ModelParams& p, int n = 64);
ChernResult chern_plaquette(const AnyTwoBandMap& map, int n = 64);

/// Values of c at which the torus gap closes: (R - r, R + r).
std::pair<double, double> gapless_boundary(double R, double r);

}  // namespace velotopo

#endif  // VELOTOPO_CHERN_HPP
