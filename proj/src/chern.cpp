#include <velotopo/chern.hpp>

#include <cmath>
#include <limits>
#include <vector>

namespace velotopo {

const char* to_string(ChernMethod method) {
  return method == ChernMethod::DirectQuadrature ? "direct" : "plaquette";
}

namespace {

// Neumaier compensated summation; fixed traversal order keeps results
// reproducible bit for bit.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

double gap_min_impl(const AnyTwoBandMap& map, int n) {
  if (n < 32)
    throw Error(ErrorKind::InvalidArgument,
                "gap grid must be at least 32, got " + std::to_string(n));
  const double step = kTwoPi / n;
  KPoint best(0, 0);
  double best_norm = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const KPoint k(-kPi + i * step, -kPi + j * step);
      const double norm = map.h(k).norm();
      if (norm < best_norm) {
        best_norm = norm;
        best = k;
      }
    }

  // Gauss-Newton on h(k) = 0 with backtracking; converges to the nearest
  // root or local minimum of |h|.
  KPoint k = best;
  HVector hv = map.h(k);
  for (int it = 0; it < 100 && hv.norm() > 0; ++it) {
    const Frame f = map.frame(k);
    Eigen::Matrix<double, 3, 2> jac;
    jac.col(0) = f.d_kx;
    jac.col(1) = f.d_ky;
    const Eigen::Matrix2d normal = jac.transpose() * jac;
    const Eigen::Vector2d grad = jac.transpose() * hv;
    Eigen::Vector2d dk = -normal.ldlt().solve(grad);
    if (!dk.allFinite()) break;
    if (dk.norm() > step) dk *= step / dk.norm();
    double t = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      const KPoint trial = k + t * dk;
      const HVector ht = map.h(trial);
      if (ht.norm() < hv.norm()) {
        k = trial;
        hv = ht;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return std::min(best_norm, hv.norm());
}

void require_gap(double gap) {
  if (!(gap > kChernGapEps))
    throw Error(ErrorKind::GaplessModel,
                "band gap closes (min |h| = " + std::to_string(gap) +
                    "); the Chern number is ill-defined");
}

HVector unit_h(const AnyTwoBandMap& map, const KPoint& k) {
  return map.h(k).normalized();
}

ChernResult direct_impl(const AnyTwoBandMap& map, int n, double gap) {
  if (n < 32)
    throw Error(ErrorKind::InvalidArgument,
                "quadrature grid must be at least 32, got " + std::to_string(n));
  require_gap(gap);
  constexpr double fd = 1e-5;
  const double step = kTwoPi / n;
  CompensatedSum sum;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const KPoint k(-kPi + (i + 0.5) * step, -kPi + (j + 0.5) * step);
      const KPoint ex(fd, 0), ey(0, fd);
      const HVector dx =
          (unit_h(map, k + ex) - unit_h(map, k - ex)) / (2 * fd);
      const HVector dy =
          (unit_h(map, k + ey) - unit_h(map, k - ey)) / (2 * fd);
      sum.add(unit_h(map, k).dot(dx.cross(dy)));
    }
  ChernResult res;
  res.raw = sum.value() * step * step / (4 * kPi);
  res.value = static_cast<int>(std::lround(res.raw));
  res.gap_min = gap;
  res.method = ChernMethod::DirectQuadrature;
  res.grid_n = n;
  return res;
}

// Signed solid angle of the geodesic triangle (a, b, c) on the unit sphere.
// Returns NaN when the corners are antipodal and the sign is ambiguous.
double solid_angle(const HVector& a, const HVector& b, const HVector& c) {
  const double num = a.dot(b.cross(c));
  const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  if (den <= 0 && std::abs(num) < 1e-12)
    return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * std::atan2(num, den);
}

ChernResult plaquette_impl(const AnyTwoBandMap& map, int n, double gap) {
  if (n < 16)
    throw Error(ErrorKind::InvalidArgument,
                "plaquette grid must be at least 16, got " + std::to_string(n));
  require_gap(gap);
  for (int attempt = 0; attempt <= 3; ++attempt, n *= 2) {
    const double step = kTwoPi / n;
    std::vector<HVector> nodes(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        nodes[static_cast<std::size_t>(j) * n + i] =
            unit_h(map, KPoint(-kPi + i * step, -kPi + j * step));
    auto at = [&](int i, int j) -> const HVector& {
      return nodes[static_cast<std::size_t>(j % n) * n + (i % n)];
    };

    CompensatedSum sum;
    bool degenerate = false;
    for (int j = 0; j < n && !degenerate; ++j)
      for (int i = 0; i < n; ++i) {
        const HVector& p00 = at(i, j);
        const HVector& p10 = at(i + 1, j);
        const HVector& p11 = at(i + 1, j + 1);
        const HVector& p01 = at(i, j + 1);
        const double lower = solid_angle(p00, p10, p11);
        const double upper = solid_angle(p00, p11, p01);
        if (std::isnan(lower) || std::isnan(upper)) {
          degenerate = true;
          break;
        }
        sum.add(lower);
        sum.add(upper);
      }
    if (degenerate) continue;

    ChernResult res;
    res.raw = sum.value() / (4 * kPi);
    res.value = static_cast<int>(std::lround(res.raw));
    res.gap_min = gap;
    res.method = ChernMethod::PlaquetteSolidAngle;
    res.grid_n = n;
    return res;
  }
  throw Error(ErrorKind::DegenerateTriangle,
              "antipodal plaquette corners persist after grid refinement");
}

}  // namespace

double gap_min(const ModelParams& p, int n) {
  return gap_min_impl(AnyTwoBandMap(TorusModel{p}), n);
}
double gap_min(const AnyTwoBandMap& map, int n) { return gap_min_impl(map, n); }

ChernResult chern_direct(const ModelParams& p, int n) {
  const AnyTwoBandMap map(TorusModel{p});
  return direct_impl(map, n, gap_min_impl(map, 128));
}
ChernResult chern_direct(const AnyTwoBandMap& map, int n) {
  return direct_impl(map, n, gap_min_impl(map, 128));
}

ChernResult chern_plaquette(const ModelParams& p, int n) {
  const AnyTwoBandMap map(TorusModel{p});
  return plaquette_impl(map, n, gap_min_impl(map, 128));
}
ChernResult chern_plaquette(const AnyTwoBandMap& map, int n) {
  return plaquette_impl(map, n, gap_min_impl(map, 128));
}

std::pair<double, double> gapless_boundary(double R, double r) {
  // h = 0 needs sin kx = sin ky = 0 and r0 cos kx + c = 0 with c > 0, i.e.
  // kx = pi and c = r0(ky) in {R - r, R + r}.
  ModelParams::create(R, r, 0.0);
  return {R - r, R + r};
}

}  // namespace velotopo
