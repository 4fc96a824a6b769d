#include <velotopo/chern.hpp>
#include <velotopo/zeromode.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>

namespace velotopo {

const char* to_string(ZeroKind kind) {
  switch (kind) {
    case ZeroKind::Sink: return "sink";
    case ZeroKind::Source: return "source";
    case ZeroKind::Saddle: return "saddle";
  }
  return "unknown";
}

const char* to_string(WeightMode mode) {
  return mode == WeightMode::ClosedBZWeights ? "closed_bz" : "canonical_cell";
}

int index_of(double det, double det_eps) {
  if (!(std::abs(det) > det_eps))
    throw Error(ErrorKind::DegenerateZero,
                "Jacobian determinant " + std::to_string(det) +
                    " is below the degeneracy threshold");
  return det > 0 ? 1 : -1;
}

int index_of(const ZeroMode& z, double det_eps) {
  return index_of(z.det, det_eps);
}

ZeroKind classify(const Jacobian2& j, double det_eps) {
  const double det = j.determinant();
  if (index_of(det, det_eps) < 0) return ZeroKind::Saddle;
  return j.trace() < 0 ? ZeroKind::Sink : ZeroKind::Source;
}

Rational boundary_weight(const KPoint& k, double tol) {
  int shared = 1;
  for (int a = 0; a < 2; ++a)
    if (kPi - std::abs(k(a)) <= tol) shared *= 2;
  return Rational::make(1, shared);
}

namespace {

std::optional<Velocity> try_eval(const PlanarField& field, const KPoint& k) {
  try {
    return field(k);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::GaplessPoint) return std::nullopt;
    throw;
  }
}

std::optional<Jacobian2> try_jacobian(const PlanarField& field,
                                      const KPoint& k, double step) {
  try {
    return jacobian_fd(field, k, step);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::GaplessPoint) return std::nullopt;
    throw;
  }
}

struct Candidate {
  KPoint k;
  double residual;
};

// Damped Newton from a single seed; nullopt when the seed does not converge.
std::optional<Candidate> newton(const PlanarField& field, KPoint k,
                                const ZeroModeConfig& cfg) {
  auto v = try_eval(field, k);
  if (!v) return std::nullopt;
  double res = v->norm();
  for (int it = 0; it < cfg.max_iterations && res > cfg.tol; ++it) {
    const auto jac = try_jacobian(field, k, cfg.jacobian_step);
    if (!jac) return std::nullopt;
    const double scale = jac->cwiseAbs().maxCoeff();
    if (!(std::abs(jac->determinant()) > 1e-14 * scale * scale))
      return std::nullopt;
    KPoint dk = -jac->partialPivLu().solve(*v);
    // Never let one step leave the neighbourhood of the current cell.
    const double len = dk.norm();
    if (len > kPi / 2) dk *= (kPi / 2) / len;

    double t = 1.0;
    KPoint next = canonical(KPoint(k + dk));
    auto vn = try_eval(field, next);
    for (int halving = 0; halving < 30; ++halving) {
      if (vn && vn->norm() <= res) break;
      t *= cfg.damping;
      next = canonical(KPoint(k + t * dk));
      vn = try_eval(field, next);
    }
    if (!vn) return std::nullopt;
    if (vn->norm() >= res && t < 1.0) {
      // No descent along the Newton direction: stalled at the noise floor.
      break;
    }
    k = next;
    v = vn;
    res = vn->norm();
  }
  if (res <= cfg.tol) return Candidate{k, res};
  // Steep zeros: rounding in k alone leaves |v| ~ |J| * eps, so accept a
  // residual that is small relative to the Jacobian scale.
  const auto jac = try_jacobian(field, k, cfg.jacobian_step);
  if (!jac) return std::nullopt;
  if (!(res <= cfg.tol * std::max(1.0, jac->cwiseAbs().maxCoeff()))) return std::nullopt;
  return Candidate{k, res};
}

KPoint snap_to_boundary(KPoint k, double tol) {
  for (int a = 0; a < 2; ++a)
    if (kPi - std::abs(k(a)) <= tol) k(a) = -kPi;
  return k;
}

}  // namespace

std::vector<ZeroMode> find_field_zeros(const PlanarField& field,
                                       const ZeroModeConfig& cfg) {
  if (cfg.seeds_per_axis < 1)
    throw Error(ErrorKind::InvalidArgument, "seeds_per_axis must be >= 1");
  if (!(cfg.tol > 0))
    throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");

  const int n = cfg.seeds_per_axis;
  const double spacing = kTwoPi / n;
  std::vector<Candidate> found;
  auto run_seed = [&](const KPoint& seed) {
    auto cand = newton(field, seed, cfg);
    if (!cand) return;
    cand->k = snap_to_boundary(canonical(cand->k), cfg.dedup_radius);
    auto same = std::find_if(found.begin(), found.end(), [&](const auto& f) {
      return torus_distance(f.k, cand->k) < cfg.dedup_radius;
    });
    if (same == found.end())
      found.push_back(*cand);
    else if (cand->residual < same->residual)
      *same = *cand;
  };

  std::vector<std::optional<Velocity>> at_seed(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const KPoint seed(-kPi + (i + 0.5) * spacing, -kPi + (j + 0.5) * spacing);
      at_seed[static_cast<std::size_t>(j) * n + i] = try_eval(field, seed);
      run_seed(seed);
    }
  }

  // Rescue pass. A cell spanned by four neighbouring seeds whose corner
  // winding is nonzero must hold a zero; if Newton missed it (narrow basin
  // near a sharp cone of |h|), bisect the cell and reseed.
  auto degree = [](const std::optional<Velocity> (&q)[4]) -> std::optional<int> {
    double total = 0;
    for (int e = 0; e < 4; ++e) {
      const auto& a = q[e];
      const auto& b = q[(e + 1) % 4];
      if (!a || !b || a->norm() == 0 || b->norm() == 0) return std::nullopt;
      total += std::atan2(a->x() * b->y() - a->y() * b->x(), a->dot(*b));
    }
    return static_cast<int>(std::lround(total / kTwoPi));
  };
  auto holds_zero = [&](const KPoint& lo, double size) {
    return std::any_of(found.begin(), found.end(), [&](const auto& f) {
      const double dx = wrap_angle(f.k.x() - lo.x());
      const double dy = wrap_angle(f.k.y() - lo.y());
      return dx >= -1e-12 && dx <= size + 1e-12 && dy >= -1e-12 && dy <= size + 1e-12;
    });
  };
  auto corners = [&](const KPoint& lo, double size) {
    std::array<std::optional<Velocity>, 4> q;
    q[0] = try_eval(field, lo);
    q[1] = try_eval(field, KPoint(lo.x() + size, lo.y()));
    q[2] = try_eval(field, KPoint(lo.x() + size, lo.y() + size));
    q[3] = try_eval(field, KPoint(lo.x(), lo.y() + size));
    return q;
  };
  std::function<void(const KPoint&, double, int)> refine =
      [&](const KPoint& lo, double size, int depth) {
        if (depth > 12) return;
        const double half = 0.5 * size;
        for (int b = 0; b < 2; ++b)
          for (int a = 0; a < 2; ++a) {
            const KPoint sub(lo.x() + a * half, lo.y() + b * half);
            const auto q = corners(sub, half);
            const std::optional<Velocity> arr[4] = {q[0], q[1], q[2], q[3]};
            const auto d = degree(arr);
            if (!d || *d == 0 || holds_zero(sub, half)) continue;
            run_seed(KPoint(sub.x() + 0.5 * half, sub.y() + 0.5 * half));
            if (!holds_zero(sub, half)) refine(sub, half, depth + 1);
          }
      };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const auto idx = [&](int a, int b) {
        return static_cast<std::size_t>((b % n)) * n + (a % n);
      };
      const std::optional<Velocity> q[4] = {at_seed[idx(i, j)], at_seed[idx(i + 1, j)],
                                            at_seed[idx(i + 1, j + 1)],
                                            at_seed[idx(i, j + 1)]};
      const auto d = degree(q);
      const KPoint lo(-kPi + (i + 0.5) * spacing, -kPi + (j + 0.5) * spacing);
      if (d && *d != 0 && !holds_zero(lo, spacing)) refine(lo, spacing, 0);
    }
  }

  for (std::size_t a = 0; a < found.size(); ++a)
    for (std::size_t b = a + 1; b < found.size(); ++b)
      if (torus_distance(found[a].k, found[b].k) < cfg.isolation_radius)
        throw Error(ErrorKind::NonIsolatedZero,
                    "zeros at (" + std::to_string(found[a].k.x()) + ", " +
                        std::to_string(found[a].k.y()) + ") and (" +
                        std::to_string(found[b].k.x()) + ", " +
                        std::to_string(found[b].k.y()) +
                        ") are closer than the isolation radius");

  std::vector<ZeroMode> modes;
  modes.reserve(found.size());
  for (const auto& cand : found) {
    ZeroMode z;
    z.location = cand.k;
    z.residual = field(cand.k).norm();
    z.jac = jacobian_fd(field, cand.k, cfg.jacobian_step);
    z.det = z.jac.determinant();
    z.trace = z.jac.trace();
    z.index = index_of(z.det, cfg.det_eps);
    z.kind = classify(z.jac, cfg.det_eps);
    z.weight = Rational{1, 1};
    modes.push_back(z);
  }
  std::sort(modes.begin(), modes.end(), [](const auto& a, const auto& b) {
    if (a.location.x() != b.location.x()) return a.location.x() < b.location.x();
    return a.location.y() < b.location.y();
  });
  return modes;
}

std::vector<ZeroMode> closed_bz_representatives(
    const std::vector<ZeroMode>& canonical_modes, double tol) {
  std::vector<ZeroMode> out;
  for (const auto& z : canonical_modes) {
    auto images = [&](double k) {
      return kPi - std::abs(k) <= tol ? std::vector<double>{-kPi, kPi}
                                      : std::vector<double>{k};
    };
    const auto xs = images(z.location.x());
    const auto ys = images(z.location.y());
    const Rational w =
        Rational::make(1, static_cast<std::int64_t>(xs.size() * ys.size()));
    for (double x : xs) {
      for (double y : ys) {
        ZeroMode img = z;
        img.location = KPoint(x, y);
        img.weight = w;
        out.push_back(img);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.location.x() != b.location.x()) return a.location.x() < b.location.x();
    return a.location.y() < b.location.y();
  });
  return out;
}

std::vector<ZeroMode> find_zero_modes(const ModelParams& p,
                                      const ZeroModeConfig& cfg) {
  if (p.c() <= cfg.degenerate_c)
    throw Error(ErrorKind::DegenerateField,
                "c = " + std::to_string(p.c()) +
                    " makes v_x vanish identically; zeros are not isolated");
  const double gap = gap_min(p);
  if (!(gap > cfg.gap_eps))
    throw Error(ErrorKind::GaplessModel,
                "band gap closes (min |h| = " + std::to_string(gap) +
                    "); the velocity field is not continuous");
  const PlanarField field = [p, band = cfg.band](const KPoint& k) {
    return velocity_band(k, p, band);
  };
  auto modes = find_field_zeros(field, cfg);
  if (cfg.weight_mode == WeightMode::ClosedBZWeights)
    return closed_bz_representatives(modes, cfg.dedup_radius);
  return modes;
}

Rational weighted_index_sum(const std::vector<ZeroMode>& modes) {
  Rational total{0, 1};
  for (const auto& z : modes) total = total + z.index * z.weight;
  if (!total.is_integer())
    throw Error(ErrorKind::NonIntegralSum,
                "weighted index sum " + std::to_string(total.num) + "/" +
                    std::to_string(total.den) +
                    " is not an integer; a zero was missed or spurious");
  return total;
}

namespace {

EulerResult euler_from_canonical(std::vector<ZeroMode> canonical_modes,
                                 const ZeroModeConfig& cfg) {
  auto closed = closed_bz_representatives(canonical_modes, cfg.dedup_radius);
  const Rational closed_sum = weighted_index_sum(closed);
  const Rational cell_sum = weighted_index_sum(canonical_modes);
  if (!(closed_sum == cell_sum))
    throw Error(ErrorKind::NonIntegralSum,
                "closed-BZ and canonical-cell index sums disagree");
  EulerResult result;
  result.chi = static_cast<int>(cell_sum.num);
  result.weight_mode = cfg.weight_mode;
  result.modes = cfg.weight_mode == WeightMode::ClosedBZWeights
                     ? std::move(closed)
                     : std::move(canonical_modes);
  return result;
}

}  // namespace

EulerResult euler_characteristic(const ModelParams& p,
                                 const ZeroModeConfig& cfg) {
  ZeroModeConfig canonical_cfg = cfg;
  canonical_cfg.weight_mode = WeightMode::CanonicalCell;
  return euler_from_canonical(find_zero_modes(p, canonical_cfg), cfg);
}

EulerResult euler_characteristic(const PlanarField& field,
                                 const ZeroModeConfig& cfg) {
  return euler_from_canonical(find_field_zeros(field, cfg), cfg);
}

}  // namespace velotopo
