#include <velotopo/field.hpp>
#include <velotopo/model.hpp>

#include <cstdio>
#include <limits>

namespace velotopo {

std::vector<SurfaceSample> surface_sample(const ModelParams& p, int n) {
  if (n < 2)
    throw Error(ErrorKind::InvalidArgument,
                "surface grid size must be at least 2, got " +
                    std::to_string(n));
  const double step = kTwoPi / n;
  std::vector<SurfaceSample> rows;
  rows.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const KPoint k(-kPi + i * step, -kPi + j * step);
      Velocity v;
      try {
        v = velocity_closed(k, p);
      } catch (const Error&) {
        v.setConstant(std::numeric_limits<double>::quiet_NaN());
      }
      rows.push_back({k, h(k, p), v});
    }
  }
  return rows;
}

std::string surface_csv(const std::vector<SurfaceSample>& rows) {
  std::string out = "kx,ky,hx,hy,hz,vx,vy\n";
  char buf[256];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf,
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.k.x(),
                  row.k.y(), row.h.x(), row.h.y(), row.h.z(), row.v.x(),
                  row.v.y());
    out += buf;
  }
  return out;
}

}  // namespace velotopo
