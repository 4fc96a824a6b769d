// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include "oracles.hpp"

#include <velotopo/chern.hpp>
#include <velotopo/field.hpp>
#include <velotopo/sweep.hpp>
#include <velotopo/winding.hpp>
#include <velotopo/zeromode.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>

using namespace velotopo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << what << "; ";
    }
  }
};

template <typename F> std::optional<ErrorKind> kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

bool near(const KPoint& a, double x, double y, double tol) {
  return std::abs(a.x() - x) <= tol && std::abs(a.y() - y) <= tol;
}

void census(Outcome& out) {
  const auto t0 = Clock::now();
  const auto modes = find_zero_modes(ModelParams::create(3, 1, 1));
  const double dt = seconds_since(t0);
  out.expect(modes.size() == 9, "expected 9 representatives, got " +
                                    std::to_string(modes.size()));
  int sinks = 0, sources = 0, saddles = 0;
  for (const auto& z : modes) {
    const auto& k = z.location;
    if (near(k, 0, 0, 1e-9) && z.kind == ZeroKind::Sink && z.weight == Rational{1, 1}) {
      ++sinks;
    } else if (near(k, -kPi, -kPi, 1e-9) || near(k, -kPi, kPi, 1e-9) ||
               near(k, kPi, -kPi, 1e-9) || near(k, kPi, kPi, 1e-9)) {
      if (z.kind == ZeroKind::Source && z.weight == Rational{1, 4}) ++sources;
    } else if (near(k, 0, -kPi, 1e-9) || near(k, 0, kPi, 1e-9) ||
               near(k, -kPi, 0, 1e-9) || near(k, kPi, 0, 1e-9)) {
      if (z.kind == ZeroKind::Saddle && z.weight == Rational{1, 2}) ++saddles;
    }
  }
  out.expect(sinks == 1 && sources == 4 && saddles == 4,
             "kinds/weights/locations mismatch (" + std::to_string(sinks) + " sink, " +
                 std::to_string(sources) + " source, " + std::to_string(saddles) +
                 " saddle)");
  out.expect(dt < 1.0, "runtime " + std::to_string(dt) + " s");
  out.note << std::fixed;
  out.note.precision(3);
  out.note << "9 modes in " << dt << " s";
}

// Newton census against the cell-degree oracle: same count, each oracle cell
// holds a zero of matching index.
bool matches_oracle(double R, double r, double c, int& chi) {
  ZeroModeConfig cfg;
  const auto result = euler_characteristic(ModelParams::create(R, r, c), cfg);
  chi = result.chi;
  cfg.weight_mode = WeightMode::CanonicalCell;
  const auto zeros = find_zero_modes(ModelParams::create(R, r, c), cfg);
  const auto cells = oracle::degree_census({R, r, c}, 2048);
  if (cells.size() != zeros.size()) return false;
  int degree_sum = 0;
  for (const auto& cell : cells) {
    degree_sum += cell.degree;
    bool matched = false;
    for (const auto& z : zeros) {
      const double dx = std::abs(std::remainder(z.location.x() - cell.kx, kTwoPi));
      const double dy = std::abs(std::remainder(z.location.y() - cell.ky, kTwoPi));
      if (dx <= cell.half + 1e-12 && dy <= cell.half + 1e-12 && z.index == cell.degree)
        matched = true;
    }
    if (!matched) return false;
  }
  return degree_sum == 0;
}

void euler(Outcome& out) {
  const auto t0 = Clock::now();
  const auto modes = find_zero_modes(ModelParams::create(3, 1, 1));
  Rational sink{0, 1}, source{0, 1}, saddle{0, 1};
  for (const auto& z : modes) {
    Rational& b = z.kind == ZeroKind::Sink ? sink : z.kind == ZeroKind::Source ? source : saddle;
    b = b + z.index * z.weight;
  }
  out.expect(sink == Rational{1, 1} && source == Rational{1, 1} &&
                 saddle == Rational{-2, 1} && weighted_index_sum(modes) == Rational{0, 1},
             "rational breakdown is not 1+1-2");

  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> uR(1.5, 4.5), ufrac(0.1, 0.85),
      uc(0.05, 7.0), uwin(2.70, 3.12);
  int tested = 0, window = 0, failures = 0;
  while (tested < 50) {
    double R, r, c;
    if (tested < 12) {
      // Extra-zero window at R = 3, r = 1.
      R = 3;
      r = 1;
      c = uwin(rng);
    } else {
      R = uR(rng);
      r = ufrac(rng) * R;
      c = uc(rng);
    }
    if (std::abs(c - (R - r)) < 0.05 || std::abs(c - (R + r)) < 0.05) continue;
    bool near_bifurcation = false;
    for (double b : oracle::census_bifurcations(R, r))
      near_bifurcation |= std::abs(c - b) < 0.02;
    if (near_bifurcation) continue;
    int chi = 1;
    bool ok = false;
    try {
      ok = matches_oracle(R, r, c, chi) && chi == 0;
    } catch (const Error& e) {
      out.note << "(" << R << "," << r << "," << c << "): " << e.what() << "; ";
    }
    if (!ok) {
      ++failures;
      out.note << "(" << R << "," << r << "," << c << ") chi=" << chi << "; ";
    }
    if (tested < 12 && find_zero_modes(ModelParams::create(R, r, c)).size() > 9) ++window;
    ++tested;
  }
  const double dt = seconds_since(t0);
  out.expect(failures == 0, std::to_string(failures) + " sets disagree");
  out.expect(window > 0, "no set landed in the extra-zero window");
  out.expect(dt < 30.0, "runtime " + std::to_string(dt) + " s");
  out.note << std::fixed;
  out.note.precision(2);
  out.note << tested << " sets (" << window << " with extra zeros) in " << dt << " s";
}

void chern(Outcome& out) {
  const auto t0 = Clock::now();
  const std::pair<double, int> table[] = {{0.5, 0}, {1, 0}, {1.5, 0}, {2.5, 1},
                                          {3, 1},   {3.5, 1}, {4.5, 0}, {5, 0}};
  double worst_plaq = 0, worst_direct = 0;
  for (auto [c, expected] : table) {
    const auto p = ModelParams::create(3, 1, c);
    const auto plaq = chern_plaquette(p, 64);
    const auto direct = chern_direct(p, 256);
    worst_plaq = std::max(worst_plaq, std::abs(plaq.raw - expected));
    worst_direct = std::max(worst_direct, std::abs(direct.raw - expected));
    out.expect(plaq.value == expected && direct.value == expected,
               "wrong value at c=" + std::to_string(c));
  }
  out.expect(worst_plaq <= 1e-9, "plaquette error " + std::to_string(worst_plaq));
  out.expect(worst_direct <= 1e-3, "direct error " + std::to_string(worst_direct));
  const double g2 = gap_min(ModelParams::create(3, 1, 2));
  const double g4 = gap_min(ModelParams::create(3, 1, 4));
  out.expect(g2 < 1e-6 && g4 < 1e-6, "gap did not close at c=2/4");
  const double dt = seconds_since(t0);
  out.expect(dt < 10.0, "runtime " + std::to_string(dt) + " s");
  out.note << std::scientific;
  out.note.precision(1);
  out.note << "plaquette err " << worst_plaq << ", direct err " << worst_direct
           << ", gap(2) " << g2 << ", gap(4) " << g4;
  out.note << std::fixed;
  out.note.precision(2);
  out.note << ", " << dt << " s";
}

void velocity(Outcome& out) {
  const auto p = ModelParams::create(3, 1, 1);
  const oracle::Torus t{3, 1, 1};
  double worst_generic = 0, worst_fd = 0;
  const int n = 101;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const KPoint k(-kPi + kTwoPi * i / (n - 1), -kPi + kTwoPi * j / (n - 1));
      const Velocity closed = velocity_closed(k, p);
      worst_generic = std::max(worst_generic, (closed - velocity_generic(k, p)).cwiseAbs().maxCoeff());
      const Eigen::Vector2d fd = oracle::grad_energy_fd(t, k.x(), k.y(), 1e-4);
      worst_fd = std::max(worst_fd, (closed - fd).cwiseAbs().maxCoeff());
    }
  out.expect(worst_generic <= 1e-10, "closed vs generic " + std::to_string(worst_generic));
  out.expect(worst_fd <= 1e-6, "closed vs finite difference " + std::to_string(worst_fd));
  out.note << std::scientific;
  out.note.precision(1);
  out.note << "closed-generic " << worst_generic << ", closed-fd " << worst_fd;
}

void winding(Outcome& out) {
  const auto p = ModelParams::create(3, 1, 1);
  int checked = 0;
  for (const auto& z : find_zero_modes(p)) {
    LoopSpec loop;
    loop.center = z.location;
    loop.radius = 0.3;
    const int w = winding_hermitian(loop, p).w;
    out.expect(w == index_of(z), "w=" + std::to_string(w) + " at a " + to_string(z.kind));
    ++checked;
  }
  LoopSpec empty;
  empty.center = KPoint(1.5, 1.5);
  empty.radius = 0.3;
  const int w0 = winding_hermitian(empty, p).w;
  out.expect(w0 == 0, "empty loop gave w=" + std::to_string(w0));
  out.note << checked << " zero loops, empty loop w=" << w0;
}

void errors(Outcome& out) {
  const auto p0 = ModelParams::create(3, 1, 0);
  out.expect(kind_of([&] { find_zero_modes(p0); }) == ErrorKind::DegenerateField,
             "c=0 zero modes");
  out.expect(kind_of([&] { euler_characteristic(p0); }) == ErrorKind::DegenerateField,
             "c=0 euler");
  for (double c : {2.0, 4.0}) {
    const auto p = ModelParams::create(3, 1, c);
    out.expect(kind_of([&] { find_zero_modes(p); }) == ErrorKind::GaplessModel,
               "zero modes at c=" + std::to_string(c));
    out.expect(kind_of([&] { chern_plaquette(p); }) == ErrorKind::GaplessModel,
               "plaquette at c=" + std::to_string(c));
    out.expect(kind_of([&] { chern_direct(p); }) == ErrorKind::GaplessModel,
               "direct at c=" + std::to_string(c));
  }
  SweepOptions opts;
  opts.euler = true;
  opts.chern_grid = 64;
  const auto grid = sweep({SweepAxis::parse("c:0:4:3")}, {3, 1, 1}, opts);
  out.expect(grid.cells.size() == 3, "sweep size");
  if (grid.cells.size() == 3) {
    out.expect(grid.cells[0].chi_status == CellStatus::Degenerate && !grid.cells[0].chi,
               "c=0 sweep tag");
    for (int i : {1, 2})
      out.expect(grid.cells[i].status() == CellStatus::Gapless && !grid.cells[i].chern &&
                     !grid.cells[i].chi,
                 "gapless sweep tag at c=" + std::to_string(grid.cells[i].c));
  }
  out.note << "typed errors and sweep tags";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"zero-mode census at (3,1,1)", census},
      {"Euler characteristic", euler},
      {"Chern phase structure", chern},
      {"velocity formula equivalence", velocity},
      {"winding equals index", winding},
      {"error-path contract", errors},
  };
  int failed = 0;
  int id = 1;
  for (const auto& [name, run] : criteria) {
    Outcome out;
    try {
      run(out);
    } catch (const std::exception& e) {
      out.ok = false;
      out.note << "unexpected exception: " << e.what();
    }
    std::printf("%s %d %s: %s\n", out.ok ? "PASS" : "FAIL", id, name,
                out.note.str().c_str());
    failed += out.ok ? 0 : 1;
    ++id;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
