#include <velotopo/chern.hpp>
#include <velotopo/sweep.hpp>

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <thread>

namespace velotopo {

namespace {

double parse_double(std::string_view s, std::string_view what) {
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used != str.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidArgument,
                "cannot parse " + std::string(what) + " '" + std::string(s) +
                    "'");
  }
}

SweepParam parse_param(std::string_view s) {
  if (s == "R") return SweepParam::R;
  if (s == "r") return SweepParam::r;
  if (s == "c") return SweepParam::c;
  throw Error(ErrorKind::InvalidArgument,
              "unknown sweep parameter '" + std::string(s) +
                  "' (expected R, r or c)");
}

}  // namespace

const char* to_string(SweepParam param) {
  switch (param) {
    case SweepParam::R: return "R";
    case SweepParam::r: return "r";
    case SweepParam::c: return "c";
  }
  return "?";
}

SweepAxis SweepAxis::create(SweepParam param, double start, double stop,
                            int steps) {
  if (steps < 1)
    throw Error(ErrorKind::InvalidArgument, "sweep axis needs steps >= 1");
  if (!(start < stop))
    throw Error(ErrorKind::InvalidArgument, "sweep axis needs start < stop");
  return SweepAxis{param, start, stop, steps};
}

SweepAxis SweepAxis::parse(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t colon = text.find(':', pos);
    parts.push_back(text.substr(pos, colon - pos));
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (parts.size() != 4)
    throw Error(ErrorKind::InvalidArgument,
                "axis '" + std::string(text) +
                    "' must have the form name:start:stop:steps");
  int steps = 0;
  const auto [ptr, ec] =
      std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), steps);
  if (ec != std::errc() || ptr != parts[3].data() + parts[3].size())
    throw Error(ErrorKind::InvalidArgument,
                "cannot parse axis steps '" + std::string(parts[3]) + "'");
  return create(parse_param(parts[0]), parse_double(parts[1], "axis start"),
                parse_double(parts[2], "axis stop"), steps);
}

std::vector<double> SweepAxis::values() const {
  if (steps == 1) return {start};
  std::vector<double> out(static_cast<std::size_t>(steps));
  const double delta = (stop - start) / (steps - 1);
  for (int i = 0; i < steps; ++i) out[i] = start + i * delta;
  out.back() = stop;
  return out;
}

const char* to_string(CellStatus status) {
  switch (status) {
    case CellStatus::Ok: return "ok";
    case CellStatus::Gapless: return "gapless";
    case CellStatus::Degenerate: return "degenerate";
    case CellStatus::Failed: return "failed";
    case CellStatus::Invalid: return "invalid";
    case CellStatus::NotComputed: return "not_computed";
  }
  return "?";
}

CellStatus cell_status_from_string(std::string_view text) {
  for (auto s : {CellStatus::Ok, CellStatus::Gapless, CellStatus::Degenerate,
                 CellStatus::Failed, CellStatus::Invalid,
                 CellStatus::NotComputed})
    if (text == to_string(s)) return s;
  throw Error(ErrorKind::InvalidArgument,
              "unknown cell status '" + std::string(text) + "'");
}

CellStatus PhaseCell::status() const {
  // Severity order, most severe first.
  for (auto s : {CellStatus::Invalid, CellStatus::Gapless,
                 CellStatus::Degenerate, CellStatus::Failed})
    if (chern_status == s || chi_status == s) return s;
  if (chern_status == CellStatus::Ok || chi_status == CellStatus::Ok)
    return CellStatus::Ok;
  return CellStatus::NotComputed;
}

namespace {

CellStatus status_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::GaplessModel:
    case ErrorKind::GaplessPoint: return CellStatus::Gapless;
    case ErrorKind::DegenerateField:
    case ErrorKind::DegenerateZero:
    case ErrorKind::NonIsolatedZero: return CellStatus::Degenerate;
    case ErrorKind::InvalidParams: return CellStatus::Invalid;
    default: return CellStatus::Failed;
  }
}

PhaseCell evaluate_cell(double R, double r, double c, const SweepOptions& opts) {
  PhaseCell cell;
  cell.R = R;
  cell.r = r;
  cell.c = c;
  const auto mark_all = [&](CellStatus s) {
    if (opts.chern) cell.chern_status = s;
    if (opts.euler) cell.chi_status = s;
  };
  std::optional<ModelParams> p;
  try {
    p = ModelParams::create(R, r, c);
  } catch (const Error&) {
    mark_all(CellStatus::Invalid);
    return cell;
  }
  cell.gap_min = gap_min(*p);
  if (!(*cell.gap_min >= opts.gapless_tol)) {
    mark_all(CellStatus::Gapless);
    return cell;
  }
  if (opts.chern) {
    try {
      cell.chern = chern_plaquette(*p, opts.chern_grid).value;
      cell.chern_status = CellStatus::Ok;
    } catch (const Error& e) {
      cell.chern_status = status_for(e);
    }
  }
  if (opts.euler) {
    try {
      cell.chi = euler_characteristic(*p, opts.zero_cfg).chi;
      cell.chi_status = CellStatus::Ok;
    } catch (const Error& e) {
      cell.chi_status = status_for(e);
    }
  }
  return cell;
}

}  // namespace

PhaseDiagramGrid sweep(const std::vector<SweepAxis>& axes,
                       const FixedParams& fixed, const SweepOptions& opts) {
  if (axes.empty() || axes.size() > 2)
    throw Error(ErrorKind::InvalidArgument, "a sweep takes one or two axes");
  if (axes.size() == 2 && axes[0].param == axes[1].param)
    throw Error(ErrorKind::InvalidArgument, "sweep axes must differ");

  struct Point {
    double R, r, c;
  };
  std::vector<Point> points;
  const auto outer = axes[0].values();
  const auto inner =
      axes.size() == 2 ? axes[1].values() : std::vector<double>{0.0};
  for (double a : outer)
    for (double b : inner) {
      Point pt{fixed.R, fixed.r, fixed.c};
      auto assign = [&pt](SweepParam param, double v) {
        (param == SweepParam::R ? pt.R : param == SweepParam::r ? pt.r : pt.c) =
            v;
      };
      assign(axes[0].param, a);
      if (axes.size() == 2) assign(axes[1].param, b);
      points.push_back(pt);
    }

  PhaseDiagramGrid grid;
  grid.axes = axes;
  grid.cells.resize(points.size());
  unsigned workers = opts.threads ? opts.threads
                                  : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(points.size()));
  // Each worker fills a strided subset of cells; results land by index, so
  // the output order does not depend on scheduling.
  auto work = [&](unsigned id) {
    for (std::size_t i = id; i < points.size(); i += workers)
      grid.cells[i] = evaluate_cell(points[i].R, points[i].r, points[i].c, opts);
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < workers; ++id) pool.emplace_back(work, id);
  }
  return grid;
}

PhaseDiagramGrid sweep_chern(const std::vector<SweepAxis>& axes,
                             const FixedParams& fixed, int n_grid) {
  SweepOptions opts;
  opts.chern = true;
  opts.euler = false;
  opts.chern_grid = n_grid;
  return sweep(axes, fixed, opts);
}

PhaseDiagramGrid sweep_euler(const std::vector<SweepAxis>& axes,
                             const FixedParams& fixed) {
  SweepOptions opts;
  opts.chern = false;
  opts.euler = true;
  return sweep(axes, fixed, opts);
}

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string grid_to_csv(const PhaseDiagramGrid& grid) {
  std::string out = "R,r,c,chern,chi,gap_min,status\n";
  for (const auto& cell : grid.cells) {
    out += fmt17(cell.R) + ',' + fmt17(cell.r) + ',' + fmt17(cell.c) + ',';
    if (cell.chern) out += std::to_string(*cell.chern);
    out += ',';
    if (cell.chi) out += std::to_string(*cell.chi);
    out += ',';
    if (cell.gap_min) out += fmt17(*cell.gap_min);
    out += ',';
    out += to_string(cell.status());
    out += '\n';
  }
  return out;
}

std::string grid_to_json(const PhaseDiagramGrid& grid) {
  using nlohmann::json;
  json axes = json::array();
  for (const auto& a : grid.axes)
    axes.push_back({{"name", to_string(a.param)},
                    {"start", a.start},
                    {"stop", a.stop},
                    {"steps", a.steps}});
  json cells = json::array();
  for (const auto& c : grid.cells) {
    json j = {{"R", c.R},
              {"r", c.r},
              {"c", c.c},
              {"chern_status", to_string(c.chern_status)},
              {"chi_status", to_string(c.chi_status)},
              {"status", to_string(c.status())}};
    j["chern"] = c.chern ? json(*c.chern) : json(nullptr);
    j["chi"] = c.chi ? json(*c.chi) : json(nullptr);
    j["gap_min"] = c.gap_min ? json(*c.gap_min) : json(nullptr);
    cells.push_back(std::move(j));
  }
  return json{{"axes", axes}, {"cells", cells}}.dump(2) + "\n";
}

PhaseDiagramGrid grid_from_json(std::string_view text) {
  using nlohmann::json;
  try {
    const json doc = json::parse(text);
    PhaseDiagramGrid grid;
    for (const auto& a : doc.at("axes"))
      grid.axes.push_back(SweepAxis::create(
          parse_param(a.at("name").get<std::string>()),
          a.at("start").get<double>(), a.at("stop").get<double>(),
          a.at("steps").get<int>()));
    for (const auto& j : doc.at("cells")) {
      PhaseCell c;
      c.R = j.at("R").get<double>();
      c.r = j.at("r").get<double>();
      c.c = j.at("c").get<double>();
      if (!j.at("chern").is_null()) c.chern = j.at("chern").get<int>();
      if (!j.at("chi").is_null()) c.chi = j.at("chi").get<int>();
      if (!j.at("gap_min").is_null()) c.gap_min = j.at("gap_min").get<double>();
      c.chern_status =
          cell_status_from_string(j.at("chern_status").get<std::string>());
      c.chi_status = cell_status_from_string(j.at("chi_status").get<std::string>());
      grid.cells.push_back(c);
    }
    return grid;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument,
                std::string("malformed phase diagram JSON: ") + e.what());
  }
}

void write_grid(const PhaseDiagramGrid& grid, const std::string& path,
                GridFormat format) {
  const std::string body =
      format == GridFormat::Csv ? grid_to_csv(grid) : grid_to_json(grid);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << body;
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

}  // namespace velotopo
