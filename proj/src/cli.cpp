#include <velotopo/chern.hpp>
#include <velotopo/cli.hpp>
#include <velotopo/json_io.hpp>
#include <velotopo/model.hpp>
#include <velotopo/sweep.hpp>
#include <velotopo/winding.hpp>
#include <velotopo/zeromode.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace velotopo {

namespace {

struct ModelFlags {
  double R = 3;
  double r = 1;
  double c = 1;
};

void add_model_flags(CLI::App* cmd, ModelFlags& m) {
  cmd->add_option("--R", m.R, "Major torus radius")->capture_default_str();
  cmd->add_option("--r", m.r, "Tube radius (0 < r < R)")->capture_default_str();
  cmd->add_option("--c", m.c, "Shift of the torus along h_x (c >= 0)")
      ->capture_default_str();
}

ModelParams validated(const ModelFlags& m) {
  try {
    return ModelParams::create(m.R, m.r, m.c);
  } catch (const Error& e) {
    throw CLI::ValidationError("--R/--r/--c", e.what());
  }
}

struct ZeroFlags {
  int seeds = 64;
  double tol = 1e-12;
  Band band = Band::Upper;
  WeightMode weights = WeightMode::ClosedBZWeights;
};

void add_zero_flags(CLI::App* cmd, ZeroFlags& z) {
  cmd->add_option("--seeds", z.seeds, "Newton seeds per axis")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", z.tol, "Convergence tolerance on |v|")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--band", z.band, "Band whose gradient field is analysed")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Band>{{"upper", Band::Upper},
                                      {"lower", Band::Lower}}))
      ->default_str("upper");
  cmd->add_option("--weights", z.weights,
                  "closed: closed-BZ representatives with 1/2 and 1/4 "
                  "boundary weights; canonical: one per zero")
      ->transform(CLI::CheckedTransformer(std::map<std::string, WeightMode>{
          {"closed", WeightMode::ClosedBZWeights},
          {"canonical", WeightMode::CanonicalCell}}))
      ->default_str("closed");
}

ZeroModeConfig zero_config(const ZeroFlags& z) {
  ZeroModeConfig cfg;
  cfg.seeds_per_axis = z.seeds;
  cfg.tol = z.tol;
  cfg.band = z.band;
  cfg.weight_mode = z.weights;
  return cfg;
}

void emit(const std::string& body, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << body;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  file << body;
  if (!file) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

KPoint parse_center(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw CLI::ValidationError("--center", "expected kx,ky");
  try {
    return KPoint(std::stod(text.substr(0, comma)),
                  std::stod(text.substr(comma + 1)));
  } catch (const std::exception&) {
    throw CLI::ValidationError("--center", "cannot parse '" + text + "'");
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Topological invariants of two-band Bloch Hamiltonians from "
               "the zero modes of the band velocity field"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  ModelFlags model;
  ZeroFlags zflags;
  std::string out_path;

  auto* zeros = app.add_subcommand("zeros", "Zero modes of the velocity field");
  add_model_flags(zeros, model);
  add_zero_flags(zeros, zflags);
  zeros->add_option("--out", out_path, "Write JSON here instead of stdout");

  auto* euler = app.add_subcommand(
      "euler", "Euler characteristic from the weighted zero-mode index sum");
  add_model_flags(euler, model);
  add_zero_flags(euler, zflags);
  euler->add_option("--out", out_path, "Write JSON here instead of stdout");

  std::string chern_method = "plaquette";
  int chern_n = 0;
  auto* chern = app.add_subcommand("chern", "Chern number over the BZ");
  add_model_flags(chern, model);
  chern->add_option("--method", chern_method, "plaquette or direct")
      ->check(CLI::IsMember({"plaquette", "direct"}))
      ->capture_default_str();
  chern->add_option("--n", chern_n,
                    "Grid size (default 64 for plaquette, 256 for direct)")
      ->check(CLI::NonNegativeNumber);
  chern->add_option("--out", out_path, "Write JSON here instead of stdout");

  LoopSpec loop;
  std::string center = "0,0";
  Band winding_band = Band::Upper;
  auto* winding = app.add_subcommand(
      "winding", "Winding of (v_x, v_y) around a circular loop in the BZ");
  add_model_flags(winding, model);
  winding->add_option("--center", center, "Loop center kx,ky")
      ->capture_default_str();
  winding->add_option("--radius", loop.radius, "Loop radius")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  winding->add_option("--samples", loop.samples,
                      "Initial samples (doubled up to --max-samples)")
      ->capture_default_str()
      ->check(CLI::Range(16, 1 << 24));
  winding->add_option("--max-samples", loop.max_samples, "Sampling cap for refinement")->capture_default_str();
  winding->add_option("--band", winding_band, "upper or lower")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Band>{{"upper", Band::Upper},
                                      {"lower", Band::Lower}}))
      ->default_str("upper");
  winding->add_option("--out", out_path, "Write JSON here instead of stdout");

  std::vector<std::string> axis_specs;
  std::string quantity = "chern";
  std::string format = "json";
  int sweep_n = 128;
  unsigned threads = 0;
  auto* phase = app.add_subcommand(
      "phase-diagram", "Chern / Euler phase diagram over one or two axes");
  add_model_flags(phase, model);
  phase->add_option("--axis", axis_specs,
                    "Sweep axis name:start:stop:steps (name in R, r, c); "
                    "give once or twice")
      ->required()
      ->expected(1, 2);
  phase->add_option("--quantity", quantity, "chern, euler or both")
      ->check(CLI::IsMember({"chern", "euler", "both"}))
      ->capture_default_str();
  phase->add_option("--n", sweep_n, "Plaquette grid for the Chern number")
      ->capture_default_str()
      ->check(CLI::Range(16, 1 << 14));
  phase->add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  phase->add_option("--threads", threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  phase->add_option("--out", out_path, "Write the grid here instead of stdout");

  int dump_n = 64;
  auto* dump = app.add_subcommand(
      "field-dump", "CSV of h(k) and v(k) on a uniform grid for plotting");
  add_model_flags(dump, model);
  dump->add_option("--n", dump_n, "Grid nodes per axis")
      ->capture_default_str()
      ->check(CLI::Range(2, 1 << 14));
  dump->add_option("--out", out_path, "Write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (zeros->parsed()) {
      const auto p = validated(model);
      auto cfg = zero_config(zflags);
      const auto result = euler_characteristic(p, cfg);
      emit(zero_modes_json(result.modes), out_path, out);
      err << "chi " << result.chi << "\n";
    } else if (euler->parsed()) {
      const auto p = validated(model);
      emit(euler_json(euler_characteristic(p, zero_config(zflags))), out_path,
           out);
    } else if (chern->parsed()) {
      const auto p = validated(model);
      const bool direct = chern_method == "direct";
      const int n = chern_n > 0 ? chern_n : (direct ? 256 : 64);
      const auto result = direct ? chern_direct(p, n) : chern_plaquette(p, n);
      emit(chern_json(result), out_path, out);
    } else if (winding->parsed()) {
      const auto p = validated(model);
      loop.center = parse_center(center);
      emit(winding_json(winding_hermitian(loop, p, winding_band)), out_path,
           out);
    } else if (phase->parsed()) {
      std::vector<SweepAxis> axes;
      for (const auto& spec : axis_specs) {
        try {
          axes.push_back(SweepAxis::parse(spec));
        } catch (const Error& e) {
          throw CLI::ValidationError("--axis", e.what());
        }
      }
      SweepOptions opts;
      opts.chern = quantity != "euler";
      opts.euler = quantity != "chern";
      opts.chern_grid = sweep_n;
      opts.threads = threads;
      const auto grid = sweep(axes, {model.R, model.r, model.c}, opts);
      emit(format == "csv" ? grid_to_csv(grid) : grid_to_json(grid), out_path,
           out);
    } else if (dump->parsed()) {
      const auto p = validated(model);
      emit(surface_csv(surface_sample(p, dump_n)), out_path, out);
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_domain_error(e.kind()) ? kExitDomain : kExitUsage;
  }
  return kExitOk;
}

}  // namespace velotopo
