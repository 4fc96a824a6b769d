#ifndef VELOTOPO_SWEEP_HPP
#define VELOTOPO_SWEEP_HPP

#include <velotopo/zeromode.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace velotopo {

enum class SweepParam { R, r, c };

struct SweepAxis {
  SweepParam param = SweepParam::c;
  double start = 0;
  double stop = 1;
  int steps = 1;

  /// Validated constructor: steps >= 1 and start < stop.
  static SweepAxis create(SweepParam param, double start, double stop,
                          int steps);
  /// Parses "name:start:stop:steps", e.g. "c:0.2:5.8:57".
  static SweepAxis parse(std::string_view text);

  /// Evenly spaced values, endpoints included; a single step yields start.
  std::vector<double> values() const;

  bool operator==(const SweepAxis&) const = default;
};

const char* to_string(SweepParam param);

enum class CellStatus { Ok, Gapless, Degenerate, Failed, Invalid, NotComputed };
const char* to_string(CellStatus status);
CellStatus cell_status_from_string(std::string_view text);

/// One parameter point. Each quantity carries a value or a status tag.
struct PhaseCell {
  double R = 0, r = 0, c = 0;
  std::optional<int> chern;
  CellStatus chern_status = CellStatus::NotComputed;
  std::optional<int> chi;
  CellStatus chi_status = CellStatus::NotComputed;
  std::optional<double> gap_min;

  /// Worst status among the computed quantities.
  CellStatus status() const;

  bool operator==(const PhaseCell&) const = default;
};

struct PhaseDiagramGrid {
  std::vector<SweepAxis> axes;
  /// Row-major: the first axis varies slowest.
  std::vector<PhaseCell> cells;

  bool operator==(const PhaseDiagramGrid&) const = default;
};

/// Values of R, r, c not covered by a sweep axis.
struct FixedParams {
  double R = 3;
  double r = 1;
  double c = 1;
};

struct SweepOptions {
  bool chern = true;
  bool euler = false;
  int chern_grid = 128;
  /// Cells with min |h| below this are tagged Gapless.
  double gapless_tol = 1e-3;
  ZeroModeConfig zero_cfg{};
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

PhaseDiagramGrid sweep(const std::vector<SweepAxis>& axes,
                       const FixedParams& fixed, const SweepOptions& opts);

/// Chern-number phase diagram (plaquette method, gap gated).
PhaseDiagramGrid sweep_chern(const std::vector<SweepAxis>& axes,
                             const FixedParams& fixed, int n_grid = 128);

/// Euler-characteristic phase diagram via the zero-mode index sum.
PhaseDiagramGrid sweep_euler(const std::vector<SweepAxis>& axes,
                             const FixedParams& fixed);

enum class GridFormat { Csv, Json };

/// Columns R,r,c,chern,chi,gap_min,status; absent values are empty fields.
std::string grid_to_csv(const PhaseDiagramGrid& grid);
/// {"axes": [...], "cells": [...]}.
std::string grid_to_json(const PhaseDiagramGrid& grid);
PhaseDiagramGrid grid_from_json(std::string_view text);

void write_grid(const PhaseDiagramGrid& grid, const std::string& path,
                GridFormat format);

}  // namespace velotopo

#endif  // VELOTOPO_SWEEP_HPP
