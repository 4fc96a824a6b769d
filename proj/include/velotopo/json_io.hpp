#ifndef VELOTOPO_JSON_IO_HPP
#define VELOTOPO_JSON_IO_HPP

#include <velotopo/chern.hpp>
#include <velotopo/winding.hpp>
#include <velotopo/zeromode.hpp>

#include <string>
#include <vector>

namespace velotopo {

// Structured output shared by the library and the command-line tool. All
// documents end with a newline and are stable for identical inputs.

/// [{kx, ky, det, trace, index, kind, weight_num, weight_den}, ...]
std::string zero_modes_json(const std::vector<ZeroMode>& modes);

/// {chi, weight_mode, modes: [...]}
std::string euler_json(const EulerResult& result);

/// {raw, value, gap_min, method, grid_n}
std::string chern_json(const ChernResult& result);

/// {w, total_angle, min_field_norm, samples_used}
std::string winding_json(const WindingResult& result);

}  // namespace velotopo

#endif  // VELOTOPO_JSON_IO_HPP
