#include <velotopo/json_io.hpp>

#include <json.hpp>

namespace velotopo {

using nlohmann::json;

namespace {

json mode_json(const ZeroMode& z) {
  return {{"kx", z.location.x()},         {"ky", z.location.y()},
          {"det", z.det},                 {"trace", z.trace},
          {"index", z.index},             {"kind", to_string(z.kind)},
          {"weight_num", z.weight.num},   {"weight_den", z.weight.den}};
}

json modes_array(const std::vector<ZeroMode>& modes) {
  json arr = json::array();
  for (const auto& z : modes) arr.push_back(mode_json(z));
  return arr;
}

}  // namespace

std::string zero_modes_json(const std::vector<ZeroMode>& modes) {
  return modes_array(modes).dump(2) + "\n";
}

std::string euler_json(const EulerResult& result) {
  return json{{"chi", result.chi},
              {"weight_mode", to_string(result.weight_mode)},
              {"modes", modes_array(result.modes)}}
             .dump(2) +
         "\n";
}

std::string chern_json(const ChernResult& result) {
  return json{{"raw", result.raw},
              {"value", result.value},
              {"gap_min", result.gap_min},
              {"method", to_string(result.method)},
              {"grid_n", result.grid_n}}
             .dump(2) +
         "\n";
}

std::string winding_json(const WindingResult& result) {
  return json{{"w", result.w},
              {"total_angle", result.total_angle},
              {"min_field_norm", result.min_field_norm},
              {"samples_used", result.samples_used}}
             .dump(2) +
         "\n";
}

}  // namespace velotopo
