#pragma once

#include <string>

#include "subwave/types.hpp"

namespace subwave {

// JSON config schema:
// {
//   "lattice":  {"period": 1.0},
//   "geometry": {"centers": [[0.25,0,0],[0.75,0,0]], "radii": [0.15,0.15]},
//   "material": {"V": [[1.0,0.6],[1.0,-0.6]]},
//   "defects":  [{"cell": 0, "resonator": 1, "V_def": [0.01,-0.007]}]
// }
// Complex numbers are [re, im] pairs; "resonator" is 1-based in the file.
Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);
std::string config_to_json(const Config& cfg);

// Complex scalar in CLI notation: "1.2-0.4i", "0.5i", "-3", "1e-2+7i".
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

} // namespace subwave
