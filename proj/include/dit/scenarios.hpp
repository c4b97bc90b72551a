#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dit {

// Bundled scenario documents, runnable by name. The files under scenarios/
// carry the same bytes for reference.

inline constexpr const char* scenario_free = R"({
  "constants": {"m": 1.0, "hbar": 1.0},
  "aperture": {"type": "staircase", "breakpoints": [], "levels": [1.0]},
  "initial_state": {"type": "coherent", "q": -10.0, "p": 5.0},
  "time": 3.0,
  "grid": {"x_min": -16.75, "x_max": -3.25, "n": 1201},
  "output_grid": {"x_min": -5.0125, "x_max": 14.9875, "n": 801},
  "output": {"directory": "out", "prefix": "free"}
}
)";

inline constexpr const char* scenario_closed = R"({
  "constants": {"m": 1.0, "hbar": 1.0},
  "aperture": {"type": "staircase", "breakpoints": [], "levels": [0.0]},
  "initial_state": {"type": "coherent", "q": -10.0, "p": 5.0},
  "time": 3.0,
  "grid": {"x_min": -16.75, "x_max": -3.25, "n": 1201},
  "output_grid": {"x_min": -20.0125, "x_max": 24.9875, "n": 901},
  "output": {"directory": "out", "prefix": "closed"}
}
)";

inline constexpr const char* scenario_moshinsky = R"({
  "constants": {"m": 1.0, "hbar": 1.0},
  "aperture": {"type": "staircase", "breakpoints": [0.5], "levels": [0.0, 1.0]},
  "initial_state": {"type": "coherent", "q": -10.0, "p": 5.0},
  "time": 3.0,
  "grid": {"x_min": -16.75, "x_max": -3.25, "n": 1201},
  "output_grid": {"x_min": -20.0125, "x_max": 24.9875, "n": 901},
  "output": {"directory": "out", "prefix": "moshinsky"}
}
)";

inline constexpr const char* scenario_fig2a = R"({
  "constants": {"m": 1.0, "hbar": 1.0},
  "aperture": {"type": "grating", "cell": {"breakpoints": [0.056], "levels": [0.0, 1.0]}, "dt": 0.056, "periods": 27},
  "initial_state": {"type": "coherent", "q": -10.0, "p": 5.0},
  "time": 3.0,
  "grid": {"x_min": -16.75, "x_max": -3.25, "n": 1201},
  "output_grid": {"x_min": -25.0125, "x_max": 29.9875, "n": 4401},
  "husimi": {"q_min": -15.0, "q_max": 22.5, "nq": 201, "p_min": -15.0, "p_max": 22.5, "np": 201},
  "output": {"directory": "out", "prefix": "fig2a"}
}
)";

inline constexpr const char* scenario_fig2c = R"({
  "constants": {"m": 1.0, "hbar": 1.0},
  "aperture": {"type": "grating", "cell": {"breakpoints": [0.056, 0.112], "levels": [0.0, 0.5, 1.0]}, "dt": 0.056, "periods": 18},
  "initial_state": {"type": "coherent", "q": -10.0, "p": 5.0},
  "time": 3.0,
  "grid": {"x_min": -16.75, "x_max": -3.25, "n": 1201},
  "output_grid": {"x_min": -25.0125, "x_max": 29.9875, "n": 4401},
  "husimi": {"q_min": -15.0, "q_max": 22.5, "nq": 201, "p_min": -15.0, "p_max": 22.5, "np": 201},
  "output": {"directory": "out", "prefix": "fig2c"}
}
)";

inline const char* bundled_scenario(std::string_view name) {
    if (name == "free") return scenario_free;
    if (name == "closed") return scenario_closed;
    if (name == "moshinsky") return scenario_moshinsky;
    if (name == "fig2a") return scenario_fig2a;
    if (name == "fig2c") return scenario_fig2c;
    return nullptr;
}

inline std::vector<std::string> bundled_scenario_names() {
    return {"free", "closed", "moshinsky", "fig2a", "fig2c"};
}

}  // namespace dit
