#pragma once

#include <string>

#include "hpng/model.hpp"

namespace hpng::test {

inline std::string model_path(const std::string& file) { return std::string(HPNG_MODEL_DIR) + "/" + file; }

inline Model reservoir() { return load_model(model_path("reservoir.json")); }
inline Model battery() { return load_model(model_path("battery.json")); }

// Battery with the deterministic battery-discharge delay set to `hours`.
inline Model battery_with_discharge(double hours) {
    Model m = battery();
    m.transitions.at(m.find_transition("Td0")).firingTime = hours;
    return m;
}

}  // namespace hpng::test
