#pragma once

#include "ock/ode_learner.hpp"
#include "ock/pde_learner.hpp"

#include <string>

namespace ock {

// JSON model files with an explicit format_version. Doubles round-trip
// bit-exactly (shortest-representation encoding on write, strtod on read).
inline constexpr int kModelFormatVersion = 1;

void save_model(const std::string& path, const OckModel& model);
OckModel load_model(const std::string& path);

void save_pde_model(const std::string& path, const PdeModel& model);
PdeModel load_pde_model(const std::string& path);

}  // namespace ock
