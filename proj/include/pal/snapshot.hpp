#pragma once

#include <string>

#include "pal/domain.hpp"
#include "pal/perception.hpp"

namespace pal {

struct ModelSnapshot {
    Domain domain;
    PerceptionTable perceptions;
};

/// Structured-text snapshot of the extended domain: schema, action set,
/// interned states, gamma, and all perception parameters including the
/// running MLE statistics. Floats carry 17 significant digits, so a
/// save/load round trip is value-exact.
std::string save_model(const Domain& d, const PerceptionTable& pt);
ModelSnapshot load_model(const std::string& text);

void save_model_file(const Domain& d, const PerceptionTable& pt, const std::string& path);
ModelSnapshot load_model_file(const std::string& path);

}  // namespace pal
