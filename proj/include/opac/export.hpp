#pragma once

#include "opac/model.hpp"

#include <set>
#include <string>

namespace opac {

/// Model as JSON. Probabilities are exact "num/den" strings; hidden labels map
/// to null in "observations".
std::string export_json(const Model& m, int indent = 2);

/// DOT graph with "p:label" edges. States in `highlight` are filled.
std::string export_dot(const Model& m, const std::set<StateId>& highlight = {});

}  // namespace opac
