#ifndef SBM_BUILDER_HPP
#define SBM_BUILDER_HPP

#include <string>

#include "sbm/engine.hpp"
#include "sbm/modelfile.hpp"

namespace sbm {

// Instantiates a parsed document: scenario objects, the controller wrapper,
// compiled guards and the sensor. File paths (weights, sensor inputs) are
// resolved relative to `base_dir`.
Model build_model(const ModelDocument& doc, const std::string& base_dir = ".");

// Builds a single declared scenario (no assembly parts).
ScenarioObject build_scenario(const ScenarioDecl& decl);

} // namespace sbm

#endif
