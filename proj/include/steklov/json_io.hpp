#pragma once

#include <string>

#include "steklov/shape.hpp"
#include "steklov/shapegrad.hpp"

namespace steklov {

// Schema: {"rho0": float, "cos": [a1..aK], "sin": [b1..bK], "blend_start": float}.
// For perturbations "rho0" is the constant term η₀ (default 0) and
// "blend_start" is ignored: ψ always uses the blend of the map it perturbs.
// Parse failures throw BadInputError naming the offending field.

ShapeSpec shape_from_json(const std::string& text);
std::string shape_to_json(const ShapeSpec& shape);
ShapeSpec load_shape(const std::string& path);

PerturbSpec perturb_from_json(const std::string& text);
std::string perturb_to_json(const PerturbSpec& pert);
PerturbSpec load_perturb(const std::string& path);

std::string report_to_json(const CriticalityReport& report,
                           const std::vector<int>& F);

}  // namespace steklov
