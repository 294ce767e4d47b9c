#include "steklov/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "steklov/errors.hpp"

namespace steklov {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw BadInputError("malformed JSON document");
  if (!j.is_object()) throw BadInputError("top-level JSON value must be an object");
  return j;
}

double require_number(const json& j, const char* field) {
  if (!j.contains(field)) throw BadInputError(std::string("missing field \"") + field + "\"");
  if (!j.at(field).is_number())
    throw BadInputError(std::string("field \"") + field + "\" must be a number");
  return j.at(field).get<double>();
}

double optional_number(const json& j, const char* field, double fallback) {
  if (!j.contains(field)) return fallback;
  if (!j.at(field).is_number())
    throw BadInputError(std::string("field \"") + field + "\" must be a number");
  return j.at(field).get<double>();
}

std::vector<double> optional_array(const json& j, const char* field) {
  if (!j.contains(field)) return {};
  const json& a = j.at(field);
  if (!a.is_array())
    throw BadInputError(std::string("field \"") + field + "\" must be an array of numbers");
  std::vector<double> out;
  out.reserve(a.size());
  for (const auto& v : a) {
    if (!v.is_number())
      throw BadInputError(std::string("field \"") + field + "\" must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadInputError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ShapeSpec shape_from_json(const std::string& text) {
  const json j = parse(text);
  ShapeSpec s;
  s.rho0 = require_number(j, "rho0");
  s.cos_coeffs = optional_array(j, "cos");
  s.sin_coeffs = optional_array(j, "sin");
  s.blend_start = optional_number(j, "blend_start", 0.3);
  return s;
}

std::string shape_to_json(const ShapeSpec& shape) {
  json j;
  j["rho0"] = shape.rho0;
  j["cos"] = shape.cos_coeffs;
  j["sin"] = shape.sin_coeffs;
  j["blend_start"] = shape.blend_start;
  return j.dump(2);
}

ShapeSpec load_shape(const std::string& path) { return shape_from_json(read_file(path)); }

PerturbSpec perturb_from_json(const std::string& text) {
  const json j = parse(text);
  PerturbSpec p;
  p.eta0 = optional_number(j, "rho0", 0.0);
  p.cos_coeffs = optional_array(j, "cos");
  p.sin_coeffs = optional_array(j, "sin");
  return p;
}

std::string perturb_to_json(const PerturbSpec& pert) {
  json j;
  j["rho0"] = pert.eta0;
  j["cos"] = pert.cos_coeffs;
  j["sin"] = pert.sin_coeffs;
  return j.dump(2);
}

PerturbSpec load_perturb(const std::string& path) {
  return perturb_from_json(read_file(path));
}

std::string report_to_json(const CriticalityReport& report, const std::vector<int>& F) {
  json j;
  j["constraint"] = to_string(report.constraint);
  j["F"] = F;
  j["fitted_constant"] = report.fitted_constant;
  j["residual"] = report.residual;
  j["multiplier"] = report.multiplier;
  j["multiplier_for_h"] = 1;
  j["lambda_F"] = report.lambda_F;
  return j.dump(2);
}

}  // namespace steklov
