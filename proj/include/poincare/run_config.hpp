#pragma once

// Run configuration shared by the CLI subcommands: tolerances, default
// truncation heights, output format, RNG seed, worker count. Parsed from a
// JSON file; every CLI flag overrides the file value.

#include <cstdlib>
#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "poincare/quadrature.hpp"
#include "poincare/specfun.hpp"

namespace poincare::cli {

struct RunConfig {
  specfun::Precision precision{};
  quad::QuadratureSpec quadrature{};
  long elliptic_height = 40;
  long sp2_height = 2;
  std::string format = "json";  // json | csv | text
  unsigned long seed = 20250810;
  unsigned workers = 2;

  static RunConfig from_json(const nlohmann::json& j) {
    RunConfig c;
    if (j.contains("precision")) {
      const auto& p = j.at("precision");
      if (p.contains("rel_tol")) c.precision.rel_tol = p.at("rel_tol").get<double>();
      if (p.contains("abs_tol")) c.precision.abs_tol = p.at("abs_tol").get<double>();
      if (p.contains("max_refinement_depth"))
        c.precision.max_refinement_depth = p.at("max_refinement_depth").get<int>();
    }
    if (j.contains("quadrature")) {
      const auto& q = j.at("quadrature");
      if (q.contains("rel_tol")) c.quadrature.rel_tol = q.at("rel_tol").get<double>();
      if (q.contains("abs_tol")) c.quadrature.abs_tol = q.at("abs_tol").get<double>();
      if (q.contains("max_depth")) c.quadrature.max_depth = q.at("max_depth").get<int>();
      if (q.contains("boundary_exponent_guard"))
        c.quadrature.boundary_exponent_guard = q.at("boundary_exponent_guard").get<double>();
    }
    if (j.contains("elliptic_height")) c.elliptic_height = j.at("elliptic_height").get<long>();
    if (j.contains("sp2_height")) c.sp2_height = j.at("sp2_height").get<long>();
    if (j.contains("format")) c.format = j.at("format").get<std::string>();
    if (j.contains("seed")) c.seed = j.at("seed").get<unsigned long>();
    if (j.contains("workers")) c.workers = j.at("workers").get<unsigned>();
    if (c.precision.rel_tol <= 0 || c.precision.abs_tol <= 0 || c.quadrature.rel_tol <= 0 ||
        c.quadrature.abs_tol <= 0)
      throw std::invalid_argument("RunConfig: tolerances must be positive");
    return c;
  }

  nlohmann::json to_json() const {
    return {
        {"precision",
         {{"rel_tol", precision.rel_tol},
          {"abs_tol", precision.abs_tol},
          {"max_refinement_depth", precision.max_refinement_depth}}},
        {"quadrature",
         {{"rel_tol", quadrature.rel_tol},
          {"abs_tol", quadrature.abs_tol},
          {"max_depth", quadrature.max_depth},
          {"boundary_exponent_guard", quadrature.boundary_exponent_guard}}},
        {"elliptic_height", elliptic_height},
        {"sp2_height", sp2_height},
        {"format", format},
        {"seed", seed},
        {"workers", workers}};
  }

  // config file taken from --config or the POINCARE_CONFIG environment variable
  static RunConfig load(const std::optional<std::string>& path_flag) {
    std::string path;
    if (path_flag) {
      path = *path_flag;
    } else if (const char* env = std::getenv("POINCARE_CONFIG")) {
      path = env;
    } else {
      return RunConfig{};
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("RunConfig: cannot open config file " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
  }
};

} // namespace poincare::cli
