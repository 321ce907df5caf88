#pragma once

#include <optional>
#include <string>

#include "qpskew/ginzburg.hpp"

namespace qpskew {

// Parsed instance file. The action is kept in raw per-generator form; when
// every image is a single scalar multiple of an arrow it is already
// monomial, otherwise the pipeline normalizes first.
struct Instance {
  AbelianGroup group;
  std::optional<long> conductor_override;
  size_t truncation = 16;
  size_t max_cycle_length = 32;
  Quiver quiver;
  std::vector<std::vector<int>> gen_vperm;
  std::vector<std::vector<PathElement>> gen_aimg;
  std::vector<std::pair<std::string, std::vector<std::string>>> potential_raw;
  std::optional<ChoiceOverrides> overrides;
  long conductor = 1;  // resolved

  bool monomial() const;
  Potential parse_potential() const;  // over `quiver` at `conductor`

  static Instance from_json_text(const std::string& text);
  static Instance load(const std::string& path);
};

// The full pipeline: normalize when needed, fix choices, build Q_G and W_G.
struct Engine {
  Instance inst;
  Quiver quiver;  // working quiver (after normalization)
  MonomialAction action;
  Potential w;
  ChoiceData choices;
  QGQuiver qg;
  Potential wg;
  bool was_normalized = false;
  std::vector<PathElement> base_change;  // new arrow -> combination of old arrows

  SkewAlgebra algebra() const { return SkewAlgebra{&quiver, &action, inst.truncation}; }

  static Engine build(Instance inst);
};

// Property suites driven by cmd_verify (all exact)
Report run_property_suite(const Engine& eng, size_t max_len);

std::string qg_json(const Engine& eng);
std::string wg_json(const Engine& eng);
std::string choices_json(const Engine& eng);
std::string normalized_instance_json(const Instance& inst);

// CLI entry points; return process exit codes
// 0 ok, 1 verification failure, 2 invalid input, 3 non-invariant potential
int cmd_build(const std::string& instance_path, const std::string& out_dir);
int cmd_verify(const std::string& instance_path, const std::string& out_dir,
               std::optional<size_t> max_len, bool negative_control);
int cmd_normalize(const std::string& instance_path, std::optional<std::string> out_path);

}  // namespace qpskew
