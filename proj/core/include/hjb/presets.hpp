#pragma once

#include "hjb/problem.hpp"

#include <map>
#include <string>
#include <vector>

namespace hjb {

struct PresetDescriptor {
  std::string name;
  /// "model" (control-free) or "control".
  std::string equation_form;
  std::string description;
  std::map<std::string, double> defaults;
  /// Suites that apply, in run order.
  std::vector<std::string> suites;
  bool infinity_path = false;
  bool blowup = false;
  bool zero_diffusion = false;
  /// Initial datum and envelopes are o(1+|x|^p), so the eps family applies.
  bool strict_class_data = false;
};

/// The fixed table: eq3_lq, power_model, lp_deterministic, briand_hu.
const std::vector<PresetDescriptor>& preset_registry();

/// Throws UnknownPreset listing the valid names.
const PresetDescriptor& find_preset(const std::string& name);

/// Builds the problem with defaults overridden by `params`. Unknown keys or
/// values outside the preset domain throw ConfigInvalid.
ProblemSpec make_preset(const std::string& name, const std::map<std::string, double>& params = {});

/// {"preset": name, "params": {key: number}}.
ProblemSpec problem_from_json(const std::string& json_text);

}  // namespace hjb
