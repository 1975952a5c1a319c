/* Copyright 2026 The StyleAug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "styleaug/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <map>

#include "json.hpp"
#include "styleaug/error.hpp"

#ifndef STYLEAUG_DEFAULT_WEIGHTS
#define STYLEAUG_DEFAULT_WEIGHTS "data/weights/adain_b8.adwt"
#endif

namespace styleaug {
namespace {

using Setter = std::function<void(PipelineConfig&, const std::string&)>;

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  fail(ErrorCode::kConfigError, "invalid value '" + value + "' for '" + key + "'");
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

template <typename T>
T to_integer(const std::string& key, const std::string& v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(key, v);
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v);
}

template <typename F>
Setter real(F&& field) {
  return [field](PipelineConfig& c, const std::string& v) { field(c) = to_double("", v); };
}

template <typename F>
Setter count(F&& field) {
  return [field](PipelineConfig& c, const std::string& v) {
    field(c) = to_integer<std::size_t>("", v);
  };
}

template <typename F>
Setter integer(F&& field) {
  return [field](PipelineConfig& c, const std::string& v) { field(c) = to_integer<int>("", v); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"run.seed", [](PipelineConfig& c, const std::string& v) {
         c.seed = to_integer<std::uint64_t>("run.seed", v);
         c.train.seed = c.seed;
       }},
      {"run.weights", [](PipelineConfig& c, const std::string& v) { c.weights = v; }},
      {"run.workers", [](PipelineConfig& c, const std::string& v) {
         c.workers = to_integer<std::size_t>("run.workers", v);
       }},
      {"policy.name", [](PipelineConfig& c, const std::string& v) {
         try {
           c.policy.kind = parse_policy_kind(v);
         } catch (const Error&) {
           bad_value("policy.name", v);
         }
       }},
      {"policy.inception_scale_min", real([](PipelineConfig& c) -> double& { return c.policy.inception.crop.scale_min; })},
      {"policy.inception_scale_max", real([](PipelineConfig& c) -> double& { return c.policy.inception.crop.scale_max; })},
      {"policy.inception_ratio_min", real([](PipelineConfig& c) -> double& { return c.policy.inception.crop.ratio_min; })},
      {"policy.inception_ratio_max", real([](PipelineConfig& c) -> double& { return c.policy.inception.crop.ratio_max; })},
      {"policy.flip_prob", real([](PipelineConfig& c) -> double& { return c.policy.inception.flip_prob; })},
      {"policy.crop_scale_min", real([](PipelineConfig& c) -> double& { return c.policy.crop.crop.scale_min; })},
      {"policy.crop_scale_max", real([](PipelineConfig& c) -> double& { return c.policy.crop.crop.scale_max; })},
      {"policy.translate_x", real([](PipelineConfig& c) -> double& { return c.policy.translate.max_fraction_x; })},
      {"policy.translate_y", real([](PipelineConfig& c) -> double& { return c.policy.translate.max_fraction_y; })},
      {"policy.brightness", real([](PipelineConfig& c) -> double& { return c.policy.color.brightness; })},
      {"policy.contrast", real([](PipelineConfig& c) -> double& { return c.policy.color.contrast; })},
      {"policy.saturation", real([](PipelineConfig& c) -> double& { return c.policy.color.saturation; })},
      {"policy.hue", real([](PipelineConfig& c) -> double& { return c.policy.color.hue; })},
      {"policy.augmix_width", integer([](PipelineConfig& c) -> int& { return c.policy.augmix.width; })},
      {"policy.augmix_depth_min", integer([](PipelineConfig& c) -> int& { return c.policy.augmix.depth_min; })},
      {"policy.augmix_depth_max", integer([](PipelineConfig& c) -> int& { return c.policy.augmix.depth_max; })},
      {"policy.augmix_severity", real([](PipelineConfig& c) -> double& { return c.policy.augmix.severity; })},
      {"policy.augmix_alpha", [](PipelineConfig& c, const std::string& v) {
         c.policy.augmix.dirichlet_alpha = c.policy.augmix.beta_alpha = to_double("policy.augmix_alpha", v);
       }},
      {"policy.randaugment_ops", integer([](PipelineConfig& c) -> int& { return c.policy.randaugment.num_ops; })},
      {"policy.randaugment_magnitude", integer([](PipelineConfig& c) -> int& { return c.policy.randaugment.magnitude; })},
      {"policy.randaugment_bins", integer([](PipelineConfig& c) -> int& { return c.policy.randaugment.num_bins; })},
      {"policy.fovea_tau", real([](PipelineConfig& c) -> double& { return c.policy.neurofovea.tau; })},
      {"policy.fovea_floor", real([](PipelineConfig& c) -> double& { return c.policy.neurofovea.min_weight; })},
      {"policy.style_alpha", real([](PipelineConfig& c) -> double& { return c.policy.styleaug.alpha; })},
      {"policy.style_beta", real([](PipelineConfig& c) -> double& { return c.policy.styleaug.beta; })},
      {"policy.style_m", [](PipelineConfig& c, const std::string& v) {
         c.policy.styleaug.forced_m = to_double("policy.style_m", v);
       }},
      {"loss.lambda", real([](PipelineConfig& c) -> double& { return c.loss.lambda; })},
      {"loss.label_smoothing", real([](PipelineConfig& c) -> double& { return c.loss.label_smoothing; })},
      {"train.epochs", count([](PipelineConfig& c) -> std::size_t& { return c.train.epochs; })},
      {"train.batch_size", count([](PipelineConfig& c) -> std::size_t& { return c.train.batch_size; })},
      {"train.learning_rate", real([](PipelineConfig& c) -> double& { return c.train.learning_rate; })},
      {"train.weight_decay", real([](PipelineConfig& c) -> double& { return c.train.weight_decay; })},
      {"train.eval_fraction", real([](PipelineConfig& c) -> double& { return c.train.eval_fraction; })},
      {"train.use_jsd", [](PipelineConfig& c, const std::string& v) {
         c.train.use_jsd = to_bool("train.use_jsd", v);
       }},
      {"train.ce_target", [](PipelineConfig& c, const std::string& v) {
         if (v == "aug1") {
           c.train.ce_target = CeTarget::kAug1;
         } else if (v == "orig") {
           c.train.ce_target = CeTarget::kOrig;
         } else {
           bad_value("train.ce_target", v);
         }
       }},
  };
  return table;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void apply_setting(PipelineConfig& cfg, std::string_view section, std::string_view key,
                   std::string_view value) {
  const std::string full = trim(section) + "." + trim(key);
  const auto it = setters().find(full);
  if (it == setters().end()) fail(ErrorCode::kConfigError, "unknown setting '" + full + "'");
  const std::string v = trim(value);
  try {
    it->second(cfg, v);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConfigError) throw Error(e.code(), "invalid value '" + v + "' for '" + full + "'");
    throw;
  }
}

void apply_setting(PipelineConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    fail(ErrorCode::kConfigError,
         "expected section.key=value, got '" + std::string(assignment) + "'");
  }
  apply_setting(cfg, assignment.substr(0, dot), assignment.substr(dot + 1, eq - dot - 1),
                assignment.substr(eq + 1));
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path.string(), tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    fail(ErrorCode::kConfigError, e.what());
  }
  PipelineConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      fail(ErrorCode::kConfigError, "setting '" + section + "' outside a section in " + path.string());
    }
    for (const auto& [key, value] : body) {
      apply_setting(cfg, section, key, value.data());
    }
  }
  cfg.validate();
  return cfg;
}

void PipelineConfig::validate() const {
  try {
    policy.validate();
    LossConfig l = loss;
    l.num_classes = std::max<std::size_t>(2, l.num_classes);
    l.validate();
    TrainConfig t = train;
    t.policy = policy;
    t.loss = l;
    t.validate();
    if (workers && *workers == 0) fail(ErrorCode::kInvalidParameter, "workers must be positive");
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidParameter) throw Error(ErrorCode::kConfigError, e.what());
    throw;
  }
}

std::string policy_to_json(const AugmentationPolicy& p) {
  nlohmann::ordered_json j;
  j["name"] = policy_name(p.kind);
  j["inception"] = {{"scale", {p.inception.crop.scale_min, p.inception.crop.scale_max}},
                    {"ratio", {p.inception.crop.ratio_min, p.inception.crop.ratio_max}},
                    {"flip_prob", p.inception.flip_prob},
                    {"size", p.inception.size}};
  switch (p.kind) {
    case PolicyKind::kCrop:
      j["crop"] = {{"scale", {p.crop.crop.scale_min, p.crop.crop.scale_max}},
                   {"ratio", {p.crop.crop.ratio_min, p.crop.crop.ratio_max}}};
      break;
    case PolicyKind::kTranslate:
      j["translate"] = {p.translate.max_fraction_x, p.translate.max_fraction_y};
      break;
    case PolicyKind::kColor:
      j["color"] = {{"brightness", p.color.brightness},
                    {"contrast", p.color.contrast},
                    {"saturation", p.color.saturation},
                    {"hue", p.color.hue}};
      break;
    case PolicyKind::kAugMixLite:
      j["augmix"] = {{"width", p.augmix.width},
                     {"depth", {p.augmix.depth_min, p.augmix.depth_max}},
                     {"severity", p.augmix.severity},
                     {"alpha", p.augmix.dirichlet_alpha}};
      break;
    case PolicyKind::kRandAugmentLite:
      j["randaugment"] = {{"ops", p.randaugment.num_ops},
                          {"magnitude", p.randaugment.magnitude},
                          {"bins", p.randaugment.num_bins}};
      break;
    case PolicyKind::kNeurofovea:
      j["neurofovea"] = {{"tau", p.neurofovea.tau}, {"min_weight", p.neurofovea.min_weight}};
      break;
    case PolicyKind::kStyleAug:
    case PolicyKind::kStyleAugCrop:
      j["styleaug"] = {{"alpha", p.styleaug.alpha}, {"beta", p.styleaug.beta}};
      if (p.styleaug.forced_m) j["styleaug"]["forced_m"] = *p.styleaug.forced_m;
      if (p.kind == PolicyKind::kStyleAugCrop) {
        j["crop"] = {{"scale", {p.crop.crop.scale_min, p.crop.crop.scale_max}},
                     {"ratio", {p.crop.crop.ratio_min, p.crop.crop.ratio_max}}};
      }
      break;
  }
  return j.dump();
}

std::filesystem::path resolve_weights_path(const std::optional<std::filesystem::path>& flag,
                                           const PipelineConfig& cfg) {
  if (flag) return *flag;
  if (const char* env = std::getenv("STYLEAUG_WEIGHTS"); env != nullptr && *env != '\0') {
    return env;
  }
  if (cfg.weights) return *cfg.weights;
  return STYLEAUG_DEFAULT_WEIGHTS;
}

}  // namespace styleaug
