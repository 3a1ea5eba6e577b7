#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cts/pipeline.hpp"

namespace cts {

// Run configuration shared by the training commands. Every field is optional
// with the defaults below; unknown keys are rejected.
struct RunConfig {
  TrainConfig train;
  std::string variant = "eg_ed";
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::string source_dir, target_dir, templates_file, embedding_file, output_dir, meta_file;
};

inline nlohmann::json to_json(const MsParams& p) {
  return nlohmann::json{{"alpha", p.alpha},
                        {"beta", p.beta},
                        {"gamma", p.gamma},
                        {"epsilon", p.epsilon},
                        {"rho", p.rho},
                        {"tau", p.tau},
                        {"lambda_source", p.lambda_source},
                        {"lambda_target", p.lambda_target}};
}

inline MsParams ms_params_from_json(const nlohmann::json& j) {
  MsParams p;
  const nlohmann::json defaults = to_json(p);
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw ValueError("MsParams: unknown key '" + key + "'");
    (void)value;
  }
  auto get = [&](const char* key, double& field) {
    if (j.contains(key)) field = j.at(key).get<double>();
  };
  get("alpha", p.alpha);
  get("beta", p.beta);
  get("gamma", p.gamma);
  get("epsilon", p.epsilon);
  get("rho", p.rho);
  get("tau", p.tau);
  get("lambda_source", p.lambda_source);
  get("lambda_target", p.lambda_target);
  p.validate();
  return p;
}

inline nlohmann::json to_json(const RunConfig& c) {
  return nlohmann::json{{"variant", c.variant},
                        {"seeds", c.seeds},
                        {"seed", c.train.seed},
                        {"ms", to_json(c.train.ms)},
                        {"mode", c.train.mode == EmbeddingMode::concat ? "concat" : "sentEnc"},
                        {"aux_dim", c.train.aux_dim},
                        {"batch_source", c.train.batch_source},
                        {"batch_target", c.train.batch_target},
                        {"max_epochs", c.train.max_epochs},
                        {"patience", c.train.patience},
                        {"embed_dim", c.train.tagger.embed_dim},
                        {"hidden_dim", c.train.tagger.hidden_dim},
                        {"window", c.train.tagger.window},
                        {"lr", c.train.lr},
                        {"weight_decay", c.train.weight_decay},
                        {"clip_norm", c.train.clip_norm},
                        {"fewshot", c.train.fewshot_target},
                        {"fewshot_lo", c.train.fewshot_lo},
                        {"fewshot_hi", c.train.fewshot_hi},
                        {"refresh_pseudo", c.train.refresh_pseudo_each_epoch},
                        {"source_dir", c.source_dir},
                        {"target_dir", c.target_dir},
                        {"templates_file", c.templates_file},
                        {"embedding_file", c.embedding_file},
                        {"meta_file", c.meta_file},
                        {"output_dir", c.output_dir}};
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  const nlohmann::json defaults = to_json(c);
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw ValueError("RunConfig: unknown key '" + key + "'");
    (void)value;
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("variant", c.variant);
  get("seeds", c.seeds);
  get("seed", c.train.seed);
  if (j.contains("ms")) c.train.ms = ms_params_from_json(j.at("ms"));
  if (j.contains("mode")) c.train.mode = embedding_mode_from_string(j.at("mode").get<std::string>());
  get("aux_dim", c.train.aux_dim);
  get("batch_source", c.train.batch_source);
  get("batch_target", c.train.batch_target);
  get("max_epochs", c.train.max_epochs);
  get("patience", c.train.patience);
  get("embed_dim", c.train.tagger.embed_dim);
  get("hidden_dim", c.train.tagger.hidden_dim);
  get("window", c.train.tagger.window);
  get("lr", c.train.lr);
  get("weight_decay", c.train.weight_decay);
  get("clip_norm", c.train.clip_norm);
  get("fewshot", c.train.fewshot_target);
  get("fewshot_lo", c.train.fewshot_lo);
  get("fewshot_hi", c.train.fewshot_hi);
  get("refresh_pseudo", c.train.refresh_pseudo_each_epoch);
  get("source_dir", c.source_dir);
  get("target_dir", c.target_dir);
  get("templates_file", c.templates_file);
  get("embedding_file", c.embedding_file);
  get("meta_file", c.meta_file);
  get("output_dir", c.output_dir);
  c.train.validate();
  (void)variant_from_string(c.variant);
  return c;
}

}  // namespace cts
