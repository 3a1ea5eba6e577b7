#pragma once

#include <string>

#include <json.hpp>

#include "cts/embedder.hpp"
#include "cts/pipeline.hpp"

namespace cts {

// embed-events output: per-entity auxiliary vector sets. Concat mode stores
// the full K*D vectors (the ones kappa runs on) plus a compressed D-length
// section for nested-argument reuse; sentEnc mode stores D-length vectors.
inline nlohmann::json embedding_sets_json(const EmbeddingSets& sets, EmbeddingMode mode,
                                          std::size_t dim) {
  nlohmann::json full = nlohmann::json::object();
  nlohmann::json compressed = nlohmann::json::object();
  for (const auto& [key, embs] : sets) {
    nlohmann::json fl = nlohmann::json::array();
    nlohmann::json cl = nlohmann::json::array();
    for (const EventEmbedding& e : embs) {
      fl.push_back({{"event_id", e.event_id}, {"vector", e.vector}});
      if (mode == EmbeddingMode::concat)
        cl.push_back({{"event_id", e.event_id}, {"vector", compress(e.vector)}});
    }
    full[key] = std::move(fl);
    if (mode == EmbeddingMode::concat) compressed[key] = std::move(cl);
  }
  nlohmann::json out = {{"mode", mode == EmbeddingMode::concat ? "concat" : "sentEnc"},
                        {"dim", dim},
                        {"slots", kSlots},
                        {"full", std::move(full)}};
  if (mode == EmbeddingMode::concat) out["compressed"] = std::move(compressed);
  return out;
}

inline EmbeddingSets embedding_sets_from_json(const nlohmann::json& j) {
  EmbeddingSets sets;
  for (const auto& [key, embs] : j.at("full").items()) {
    sets[key];
    for (const auto& e : embs)
      sets[key].push_back({e.at("event_id").get<std::string>(), key, e.at("vector").get<Vec>()});
  }
  return sets;
}

inline nlohmann::json to_json(const PseudoSet& q) {
  nlohmann::json members = nlohmann::json::array();
  for (const EntityMention& e : q.members)
    members.push_back({{"doc_id", e.doc_id},
                       {"start", e.start},
                       {"end", e.end},
                       {"type", e.entity_type},
                       {"surface", e.surface},
                       {"key", e.key}});
  return nlohmann::json{{"members", std::move(members)}};
}

inline PseudoSet pseudo_set_from_json(const nlohmann::json& j) {
  PseudoSet q;
  for (const auto& m : j.at("members")) {
    EntityMention e;
    e.doc_id = m.at("doc_id").get<std::string>();
    e.start = m.at("start").get<std::size_t>();
    e.end = m.at("end").get<std::size_t>();
    e.entity_type = m.value("type", std::string());
    e.surface = m.value("surface", std::string());
    e.key = m.value("key", e.surface);
    q.members.push_back(std::move(e));
  }
  return q;
}

}  // namespace cts
