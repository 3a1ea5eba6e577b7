#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cts/corpus.hpp"
#include "cts/standoff.hpp"
#include "cts/synth.hpp"

namespace cts {

namespace fs = std::filesystem;

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValueError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const fs::path& p, const std::string& content) {
  if (!p.parent_path().empty()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ValueError("cannot write " + p.string());
  out << content;
}

// char offset of each token when tokens are joined with single spaces
inline std::vector<std::size_t> token_char_offsets(const Document& doc) {
  std::vector<std::size_t> off(doc.tokens.size(), 0);
  std::size_t pos = 0;
  for (std::size_t t = 0; t < doc.tokens.size(); ++t) {
    off[t] = pos;
    pos += doc.tokens[t].size() + 1;
  }
  return off;
}

inline std::string doc_text(const Document& doc) {
  std::string s;
  for (std::size_t t = 0; t < doc.tokens.size(); ++t) {
    if (t) s += ' ';
    s += doc.tokens[t];
  }
  return s;
}

// Renders one document's standoff triple from the bundle content.
struct StandoffTriple {
  std::string txt, a1, a2;
};

inline StandoffTriple render_standoff(const CorpusBundle& bundle, const Document& doc) {
  StandoffTriple out;
  out.txt = doc_text(doc);
  const auto off = token_char_offsets(doc);
  auto char_span = [&](std::size_t start, std::size_t end) {
    const std::size_t s = off[start];
    const std::size_t e = off[end - 1] + doc.tokens[end - 1].size();
    return std::pair<std::size_t, std::size_t>{s, e};
  };
  auto span_text = [&](std::size_t start, std::size_t end) {
    return out.txt.substr(char_span(start, end).first,
                          char_span(start, end).second - char_span(start, end).first);
  };

  std::size_t t_counter = 0;
  std::map<std::string, std::string> mention_tid;  // "start:end" -> T id
  for (const EntityMention& e : bundle.entities) {
    if (e.doc_id != doc.id) continue;
    const auto [s, ce] = char_span(e.start, e.end);
    const std::string tid = "T" + std::to_string(++t_counter);
    mention_tid[std::to_string(e.start) + ":" + std::to_string(e.end)] = tid;
    out.a1 += tid + "\t" + e.entity_type + " " + std::to_string(s) + " " + std::to_string(ce) + "\t" +
              span_text(e.start, e.end) + "\n";
  }

  // arguments reference mentions by key; map keys back to this doc's T ids
  std::map<std::string, std::string> key_tid;
  for (const EntityMention& e : bundle.entities)
    if (e.doc_id == doc.id)
      key_tid.emplace(e.key, mention_tid.at(std::to_string(e.start) + ":" + std::to_string(e.end)));

  std::size_t m_counter = 0;
  for (const EventMention& ev : bundle.events) {
    if (ev.doc_id != doc.id) continue;
    const auto [ts, te] = char_span(ev.trigger_start, ev.trigger_end);
    const std::string trig_id = "T" + std::to_string(++t_counter);
    out.a2 += trig_id + "\t" + ev.event_type + " " + std::to_string(ts) + " " + std::to_string(te) +
              "\t" + span_text(ev.trigger_start, ev.trigger_end) + "\n";
    std::string line = ev.id + "\t" + ev.event_type + ":" + trig_id;
    for (const EventArg& a : ev.arguments) {
      if (a.is_event)
        line += " " + a.role + ":" + a.event_id;
      else
        line += " " + a.role + ":" + key_tid.at(a.key);
    }
    out.a2 += line + "\n";
    for (const std::string& mod : ev.modifiers)
      out.a2 += "M" + std::to_string(++m_counter) + "\t" + mod + " " + ev.id + "\n";
  }
  return out;
}

inline void write_corpus_dir(const fs::path& dir, const CorpusBundle& bundle, bool with_events) {
  std::map<std::string, std::vector<Document>> by_split;
  for (const Document& d : bundle.documents) by_split[d.id.substr(0, d.id.find('-'))].push_back(d);
  for (const auto& [split, docs] : by_split) {
    write_file(dir / (split + ".conll"), serialize_conll(docs));
    if (with_events) {
      for (const Document& d : docs) {
        const StandoffTriple tri = render_standoff(bundle, d);
        write_file(dir / "events" / (d.id + ".txt"), tri.txt);
        write_file(dir / "events" / (d.id + ".a1"), tri.a1);
        write_file(dir / "events" / (d.id + ".a2"), tri.a2);
      }
    }
  }
}

// Loads a corpus directory written by write_corpus_dir (or assembled by hand
// in the same layout): <split>.conll files plus an optional events/ tree of
// standoff triples named by document id.
inline CorpusBundle load_corpus_dir(const fs::path& dir) {
  CorpusBundle bundle;
  for (const char* split : {"train", "dev", "test"}) {
    const fs::path p = dir / (std::string(split) + ".conll");
    if (!fs::exists(p)) continue;
    std::vector<Document> docs = parse_conll(read_file(p), std::string(split) + "-");
    for (Document& d : docs) bundle.documents.push_back(std::move(d));
  }
  if (bundle.documents.empty()) throw ValueError("no .conll splits found in " + dir.string());
  for (const Document& d : bundle.documents) {
    const fs::path txt = dir / "events" / (d.id + ".txt");
    if (fs::exists(txt)) {
      const auto [ents, evs] = parse_standoff(read_file(txt), read_file(dir / "events" / (d.id + ".a1")),
                                              read_file(dir / "events" / (d.id + ".a2")), d.id);
      for (const EntityMention& e : ents) bundle.entities.push_back(e);
      for (const EventMention& ev : evs) bundle.events.push_back(ev);
    } else {
      for (const EntityMention& e : gold_entities(d)) bundle.entities.push_back(e);
    }
  }
  build_participation(bundle);
  return bundle;
}

// --- SynthConfig JSON ---

inline nlohmann::json to_json(const SynthConfig& c) {
  return nlohmann::json{{"filler_vocab", c.filler_vocab},
                        {"source_entity_vocab", c.source_entity_vocab},
                        {"target_entity_vocab", c.target_entity_vocab},
                        {"source_types", c.source_types},
                        {"target_types", c.target_types},
                        {"subdomains", c.subdomains},
                        {"doc_len_lo", c.doc_len_lo},
                        {"doc_len_hi", c.doc_len_hi},
                        {"entities_per_doc_lo", c.entities_per_doc_lo},
                        {"entities_per_doc_hi", c.entities_per_doc_hi},
                        {"event_rate", c.event_rate},
                        {"modifier_rate", c.modifier_rate},
                        {"nested_rate", c.nested_rate},
                        {"cooccurrence_rate", c.cooccurrence_rate},
                        {"injected_lo", c.injected_lo},
                        {"injected_hi", c.injected_hi},
                        {"source_train_docs", c.source_train_docs},
                        {"source_val_docs", c.source_val_docs},
                        {"target_train_docs", c.target_train_docs},
                        {"target_val_docs", c.target_val_docs},
                        {"target_test_docs", c.target_test_docs}};
}

inline SynthConfig synth_config_from_json(const nlohmann::json& j) {
  SynthConfig c;
  const nlohmann::json defaults = to_json(c);
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw ValueError("SynthConfig: unknown key '" + key + "'");
    (void)value;
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("filler_vocab", c.filler_vocab);
  get("source_entity_vocab", c.source_entity_vocab);
  get("target_entity_vocab", c.target_entity_vocab);
  get("source_types", c.source_types);
  get("target_types", c.target_types);
  get("subdomains", c.subdomains);
  get("doc_len_lo", c.doc_len_lo);
  get("doc_len_hi", c.doc_len_hi);
  get("entities_per_doc_lo", c.entities_per_doc_lo);
  get("entities_per_doc_hi", c.entities_per_doc_hi);
  get("event_rate", c.event_rate);
  get("modifier_rate", c.modifier_rate);
  get("nested_rate", c.nested_rate);
  get("cooccurrence_rate", c.cooccurrence_rate);
  get("injected_lo", c.injected_lo);
  get("injected_hi", c.injected_hi);
  get("source_train_docs", c.source_train_docs);
  get("source_val_docs", c.source_val_docs);
  get("target_train_docs", c.target_train_docs);
  get("target_val_docs", c.target_val_docs);
  get("target_test_docs", c.target_test_docs);
  for (const double rate : {c.event_rate, c.modifier_rate, c.nested_rate, c.cooccurrence_rate})
    if (rate < 0.0 || rate > 1.0) throw ValueError("SynthConfig: rate fields must be within [0,1]");
  return c;
}

inline nlohmann::json to_json(const SynthMeta& m) {
  nlohmann::json inj = nlohmann::json::array();
  for (const InjectedSpan& s : m.injected)
    inj.push_back({{"doc_id", s.doc_id}, {"start", s.start}, {"end", s.end}, {"surface", s.surface}});
  return nlohmann::json{{"source_entity_tokens", m.source_entity_tokens},
                        {"target_entity_tokens", m.target_entity_tokens},
                        {"injected", inj}};
}

inline SynthMeta synth_meta_from_json(const nlohmann::json& j) {
  SynthMeta m;
  m.source_entity_tokens = j.at("source_entity_tokens").get<std::vector<std::string>>();
  m.target_entity_tokens = j.at("target_entity_tokens").get<std::vector<std::string>>();
  for (const auto& s : j.at("injected"))
    m.injected.push_back({s.at("doc_id"), s.at("start"), s.at("end"), s.at("surface")});
  return m;
}

}  // namespace cts
