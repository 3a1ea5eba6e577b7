#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cts/common.hpp"
#include "cts/rng.hpp"

namespace cts {

struct Document {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<std::string> tags;  // BIO, same length as tokens
};

struct EntityMention {
  std::string doc_id;
  std::size_t start = 0;  // token span [start, end)
  std::size_t end = 0;
  std::string entity_type;
  std::string surface;  // lowercased space-joined tokens
  std::string key;      // normalized surface form used for event lookup
};

// One role filler of an event: either a plain entity or a nested event.
struct EventArg {
  std::string role;
  bool is_event = false;
  std::string event_id;  // set when is_event
  std::string surface;   // set for entity fillers (original casing)
  std::string key;       // normalized entity key
};

struct EventMention {
  std::string id;
  std::string event_type;
  std::string trigger_text;
  std::set<std::string> modifiers;  // e.g. Negation, Speculation
  std::vector<EventArg> arguments;
  std::string doc_id;
  std::string trigger_key;      // entity key when the trigger span coincides with a mention
  std::size_t trigger_start = 0;  // trigger token span [start, end)
  std::size_t trigger_end = 0;
};

struct CorpusBundle {
  std::vector<Document> documents;
  std::vector<EntityMention> entities;
  std::vector<EventMention> events;
  std::map<std::string, std::vector<std::string>> participation;  // key -> sorted event ids
};

// ---------------------------------------------------------------------------
// BIO tag utilities

inline bool valid_tag_shape(const std::string& tag) {
  if (tag == "O") return true;
  if (tag.size() < 3) return false;
  if (tag[0] != 'B' && tag[0] != 'I') return false;
  return tag[1] == '-';
}

inline std::string tag_type(const std::string& tag) {
  return tag == "O" ? std::string() : tag.substr(2);
}

// An I-T whose predecessor is neither B-T nor I-T becomes B-T.
inline std::size_t repair_bio(std::vector<std::string>& tags) {
  std::size_t repaired = 0;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (tags[i].empty() || tags[i][0] != 'I') continue;
    const bool legal = i > 0 && tags[i - 1] != "O" && tag_type(tags[i - 1]) == tag_type(tags[i]);
    if (!legal) {
      tags[i][0] = 'B';
      ++repaired;
    }
  }
  return repaired;
}

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;
  bool operator==(const Span&) const = default;
  bool operator<(const Span& o) const {
    return std::tie(start, end, type) < std::tie(o.start, o.end, o.type);
  }
};

// Decode entity spans from a BIO sequence. Stray I-tags are treated as
// span starts, mirroring the ingest repair rule.
inline std::vector<Span> decode_bio(const std::vector<std::string>& tags) {
  std::vector<Span> out;
  std::size_t i = 0;
  while (i < tags.size()) {
    if (tags[i] == "O") {
      ++i;
      continue;
    }
    const std::string type = tag_type(tags[i]);
    std::size_t j = i + 1;
    while (j < tags.size() && tags[j].size() > 1 && tags[j][0] == 'I' && tag_type(tags[j]) == type) ++j;
    out.push_back({i, j, type});
    i = j;
  }
  return out;
}

inline std::string lower(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

inline std::string span_surface(const Document& doc, std::size_t start, std::size_t end) {
  std::string s;
  for (std::size_t t = start; t < end; ++t) {
    if (t > start) s += ' ';
    s += doc.tokens[t];
  }
  return lower(s);
}

inline EntityMention make_entity(const Document& doc, const Span& sp) {
  EntityMention e;
  e.doc_id = doc.id;
  e.start = sp.start;
  e.end = sp.end;
  e.entity_type = sp.type;
  e.surface = span_surface(doc, sp.start, sp.end);
  e.key = e.surface;
  return e;
}

inline std::vector<EntityMention> gold_entities(const Document& doc) {
  std::vector<EntityMention> out;
  for (const Span& sp : decode_bio(doc.tags)) out.push_back(make_entity(doc, sp));
  return out;
}

// ---------------------------------------------------------------------------
// CoNLL ingestion: "token<TAB>tag" lines, blank-line separated documents,
// optional -DOCSTART- sentinels.

inline std::vector<Document> parse_conll(const std::string& text, const std::string& id_prefix = "d") {
  std::vector<Document> docs;
  Document cur;
  std::size_t line_no = 0;
  auto flush = [&]() {
    if (!cur.tokens.empty()) {
      cur.id = id_prefix + std::to_string(docs.size());
      repair_bio(cur.tags);
      docs.push_back(std::move(cur));
      cur = Document{};
    }
  };
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    const std::size_t tab = line.find('\t');
    const std::string token = tab == std::string::npos ? line : line.substr(0, tab);
    if (token == "-DOCSTART-") {
      flush();
      continue;
    }
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw ParseError("conll line " + std::to_string(line_no) + ": expected token<TAB>tag");
    const std::string tag = line.substr(tab + 1);
    if (token.empty() || tag.empty())
      throw ParseError("conll line " + std::to_string(line_no) + ": empty field");
    if (!valid_tag_shape(tag))
      throw ParseError("conll line " + std::to_string(line_no) + ": unknown tag shape '" + tag + "'");
    cur.tokens.push_back(token);
    cur.tags.push_back(tag);
  }
  flush();
  return docs;
}

inline std::string serialize_conll(const std::vector<Document>& docs) {
  std::string out;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (d > 0) out += '\n';
    for (std::size_t t = 0; t < docs[d].tokens.size(); ++t) {
      out += docs[d].tokens[t];
      out += '\t';
      out += docs[d].tags[t];
      out += '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Few-shot downsampling: uniformly random subset whose size is drawn
// uniformly in [lo, hi], original order preserved.

inline std::vector<Document> downsample_fewshot(const std::vector<Document>& docs, std::uint64_t seed,
                                                std::size_t lo = 70, std::size_t hi = 100) {
  if (docs.size() < lo)
    throw ValueError("downsample_fewshot: need at least " + std::to_string(lo) + " documents, have " +
                     std::to_string(docs.size()));
  hi = std::min(hi, docs.size());
  Rng rng(derive_seed(seed, "fewshot"));
  const std::size_t n = static_cast<std::size_t>(rng.uniform_int(static_cast<long>(lo), static_cast<long>(hi)));
  std::vector<Document> out;
  for (const std::size_t i : rng.sample_indices(docs.size(), n)) out.push_back(docs[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Participation index: entity key -> ids of events the key fills a role of
// (or whose trigger span is that mention).

inline void build_participation(CorpusBundle& bundle) {
  bundle.participation.clear();
  for (const EntityMention& e : bundle.entities) bundle.participation[e.key];  // keys with no events map to {}
  for (const EventMention& ev : bundle.events) {
    std::set<std::string> keys;
    for (const EventArg& a : ev.arguments)
      if (!a.is_event) keys.insert(a.key);
    if (!ev.trigger_key.empty()) keys.insert(ev.trigger_key);
    for (const std::string& k : keys) bundle.participation[k].push_back(ev.id);
  }
  for (auto& [k, ids] : bundle.participation) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
}

inline const EventMention* find_event(const CorpusBundle& bundle, const std::string& id) {
  for (const EventMention& ev : bundle.events)
    if (ev.id == id) return &ev;
  return nullptr;
}

}  // namespace cts
