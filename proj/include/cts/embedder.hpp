#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cts/common.hpp"
#include "cts/corpus.hpp"
#include "cts/rng.hpp"
#include "cts/templates.hpp"

namespace cts {

// ---------------------------------------------------------------------------
// Providers

// Feature-hashing encoder: signed character 3-grams into dim buckets, unit
// normalized. Deterministic per (text, seed).
inline Vec hash_encode(const std::string& text, std::size_t dim, std::uint64_t seed) {
  std::string t = text;
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
  if (t.empty()) throw ValueError("hash_encode: empty text");
  if (dim == 0) throw ValueError("hash_encode: zero dimension");

  Vec v(dim, 0.0);
  const std::uint64_t basis = 0xcbf29ce484222325ULL ^ (seed * 0x9e3779b97f4a7c15ULL);
  auto add_gram = [&](std::string_view g) {
    const std::uint64_t h = fnv1a64(g, basis);
    const std::size_t bucket = static_cast<std::size_t>(h % dim);
    v[bucket] += (h >> 63) ? 1.0 : -1.0;
  };
  if (t.size() < 3) {
    add_gram(t);
  } else {
    for (std::size_t i = 0; i + 3 <= t.size(); ++i) add_gram(std::string_view(t).substr(i, 3));
  }
  double n = norm2(v);
  if (n < 1e-12) {
    // signs cancelled; fall back to a single deterministic unit basis vector
    v.assign(dim, 0.0);
    v[static_cast<std::size_t>(fnv1a64(t, basis) % dim)] = 1.0;
    n = 1.0;
  }
  for (double& x : v) x /= n;
  return v;
}

struct EmbeddingProvider {
  enum class Kind { hash, file };
  Kind kind = Kind::hash;
  std::size_t dim = 64;
  std::uint64_t seed = 0;
  std::map<std::string, Vec> table;  // file kind

  static EmbeddingProvider hashing(std::size_t dim, std::uint64_t seed) {
    EmbeddingProvider p;
    p.kind = Kind::hash;
    p.dim = dim;
    p.seed = seed;
    return p;
  }

  // word2vec text format: "token v1 v2 ... vD" per line
  static EmbeddingProvider from_word2vec_text(const std::string& content) {
    EmbeddingProvider p;
    p.kind = Kind::file;
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::istringstream fields(line);
      std::string token;
      fields >> token;
      Vec v;
      double x;
      while (fields >> x) v.push_back(x);
      if (v.empty() || !all_finite(v))
        throw ParseError("embedding file line " + std::to_string(line_no) + ": bad vector");
      if (p.table.empty()) p.dim = v.size();
      if (v.size() != p.dim)
        throw ParseError("embedding file line " + std::to_string(line_no) + ": dimension mismatch");
      p.table[token] = std::move(v);
    }
    if (p.table.empty()) throw ParseError("embedding file: no vectors");
    return p;
  }

  Vec encode(const std::string& text) const {
    if (kind == Kind::hash) return hash_encode(text, dim, seed);
    Vec v(dim, 0.0);
    std::istringstream in(text);
    std::string tok;
    std::size_t found = 0;
    while (in >> tok) {
      const auto it = table.find(tok);
      if (it == table.end()) continue;
      axpy(1.0, it->second, v);
      ++found;
    }
    if (found > 0)
      for (double& x : v) x /= static_cast<double>(found);
    return v;
  }

  // mean of per-token encodings
  Vec encode_sentence(const std::string& text) const {
    if (kind == Kind::file) return encode(text);
    Vec v(dim, 0.0);
    std::istringstream in(text);
    std::string tok;
    std::size_t count = 0;
    while (in >> tok) {
      axpy(1.0, hash_encode(tok, dim, seed), v);
      ++count;
    }
    if (count == 0) throw ValueError("encode_sentence: no tokens in '" + text + "'");
    for (double& x : v) x /= static_cast<double>(count);
    return v;
  }
};

// ---------------------------------------------------------------------------
// Concatenation-based event embedding

// Slot order is fixed; the remaining roles fold into the nearest slot
// (Participant -> Theme, location roles -> Site, Instrument -> Cause,
// CSite -> Site).
enum class Slot : std::size_t { EventType = 0, Theme = 1, Cause = 2, Site = 3, Product = 4 };
inline constexpr std::size_t kSlots = 5;

inline const char* slot_name(Slot s) {
  switch (s) {
    case Slot::EventType: return "event_type";
    case Slot::Theme: return "Theme";
    case Slot::Cause: return "Cause";
    case Slot::Site: return "Site";
    case Slot::Product: return "Product";
  }
  return "?";
}

inline Slot slot_for_role(const std::string& role) {
  if (role == "Cause" || role == "Instrument") return Slot::Cause;
  if (role == "Site" || role == "CSite" || role == "AtLoc" || role == "FromLoc" || role == "ToLoc")
    return Slot::Site;
  if (role == "Product") return Slot::Product;
  return Slot::Theme;  // Theme, Theme2..ThemeN, Participant, anything unlisted
}

// Raw text of one slot. The event_type slot renders
// "<Type> (<Mod1,Mod2>): <trigger>"; argument slots render the filler
// surfaces, the focus entity marked with " (self)". Absent role -> nullopt.
inline std::optional<std::string> slot_text(const EventMention& event, Slot slot,
                                            const std::string& focus_key) {
  if (slot == Slot::EventType) {
    std::string s = event.event_type;
    if (!event.modifiers.empty()) {
      s += " (";
      bool first = true;
      for (const std::string& m : event.modifiers) {
        if (!first) s += ",";
        s += m;
        first = false;
      }
      s += ")";
    }
    s += ": " + event.trigger_text;
    return s;
  }
  std::vector<std::string> parts;
  for (const EventArg& a : event.arguments) {
    if (a.is_event || slot_for_role(a.role) != slot) continue;
    parts.push_back(a.key == focus_key ? a.surface + " (self)" : a.surface);
  }
  if (parts.empty()) return std::nullopt;
  std::string joined;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) joined += " ; ";
    joined += parts[i];
  }
  return joined;
}

// Averages every `group` consecutive components.
inline Vec compress(const Vec& e, std::size_t group = kSlots) {
  if (group == 0 || e.size() % group != 0)
    throw ValueError("compress: length " + std::to_string(e.size()) + " not divisible by " +
                     std::to_string(group));
  Vec out(e.size() / group, 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < group; ++k) s += e[group * i + k];
    out[i] = s / static_cast<double>(group);
  }
  return out;
}

// Componentwise moments of all observed slot embeddings; missing slots are
// padded with diagonal-Gaussian draws matched to these moments.
struct PadState {
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::size_t count = 0;
  Vec sum, sumsq;

  PadState() = default;
  PadState(std::size_t d, std::uint64_t s) : dim(d), seed(s), sum(d, 0.0), sumsq(d, 0.0) {}

  void observe(const Vec& v) {
    if (v.size() != dim) throw ValueError("PadState: dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i) {
      sum[i] += v[i];
      sumsq[i] += v[i] * v[i];
    }
    ++count;
  }

  Vec mean() const {
    Vec m(dim, 0.0);
    if (count == 0) return m;
    for (std::size_t i = 0; i < dim; ++i) m[i] = sum[i] / static_cast<double>(count);
    return m;
  }

  // population variance
  Vec variance() const {
    Vec v(dim, 0.0);
    if (count == 0) return v;
    const Vec m = mean();
    for (std::size_t i = 0; i < dim; ++i)
      v[i] = std::max(0.0, sumsq[i] / static_cast<double>(count) - m[i] * m[i]);
    return v;
  }
};

// Deterministic given the state's seed and the stream key; padding streams
// are keyed by (event id, slot) so rebuild order cannot matter.
inline Vec pad_sample(const PadState& state, std::string_view stream_key = "pad") {
  if (state.count < 2) return Vec(state.dim, 0.0);
  Rng rng(derive_seed(state.seed, stream_key));
  const Vec m = state.mean();
  const Vec var = state.variance();
  Vec out(state.dim, 0.0);
  for (std::size_t i = 0; i < state.dim; ++i) out[i] = m[i] + std::sqrt(var[i]) * rng.gaussian();
  return out;
}

using EventIndex = std::map<std::string, const EventMention*>;

inline EventIndex index_events(const CorpusBundle& bundle) {
  EventIndex idx;
  for (const EventMention& ev : bundle.events) idx[ev.id] = &ev;
  return idx;
}

namespace detail {
inline Vec embed_event_concat_impl(const EventMention& event, const std::string& focus_key,
                                   const EmbeddingProvider& provider, const PadState& pad_state,
                                   const EventIndex& index, int depth) {
  if (depth > 8) throw ValueError("embed_event_concat: event nesting deeper than 8 (cycle?)");
  const std::size_t d = provider.dim;
  Vec out;
  out.reserve(kSlots * d);
  for (std::size_t s = 0; s < kSlots; ++s) {
    const Slot slot = static_cast<Slot>(s);
    std::vector<Vec> contributions;
    if (slot == Slot::EventType) {
      contributions.push_back(provider.encode(*slot_text(event, slot, focus_key)));
    } else {
      for (const EventArg& a : event.arguments) {
        if (slot_for_role(a.role) != slot) continue;
        if (a.is_event) {
          const auto it = index.find(a.event_id);
          if (it == index.end())
            throw ValueError("embed_event_concat: unknown nested event " + a.event_id);
          contributions.push_back(compress(
              embed_event_concat_impl(*it->second, focus_key, provider, pad_state, index, depth + 1)));
        } else {
          contributions.push_back(
              provider.encode(a.key == focus_key ? a.surface + " (self)" : a.surface));
        }
      }
    }
    Vec block(d, 0.0);
    if (contributions.empty()) {
      block = pad_sample(pad_state, event.id + "#" + slot_name(slot));
    } else {
      for (const Vec& c : contributions) axpy(1.0, c, block);
      for (double& x : block) x /= static_cast<double>(contributions.size());
    }
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}
}  // namespace detail

inline Vec embed_event_concat(const EventMention& event, const std::string& focus_key,
                              const EmbeddingProvider& provider, const PadState& pad_state,
                              const EventIndex& index) {
  return detail::embed_event_concat_impl(event, focus_key, provider, pad_state, index, 0);
}

// ---------------------------------------------------------------------------
// Template / sentence-encoder event embedding

namespace detail {
inline std::string collapse_spaces(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    if (c == ' ' && !out.empty() && out.back() == ' ') continue;
    out += c;
  }
  while (!out.empty() && out.front() == ' ') out.erase(out.begin());
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

inline void replace_all(std::string& s, const std::string& from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}
}  // namespace detail

inline std::string fill_template(const EventMention& event, const TemplateSet& templates,
                                 const EventIndex& index) {
  const auto it = templates.templates.find(event.event_type);
  if (it == templates.templates.end() && !templates.use_fallback)
    throw ValueError("no template for event type '" + event.event_type + "'");
  std::string text = it != templates.templates.end() ? it->second : templates.fallback;

  std::map<std::string, std::vector<std::string>> fillers;
  for (const EventArg& a : event.arguments) {
    std::string placeholder = a.role;
    if (placeholder.rfind("Theme", 0) == 0) placeholder = "Theme";  // Theme2..ThemeN
    std::string surface = a.surface;
    if (a.is_event) {
      const auto ev = index.find(a.event_id);
      surface = ev != index.end() ? ev->second->trigger_text : a.event_id;
    }
    fillers[placeholder].push_back(surface);
  }
  detail::replace_all(text, "<Trigger>", event.trigger_text);
  for (const std::string& role : known_roles()) {
    if (role == "Trigger") continue;
    std::string joined;
    const auto f = fillers.find(role);
    if (f != fillers.end()) {
      for (std::size_t i = 0; i < f->second.size(); ++i) {
        if (i) joined += ", ";
        joined += f->second[i];
      }
    }
    detail::replace_all(text, "<" + role + ">", joined);
  }
  return detail::collapse_spaces(text);
}

inline Vec embed_event_template(const EventMention& event, const TemplateSet& templates,
                                const EmbeddingProvider& provider, const EventIndex& index) {
  return provider.encode_sentence(fill_template(event, templates, index));
}

// ---------------------------------------------------------------------------
// Per-entity embedding sets E(key)

struct EventEmbedding {
  std::string event_id;
  std::string focus_key;  // empty in sentEnc mode
  Vec vector;
};

using EmbeddingSets = std::map<std::string, std::vector<EventEmbedding>>;

enum class EmbeddingMode { concat, sentEnc };

inline EmbeddingMode embedding_mode_from_string(const std::string& s) {
  if (s == "concat") return EmbeddingMode::concat;
  if (s == "sentEnc") return EmbeddingMode::sentEnc;
  throw ValueError("unknown embedding mode '" + s + "' (want concat|sentEnc)");
}

// Builds the corpus-level pad state for concat embeddings: moments over every
// present slot's encoded text, in canonical (event id, slot) order with no
// self marking. Fixed before any pad draw so rebuilds are order-independent.
inline PadState build_pad_state(const CorpusBundle& bundle, const EmbeddingProvider& provider,
                                std::uint64_t seed) {
  PadState state(provider.dim, derive_seed(seed, "padding"));
  std::vector<const EventMention*> events;
  for (const EventMention& ev : bundle.events) events.push_back(&ev);
  std::sort(events.begin(), events.end(),
            [](const EventMention* a, const EventMention* b) { return a->id < b->id; });
  for (const EventMention* ev : events) {
    for (std::size_t s = 0; s < kSlots; ++s) {
      const auto text = slot_text(*ev, static_cast<Slot>(s), "");
      if (text) state.observe(provider.encode(*text));
    }
  }
  return state;
}

inline EmbeddingSets build_embedding_sets(const CorpusBundle& bundle, EmbeddingMode mode,
                                          const EmbeddingProvider& provider,
                                          const TemplateSet& templates, std::uint64_t seed = 0) {
  const EventIndex index = index_events(bundle);
  EmbeddingSets sets;
  for (const auto& [key, ids] : bundle.participation) sets[key];  // event-less keys -> empty list

  if (mode == EmbeddingMode::concat) {
    const PadState pad = build_pad_state(bundle, provider, seed);
    for (const auto& [key, ids] : bundle.participation)
      for (const std::string& id : ids)
        sets[key].push_back({id, key, embed_event_concat(*index.at(id), key, provider, pad, index)});
  } else {
    std::map<std::string, Vec> by_event;
    for (const auto& [id, ev] : index) by_event[id] = embed_event_template(*ev, templates, provider, index);
    for (const auto& [key, ids] : bundle.participation)
      for (const std::string& id : ids) sets[key].push_back({id, "", by_event.at(id)});
  }
  return sets;
}

}  // namespace cts
