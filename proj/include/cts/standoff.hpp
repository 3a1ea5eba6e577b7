#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cts/corpus.hpp"

namespace cts {

struct TokenSpan {
  std::string text;
  std::size_t begin = 0;  // char offsets [begin, end)
  std::size_t end = 0;
};

inline bool is_split_punct(char c) {
  static const std::string punct = "()[]{}.,;:!?\"'";
  return punct.find(c) != std::string::npos;
}

// Whitespace split, then leading/trailing punctuation peeled into their own
// tokens. Hyphens and internal punctuation stay put (IL-1ra is one token).
inline std::vector<TokenSpan> tokenize_with_offsets(const std::string& text) {
  std::vector<TokenSpan> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= n) break;
    std::size_t j = i;
    while (j < n && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t lo = i, hi = j;
    while (lo < hi && is_split_punct(text[lo])) {
      out.push_back({text.substr(lo, 1), lo, lo + 1});
      ++lo;
    }
    std::size_t tail = hi;
    while (tail > lo && is_split_punct(text[tail - 1])) --tail;
    if (tail > lo) out.push_back({text.substr(lo, tail - lo), lo, tail});
    for (std::size_t p = tail; p < hi; ++p) out.push_back({text.substr(p, 1), p, p + 1});
    i = j;
  }
  return out;
}

namespace detail {

// Character span -> covering token span, snapped outward.
inline std::pair<std::size_t, std::size_t> snap_span(const std::vector<TokenSpan>& toks, std::size_t s,
                                                     std::size_t e, const std::string& id) {
  std::size_t first = toks.size(), last = 0;
  bool found = false;
  for (std::size_t t = 0; t < toks.size(); ++t) {
    if (toks[t].end > s && toks[t].begin < e) {
      if (!found) first = t;
      last = t;
      found = true;
    }
  }
  if (!found) throw ParseError("standoff " + id + ": char span [" + std::to_string(s) + "," +
                               std::to_string(e) + ") covers no token");
  return {first, last + 1};
}

struct RawTrigger {
  std::string type;
  std::size_t s = 0, e = 0;
  std::string text;
};

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace detail

// Parses one BioNLP-style standoff triple. a1 carries entity mentions, a2
// carries triggers (T lines), events (E lines) and modifiers (M lines).
// Unrelated standoff line kinds (A/N/*/#) are skipped.
inline std::pair<std::vector<EntityMention>, std::vector<EventMention>> parse_standoff(
    const std::string& txt, const std::string& a1, const std::string& a2, const std::string& doc_id = "") {
  const std::vector<TokenSpan> toks = tokenize_with_offsets(txt);

  std::vector<EntityMention> entities;
  std::map<std::string, std::size_t> entity_by_id;
  std::map<std::string, std::string> entity_orig_text;  // original casing, for slot text
  std::map<std::string, std::pair<std::size_t, std::size_t>> entity_tok_span;

  auto parse_t_line = [&](const std::string& line, bool from_a2,
                          std::map<std::string, detail::RawTrigger>& triggers) {
    std::istringstream fields(line);
    std::string id, mid, text;
    if (!std::getline(fields, id, '\t') || !std::getline(fields, mid, '\t'))
      throw ParseError("standoff: malformed T line '" + line + "'");
    std::getline(fields, text, '\t');
    if (mid.find(';') != std::string::npos)
      throw ParseError("standoff " + id + ": discontinuous spans are not supported");
    const auto parts = detail::split_ws(mid);
    if (parts.size() != 3) throw ParseError("standoff " + id + ": expected 'Type start end'");
    std::size_t s = 0, e = 0;
    try {
      s = std::stoul(parts[1]);
      e = std::stoul(parts[2]);
    } catch (const std::exception&) {
      throw ParseError("standoff " + id + ": non-numeric char offsets");
    }
    if (s >= e) throw ParseError("standoff " + id + ": empty char span");
    if (from_a2) {
      triggers[id] = {parts[0], s, e, text};
      return;
    }
    const auto [ts, te] = detail::snap_span(toks, s, e, id);
    EntityMention ent;
    ent.doc_id = doc_id;
    ent.start = ts;
    ent.end = te;
    ent.entity_type = parts[0];
    std::string surf;
    for (std::size_t t = ts; t < te; ++t) {
      if (t > ts) surf += ' ';
      surf += toks[t].text;
    }
    ent.surface = lower(surf);
    ent.key = ent.surface;
    entity_by_id[id] = entities.size();
    entity_orig_text[id] = surf;
    entity_tok_span[id] = {ts, te};
    entities.push_back(std::move(ent));
  };

  std::map<std::string, detail::RawTrigger> triggers;
  {
    std::istringstream in(a1);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line[0] == 'T') parse_t_line(line, false, triggers);
    }
  }

  struct RawEvent {
    std::string id, type, trigger_id;
    std::vector<std::pair<std::string, std::string>> args;  // role -> ref id
    std::set<std::string> modifiers;
  };
  std::vector<RawEvent> raw_events;
  std::map<std::string, std::size_t> event_index;
  {
    std::istringstream in(a2);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line[0] == 'T') {
        parse_t_line(line, true, triggers);
      } else if (line[0] == 'E') {
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("standoff: malformed E line '" + line + "'");
        RawEvent ev;
        ev.id = line.substr(0, tab);
        const auto parts = detail::split_ws(line.substr(tab + 1));
        if (parts.empty()) throw ParseError("standoff " + ev.id + ": empty event definition");
        for (std::size_t p = 0; p < parts.size(); ++p) {
          const std::size_t colon = parts[p].find(':');
          if (colon == std::string::npos)
            throw ParseError("standoff " + ev.id + ": malformed argument '" + parts[p] + "'");
          const std::string role = parts[p].substr(0, colon);
          const std::string ref = parts[p].substr(colon + 1);
          if (p == 0) {
            ev.type = role;
            ev.trigger_id = ref;
          } else {
            ev.args.emplace_back(role, ref);
          }
        }
        event_index[ev.id] = raw_events.size();
        raw_events.push_back(std::move(ev));
      }
      // M lines handled in a second pass; other kinds (A/N/*/#) skipped
    }
  }
  {
    std::istringstream in(a2);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] != 'M') continue;
      std::istringstream fields(line);
      std::string id, rest;
      std::getline(fields, id, '\t');
      std::getline(fields, rest, '\t');
      const auto parts = detail::split_ws(rest);
      if (parts.size() != 2) throw ParseError("standoff: malformed M line '" + line + "'");
      const auto it = event_index.find(parts[1]);
      if (it == event_index.end())
        throw ParseError("standoff " + id + ": modifier references unknown event " + parts[1]);
      raw_events[it->second].modifiers.insert(parts[0]);
    }
  }

  // cycle check over nested event references
  {
    std::map<std::string, int> color;  // 0 white, 1 gray, 2 black
    std::vector<std::pair<std::string, std::size_t>> stack;
    for (const RawEvent& root : raw_events) {
      if (color[root.id]) continue;
      stack.push_back({root.id, 0});
      color[root.id] = 1;
      while (!stack.empty()) {
        auto& [id, next] = stack.back();
        const RawEvent& ev = raw_events[event_index.at(id)];
        bool advanced = false;
        for (std::size_t a = next; a < ev.args.size(); ++a) {
          const std::string& ref = ev.args[a].second;
          if (ref.empty() || ref[0] != 'E') continue;
          if (!event_index.count(ref))
            throw ParseError("standoff " + id + ": dangling event reference " + ref);
          if (color[ref] == 1) throw ParseError("standoff: cyclic event nesting at " + ref);
          if (color[ref] == 0) {
            next = a + 1;
            stack.push_back({ref, 0});
            color[ref] = 1;
            advanced = true;
            break;
          }
        }
        if (!advanced) {
          color[id] = 2;
          stack.pop_back();
        }
      }
    }
  }

  std::vector<EventMention> events;
  for (const RawEvent& raw : raw_events) {
    EventMention ev;
    ev.id = raw.id;
    ev.event_type = raw.type;
    ev.doc_id = doc_id;
    ev.modifiers = raw.modifiers;
    const auto trig = triggers.find(raw.trigger_id);
    if (trig == triggers.end())
      throw ParseError("standoff " + raw.id + ": dangling trigger reference " + raw.trigger_id);
    ev.trigger_text = trig->second.text;
    const auto trig_span = detail::snap_span(toks, trig->second.s, trig->second.e, raw.trigger_id);
    ev.trigger_start = trig_span.first;
    ev.trigger_end = trig_span.second;
    for (const auto& [eid, span] : entity_tok_span)
      if (span == trig_span) ev.trigger_key = entities[entity_by_id.at(eid)].key;
    for (const auto& [role, ref] : raw.args) {
      EventArg arg;
      arg.role = role;
      if (!ref.empty() && ref[0] == 'E') {
        arg.is_event = true;
        arg.event_id = ref;
      } else {
        const auto ent = entity_by_id.find(ref);
        if (ent == entity_by_id.end())
          throw ParseError("standoff " + raw.id + ": dangling entity reference " + ref);
        arg.surface = entity_orig_text.at(ref);
        arg.key = entities[ent->second].key;
      }
      ev.arguments.push_back(std::move(arg));
    }
    events.push_back(std::move(ev));
  }
  return {entities, events};
}

}  // namespace cts
