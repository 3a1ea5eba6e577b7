#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "cts/corpus.hpp"
#include "cts/rng.hpp"

namespace cts {

// Knobs for the synthetic two-domain corpus. Source documents carry typed
// entities plus standoff-style events; target documents carry entities of a
// different type set and, at the co-occurrence rate, unlabeled mentions of
// source-vocabulary entities (the false-positive trap).
struct SynthConfig {
  std::size_t filler_vocab = 120;
  std::size_t source_entity_vocab = 60;
  std::size_t target_entity_vocab = 40;
  std::vector<std::string> source_types = {"Gene", "Protein"};
  std::vector<std::string> target_types = {"Chem"};
  std::size_t subdomains = 3;

  std::size_t doc_len_lo = 10;
  std::size_t doc_len_hi = 16;
  std::size_t entities_per_doc_lo = 1;
  std::size_t entities_per_doc_hi = 3;
  double event_rate = 0.9;       // chance an entity mention anchors an event
  double modifier_rate = 0.15;   // chance an event carries Negation/Speculation
  double nested_rate = 0.10;     // chance an event is wrapped by a Regulation event
  double cooccurrence_rate = 0.8;
  std::size_t injected_lo = 1;
  std::size_t injected_hi = 2;

  std::size_t source_train_docs = 60;
  std::size_t source_val_docs = 20;
  std::size_t target_train_docs = 80;
  std::size_t target_val_docs = 40;
  std::size_t target_test_docs = 200;
};

struct InjectedSpan {
  std::string doc_id;
  std::size_t start = 0;  // token span in the target document
  std::size_t end = 0;
  std::string surface;
};

struct SynthMeta {
  std::vector<std::string> source_entity_tokens;  // token-level vocabularies, disjoint
  std::vector<std::string> target_entity_tokens;
  std::vector<InjectedSpan> injected;
};

struct SynthResult {
  CorpusBundle source;
  CorpusBundle target;
  SynthMeta meta;
};

namespace detail {

inline std::string make_word(Rng& rng, std::size_t min_syll, std::size_t max_syll) {
  static const std::array<const char*, 24> syll = {"ba", "ce",  "di",  "fo",  "gu",  "hy",  "ka",  "lo",
                                                   "mi", "nu",  "pe",  "qi",  "ro",  "sa",  "tu",  "ve",
                                                   "wo", "xy",  "za",  "thi", "mer", "lin", "dor", "gen"};
  std::string w;
  const std::size_t n = static_cast<std::size_t>(rng.uniform_int(static_cast<long>(min_syll), static_cast<long>(max_syll)));
  for (std::size_t i = 0; i < n; ++i) w += syll[rng.below(syll.size())];
  return w;
}

inline std::vector<std::string> make_vocab(Rng& rng, std::size_t n, std::set<std::string>& used,
                                           std::size_t min_syll, std::size_t max_syll) {
  std::vector<std::string> out;
  while (out.size() < n) {
    std::string w = make_word(rng, min_syll, max_syll);
    if (used.insert(w).second) out.push_back(std::move(w));
  }
  return out;
}

struct SourceSurface {
  std::vector<std::string> tokens;  // 1-2 tokens
  std::string type;
  std::size_t subdomain = 0;
};

// Event shapes available per subdomain; types come from the shipped template set.
inline const std::vector<std::vector<std::string>>& subdomain_event_types() {
  static const std::vector<std::vector<std::string>> types = {
      {"Phosphorylation", "Acetylation"},
      {"Binding", "Dissociation"},
      {"Localization", "Transport"},
  };
  return types;
}

}  // namespace detail

inline SynthResult gen_synthetic(const SynthConfig& cfg, std::uint64_t seed) {
  if (cfg.filler_vocab == 0 || cfg.source_entity_vocab == 0 || cfg.target_entity_vocab == 0)
    throw ValueError("gen_synthetic: zero vocabulary");
  if (cfg.source_types.empty() || cfg.target_types.empty())
    throw ValueError("gen_synthetic: empty type set");
  if (cfg.doc_len_lo > cfg.doc_len_hi || cfg.entities_per_doc_lo > cfg.entities_per_doc_hi)
    throw ValueError("gen_synthetic: invalid ranges");
  if (cfg.subdomains == 0 || cfg.subdomains > cfg.source_entity_vocab)
    throw ValueError("gen_synthetic: subdomains must be in [1, source_entity_vocab]");

  Rng rng(derive_seed(seed, "synth"));
  std::set<std::string> used;
  const std::vector<std::string> fillers = detail::make_vocab(rng, cfg.filler_vocab, used, 2, 3);

  // Source surfaces: type round-robin, subdomain round-robin, ~30% two-token.
  std::vector<detail::SourceSurface> src_surfaces;
  std::vector<std::string> src_tokens;
  {
    const std::vector<std::string> words = detail::make_vocab(rng, cfg.source_entity_vocab + 32, used, 2, 4);
    std::size_t w = 0;
    for (std::size_t i = 0; i < cfg.source_entity_vocab; ++i) {
      detail::SourceSurface s;
      s.tokens.push_back(words[w++]);
      if (rng.bernoulli(0.3)) s.tokens.push_back(words[w++]);
      s.type = cfg.source_types[i % cfg.source_types.size()];
      s.subdomain = i % cfg.subdomains;
      for (const std::string& t : s.tokens) src_tokens.push_back(t);
      src_surfaces.push_back(std::move(s));
    }
  }
  std::vector<std::vector<std::string>> tgt_surfaces;
  std::vector<std::string> tgt_tokens;
  {
    const std::vector<std::string> words = detail::make_vocab(rng, cfg.target_entity_vocab + 32, used, 2, 4);
    std::size_t w = 0;
    for (std::size_t i = 0; i < cfg.target_entity_vocab; ++i) {
      std::vector<std::string> toks{words[w++]};
      if (rng.bernoulli(0.3)) toks.push_back(words[w++]);
      for (const std::string& t : toks) tgt_tokens.push_back(t);
      tgt_surfaces.push_back(std::move(toks));
    }
  }

  // One trigger lexicon entry per (subdomain, event type slot); Regulation
  // triggers are per-subdomain too so nested events stay subdomain-specific.
  const auto& ev_types = detail::subdomain_event_types();
  std::vector<std::vector<std::string>> triggers(cfg.subdomains);
  std::vector<std::string> reg_triggers;
  for (std::size_t g = 0; g < cfg.subdomains; ++g) {
    triggers[g] = detail::make_vocab(rng, ev_types[g % ev_types.size()].size(), used, 2, 3);
    reg_triggers.push_back(detail::make_vocab(rng, 1, used, 2, 3)[0]);
  }

  SynthResult result;
  result.meta.source_entity_tokens = src_tokens;
  result.meta.target_entity_tokens = tgt_tokens;

  std::size_t event_counter = 0;

  // Subdomain-local mentions cycle through the subdomain's surface pool so
  // every source surface shows up in training at comparable rates.
  std::vector<std::vector<std::size_t>> pool(cfg.subdomains);
  std::vector<std::size_t> pool_pos(cfg.subdomains, 0);
  for (std::size_t i = 0; i < src_surfaces.size(); ++i) pool[src_surfaces[i].subdomain].push_back(i);
  auto next_local_surface = [&](std::size_t g) {
    if (pool_pos[g] == 0) rng.shuffle(pool[g]);
    const std::size_t idx = pool[g][pool_pos[g]];
    pool_pos[g] = (pool_pos[g] + 1) % pool[g].size();
    return idx;
  };

  // --- source documents ---
  auto build_source = [&](const std::string& prefix, std::size_t count) {
    for (std::size_t d = 0; d < count; ++d) {
      Document doc;
      doc.id = prefix + "-" + std::to_string(d);
      const std::size_t g = rng.below(cfg.subdomains);
      const std::size_t n_ent =
          static_cast<std::size_t>(rng.uniform_int(static_cast<long>(cfg.entities_per_doc_lo),
                                                   static_cast<long>(cfg.entities_per_doc_hi)));
      std::size_t n_fill = static_cast<std::size_t>(
          rng.uniform_int(static_cast<long>(cfg.doc_len_lo), static_cast<long>(cfg.doc_len_hi)));

      struct Placed {
        std::size_t start = 0, end = 0, surface_idx = 0;
        long trigger_tok = -1;
        long reg_trigger_tok = -1;
        std::size_t trigger_type = 0;
      };
      std::vector<Placed> placed;

      auto emit_fillers = [&](std::size_t n) {
        for (std::size_t i = 0; i < n && n_fill > 0; ++i, --n_fill) {
          doc.tokens.push_back(fillers[rng.below(fillers.size())]);
          doc.tags.push_back("O");
        }
      };

      for (std::size_t e = 0; e < n_ent; ++e) {
        emit_fillers(1 + rng.below(3));
        const std::size_t si =
            rng.bernoulli(0.85) ? next_local_surface(g) : rng.below(src_surfaces.size());
        const detail::SourceSurface& s = src_surfaces[si];
        Placed p;
        p.start = doc.tokens.size();
        for (std::size_t t = 0; t < s.tokens.size(); ++t) {
          doc.tokens.push_back(s.tokens[t]);
          doc.tags.push_back((t == 0 ? "B-" : "I-") + s.type);
        }
        p.end = doc.tokens.size();
        p.surface_idx = si;
        if (rng.bernoulli(cfg.event_rate)) {
          const auto& type_triggers = triggers[g];
          p.trigger_type = rng.below(type_triggers.size());
          p.trigger_tok = static_cast<long>(doc.tokens.size());
          doc.tokens.push_back(type_triggers[p.trigger_type]);
          doc.tags.push_back("O");
          if (rng.bernoulli(cfg.nested_rate)) {
            p.reg_trigger_tok = static_cast<long>(doc.tokens.size());
            doc.tokens.push_back(reg_triggers[g]);
            doc.tags.push_back("O");
          }
        }
        placed.push_back(p);
      }
      emit_fillers(n_fill);

      // gold mentions
      std::vector<EntityMention> doc_mentions;
      for (const Placed& p : placed) {
        Span sp{p.start, p.end, src_surfaces[p.surface_idx].type};
        doc_mentions.push_back(make_entity(doc, sp));
      }

      // events: anchor Theme = the placed mention; co-arguments from other
      // mentions of the same doc when available
      for (std::size_t m = 0; m < placed.size(); ++m) {
        const Placed& p = placed[m];
        if (p.trigger_tok < 0) continue;
        const auto& types = detail::subdomain_event_types()[g % detail::subdomain_event_types().size()];
        EventMention ev;
        ev.id = "E" + std::to_string(++event_counter);
        ev.doc_id = doc.id;
        ev.event_type = types[p.trigger_type];
        ev.trigger_text = doc.tokens[static_cast<std::size_t>(p.trigger_tok)];
        ev.trigger_start = static_cast<std::size_t>(p.trigger_tok);
        ev.trigger_end = ev.trigger_start + 1;
        if (rng.bernoulli(cfg.modifier_rate))
          ev.modifiers.insert(rng.bernoulli(0.5) ? "Negation" : "Speculation");
        auto add_arg = [&](const std::string& role, std::size_t mention_idx) {
          EventArg a;
          a.role = role;
          a.surface = doc_mentions[mention_idx].surface;
          a.key = doc_mentions[mention_idx].key;
          ev.arguments.push_back(std::move(a));
        };
        add_arg("Theme", m);
        // second argument role depends on the event family
        std::vector<std::size_t> others;
        for (std::size_t o = 0; o < placed.size(); ++o)
          if (o != m) others.push_back(o);
        if (!others.empty() && rng.bernoulli(0.6)) {
          const std::size_t o = others[rng.below(others.size())];
          if (ev.event_type == "Binding" || ev.event_type == "Dissociation")
            add_arg("Theme2", o);
          else if (ev.event_type == "Localization" || ev.event_type == "Transport")
            add_arg("ToLoc", o);
          else
            add_arg("Cause", o);
        }
        if (!others.empty() && rng.bernoulli(0.25)) add_arg("Site", others[rng.below(others.size())]);

        const std::string inner_id = ev.id;
        result.source.events.push_back(std::move(ev));

        if (p.reg_trigger_tok >= 0) {
          EventMention reg;
          reg.id = "E" + std::to_string(++event_counter);
          reg.doc_id = doc.id;
          reg.event_type = "Regulation";
          reg.trigger_text = doc.tokens[static_cast<std::size_t>(p.reg_trigger_tok)];
          reg.trigger_start = static_cast<std::size_t>(p.reg_trigger_tok);
          reg.trigger_end = reg.trigger_start + 1;
          EventArg a;
          a.role = "Theme";
          a.is_event = true;
          a.event_id = inner_id;
          reg.arguments.push_back(std::move(a));
          if (!others.empty() && rng.bernoulli(0.5)) {
            EventArg c;
            c.role = "Cause";
            c.surface = doc_mentions[others[rng.below(others.size())]].surface;
            c.key = lower(c.surface);
            reg.arguments.push_back(std::move(c));
          }
          result.source.events.push_back(std::move(reg));
        }
      }

      for (EntityMention& ent : doc_mentions) result.source.entities.push_back(std::move(ent));
      result.source.documents.push_back(std::move(doc));
    }
  };

  build_source("train", cfg.source_train_docs);
  build_source("dev", cfg.source_val_docs);
  build_participation(result.source);

  // --- target documents ---
  auto build_target = [&](const std::string& prefix, std::size_t count) {
    for (std::size_t d = 0; d < count; ++d) {
      Document doc;
      doc.id = prefix + "-" + std::to_string(d);
      const std::size_t n_ent =
          static_cast<std::size_t>(rng.uniform_int(static_cast<long>(cfg.entities_per_doc_lo),
                                                   static_cast<long>(cfg.entities_per_doc_hi)));
      std::size_t n_fill = static_cast<std::size_t>(
          rng.uniform_int(static_cast<long>(cfg.doc_len_lo), static_cast<long>(cfg.doc_len_hi)));
      const bool inject = rng.bernoulli(cfg.cooccurrence_rate);
      const std::size_t n_inj =
          inject ? static_cast<std::size_t>(rng.uniform_int(static_cast<long>(cfg.injected_lo),
                                                            static_cast<long>(cfg.injected_hi)))
                 : 0;

      auto emit_fillers = [&](std::size_t n) {
        for (std::size_t i = 0; i < n && n_fill > 0; ++i, --n_fill) {
          doc.tokens.push_back(fillers[rng.below(fillers.size())]);
          doc.tags.push_back("O");
        }
      };

      std::vector<Span> gold;
      // interleave gold target mentions and unlabeled source mentions
      std::vector<bool> slot_is_injection;
      for (std::size_t e = 0; e < n_ent; ++e) slot_is_injection.push_back(false);
      for (std::size_t e = 0; e < n_inj; ++e) slot_is_injection.push_back(true);
      rng.shuffle(slot_is_injection);

      for (const bool is_inj : slot_is_injection) {
        emit_fillers(1 + rng.below(3));
        if (is_inj) {
          const detail::SourceSurface& s = src_surfaces[rng.below(src_surfaces.size())];
          const std::size_t start = doc.tokens.size();
          for (const std::string& t : s.tokens) {
            doc.tokens.push_back(t);
            doc.tags.push_back("O");
          }
          std::string surf;
          for (std::size_t t = 0; t < s.tokens.size(); ++t) {
            if (t) surf += ' ';
            surf += s.tokens[t];
          }
          result.meta.injected.push_back({doc.id, start, doc.tokens.size(), surf});
        } else {
          const auto& toks = tgt_surfaces[rng.below(tgt_surfaces.size())];
          const std::string type = cfg.target_types[rng.below(cfg.target_types.size())];
          const std::size_t start = doc.tokens.size();
          for (std::size_t t = 0; t < toks.size(); ++t) {
            doc.tokens.push_back(toks[t]);
            doc.tags.push_back((t == 0 ? "B-" : "I-") + type);
          }
          gold.push_back({start, doc.tokens.size(), type});
        }
      }
      emit_fillers(n_fill);

      for (const Span& sp : gold) result.target.entities.push_back(make_entity(doc, sp));
      result.target.documents.push_back(std::move(doc));
    }
  };

  build_target("train", cfg.target_train_docs);
  build_target("dev", cfg.target_val_docs);
  build_target("test", cfg.target_test_docs);
  build_participation(result.target);

  return result;
}

// Documents of one split, selected by the id prefix convention of gen_synthetic.
inline std::vector<Document> split_docs(const CorpusBundle& bundle, const std::string& prefix) {
  std::vector<Document> out;
  for (const Document& d : bundle.documents)
    if (d.id.rfind(prefix + "-", 0) == 0) out.push_back(d);
  return out;
}

}  // namespace cts
