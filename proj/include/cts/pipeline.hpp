#pragma once

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cts/corpus.hpp"
#include "cts/embedder.hpp"
#include "cts/losses.hpp"
#include "cts/model.hpp"
#include "cts/similarity.hpp"
#include "cts/synth.hpp"

namespace cts {

struct TrainConfig {
  std::size_t batch_source = 64;
  std::size_t batch_target = 16;
  std::size_t max_epochs = 80;
  std::size_t patience = 20;
  std::uint64_t seed = 1;
  MsParams ms;
  EmbeddingMode mode = EmbeddingMode::concat;
  std::size_t aux_dim = 32;
  TaggerConfig tagger;
  double lr = 1e-2;
  double weight_decay = 0.0;
  double clip_norm = 5.0;
  bool contrastive_source = true;  // EG: RMS term during pretraining
  bool contrastive_target = true;  // ED: MS term over pseudo labels during finetuning
  bool refresh_pseudo_each_epoch = false;
  bool fewshot_target = false;  // downsample the target train split per seed
  std::size_t fewshot_lo = 70;
  std::size_t fewshot_hi = 100;

  void validate() const {
    ms.validate();
    if (patience >= max_epochs) throw ValueError("TrainConfig: patience must be below max_epochs");
    if (batch_source == 0 || batch_target == 0) throw ValueError("TrainConfig: zero batch size");
  }
};

// ---------------------------------------------------------------------------
// Batch evaluation: NER cross-entropy plus the contrastive term over the
// batch's entity representations, with gradients assembled into TaggerGrads.

struct BatchEntity {
  std::size_t doc_index = 0;
  std::size_t start = 0, end = 0;
  std::string label;  // mining label (entity type, or binary Q membership)
  std::string key;    // kappa lookup key; empty means kappa = 0
};

struct BatchEval {
  double total = 0.0, ner = 0.0, contrastive = 0.0;
  std::size_t tokens = 0;
};

namespace detail {

inline std::vector<std::size_t> gold_tag_ids(const TaggerModel& model, const Document& doc) {
  std::vector<std::size_t> ids;
  ids.reserve(doc.tags.size());
  for (const std::string& t : doc.tags) ids.push_back(model.tag_id(t));
  return ids;
}

}  // namespace detail

// When grads is non-null the parameter gradients of
// L_NER + lambda * L_contrastive are accumulated into it. The contrastive
// term is evaluated only when enabled; its gradient is applied only when
// lambda is nonzero, so a lambda = 0 run takes the exact direct-transfer
// update path.
inline BatchEval eval_batch(const TaggerModel& model, const std::vector<const Document*>& docs,
                            const std::vector<BatchEntity>& entities, const MsParams& params,
                            double lambda, bool use_rms, bool enabled, const KappaCache* kappa_cache,
                            TaggerGrads* grads) {
  if (docs.empty()) throw ValueError("eval_batch: empty batch");
  BatchEval out;

  std::vector<ForwardResult> fwd;
  fwd.reserve(docs.size());
  std::size_t total_tokens = 0;
  for (const Document* d : docs) {
    fwd.push_back(forward(model, *d));
    total_tokens += d->tokens.size();
  }
  out.tokens = total_tokens;

  // one stacked cross-entropy over every token in the batch
  Mat logits(total_tokens, model.tags.size());
  std::vector<std::size_t> gold;
  gold.reserve(total_tokens);
  std::size_t row = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (std::size_t t = 0; t < docs[d]->tokens.size(); ++t, ++row)
      for (std::size_t c = 0; c < model.tags.size(); ++c) logits.at(row, c) = fwd[d].logits.at(t, c);
    for (const std::size_t id : detail::gold_tag_ids(model, *docs[d])) gold.push_back(id);
  }
  auto [ner, dlogits] = ner_loss(logits, gold);
  out.ner = ner;

  std::vector<Vec> rep_grads;
  std::vector<Vec> reps;
  if (enabled && !entities.empty()) {
    reps.reserve(entities.size());
    std::vector<std::string> labels;
    labels.reserve(entities.size());
    for (const BatchEntity& e : entities) {
      reps.push_back(entity_repr(fwd[e.doc_index].tape.hidden, e.start, e.end));
      labels.push_back(e.label);
    }
    std::function<double(std::size_t, std::size_t)> kappa_of = nullptr;
    if (kappa_cache)
      kappa_of = [&](std::size_t i, std::size_t j) {
        if (entities[i].key.empty() || entities[j].key.empty()) return 0.0;
        return kappa_cache->kappa(entities[i].key, entities[j].key);
      };
    ContrastiveResult c = contrastive_loss_on_reps(reps, labels, params, use_rms, kappa_of);
    out.contrastive = c.loss;
    rep_grads = std::move(c.rep_grads);
  }
  out.total = combined_loss(out.ner, out.contrastive, lambda);

  if (grads) {
    row = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
      const std::size_t n = docs[d]->tokens.size();
      Mat dl(n, model.tags.size());
      for (std::size_t t = 0; t < n; ++t, ++row)
        for (std::size_t c = 0; c < model.tags.size(); ++c) dl.at(t, c) = dlogits.at(row, c);

      Mat dh;
      const Mat* dh_ptr = nullptr;
      if (lambda != 0.0 && !rep_grads.empty()) {
        dh = Mat(n, model.cfg.hidden_dim);
        bool any = false;
        for (std::size_t e = 0; e < entities.size(); ++e) {
          if (entities[e].doc_index != d) continue;
          const double scale = lambda / static_cast<double>(entities[e].end - entities[e].start);
          for (std::size_t t = entities[e].start; t < entities[e].end; ++t)
            for (std::size_t c = 0; c < model.cfg.hidden_dim; ++c)
              dh.at(t, c) += scale * rep_grads[e][c];
          any = true;
        }
        if (any) dh_ptr = &dh;
      }
      backward(model, fwd[d].tape, dl, dh_ptr, *grads);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Prediction, evaluation, pseudo labeling

inline std::vector<std::string> predict_tags(const TaggerModel& model, const Document& doc) {
  const ForwardResult fwd = forward(model, doc);
  std::vector<std::string> tags(doc.tokens.size());
  for (std::size_t t = 0; t < doc.tokens.size(); ++t) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < model.tags.size(); ++c)
      if (fwd.logits.at(t, c) > fwd.logits.at(t, best)) best = c;
    tags[t] = model.tags[best];
  }
  return tags;
}

inline std::vector<Span> predict_spans(const TaggerModel& model, const Document& doc) {
  return decode_bio(predict_tags(model, doc));
}

struct TypeScore {
  std::size_t tp = 0, fp = 0, fn = 0;
  double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct EvalReport {
  std::map<std::string, TypeScore> per_type;  // includes prediction-only types
  double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
};

// Strict entity-level scoring: a prediction counts only on exact span and
// type match. Macro scores average over the gold entity types.
inline EvalReport score_predictions(const std::vector<Document>& docs,
                                    const std::vector<std::vector<Span>>& predictions) {
  if (docs.size() != predictions.size()) throw ValueError("score_predictions: length mismatch");
  EvalReport report;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const std::vector<Span> gold = decode_bio(docs[d].tags);
    const std::vector<Span>& pred = predictions[d];
    std::set<Span> gold_set(gold.begin(), gold.end());
    for (const Span& p : pred) {
      if (gold_set.count(p))
        report.per_type[p.type].tp++;
      else
        report.per_type[p.type].fp++;
    }
    std::set<Span> pred_set(pred.begin(), pred.end());
    for (const Span& g : gold)
      if (!pred_set.count(g)) report.per_type[g.type].fn++;
  }
  std::size_t gold_types = 0;
  for (auto& [type, s] : report.per_type) {
    s.precision = s.tp + s.fp > 0 ? static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp) : 0.0;
    s.recall = s.tp + s.fn > 0 ? static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn) : 0.0;
    s.f1 = s.precision + s.recall > 0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    if (s.tp + s.fn > 0) {  // a gold type
      report.macro_precision += s.precision;
      report.macro_recall += s.recall;
      report.macro_f1 += s.f1;
      ++gold_types;
    }
  }
  if (gold_types > 0) {
    report.macro_precision /= static_cast<double>(gold_types);
    report.macro_recall /= static_cast<double>(gold_types);
    report.macro_f1 /= static_cast<double>(gold_types);
  }
  return report;
}

inline EvalReport evaluate(const TaggerModel& model, const std::vector<Document>& docs) {
  std::vector<std::vector<Span>> predictions;
  predictions.reserve(docs.size());
  for (const Document& doc : docs) predictions.push_back(predict_spans(model, doc));
  return score_predictions(docs, predictions);
}

struct PseudoSet {
  std::vector<EntityMention> members;

  std::map<std::string, std::vector<Span>> by_doc() const {
    std::map<std::string, std::vector<Span>> out;
    for (const EntityMention& e : members) out[e.doc_id].push_back({e.start, e.end, e.entity_type});
    return out;
  }
};

inline bool spans_overlap(std::size_t a0, std::size_t a1, std::size_t b0, std::size_t b1) {
  return a0 < b1 && b0 < a1;
}

// Predicted entities on target training documents that share no token with
// any gold entity of their document.
inline PseudoSet pseudo_from_predictions(const std::vector<Document>& docs,
                                         const std::vector<std::vector<Span>>& predictions) {
  if (docs.size() != predictions.size()) throw ValueError("pseudo_from_predictions: length mismatch");
  PseudoSet q;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const std::vector<Span> gold = decode_bio(docs[d].tags);
    for (const Span& p : predictions[d]) {
      bool overlaps = false;
      for (const Span& g : gold) overlaps = overlaps || spans_overlap(p.start, p.end, g.start, g.end);
      if (!overlaps) q.members.push_back(make_entity(docs[d], p));
    }
  }
  return q;
}

inline PseudoSet extract_pseudo(const TaggerModel& model, const std::vector<Document>& target_train) {
  std::vector<std::vector<Span>> predictions;
  predictions.reserve(target_train.size());
  for (const Document& doc : target_train) predictions.push_back(predict_spans(model, doc));
  return pseudo_from_predictions(target_train, predictions);
}

// ---------------------------------------------------------------------------
// Davies-Bouldin index over labeled representation clusters

inline double davies_bouldin(const std::vector<std::pair<Vec, int>>& reps) {
  std::map<int, std::vector<const Vec*>> clusters;
  for (const auto& [v, id] : reps) clusters[id].push_back(&v);
  if (clusters.size() < 2) throw ValueError("davies_bouldin: need at least 2 clusters");

  std::vector<Vec> centroids;
  std::vector<double> scatter;
  for (const auto& [id, members] : clusters) {
    Vec c(members[0]->size(), 0.0);
    for (const Vec* m : members) axpy(1.0, *m, c);
    for (double& x : c) x /= static_cast<double>(members.size());
    double s = 0.0;
    for (const Vec* m : members) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) d2 += (c[i] - (*m)[i]) * (c[i] - (*m)[i]);
      s += std::sqrt(d2);
    }
    centroids.push_back(std::move(c));
    scatter.push_back(s / static_cast<double>(members.size()));
  }

  const std::size_t k = centroids.size();
  double db = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      double d2 = 0.0;
      for (std::size_t c = 0; c < centroids[i].size(); ++c)
        d2 += (centroids[i][c] - centroids[j][c]) * (centroids[i][c] - centroids[j][c]);
      const double dist = std::sqrt(d2);
      if (dist < 1e-12) throw ValueError("davies_bouldin: coincident centroids");
      worst = std::max(worst, (scatter[i] + scatter[j]) / dist);
    }
    db += worst;
  }
  return db / static_cast<double>(k);
}

// ---------------------------------------------------------------------------
// Training stages

namespace detail {

inline std::map<std::string, std::vector<BatchEntity>> entities_by_doc(const CorpusBundle& bundle) {
  std::map<std::string, std::vector<BatchEntity>> out;
  for (const EntityMention& e : bundle.entities)
    out[e.doc_id].push_back({0, e.start, e.end, e.entity_type, e.key});
  return out;
}

struct StageData {
  std::vector<Document> train;
  std::vector<Document> val;
  // per doc id: mining entities (label + kappa key already resolved)
  std::map<std::string, std::vector<BatchEntity>> entities;
};

struct StageParams {
  double lambda = 0.0;
  bool use_rms = false;
  bool enabled = false;
  std::size_t batch_size = 16;
  const KappaCache* kappa = nullptr;
  std::string stream;  // rng stream tag, e.g. "pretrain"
};

inline TaggerModel train_stage(TaggerModel model, const StageData& data, const StageParams& stage,
                               const TrainConfig& cfg,
                               const std::function<void(TaggerModel&, std::size_t)>& on_epoch_begin =
                                   nullptr) {
  if (data.train.empty()) throw ValueError("train_stage: empty training set");
  AdamW opt(model, cfg.lr, cfg.weight_decay);

  TaggerModel best = model;
  double best_f1 = -1.0;
  std::size_t best_epoch = 0;

  std::vector<std::size_t> order(data.train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    if (on_epoch_begin) on_epoch_begin(model, epoch);
    Rng shuffle_rng(derive_seed(cfg.seed, stage.stream + "-epoch-" + std::to_string(epoch)));
    shuffle_rng.shuffle(order);

    for (std::size_t b = 0; b < order.size(); b += stage.batch_size) {
      std::vector<const Document*> docs;
      std::vector<BatchEntity> entities;
      for (std::size_t i = b; i < std::min(order.size(), b + stage.batch_size); ++i) {
        const Document& d = data.train[order[i]];
        const auto it = data.entities.find(d.id);
        if (it != data.entities.end())
          for (BatchEntity e : it->second) {
            e.doc_index = docs.size();
            entities.push_back(std::move(e));
          }
        docs.push_back(&d);
      }
      TaggerGrads grads = TaggerGrads::like(model);
      eval_batch(model, docs, entities, cfg.ms, stage.lambda, stage.use_rms, stage.enabled, stage.kappa,
                 &grads);
      clip_gradients(grads, cfg.clip_norm);
      opt.update(model, grads);
    }

    if (!data.val.empty()) {
      const double f1 = evaluate(model, data.val).macro_f1;
      if (f1 > best_f1) {  // strict: ties keep the earliest epoch
        best_f1 = f1;
        best = model;
        best_epoch = epoch;
      }
      if (epoch - best_epoch >= cfg.patience) break;
    } else {
      best = model;
      best_epoch = epoch;
    }
  }
  return best;
}

}  // namespace detail

// Source pretraining: L_NER + lambda_S * L_RMS with kappa from the event
// embedding sets of the chosen mode. Returns the best-validation checkpoint.
// extra_vocab_docs widen the token vocabulary (the finetuning stage shares
// this model, so target tokens must exist at construction).
inline TaggerModel pretrain_source(const CorpusBundle& bundle, const TrainConfig& cfg,
                                   const std::vector<const Document*>& extra_vocab_docs = {},
                                   const EmbeddingProvider* provider = nullptr,
                                   const TemplateSet* templates = nullptr) {
  cfg.validate();
  detail::StageData data;
  data.train = split_docs(bundle, "train");
  data.val = split_docs(bundle, "dev");
  if (data.train.empty()) throw ValueError("pretrain_source: empty training set");
  data.entities = detail::entities_by_doc(bundle);

  std::vector<const Document*> vocab_docs;
  for (const Document& d : bundle.documents) vocab_docs.push_back(&d);
  for (const Document* d : extra_vocab_docs) vocab_docs.push_back(d);
  TaggerModel model = make_tagger(cfg.tagger, build_vocab(vocab_docs), build_tag_set(vocab_docs), cfg.seed);

  std::optional<KappaCache> kappa;
  if (cfg.contrastive_source) {
    const EmbeddingProvider default_provider =
        EmbeddingProvider::hashing(cfg.aux_dim, derive_seed(cfg.seed, "aux-provider"));
    const TemplateSet default_templates = default_template_set();
    kappa.emplace(build_embedding_sets(bundle, cfg.mode, provider ? *provider : default_provider,
                                       templates ? *templates : default_templates, cfg.seed));
  }

  detail::StageParams stage;
  stage.lambda = cfg.ms.lambda_source;
  stage.use_rms = true;
  stage.enabled = cfg.contrastive_source;
  stage.batch_size = cfg.batch_source;
  stage.kappa = kappa ? &*kappa : nullptr;
  stage.stream = "pretrain";
  return detail::train_stage(std::move(model), data, stage, cfg);
}

// Target finetuning: L_NER over gold tags plus lambda_T * L_MS over the
// binary split gold-target (1) vs pseudo (0). Pseudo entities never touch
// the NER targets.
inline TaggerModel finetune_target(TaggerModel model, const std::vector<Document>& target_train,
                                   const std::vector<Document>& target_val, const PseudoSet& pseudo,
                                   const TrainConfig& cfg) {
  cfg.validate();
  detail::StageData data;
  data.train = target_train;
  data.val = target_val;

  auto fill_entities = [&](const PseudoSet& q) {
    data.entities.clear();
    const auto by_doc = q.by_doc();
    for (const Document& d : data.train) {
      std::vector<BatchEntity>& ents = data.entities[d.id];
      for (const Span& g : decode_bio(d.tags)) ents.push_back({0, g.start, g.end, "1", ""});
      const auto it = by_doc.find(d.id);
      if (it != by_doc.end())
        for (const Span& p : it->second) ents.push_back({0, p.start, p.end, "0", ""});
    }
  };
  fill_entities(pseudo);

  detail::StageParams stage;
  stage.lambda = cfg.ms.lambda_target;
  stage.use_rms = false;  // plain MS, kappa identically 0
  stage.enabled = cfg.contrastive_target;
  stage.batch_size = cfg.batch_target;
  stage.kappa = nullptr;
  stage.stream = "finetune";

  std::function<void(TaggerModel&, std::size_t)> refresh = nullptr;
  if (cfg.refresh_pseudo_each_epoch && cfg.contrastive_target)
    refresh = [&](TaggerModel& m, std::size_t epoch) {
      if (epoch > 1) fill_entities(extract_pseudo(m, data.train));
    };
  return detail::train_stage(std::move(model), data, stage, cfg, refresh);
}

// ---------------------------------------------------------------------------
// Experiments

enum class Variant { target_only, direct_transfer, eg_only, ed_only, eg_ed };

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::target_only: return "target_only";
    case Variant::direct_transfer: return "direct_transfer";
    case Variant::eg_only: return "eg_only";
    case Variant::ed_only: return "ed_only";
    case Variant::eg_ed: return "eg_ed";
  }
  return "?";
}

inline Variant variant_from_string(const std::string& s) {
  for (const Variant v : {Variant::target_only, Variant::direct_transfer, Variant::eg_only,
                          Variant::ed_only, Variant::eg_ed})
    if (s == variant_name(v)) return v;
  throw ValueError("unknown variant '" + s + "'");
}

struct RunMetrics {
  std::uint64_t seed = 0;
  EvalReport test;
  double db = std::numeric_limits<double>::quiet_NaN();
  std::size_t fp_pseudo_style = 0;  // predicted test entities overlapping injected source spans
  std::size_t pseudo_count = 0;
  TaggerModel final_model;
};

struct VariantSummary {
  std::string variant;
  std::vector<RunMetrics> runs;
  double mean_f1 = 0.0, std_f1 = 0.0;
  double mean_precision = 0.0, mean_recall = 0.0;
  double mean_db = std::numeric_limits<double>::quiet_NaN();
  double mean_fp = 0.0;
};

inline TrainConfig variant_config(TrainConfig cfg, Variant v) {
  switch (v) {
    case Variant::target_only:
    case Variant::direct_transfer:
      cfg.contrastive_source = false;
      cfg.contrastive_target = false;
      cfg.ms.lambda_source = 0.0;
      cfg.ms.lambda_target = 0.0;
      break;
    case Variant::eg_only:
      cfg.contrastive_target = false;
      cfg.ms.lambda_target = 0.0;
      break;
    case Variant::ed_only:
      cfg.contrastive_source = false;
      cfg.ms.lambda_source = 0.0;
      break;
    case Variant::eg_ed:
      break;
  }
  return cfg;
}

// One seed of one variant. The target train split (and its few-shot
// downsampling) depends only on the seed, so variants compared at equal
// seeds share identical splits.
inline RunMetrics run_variant_once(const TrainConfig& base_cfg, Variant variant,
                                   const CorpusBundle& source, const CorpusBundle& target,
                                   std::uint64_t seed, const SynthMeta* meta = nullptr) {
  TrainConfig cfg = variant_config(base_cfg, variant);
  cfg.seed = seed;

  std::vector<Document> target_train = split_docs(target, "train");
  const std::vector<Document> target_val = split_docs(target, "dev");
  const std::vector<Document> target_test = split_docs(target, "test");
  if (cfg.fewshot_target)
    target_train = downsample_fewshot(target_train, derive_seed(seed, "target-fewshot"), cfg.fewshot_lo,
                                      cfg.fewshot_hi);

  std::vector<const Document*> extra_docs;
  for (const Document& d : target_train) extra_docs.push_back(&d);
  for (const Document& d : target_val) extra_docs.push_back(&d);

  TaggerModel model = [&] {
    if (variant == Variant::target_only) {
      std::vector<const Document*> vocab_docs;
      for (const Document& d : source.documents) vocab_docs.push_back(&d);
      for (const Document* d : extra_docs) vocab_docs.push_back(d);
      return make_tagger(cfg.tagger, build_vocab(vocab_docs), build_tag_set(vocab_docs), cfg.seed);
    }
    return pretrain_source(source, cfg, extra_docs);
  }();

  PseudoSet pseudo;
  if (cfg.contrastive_target && variant != Variant::target_only)
    pseudo = extract_pseudo(model, target_train);

  RunMetrics metrics;
  metrics.seed = seed;
  metrics.pseudo_count = pseudo.members.size();
  metrics.final_model = finetune_target(std::move(model), target_train, target_val, pseudo, cfg);
  metrics.test = evaluate(metrics.final_model, target_test);

  if (meta) {
    std::map<std::string, std::vector<InjectedSpan>> injected;
    for (const InjectedSpan& s : meta->injected) injected[s.doc_id].push_back(s);
    std::vector<std::pair<Vec, int>> clusters;
    for (const Document& doc : target_test) {
      const auto inj = injected.find(doc.id);
      for (const Span& p : predict_spans(metrics.final_model, doc)) {
        if (inj == injected.end()) continue;
        for (const InjectedSpan& s : inj->second)
          if (spans_overlap(p.start, p.end, s.start, s.end)) {
            metrics.fp_pseudo_style++;
            break;
          }
      }
      const ForwardResult fwd = forward(metrics.final_model, doc);
      for (const Span& g : decode_bio(doc.tags))
        clusters.push_back({entity_repr(fwd.tape.hidden, g.start, g.end), 0});
      if (inj != injected.end())
        for (const InjectedSpan& s : inj->second)
          clusters.push_back({entity_repr(fwd.tape.hidden, s.start, s.end), 1});
    }
    bool has0 = false, has1 = false;
    for (const auto& [v, id] : clusters) (id == 0 ? has0 : has1) = true;
    if (has0 && has1) {
      try {
        metrics.db = davies_bouldin(clusters);
      } catch (const ValueError&) {
        // coincident centroids: leave NaN
      }
    }
  }
  return metrics;
}

inline VariantSummary summarize(const std::string& name, std::vector<RunMetrics> runs) {
  VariantSummary s;
  s.variant = name;
  double sum = 0.0, sum2 = 0.0, sp = 0.0, sr = 0.0, sdb = 0.0, sfp = 0.0;
  std::size_t db_count = 0;
  for (const RunMetrics& r : runs) {
    sum += r.test.macro_f1;
    sum2 += r.test.macro_f1 * r.test.macro_f1;
    sp += r.test.macro_precision;
    sr += r.test.macro_recall;
    sfp += static_cast<double>(r.fp_pseudo_style);
    if (!std::isnan(r.db)) {
      sdb += r.db;
      ++db_count;
    }
  }
  const double n = static_cast<double>(runs.size());
  if (n > 0) {
    s.mean_f1 = sum / n;
    s.std_f1 = std::sqrt(std::max(0.0, sum2 / n - s.mean_f1 * s.mean_f1));
    s.mean_precision = sp / n;
    s.mean_recall = sr / n;
    s.mean_fp = sfp / n;
    if (db_count > 0) s.mean_db = sdb / static_cast<double>(db_count);
  }
  s.runs = std::move(runs);
  return s;
}

struct ExperimentReport {
  std::vector<VariantSummary> variants;
};

// Independent (variant, seed) runs; with threads > 1 they execute
// concurrently but the output is identical to the sequential order.
inline ExperimentReport run_experiment(const TrainConfig& cfg, const CorpusBundle& source,
                                       const CorpusBundle& target, const std::vector<Variant>& variants,
                                       const std::vector<std::uint64_t>& seeds,
                                       const SynthMeta* meta = nullptr, std::size_t threads = 1) {
  std::vector<std::pair<Variant, std::uint64_t>> jobs;
  for (const Variant v : variants)
    for (const std::uint64_t seed : seeds) jobs.emplace_back(v, seed);
  std::vector<RunMetrics> results(jobs.size());

  if (threads <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i)
      results[i] = run_variant_once(cfg, jobs[i].first, source, target, jobs[i].second, meta);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    const std::size_t n_workers = std::min(threads, jobs.size());
    for (std::size_t w = 0; w < n_workers; ++w)
      workers.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1))
          results[i] = run_variant_once(cfg, jobs[i].first, source, target, jobs[i].second, meta);
      });
    for (std::thread& t : workers) t.join();
  }

  ExperimentReport report;
  std::size_t idx = 0;
  for (const Variant v : variants) {
    std::vector<RunMetrics> runs;
    for (std::size_t s = 0; s < seeds.size(); ++s) runs.push_back(std::move(results[idx++]));
    report.variants.push_back(summarize(variant_name(v), std::move(runs)));
  }
  return report;
}

}  // namespace cts
