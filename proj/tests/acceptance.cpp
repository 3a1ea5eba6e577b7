// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Criteria 1-7, 9, 10 are property checks with independent
// oracles; criterion 8 is the synthetic transfer direction check.

#include <chrono>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "cts/embedder.hpp"
#include "cts/losses.hpp"
#include "cts/model.hpp"
#include "cts/pipeline.hpp"
#include "cts/similarity.hpp"
#include "cts/synth.hpp"

using namespace cts;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PairBatch random_batch(Rng& rng, std::size_t max_n) {
  MsParams params;
  const std::size_t n = 2 + rng.below(max_n - 1);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("c" + std::to_string(rng.below(3)));
  Mat s(n, n), k(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      s.at(i, j) = s.at(j, i) = rng.uniform(-1.0, 1.0);
      k.at(i, j) = k.at(j, i) = rng.uniform(-1.0, 1.0);
    }
  PairBatch batch = mine_pairs_from_matrix(s, labels, params);
  attach_kappa(batch, [&](std::size_t i, std::size_t j) { return k.at(i, j); });
  return batch;
}

// --- criterion 1: gradient-weight identity --------------------------------

void criterion_gradient_weight_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(101);
  MsParams params;
  double worst = 0.0;
  for (int round = 0; round < 100; ++round) {
    const PairBatch batch = random_batch(rng, 12);
    const double n_e = static_cast<double>(batch.n_anchors);
    const PairValues msw = ms_weights(batch, params);
    const PairValues msg = ms_loss(batch, params).second;
    const PairValues rmsw = rms_weights(batch, params);
    const PairValues rmsg = rms_loss(batch, params).second;
    for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
      for (std::size_t k = 0; k < msw.pos[i].size(); ++k) {
        worst = std::max(worst, std::abs(std::abs(msg.pos[i][k]) * n_e - msw.pos[i][k]));
        worst = std::max(worst, std::abs(std::abs(rmsg.pos[i][k]) * n_e - rmsw.pos[i][k]));
      }
      for (std::size_t k = 0; k < msw.neg[i].size(); ++k) {
        worst = std::max(worst, std::abs(std::abs(msg.neg[i][k]) * n_e - msw.neg[i][k]));
        worst = std::max(worst, std::abs(std::abs(rmsg.neg[i][k]) * n_e - rmsw.neg[i][k]));
      }
    }
  }
  const double secs = seconds_since(t0);
  char detail[128];
  std::snprintf(detail, sizeof detail, "max |grad*n_e - w| = %.3g over 100 batches, %.2fs", worst, secs);
  report(1, "gradient-weight identity (MS and RMS)", worst <= 1e-10 && secs < 5.0, detail);
}

// --- criterion 2: RMS(rho=tau=0) reduces to MS ----------------------------

void criterion_reduction() {
  Rng rng(202);
  MsParams params;
  params.rho = 0.0;
  params.tau = 0.0;
  double worst = 0.0;
  for (int round = 0; round < 1000; ++round) {
    const PairBatch batch = random_batch(rng, 12);
    worst = std::max(worst, std::abs(rms_loss(batch, params).first - ms_loss(batch, params).first));
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "max |L_RMS - L_MS| = %.3g over 1000 batches", worst);
  report(2, "RMS with rho=tau=0 equals MS", worst <= 1e-12, detail);
}

// --- criterion 3: mining oracle --------------------------------------------

void criterion_mining_oracle() {
  Rng rng(303);
  MsParams params;
  std::size_t mismatches = 0;
  for (int round = 0; round < 500; ++round) {
    const std::size_t n = 2 + rng.below(19);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("c" + std::to_string(rng.below(3)));
    params.epsilon = rng.uniform(0.0, 0.3);
    Mat s(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s.at(i, j) = s.at(j, i) = rng.uniform(-1.0, 1.0);
    const PairBatch got = mine_pairs_from_matrix(s, labels, params);

    // brute force straight from the set definitions
    for (std::size_t i = 0; i < n; ++i) {
      std::set<std::size_t> pos, neg;
      double max_neg = -1e18, min_pos = 1e18;
      bool has_neg = false, has_pos = false;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        if (labels[k] != labels[i]) {
          max_neg = std::max(max_neg, s.at(i, k));
          has_neg = true;
        } else {
          min_pos = std::min(min_pos, s.at(i, k));
          has_pos = true;
        }
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        if (labels[j] == labels[i] && (!has_neg || s.at(i, j) < max_neg + params.epsilon)) pos.insert(j);
        if (labels[j] != labels[i] && (!has_pos || s.at(i, j) > min_pos - params.epsilon)) neg.insert(j);
      }
      std::set<std::size_t> got_pos, got_neg;
      for (const MinedPair& p : got.anchors[i].positives) got_pos.insert(p.j);
      for (const MinedPair& p : got.anchors[i].negatives) got_neg.insert(p.j);
      if (got_pos != pos || got_neg != neg) ++mismatches;
    }
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "%zu anchor set mismatches over 500 instances", mismatches);
  report(3, "pair mining matches brute-force set construction", mismatches == 0, detail);
}

// --- criterion 4: kappa oracle ---------------------------------------------

void criterion_kappa_oracle() {
  Rng rng(404);
  double worst = 0.0;
  bool empty_ok = true;
  for (int round = 0; round < 500; ++round) {
    const std::size_t dim = 1 + rng.below(32);
    EmbeddingSets sets;
    for (const char* key : {"a", "b"}) {
      const std::size_t count = rng.below(11);
      sets[key];
      for (std::size_t c = 0; c < count; ++c) {
        Vec v(dim);
        for (double& x : v) x = rng.uniform(-1.0, 1.0);
        sets[key].push_back({"E" + std::to_string(c), key, v});
      }
    }
    KappaCache cache(sets);
    const double got = cache.kappa("a", "b");
    if (sets["a"].empty() || sets["b"].empty()) {
      empty_ok = empty_ok && got == 0.0;
      continue;
    }
    double brute = -2.0;
    for (const auto& mu : sets["a"])
      for (const auto& nu : sets["b"]) brute = std::max(brute, cosine(mu.vector, nu.vector));
    worst = std::max(worst, std::abs(got - brute));
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "max |kappa - brute| = %.3g, empty sets exact: %s", worst,
                empty_ok ? "yes" : "no");
  report(4, "kappa equals brute-force max cosine", worst <= 1e-12 && empty_ok, detail);
}

// --- criterion 5: full-model finite differences ----------------------------

struct Fixture {
  std::vector<Document> docs;
  std::vector<BatchEntity> entities;
};

Fixture random_fixture(Rng& rng) {
  const std::vector<std::string> vocab = {"aa", "bb", "cc", "dd", "ee", "ff", "gg", "hh"};
  const std::vector<std::string> types = {"Gene", "Chem"};
  Fixture f;
  const std::size_t n_docs = 2 + rng.below(2);
  for (std::size_t d = 0; d < n_docs; ++d) {
    Document doc;
    doc.id = "fx-" + std::to_string(d);
    const std::size_t len = 4 + rng.below(5);
    for (std::size_t t = 0; t < len; ++t) {
      doc.tokens.push_back(vocab[rng.below(vocab.size())]);
      doc.tags.push_back("O");
    }
    const std::size_t n_ent = 1 + rng.below(2);
    for (std::size_t e = 0; e < n_ent; ++e) {
      const std::size_t pos = rng.below(len);
      if (doc.tags[pos] != "O") continue;
      const std::string type = types[rng.below(types.size())];
      doc.tags[pos] = "B-" + type;
      f.entities.push_back({d, pos, pos + 1, type, doc.tokens[pos]});
    }
    f.docs.push_back(std::move(doc));
  }
  return f;
}

double fixture_loss(const TaggerModel& model, const Fixture& f, const MsParams& params, double lambda,
                    const PairBatch& sets, const std::function<double(std::size_t, std::size_t)>& kap) {
  std::vector<ForwardResult> fwd;
  std::size_t total = 0;
  for (const Document& d : f.docs) {
    fwd.push_back(forward(model, d));
    total += d.tokens.size();
  }
  Mat logits(total, model.tags.size());
  std::vector<std::size_t> gold;
  std::size_t row = 0;
  for (std::size_t d = 0; d < f.docs.size(); ++d) {
    for (std::size_t t = 0; t < f.docs[d].tokens.size(); ++t, ++row)
      for (std::size_t c = 0; c < model.tags.size(); ++c) logits.at(row, c) = fwd[d].logits.at(t, c);
    for (const std::string& tag : f.docs[d].tags) gold.push_back(model.tag_id(tag));
  }
  const double ner = ner_loss(logits, gold).first;
  std::vector<Vec> reps;
  for (const BatchEntity& e : f.entities)
    reps.push_back(entity_repr(fwd[e.doc_index].tape.hidden, e.start, e.end));
  PairBatch refreshed = sets;
  for (std::size_t i = 0; i < refreshed.anchors.size(); ++i) {
    for (MinedPair& p : refreshed.anchors[i].positives) {
      p.s = cosine(reps[i], reps[p.j]);
      p.kappa = kap(i, p.j);
    }
    for (MinedPair& p : refreshed.anchors[i].negatives) {
      p.s = cosine(reps[i], reps[p.j]);
      p.kappa = kap(i, p.j);
    }
  }
  return ner + lambda * rms_loss(refreshed, params).first;
}

void criterion_full_model_fd() {
  Rng rng(505);
  MsParams params;
  const double lambda = 0.2;
  bool pass = true;
  double worst_rel = 0.0;
  for (int fixture_round = 0; fixture_round < 5; ++fixture_round) {
    const Fixture f = random_fixture(rng);
    std::vector<const Document*> ptrs;
    for (const Document& d : f.docs) ptrs.push_back(&d);
    const TaggerModel model =
        make_tagger({8, 10, 2}, build_vocab(ptrs), build_tag_set(ptrs), 600 + fixture_round);

    auto kap = [&](std::size_t i, std::size_t j) {
      const std::uint64_t h =
          fnv1a64(f.entities[std::min(i, j)].key) ^ fnv1a64(f.entities[std::max(i, j)].key);
      return static_cast<double>(h % 2000) / 1000.0 - 1.0;
    };

    // analytic gradient at the base point
    std::vector<ForwardResult> fwd;
    for (const Document& d : f.docs) fwd.push_back(forward(model, d));
    std::vector<Vec> reps;
    std::vector<std::string> labels;
    for (const BatchEntity& e : f.entities) {
      reps.push_back(entity_repr(fwd[e.doc_index].tape.hidden, e.start, e.end));
      labels.push_back(e.label);
    }
    PairBatch sets = mine_pairs(reps, labels, params);
    attach_kappa(sets, kap);

    TaggerGrads grads = TaggerGrads::like(model);
    {
      std::size_t total = 0;
      for (const Document& d : f.docs) total += d.tokens.size();
      Mat logits(total, model.tags.size());
      std::vector<std::size_t> gold;
      std::size_t row = 0;
      for (std::size_t d = 0; d < f.docs.size(); ++d) {
        for (std::size_t t = 0; t < f.docs[d].tokens.size(); ++t, ++row)
          for (std::size_t c = 0; c < model.tags.size(); ++c) logits.at(row, c) = fwd[d].logits.at(t, c);
        for (const std::string& tag : f.docs[d].tags) gold.push_back(model.tag_id(tag));
      }
      auto [ner, dlogits] = ner_loss(logits, gold);
      auto [closs, ds] = rms_loss(sets, params);
      const std::vector<Vec> rep_grads = pair_grads_to_reps(sets, ds, reps);
      row = 0;
      for (std::size_t d = 0; d < f.docs.size(); ++d) {
        const std::size_t n = f.docs[d].tokens.size();
        Mat dl(n, model.tags.size());
        for (std::size_t t = 0; t < n; ++t, ++row)
          for (std::size_t c = 0; c < model.tags.size(); ++c) dl.at(t, c) = dlogits.at(row, c);
        Mat dh(n, model.cfg.hidden_dim);
        for (std::size_t e = 0; e < f.entities.size(); ++e) {
          if (f.entities[e].doc_index != d) continue;
          const double scale = lambda / static_cast<double>(f.entities[e].end - f.entities[e].start);
          for (std::size_t t = f.entities[e].start; t < f.entities[e].end; ++t)
            for (std::size_t c = 0; c < model.cfg.hidden_dim; ++c) dh.at(t, c) += scale * rep_grads[e][c];
        }
        backward(model, fwd[d].tape, dl, &dh, grads);
      }
    }

    const double h = 1e-4;
    auto probe_block = [&](const Vec& grad_block, std::size_t size, auto mutate) {
      for (int probe = 0; probe < 10; ++probe) {
        const std::size_t idx = rng.below(size);
        TaggerModel plus = model, minus = model;
        mutate(plus, idx, h);
        mutate(minus, idx, -h);
        const double fd =
            (fixture_loss(plus, f, params, lambda, sets, kap) -
             fixture_loss(minus, f, params, lambda, sets, kap)) /
            (2 * h);
        const double analytic = grad_block[idx];
        const double err = std::abs(analytic - fd);
        const double rel = err / std::max(1e-12, std::max(std::abs(analytic), std::abs(fd)));
        if (!(rel < 1e-3 || err < 1e-7)) pass = false;
        if (err >= 1e-7) worst_rel = std::max(worst_rel, rel);
      }
    };
    probe_block(grads.embed.data, model.embed.size(),
                [](TaggerModel& m, std::size_t i, double d) { m.embed.data[i] += d; });
    probe_block(grads.w1.data, model.w1.size(),
                [](TaggerModel& m, std::size_t i, double d) { m.w1.data[i] += d; });
    probe_block(grads.b1, model.b1.size(), [](TaggerModel& m, std::size_t i, double d) { m.b1[i] += d; });
    probe_block(grads.w2.data, model.w2.size(),
                [](TaggerModel& m, std::size_t i, double d) { m.w2.data[i] += d; });
    probe_block(grads.b2, model.b2.size(), [](TaggerModel& m, std::size_t i, double d) { m.b2[i] += d; });
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "worst relative error %.3g over 5 fixtures x 10 probes/block",
                worst_rel);
  report(5, "full-model gradient matches central differences", pass, detail);
}

// --- criterion 6: compression linearity and padding moments ----------------

void criterion_compress_and_padding() {
  Rng rng(606);
  double worst = 0.0;
  for (int round = 0; round < 50; ++round) {
    Vec x(40), y(40);
    for (double& v : x) v = rng.uniform(-2.0, 2.0);
    for (double& v : y) v = rng.uniform(-2.0, 2.0);
    const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
    Vec combo(40);
    for (std::size_t i = 0; i < 40; ++i) combo[i] = a * x[i] + b * y[i];
    const Vec lhs = compress(combo, 5);
    const Vec cx = compress(x, 5), cy = compress(y, 5);
    for (std::size_t i = 0; i < lhs.size(); ++i)
      worst = std::max(worst, std::abs(lhs[i] - (a * cx[i] + b * cy[i])));
  }

  PadState st(3, 909);
  st.observe({0.0, 1.0, -1.0});
  st.observe({2.0, 3.0, 1.0});
  st.observe({4.0, 2.0, 0.0});
  const Vec mean = st.mean();
  const Vec var = st.variance();
  const std::size_t n = 10000;
  Vec acc(3, 0.0);
  for (std::size_t i = 0; i < n; ++i) axpy(1.0, pad_sample(st, "draw" + std::to_string(i)), acc);
  bool moments_ok = true;
  for (std::size_t c = 0; c < 3; ++c) {
    const double sample_mean = acc[c] / static_cast<double>(n);
    const double bound = 5.0 * std::sqrt(var[c]) / std::sqrt(static_cast<double>(n));
    moments_ok = moments_ok && std::abs(sample_mean - mean[c]) <= bound;
  }
  char detail[96];
  std::snprintf(detail, sizeof detail, "max linearity residual %.3g; 1e4-draw mean within 5 sigma: %s",
                worst, moments_ok ? "yes" : "no");
  report(6, "compress linearity and pad_sample moments", worst <= 1e-12 && moments_ok, detail);
}

// --- criterion 7: direct-transfer collapse ---------------------------------

void criterion_direct_transfer_collapse() {
  SynthConfig scfg;
  scfg.source_train_docs = 24;
  scfg.source_val_docs = 8;
  scfg.target_train_docs = 16;
  scfg.target_val_docs = 8;
  scfg.target_test_docs = 8;
  scfg.source_entity_vocab = 20;
  scfg.target_entity_vocab = 14;
  const SynthResult r = gen_synthetic(scfg, 77);

  TrainConfig base;
  base.max_epochs = 10;
  base.patience = 5;
  base.batch_source = 16;
  base.batch_target = 8;
  base.tagger = {16, 24, 2};
  base.aux_dim = 12;
  base.seed = 9;

  const std::vector<Document> train = split_docs(r.target, "train");
  const std::vector<Document> val = split_docs(r.target, "dev");
  std::vector<const Document*> extra;
  for (const Document& d : r.target.documents) extra.push_back(&d);

  auto run = [&](bool enabled) {
    TrainConfig cfg = base;
    cfg.ms.lambda_source = 0.0;
    cfg.ms.lambda_target = 0.0;
    cfg.contrastive_source = enabled;
    cfg.contrastive_target = enabled;
    TaggerModel pre = pretrain_source(r.source, cfg, extra);
    PseudoSet q;
    if (enabled) q = extract_pseudo(pre, train);
    return save_checkpoint_string(finetune_target(std::move(pre), train, val, q, cfg));
  };

  const std::string with_paths = run(true);
  const std::string without_paths = run(false);
  const bool identical = with_paths == without_paths;
  report(7, "lambda=0 pipeline collapses to contrastive-disabled pipeline",
         identical, identical ? "checkpoints byte-identical" : "checkpoints differ");
}

// --- criterion 8: synthetic transfer direction -----------------------------

void criterion_transfer_direction() {
  const auto t0 = std::chrono::steady_clock::now();
  const SynthConfig scfg;  // defaults: rate 0.8, 60 source docs, 80 target train, 200 test
  const SynthResult r = gen_synthetic(scfg, 7);

  TrainConfig cfg;  // defaults: epochs 80, patience 20, batches 64/16, lambdas 0.2/1.0
  cfg.fewshot_target = true;

  const ExperimentReport rep = run_experiment(cfg, r.source, r.target,
                                              {Variant::direct_transfer, Variant::eg_ed}, {1, 2, 3},
                                              &r.meta);
  const VariantSummary& dt = rep.variants[0];
  const VariantSummary& eg = rep.variants[1];
  const double secs = seconds_since(t0);

  const bool fp_ok = eg.mean_fp < dt.mean_fp;
  const bool db_ok = eg.mean_db < dt.mean_db;
  const bool f1_ok = eg.mean_f1 >= dt.mean_f1 - 0.005;
  const bool time_ok = secs < 600.0;
  char detail[192];
  std::snprintf(detail, sizeof detail,
                "FP %.1f vs %.1f | DB %.3f vs %.3f | F1 %.4f vs %.4f | %.0fs (eg_ed vs direct_transfer)",
                eg.mean_fp, dt.mean_fp, eg.mean_db, dt.mean_db, eg.mean_f1, dt.mean_f1, secs);
  report(8, "synthetic transfer direction (FP, DB, F1 over 3 seeds)",
         fp_ok && db_ok && f1_ok && time_ok, detail);
}

// --- criterion 9: few-shot sizes -------------------------------------------

void criterion_fewshot_sizes() {
  std::vector<Document> docs(400);
  for (std::size_t i = 0; i < docs.size(); ++i) docs[i].id = "d" + std::to_string(i);
  std::size_t violations = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::size_t n = downsample_fewshot(docs, seed).size();
    if (n < 70 || n > 100) ++violations;
  }
  char detail[64];
  std::snprintf(detail, sizeof detail, "%zu out-of-range sizes over 1000 draws", violations);
  report(9, "few-shot downsampler stays within [70, 100]", violations == 0, detail);
}

// --- criterion 10: strict-match scorer fixtures ----------------------------

void criterion_scorer_fixtures() {
  struct Case {
    std::vector<std::string> tags;
    std::vector<Span> pred;
    std::map<std::string, std::array<std::size_t, 3>> expect;  // type -> tp, fp, fn
  };
  const std::vector<Case> cases = {
      // exact match
      {{"B-Chem", "O"}, {{0, 1, "Chem"}}, {{"Chem", {1, 0, 0}}}},
      // miss
      {{"B-Chem", "O"}, {}, {{"Chem", {0, 0, 1}}}},
      // spurious
      {{"O", "O"}, {{0, 1, "Chem"}}, {{"Chem", {0, 1, 0}}}},
      // span too short
      {{"B-Chem", "I-Chem"}, {{0, 1, "Chem"}}, {{"Chem", {0, 1, 1}}}},
      // span too long
      {{"B-Chem", "O"}, {{0, 2, "Chem"}}, {{"Chem", {0, 1, 1}}}},
      // wrong type on the right span
      {{"B-Chem", "O"}, {{0, 1, "Gene"}}, {{"Chem", {0, 0, 1}}, {"Gene", {0, 1, 0}}}},
      // two golds, one found plus one spurious
      {{"B-Chem", "O", "B-Chem", "O"},
       {{0, 1, "Chem"}, {1, 2, "Chem"}},
       {{"Chem", {1, 1, 1}}}},
      // adjacent entities must not merge
      {{"B-Chem", "B-Chem"}, {{0, 1, "Chem"}, {1, 2, "Chem"}}, {{"Chem", {2, 0, 0}}}},
      // multi-type document
      {{"B-Chem", "O", "B-Gene"},
       {{0, 1, "Chem"}, {2, 3, "Gene"}},
       {{"Chem", {1, 0, 0}}, {"Gene", {1, 0, 0}}}},
      // everything wrong
      {{"B-Chem", "I-Chem", "O"},
       {{1, 3, "Gene"}},
       {{"Chem", {0, 0, 1}}, {"Gene", {0, 1, 0}}}},
  };
  std::size_t wrong = 0;
  for (const Case& c : cases) {
    Document doc;
    doc.id = "fix";
    doc.tags = c.tags;
    doc.tokens.assign(c.tags.size(), "tok");
    const EvalReport r = score_predictions({doc}, {c.pred});
    for (const auto& [type, counts] : c.expect) {
      const auto it = r.per_type.find(type);
      const TypeScore s = it == r.per_type.end() ? TypeScore{} : it->second;
      if (s.tp != counts[0] || s.fp != counts[1] || s.fn != counts[2]) ++wrong;
    }
  }
  char detail[64];
  std::snprintf(detail, sizeof detail, "%zu mismatched counts over %zu fixtures", wrong, cases.size());
  report(10, "strict-match scorer reproduces hand counts", wrong == 0, detail);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_gradient_weight_identity();
  criterion_reduction();
  criterion_mining_oracle();
  criterion_kappa_oracle();
  criterion_full_model_fd();
  criterion_compress_and_padding();
  criterion_direct_transfer_collapse();
  criterion_transfer_direction();
  criterion_fewshot_sizes();
  criterion_scorer_fixtures();
  std::printf("%d of 10 criteria failed, total %.1fs\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
