#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cts/common.hpp"
#include "cts/similarity.hpp"

namespace cts {

struct MsParams {
  double alpha = 4.0;
  double beta = 3.0;
  double gamma = 0.5;
  double epsilon = 0.1;
  double rho = 8.0;
  double tau = 6.0;
  double lambda_source = 0.20;
  double lambda_target = 1.0;

  void validate() const {
    if (alpha <= 0.0 || beta <= 0.0) throw ValueError("MsParams: alpha and beta must be positive");
    if (epsilon < 0.0 || rho < 0.0 || tau < 0.0)
      throw ValueError("MsParams: epsilon, rho, tau must be nonnegative");
    if (lambda_source < 0.0 || lambda_target < 0.0)
      throw ValueError("MsParams: lambda terms must be nonnegative");
  }
};

// One mined pair (anchor -> member), carrying the primary similarity S and
// the auxiliary similarity kappa.
struct MinedPair {
  std::size_t j = 0;
  double s = 0.0;
  double kappa = 0.0;
};

struct AnchorSets {
  std::vector<MinedPair> positives;
  std::vector<MinedPair> negatives;
};

struct PairBatch {
  std::size_t n_anchors = 0;  // n_e: every entity is an anchor, empty sets included
  std::vector<AnchorSets> anchors;
};

// Pair-aligned scalars (weights or dL/dS), indexed [anchor][pair].
struct PairValues {
  std::vector<std::vector<double>> pos, neg;
};

inline PairValues pair_values_like(const PairBatch& batch) {
  PairValues v;
  v.pos.resize(batch.anchors.size());
  v.neg.resize(batch.anchors.size());
  for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
    v.pos[i].resize(batch.anchors[i].positives.size(), 0.0);
    v.neg[i].resize(batch.anchors[i].negatives.size(), 0.0);
  }
  return v;
}

// ---------------------------------------------------------------------------
// NER cross-entropy

// Mean token-level cross-entropy over softmaxed logits; gradient is
// (softmax - onehot) / N.
inline std::pair<double, Mat> ner_loss(const Mat& logits, const std::vector<std::size_t>& gold) {
  if (gold.size() != logits.rows) throw ValueError("ner_loss: gold length mismatch");
  const std::size_t n = logits.rows, t = logits.cols;
  Mat grad(n, t);
  double loss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    if (gold[r] >= t) throw ValueError("ner_loss: gold index out of range at token " + std::to_string(r));
    const double* row = logits.row(r);
    double m = row[0];
    for (std::size_t c = 1; c < t; ++c) m = std::max(m, row[c]);
    double z = 0.0;
    for (std::size_t c = 0; c < t; ++c) z += std::exp(row[c] - m);
    const double lse = m + std::log(z);
    loss += lse - row[gold[r]];
    for (std::size_t c = 0; c < t; ++c) grad.at(r, c) = std::exp(row[c] - lse) / static_cast<double>(n);
    grad.at(r, gold[r]) -= 1.0 / static_cast<double>(n);
  }
  return {loss / static_cast<double>(n), std::move(grad)};
}

// ---------------------------------------------------------------------------
// Pair mining

// Thresholded hard-pair mining on a precomputed similarity matrix. When an
// anchor has no differing-label entity the negative threshold is vacuous and
// every same-label candidate is kept (and symmetrically for positives).
inline PairBatch mine_pairs_from_matrix(const Mat& s, const std::vector<std::string>& labels,
                                        const MsParams& params) {
  const std::size_t n = labels.size();
  PairBatch batch;
  batch.n_anchors = n;
  batch.anchors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool has_diff = false, has_same = false;
    double max_neg = 0.0, min_pos = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      if (labels[k] != labels[i]) {
        max_neg = has_diff ? std::max(max_neg, s.at(i, k)) : s.at(i, k);
        has_diff = true;
      } else {
        min_pos = has_same ? std::min(min_pos, s.at(i, k)) : s.at(i, k);
        has_same = true;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (labels[j] == labels[i]) {
        if (!has_diff || s.at(i, j) < max_neg + params.epsilon)
          batch.anchors[i].positives.push_back({j, s.at(i, j), 0.0});
      } else {
        if (!has_same || s.at(i, j) > min_pos - params.epsilon)
          batch.anchors[i].negatives.push_back({j, s.at(i, j), 0.0});
      }
    }
  }
  return batch;
}

inline Mat similarity_matrix(const std::vector<Vec>& reps) {
  const std::size_t n = reps.size();
  Mat s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s.at(i, j) = s.at(j, i) = cosine(reps[i], reps[j]);
  return s;
}

inline PairBatch mine_pairs(const std::vector<Vec>& reps, const std::vector<std::string>& labels,
                            const MsParams& params) {
  if (reps.size() != labels.size()) throw ValueError("mine_pairs: reps/labels length mismatch");
  return mine_pairs_from_matrix(similarity_matrix(reps), labels, params);
}

inline void attach_kappa(PairBatch& batch,
                         const std::function<double(std::size_t, std::size_t)>& kappa_of) {
  for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
    for (MinedPair& p : batch.anchors[i].positives) p.kappa = kappa_of(i, p.j);
    for (MinedPair& p : batch.anchors[i].negatives) p.kappa = kappa_of(i, p.j);
  }
}

// ---------------------------------------------------------------------------
// MS soft weights and loss

inline PairValues ms_weights(const PairBatch& batch, const MsParams& params) {
  PairValues w = pair_values_like(batch);
  for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
    const AnchorSets& a = batch.anchors[i];
    std::vector<double> exps;
    exps.reserve(a.positives.size());
    for (const MinedPair& p : a.positives) exps.push_back(-params.alpha * (p.s - params.gamma));
    double lse = log1p_sum_exp(exps);
    for (std::size_t k = 0; k < exps.size(); ++k) w.pos[i][k] = std::exp(exps[k] - lse);

    exps.clear();
    for (const MinedPair& p : a.negatives) exps.push_back(params.beta * (p.s - params.gamma));
    lse = log1p_sum_exp(exps);
    for (std::size_t k = 0; k < exps.size(); ++k) w.neg[i][k] = std::exp(exps[k] - lse);
  }
  return w;
}

// Returns the loss and dL/dS per mined pair (negative for positives,
// positive for negatives).
inline std::pair<double, PairValues> ms_loss(const PairBatch& batch, const MsParams& params) {
  PairValues grad = pair_values_like(batch);
  if (batch.n_anchors == 0) return {0.0, std::move(grad)};
  const double n_e = static_cast<double>(batch.n_anchors);
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
    const AnchorSets& a = batch.anchors[i];
    std::vector<double> exps;
    for (const MinedPair& p : a.positives) exps.push_back(-params.alpha * (p.s - params.gamma));
    double lse = log1p_sum_exp(exps);
    loss += lse / params.alpha;
    for (std::size_t k = 0; k < exps.size(); ++k) grad.pos[i][k] = -std::exp(exps[k] - lse) / n_e;

    exps.clear();
    for (const MinedPair& p : a.negatives) exps.push_back(params.beta * (p.s - params.gamma));
    lse = log1p_sum_exp(exps);
    loss += lse / params.beta;
    for (std::size_t k = 0; k < exps.size(); ++k) grad.neg[i][k] = std::exp(exps[k] - lse) / n_e;
  }
  return {loss / n_e, std::move(grad)};
}

// ---------------------------------------------------------------------------
// RMS adjusted weights and loss

// Adjusted soft weights via the I/J formulation:
//   w+_ij = 1 / (e^{-I+_ij} + sum_k e^{-J+_ik + J+_ij}),
//     I+_ij = alpha (gamma - S_ij) + rho kappa_ij, J+_ij = alpha S_ij - rho kappa_ij
//   w-_ij = 1 / (e^{I-_ij} + sum_k e^{J-_ik - J-_ij}),
//     I-_ij = beta (gamma - S_ij) + tau kappa_ij,  J-_ij = beta S_ij - tau kappa_ij
inline PairValues rms_weights(const PairBatch& batch, const MsParams& params) {
  PairValues w = pair_values_like(batch);
  for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
    const AnchorSets& a = batch.anchors[i];
    for (std::size_t j = 0; j < a.positives.size(); ++j) {
      const MinedPair& pj = a.positives[j];
      const double i_pos = params.alpha * (params.gamma - pj.s) + params.rho * pj.kappa;
      const double j_pos = params.alpha * pj.s - params.rho * pj.kappa;
      std::vector<double> denom_exps{-i_pos};
      for (const MinedPair& pk : a.positives)
        denom_exps.push_back(j_pos - (params.alpha * pk.s - params.rho * pk.kappa));
      // logsumexp over raw exponents (no implicit 1 term)
      double m = denom_exps[0];
      for (const double x : denom_exps) m = std::max(m, x);
      double sum = 0.0;
      for (const double x : denom_exps) sum += std::exp(x - m);
      w.pos[i][j] = std::exp(-(m + std::log(sum)));
    }
    for (std::size_t j = 0; j < a.negatives.size(); ++j) {
      const MinedPair& pj = a.negatives[j];
      const double i_neg = params.beta * (params.gamma - pj.s) + params.tau * pj.kappa;
      const double j_neg = params.beta * pj.s - params.tau * pj.kappa;
      std::vector<double> denom_exps{i_neg};
      for (const MinedPair& pk : a.negatives)
        denom_exps.push_back((params.beta * pk.s - params.tau * pk.kappa) - j_neg);
      double m = denom_exps[0];
      for (const double x : denom_exps) m = std::max(m, x);
      double sum = 0.0;
      for (const double x : denom_exps) sum += std::exp(x - m);
      w.neg[i][j] = std::exp(-(m + std::log(sum)));
    }
  }
  return w;
}

// L_RMS with dL/dS per mined pair. Exponents carry the auxiliary similarity:
// -alpha (S - gamma) + rho kappa for positives, beta (S - gamma) - tau kappa
// for negatives.
inline std::pair<double, PairValues> rms_loss(const PairBatch& batch, const MsParams& params) {
  PairValues grad = pair_values_like(batch);
  if (batch.n_anchors == 0) return {0.0, std::move(grad)};
  const double n_e = static_cast<double>(batch.n_anchors);
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
    const AnchorSets& a = batch.anchors[i];
    std::vector<double> exps;
    for (const MinedPair& p : a.positives)
      exps.push_back(-params.alpha * (p.s - params.gamma) + params.rho * p.kappa);
    double lse = log1p_sum_exp(exps);
    loss += lse / params.alpha;
    for (std::size_t k = 0; k < exps.size(); ++k) grad.pos[i][k] = -std::exp(exps[k] - lse) / n_e;

    exps.clear();
    for (const MinedPair& p : a.negatives)
      exps.push_back(params.beta * (p.s - params.gamma) - params.tau * p.kappa);
    lse = log1p_sum_exp(exps);
    loss += lse / params.beta;
    for (std::size_t k = 0; k < exps.size(); ++k) grad.neg[i][k] = std::exp(exps[k] - lse) / n_e;
  }
  return {loss / n_e, std::move(grad)};
}

// ---------------------------------------------------------------------------
// Gradient plumbing from pair similarities back to representations

// dS/du for S = cos(u, v); accumulates scale * dS/du into du (and dv).
inline void cosine_backward(const Vec& u, const Vec& v, double scale, Vec& du, Vec& dv) {
  const double nu = norm2(u), nv = norm2(v);
  if (nu < 1e-12 || nv < 1e-12) return;  // cosine defined as constant 0 there
  const double s = dot(u, v) / (nu * nv);
  for (std::size_t c = 0; c < u.size(); ++c) {
    du[c] += scale * (v[c] / (nu * nv) - s * u[c] / (nu * nu));
    dv[c] += scale * (u[c] / (nu * nv) - s * v[c] / (nv * nv));
  }
}

// Pushes per-pair dL/dS through the cosine into per-entity gradients.
inline std::vector<Vec> pair_grads_to_reps(const PairBatch& batch, const PairValues& ds,
                                           const std::vector<Vec>& reps, double scale = 1.0) {
  std::vector<Vec> out(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i) out[i].assign(reps[i].size(), 0.0);
  for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
    const AnchorSets& a = batch.anchors[i];
    for (std::size_t k = 0; k < a.positives.size(); ++k)
      cosine_backward(reps[i], reps[a.positives[k].j], scale * ds.pos[i][k], out[i], out[a.positives[k].j]);
    for (std::size_t k = 0; k < a.negatives.size(); ++k)
      cosine_backward(reps[i], reps[a.negatives[k].j], scale * ds.neg[i][k], out[i], out[a.negatives[k].j]);
  }
  return out;
}

// The full contrastive term on a set of entity representations: mine, attach
// kappa, evaluate MS or RMS, and back-propagate to the representations.
struct ContrastiveResult {
  double loss = 0.0;
  std::vector<Vec> rep_grads;
  PairBatch batch;
};

inline ContrastiveResult contrastive_loss_on_reps(
    const std::vector<Vec>& reps, const std::vector<std::string>& labels, const MsParams& params,
    bool use_rms, const std::function<double(std::size_t, std::size_t)>& kappa_of = nullptr) {
  ContrastiveResult r;
  r.batch = mine_pairs(reps, labels, params);
  if (kappa_of) attach_kappa(r.batch, kappa_of);
  auto [loss, ds] = use_rms ? rms_loss(r.batch, params) : ms_loss(r.batch, params);
  r.loss = loss;
  r.rep_grads = pair_grads_to_reps(r.batch, ds, reps);
  return r;
}

// L_total = L_NER + lambda * L_contrastive
inline double combined_loss(double ner, double contrastive, double lambda) {
  return ner + lambda * contrastive;
}

}  // namespace cts
