#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cts/common.hpp"
#include "cts/corpus.hpp"
#include "cts/rng.hpp"

namespace cts {

inline constexpr const char* kCheckpointFormat = "cts-ckpt-1";
inline constexpr std::size_t kPadId = 0;
inline constexpr std::size_t kUnkId = 1;

struct TaggerConfig {
  std::size_t embed_dim = 64;
  std::size_t hidden_dim = 128;
  std::size_t window = 2;
};

// Windowed feed-forward tagger: per token, the embeddings of tokens t-w..t+w
// (learned padding rows at the boundaries) feed a tanh hidden layer and a
// softmax tag head.
struct TaggerModel {
  TaggerConfig cfg;
  std::map<std::string, std::size_t> vocab;  // includes <PAD>=0, <UNK>=1
  std::vector<std::string> tags;
  Mat embed;  // V x d_e
  Mat w1;     // (d_e*(2w+1)) x d_h
  Vec b1;
  Mat w2;  // d_h x T
  Vec b2;

  std::size_t input_dim() const { return cfg.embed_dim * (2 * cfg.window + 1); }
  std::size_t tag_id(const std::string& tag) const {
    for (std::size_t t = 0; t < tags.size(); ++t)
      if (tags[t] == tag) return t;
    throw ValueError("unknown tag '" + tag + "'");
  }
  std::size_t token_id(const std::string& token) const {
    const auto it = vocab.find(token);
    return it == vocab.end() ? kUnkId : it->second;
  }
};

inline std::map<std::string, std::size_t> build_vocab(const std::vector<const Document*>& docs) {
  std::set<std::string> tokens;
  for (const Document* d : docs) tokens.insert(d->tokens.begin(), d->tokens.end());
  std::map<std::string, std::size_t> vocab{{"<PAD>", kPadId}, {"<UNK>", kUnkId}};
  std::size_t next = 2;
  for (const std::string& t : tokens)
    if (!vocab.count(t)) vocab[t] = next++;
  return vocab;
}

inline std::vector<std::string> build_tag_set(const std::vector<const Document*>& docs) {
  std::set<std::string> tags{"O"};
  for (const Document* d : docs) tags.insert(d->tags.begin(), d->tags.end());
  return {tags.begin(), tags.end()};
}

inline TaggerModel make_tagger(const TaggerConfig& cfg, std::map<std::string, std::size_t> vocab,
                               std::vector<std::string> tags, std::uint64_t seed) {
  TaggerModel m;
  m.cfg = cfg;
  m.vocab = std::move(vocab);
  m.tags = std::move(tags);
  const std::size_t v = m.vocab.size(), t = m.tags.size();
  Rng rng(derive_seed(seed, "init"));
  auto init = [&](Mat& mat, std::size_t rows, std::size_t cols) {
    mat = Mat(rows, cols);
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (double& x : mat.data) x = rng.uniform(-bound, bound);
  };
  init(m.embed, v, cfg.embed_dim);
  init(m.w1, m.input_dim(), cfg.hidden_dim);
  m.b1.assign(cfg.hidden_dim, 0.0);
  init(m.w2, cfg.hidden_dim, t);
  m.b2.assign(t, 0.0);
  return m;
}

struct ForwardTape {
  std::vector<std::vector<std::size_t>> window_ids;  // per token: 2w+1 embedding rows
  Mat input;   // n x input_dim
  Mat hidden;  // n x d_h
};

struct ForwardResult {
  Mat hidden;  // n x d_h (copy of tape.hidden for callers that drop the tape)
  Mat logits;  // n x T
  ForwardTape tape;
};

inline ForwardResult forward(const TaggerModel& m, const Document& doc) {
  if (doc.tokens.empty()) throw ValueError("forward: empty document " + doc.id);
  const std::size_t n = doc.tokens.size();
  const std::size_t de = m.cfg.embed_dim, dh = m.cfg.hidden_dim, t = m.tags.size();
  const long w = static_cast<long>(m.cfg.window);

  ForwardResult r;
  r.tape.window_ids.resize(n);
  r.tape.input = Mat(n, m.input_dim());
  r.tape.hidden = Mat(n, dh);
  r.logits = Mat(n, t);

  std::vector<std::size_t> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = m.token_id(doc.tokens[i]);

  for (std::size_t i = 0; i < n; ++i) {
    auto& win = r.tape.window_ids[i];
    for (long off = -w; off <= w; ++off) {
      const long pos = static_cast<long>(i) + off;
      win.push_back(pos < 0 || pos >= static_cast<long>(n) ? kPadId : ids[static_cast<std::size_t>(pos)]);
    }
    double* in = r.tape.input.row(i);
    for (std::size_t slot = 0; slot < win.size(); ++slot) {
      const double* e = m.embed.row(win[slot]);
      for (std::size_t c = 0; c < de; ++c) in[slot * de + c] = e[c];
    }
    double* h = r.tape.hidden.row(i);
    for (std::size_t j = 0; j < dh; ++j) {
      double z = m.b1[j];
      for (std::size_t k = 0; k < m.input_dim(); ++k) z += in[k] * m.w1.at(k, j);
      h[j] = std::tanh(z);
    }
    double* out = r.logits.row(i);
    for (std::size_t c = 0; c < t; ++c) {
      double z = m.b2[c];
      for (std::size_t j = 0; j < dh; ++j) z += h[j] * m.w2.at(j, c);
      out[c] = z;
    }
  }
  r.hidden = r.tape.hidden;
  return r;
}

// Mean of the hidden rows in [start, end).
inline Vec entity_repr(const Mat& hidden, std::size_t start, std::size_t end) {
  if (start >= end || end > hidden.rows)
    throw ValueError("entity_repr: bad span [" + std::to_string(start) + "," + std::to_string(end) + ")");
  Vec out(hidden.cols, 0.0);
  for (std::size_t r = start; r < end; ++r)
    for (std::size_t c = 0; c < hidden.cols; ++c) out[c] += hidden.at(r, c);
  for (double& x : out) x /= static_cast<double>(end - start);
  return out;
}

struct TaggerGrads {
  Mat embed, w1, w2;
  Vec b1, b2;

  static TaggerGrads like(const TaggerModel& m) {
    TaggerGrads g;
    g.embed = Mat(m.embed.rows, m.embed.cols);
    g.w1 = Mat(m.w1.rows, m.w1.cols);
    g.b1.assign(m.b1.size(), 0.0);
    g.w2 = Mat(m.w2.rows, m.w2.cols);
    g.b2.assign(m.b2.size(), 0.0);
    return g;
  }
};

// Accumulates parameter gradients for one document given the upstream
// gradients on logits and (optionally) extra gradients on hidden states
// coming from the contrastive term.
inline void backward(const TaggerModel& m, const ForwardTape& tape, const Mat& d_logits,
                     const Mat* d_hidden_extra, TaggerGrads& grads) {
  const std::size_t n = tape.hidden.rows;
  const std::size_t de = m.cfg.embed_dim, dh = m.cfg.hidden_dim, t = m.tags.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double* h = tape.hidden.row(i);
    const double* dl = d_logits.row(i);
    // head
    for (std::size_t c = 0; c < t; ++c) {
      grads.b2[c] += dl[c];
      for (std::size_t j = 0; j < dh; ++j) grads.w2.at(j, c) += h[j] * dl[c];
    }
    // into hidden
    Vec dh_total(dh, 0.0);
    for (std::size_t j = 0; j < dh; ++j) {
      double z = 0.0;
      for (std::size_t c = 0; c < t; ++c) z += dl[c] * m.w2.at(j, c);
      dh_total[j] = z + (d_hidden_extra ? d_hidden_extra->at(i, j) : 0.0);
    }
    // through tanh
    Vec dpre(dh, 0.0);
    for (std::size_t j = 0; j < dh; ++j) dpre[j] = dh_total[j] * (1.0 - h[j] * h[j]);
    const double* in = tape.input.row(i);
    for (std::size_t j = 0; j < dh; ++j) {
      grads.b1[j] += dpre[j];
      for (std::size_t k = 0; k < m.input_dim(); ++k) grads.w1.at(k, j) += in[k] * dpre[j];
    }
    // into the window embeddings
    for (std::size_t slot = 0; slot < tape.window_ids[i].size(); ++slot) {
      double* ge = grads.embed.row(tape.window_ids[i][slot]);
      for (std::size_t c = 0; c < de; ++c) {
        double z = 0.0;
        for (std::size_t j = 0; j < dh; ++j) z += m.w1.at(slot * de + c, j) * dpre[j];
        ge[c] += z;
      }
    }
  }
}

inline double grad_global_norm(const TaggerGrads& g) {
  double s = 0.0;
  for (const Vec* v : {&g.embed.data, &g.w1.data, &g.w2.data, &g.b1, &g.b2}) s += dot(*v, *v);
  return std::sqrt(s);
}

inline void clip_gradients(TaggerGrads& g, double max_norm) {
  const double n = grad_global_norm(g);
  if (n <= max_norm || n == 0.0) return;
  const double scale = max_norm / n;
  for (Vec* v : {&g.embed.data, &g.w1.data, &g.w2.data, &g.b1, &g.b2})
    for (double& x : *v) x *= scale;
}

// Decoupled-weight-decay adaptive-moment optimizer with bias correction.
struct AdamW {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;
  std::size_t step = 0;
  TaggerGrads m, v;

  explicit AdamW(const TaggerModel& model, double lr_ = 1e-3, double wd = 0.0)
      : lr(lr_), weight_decay(wd), m(TaggerGrads::like(model)), v(TaggerGrads::like(model)) {}

  void update(TaggerModel& model, const TaggerGrads& grads) {
    ++step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
    auto apply = [&](Vec& p, const Vec& g, Vec& m1, Vec& m2, const char* name) {
      if (!all_finite(g)) throw ValueError(std::string("adamw: nonfinite gradient in ") + name);
      for (std::size_t i = 0; i < p.size(); ++i) {
        m1[i] = beta1 * m1[i] + (1.0 - beta1) * g[i];
        m2[i] = beta2 * m2[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = m1[i] / bc1;
        const double vhat = m2[i] / bc2;
        p[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + weight_decay * p[i]);
      }
    };
    apply(model.embed.data, grads.embed.data, m.embed.data, v.embed.data, "embed");
    apply(model.w1.data, grads.w1.data, m.w1.data, v.w1.data, "w1");
    apply(model.b1, grads.b1, m.b1, v.b1, "b1");
    apply(model.w2.data, grads.w2.data, m.w2.data, v.w2.data, "w2");
    apply(model.b2, grads.b2, m.b2, v.b2, "b2");
  }
};

// ---------------------------------------------------------------------------
// Checkpoint I/O (JSON, format cts-ckpt-1)

inline nlohmann::json checkpoint_json(const TaggerModel& m) {
  nlohmann::json vocab = nlohmann::json::object();
  for (const auto& [token, id] : m.vocab) vocab[token] = id;
  return nlohmann::json{{"format", kCheckpointFormat},
                        {"embed_dim", m.cfg.embed_dim},
                        {"hidden_dim", m.cfg.hidden_dim},
                        {"window", m.cfg.window},
                        {"vocab", vocab},
                        {"tags", m.tags},
                        {"params",
                         {{"embed", m.embed.data},
                          {"w1", m.w1.data},
                          {"b1", m.b1},
                          {"w2", m.w2.data},
                          {"b2", m.b2}}}};
}

inline TaggerModel checkpoint_from_json(const nlohmann::json& j) {
  if (!j.contains("format") || j.at("format") != kCheckpointFormat)
    throw ValueError("checkpoint: format version mismatch (want " + std::string(kCheckpointFormat) + ")");
  TaggerModel m;
  m.cfg.embed_dim = j.at("embed_dim").get<std::size_t>();
  m.cfg.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  m.cfg.window = j.at("window").get<std::size_t>();
  for (const auto& [token, id] : j.at("vocab").items()) m.vocab[token] = id.get<std::size_t>();
  m.tags = j.at("tags").get<std::vector<std::string>>();
  const auto& p = j.at("params");
  auto load_mat = [&](const char* name, std::size_t rows, std::size_t cols) {
    Mat mat(rows, cols);
    const Vec data = p.at(name).get<Vec>();
    if (data.size() != rows * cols)
      throw ValueError(std::string("checkpoint: shape mismatch in ") + name + " (want " +
                       std::to_string(rows * cols) + " values, have " + std::to_string(data.size()) + ")");
    mat.data = data;
    return mat;
  };
  m.embed = load_mat("embed", m.vocab.size(), m.cfg.embed_dim);
  m.w1 = load_mat("w1", m.input_dim(), m.cfg.hidden_dim);
  m.w2 = load_mat("w2", m.cfg.hidden_dim, m.tags.size());
  m.b1 = p.at("b1").get<Vec>();
  m.b2 = p.at("b2").get<Vec>();
  if (m.b1.size() != m.cfg.hidden_dim || m.b2.size() != m.tags.size())
    throw ValueError("checkpoint: shape mismatch in biases");
  return m;
}

inline std::string save_checkpoint_string(const TaggerModel& m) { return checkpoint_json(m).dump(); }

inline TaggerModel load_checkpoint_string(const std::string& content) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(content);
  } catch (const nlohmann::json::exception& e) {
    throw ValueError(std::string("checkpoint: unreadable JSON: ") + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace cts
