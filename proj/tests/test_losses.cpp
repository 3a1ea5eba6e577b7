#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "cts/losses.hpp"

using namespace cts;
using Catch::Approx;

namespace {

// Independent O(n^2) evaluation of the two mining set definitions.
PairBatch brute_force_mine(const Mat& s, const std::vector<std::string>& labels, double epsilon) {
  const std::size_t n = labels.size();
  PairBatch batch;
  batch.n_anchors = n;
  batch.anchors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> neg_sims, pos_sims;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      (labels[k] != labels[i] ? neg_sims : pos_sims).push_back(s.at(i, k));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (labels[j] == labels[i]) {
        bool keep = neg_sims.empty();
        if (!neg_sims.empty())
          keep = s.at(i, j) < *std::max_element(neg_sims.begin(), neg_sims.end()) + epsilon;
        if (keep) batch.anchors[i].positives.push_back({j, s.at(i, j), 0.0});
      } else {
        bool keep = pos_sims.empty();
        if (!pos_sims.empty())
          keep = s.at(i, j) > *std::min_element(pos_sims.begin(), pos_sims.end()) - epsilon;
        if (keep) batch.anchors[i].negatives.push_back({j, s.at(i, j), 0.0});
      }
    }
  }
  return batch;
}

std::set<std::size_t> members(const std::vector<MinedPair>& pairs) {
  std::set<std::size_t> out;
  for (const MinedPair& p : pairs) out.insert(p.j);
  return out;
}

Mat random_similarities(Rng& rng, std::size_t n) {
  Mat s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s.at(i, j) = s.at(j, i) = rng.uniform(-1.0, 1.0);
  return s;
}

PairBatch random_batch(Rng& rng, std::size_t max_n, const MsParams& params, bool with_kappa) {
  const std::size_t n = 2 + rng.below(max_n - 1);
  std::vector<std::string> labels;
  const std::size_t classes = 1 + rng.below(3);
  for (std::size_t i = 0; i < n; ++i) labels.push_back("c" + std::to_string(rng.below(classes)));
  const Mat s = random_similarities(rng, n);
  PairBatch batch = mine_pairs_from_matrix(s, labels, params);
  if (with_kappa) {
    Mat k(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) k.at(i, j) = k.at(j, i) = rng.uniform(-1.0, 1.0);
    attach_kappa(batch, [&](std::size_t i, std::size_t j) { return k.at(i, j); });
  }
  return batch;
}

double loss_of(const PairBatch& batch, const MsParams& params, bool use_rms) {
  return use_rms ? rms_loss(batch, params).first : ms_loss(batch, params).first;
}

// Central finite differences on the stored pair similarities.
void check_pair_gradients(const PairBatch& batch, const MsParams& params, bool use_rms) {
  const PairValues grad = use_rms ? rms_loss(batch, params).second : ms_loss(batch, params).second;
  const double h = 1e-6;
  for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
    for (std::size_t k = 0; k < batch.anchors[i].positives.size(); ++k) {
      PairBatch plus = batch, minus = batch;
      plus.anchors[i].positives[k].s += h;
      minus.anchors[i].positives[k].s -= h;
      const double fd = (loss_of(plus, params, use_rms) - loss_of(minus, params, use_rms)) / (2 * h);
      REQUIRE(grad.pos[i][k] == Approx(fd).epsilon(1e-5).margin(1e-9));
    }
    for (std::size_t k = 0; k < batch.anchors[i].negatives.size(); ++k) {
      PairBatch plus = batch, minus = batch;
      plus.anchors[i].negatives[k].s += h;
      minus.anchors[i].negatives[k].s -= h;
      const double fd = (loss_of(plus, params, use_rms) - loss_of(minus, params, use_rms)) / (2 * h);
      REQUIRE(grad.neg[i][k] == Approx(fd).epsilon(1e-5).margin(1e-9));
    }
  }
}

}  // namespace

TEST_CASE("ner_loss closed forms") {
  SECTION("uniform logits give ln T") {
    const Mat logits(5, 3, 0.7);
    const auto [loss, grad] = ner_loss(logits, {0, 1, 2, 0, 1});
    REQUIRE(loss == Approx(std::log(3.0)).margin(1e-12));
  }
  SECTION("saturated gold logit gives ~0") {
    Mat logits(2, 4, 0.0);
    logits.at(0, 1) = 30.0;
    logits.at(1, 2) = 30.0;
    const auto [loss, grad] = ner_loss(logits, {1, 2});
    REQUIRE(loss < 1e-9);
  }
  SECTION("gold out of range") {
    REQUIRE_THROWS_AS(ner_loss(Mat(1, 3), {5}), ValueError);
  }
}

TEST_CASE("ner_loss gradient matches finite differences") {
  Rng rng(71);
  Mat logits(4, 3);
  for (double& x : logits.data) x = rng.uniform(-2.0, 2.0);
  const std::vector<std::size_t> gold = {0, 2, 1, 1};
  const auto [loss, grad] = ner_loss(logits, gold);
  const double h = 1e-6;
  for (std::size_t idx = 0; idx < logits.size(); ++idx) {
    Mat plus = logits, minus = logits;
    plus.data[idx] += h;
    minus.data[idx] -= h;
    const double fd = (ner_loss(plus, gold).first - ner_loss(minus, gold).first) / (2 * h);
    REQUIRE(grad.data[idx] == Approx(fd).epsilon(1e-5).margin(1e-10));
  }
}

TEST_CASE("mine_pairs worked example") {
  // labels [A,A,B], S01=0.6, S02=0.7, eps=0.1
  Mat s(3, 3);
  s.at(0, 1) = s.at(1, 0) = 0.6;
  s.at(0, 2) = s.at(2, 0) = 0.7;
  s.at(1, 2) = s.at(2, 1) = 0.1;
  MsParams params;
  params.epsilon = 0.1;
  const PairBatch batch = mine_pairs_from_matrix(s, {"A", "A", "B"}, params);
  REQUIRE(batch.n_anchors == 3);
  REQUIRE(members(batch.anchors[0].positives) == std::set<std::size_t>{1});  // 0.6 < 0.7 + 0.1
  REQUIRE(members(batch.anchors[0].negatives) == std::set<std::size_t>{2});  // 0.7 > 0.6 - 0.1
}

TEST_CASE("mine_pairs vacuous thresholds") {
  MsParams params;
  SECTION("all labels equal: every positive kept, no negatives") {
    Rng rng(5);
    const Mat s = random_similarities(rng, 5);
    const PairBatch batch = mine_pairs_from_matrix(s, {"A", "A", "A", "A", "A"}, params);
    for (std::size_t i = 0; i < 5; ++i) {
      REQUIRE(batch.anchors[i].positives.size() == 4);
      REQUIRE(batch.anchors[i].negatives.empty());
    }
  }
  SECTION("eps=0 with separated similarities empties both sets") {
    Mat s(4, 4);
    auto set = [&](std::size_t i, std::size_t j, double v) { s.at(i, j) = s.at(j, i) = v; };
    // same-label pairs all above, differing-label pairs all below
    set(0, 1, 0.9);
    set(2, 3, 0.9);
    set(0, 2, 0.1);
    set(0, 3, 0.1);
    set(1, 2, 0.1);
    set(1, 3, 0.1);
    MsParams zero = params;
    zero.epsilon = 0.0;
    const PairBatch batch = mine_pairs_from_matrix(s, {"A", "A", "B", "B"}, zero);
    for (std::size_t i = 0; i < 4; ++i) {
      REQUIRE(batch.anchors[i].positives.empty());
      REQUIRE(batch.anchors[i].negatives.empty());
    }
  }
}

TEST_CASE("mine_pairs from representations") {
  // single entity: no pairs, still one anchor
  const PairBatch solo = mine_pairs({{1.0, 0.0}}, {"A"}, MsParams{});
  REQUIRE(solo.n_anchors == 1);
  REQUIRE(solo.anchors[0].positives.empty());
  REQUIRE(solo.anchors[0].negatives.empty());
}

TEST_CASE("mining matches brute force on random instances") {
  Rng rng(1234);
  MsParams params;
  for (int round = 0; round < 300; ++round) {
    const std::size_t n = 2 + rng.below(19);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("c" + std::to_string(rng.below(3)));
    params.epsilon = rng.uniform(0.0, 0.3);
    const Mat s = random_similarities(rng, n);
    const PairBatch got = mine_pairs_from_matrix(s, labels, params);
    const PairBatch want = brute_force_mine(s, labels, params.epsilon);
    REQUIRE(got.n_anchors == want.n_anchors);
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(members(got.anchors[i].positives) == members(want.anchors[i].positives));
      REQUIRE(members(got.anchors[i].negatives) == members(want.anchors[i].negatives));
    }
  }
}

TEST_CASE("ms_weights closed forms") {
  MsParams params;  // alpha=4, gamma=0.5
  SECTION("single pair at S=gamma weighs 1/2") {
    PairBatch batch;
    batch.n_anchors = 1;
    batch.anchors.resize(1);
    batch.anchors[0].positives.push_back({1, params.gamma, 0.0});
    const PairValues w = ms_weights(batch, params);
    REQUIRE(w.pos[0][0] == Approx(0.5).margin(1e-12));

    PairBatch nb;
    nb.n_anchors = 1;
    nb.anchors.resize(1);
    nb.anchors[0].negatives.push_back({1, params.gamma, 0.0});
    REQUIRE(ms_weights(nb, params).neg[0][0] == Approx(0.5).margin(1e-12));
  }
  SECTION("three positive pairs match the direct formula") {
    PairBatch batch;
    batch.n_anchors = 1;
    batch.anchors.resize(1);
    const std::vector<double> sims = {0.2, 0.5, 0.8};
    for (std::size_t k = 0; k < sims.size(); ++k) batch.anchors[0].positives.push_back({k + 1, sims[k], 0.0});
    const PairValues w = ms_weights(batch, params);
    double denom = 1.0;
    for (const double s : sims) denom += std::exp(-params.alpha * (s - params.gamma));
    for (std::size_t k = 0; k < sims.size(); ++k)
      REQUIRE(w.pos[0][k] == Approx(std::exp(-params.alpha * (sims[k] - params.gamma)) / denom).margin(1e-12));
  }
}

TEST_CASE("ms_loss closed forms and gradient oracle") {
  MsParams params;
  SECTION("empty sets give zero") {
    PairBatch batch;
    batch.n_anchors = 3;
    batch.anchors.resize(3);
    REQUIRE(ms_loss(batch, params).first == 0.0);
  }
  SECTION("no anchors give zero and empty gradient") {
    const auto [loss, grad] = ms_loss(PairBatch{}, params);
    REQUIRE(loss == 0.0);
    REQUIRE(grad.pos.empty());
  }
  SECTION("one positive pair at S=gamma gives ln(2)/alpha") {
    PairBatch batch;
    batch.n_anchors = 1;
    batch.anchors.resize(1);
    batch.anchors[0].positives.push_back({1, params.gamma, 0.0});
    REQUIRE(ms_loss(batch, params).first == Approx(std::log(2.0) / 4.0).margin(1e-12));
    REQUIRE(ms_loss(batch, params).first == Approx(0.17329).margin(1e-5));
  }
  SECTION("analytic gradient matches finite differences") {
    Rng rng(99);
    for (int round = 0; round < 10; ++round)
      check_pair_gradients(random_batch(rng, 8, params, false), params, false);
  }
}

TEST_CASE("rms reduces to ms at rho=tau=0") {
  Rng rng(303);
  MsParams params;
  params.rho = 0.0;
  params.tau = 0.0;
  for (int round = 0; round < 200; ++round) {
    const PairBatch batch = random_batch(rng, 10, params, true);
    const auto [ms, msg] = ms_loss(batch, params);
    const auto [rms, rmsg] = rms_loss(batch, params);
    REQUIRE(rms == Approx(ms).margin(1e-12));
    const PairValues msw = ms_weights(batch, params);
    const PairValues rmsw = rms_weights(batch, params);
    for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
      for (std::size_t k = 0; k < msw.pos[i].size(); ++k)
        REQUIRE(rmsw.pos[i][k] == Approx(msw.pos[i][k]).margin(1e-12));
      for (std::size_t k = 0; k < msw.neg[i].size(); ++k)
        REQUIRE(rmsw.neg[i][k] == Approx(msw.neg[i][k]).margin(1e-12));
    }
  }
}

TEST_CASE("rms closed forms") {
  MsParams params;  // alpha=4, rho=8
  SECTION("single positive pair, S=gamma, kappa=0 weighs 1/2") {
    PairBatch batch;
    batch.n_anchors = 1;
    batch.anchors.resize(1);
    batch.anchors[0].positives.push_back({1, params.gamma, 0.0});
    REQUIRE(rms_weights(batch, params).pos[0][0] == Approx(0.5).margin(1e-12));
  }
  SECTION("single positive pair, S=gamma, kappa=1 gives ln(1+e^8)/4") {
    PairBatch batch;
    batch.n_anchors = 1;
    batch.anchors.resize(1);
    batch.anchors[0].positives.push_back({1, params.gamma, 1.0});
    const double expected = std::log(1.0 + std::exp(8.0)) / 4.0;
    REQUIRE(rms_loss(batch, params).first == Approx(expected).margin(1e-12));
    REQUIRE(rms_loss(batch, params).first == Approx(2.00008).margin(1e-4));
  }
}

TEST_CASE("kappa raises positive weights and lowers negative weights") {
  MsParams params;
  double prev_pos = -1.0, prev_neg = 2.0;
  for (double k = 0.0; k <= 1.0; k += 0.25) {
    PairBatch pos;
    pos.n_anchors = 1;
    pos.anchors.resize(1);
    pos.anchors[0].positives.push_back({1, 0.3, k});
    pos.anchors[0].positives.push_back({2, 0.6, 0.2});  // fixed co-pair
    const double wp = rms_weights(pos, params).pos[0][0];
    REQUIRE(wp > prev_pos);
    prev_pos = wp;

    PairBatch neg;
    neg.n_anchors = 1;
    neg.anchors.resize(1);
    neg.anchors[0].negatives.push_back({1, 0.3, k});
    neg.anchors[0].negatives.push_back({2, 0.6, 0.2});
    const double wn = rms_weights(neg, params).neg[0][0];
    REQUIRE(wn < prev_neg);
    prev_neg = wn;
  }
}

TEST_CASE("rms loss is monotone in kappa") {
  Rng rng(404);
  MsParams params;
  for (int round = 0; round < 50; ++round) {
    PairBatch batch = random_batch(rng, 8, params, true);
    const double base = rms_loss(batch, params).first;
    // raising any positive-pair kappa must not decrease the loss
    for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
      if (batch.anchors[i].positives.empty()) continue;
      PairBatch up = batch;
      up.anchors[i].positives[0].kappa += 0.1;
      REQUIRE(rms_loss(up, params).first >= base - 1e-12);
      break;
    }
    for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
      if (batch.anchors[i].negatives.empty()) continue;
      PairBatch up = batch;
      up.anchors[i].negatives[0].kappa += 0.1;
      REQUIRE(rms_loss(up, params).first <= base + 1e-12);
      break;
    }
  }
}

TEST_CASE("gradient-weight identity") {
  Rng rng(505);
  MsParams params;
  for (int round = 0; round < 100; ++round) {
    const PairBatch batch = random_batch(rng, 12, params, true);
    const double n_e = static_cast<double>(batch.n_anchors);

    const PairValues msw = ms_weights(batch, params);
    const PairValues msg = ms_loss(batch, params).second;
    const PairValues rmsw = rms_weights(batch, params);
    const PairValues rmsg = rms_loss(batch, params).second;
    for (std::size_t i = 0; i < batch.anchors.size(); ++i) {
      for (std::size_t k = 0; k < msw.pos[i].size(); ++k) {
        REQUIRE(std::abs(msg.pos[i][k]) * n_e == Approx(msw.pos[i][k]).margin(1e-10));
        REQUIRE(msg.pos[i][k] <= 0.0);
        REQUIRE(std::abs(rmsg.pos[i][k]) * n_e == Approx(rmsw.pos[i][k]).margin(1e-10));
        REQUIRE(rmsg.pos[i][k] <= 0.0);
      }
      for (std::size_t k = 0; k < msw.neg[i].size(); ++k) {
        REQUIRE(std::abs(msg.neg[i][k]) * n_e == Approx(msw.neg[i][k]).margin(1e-10));
        REQUIRE(msg.neg[i][k] >= 0.0);
        REQUIRE(std::abs(rmsg.neg[i][k]) * n_e == Approx(rmsw.neg[i][k]).margin(1e-10));
        REQUIRE(rmsg.neg[i][k] >= 0.0);
      }
    }
  }
}

TEST_CASE("rms gradient matches finite differences") {
  Rng rng(606);
  MsParams params;
  for (int round = 0; round < 10; ++round)
    check_pair_gradients(random_batch(rng, 8, params, true), params, true);
}

TEST_CASE("losses are nonnegative") {
  Rng rng(707);
  MsParams params;
  for (int round = 0; round < 100; ++round) {
    const PairBatch batch = random_batch(rng, 10, params, true);
    REQUIRE(ms_loss(batch, params).first >= 0.0);
    REQUIRE(rms_loss(batch, params).first >= 0.0);
  }
}

TEST_CASE("combined loss linearity") {
  REQUIRE(combined_loss(0.3, 0.2, 1.0) == Approx(0.5));
  REQUIRE(combined_loss(0.3, 123.4, 0.0) == Approx(0.3));
}

TEST_CASE("contrastive gradient on representations matches finite differences") {
  Rng rng(808);
  MsParams params;
  const std::size_t n = 6, d = 5;
  std::vector<Vec> reps(n, Vec(d));
  for (Vec& r : reps)
    for (double& x : r) x = rng.uniform(-1.0, 1.0);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(i % 2 ? "A" : "B");
  Mat kap(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) kap.at(i, j) = kap.at(j, i) = rng.uniform(0.0, 1.0);
  auto kappa_of = [&](std::size_t i, std::size_t j) { return kap.at(i, j); };

  // mining fixed at the base point; S refreshed from the perturbed reps
  const PairBatch base = [&] {
    PairBatch b = mine_pairs(reps, labels, params);
    attach_kappa(b, kappa_of);
    return b;
  }();
  auto loss_at = [&](const std::vector<Vec>& r) {
    PairBatch b = base;
    for (std::size_t i = 0; i < b.anchors.size(); ++i) {
      for (MinedPair& p : b.anchors[i].positives) p.s = cosine(r[i], r[p.j]);
      for (MinedPair& p : b.anchors[i].negatives) p.s = cosine(r[i], r[p.j]);
    }
    return rms_loss(b, params).first;
  };

  const auto [loss, ds] = rms_loss(base, params);
  const std::vector<Vec> grads = pair_grads_to_reps(base, ds, reps);
  const double h = 1e-6;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<Vec> plus = reps, minus = reps;
      plus[i][c] += h;
      minus[i][c] -= h;
      const double fd = (loss_at(plus) - loss_at(minus)) / (2 * h);
      REQUIRE(grads[i][c] == Approx(fd).epsilon(1e-4).margin(1e-8));
    }
}
