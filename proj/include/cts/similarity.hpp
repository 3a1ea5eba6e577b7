#pragma once

#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>

#include "cts/common.hpp"
#include "cts/embedder.hpp"

namespace cts {

// uv / (|u||v|); zero when either norm vanishes
inline double cosine(const Vec& u, const Vec& v) {
  if (u.size() != v.size())
    throw ValueError("cosine: length mismatch " + std::to_string(u.size()) + " vs " +
                     std::to_string(v.size()));
  const double nu = norm2(u), nv = norm2(v);
  if (nu < 1e-12 || nv < 1e-12) return 0.0;
  return dot(u, v) / (nu * nv);
}

// Auxiliary similarity between two entities: the maximum cosine over all
// pairs from their event-embedding sets; 0 when either set is empty.
// Memoized on the unordered key pair; safe for concurrent lookups.
class KappaCache {
 public:
  explicit KappaCache(EmbeddingSets sets) : sets_(std::move(sets)) {}

  const EmbeddingSets& sets() const { return sets_; }

  double kappa(const std::string& i, const std::string& j) const {
    const auto key = i <= j ? std::make_pair(i, j) : std::make_pair(j, i);
    {
      std::shared_lock lock(mutex_);
      const auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    const double value = compute(i, j);
    {
      std::unique_lock lock(mutex_);
      memo_.emplace(key, value);  // duplicated first computations agree
    }
    return value;
  }

 private:
  double compute(const std::string& i, const std::string& j) const {
    const auto a = sets_.find(i);
    const auto b = sets_.find(j);
    if (a == sets_.end() || b == sets_.end() || a->second.empty() || b->second.empty()) return 0.0;
    double best = -2.0;
    for (const EventEmbedding& mu : a->second)
      for (const EventEmbedding& nu : b->second) best = std::max(best, cosine(mu.vector, nu.vector));
    return best;
  }

  EmbeddingSets sets_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::pair<std::string, std::string>, double> memo_;
};

inline double kappa(const std::string& i, const std::string& j, const KappaCache& cache) {
  return cache.kappa(i, j);
}

// "key_i,key_j,kappa" rows over all unordered key pairs
inline std::string kappa_csv(const KappaCache& cache) {
  std::string out = "key_i,key_j,kappa\n";
  std::vector<std::string> keys;
  for (const auto& [k, v] : cache.sets()) keys.push_back(k);
  char buf[64];
  for (std::size_t a = 0; a < keys.size(); ++a)
    for (std::size_t b = a + 1; b < keys.size(); ++b) {
      std::snprintf(buf, sizeof buf, "%.17g", cache.kappa(keys[a], keys[b]));
      out += "\"" + keys[a] + "\",\"" + keys[b] + "\"," + buf + "\n";
    }
  return out;
}

}  // namespace cts
