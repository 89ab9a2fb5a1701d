#pragma once

// Yule-Simon distribution in the alpha-parametrization:
//   f(k; alpha) = c B(k, c + 1),  c = rho = 1 / (1 - alpha),  k = 1, 2, ...
// alpha is the probability that the next observation is a new value.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ys/error.hpp"
#include "ys/rng.hpp"
#include "ys/specfun.hpp"

namespace ys {

namespace detail {

inline void require_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError(std::string(who) + ": alpha must lie in (0,1)");
}

}  // namespace detail

class YuleSimonModel {
 public:
  explicit YuleSimonModel(double alpha) : alpha_(alpha) {
    detail::require_alpha(alpha, "YuleSimonModel");
  }

  double alpha() const noexcept { return alpha_; }
  double rho() const noexcept { return 1.0 / (1.0 - alpha_); }
  // c = 1/(1 - alpha); identical to rho.
  double c() const noexcept { return rho(); }

 private:
  double alpha_;
};

struct FrequencyEntry {
  std::uint64_t k;
  std::uint64_t count;

  friend bool operator==(const FrequencyEntry&, const FrequencyEntry&) = default;
};

// Observations in (value, multiplicity) form.
class FrequencySample {
 public:
  FrequencySample() = default;

  explicit FrequencySample(std::vector<FrequencyEntry> entries) : entries_(std::move(entries)) {
    std::set<std::uint64_t> seen;
    for (const auto& e : entries_) {
      if (e.k < 1) throw DomainError("FrequencySample: k must be >= 1");
      if (e.count < 1) throw DomainError("FrequencySample: count must be >= 1");
      if (!seen.insert(e.k).second)
        throw DomainError("FrequencySample: duplicate k = " + std::to_string(e.k));
      n_ += e.count;
    }
  }

  // Groups raw draws by value; entries come out sorted by k.
  static FrequencySample from_observations(std::span<const std::uint64_t> draws) {
    std::vector<std::uint64_t> sorted(draws.begin(), draws.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<FrequencyEntry> entries;
    for (std::uint64_t k : sorted) {
      if (!entries.empty() && entries.back().k == k)
        ++entries.back().count;
      else
        entries.push_back({k, 1});
    }
    return FrequencySample(std::move(entries));
  }

  const std::vector<FrequencyEntry>& entries() const noexcept { return entries_; }
  std::uint64_t n() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  double mean() const {
    if (n_ == 0) throw DomainError("FrequencySample::mean: empty sample");
    long double total = 0.0L;
    for (const auto& e : entries_)
      total += static_cast<long double>(e.k) * static_cast<long double>(e.count);
    return static_cast<double>(total / static_cast<long double>(n_));
  }

  friend bool operator==(const FrequencySample&, const FrequencySample&) = default;

 private:
  std::vector<FrequencyEntry> entries_;
  std::uint64_t n_ = 0;
};

inline double log_pmf(std::uint64_t k, double alpha) {
  detail::require_alpha(alpha, "log_pmf");
  if (k < 1) throw DomainError("log_pmf: k must be >= 1");
  const double c = 1.0 / (1.0 - alpha);
  return std::log(c) + log_beta(static_cast<double>(k), c + 1.0);
}

inline double pmf(std::uint64_t k, double alpha) { return std::exp(log_pmf(k, alpha)); }

// P(K >= j) = Gamma(j) Gamma(c+1) / Gamma(c+j).
inline double survival(std::uint64_t j, double alpha) {
  detail::require_alpha(alpha, "survival");
  if (j < 1) throw DomainError("survival: j must be >= 1");
  if (j == 1) return 1.0;
  const double c = 1.0 / (1.0 - alpha);
  return std::exp(log_gamma(c + 1.0) - log_gamma_ratio(static_cast<double>(j), c));
}

inline double mean(double alpha) {
  detail::require_alpha(alpha, "mean");
  return 1.0 / alpha;
}

namespace detail {

// One draw via the mixture p ~ Beta(rho, 1), K | p ~ Geometric(p) on {1,2,...}.
inline std::uint64_t draw_yule_simon(double rho, rng::Engine& gen) {
  const double p = std::pow(rng::uniform_open(gen), 1.0 / rho);
  const double v = rng::uniform_open(gen);
  if (p >= 1.0) return 1;
  const double k = std::ceil(std::log1p(-v) / std::log1p(-p));
  constexpr double kMax = 9.0e18;
  if (!(k >= 1.0)) return 1;
  if (k >= kMax) return static_cast<std::uint64_t>(kMax);
  return static_cast<std::uint64_t>(k);
}

}  // namespace detail

inline std::vector<std::uint64_t> sample(double alpha, std::size_t n, std::uint64_t seed) {
  detail::require_alpha(alpha, "sample");
  if (n < 1) throw DomainError("sample: n must be >= 1");
  const double rho = 1.0 / (1.0 - alpha);
  rng::Engine gen(seed);
  std::vector<std::uint64_t> out(n);
  for (auto& k : out) k = detail::draw_yule_simon(rho, gen);
  return out;
}

inline double log_likelihood(const FrequencySample& data, double alpha) {
  detail::require_alpha(alpha, "log_likelihood");
  const double c = 1.0 / (1.0 - alpha);
  const double log_c = std::log(c);
  double total = 0.0;
  for (const auto& e : data.entries()) {
    total += static_cast<double>(e.count) * (log_c + log_beta(static_cast<double>(e.k), c + 1.0));
  }
  return total;
}

}  // namespace ys
