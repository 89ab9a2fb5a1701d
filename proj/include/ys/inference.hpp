#pragma once

// Posterior sampling for alpha given a FrequencySample.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ys/error.hpp"
#include "ys/priors.hpp"
#include "ys/rng.hpp"
#include "ys/yule_simon.hpp"

namespace ys {

struct McmcConfig {
  std::uint64_t iterations = 10'000;
  std::uint64_t burn_in = 2'000;
  std::uint64_t seed = 0;
  // Random-walk step on the logit scale; continuous chain only.
  double proposal_scale = 0.5;

  void validate() const {
    detail::require(iterations >= 1, "McmcConfig: iterations must be >= 1");
    detail::require(burn_in < iterations, "McmcConfig: burn_in must be < iterations");
    detail::require(proposal_scale > 0.0, "McmcConfig: proposal_scale must be positive");
  }
};

struct Chain {
  std::vector<double> draws;  // post burn-in
  double acceptance_rate = 0.0;
  McmcConfig config;
  // Set when the acceptance rate falls outside [0.05, 0.95].
  std::optional<std::string> tuning_warning;
};

struct PosteriorSummary {
  double mean;
  double median;
  double ci_low;   // 0.025 quantile
  double ci_high;  // 0.975 quantile
};

namespace detail {

inline double initial_alpha(const FrequencySample& data) {
  if (data.empty()) return 0.5;
  return std::clamp(1.0 / data.mean(), 0.05, 0.95);
}

inline std::optional<std::string> tuning_warning(double rate) {
  if (rate < 0.05 || rate > 0.95)
    return "acceptance rate " + std::to_string(rate) + " outside [0.05, 0.95]; retune the proposal";
  return std::nullopt;
}

}  // namespace detail

// Random-walk Metropolis-Hastings on eta = logit(alpha). The target in eta
// includes the Jacobian alpha (1 - alpha); the unnormalized Jeffreys density
// suffices because its normalizer cancels.
inline Chain sample_posterior_continuous(const FrequencySample& data, const JeffreysPrior& prior,
                                         const McmcConfig& cfg) {
  cfg.validate();
  rng::Engine gen(cfg.seed);
  std::normal_distribution<double> step(0.0, cfg.proposal_scale);

  auto log_target = [&](double eta) {
    const double log_a = -std::log1p(std::exp(-eta));
    const double log_1ma = -std::log1p(std::exp(eta));
    const double a = std::exp(log_a);
    if (!(a > 0.0 && a < 1.0)) return -std::numeric_limits<double>::infinity();
    return log_likelihood(data, a) + prior.log_unnormalized(a) + log_a + log_1ma;
  };

  const double a0 = detail::initial_alpha(data);
  double eta = std::log(a0 / (1.0 - a0));
  double current = log_target(eta);

  Chain chain;
  chain.config = cfg;
  chain.draws.reserve(cfg.iterations - cfg.burn_in);
  std::uint64_t accepted = 0;
  for (std::uint64_t it = 0; it < cfg.iterations; ++it) {
    const double proposal = eta + step(gen);
    const double candidate = log_target(proposal);
    const double u = rng::uniform_open(gen);
    if (std::log(u) < candidate - current) {
      eta = proposal;
      current = candidate;
      ++accepted;
    }
    if (it >= cfg.burn_in) chain.draws.push_back(1.0 / (1.0 + std::exp(-eta)));
  }
  chain.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(cfg.iterations);
  chain.tuning_warning = detail::tuning_warning(chain.acceptance_rate);
  return chain;
}

// Metropolis-Hastings over grid indices with a uniform independence proposal.
inline Chain sample_posterior_discrete(const FrequencySample& data, const GridPrior& prior,
                                       const McmcConfig& cfg) {
  cfg.validate();
  prior.validate();
  const std::size_t m = prior.size();
  std::vector<double> log_target(m);
  for (std::size_t i = 0; i < m; ++i) {
    log_target[i] = prior.masses[i] > 0.0
                        ? std::log(prior.masses[i]) + log_likelihood(data, prior.support[i])
                        : -std::numeric_limits<double>::infinity();
  }

  rng::Engine gen(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, m - 1);
  std::size_t state = prior.nearest_index(detail::initial_alpha(data));

  Chain chain;
  chain.config = cfg;
  chain.draws.reserve(cfg.iterations - cfg.burn_in);
  std::uint64_t accepted = 0;
  for (std::uint64_t it = 0; it < cfg.iterations; ++it) {
    const std::size_t proposal = pick(gen);
    const double u = rng::uniform_open(gen);
    if (std::log(u) < log_target[proposal] - log_target[state]) {
      state = proposal;
      ++accepted;
    }
    if (it >= cfg.burn_in) chain.draws.push_back(prior.support[state]);
  }
  chain.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(cfg.iterations);
  chain.tuning_warning = detail::tuning_warning(chain.acceptance_rate);
  return chain;
}

// Posterior masses on the prior's grid, normalized with log-sum-exp.
inline GridPrior exact_grid_posterior(const FrequencySample& data, const GridPrior& prior) {
  prior.validate();
  std::vector<double> logw(prior.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < prior.size(); ++i) {
    logw[i] = prior.masses[i] > 0.0
                  ? std::log(prior.masses[i]) + log_likelihood(data, prior.support[i])
                  : -std::numeric_limits<double>::infinity();
    top = std::max(top, logw[i]);
  }
  GridPrior post{prior.M, prior.support, std::vector<double>(prior.size())};
  double total = 0.0;
  for (std::size_t i = 0; i < prior.size(); ++i) {
    post.masses[i] = std::exp(logw[i] - top);
    total += post.masses[i];
  }
  for (auto& w : post.masses) w /= total;
  return post;
}

// Type-7 quantile (linear interpolation between order statistics) of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double prob) {
  if (sorted.empty()) throw DomainError("quantile: empty input");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline PosteriorSummary summarize(const std::vector<double>& draws) {
  if (draws.empty()) throw DomainError("summarize: empty chain");
  std::vector<double> sorted = draws;
  std::sort(sorted.begin(), sorted.end());
  long double total = 0.0L;
  for (double d : draws) total += d;
  return {static_cast<double>(total / static_cast<long double>(draws.size())),
          quantile_sorted(sorted, 0.5), quantile_sorted(sorted, 0.025),
          quantile_sorted(sorted, 0.975)};
}

inline PosteriorSummary summarize(const Chain& chain) { return summarize(chain.draws); }

// Fraction of draws at each support point of `grid`.
inline std::vector<double> empirical_grid_distribution(const Chain& chain, const GridPrior& grid) {
  std::vector<double> freq(grid.size(), 0.0);
  for (double d : chain.draws) freq[grid.nearest_index(d)] += 1.0;
  for (auto& f : freq) f /= static_cast<double>(chain.draws.size());
  return freq;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw DomainError("total_variation: size mismatch");
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

}  // namespace ys
