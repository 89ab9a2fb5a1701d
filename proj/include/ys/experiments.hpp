#pragma once

// Frequentist validation of the posteriors: coverage of the 95% credible
// interval and relative root-MSE over a grid of true alpha values, plus
// single-dataset case studies.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "ys/error.hpp"
#include "ys/inference.hpp"
#include "ys/parallel.hpp"
#include "ys/priors.hpp"
#include "ys/rng.hpp"
#include "ys/yule_simon.hpp"

namespace ys {

struct JeffreysSpec {};
struct LossBasedSpec {
  int M = 10;
};
using PriorSpec = std::variant<JeffreysSpec, LossBasedSpec>;

inline std::string prior_label(const PriorSpec& spec) {
  if (const auto* loss = std::get_if<LossBasedSpec>(&spec))
    return "loss(M=" + std::to_string(loss->M) + ")";
  return "jeffreys";
}

// A prior ready for sampling, built once and shared read-only across workers.
class FittedPrior {
 public:
  explicit FittedPrior(const PriorSpec& spec, unsigned workers = 1) : label_(prior_label(spec)) {
    if (const auto* loss = std::get_if<LossBasedSpec>(&spec))
      grid_ = loss_based_prior(loss->M, {}, workers);
    else
      jeffreys_ = JeffreysPrior{};
  }

  Chain fit(const FrequencySample& data, const McmcConfig& cfg) const {
    if (grid_) return sample_posterior_discrete(data, *grid_, cfg);
    return sample_posterior_continuous(data, *jeffreys_, cfg);
  }

  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
  std::optional<JeffreysPrior> jeffreys_;
  std::optional<GridPrior> grid_;
};

struct StudyConfig {
  std::vector<double> alphas;
  std::size_t n = 100;
  std::size_t replicates = 100;
  // The seed field is ignored; each replicate derives its own.
  McmcConfig mcmc{10'000, 2'000, 0, 0.5};
  PriorSpec prior = JeffreysSpec{};
  std::uint64_t master_seed = 0;
  unsigned workers = 1;

  void validate() const {
    detail::require(!alphas.empty(), "StudyConfig: alphas must be nonempty");
    for (double a : alphas) detail::require_alpha(a, "StudyConfig");
    detail::require(n >= 1, "StudyConfig: n must be >= 1");
    detail::require(replicates >= 1, "StudyConfig: replicates must be >= 1");
    mcmc.validate();
  }
};

struct StudyRow {
  double alpha;
  double coverage;         // NaN when every replicate failed
  double rel_rmse_mean;    // sqrt(MSE of posterior mean) / alpha
  double rel_rmse_median;  // same, from the posterior median
  std::size_t failures;
};

struct StudyResult {
  std::vector<StudyRow> rows;
};

// Seeds for replicate r at alpha index i: data uses purpose 0, MCMC purpose 1.
inline std::uint64_t replicate_seed(std::uint64_t master, std::size_t alpha_index,
                                    std::size_t replicate, std::uint64_t purpose) {
  return rng::derive_seed(master, {alpha_index, replicate, purpose});
}

inline StudyResult run_coverage_study(const StudyConfig& cfg) {
  cfg.validate();
  const FittedPrior prior(cfg.prior, cfg.workers);
  const std::size_t per_alpha = cfg.replicates;
  std::vector<std::optional<PosteriorSummary>> fits(cfg.alphas.size() * per_alpha);

  parallel_for(fits.size(), cfg.workers, [&](std::size_t task) {
    const std::size_t ai = task / per_alpha;
    const std::size_t rep = task % per_alpha;
    try {
      const auto draws = sample(cfg.alphas[ai], cfg.n, replicate_seed(cfg.master_seed, ai, rep, 0));
      McmcConfig mc = cfg.mcmc;
      mc.seed = replicate_seed(cfg.master_seed, ai, rep, 1);
      fits[task] = summarize(prior.fit(FrequencySample::from_observations(draws), mc));
    } catch (const NumericalError&) {
      fits[task].reset();
    } catch (const DomainError&) {
      fits[task].reset();
    }
  });

  StudyResult result;
  for (std::size_t ai = 0; ai < cfg.alphas.size(); ++ai) {
    const double truth = cfg.alphas[ai];
    std::size_t ok = 0, covered = 0;
    double se_mean = 0.0, se_median = 0.0;
    for (std::size_t rep = 0; rep < per_alpha; ++rep) {
      const auto& s = fits[ai * per_alpha + rep];
      if (!s) continue;
      ++ok;
      if (s->ci_low <= truth && truth <= s->ci_high) ++covered;
      se_mean += (s->mean - truth) * (s->mean - truth);
      se_median += (s->median - truth) * (s->median - truth);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double k = static_cast<double>(ok);
    result.rows.push_back({truth, ok ? static_cast<double>(covered) / k : nan,
                           ok ? std::sqrt(se_mean / k) / truth : nan,
                           ok ? std::sqrt(se_median / k) / truth : nan, per_alpha - ok});
  }
  return result;
}

struct FixedSampleRow {
  std::string prior;
  PosteriorSummary summary;
  double acceptance_rate;
};

// One dataset of size n at alpha_true, fitted under Jeffreys and the
// loss-based priors with M = 10 and M = 20.
inline std::vector<FixedSampleRow> run_fixed_sample_study(double alpha_true, std::size_t n,
                                                          std::uint64_t seed,
                                                          std::uint64_t iterations = 10'000,
                                                          std::uint64_t burn_in = 2'000) {
  detail::require_alpha(alpha_true, "run_fixed_sample_study");
  const auto data = FrequencySample::from_observations(sample(alpha_true, n, rng::derive_seed(seed, {0})));
  const std::vector<PriorSpec> specs = {JeffreysSpec{}, LossBasedSpec{10}, LossBasedSpec{20}};
  std::vector<FixedSampleRow> rows;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const FittedPrior prior(specs[i]);
    const McmcConfig mc{iterations, burn_in, rng::derive_seed(seed, {i + 1}), 0.5};
    const Chain chain = prior.fit(data, mc);
    rows.push_back({prior.label(), summarize(chain), chain.acceptance_rate});
  }
  return rows;
}

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_study_csv(std::ostream& out, const StudyResult& result) {
  out << "alpha,coverage,rel_rmse_mean,rel_rmse_median,failures\n";
  for (const auto& r : result.rows) {
    out << format_real(r.alpha) << ',' << format_real(r.coverage) << ','
        << format_real(r.rel_rmse_mean) << ',' << format_real(r.rel_rmse_median) << ','
        << r.failures << '\n';
  }
}

inline void write_fixed_sample_csv(std::ostream& out, const std::vector<FixedSampleRow>& rows) {
  out << "prior,mean,median,ci_low,ci_high,acceptance_rate\n";
  for (const auto& r : rows) {
    out << r.prior << ',' << format_real(r.summary.mean) << ',' << format_real(r.summary.median)
        << ',' << format_real(r.summary.ci_low) << ',' << format_real(r.summary.ci_high) << ','
        << format_real(r.acceptance_rate) << '\n';
  }
}

}  // namespace ys
