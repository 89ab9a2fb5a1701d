#pragma once

// `ys` command-line front end. Exit codes: 0 success, 1 usage error,
// 2 data error, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ys/data.hpp"
#include "ys/experiments.hpp"
#include "ys/inference.hpp"
#include "ys/priors.hpp"
#include "ys/yule_simon.hpp"

namespace ys::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

namespace detail {

// Writes to `path`, or to `fallback` when path is empty.
template <class Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  write(out);
  if (!out) throw DataError("failed writing '" + path + "'");
}

inline FrequencySample load_fit_data(const std::string& source, const std::string& mode,
                                     int decimals) {
  if (source == "hits") {
    // The embedded table is read as one observation per row by default
    // (frequency = observation), matching the published analysis.
    const CountMode m = mode == "hits" ? CountMode::Hits : CountMode::Surnames;
    if (mode == "returns") throw DomainError("--mode returns needs a price CSV path");
    return to_sample(hits_table(), m);
  }
  if (mode.empty() || mode == "hits") return load_count_table(source, CountMode::Hits);
  if (mode == "surnames") return load_count_table(source, CountMode::Surnames);
  return discretize_returns(to_returns(ingest_prices(source)), decimals);
}

inline std::vector<double> parse_alpha_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double a = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(a);
    } catch (const std::logic_error&) {
      throw DomainError("--alphas: cannot parse '" + item + "'");
    }
  }
  return out;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Objective Bayesian inference for the Yule-Simon distribution", "ys"};
  app.require_subcommand(1);

  // prior
  auto* prior_cmd = app.add_subcommand("prior", "Tabulate the Jeffreys or loss-based prior");
  std::string prior_kind;
  int prior_m = 10;
  int grid_points = 99;
  std::string prior_out;
  prior_cmd->add_option("--kind", prior_kind, "jeffreys | loss")
      ->required()
      ->check(CLI::IsMember({"jeffreys", "loss"}));
  prior_cmd->add_option("--m", prior_m, "Grid size M for the loss-based prior")->capture_default_str();
  prior_cmd->add_option("--grid-points", grid_points, "Tabulation points for the Jeffreys density")
      ->capture_default_str();
  prior_cmd->add_option("--out", prior_out, "Output CSV (stdout if omitted)");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Sample the posterior of alpha for a dataset");
  std::string fit_data, fit_mode, fit_prior, out_summary, out_chain;
  int fit_m = 10;
  int decimals = 2;
  std::uint64_t fit_iters = 25'000, fit_burnin = 5'000, fit_seed = 0;
  double fit_scale = 0.5;
  fit_cmd->add_option("--data", fit_data, "'hits' (embedded) or a CSV path")->required();
  fit_cmd->add_option("--mode", fit_mode, "hits | surnames | returns")
      ->check(CLI::IsMember({"hits", "surnames", "returns"}));
  fit_cmd->add_option("--prior", fit_prior, "jeffreys | loss")
      ->required()
      ->check(CLI::IsMember({"jeffreys", "loss"}));
  fit_cmd->add_option("--m", fit_m, "Grid size M for the loss-based prior")->capture_default_str();
  fit_cmd->add_option("--iters", fit_iters, "MCMC iterations")->capture_default_str();
  fit_cmd->add_option("--burnin", fit_burnin, "Burn-in iterations")->capture_default_str();
  fit_cmd->add_option("--seed", fit_seed, "RNG seed")->required();
  fit_cmd->add_option("--proposal-scale", fit_scale, "Logit-scale random-walk step")->capture_default_str();
  fit_cmd->add_option("--decimals", decimals, "Truncation decimals for --mode returns")->capture_default_str();
  fit_cmd->add_option("--out-summary", out_summary, "JSON summary (stdout if omitted)");
  fit_cmd->add_option("--out-chain", out_chain, "Chain CSV");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Coverage study or fixed-sample study");
  std::string sim_prior = "jeffreys", sim_out, sim_alphas;
  int sim_m = 10;
  std::size_t sim_n = 100, sim_reps = 100;
  std::uint64_t sim_seed = 0, sim_iters = 10'000, sim_burnin = 2'000;
  unsigned sim_workers = default_workers();
  double sim_scale = 0.5;
  std::optional<double> fixed_alpha;
  sim_cmd->add_option("--prior", sim_prior, "jeffreys | loss")
      ->check(CLI::IsMember({"jeffreys", "loss"}))
      ->capture_default_str();
  sim_cmd->add_option("--m", sim_m, "Grid size M (loss prior and default alpha grid)")->capture_default_str();
  sim_cmd->add_option("--n", sim_n, "Sample size per replicate")->capture_default_str();
  sim_cmd->add_option("--reps", sim_reps, "Replicates per alpha")->capture_default_str();
  sim_cmd->add_option("--seed", sim_seed, "Master seed")->required();
  sim_cmd->add_option("--alphas", sim_alphas, "Comma-separated true alphas (default: i/M)");
  sim_cmd->add_option("--iters", sim_iters, "MCMC iterations")->capture_default_str();
  sim_cmd->add_option("--burnin", sim_burnin, "Burn-in iterations")->capture_default_str();
  sim_cmd->add_option("--proposal-scale", sim_scale, "Logit-scale random-walk step")->capture_default_str();
  sim_cmd->add_option("--workers", sim_workers, "Worker threads")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--fixed-alpha", fixed_alpha,
                      "Fit one dataset under all three priors instead of a coverage study");
  sim_cmd->add_option("--out", sim_out, "Output CSV (stdout if omitted)");

  // sample
  auto* sample_cmd = app.add_subcommand("sample", "Draw Yule-Simon variates");
  double sample_alpha = 0.5;
  std::size_t sample_n = 1;
  std::uint64_t sample_seed = 0;
  std::string sample_out;
  sample_cmd->add_option("--alpha", sample_alpha, "alpha in (0,1)")->required();
  sample_cmd->add_option("--n", sample_n, "Number of draws")->required();
  sample_cmd->add_option("--seed", sample_seed, "RNG seed")->required();
  sample_cmd->add_option("--out", sample_out, "Output CSV (stdout if omitted)");

  // transform-returns
  auto* tr_cmd = app.add_subcommand("transform-returns",
                                    "Price CSV to discretized return frequencies (k,count)");
  std::string tr_in, tr_out;
  int tr_decimals = 2;
  tr_cmd->add_option("--in", tr_in, "Price CSV with header date,adj_close")->required();
  tr_cmd->add_option("--out", tr_out, "Output CSV (stdout if omitted)");
  tr_cmd->add_option("--decimals", tr_decimals, "Truncation decimals")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*prior_cmd) {
      if (prior_kind == "jeffreys") {
        if (grid_points < 1) throw DomainError("--grid-points must be >= 1");
        const JeffreysPrior prior;
        const double k = prior.normalizer();
        detail::emit(prior_out, out, [&](std::ostream& os) {
          os << "alpha,density,unnormalized\n";
          for (int i = 1; i <= grid_points; ++i) {
            const double a = static_cast<double>(i) / (grid_points + 1);
            const double q = prior.unnormalized(a);
            os << format_real(a) << ',' << format_real(q / k) << ',' << format_real(q) << '\n';
          }
        });
      } else {
        const GridPrior prior = loss_based_prior(prior_m, {}, default_workers());
        detail::emit(prior_out, out, [&](std::ostream& os) {
          os << "alpha,mass\n";
          for (std::size_t i = 0; i < prior.size(); ++i)
            os << format_real(prior.support[i]) << ',' << format_real(prior.masses[i]) << '\n';
        });
      }
    } else if (*fit_cmd) {
      const FrequencySample data = detail::load_fit_data(fit_data, fit_mode, decimals);
      const PriorSpec spec = fit_prior == "loss" ? PriorSpec{LossBasedSpec{fit_m}} : PriorSpec{JeffreysSpec{}};
      const McmcConfig cfg{fit_iters, fit_burnin, fit_seed, fit_scale};
      const Chain chain = FittedPrior(spec, default_workers()).fit(data, cfg);
      if (chain.tuning_warning) err << "warning: " << *chain.tuning_warning << '\n';
      const PosteriorSummary s = summarize(chain);
      nlohmann::ordered_json j;
      j["prior"] = prior_label(spec);
      j["mean"] = s.mean;
      j["median"] = s.median;
      j["ci_low"] = s.ci_low;
      j["ci_high"] = s.ci_high;
      j["acceptance_rate"] = chain.acceptance_rate;
      j["iterations"] = cfg.iterations;
      j["burn_in"] = cfg.burn_in;
      j["seed"] = cfg.seed;
      detail::emit(out_summary, out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
      if (!out_chain.empty()) {
        detail::emit(out_chain, out, [&](std::ostream& os) {
          os << "draw\n";
          for (double d : chain.draws) os << format_real(d) << '\n';
        });
      }
    } else if (*sim_cmd) {
      if (fixed_alpha) {
        const auto rows = run_fixed_sample_study(*fixed_alpha, sim_n, sim_seed, sim_iters, sim_burnin);
        detail::emit(sim_out, out, [&](std::ostream& os) { write_fixed_sample_csv(os, rows); });
      } else {
        StudyConfig cfg;
        cfg.alphas = sim_alphas.empty() ? GridPrior::grid(sim_m) : detail::parse_alpha_list(sim_alphas);
        cfg.n = sim_n;
        cfg.replicates = sim_reps;
        cfg.mcmc = {sim_iters, sim_burnin, 0, sim_scale};
        cfg.prior = sim_prior == "loss" ? PriorSpec{LossBasedSpec{sim_m}} : PriorSpec{JeffreysSpec{}};
        cfg.master_seed = sim_seed;
        cfg.workers = sim_workers;
        const StudyResult result = run_coverage_study(cfg);
        detail::emit(sim_out, out, [&](std::ostream& os) { write_study_csv(os, result); });
      }
    } else if (*sample_cmd) {
      const auto draws = sample(sample_alpha, sample_n, sample_seed);
      detail::emit(sample_out, out, [&](std::ostream& os) {
        os << "k\n";
        for (auto k : draws) os << k << '\n';
      });
    } else if (*tr_cmd) {
      const FrequencySample data = discretize_returns(to_returns(ingest_prices(tr_in)), tr_decimals);
      detail::emit(tr_out, out, [&](std::ostream& os) { write_frequency_sample(os, data); });
    }
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DomainError& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}

}  // namespace ys::cli
