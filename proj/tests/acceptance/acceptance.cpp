// Acceptance suite: one PASS/FAIL line per criterion. Drives the `ys` binary
// for the end-to-end criteria so output files can be compared byte for byte.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "ys/ys.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kCli = YS_CLI_PATH;
const fs::path kWork = fs::current_path() / "acceptance_out";

constexpr std::uint64_t kFitSeed = 7;
constexpr std::uint64_t kStudySeed = 1;
constexpr std::uint64_t kFixedSeed = 2017;

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int cli(const std::string& args) {
  const int raw = std::system((kCli + " " + args + " 2>>" + (kWork / "stderr.log").string()).c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

// CSV with a header row into column -> values.
std::map<std::string, std::vector<std::string>> read_csv(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::vector<std::string> header;
  std::map<std::string, std::vector<std::string>> cols;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    return out;
  };
  if (std::getline(in, line)) header = split(line);
  while (std::getline(in, line)) {
    const auto f = split(line);
    for (std::size_t i = 0; i < header.size() && i < f.size(); ++i) cols[header[i]].push_back(f[i]);
  }
  return cols;
}

struct FitRun {
  std::string name;
  std::string args;
};

const std::vector<FitRun> kFits = {
    {"jeffreys", "--prior jeffreys"},
    {"loss10", "--prior loss --m 10"},
    {"loss20", "--prior loss --m 20"},
    {"loss100", "--prior loss --m 100"},
};

std::string fit_args(const FitRun& f, const std::string& tag) {
  return "fit --data hits " + f.args + " --iters 25000 --burnin 5000 --seed " + std::to_string(kFitSeed) +
         " --out-summary " + (kWork / (tag + f.name + ".json")).string() + " --out-chain " +
         (kWork / (tag + f.name + ".csv")).string();
}

std::string study_args(const std::string& prior, unsigned workers, const std::string& out) {
  return "simulate " + prior + " --n 100 --reps 100 --iters 10000 --burnin 2000 --seed " +
         std::to_string(kStudySeed) + " --workers " + std::to_string(workers) + " --out " +
         (kWork / out).string();
}

std::string fixed_args(double alpha, const std::string& out) {
  return "simulate --fixed-alpha " + fmt("%.2f", alpha) + " --n 100 --iters 10000 --burnin 2000 --seed " +
         std::to_string(kFixedSeed) + " --out " + (kWork / out).string();
}

void ac1() {
  const auto t0 = Clock::now();
  std::map<std::string, nlohmann::json> s;
  bool ran = true;
  for (const auto& f : kFits) {
    ran = ran && cli(fit_args(f, "")) == 0;
    if (ran) s[f.name] = nlohmann::json::parse(slurp(kWork / (f.name + ".json")));
  }
  const double secs = seconds_since(t0);
  if (!ran) return report("AC1", false, "ys fit exited nonzero");
  const auto& j = s["jeffreys"];
  const double mean = j["mean"], median = j["median"], lo = j["ci_low"], hi = j["ci_high"];
  const double m10 = s["loss10"]["mean"], m20 = s["loss20"]["mean"], med100 = s["loss100"]["median"];
  const bool ok = within(mean, 0.06, 0.10) && within(median, 0.05, 0.09) && std::abs(lo - 0.004) <= 0.04 &&
                  std::abs(hi - 0.24) <= 0.04 && within(m10, 0.10, 0.16) && within(m20, 0.08, 0.14) &&
                  within(med100, 0.05, 0.11) && secs < 120.0;
  report("AC1", ok,
         "jeffreys mean " + fmt("%.4f", mean) + " median " + fmt("%.4f", median) + " CI (" + fmt("%.4f", lo) +
             ", " + fmt("%.4f", hi) + "); loss M=10 mean " + fmt("%.4f", m10) + ", M=20 mean " +
             fmt("%.4f", m20) + ", M=100 median " + fmt("%.4f", med100) + "; " + fmt("%.1f", secs) + " s");
}

void ac2() {
  const auto t0 = Clock::now();
  double worst_a = 0.0, worst_b = 0.0, worst_c = 0.0;
  for (double a : {0.2, 0.5, 0.8})
    worst_a = std::max(worst_a, std::abs(ys::fisher_information_oracle(a, 1'000'000).first_expectation - (1.0 - a)));
  for (long double a : {0.1L, 0.3L, 0.5L, 0.7L, 0.9L}) {
    const auto f = ys::oracle::pmf_table(a, 50);
    long double head = 0.0L;
    for (std::uint64_t j = 1; j <= 50; ++j) {
      worst_b = std::max(worst_b, std::abs(ys::survival(j, static_cast<double>(a)) - static_cast<double>(1.0L - head)));
      head += f[j - 1];
    }
  }
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double closed = ys::fisher_information(a);
    worst_c = std::max(worst_c, std::abs(closed - ys::fisher_information_oracle(a, 1'000'000).value) / closed);
  }
  const double secs = seconds_since(t0);
  report("AC2", worst_a <= 1e-4 && worst_b <= 1e-8 && worst_c < 1e-6 && secs < 60.0,
         "(a) max |E - (1-alpha)| " + fmt("%.2e", worst_a) + "; (b) max survival error " + fmt("%.2e", worst_b) +
             "; (c) max Fisher rel. error " + fmt("%.2e", worst_c) + "; " + fmt("%.1f", secs) + " s");
}

void ac3() {
  const double k = ys::JeffreysPrior{}.normalizer();
  const double mid = static_cast<double>(
      ys::oracle::midpoint_unit([](double a) { return ys::jeffreys_unnormalized(a); }, 1'000'000));
  report("AC3", k > 0.0 && k <= 2.364157 && std::abs(k - mid) < 1e-6,
         "K = " + fmt("%.12f", k) + ", midpoint oracle " + fmt("%.12f", mid) + ", bound " +
             fmt("%.10f", std::numbers::pi / 3.0 - std::log(2.0 - std::sqrt(3.0))));
}

void ac4() {
  double min_p = 1.0;
  for (long double a : {0.3L, 0.5L, 0.8L})
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
      const auto draws = ys::sample(static_cast<double>(a), 100'000, seed);
      const auto [stat, dof] = ys::oracle::chi_square_vs_pmf(draws, a, 20);
      min_p = std::min(min_p, ys::oracle::chi_square_sf(stat, dof));
    }
  const auto draws = ys::sample(0.7, 1'000'000, 70);
  long double s = 0.0L, s2 = 0.0L;
  for (auto k : draws) {
    s += k;
    s2 += static_cast<long double>(k) * k;
  }
  const long double n = draws.size();
  const double m = static_cast<double>(s / n);
  const double se = static_cast<double>(std::sqrt((s2 / n - (s / n) * (s / n)) / n));
  const double z = std::abs(m - 10.0 / 7.0) / se;
  report("AC4", min_p > 0.001 && z < 3.0,
         "min chi-square p over 15 runs " + fmt("%.4f", min_p) + "; mean at 0.7 = " + fmt("%.5f", m) + " (" +
             fmt("%.2f", z) + " SE from 10/7)");
}

void ac5() {
  const auto data = ys::to_sample(ys::hits_table(), ys::CountMode::Surnames);
  double worst = 0.0;
  std::string detail;
  for (int m : {10, 20}) {
    const auto prior = ys::loss_based_prior(m);
    const auto chain = ys::sample_posterior_discrete(data, prior, {25'000, 5'000, kFitSeed, 0.5});
    const double tv =
        ys::total_variation(ys::empirical_grid_distribution(chain, prior), ys::exact_grid_posterior(data, prior).masses);
    worst = std::max(worst, tv);
    detail += "M=" + std::to_string(m) + " TV " + fmt("%.4f", tv) + "  ";
  }
  report("AC5", worst < 0.02, detail);
}

void ac6() {
  const auto t0 = Clock::now();
  const unsigned w = ys::default_workers();
  const bool ran = cli(study_args("--prior loss --m 10", w, "study_loss10.csv")) == 0 &&
                   cli(study_args("--prior jeffreys --m 10", w, "study_jeffreys.csv")) == 0;
  const double secs = seconds_since(t0);
  if (!ran) return report("AC6", false, "ys simulate exited nonzero");
  auto loss = read_csv(kWork / "study_loss10.csv");
  auto jeff = read_csv(kWork / "study_jeffreys.csv");
  auto num = [](const std::vector<std::string>& v, std::size_t i) { return std::stod(v.at(i)); };

  double mean_cov = 0.0;
  for (std::size_t i = 0; i < loss["coverage"].size(); ++i) mean_cov += num(loss["coverage"], i);
  mean_cov /= static_cast<double>(loss["coverage"].size());
  double min_jeff = 1.0;
  double r02[2] = {0, 0}, r08[2] = {0, 0};
  for (std::size_t i = 0; i < jeff["alpha"].size(); ++i) {
    const double a = num(jeff["alpha"], i);
    if (a <= 0.5 + 1e-12) min_jeff = std::min(min_jeff, num(jeff["coverage"], i));
    if (std::abs(a - 0.2) < 1e-12) r02[0] = num(jeff["rel_rmse_mean"], i), r02[1] = num(loss["rel_rmse_mean"], i);
    if (std::abs(a - 0.8) < 1e-12) r08[0] = num(jeff["rel_rmse_mean"], i), r08[1] = num(loss["rel_rmse_mean"], i);
  }
  const bool ok = mean_cov >= 0.93 && min_jeff >= 0.85 && r08[0] < r02[0] && r08[1] < r02[1];
  report("AC6", ok,
         "loss M=10 mean coverage " + fmt("%.3f", mean_cov) + "; Jeffreys min coverage (alpha<=0.5) " +
             fmt("%.2f", min_jeff) + "; rel_rmse 0.2 -> 0.8: Jeffreys " + fmt("%.3f", r02[0]) + " -> " +
             fmt("%.3f", r08[0]) + ", loss " + fmt("%.3f", r02[1]) + " -> " + fmt("%.3f", r08[1]) + "; " +
             fmt("%.0f", secs) + " s, " + std::to_string(w) + " workers");
}

void ac7() {
  bool ok = true;
  std::string detail = "seed " + std::to_string(kFixedSeed) + ":";
  for (double truth : {0.40, 0.68}) {
    const std::string out = "fixed_" + fmt("%.2f", truth) + ".csv";
    if (cli(fixed_args(truth, out)) != 0) return report("AC7", false, "ys simulate --fixed-alpha exited nonzero");
    auto t = read_csv(kWork / out);
    detail += " alpha=" + fmt("%.2f", truth) + " means";
    for (std::size_t i = 0; i < t["prior"].size(); ++i) {
      const double mean = std::stod(t["mean"][i]), lo = std::stod(t["ci_low"][i]), hi = std::stod(t["ci_high"][i]);
      ok = ok && std::abs(mean - truth) <= 0.05 && lo <= truth && truth <= hi;
      detail += " " + fmt("%.3f", mean) + (lo <= truth && truth <= hi ? "" : "(CI misses)");
    }
    detail += ";";
  }
  report("AC7", ok, detail);
}

void ac8() {
  bool same = true;
  std::string detail;
  for (const auto& f : kFits) {
    same = same && cli(fit_args(f, "repeat_")) == 0;
    same = same && slurp(kWork / (f.name + ".json")) == slurp(kWork / ("repeat_" + f.name + ".json")) &&
           slurp(kWork / (f.name + ".csv")) == slurp(kWork / ("repeat_" + f.name + ".csv"));
  }
  detail += std::string("fits ") + (same ? "identical" : "DIFFER");

  bool study_same = true;
  for (unsigned w : {1u, 3u}) {
    const std::string sw = std::to_string(w);
    study_same = study_same && cli(study_args("--prior loss --m 10", w, "study_loss10_w" + sw + ".csv")) == 0 &&
                 cli(study_args("--prior jeffreys --m 10", w, "study_jeffreys_w" + sw + ".csv")) == 0;
    study_same = study_same &&
                 slurp(kWork / "study_loss10.csv") == slurp(kWork / ("study_loss10_w" + sw + ".csv")) &&
                 slurp(kWork / "study_jeffreys.csv") == slurp(kWork / ("study_jeffreys_w" + sw + ".csv"));
  }
  detail += std::string("; studies with 1 and 3 workers ") + (study_same ? "identical" : "DIFFER");

  bool fixed_same = true;
  for (double truth : {0.40, 0.68}) {
    const std::string out = "fixed_" + fmt("%.2f", truth) + ".csv";
    fixed_same = fixed_same && cli(fixed_args(truth, "repeat_" + out)) == 0 &&
                 slurp(kWork / out) == slurp(kWork / ("repeat_" + out));
  }
  detail += std::string("; fixed-sample runs ") + (fixed_same ? "identical" : "DIFFER");
  report("AC8", same && study_same && fixed_same, detail);
}

}  // namespace

int main() {
  fs::remove_all(kWork);
  fs::create_directories(kWork);
  const std::vector<std::pair<const char*, std::function<void()>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
      {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}};
  for (const auto& [id, fn] : criteria) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
