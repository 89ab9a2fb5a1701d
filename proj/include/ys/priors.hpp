#pragma once

// Objective priors for alpha: the Jeffreys prior (continuous) and the
// loss-based prior on the grid {i/M : i = 1..M-1}.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <vector>

#include "ys/error.hpp"
#include "ys/parallel.hpp"
#include "ys/specfun.hpp"
#include "ys/yule_simon.hpp"

namespace ys {

namespace detail {

// 1 - 3F2(1, c+1, 1; c+2, c+2; 1) / (2 - alpha)^2, provably positive on (0,1).
inline double jeffreys_radicand(double alpha, const SeriesControl& ctrl) {
  const double c = 1.0 / (1.0 - alpha);
  const double f = hyp3f2_unit(c + 1.0, c + 2.0, ctrl);
  const double two_minus = 2.0 - alpha;
  const double r = 1.0 - f / (two_minus * two_minus);
  if (!(r > 0.0)) {
    throw NumericalError("Jeffreys radicand is nonpositive after rounding; tighten the series",
                         r, ctrl.rel_tol);
  }
  return r;
}

}  // namespace detail

// I(alpha) = [1 - 3F2(1, c+1, 1; c+2, c+2; 1) / (2 - alpha)^2] / (1 - alpha)^2.
inline double fisher_information(double alpha, const SeriesControl& ctrl = {}) {
  detail::require_alpha(alpha, "fisher_information");
  const double c = 1.0 / (1.0 - alpha);
  return c * c * detail::jeffreys_radicand(alpha, ctrl);
}

struct FisherOracleResult {
  double value;
  // Size of the analytic tail pieces added past k_max; the true truncation
  // error is a small fraction of this.
  double truncation_bound;
  // E[sum_{j=1}^K 1/(c+j)]; equals 1 - alpha.
  double first_expectation;
  // E[sum_{j=0}^{K-1} 1/(c+1+j)^2].
  double second_expectation;
};

// Fisher information from the pre-reduction form
//   I = -c^2 + 2 c^3 E[S1(K)] - c^4 E[S2(K)]
// with both expectations summed by brute force over k <= k_max. Uses only the
// pmf and survival recurrences, nothing from the closed form.
inline FisherOracleResult fisher_information_oracle(double alpha, std::uint64_t k_max) {
  detail::require_alpha(alpha, "fisher_information_oracle");
  if (k_max < 1000) throw DomainError("fisher_information_oracle: k_max must be >= 1000");
  using LD = long double;
  const LD c = 1.0L / (1.0L - static_cast<LD>(alpha));
  LD prob = c / (c + 1.0L);  // f(1)
  LD surv = 1.0L;            // P(K >= k)
  LD s1 = 0.0L, s2 = 0.0L, e1 = 0.0L, e2 = 0.0L;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    const LD kk = static_cast<LD>(k);
    const LD inv = 1.0L / (c + kk);
    s1 += inv;
    s2 += inv * inv;
    e1 += prob * s1;
    e2 += prob * s2;
    surv *= kk / (c + kk);
    prob *= kk / (kk + c + 1.0L);
  }
  // For k > k_max: S1(k) = S1(k_max) + sum_{j=k_max+1}^k 1/(c+j), so the tail
  // of E[S1] is P(K > k_max) S1(k_max) + sum_{j>k_max} P(K>=j)/(c+j), and the
  // latter is ~ P(K > k_max)/c for a power-law survival. Same for S2.
  const LD kk1 = static_cast<LD>(k_max) + 1.0L;
  const LD extra1 = surv / c;
  const LD extra2 = surv / ((c + 1.0L) * kk1);
  e1 += surv * s1 + extra1;
  e2 += surv * s2 + extra2;
  const LD c2 = c * c;
  const LD value = -c2 + 2.0L * c2 * c * e1 - c2 * c2 * e2;
  const LD bound = 2.0L * c2 * c * extra1 + c2 * c2 * extra2;
  return {static_cast<double>(value), static_cast<double>(bound), static_cast<double>(e1),
          static_cast<double>(e2)};
}

// q(alpha) = (1/(1-alpha)) sqrt(1 - 3F2(...)/(2-alpha)^2) = sqrt(I(alpha)).
inline double jeffreys_unnormalized(double alpha, const SeriesControl& ctrl = {}) {
  detail::require_alpha(alpha, "jeffreys_unnormalized");
  return std::sqrt(detail::jeffreys_radicand(alpha, ctrl)) / (1.0 - alpha);
}

// K = integral of q over (0,1). Bounded above by pi/3 - ln(2 - sqrt 3).
inline double jeffreys_normalizer(const QuadratureControl& quad_ctrl = {},
                                  const SeriesControl& series_ctrl = {}) {
  const QuadratureResult r = integrate_unit_interval(
      [&series_ctrl](double a) { return jeffreys_unnormalized(a, series_ctrl); }, quad_ctrl);
  return r.value;
}

class JeffreysPrior {
 public:
  explicit JeffreysPrior(SeriesControl series_ctrl = {}, QuadratureControl quad_ctrl = {})
      : series_ctrl_(series_ctrl), quad_ctrl_(quad_ctrl), cache_(std::make_shared<Cache>()) {
    series_ctrl_.validate();
    quad_ctrl_.validate();
  }

  double unnormalized(double alpha) const { return jeffreys_unnormalized(alpha, series_ctrl_); }

  double log_unnormalized(double alpha) const {
    detail::require_alpha(alpha, "JeffreysPrior::log_unnormalized");
    return 0.5 * std::log(detail::jeffreys_radicand(alpha, series_ctrl_)) - std::log1p(-alpha);
  }

  // Computed on first use and shared by copies of this prior. MH ratios only
  // need the unnormalized density, so samplers never trigger this.
  double normalizer() const {
    std::call_once(cache_->once, [this] {
      cache_->value = jeffreys_normalizer(quad_ctrl_, series_ctrl_);
    });
    return cache_->value;
  }

  double density(double alpha) const { return unnormalized(alpha) / normalizer(); }

  const SeriesControl& series_control() const noexcept { return series_ctrl_; }
  const QuadratureControl& quadrature_control() const noexcept { return quad_ctrl_; }

 private:
  struct Cache {
    std::once_flag once;
    double value = 0.0;
  };

  SeriesControl series_ctrl_;
  QuadratureControl quad_ctrl_;
  std::shared_ptr<Cache> cache_;
};

// D_KL(f(.|alpha) || f(.|alpha')).
//
// With c = 1/(1-alpha), c' = 1/(1-alpha') the divergence rearranges (swap the
// k- and j-sums of the log-gamma differences) into
//   D = ln(c/c') + sum_{j>=1} P_alpha(K >= j) ln((j + c')/(j + c)),
// whose terms are all one sign. The first kHead terms are summed directly; the
// power-law tail is handled by Euler-Maclaurin on the smooth continuation of
// the summand, with the tail integral done by quadrature on x = N e^s.
inline double kl_divergence(double alpha, double alpha_prime, const SeriesControl& ctrl = {}) {
  detail::require_alpha(alpha, "kl_divergence");
  detail::require_alpha(alpha_prime, "kl_divergence");
  ctrl.validate();
  if (alpha == alpha_prime) return 0.0;

  const double c = 1.0 / (1.0 - alpha);
  const double cp = 1.0 / (1.0 - alpha_prime);
  const double shift = cp - c;
  constexpr std::uint64_t kHead = 256;

  double head = 0.0;
  double surv = 1.0;
  for (std::uint64_t j = 1; j < kHead; ++j) {
    const double jj = static_cast<double>(j);
    head += surv * std::log1p(shift / (jj + c));
    surv *= jj / (c + jj);
  }

  const double log_gamma_c1 = log_gamma(c + 1.0);
  auto summand = [&](double x) {
    return std::exp(log_gamma_c1 - log_gamma_ratio(x, c)) * std::log1p(shift / (x + c));
  };
  const double n0 = static_cast<double>(kHead);
  const double scale = std::abs(head);

  QuadratureControl qctrl;
  qctrl.abs_tol = std::max(1e-3 * ctrl.rel_tol * scale, std::numeric_limits<double>::min());
  qctrl.max_subdivisions = 500;
  const QuadratureResult integral = integrate(
      [&](double t) {
        const double s = t / (1.0 - t);
        if (s > 200.0) return 0.0;
        const double x = n0 * std::exp(s);
        return summand(x) * x / ((1.0 - t) * (1.0 - t));
      },
      0.0, 1.0, qctrl);

  const double w_m2 = summand(n0 - 2.0), w_m1 = summand(n0 - 1.0), w0 = summand(n0);
  const double w_p1 = summand(n0 + 1.0), w_p2 = summand(n0 + 2.0);
  const double d1 = 0.5 * (w_p1 - w_m1);
  const double d3 = 0.5 * (w_p2 - 2.0 * w_p1 + 2.0 * w_m1 - w_m2);
  const double correction3 = d3 / 720.0;
  const double tail = integral.value + 0.5 * w0 - d1 / 12.0 + correction3;

  const double error = integral.error + std::abs(correction3);
  if (error > ctrl.rel_tol * std::max(scale, std::numeric_limits<double>::min())) {
    throw NumericalError("kl_divergence: tail estimate did not reach rel_tol", 0.0, error);
  }

  const double d = std::log(c / cp) + head + tail;
  if (d < 0.0) {
    if (-d <= error + 64.0 * std::numeric_limits<double>::epsilon() * scale) return 0.0;
    throw NumericalError("kl_divergence: negative divergence beyond error bound", d, error);
  }
  return d;
}

// Discrete prior on {i/M : i = 1..M-1}.
struct GridPrior {
  int M = 0;
  std::vector<double> support;
  std::vector<double> masses;

  std::size_t size() const noexcept { return support.size(); }

  static std::vector<double> grid(int m) {
    if (m < 3) throw DomainError("GridPrior: M must be >= 3");
    std::vector<double> pts(static_cast<std::size_t>(m - 1));
    for (int i = 1; i < m; ++i) pts[static_cast<std::size_t>(i - 1)] = static_cast<double>(i) / m;
    return pts;
  }

  static GridPrior uniform(int m) {
    GridPrior g{m, grid(m), {}};
    g.masses.assign(g.support.size(), 1.0 / static_cast<double>(g.support.size()));
    return g;
  }

  std::size_t nearest_index(double alpha) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < support.size(); ++i)
      if (std::abs(support[i] - alpha) < std::abs(support[best] - alpha)) best = i;
    return best;
  }

  void validate() const {
    if (M < 3) throw DomainError("GridPrior: M must be >= 3");
    if (support.size() != static_cast<std::size_t>(M - 1) || masses.size() != support.size())
      throw DomainError("GridPrior: support/masses must have M-1 entries");
    double total = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
      if (!(masses[i] >= 0.0)) throw DomainError("GridPrior: negative mass");
      if (!(support[i] > 0.0 && support[i] < 1.0)) throw DomainError("GridPrior: support outside (0,1)");
      if (i > 0 && !(support[i] > support[i - 1])) throw DomainError("GridPrior: support not increasing");
      total += masses[i];
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("GridPrior: masses do not sum to 1");
  }
};

struct GridWorth {
  double min_kl;          // min over alpha' != alpha of D_KL
  std::size_t nearest;    // index of the minimizing alpha'
};

// Worth of each grid point: exhaustive minimum of the KL divergence over all
// other grid points. Ties go to the smaller alpha'.
inline std::vector<GridWorth> loss_based_worth(int m, const SeriesControl& ctrl = {},
                                               unsigned workers = 1) {
  const std::vector<double> pts = GridPrior::grid(m);
  std::vector<GridWorth> worth(pts.size());
  parallel_for(pts.size(), workers, [&](std::size_t i) {
    GridWorth best{std::numeric_limits<double>::infinity(), 0};
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      const double d = kl_divergence(pts[i], pts[j], ctrl);
      if (d < best.min_kl) best = {d, j};
    }
    worth[i] = best;
  });
  return worth;
}

// pi(alpha) proportional to exp(min_{alpha' != alpha} D_KL) - 1 on the grid.
inline GridPrior loss_based_prior(int m, const SeriesControl& ctrl = {}, unsigned workers = 1) {
  const std::vector<GridWorth> worth = loss_based_worth(m, ctrl, workers);
  GridPrior prior{m, GridPrior::grid(m), std::vector<double>(worth.size())};
  double total = 0.0;
  for (std::size_t i = 0; i < worth.size(); ++i) {
    prior.masses[i] = std::expm1(worth[i].min_kl);
    total += prior.masses[i];
  }
  for (auto& w : prior.masses) w /= total;
  return prior;
}

}  // namespace ys
