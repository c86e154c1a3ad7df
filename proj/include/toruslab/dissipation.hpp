#pragma once

// Dissipation time from the exact norm identity ||T^n|| = exp(-eps M(n)):
// the threshold crossing is read off the certified M(n) ladder, never from
// operator simulation. Classification into the simple (1/eps) and
// logarithmic (ln(1/eps)) regimes is a pure spectral decision.

#include "toruslab/arithmin.hpp"
#include "toruslab/parallel.hpp"

namespace toruslab {

struct noise_model {
  double epsilon = 0.0;
  double alpha = 1.0;
  std::optional<Eigen::MatrixXd> degeneracy;
  double threshold_eta = std::exp(-1.0);

  noise_model() = default;
  noise_model(double eps, double a = 1.0) : epsilon(eps), alpha(a) { validate(); }

  // eps = 0 is tolerated for pure-Koopman simulation; operations that need
  // actual contraction (dissipation times, resolvents) check positivity.
  void validate() const {
    if (!(epsilon >= 0.0)) throw precondition_error("noise level epsilon must be nonnegative");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw precondition_error("alpha must lie in (0, 1]");
    if (!(threshold_eta > 0.0 && threshold_eta < 1.0))
      throw precondition_error("threshold eta must lie in (0, 1)");
  }

  void require_positive_epsilon() const {
    if (!(epsilon > 0.0)) throw precondition_error("this operation requires epsilon > 0");
  }
};

struct operator_norm_result {
  double norm = 0.0;      // exp(log_norm), flushed to 0 on underflow
  double log_norm = 0.0;  // -eps * M(n)
  bool certified = false;
};

enum class dissipation_class { simple, logarithmic, none };

inline const char* to_string(dissipation_class c) {
  switch (c) {
    case dissipation_class::simple: return "simple";
    case dissipation_class::logarithmic: return "logarithmic";
    case dissipation_class::none: return "none";
  }
  return "?";
}

struct dissipation_entry {
  double epsilon = 0.0;
  long n_diss = 0;
  double log_norm = 0.0;  // log ||T^n|| at n = n_diss
};

struct dissipation_report {
  std::vector<dissipation_entry> entries;  // sorted by decreasing epsilon
  dissipation_class classification = dissipation_class::simple;
  double r_diss_fit = 0.0;
  double r_diss_predicted = 0.0;
  double fit_residual = 0.0;
  double alpha = 1.0;
  double eta = std::exp(-1.0);
};

// ||T^n|| for the table's map and variant at the given noise level.
inline operator_norm_result operator_norm(min_table& table, const noise_model& noise, long n) {
  noise.validate();
  if (std::abs(noise.alpha - table.alpha()) > 0)
    throw precondition_error("noise alpha does not match the table");
  min_result m = table.value(n);
  if (m.infimum_zero)
    return {1.0, 0.0, false};  // degenerate no-dissipation case: norm is exactly 1
  operator_norm_result r;
  r.log_norm = -noise.epsilon * m.value;
  r.norm = std::exp(r.log_norm);
  r.certified = m.certified;
  return r;
}

inline operator_norm_result operator_norm(const int_matrix& a, const noise_model& noise, long n) {
  min_table table(a, noise.alpha,
                  noise.degeneracy ? min_variant::degenerate : min_variant::full_sum,
                  noise.degeneracy);
  return operator_norm(table, noise, n);
}

namespace detail {

// dissipated at n iff eps * M(n) > ln(1/eta), strictly (norm < eta);
// the exact-boundary case counts as not dissipated
inline bool crossed(min_table& table, const noise_model& noise, long n) {
  return noise.epsilon * table.value(n).value > -std::log(noise.threshold_eta);
}

}  // namespace detail

// Smallest n with ||T^n|| < eta. Doubling then bisection on the strictly
// increasing M(n); finiteness is guaranteed for the full_sum variant.
inline long n_diss(min_table& table, const noise_model& noise) {
  noise.validate();
  noise.require_positive_epsilon();
  if (table.variant() == min_variant::degenerate) {
    if (table.value(1).infimum_zero)
      throw infinite_dissipation_error("degenerate noise: no dissipation for this B");
  } else if (table.variant() != min_variant::full_sum) {
    throw precondition_error("n_diss runs on the full_sum (or degenerate) variant");
  }
  long hi = 1;
  while (!detail::crossed(table, noise, hi)) {
    if (hi > (1L << 40)) throw error("dissipation time exceeds 2^40");
    hi *= 2;
  }
  long lo = hi / 2;  // not crossed (or hi == 1)
  if (hi == 1) return 1;
  while (lo + 1 < hi) {
    long mid = lo + (hi - lo) / 2;
    if (detail::crossed(table, noise, mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

inline long n_diss(const int_matrix& a, const noise_model& noise) {
  if (noise.degeneracy) {
    if (degeneracy_case(a, *noise.degeneracy) == degeneracy::no_dissipation)
      throw infinite_dissipation_error("degenerate noise: no dissipation for this B");
    min_table table(a, noise.alpha, min_variant::degenerate, noise.degeneracy);
    return n_diss(table, noise);
  }
  min_table table(a, noise.alpha);
  return n_diss(table, noise);
}

// Theorem-level classification: logarithmic iff the automorphism is ergodic.
inline dissipation_class classify(const int_matrix& a) {
  return is_ergodic(a) ? dissipation_class::logarithmic : dissipation_class::simple;
}

namespace detail {

struct lsq_fit {
  double slope = 0.0, intercept = 0.0, residual = 0.0;
};

inline lsq_fit least_squares(const std::vector<std::pair<double, double>>& xy) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : xy) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double n = static_cast<double>(xy.size());
  lsq_fit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  double res = 0;
  for (auto [x, y] : xy) {
    double e = y - f.slope * x - f.intercept;
    res += e * e;
  }
  f.residual = std::sqrt(res / n);
  return f;
}

// lim M(n)/n for the simple class: M(N)/N at the largest certified N with a
// Richardson step when a half-point is available (convergence is O(1/N)).
inline double linear_rate_estimate(min_table& table, long n_max) {
  double m1 = table.value(n_max).value / static_cast<double>(n_max);
  long half = n_max / 2;
  if (half >= 1) {
    double m2 = table.value(half).value / static_cast<double>(half);
    return 2.0 * m1 - m2;
  }
  return m1;
}

}  // namespace detail

// Sweep n_diss over a geometric epsilon grid and fit the rate constant:
// slope against ln(1/eps) for the logarithmic class, the constant
// eps * n_diss for the simple class. Fits use the smallest five epsilons;
// larger ones pollute the asymptotics.
inline dissipation_report r_diss_fit(const int_matrix& a, double alpha,
                                     const std::vector<double>& eps_grid,
                                     double eta = std::exp(-1.0)) {
  if (eps_grid.size() < 5) throw precondition_error("epsilon grid needs >= 5 points");
  for (size_t i = 1; i < eps_grid.size(); ++i)
    if (!(eps_grid[i] < eps_grid[i - 1]))
      throw precondition_error("epsilon grid must be strictly decreasing");

  dissipation_report rep;
  rep.alpha = alpha;
  rep.eta = eta;
  rep.classification = classify(a);

  min_table table(a, alpha);
  rep.entries.resize(eps_grid.size());
  parallel_for(eps_grid.size(), [&](size_t i) {
    noise_model noise(eps_grid[i], alpha);
    noise.threshold_eta = eta;
    long n = n_diss(table, noise);
    rep.entries[i] = {eps_grid[i], n, -eps_grid[i] * table.value(n).value};
  });

  size_t fit_lo = eps_grid.size() - 5;
  std::vector<std::pair<double, double>> pts;
  if (rep.classification == dissipation_class::logarithmic) {
    for (size_t i = fit_lo; i < eps_grid.size(); ++i)
      pts.emplace_back(std::log(1.0 / rep.entries[i].epsilon),
                       static_cast<double>(rep.entries[i].n_diss));
    auto f = detail::least_squares(pts);
    rep.r_diss_fit = f.slope;
    rep.fit_residual = f.residual;
    rep.r_diss_predicted = 1.0 / (2.0 * alpha * h_hat(a));
  } else {
    double acc = 0.0;
    for (size_t i = fit_lo; i < eps_grid.size(); ++i)
      acc += rep.entries[i].epsilon * static_cast<double>(rep.entries[i].n_diss);
    rep.r_diss_fit = acc / 5.0;
    double res = 0.0;
    for (size_t i = fit_lo; i < eps_grid.size(); ++i) {
      double e = rep.entries[i].epsilon * static_cast<double>(rep.entries[i].n_diss) - rep.r_diss_fit;
      res += e * e;
    }
    rep.fit_residual = std::sqrt(res / 5.0);
    long n_big = rep.entries.back().n_diss;
    rep.r_diss_predicted = -std::log(eta) / detail::linear_rate_estimate(table, n_big);
  }
  return rep;
}

// Smallest n with eps * (coarse minimum at n) > ln(1/eta). The coarse
// minimum can saturate on nonergodic maps (a periodic lattice vector caps
// it); that case is certified exactly and reported as infinite dissipation.
inline long n_diss_coarse(const int_matrix& a, const noise_model& noise, long scan_cap = 5000) {
  noise.validate();
  noise.require_positive_epsilon();
  double threshold = -std::log(noise.threshold_eta);

  // exact saturation certificate from periodic lattice vectors
  if (!is_ergodic(a)) {
    int_polynomial cp = char_poly(a);
    double best_bound = std::numeric_limits<double>::infinity();
    for (int m : cyclotomic_orders(a.dim())) {
      if (!cp.divisible_by(cyclotomic(m))) continue;
      auto kernel = integer_kernel_basis(mat_pow(a, m) - int_matrix::identity(a.dim()));
      for (const auto& b : kernel) {
        Int b2 = 0;
        for (const Int& c : b) b2 += c * c;
        double bound = detail::alpha_pow(detail::mpz_to_long_double(b2), noise.alpha);
        double worst = 0.0;
        std::vector<Int> v = b;
        for (int j = 0; j < m; ++j) {
          v = a.apply(v);
          Int v2 = 0;
          for (const Int& c : v) v2 += c * c;
          worst = std::max(
              worst, static_cast<double>(detail::alpha_pow(detail::mpz_to_long_double(v2), noise.alpha)));
        }
        best_bound = std::min(best_bound, bound + worst);
      }
    }
    if (noise.epsilon * best_bound <= threshold)
      throw infinite_dissipation_error(
          "coarse minimum saturates at " + std::to_string(best_bound) +
          " along a periodic lattice vector; threshold never crossed");
  }

  min_table table(a, noise.alpha, min_variant::coarse);
  for (long n = 1; n <= scan_cap; ++n)
    if (noise.epsilon * table.value(n).value > threshold) return n;
  throw error("coarse dissipation scan exceeded the cap without a certificate");
}

// ---------------------------------------------------------------------------
// Threshold robustness (the ratio bound of the eta-independence proposition).

struct robustness_entry {
  double epsilon = 0.0;
  std::vector<long> n_diss_per_eta;
};

struct robustness_table {
  std::vector<double> etas;
  std::vector<robustness_entry> entries;
  bool all_within_bound = true;  // every ratio inside [1/k, k], k = ceil(ln eta' / ln eta)
};

inline robustness_table threshold_robustness(const int_matrix& a, double alpha,
                                             const std::vector<double>& eps_grid,
                                             const std::vector<double>& etas) {
  for (double e : etas)
    if (!(e > 0.0 && e < 1.0)) throw precondition_error("eta must lie in (0, 1)");
  robustness_table tab;
  tab.etas = etas;
  min_table table(a, alpha);
  for (double eps : eps_grid) {
    robustness_entry entry;
    entry.epsilon = eps;
    for (double eta : etas) {
      noise_model noise(eps, alpha);
      noise.threshold_eta = eta;
      entry.n_diss_per_eta.push_back(n_diss(table, noise));
    }
    for (size_t i = 0; i < etas.size(); ++i)
      for (size_t j = 0; j < etas.size(); ++j) {
        double eta_hi = std::max(etas[i], etas[j]);  // closer to 1: smaller n
        double eta_lo = std::min(etas[i], etas[j]);
        long k = static_cast<long>(std::ceil(std::log(eta_lo) / std::log(eta_hi)));
        double ratio = static_cast<double>(entry.n_diss_per_eta[i]) /
                       static_cast<double>(entry.n_diss_per_eta[j]);
        if (!(ratio >= 1.0 / static_cast<double>(k) - 1e-12 &&
              ratio <= static_cast<double>(k) + 1e-12))
          tab.all_within_bound = false;
      }
    tab.entries.push_back(std::move(entry));
  }
  return tab;
}

// CSV sweep: columns epsilon, n_diss, log_norm_at_n_diss.
inline std::string dissipation_csv(const dissipation_report& rep) {
  std::string out = "epsilon,n_diss,log_norm_at_n_diss\n";
  char buf[96];
  for (const auto& e : rep.entries) {
    std::snprintf(buf, sizeof buf, "%.12g,%ld,%.12g\n", e.epsilon, e.n_diss, e.log_norm);
    out += buf;
  }
  return out;
}

}  // namespace toruslab
