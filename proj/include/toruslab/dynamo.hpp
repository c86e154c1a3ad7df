#pragma once

// Kinematic-dynamo time scales for toral automorphisms. The whole module
// rides on the exact identity log||P^n|| = -eps M(n; A) + log||F^n|| with
// A = (F^{-1})^T, so magnetic fields never materialize: the certified M(n)
// ladder supplies the damping and the exact matrix powers supply the
// stretching.

#include "toruslab/dissipation.hpp"

namespace toruslab {

enum class dynamo_class { fast_dynamo, slow_dynamo, anti_dynamo };

inline const char* to_string(dynamo_class c) {
  switch (c) {
    case dynamo_class::fast_dynamo: return "fast_dynamo";
    case dynamo_class::slow_dynamo: return "slow_dynamo";
    case dynamo_class::anti_dynamo: return "anti_dynamo";
  }
  return "?";
}

struct dynamo_entry {
  long n = 0;
  double log_push_norm = 0.0;
};

struct dynamo_report {
  std::vector<dynamo_entry> entries;  // n = 0 .. scan end
  double r_dyn = 0.0;                 // fitted growth rate over the last half
  bool r_dyn_divergent = false;       // ergodic case: decays faster than any exponential
  long n_p = 0;                       // first n attaining the maximum
  double peak_log_norm = 0.0;
  std::optional<long> n_th;           // largest scanned n with log norm > 1
  bool scan_capped = false;
  double gamma_fit = std::numeric_limits<double>::quiet_NaN();  // filled by sweeps
  dynamo_class classification = dynamo_class::anti_dynamo;
};

// The push-forward norm curve for a given F: caller supplies F, the damping
// matrix A = (F^{-1})^T is derived internally.
class push_norm_curve {
 public:
  push_norm_curve(int_matrix f, const noise_model& noise)
      : f_(std::move(f)),
        noise_(noise),
        table_(f_.unimodular_inverse().transpose(), noise.alpha) {
    noise_.validate();
    if (noise_.degeneracy) throw precondition_error("dynamo scans use nondegenerate noise");
  }

  // log ||P^n|| = -eps M(n; A) + log ||F^n||_2
  double log_push_norm(long n) {
    if (n == 0) return 0.0;
    return -noise_.epsilon * table_.value(n).value + log_f_norm(n);
  }

  double log_f_norm(long n) {
    auto it = fnorm_memo_.find(n);
    if (it != fnorm_memo_.end()) return it->second;
    double v = operator_two_norm_log(mat_pow(f_, n));
    fnorm_memo_.emplace(n, v);
    return v;
  }

  min_table& damping_table() { return table_; }
  const int_matrix& map() const { return f_; }
  const noise_model& noise() const { return noise_; }

 private:
  int_matrix f_;
  noise_model noise_;
  min_table table_;
  std::map<long, double> fnorm_memo_;
};

inline double push_norm(const int_matrix& f, const noise_model& noise, long n) {
  push_norm_curve curve(f, noise);
  return curve.log_push_norm(n);
}

// Scan the curve and assemble the report. With forced_stop > 0 the scan runs
// to exactly that n (rate fits); otherwise it stops once the norm has decayed
// below 1, fallen for `window` consecutive steps, and the analytic envelope
// -eps M(n) + n ln rho_F is itself decreasing. Fast-dynamo curves grow
// forever and exit through the cap with scan_capped set.
inline dynamo_report dynamo_scan(const int_matrix& f, const noise_model& noise,
                                 long forced_stop = 0, long window = 5, long cap = 2000000) {
  push_norm_curve curve(f, noise);
  double log_rho = std::log(analyze(f).spectral_radius);

  dynamo_report rep;
  rep.entries.push_back({0, 0.0});
  rep.n_p = 0;
  rep.peak_log_norm = 0.0;

  long decreasing = 0;
  double prev = 0.0;
  long n = 0;
  while (true) {
    ++n;
    if (forced_stop > 0 && n > forced_stop) break;
    double v = curve.log_push_norm(n);
    rep.entries.push_back({n, v});
    if (v > rep.peak_log_norm) {
      rep.peak_log_norm = v;
      rep.n_p = n;
    }
    if (v > 1.0) rep.n_th = n;
    decreasing = v < prev ? decreasing + 1 : 0;
    prev = v;
    if (forced_stop == 0 && decreasing >= window && v < 0.0 && n >= 10) {
      double dm = curve.damping_table().value(n).value - curve.damping_table().value(n - 1).value;
      if (noise.epsilon * dm > log_rho) break;
    }
    if (n >= cap) {
      rep.scan_capped = true;
      break;
    }
  }

  // growth rate: least-squares slope of the last half of the curve
  std::vector<std::pair<double, double>> pts;
  size_t lo = rep.entries.size() / 2;
  for (size_t i = lo; i < rep.entries.size(); ++i)
    pts.emplace_back(static_cast<double>(rep.entries[i].n), rep.entries[i].log_push_norm);
  rep.r_dyn = detail::least_squares(pts).slope;
  rep.r_dyn_divergent = is_ergodic(f);

  if (rep.r_dyn_divergent)
    rep.classification = dynamo_class::anti_dynamo;
  else if (rep.r_dyn > 1e-6)
    rep.classification = dynamo_class::fast_dynamo;
  else if (rep.r_dyn < -1e-6)
    rep.classification = dynamo_class::anti_dynamo;
  else
    rep.classification = dynamo_class::slow_dynamo;
  return rep;
}

struct dynamo_rate_result {
  double rate = 0.0;
  bool divergent = false;  // ergodic maps: no finite limit, slope keeps falling
};

// R_dyn = lim (1/n) log ||P^n||, fitted over the last half of 1..n_max.
inline dynamo_rate_result dynamo_rate(const int_matrix& f, const noise_model& noise,
                                      long n_max) {
  if (n_max < 10) throw precondition_error("dynamo_rate needs n_max >= 10");
  dynamo_report rep = dynamo_scan(f, noise, n_max);
  return {rep.r_dyn, rep.r_dyn_divergent};
}

// First n attaining the maximum of log ||P^n||. Fast-dynamo inputs have no
// peak: the scan hits the cap while still growing.
inline long peak_time(const int_matrix& f, const noise_model& noise, long window = 5,
                      long cap = 2000000) {
  dynamo_report rep = dynamo_scan(f, noise, 0, window, cap);
  if (rep.scan_capped && rep.classification == dynamo_class::fast_dynamo)
    throw no_peak_error("fast dynamo: push-forward norm grows without bound");
  return rep.n_p;
}

// Largest scanned n with ||P^n|| > e; absent when no entry ever exceeds it.
inline std::optional<long> threshold_time(const int_matrix& f, const noise_model& noise,
                                          long cap = 2000000, bool* cap_reached = nullptr) {
  dynamo_report rep = dynamo_scan(f, noise, 0, 5, cap);
  if (cap_reached) *cap_reached = rep.scan_capped;
  return rep.n_th;
}

struct gamma_fit_result {
  double gamma = 0.0;                    // slope of peak log norm vs ln(1/eps)
  std::optional<double> predicted;       // ln rho_F / (2 alpha h_hat) in the ergodic case
  std::vector<std::pair<double, double>> points;  // (eps, peak log norm)
};

// Peak-magnitude scaling ||P^{n_p}|| ~ (1/eps)^gamma. Defined for ergodic F
// and for nonergodic zero-entropy nondiagonalizable F; anything else has no
// anti-dynamo peak growth to fit.
inline gamma_fit_result peak_scaling_fit(const int_matrix& f, double alpha,
                                         const std::vector<double>& eps_grid) {
  bool ergodic = is_ergodic(f);
  bool jordan_growth = !ergodic && zero_entropy_class(f) && !is_diagonalizable(f);
  if (!ergodic && !jordan_growth)
    throw precondition_error("peak scaling requires an ergodic map or a nondiagonalizable "
                             "zero-entropy map");
  if (eps_grid.size() < 3) throw precondition_error("peak scaling needs >= 3 epsilons");

  gamma_fit_result out;
  std::vector<std::pair<double, double>> pts(eps_grid.size());
  out.points.resize(eps_grid.size());
  parallel_for(eps_grid.size(), [&](size_t i) {
    noise_model noise(eps_grid[i], alpha);
    dynamo_report rep = dynamo_scan(f, noise);
    pts[i] = {std::log(1.0 / eps_grid[i]), rep.peak_log_norm};
    out.points[i] = {eps_grid[i], rep.peak_log_norm};
  });
  out.gamma = detail::least_squares(pts).slope;
  if (ergodic) {
    auto rep = analyze(f);
    out.predicted = std::log(rep.spectral_radius) / (2.0 * alpha * rep.h_hat);
  }
  return out;
}

// CSV: columns n, log_push_norm.
inline std::string dynamo_csv(const dynamo_report& rep) {
  std::string out = "n,log_push_norm\n";
  char buf[64];
  for (const auto& e : rep.entries) {
    std::snprintf(buf, sizeof buf, "%ld,%.12g\n", e.n, e.log_push_norm);
    out += buf;
  }
  return out;
}

}  // namespace toruslab
