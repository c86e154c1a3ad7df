#pragma once

// Certified solvers for the arithmetic minimization problems
//
//   M(n)     = min_{0 != k in Z^d} sum_{l=1..n} |A^l k|^(2 alpha)   (full_sum)
//   M^(n)    = min_{0 != k}        |k|^(2 alpha) + |A^n k|^(2 alpha) (coarse)
//   M_B(n)   = inf_{0 != k}        sum_{l=1..n} |B A^l k|^(2 alpha)  (degenerate)
//
// alpha = 1 reduces to an exact shortest-vector computation on the integer
// Gram form. alpha < 1 is certified through the ellipsoid containment
//   sum_l x_l^alpha >= (sum_l x_l)^alpha  =>  k^T Q_n k <= U^(1/alpha)
// for any candidate beating the incumbent U, so a complete enumeration of
// that ellipsoid with exact per-candidate evaluation certifies the minimum.

#include <cmath>
#include <map>
#include <mutex>
#include <optional>

#include "toruslab/lattice.hpp"
#include "toruslab/spectral.hpp"

namespace toruslab {

enum class min_variant { full_sum, coarse, degenerate };

struct min_instance {
  int_matrix a;
  long n = 1;
  double alpha = 1.0;
  min_variant variant = min_variant::full_sum;
  std::optional<Eigen::MatrixXd> b;  // degenerate damping matrix

  min_instance() = default;
  min_instance(int_matrix a_, long n_, double alpha_ = 1.0,
               min_variant v = min_variant::full_sum)
      : a(std::move(a_)), n(n_), alpha(alpha_), variant(v) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw precondition_error("alpha must lie in (0, 1]");
    if (!a.is_unimodular()) throw non_unimodular_error("minimization requires |det A| = 1");
  }
};

struct min_result {
  double value = 0.0;      // objective value (see exact/value_exact for alpha = 1)
  double log_value = 0.0;  // natural log of the value
  Int value_exact;         // meaningful iff exact
  bool exact = false;      // alpha == 1 and variant != degenerate
  std::vector<Int> argmin;
  bool certified = false;
  bool infimum_zero = false;   // degenerate no-dissipation case: inf = 0, not attained
  bool budget_exceeded = false;
  double search_radius = 0.0;  // Euclidean radius of the certified/enumerated region
  std::uint64_t nodes_visited = 0;
  int_matrix reduction_transform;  // seed for the next solve along an n-ladder
};

inline constexpr std::uint64_t default_node_budget = 100000000;

namespace detail {

inline void fill_exact_result(min_result& r, const Int& v) {
  r.value_exact = v;
  r.exact = true;
  r.value = mpz_scaled_to_double(v, 0);
  r.log_value = mpz_log(v);
}

inline double ellipsoid_radius(const int_matrix& gram, const Int& bound) {
  // Euclidean radius of {k : k^T G k <= bound}: sqrt(bound / lambda_min(G)).
  Eigen::MatrixXd gd(gram.dim(), gram.dim());
  long maxbits = 0;
  for (const Int& v : gram.entries()) maxbits = std::max(maxbits, mpz_bit_length(v));
  long scale = maxbits > 500 ? maxbits - 500 : 0;
  for (int i = 0; i < gram.dim(); ++i)
    for (int j = 0; j < gram.dim(); ++j) gd(i, j) = mpz_scaled_to_double(gram.at(i, j), scale);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gd);
  double lmin = es.eigenvalues()(0);
  if (!(lmin > 0)) return 0.0;
  return std::sqrt(mpz_scaled_to_double(bound, scale) / lmin);
}

inline long double alpha_pow(long double x, double alpha) {
  if (alpha == 1.0) return x;
  if (alpha == 0.5) return sqrtl(x);
  return powl(x, static_cast<long double>(alpha));
}

// exact |A^l k|^2 trajectory accumulated in long double for the alpha < 1 paths
inline long double alpha_objective_full(const int_matrix& a, long n, double alpha,
                                        const std::vector<Int>& k) {
  std::vector<Int> v = k;
  long double acc = 0.0L;
  for (long l = 1; l <= n; ++l) {
    v = a.apply(v);
    Int norm2 = 0;
    for (const Int& x : v) norm2 += x * x;
    acc += alpha_pow(mpz_to_long_double(norm2), alpha);
  }
  return acc;
}

inline long double alpha_objective_coarse(const int_matrix& an, double alpha,
                                          const std::vector<Int>& k) {
  Int n0 = 0, n1 = 0;
  std::vector<Int> v = an.apply(k);
  for (const Int& x : k) n0 += x * x;
  for (const Int& x : v) n1 += x * x;
  return alpha_pow(mpz_to_long_double(n0), alpha) + alpha_pow(mpz_to_long_double(n1), alpha);
}

inline long double alpha_objective_degenerate(const int_matrix& a, const Eigen::MatrixXd& b,
                                              long n, double alpha, const std::vector<Int>& k) {
  int d = a.dim();
  std::vector<Int> v = k;
  long double acc = 0.0L;
  for (long l = 1; l <= n; ++l) {
    v = a.apply(v);
    // |B v|^2 in long double; B is a real matrix, exactness ends here
    long double norm2 = 0.0L;
    for (int i = 0; i < d; ++i) {
      long double row = 0.0L;
      for (int j = 0; j < d; ++j)
        row += static_cast<long double>(b(i, j)) * mpz_to_long_double(v[static_cast<size_t>(j)]);
      norm2 += row * row;
    }
    acc += alpha_pow(norm2, alpha);
  }
  return acc;
}

inline bool improves(long double cand, long double best) { return cand < best * (1.0L - 1e-14L); }
inline bool ties(long double cand, long double best) {
  return std::abs(cand - best) <= 1e-12L * std::max<long double>(best, 1.0L);
}

struct float_min_tracker {
  long double best = 0.0L;
  bool has = false;
  std::vector<std::vector<Int>> tie_set;

  void offer(long double val, std::vector<Int> k) {
    canonicalize_sign(k);
    if (!has || improves(val, best)) {
      best = val;
      has = true;
      tie_set.clear();
      tie_set.push_back(std::move(k));
    } else if (ties(val, best)) {
      tie_set.push_back(std::move(k));
    }
  }

  std::vector<Int> canonical_argmin() const {
    std::vector<Int> arg = tie_set.front();
    for (const auto& t : tie_set)
      if (lex_less(t, arg)) arg = t;
    return arg;
  }
};

// shared tail of the alpha < 1 solvers: enumerate the containment ellipsoid
// k^T gram k <= ceil(U^(1/alpha)) and evaluate the float objective exactly
template <class Objective>
inline min_result alpha_ellipsoid_minimize(const int_matrix& gram, double alpha,
                                           const std::vector<std::vector<Int>>& seeds,
                                           Objective&& objective, std::uint64_t budget) {
  float_min_tracker tracker;
  for (const auto& s : seeds) tracker.offer(objective(s), s);

  long double u = tracker.best;
  long double bound_ld = powl(u * (1.0L + 1e-12L), 1.0L / static_cast<long double>(alpha));
  Int bound;
  mpz_set_d(bound.get_mpz_t(), static_cast<double>(bound_ld * (1.0 + 1e-9)));
  bound += 1;

  std::uint64_t nodes = 0;
  bool complete = enumerate_in_ellipsoid(
      gram, bound, budget, nodes,
      [&](const std::vector<Int>& k, const Int&) { tracker.offer(objective(k), k); });

  min_result r;
  r.value = static_cast<double>(tracker.best);
  r.log_value = static_cast<double>(logl(tracker.best));
  r.argmin = tracker.canonical_argmin();
  r.certified = complete;
  r.budget_exceeded = !complete;
  r.nodes_visited = nodes;
  r.search_radius = ellipsoid_radius(gram, bound);
  return r;
}

inline std::vector<std::vector<Int>> unit_vector_seeds(int d) {
  std::vector<std::vector<Int>> seeds;
  for (int i = 0; i < d; ++i) {
    std::vector<Int> e(static_cast<size_t>(d), Int(0));
    e[static_cast<size_t>(i)] = 1;
    seeds.push_back(std::move(e));
  }
  return seeds;
}

}  // namespace detail

namespace detail {

// body of min_sum with the Gram form supplied by the caller (the memo table
// maintains it incrementally; one-off calls build it fresh)
min_result min_sum_with_gram(const min_instance& inst, const int_matrix& q, std::uint64_t budget,
                             const int_matrix* seed_transform);

}  // namespace detail

// M(n) = min over nonzero integer k of sum_{l=1..n} |A^l k|^(2 alpha).
inline min_result min_sum(const min_instance& inst, std::uint64_t budget = default_node_budget,
                          const int_matrix* seed_transform = nullptr) {
  if (inst.variant != min_variant::full_sum) throw precondition_error("min_sum: wrong variant");
  if (inst.n < 1) throw precondition_error("min_sum requires n >= 1");
  return detail::min_sum_with_gram(inst, gram_form(inst.a, inst.n), budget, seed_transform);
}

inline min_result detail::min_sum_with_gram(const min_instance& inst, const int_matrix& q,
                                            std::uint64_t budget,
                                            const int_matrix* seed_transform) {
  svp_result sv = shortest_vector(q, budget, seed_transform);

  if (inst.alpha == 1.0) {
    min_result r;
    detail::fill_exact_result(r, sv.value);
    r.argmin = sv.argmin;
    r.certified = sv.complete;
    r.budget_exceeded = !sv.complete;
    r.nodes_visited = sv.nodes;
    r.search_radius = detail::ellipsoid_radius(q, sv.value);
    r.reduction_transform = sv.transform;
    return r;
  }

  auto seeds = detail::unit_vector_seeds(inst.a.dim());
  seeds.push_back(sv.argmin);
  min_result r = detail::alpha_ellipsoid_minimize(
      q, inst.alpha, seeds,
      [&](const std::vector<Int>& k) {
        return detail::alpha_objective_full(inst.a, inst.n, inst.alpha, k);
      },
      budget);
  r.certified = r.certified && sv.complete;
  r.nodes_visited += sv.nodes;
  r.reduction_transform = sv.transform;
  return r;
}

namespace detail {

min_result min_coarse_with_power(const min_instance& inst, const int_matrix& an,
                                 std::uint64_t budget, const int_matrix* seed_transform);

}  // namespace detail

// Coarse-grained minimum: |k|^(2 alpha) + |A^n k|^(2 alpha); n = 0 is allowed
// (both noise applications collapse onto the same state).
inline min_result min_coarse(const min_instance& inst, std::uint64_t budget = default_node_budget,
                             const int_matrix* seed_transform = nullptr) {
  if (inst.variant != min_variant::coarse) throw precondition_error("min_coarse: wrong variant");
  if (inst.n < 0) throw precondition_error("min_coarse requires n >= 0");
  return detail::min_coarse_with_power(inst, mat_pow(inst.a, inst.n), budget, seed_transform);
}

inline min_result detail::min_coarse_with_power(const min_instance& inst, const int_matrix& an,
                                                std::uint64_t budget,
                                                const int_matrix* seed_transform) {
  int_matrix q = an.transpose() * an + int_matrix::identity(inst.a.dim());

  if (inst.alpha == 1.0) {
    svp_result sv = shortest_vector(q, budget, seed_transform);
    min_result r;
    detail::fill_exact_result(r, sv.value);
    r.argmin = sv.argmin;
    r.certified = sv.complete;
    r.budget_exceeded = !sv.complete;
    r.nodes_visited = sv.nodes;
    r.search_radius = detail::ellipsoid_radius(q, sv.value);
    r.reduction_transform = sv.transform;
    return r;
  }

  svp_result sv = shortest_vector(q, budget, seed_transform);
  auto seeds = detail::unit_vector_seeds(inst.a.dim());
  seeds.push_back(sv.argmin);
  min_result r = detail::alpha_ellipsoid_minimize(
      q, inst.alpha, seeds,
      [&](const std::vector<Int>& k) {
        return detail::alpha_objective_coarse(an, inst.alpha, k);
      },
      budget);
  r.certified = r.certified && sv.complete;
  r.nodes_visited += sv.nodes;
  r.reduction_transform = sv.transform;
  return r;
}

// Degenerate-noise minimum. When the spanning test reports no dissipation the
// infimum is 0 (not attained); the result then carries the minimum over a
// bounded ball with certified = false and the infimum_zero flag set.
inline min_result min_degenerate(const min_instance& inst,
                                 std::uint64_t budget = default_node_budget,
                                 long no_dissipation_ball = 30) {
  if (inst.variant != min_variant::degenerate || !inst.b)
    throw precondition_error("min_degenerate: degenerate variant with B required");
  if (inst.n < 1) throw precondition_error("min_degenerate requires n >= 1");
  const Eigen::MatrixXd& b = *inst.b;
  int d = inst.a.dim();
  degeneracy mode = degeneracy_case(inst.a, b);

  auto objective = [&](const std::vector<Int>& k) {
    return detail::alpha_objective_degenerate(inst.a, b, inst.n, inst.alpha, k);
  };

  auto ball_minimum = [&](bool infimum_zero) {
    detail::float_min_tracker tracker;
    Int bound = Int(no_dissipation_ball) * Int(no_dissipation_ball);
    std::uint64_t nodes = 0;
    enumerate_in_ellipsoid(int_matrix::identity(d), bound, budget, nodes,
                           [&](const std::vector<Int>& k, const Int&) {
                             tracker.offer(objective(k), k);
                           });
    min_result r;
    r.value = static_cast<double>(tracker.best);
    r.log_value = static_cast<double>(logl(std::max<long double>(tracker.best, 1e-300L)));
    r.argmin = tracker.canonical_argmin();
    r.certified = false;
    r.infimum_zero = infimum_zero;
    r.nodes_visited = nodes;
    r.search_radius = static_cast<double>(no_dissipation_ball);
    return r;
  };

  if (mode == degeneracy::no_dissipation) return ball_minimum(true);

  auto certified_ellipsoid = [&](const int_matrix& form, double sigma_min) {
    auto seeds = detail::unit_vector_seeds(d);
    {
      min_instance plain(inst.a, inst.n, 1.0, min_variant::full_sum);
      seeds.push_back(min_sum(plain, budget).argmin);
    }
    detail::float_min_tracker tracker;
    for (const auto& s : seeds) tracker.offer(objective(s), s);
    long double u = tracker.best;
    long double bound_ld =
        powl(u * (1.0L + 1e-12L), 1.0L / static_cast<long double>(inst.alpha)) /
        (static_cast<long double>(sigma_min) * sigma_min * (1.0L - 1e-8L));
    Int bound;
    mpz_set_d(bound.get_mpz_t(), static_cast<double>(bound_ld * (1.0 + 1e-9)));
    bound += 1;

    std::uint64_t nodes = 0;
    bool complete = enumerate_in_ellipsoid(form, bound, budget, nodes,
                                           [&](const std::vector<Int>& k, const Int&) {
                                             tracker.offer(objective(k), k);
                                           });
    min_result r;
    r.value = static_cast<double>(tracker.best);
    r.log_value = static_cast<double>(logl(tracker.best));
    r.argmin = tracker.canonical_argmin();
    r.certified = complete;
    r.budget_exceeded = !complete;
    r.nodes_visited = nodes;
    r.search_radius = detail::ellipsoid_radius(form, bound);
    return r;
  };

  if (inst.n < d) {
    // One incomplete window: objective >= sigma_min(S_n)^(2a) |k|^(2a) with
    // S_n = [BA; ...; BA^n]. A singular partial stack leaves no certificate
    // (the minimum can genuinely sit at 0 along an integer kernel vector).
    Eigen::MatrixXd partial(d * static_cast<int>(inst.n), d);
    int_matrix ap = int_matrix::identity(d);
    for (int l = 0; l < static_cast<int>(inst.n); ++l) {
      ap = ap * inst.a;
      partial.block(l * d, 0, d, d) = b * to_eigen(ap);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> psvd(partial);
    double smin = psvd.singularValues()(psvd.singularValues().size() - 1);
    double smax = psvd.singularValues()(0);
    if (!(smin > 1e-10 * smax)) return ball_minimum(false);
    return certified_ellipsoid(int_matrix::identity(d), smin);
  }

  // Effective case, window bound: each block of d consecutive terms obeys
  //   sum_{h=1..d} |B A^(wd+h) k|^(2a) >= sigma_min^(2a) |A^(wd) k|^(2a)
  // with sigma_min of the stacked map S = [BA; ...; BA^d]. Summing the
  // W = floor(n/d) complete windows and using subadditivity of x^a,
  //   objective(k) >= sigma_min^(2a) (k^T Q' k)^a,
  // Q' = sum_{w=0..W-1} (A^(wd))^T A^(wd) exact, so any candidate beating U
  // lies in the ellipsoid k^T Q' k <= U^(1/a) / sigma_min^2.
  Eigen::MatrixXd stacked(d * d, d);
  int_matrix apow = int_matrix::identity(d);
  for (int l = 0; l < d; ++l) {
    apow = apow * inst.a;
    stacked.block(l * d, 0, d, d) = b * to_eigen(apow);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  double sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
  double sigma_max = svd.singularValues()(0);
  if (!(sigma_min > 1e-10 * sigma_max)) return ball_minimum(false);

  long windows = inst.n / d;
  int_matrix window_form(d);
  int_matrix ad = mat_pow(inst.a, d);
  int_matrix awd = int_matrix::identity(d);
  for (long w = 0; w < windows; ++w) {
    window_form = window_form + awd.transpose() * awd;
    awd = awd * ad;
  }
  return certified_ellipsoid(window_form, sigma_min);
}

// Dispatch on the instance variant.
inline min_result solve_min(const min_instance& inst, std::uint64_t budget = default_node_budget,
                            const int_matrix* seed_transform = nullptr) {
  switch (inst.variant) {
    case min_variant::full_sum:
      return min_sum(inst, budget, seed_transform);
    case min_variant::coarse:
      return min_coarse(inst, budget, seed_transform);
    case min_variant::degenerate:
      return min_degenerate(inst, budget);
  }
  throw error("unreachable");
}

// ---------------------------------------------------------------------------
// Independent exhaustive oracle: every nonzero |k|_inf <= R, exact objective.
// Machine-word arithmetic (with an a-priori overflow bound on the orbit
// components) covers the common regimes; anything larger falls back to mpz.

inline min_result brute_force_oracle(const min_instance& inst, long R, long radius_cap = 0) {
  int d = inst.a.dim();
  if (radius_cap == 0) radius_cap = d <= 3 ? 50 : 10;
  if (R < 1 || R > radius_cap)
    throw precondition_error("oracle radius " + std::to_string(R) + " outside cap " +
                             std::to_string(radius_cap));
  if (inst.variant == min_variant::degenerate && !inst.b)
    throw precondition_error("degenerate oracle requires B");

  int_matrix an = (inst.variant == min_variant::coarse) ? mat_pow(inst.a, inst.n) : int_matrix(d);

  // orbit component bound: d * max|A^l entry| * R over the l actually used
  Int max_entry = 1;
  if (inst.variant == min_variant::coarse) {
    for (const Int& v : an.entries()) {
      Int av = abs(v);
      if (av > max_entry) max_entry = av;
    }
  } else {
    int_matrix p = int_matrix::identity(d);
    for (long l = 1; l <= inst.n; ++l) {
      p = p * inst.a;
      for (const Int& v : p.entries()) {
        Int av = abs(v);
        if (av > max_entry) max_entry = av;
      }
    }
  }
  Int comp_bound = max_entry * R * d;
  bool fast = comp_bound < Int("1500000000000000000");  // 1.5e18, squares fit __int128
  if (fast && static_cast<double>(inst.n) * d * mpz_scaled_to_double(comp_bound, 0) *
                      mpz_scaled_to_double(comp_bound, 0) >
                  1e37)
    fast = false;

  std::vector<long> a_fast, an_fast;
  std::vector<double> b_fast;
  if (fast) {
    for (const Int& v : inst.a.entries()) a_fast.push_back(v.get_si());
    if (inst.variant == min_variant::coarse)
      for (const Int& v : an.entries()) an_fast.push_back(v.get_si());
    if (inst.b)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) b_fast.push_back((*inst.b)(i, j));
  }

  bool exact_path = inst.alpha == 1.0 && inst.variant != min_variant::degenerate;
  detail::float_min_tracker tracker;
  Int best_exact = 0;
  std::vector<std::vector<Int>> exact_ties;

  std::vector<long> x(static_cast<size_t>(d), -R);
  std::vector<long> v_fast(static_cast<size_t>(d)), w_fast(static_cast<size_t>(d));
  std::uint64_t visited = 0;
  unsigned __int128 best_total = ~static_cast<unsigned __int128>(0);

  auto offer_exact = [&](const Int& val, const std::vector<long>& coords) {
    if (best_exact != 0 && val > best_exact) return;
    std::vector<Int> c(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) c[static_cast<size_t>(i)] = coords[static_cast<size_t>(i)];
    canonicalize_sign(c);
    if (best_exact == 0 || val < best_exact) {
      best_exact = val;
      exact_ties.clear();
    }
    exact_ties.push_back(std::move(c));
  };

  while (true) {
    bool nonzero = false;
    for (long v : x)
      if (v) nonzero = true;
    if (nonzero) {
      ++visited;
      if (fast) {
        unsigned __int128 total = 0;
        long double fval = 0.0L;
        if (inst.variant == min_variant::coarse) {
          unsigned __int128 n0 = 0, n1 = 0;
          for (int i = 0; i < d; ++i) {
            n0 += static_cast<unsigned __int128>(x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)]);
            long acc = 0;
            for (int j = 0; j < d; ++j)
              acc += an_fast[static_cast<size_t>(i * d + j)] * x[static_cast<size_t>(j)];
            n1 += static_cast<unsigned __int128>(acc) * static_cast<unsigned __int128>(acc);
          }
          if (inst.alpha == 1.0) {
            total = n0 + n1;
          } else {
            fval = detail::alpha_pow(static_cast<long double>(n0), inst.alpha) +
                   detail::alpha_pow(static_cast<long double>(n1), inst.alpha);
          }
        } else {
          v_fast.assign(x.begin(), x.end());
          for (long l = 1; l <= inst.n; ++l) {
            for (int i = 0; i < d; ++i) {
              long acc = 0;
              for (int j = 0; j < d; ++j)
                acc += a_fast[static_cast<size_t>(i * d + j)] * v_fast[static_cast<size_t>(j)];
              w_fast[static_cast<size_t>(i)] = acc;
            }
            std::swap(v_fast, w_fast);
            if (inst.variant == min_variant::degenerate) {
              long double norm2 = 0.0L;
              for (int i = 0; i < d; ++i) {
                long double row = 0.0L;
                for (int j = 0; j < d; ++j)
                  row += static_cast<long double>(b_fast[static_cast<size_t>(i * d + j)]) *
                         static_cast<long double>(v_fast[static_cast<size_t>(j)]);
                norm2 += row * row;
              }
              fval += detail::alpha_pow(norm2, inst.alpha);
            } else {
              unsigned __int128 norm2 = 0;
              for (int i = 0; i < d; ++i) {
                long c = v_fast[static_cast<size_t>(i)];
                norm2 += static_cast<unsigned __int128>(c) * static_cast<unsigned __int128>(c);
              }
              if (inst.alpha == 1.0)
                total += norm2;
              else
                fval += detail::alpha_pow(static_cast<long double>(norm2), inst.alpha);
            }
          }
        }
        if (exact_path) {
          if (total <= best_total) {
            best_total = total;
            Int hi(static_cast<unsigned long>(total >> 64));
            Int lo(static_cast<unsigned long>(total & 0xffffffffffffffffULL));
            offer_exact((hi << 64) + lo, x);
          }
        } else if (!tracker.has || fval <= tracker.best * (1.0L + 1e-12L)) {
          std::vector<Int> k(static_cast<size_t>(d));
          for (int i = 0; i < d; ++i) k[static_cast<size_t>(i)] = x[static_cast<size_t>(i)];
          tracker.offer(fval, k);
        }
      } else {
        std::vector<Int> k(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) k[static_cast<size_t>(i)] = x[static_cast<size_t>(i)];
        if (exact_path) {
          Int val = 0;
          if (inst.variant == min_variant::full_sum) {
            std::vector<Int> v = k;
            for (long l = 1; l <= inst.n; ++l) {
              v = inst.a.apply(v);
              for (const Int& c : v) val += c * c;
            }
          } else {  // coarse
            for (const Int& c : k) val += c * c;
            std::vector<Int> v = an.apply(k);
            for (const Int& c : v) val += c * c;
          }
          offer_exact(val, x);
        } else {
          long double val;
          switch (inst.variant) {
            case min_variant::full_sum:
              val = detail::alpha_objective_full(inst.a, inst.n, inst.alpha, k);
              break;
            case min_variant::coarse:
              val = detail::alpha_objective_coarse(an, inst.alpha, k);
              break;
            default:
              val = detail::alpha_objective_degenerate(inst.a, *inst.b, inst.n, inst.alpha, k);
              break;
          }
          tracker.offer(val, k);
        }
      }
    }
    int pos = 0;
    while (pos < d && x[static_cast<size_t>(pos)] == R) {
      x[static_cast<size_t>(pos)] = -R;
      ++pos;
    }
    if (pos == d) break;
    ++x[static_cast<size_t>(pos)];
  }

  min_result r;
  r.certified = false;  // radius-limited by construction
  r.search_radius = static_cast<double>(R);
  r.nodes_visited = visited;
  if (exact_path) {
    detail::fill_exact_result(r, best_exact);
    r.argmin = exact_ties.front();
    for (const auto& t : exact_ties)
      if (lex_less(t, r.argmin)) r.argmin = t;
  } else {
    r.value = static_cast<double>(tracker.best);
    r.log_value = static_cast<double>(logl(std::max<long double>(tracker.best, 1e-300L)));
    r.argmin = tracker.canonical_argmin();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Memoized M(n) ladder shared by dissipation/dynamo sweeps. Thread-safe:
// one mutex, computation happens under it (readers of distinct n typically
// hit the memo).

struct min_curve {
  std::map<long, min_result> entries;
  double alpha = 1.0;
  min_variant variant = min_variant::full_sum;
};

class min_table {
 public:
  min_table(int_matrix a, double alpha, min_variant variant = min_variant::full_sum,
            std::optional<Eigen::MatrixXd> b = std::nullopt,
            std::uint64_t budget = default_node_budget)
      : proto_(std::move(a), 1, alpha, variant), budget_(budget) {
    proto_.b = std::move(b);
    if (variant == min_variant::degenerate && !proto_.b)
      throw precondition_error("degenerate table requires B");
  }

  const int_matrix& map_matrix() const { return proto_.a; }
  double alpha() const { return proto_.alpha; }
  min_variant variant() const { return proto_.variant; }

  min_result value(long n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(n);
    if (it != memo_.end()) return it->second;
    min_instance inst = proto_;
    inst.n = n;
    const int_matrix* seed = nullptr;
    if (!memo_.empty() && proto_.variant != min_variant::degenerate) {
      // warm-start the reduction from the nearest computed n below
      auto below = memo_.lower_bound(n);
      if (below != memo_.begin()) {
        --below;
        if (below->second.reduction_transform.dim() == proto_.a.dim())
          seed = &below->second.reduction_transform;
      }
    }
    min_result r;
    switch (proto_.variant) {
      case min_variant::full_sum:
        r = detail::min_sum_with_gram(inst, gram_ladder(n), budget_, seed);
        break;
      case min_variant::coarse:
        r = detail::min_coarse_with_power(inst, power_ladder(n), budget_, seed);
        break;
      case min_variant::degenerate:
        r = min_degenerate(inst, budget_);
        break;
    }
    auto [pos, inserted] = memo_.emplace(n, std::move(r));
    (void)inserted;
    return pos->second;
  }

  double log_value(long n) { return value(n).log_value; }

  min_curve curve(long n_max) {
    min_curve c;
    c.alpha = proto_.alpha;
    c.variant = proto_.variant;
    long n0 = proto_.variant == min_variant::coarse ? 0 : 1;
    for (long n = n0; n <= n_max; ++n) c.entries.emplace(n, value(n));
    return c;
  }

 private:
  // Incremental Gram Q_n = Q_{n-1} + (A^n)^T A^n for sequential access;
  // distant jumps (bisection on simple-class maps reaches n ~ 1/eps) restart
  // from the O(log n) doubling form instead of stepping.
  const int_matrix& gram_ladder(long n) {
    if (n < 1) throw precondition_error("gram ladder requires n >= 1");
    if (ladder_n_ == 0 || ladder_n_ > n || n - ladder_n_ > 64) {
      auto [q, p] = detail::gram_form_with_power(proto_.a, n);
      ladder_gram_ = std::move(q);
      ladder_pow_ = std::move(p);
      ladder_n_ = n;
    }
    while (ladder_n_ < n) {
      ladder_pow_ = ladder_pow_ * proto_.a;
      ladder_gram_ = ladder_gram_ + ladder_pow_.transpose() * ladder_pow_;
      ++ladder_n_;
    }
    return ladder_gram_;
  }

  const int_matrix& power_ladder(long n) {
    if (ladder_n_ == 0 || ladder_n_ > n || n - ladder_n_ > 64) {
      ladder_pow_ = mat_pow(proto_.a, n);
      ladder_n_ = n;
    }
    while (ladder_n_ < n) {
      ladder_pow_ = ladder_pow_ * proto_.a;
      ++ladder_n_;
    }
    return ladder_pow_;
  }

  min_instance proto_;
  std::uint64_t budget_;
  std::map<long, min_result> memo_;
  long ladder_n_ = 0;
  int_matrix ladder_pow_;
  int_matrix ladder_gram_;
  std::mutex mu_;
};

// ---------------------------------------------------------------------------
// Growth-rate fit: least-squares slope of ln M(n) against n over the last
// half of the curve, divided by 2 alpha. Sub-exponential curves (nonergodic
// maps) are reported with the linear_growth flag instead.

struct growth_fit {
  double rate = 0.0;         // slope / (2 alpha): empirical dim-averaged entropy
  bool linear_growth = false;
  double residual = 0.0;     // rms residual of the chosen model
};

inline growth_fit growth_rate_fit(const min_curve& curve) {
  std::vector<std::pair<long, double>> pts;
  for (const auto& [n, r] : curve.entries)
    if (r.certified && n >= 1) pts.emplace_back(n, r.log_value);
  if (pts.size() < 6) throw insufficient_data_error("growth fit needs >= 6 certified entries");
  size_t lo = pts.size() / 2;
  std::vector<std::pair<long, double>> tail(pts.begin() + static_cast<long>(lo), pts.end());

  auto lsq = [](const std::vector<std::pair<double, double>>& xy) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : xy) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double n = static_cast<double>(xy.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double icept = (sy - slope * sx) / n;
    double res = 0;
    for (auto [x, y] : xy) {
      double e = y - slope * x - icept;
      res += e * e;
    }
    return std::tuple<double, double, double>(slope, icept, std::sqrt(res / n));
  };

  std::vector<std::pair<double, double>> logpts, linpts;
  const auto& full = curve.entries;
  for (const auto& [n, r] : tail) {
    logpts.emplace_back(static_cast<double>(n), r);
    linpts.emplace_back(static_cast<double>(n), full.at(n).value);
  }
  auto [slope_log, i0, res_log] = lsq(logpts);
  auto [slope_lin, i1, res_lin] = lsq(linpts);
  (void)i0;
  (void)i1;

  // relative rms of the linear model vs the log (exponential) model
  double scale = std::abs(linpts.back().second) + 1e-30;
  bool linear = res_lin / scale < res_log;

  growth_fit g;
  g.rate = slope_log / (2.0 * curve.alpha);
  g.linear_growth = linear;
  g.residual = linear ? res_lin / scale : res_log;
  return g;
}

// ---------------------------------------------------------------------------
// CSV: columns n, value, argmin (space-separated), certified, nodes.

inline std::string min_curve_csv(const min_curve& curve) {
  std::string out = "n,value,argmin,certified,nodes\n";
  char buf[64];
  for (const auto& [n, r] : curve.entries) {
    out += std::to_string(n) + ",";
    if (r.exact) {
      out += r.value_exact.get_str();
    } else {
      std::snprintf(buf, sizeof buf, "%.12g", r.value);
      out += buf;
    }
    out += ",";
    for (size_t i = 0; i < r.argmin.size(); ++i) {
      if (i) out += " ";
      out += r.argmin[i].get_str();
    }
    out += ",";
    out += r.certified ? "true" : "false";
    out += "," + std::to_string(r.nodes_visited) + "\n";
  }
  return out;
}

}  // namespace toruslab
