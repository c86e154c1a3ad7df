#pragma once

// Truncated Fourier-mode simulator of T = G_{eps,alpha} U_F for toral
// automorphisms, affine maps, and degenerate noise. The mode action is a
// permutation-with-damping: coefficient at k moves to A k (A = F^T) with
// weight exp(-eps |A k|^(2 alpha)) exp(2 pi i k.c). Modes mapped outside the
// box are discarded, so the truncated operator is a compression of the true
// one and every norm estimate is a certified lower bound.

#include <unsupported/Eigen/FFT>

#include <complex>
#include <random>

#include "toruslab/arithmin.hpp"
#include "toruslab/dissipation.hpp"

namespace toruslab {

struct mode_box {
  int dim = 2;
  int cutoff = 64;  // K: modes are all k != 0 with |k|_inf <= K

  long side() const { return 2L * cutoff + 1; }
  std::size_t grid_size() const {
    std::size_t s = 1;
    for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(side());
    return s;
  }
  std::size_t mode_count() const { return grid_size() - 1; }

  std::size_t index(const std::vector<int>& k) const {
    std::size_t idx = 0;
    for (int i = dim - 1; i >= 0; --i)
      idx = idx * static_cast<std::size_t>(side()) +
            static_cast<std::size_t>(k[static_cast<size_t>(i)] + cutoff);
    return idx;
  }
  std::size_t origin() const { return index(std::vector<int>(static_cast<size_t>(dim), 0)); }

  std::vector<int> mode_at(std::size_t idx) const {
    std::vector<int> k(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      k[static_cast<size_t>(i)] = static_cast<int>(idx % static_cast<std::size_t>(side())) - cutoff;
      idx /= static_cast<std::size_t>(side());
    }
    return k;
  }

  bool contains(const std::vector<Int>& k) const {
    for (const Int& v : k)
      if (abs(v) > cutoff) return false;
    return true;
  }
};

using mode_state = std::vector<std::complex<double>>;  // full grid, origin slot unused

// One noisy Koopman step in mode space, with the transition table
// precomputed: target index (or drop) and complex weight per mode.
class truncated_operator {
 public:
  truncated_operator(toral_map map, noise_model noise, mode_box box)
      : map_(std::move(map)), noise_(noise), box_(box) {
    noise_.validate();
    if (!map_.linear.is_unimodular())
      throw non_unimodular_error("truncated operator requires |det F| = 1");
    if (map_.linear.dim() != box_.dim) throw precondition_error("box dimension mismatch");
    build_table();
  }

  const mode_box& box() const { return box_; }
  const toral_map& map() const { return map_; }
  const noise_model& noise() const { return noise_; }
  const int_matrix& koopman_matrix() const { return a_; }

  // forward step; returns the dropped L2 mass (squared norm of discarded content)
  double apply(mode_state& state) const {
    mode_state out(state.size(), {0.0, 0.0});
    double dropped = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (state[i] == std::complex<double>(0.0, 0.0)) continue;
      std::complex<double> moved = state[i] * weight_[i];
      if (target_[i] < 0)
        dropped += std::norm(moved);
      else
        out[static_cast<std::size_t>(target_[i])] += moved;
    }
    state = std::move(out);
    return dropped;
  }

  void apply_adjoint(mode_state& state) const {
    mode_state out(state.size(), {0.0, 0.0});
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (target_[i] < 0) continue;
      out[i] = std::conj(weight_[i]) * state[static_cast<std::size_t>(target_[i])];
    }
    state = std::move(out);
  }

  // orbit of one mode under the index map, inside-the-box check only
  bool orbit_stays(const std::vector<Int>& k0, long n) const {
    std::vector<Int> k = k0;
    if (!box_.contains(k)) return false;
    for (long l = 1; l <= n; ++l) {
      k = a_.apply(k);
      if (!box_.contains(k)) return false;
    }
    return true;
  }

 private:
  void build_table() {
    a_ = map_.linear.transpose();
    const std::size_t total = box_.grid_size();
    target_.assign(total, -1);
    weight_.assign(total, {0.0, 0.0});
    const bool degenerate = noise_.degeneracy.has_value();
    const Eigen::MatrixXd* b = degenerate ? &*noise_.degeneracy : nullptr;

    std::vector<double> shift_real;
    if (map_.has_shift()) {
      if (map_.shift_exact()) {
        for (const Rat& q : std::get<rat_vector>(map_.shift).v) shift_real.push_back(q.get_d());
      } else {
        shift_real = std::get<std::vector<double>>(map_.shift);
      }
      if (static_cast<int>(shift_real.size()) != box_.dim)
        throw precondition_error("shift dimension mismatch");
    }

    std::vector<int> ak(static_cast<size_t>(box_.dim));
    for (std::size_t i = 0; i < total; ++i) {
      if (i == box_.origin()) continue;
      std::vector<int> k = box_.mode_at(i);
      bool in_box = true;
      double damp_arg = 0.0;  // |A k|^2 or |B A k|^2
      for (int r = 0; r < box_.dim; ++r) {
        long acc = 0;
        for (int c = 0; c < box_.dim; ++c)
          acc += a_.at(r, c).get_si() * k[static_cast<size_t>(c)];
        if (std::abs(acc) > box_.cutoff) in_box = false;
        ak[static_cast<size_t>(r)] = static_cast<int>(std::max<long>(
            std::min<long>(acc, box_.cutoff), -box_.cutoff));  // clamped; only used if in_box
        if (!degenerate) damp_arg += static_cast<double>(acc) * static_cast<double>(acc);
      }
      if (degenerate) {
        // recompute A k unclamped for |B A k|
        Eigen::VectorXd akv(box_.dim);
        for (int r = 0; r < box_.dim; ++r) {
          long acc = 0;
          for (int c = 0; c < box_.dim; ++c)
            acc += a_.at(r, c).get_si() * k[static_cast<size_t>(c)];
          akv(r) = static_cast<double>(acc);
        }
        damp_arg = (*b * akv).squaredNorm();
      }
      double damping = std::exp(-noise_.epsilon *
                                static_cast<double>(detail::alpha_pow(damp_arg, noise_.alpha)));
      std::complex<double> w = damping;
      if (!shift_real.empty()) {
        double phase = 0.0;
        for (int r = 0; r < box_.dim; ++r)
          phase += shift_real[static_cast<size_t>(r)] * k[static_cast<size_t>(r)];
        w *= std::polar(1.0, 2.0 * M_PI * phase);
      }
      weight_[i] = w;
      target_[i] = in_box ? static_cast<long>(box_.index(ak)) : -1;
    }
  }

  toral_map map_;
  noise_model noise_;
  mode_box box_;
  int_matrix a_;
  std::vector<long> target_;
  std::vector<std::complex<double>> weight_;
};

// ---------------------------------------------------------------------------
// Operator norm of the truncated n-step operator.

struct norm_estimate_result {
  double estimate = 0.0;  // largest singular value of the truncated T^n
  double analytic = 0.0;  // exp(-eps M(n)) from the certified minimum
  bool valid = false;     // the certified minimizer orbit stayed inside the box
  bool infimum_zero = false;
};

inline norm_estimate_result norm_estimate(const truncated_operator& op, long n,
                                          double rel_tol = 1e-10, long max_iter = 2000) {
  if (n < 1) throw precondition_error("norm_estimate requires n >= 1");
  min_table table(op.koopman_matrix(), op.noise().alpha,
                  op.noise().degeneracy ? min_variant::degenerate : min_variant::full_sum,
                  op.noise().degeneracy);
  min_result m = table.value(n);

  norm_estimate_result out;
  out.infimum_zero = m.infimum_zero;
  out.analytic = m.infimum_zero ? 1.0 : std::exp(-op.noise().epsilon * m.value);
  out.valid = !m.infimum_zero && m.certified && op.orbit_stays(m.argmin, n);

  // power iteration on (T*)^n T^n, seeded at the analytic minimizer mode
  const mode_box& box = op.box();
  mode_state x(box.grid_size(), {0.0, 0.0});
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1e-6 * u(rng);
  x[box.origin()] = 0.0;
  if (box.contains(m.argmin)) {
    std::vector<int> z(static_cast<size_t>(box.dim));
    for (int i = 0; i < box.dim; ++i)
      z[static_cast<size_t>(i)] = static_cast<int>(m.argmin[static_cast<size_t>(i)].get_si());
    x[box.index(z)] = 1.0;
  }

  auto norm2 = [](const mode_state& s) {
    double acc = 0.0;
    for (const auto& c : s) acc += std::norm(c);
    return acc;
  };
  double nx = std::sqrt(norm2(x));
  for (auto& c : x) c /= nx;

  double rho_prev = -1.0;
  for (long it = 0; it < max_iter; ++it) {
    mode_state y = x;
    for (long l = 0; l < n; ++l) op.apply(y);
    double rho = norm2(y);  // <x, (T*)^n T^n x> for unit x
    if (rho == 0.0) {
      out.estimate = 0.0;
      return out;
    }
    if (rho_prev >= 0.0 && std::abs(rho - rho_prev) <= rel_tol * rho) {
      out.estimate = std::sqrt(rho);
      return out;
    }
    rho_prev = rho;
    for (long l = 0; l < n; ++l) op.apply_adjoint(y);
    double ny = std::sqrt(norm2(y));
    if (ny == 0.0) {
      out.estimate = std::sqrt(rho);
      return out;
    }
    for (auto& c : y) c /= ny;
    x = std::move(y);
  }
  throw power_iteration_stall("norm power iteration did not converge");
}

// ||(I - T)^{-1}|| on the truncated space. The resolvent is applied through
// its Neumann series (spectrum strictly inside the unit disk for eps > 0);
// the largest singular value comes from Golub-Kahan-Lanczos bidiagonalization
// with full reorthogonalization, which stays fast when the top of the
// spectrum is clustered (plain power iteration creeps there).
inline double resolvent_norm_estimate(const truncated_operator& op, double rel_tol = 1e-8,
                                      long max_terms = 100000, long max_vectors = 400) {
  op.noise().require_positive_epsilon();
  const mode_box& box = op.box();
  auto norm2 = [](const mode_state& s) {
    double acc = 0.0;
    for (const auto& c : s) acc += std::norm(c);
    return acc;
  };
  auto neumann = [&](mode_state v, bool adjoint) {
    mode_state acc = v;
    for (long j = 0; j < max_terms; ++j) {
      if (adjoint)
        op.apply_adjoint(v);
      else
        op.apply(v);
      double term = std::sqrt(norm2(v));
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
      if (term <= 1e-15 * std::max(std::sqrt(norm2(acc)), 1e-300)) return acc;
    }
    throw solve_divergence("Neumann series failed to converge");
  };
  auto dot = [](const mode_state& a, const mode_state& b) {
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
  };
  auto axpy = [](mode_state& y, const std::complex<double>& s, const mode_state& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
  };

  std::vector<mode_state> vs, us;
  std::vector<double> alphas, betas;

  mode_state v(box.grid_size(), {0.0, 0.0});
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = uni(rng);
  v[box.origin()] = 0.0;
  double nv = std::sqrt(norm2(v));
  for (auto& c : v) c /= nv;
  vs.push_back(v);

  mode_state u = neumann(v, false);
  double alpha = std::sqrt(norm2(u));
  for (auto& c : u) c /= alpha;
  us.push_back(u);
  alphas.push_back(alpha);

  auto projected_sigma = [&]() {
    Eigen::MatrixXd bmat = Eigen::MatrixXd::Zero(static_cast<int>(alphas.size()),
                                                 static_cast<int>(alphas.size()));
    for (size_t i = 0; i < alphas.size(); ++i) {
      bmat(static_cast<int>(i), static_cast<int>(i)) = alphas[i];
      if (i + 1 < alphas.size()) bmat(static_cast<int>(i + 1), static_cast<int>(i)) = betas[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(bmat);
    return svd.singularValues()(0);
  };

  double sigma_prev = -1.0;
  for (long k = 1; k < max_vectors; ++k) {
    mode_state w = neumann(us.back(), true);
    axpy(w, -alphas.back(), vs.back());
    for (const auto& q : vs) axpy(w, -dot(q, w), q);  // reorthogonalize
    double beta = std::sqrt(norm2(w));
    if (beta <= 1e-14 * alphas.front()) return projected_sigma();  // subspace exhausted
    for (auto& c : w) c /= beta;
    betas.push_back(beta);
    vs.push_back(w);

    mode_state p = neumann(w, false);
    axpy(p, -betas.back(), us.back());
    for (const auto& q : us) axpy(p, -dot(q, p), q);
    alpha = std::sqrt(norm2(p));
    if (alpha <= 1e-14 * alphas.front()) return projected_sigma();
    for (auto& c : p) c /= alpha;
    us.push_back(p);
    alphas.push_back(alpha);

    if (k % 4 == 0 || k + 1 == max_vectors) {
      double sigma = projected_sigma();
      if (sigma_prev > 0.0 && std::abs(sigma - sigma_prev) <= rel_tol * sigma) return sigma;
      sigma_prev = sigma;
    }
  }
  if (sigma_prev > 0.0) return sigma_prev;
  throw power_iteration_stall("resolvent Lanczos did not converge");
}

// ---------------------------------------------------------------------------
// Density evolution and the Boltzmann-Gibbs entropy tracker.

struct density_state {
  mode_box box;
  mode_state coeff;  // zero-mean fluctuation; mean fixed at 1

  density_state(mode_box b, mode_state c) : box(b), coeff(std::move(c)) {
    if (coeff.size() != box.grid_size()) throw precondition_error("state size mismatch");
    coeff[box.origin()] = 0.0;
    validate_real();
  }

  // 1 + amplitude * cos(2 pi k.x)
  static density_state cosine(const mode_box& b, const std::vector<int>& k,
                              double amplitude = 1.0) {
    mode_state c(b.grid_size(), {0.0, 0.0});
    std::vector<int> neg(k);
    for (int& v : neg) v = -v;
    c[b.index(k)] = amplitude / 2.0;
    c[b.index(neg)] = amplitude / 2.0;
    return density_state(b, std::move(c));
  }

  static density_state uniform(const mode_box& b) {
    return density_state(b, mode_state(b.grid_size(), {0.0, 0.0}));
  }

  double l2_fluctuation() const {
    double acc = 0.0;
    for (const auto& c : coeff) acc += std::norm(c);
    return std::sqrt(acc);
  }

 private:
  void validate_real() const {
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      auto k = box.mode_at(i);
      for (int& v : k) v = -v;
      std::complex<double> mirror = coeff[box.index(k)];
      if (std::abs(mirror - std::conj(coeff[i])) > 1e-9)
        throw precondition_error("density coefficients are not conjugate-symmetric");
    }
  }
};

namespace detail {

// f(x_j) on the uniform grid via per-axis inverse DFTs; grid resolution is
// 4x the mode cutoff per dimension (the entropy integrand is nonlinear).
inline std::vector<double> density_grid_values(const density_state& s) {
  const mode_box& box = s.box;
  const int ng = 4 * box.cutoff;
  std::size_t total = 1;
  for (int i = 0; i < box.dim; ++i) total *= static_cast<std::size_t>(ng);

  std::vector<std::complex<double>> grid(total, {0.0, 0.0});
  // scatter coefficients at k mod ng
  for (std::size_t i = 0; i < s.coeff.size(); ++i) {
    if (s.coeff[i] == std::complex<double>(0.0, 0.0)) continue;
    auto k = box.mode_at(i);
    std::size_t idx = 0;
    for (int r = box.dim - 1; r >= 0; --r) {
      int m = ((k[static_cast<size_t>(r)] % ng) + ng) % ng;
      idx = idx * static_cast<std::size_t>(ng) + static_cast<std::size_t>(m);
    }
    grid[idx] += s.coeff[i];
  }
  grid[0] += 1.0;  // the mean

  // inverse transform along each axis: f_j = sum_k c_k e^{+2 pi i jk/ng}
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> line(static_cast<size_t>(ng)),
      out(static_cast<size_t>(ng));
  std::size_t stride = 1;
  for (int axis = 0; axis < box.dim; ++axis) {
    std::size_t blocks = total / static_cast<std::size_t>(ng);
    for (std::size_t blk = 0; blk < blocks; ++blk) {
      // compute the base offset of this 1-d line
      std::size_t rem = blk, base = 0;
      std::size_t below = stride;  // number of faster-varying cells
      base = (rem % below);
      rem /= below;
      base += rem * below * static_cast<std::size_t>(ng);
      for (int t = 0; t < ng; ++t) line[static_cast<size_t>(t)] = grid[base + static_cast<std::size_t>(t) * stride];
      fft.inv(out, line);
      for (int t = 0; t < ng; ++t)
        grid[base + static_cast<std::size_t>(t) * stride] =
            out[static_cast<size_t>(t)] * static_cast<double>(ng);
    }
    stride *= static_cast<std::size_t>(ng);
  }

  std::vector<double> values(total);
  for (std::size_t i = 0; i < total; ++i) values[i] = grid[i].real();
  return values;
}

}  // namespace detail

// Boltzmann-Gibbs entropy of the density on the sampling grid:
// (1/N) sum eta(f_j), eta(u) = -u ln u for u > 0.
inline double bg_entropy(const density_state& s, double negative_tol = 1e-6) {
  auto values = detail::density_grid_values(s);
  double acc = 0.0;
  for (double v : values) {
    if (v < -negative_tol)
      throw negative_density_error("density reaches " + std::to_string(v) + " on the grid");
    if (v > 0.0) acc -= v * std::log(v);
  }
  return acc / static_cast<double>(values.size());
}

struct trajectory_point {
  long n = 0;
  double l2_fluct = 0.0;
  double bg_entropy = 0.0;
  double dropped_mass = 0.0;  // cumulative discarded L2 mass (squared norm)
};

// Evolve a density for nsteps, recording the fluctuation norm and entropy at
// every step (including the initial state).
inline std::vector<trajectory_point> evolve_density(const truncated_operator& op,
                                                    density_state state, long nsteps) {
  if (state.box.dim != op.box().dim || state.box.cutoff != op.box().cutoff)
    throw precondition_error("state box does not match the operator");
  std::vector<trajectory_point> traj;
  double dropped_total = 0.0;
  for (long n = 0; n <= nsteps; ++n) {
    traj.push_back({n, state.l2_fluctuation(), bg_entropy(state), dropped_total});
    if (n < nsteps) dropped_total += op.apply(state.coeff);
  }
  return traj;
}

// Max deviation of the truncated norm across shift vectors: the phases are
// unimodular diagonal factors, so singular values cannot move.
inline double affine_invariance_check(const int_matrix& f, const std::vector<shift_vector>& shifts,
                                      const noise_model& noise, long n, int cutoff = 64) {
  mode_box box{f.dim(), cutoff};
  double base = norm_estimate(truncated_operator(toral_map{f, {}}, noise, box), n).estimate;
  double worst = 0.0;
  for (const auto& c : shifts) {
    double est = norm_estimate(truncated_operator(toral_map{f, c}, noise, box), n).estimate;
    worst = std::max(worst, std::abs(est - base));
  }
  return worst;
}

// CSV: columns n, l2_fluct, bg_entropy, dropped_mass.
inline std::string trajectory_csv(const std::vector<trajectory_point>& traj) {
  std::string out = "n,l2_fluct,bg_entropy,dropped_mass\n";
  char buf[112];
  for (const auto& p : traj) {
    std::snprintf(buf, sizeof buf, "%ld,%.12g,%.12g,%.12g\n", p.n, p.l2_fluct, p.bg_entropy,
                  p.dropped_mass);
    out += buf;
  }
  return out;
}

}  // namespace toruslab
