#pragma once

// Lattice engine for the arithmetic minimization problems: LLL reduction of
// an exact integer Gram matrix (exact rational Gram-Schmidt, unimodular
// transform tracked in integers) and Fincke-Pohst enumeration in long double
// with exact integer evaluation of every candidate.
//
// The certificate never depends on reduction quality: the enumeration covers
// the full ellipsoid with a relative float slack that dominates the partial
// sum rounding error by many orders, and every reported value is recomputed
// exactly. Reduction only keeps the tree small. Gram entries reach 10^25
// around n ~ 30 for the cat map, which is why nothing here trusts doubles
// with the values themselves.

#include <cstdint>
#include <functional>

#include "toruslab/exact.hpp"

namespace toruslab {

struct lattice_reduction {
  int_matrix transform;  // rows are the reduced basis in original coordinates
  int_matrix gram;       // exact reduced Gram: transform * G0 * transform^T
};

namespace detail {

struct rational_gso {
  std::vector<std::vector<Rat>> mu;  // mu[i][j], j < i
  std::vector<Rat> b;                // squared Gram-Schmidt norms
};

inline rational_gso compute_gso(const int_matrix& g) {
  int d = g.dim();
  rational_gso s;
  s.mu.assign(static_cast<size_t>(d), {});
  s.b.assign(static_cast<size_t>(d), Rat(0));
  for (int i = 0; i < d; ++i) {
    s.mu[static_cast<size_t>(i)].assign(static_cast<size_t>(i), Rat(0));
    for (int j = 0; j < i; ++j) {
      Rat acc(g.at(i, j));
      for (int k = 0; k < j; ++k)
        acc -= s.mu[static_cast<size_t>(j)][static_cast<size_t>(k)] *
               s.mu[static_cast<size_t>(i)][static_cast<size_t>(k)] * s.b[static_cast<size_t>(k)];
      if (s.b[static_cast<size_t>(j)] == 0) throw error("Gram matrix is not positive definite");
      s.mu[static_cast<size_t>(i)][static_cast<size_t>(j)] = acc / s.b[static_cast<size_t>(j)];
    }
    Rat acc(g.at(i, i));
    for (int k = 0; k < i; ++k)
      acc -= s.mu[static_cast<size_t>(i)][static_cast<size_t>(k)] *
             s.mu[static_cast<size_t>(i)][static_cast<size_t>(k)] * s.b[static_cast<size_t>(k)];
    if (acc <= 0) throw error("Gram matrix is not positive definite");
    s.b[static_cast<size_t>(i)] = acc;
  }
  return s;
}

inline Int round_rat(const Rat& q) {
  // nearest integer, ties toward +inf: floor((2 num + den) / (2 den))
  Int num = 2 * q.get_num() + q.get_den();
  Int den = 2 * q.get_den();
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return r;
}

}  // namespace detail

// LLL reduction acting on the quadratic form only. delta = 3/4 keeps the
// swap count low even for the n ~ 100 Gram forms with ~50-digit entries.
inline lattice_reduction lll_reduce_gram(const int_matrix& g0, double delta_num = 3,
                                         double delta_den = 4) {
  int d = g0.dim();
  int_matrix g = g0;
  int_matrix u = int_matrix::identity(d);
  if (d == 1) return {u, g};

  Rat delta(static_cast<long>(delta_num), static_cast<long>(delta_den));
  detail::rational_gso s = detail::compute_gso(g);

  auto apply_reduce = [&](int k, int l, const Int& q) {
    if (q == 0) return;
    Int old_gkl = g.at(k, l);
    Int old_gll = g.at(l, l);
    Int old_gkk = g.at(k, k);
    for (int j = 0; j < d; ++j) u.at(k, j) -= q * u.at(l, j);
    for (int j = 0; j < d; ++j) {
      if (j == k) continue;
      g.at(k, j) -= q * g.at(l, j);
      g.at(j, k) = g.at(k, j);
    }
    g.at(k, k) = old_gkk - 2 * q * old_gkl + q * q * old_gll;
    // mu updates are local to row k
    auto& muk = s.mu[static_cast<size_t>(k)];
    const auto& mul = s.mu[static_cast<size_t>(l)];
    muk[static_cast<size_t>(l)] -= q;
    for (int j = 0; j < l; ++j) muk[static_cast<size_t>(j)] -= Rat(q) * mul[static_cast<size_t>(j)];
  };

  int k = 1;
  long guard = 0;
  const long guard_max = 200000;
  while (k < d) {
    if (++guard > guard_max) throw error("LLL failed to terminate");
    // size-reduce against k-1 first (Lovasz test uses mu[k][k-1])
    {
      Int q = detail::round_rat(s.mu[static_cast<size_t>(k)][static_cast<size_t>(k - 1)]);
      apply_reduce(k, k - 1, q);
    }
    Rat mu2 = s.mu[static_cast<size_t>(k)][static_cast<size_t>(k - 1)] *
              s.mu[static_cast<size_t>(k)][static_cast<size_t>(k - 1)];
    if (s.b[static_cast<size_t>(k)] >= (delta - mu2) * s.b[static_cast<size_t>(k - 1)]) {
      for (int l = k - 2; l >= 0; --l) {
        Int q = detail::round_rat(s.mu[static_cast<size_t>(k)][static_cast<size_t>(l)]);
        apply_reduce(k, l, q);
      }
      ++k;
    } else {
      for (int j = 0; j < d; ++j) {
        std::swap(u.at(k, j), u.at(k - 1, j));
      }
      for (int j = 0; j < d; ++j) std::swap(g.at(k, j), g.at(k - 1, j));
      for (int j = 0; j < d; ++j) std::swap(g.at(j, k), g.at(j, k - 1));
      s = detail::compute_gso(g);
      k = std::max(k - 1, 1);
    }
  }
  return {u, g};
}

// ---------------------------------------------------------------------------
// Fincke-Pohst enumeration over {x != 0 : x^T G x <= bound}.

namespace detail {

struct float_gso {
  std::vector<std::vector<long double>> mu;
  std::vector<long double> b;
  int scale_pow2 = 0;  // gram was divided by 2^scale before GSO
};

inline long double mpz_to_ld_scaled(const Int& z, int scale) {
  long double v = mpz_to_long_double(z);
  return scale ? ldexpl(v, -scale) : v;
}

inline float_gso compute_float_gso(const int_matrix& g) {
  int d = g.dim();
  long maxbits = 0;
  for (int i = 0; i < d; ++i) maxbits = std::max(maxbits, mpz_bit_length(g.at(i, i)));
  float_gso s;
  s.scale_pow2 = maxbits > 8000 ? static_cast<int>(maxbits - 8000) : 0;
  s.mu.assign(static_cast<size_t>(d), {});
  s.b.assign(static_cast<size_t>(d), 0.0L);
  std::vector<std::vector<long double>> gd(static_cast<size_t>(d),
                                           std::vector<long double>(static_cast<size_t>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) gd[static_cast<size_t>(i)][static_cast<size_t>(j)] =
        mpz_to_ld_scaled(g.at(i, j), s.scale_pow2);
  for (int i = 0; i < d; ++i) {
    s.mu[static_cast<size_t>(i)].assign(static_cast<size_t>(i), 0.0L);
    for (int j = 0; j < i; ++j) {
      long double acc = gd[static_cast<size_t>(i)][static_cast<size_t>(j)];
      for (int kk = 0; kk < j; ++kk)
        acc -= s.mu[static_cast<size_t>(j)][static_cast<size_t>(kk)] *
               s.mu[static_cast<size_t>(i)][static_cast<size_t>(kk)] * s.b[static_cast<size_t>(kk)];
      s.mu[static_cast<size_t>(i)][static_cast<size_t>(j)] = acc / s.b[static_cast<size_t>(j)];
    }
    long double acc = gd[static_cast<size_t>(i)][static_cast<size_t>(i)];
    for (int kk = 0; kk < i; ++kk)
      acc -= s.mu[static_cast<size_t>(i)][static_cast<size_t>(kk)] *
             s.mu[static_cast<size_t>(i)][static_cast<size_t>(kk)] * s.b[static_cast<size_t>(kk)];
    if (!(acc > 0.0L)) throw error("float GSO lost positive definiteness");
    s.b[static_cast<size_t>(i)] = acc;
  }
  return s;
}

inline Int eval_quadratic(const int_matrix& g, const std::vector<Int>& x) {
  int d = g.dim();
  Int acc = 0;
  for (int i = 0; i < d; ++i) {
    if (x[static_cast<size_t>(i)] == 0) continue;
    for (int j = 0; j < d; ++j) {
      if (x[static_cast<size_t>(j)] == 0) continue;
      acc += g.at(i, j) * x[static_cast<size_t>(i)] * x[static_cast<size_t>(j)];
    }
  }
  return acc;
}

// Depth-first zig-zag enumeration. bound_float() is re-read at every prune so
// the caller may shrink it; on_leaf sees coefficient vectors in the reduced
// basis. Returns false when the node budget ran out.
class ellipsoid_enumerator {
 public:
  ellipsoid_enumerator(const int_matrix& gram, const float_gso& gso,
                       std::function<long double()> bound_float,
                       std::function<void(const std::vector<long>&)> on_leaf,
                       std::uint64_t budget)
      : g_(gram),
        gso_(gso),
        bound_(std::move(bound_float)),
        on_leaf_(std::move(on_leaf)),
        budget_(budget),
        d_(gram.dim()),
        x_(static_cast<size_t>(gram.dim()), 0) {}

  bool run() {
    ok_ = true;
    descend(d_ - 1, 0.0L);
    return ok_;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  void descend(int level, long double rho) {
    if (!ok_) return;
    if (level < 0) {
      bool all_zero = true;
      for (long v : x_)
        if (v != 0) {
          all_zero = false;
          break;
        }
      if (!all_zero) on_leaf_(x_);
      return;
    }
    long double c = 0.0L;
    for (int j = level + 1; j < d_; ++j)
      c -= gso_.mu[static_cast<size_t>(j)][static_cast<size_t>(level)] *
           static_cast<long double>(x_[static_cast<size_t>(j)]);
    if (!(std::abs(c) < 4e18L)) throw error("enumeration center out of integer range");
    long double bl = gso_.b[static_cast<size_t>(level)];
    const long start = llroundl(c);
    bool up_done = false, down_done = false;
    for (long step = 0; !(up_done && down_done); ++step) {
      bool is_up = (step % 2 == 1) || step == 0;
      if (step > 0 && ((is_up && up_done) || (!is_up && down_done))) continue;
      long xv = step == 0 ? start : (is_up ? start + (step + 1) / 2 : start - step / 2);
      if (++nodes_ > budget_) {
        ok_ = false;
        return;
      }
      long double diff = static_cast<long double>(xv) - c;
      long double add = bl * diff * diff;
      if (rho + add > bound_() * (1.0L + 1e-9L) + 1e-30L) {
        // start is the nearest integer: if it fails, every integer fails
        if (step == 0) return;
        (is_up ? up_done : down_done) = true;
        continue;
      }
      x_[static_cast<size_t>(level)] = xv;
      descend(level - 1, rho + add);
      x_[static_cast<size_t>(level)] = 0;
      if (!ok_) return;
    }
  }

  const int_matrix& g_;
  const float_gso& gso_;
  std::function<long double()> bound_;
  std::function<void(const std::vector<long>&)> on_leaf_;
  std::uint64_t budget_;
  int d_;
  std::vector<long> x_;
  std::uint64_t nodes_ = 0;
  bool ok_ = true;
};

}  // namespace detail

struct svp_result {
  Int value;
  std::vector<Int> argmin;  // canonical representative in original coordinates
  bool complete = true;
  std::uint64_t nodes = 0;
  int_matrix transform;  // the reduction used; callers may seed the next solve with it
};

// Canonical sign: flip so the first nonzero component is positive.
inline void canonicalize_sign(std::vector<Int>& v) {
  for (const Int& x : v) {
    if (x > 0) return;
    if (x < 0) {
      for (Int& y : v) y = -y;
      return;
    }
  }
}

inline bool lex_less(const std::vector<Int>& a, const std::vector<Int>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c != 0) return c < 0;
  }
  return false;
}

// Exact shortest nonzero vector of the quadratic form g0. Ties are broken
// deterministically: sign-normalized, lexicographically smallest. A seed
// transform (e.g. the reduction of a nearby form) cuts the LLL work when
// forms are solved along an n-ladder.
inline svp_result shortest_vector(const int_matrix& g0, std::uint64_t node_budget = 100000000,
                                  const int_matrix* seed_transform = nullptr) {
  int d = g0.dim();
  lattice_reduction red;
  if (seed_transform) {
    int_matrix g_seeded = (*seed_transform) * g0 * seed_transform->transpose();
    red = lll_reduce_gram(g_seeded);
    red.transform = red.transform * (*seed_transform);
  } else {
    red = lll_reduce_gram(g0);
  }
  detail::float_gso gso = detail::compute_float_gso(red.gram);

  Int best = 0;
  for (int i = 0; i < d; ++i)
    if (best == 0 || red.gram.at(i, i) < best) best = red.gram.at(i, i);
  std::vector<std::vector<Int>> ties;

  auto to_original = [&](const std::vector<long>& x) {
    std::vector<Int> k(static_cast<size_t>(d), Int(0));
    for (int i = 0; i < d; ++i) {
      if (x[static_cast<size_t>(i)] == 0) continue;
      for (int j = 0; j < d; ++j)
        k[static_cast<size_t>(j)] += Int(x[static_cast<size_t>(i)]) * red.transform.at(i, j);
    }
    return k;
  };

  detail::ellipsoid_enumerator en(
      red.gram, gso,
      [&]() { return detail::mpz_to_ld_scaled(best, gso.scale_pow2); },
      [&](const std::vector<long>& x) {
        std::vector<Int> xi(x.size());
        for (size_t i = 0; i < x.size(); ++i) xi[i] = x[i];
        Int val = detail::eval_quadratic(red.gram, xi);
        if (val > best) return;
        std::vector<Int> k = to_original(x);
        canonicalize_sign(k);
        if (val < best) {
          best = val;
          ties.clear();
          ties.push_back(std::move(k));
        } else {
          ties.push_back(std::move(k));
        }
      },
      node_budget);
  bool complete = en.run();

  svp_result r;
  r.value = best;
  r.complete = complete;
  r.nodes = en.nodes();
  r.transform = red.transform;
  if (ties.empty()) {
    // budget so small the enumerator never reached a leaf: report a basis vector
    int arg = 0;
    for (int i = 0; i < d; ++i)
      if (red.gram.at(i, i) == best) arg = i;
    std::vector<Int> k(static_cast<size_t>(d));
    for (int j = 0; j < d; ++j) k[static_cast<size_t>(j)] = red.transform.at(arg, j);
    canonicalize_sign(k);
    r.argmin = std::move(k);
    return r;
  }
  r.argmin = ties[0];
  for (const auto& t : ties)
    if (lex_less(t, r.argmin)) r.argmin = t;
  return r;
}

// Visit every x != 0 with x^T g0 x <= bound (one representative of each +-x
// pair is guaranteed; both may appear). Visitor receives original-coordinate
// vectors and the exact quadratic value. Returns false if the budget ran out.
template <class Visitor>
inline bool enumerate_in_ellipsoid(const int_matrix& g0, const Int& bound,
                                   std::uint64_t node_budget, std::uint64_t& nodes_out,
                                   Visitor&& visit) {
  int d = g0.dim();
  lattice_reduction red = lll_reduce_gram(g0);
  detail::float_gso gso = detail::compute_float_gso(red.gram);
  detail::ellipsoid_enumerator en(
      red.gram, gso, [&]() { return detail::mpz_to_ld_scaled(bound, gso.scale_pow2); },
      [&](const std::vector<long>& x) {
        std::vector<Int> xi(x.size());
        for (size_t i = 0; i < x.size(); ++i) xi[i] = x[i];
        Int val = detail::eval_quadratic(red.gram, xi);
        if (val > bound) return;
        std::vector<Int> k(static_cast<size_t>(d), Int(0));
        for (int i = 0; i < d; ++i) {
          if (x[static_cast<size_t>(i)] == 0) continue;
          for (int j = 0; j < d; ++j)
            k[static_cast<size_t>(j)] += Int(x[static_cast<size_t>(i)]) * red.transform.at(i, j);
        }
        visit(k, val);
      },
      node_budget);
  bool ok = en.run();
  nodes_out = en.nodes();
  return ok;
}

}  // namespace toruslab
