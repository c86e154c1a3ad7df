#pragma once

// Exact factorization of monic integer polynomials into irreducibles over Q
// (equivalently, monic irreducibles over Z), and cyclotomic polynomial
// machinery for exact root-of-unity detection.
//
// Pipeline: Yun squarefree decomposition, Berlekamp factorization modulo a
// prime with squarefree reduction, quadratic Hensel lifting past the
// Landau-Mignotte bound, Zassenhaus subset recombination. Degrees here stay
// <= 8, so the subset stage is trivial.

#include <algorithm>
#include <array>
#include <map>
#include <numeric>

#include "toruslab/polynomial.hpp"

namespace toruslab {
namespace detail {

// --- arithmetic in F_p[x]; coefficients canonical in [0, p) -----------------

using modpoly = std::vector<long>;

inline void mp_trim(modpoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline long mod_inv(long a, long p) {
  long t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    long q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  return t < 0 ? t + p : t;
}

inline modpoly mp_mul(const modpoly& a, const modpoly& b, long p) {
  if (a.empty() || b.empty()) return {};
  modpoly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  mp_trim(c);
  return c;
}

inline modpoly mp_mod(modpoly a, const modpoly& m, long p) {
  long inv = mod_inv(m.back(), p);
  while (a.size() >= m.size()) {
    long q = a.back() * inv % p;
    size_t shift = a.size() - m.size();
    for (size_t i = 0; i < m.size(); ++i) a[shift + i] = ((a[shift + i] - q * m[i]) % p + p) % p;
    mp_trim(a);
    if (a.size() >= m.size() && a.back() == 0) mp_trim(a);
  }
  return a;
}

inline modpoly mp_gcd(modpoly a, modpoly b, long p) {
  while (!b.empty()) {
    a = mp_mod(std::move(a), b, p);
    std::swap(a, b);
  }
  if (!a.empty()) {
    long inv = mod_inv(a.back(), p);
    for (long& v : a) v = v * inv % p;
  }
  return a;
}

// exact quotient a / b in F_p[x] (remainder known to vanish)
inline modpoly mp_div_exact(const modpoly& a, const modpoly& b, long p) {
  modpoly num = a, q;
  long inv = mod_inv(b.back(), p);
  if (num.size() >= b.size()) q.assign(num.size() - b.size() + 1, 0);
  while (num.size() >= b.size() && !num.empty()) {
    long qc = num.back() * inv % p;
    size_t shift = num.size() - b.size();
    q[shift] = qc;
    for (size_t i = 0; i < b.size(); ++i) num[shift + i] = ((num[shift + i] - qc * b[i]) % p + p) % p;
    num.pop_back();
    mp_trim(num);
  }
  mp_trim(q);
  return q;
}

inline modpoly mp_derivative(const modpoly& a, long p) {
  if (a.size() < 2) return {};
  modpoly d(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * static_cast<long>(i % p) % p;
  mp_trim(d);
  return d;
}

inline modpoly mp_from_int_poly(const int_polynomial& f, long p) {
  modpoly a(f.coefficients().size());
  for (size_t i = 0; i < a.size(); ++i) {
    Int r = f.coefficients()[i] % p;
    long v = static_cast<long>(r.get_si());
    a[i] = (v % p + p) % p;
  }
  mp_trim(a);
  return a;
}

// Berlekamp factorization of a monic squarefree polynomial over F_p.
inline std::vector<modpoly> berlekamp(const modpoly& f, long p) {
  int n = static_cast<int>(f.size()) - 1;
  if (n <= 1) return {f};

  // rows of Q: x^{ip} mod f
  std::vector<modpoly> qrows(static_cast<size_t>(n));
  modpoly xp = mp_mod([&] {
    modpoly m(static_cast<size_t>(p) + 1, 0);
    m[static_cast<size_t>(p)] = 1;
    return m;
  }(), f, p);
  modpoly cur = {1};
  for (int i = 0; i < n; ++i) {
    qrows[static_cast<size_t>(i)] = cur;
    cur = mp_mod(mp_mul(cur, xp, p), f, p);
  }

  // kernel of (Q - I): row vectors v with v Q = v
  std::vector<std::vector<long>> m(static_cast<size_t>(n), std::vector<long>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i) {
    for (size_t j = 0; j < qrows[static_cast<size_t>(i)].size(); ++j)
      m[static_cast<size_t>(i)][j] = qrows[static_cast<size_t>(i)][j];
    m[static_cast<size_t>(i)][static_cast<size_t>(i)] =
        ((m[static_cast<size_t>(i)][static_cast<size_t>(i)] - 1) % p + p) % p;
  }
  // Gaussian elimination on columns of (Q - I)^T == rows of matrix transposed;
  // we need left null space of (Q - I), i.e. null space of its transpose.
  std::vector<std::vector<long>> t(static_cast<size_t>(n), std::vector<long>(static_cast<size_t>(n), 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[static_cast<size_t>(j)][static_cast<size_t>(i)] = m[static_cast<size_t>(i)][j];
  std::vector<int> pivot_col(static_cast<size_t>(n), -1);
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int piv = -1;
    for (int row = rank; row < n; ++row)
      if (t[static_cast<size_t>(row)][static_cast<size_t>(col)] != 0) {
        piv = row;
        break;
      }
    if (piv < 0) continue;
    std::swap(t[static_cast<size_t>(piv)], t[static_cast<size_t>(rank)]);
    long inv = mod_inv(t[static_cast<size_t>(rank)][static_cast<size_t>(col)], p);
    for (int j = 0; j < n; ++j)
      t[static_cast<size_t>(rank)][static_cast<size_t>(j)] =
          t[static_cast<size_t>(rank)][static_cast<size_t>(j)] * inv % p;
    for (int row = 0; row < n; ++row) {
      if (row == rank) continue;
      long factor = t[static_cast<size_t>(row)][static_cast<size_t>(col)];
      if (factor == 0) continue;
      for (int j = 0; j < n; ++j)
        t[static_cast<size_t>(row)][static_cast<size_t>(j)] =
            ((t[static_cast<size_t>(row)][static_cast<size_t>(j)] -
              factor * t[static_cast<size_t>(rank)][static_cast<size_t>(j)]) % p + p) % p;
    }
    pivot_col[static_cast<size_t>(rank)] = col;
    ++rank;
  }
  std::vector<modpoly> kernel;
  std::vector<char> is_pivot(static_cast<size_t>(n), 0);
  for (int r = 0; r < rank; ++r) is_pivot[static_cast<size_t>(pivot_col[static_cast<size_t>(r)])] = 1;
  for (int free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[static_cast<size_t>(free_col)]) continue;
    modpoly v(static_cast<size_t>(n), 0);
    v[static_cast<size_t>(free_col)] = 1;
    for (int r = 0; r < rank; ++r) {
      long val = t[static_cast<size_t>(r)][static_cast<size_t>(free_col)];
      v[static_cast<size_t>(pivot_col[static_cast<size_t>(r)])] = (p - val) % p;
    }
    mp_trim(v);
    kernel.push_back(std::move(v));
  }

  // Berlekamp subalgebra dimension equals the number of irreducible factors.
  const size_t nfactors = kernel.size();
  std::vector<modpoly> factors = {f};
  if (nfactors <= 1) return factors;

  for (const modpoly& v : kernel) {
    if (factors.size() >= nfactors) break;
    if (v.size() <= 1) continue;  // constant vector never splits anything
    std::vector<modpoly> next;
    for (const modpoly& g : factors) {
      modpoly rem = g;
      std::vector<modpoly> parts;
      for (long s = 0; s < p && rem.size() > 2; ++s) {
        modpoly vs = v;
        vs[0] = ((vs[0] - s) % p + p) % p;
        mp_trim(vs);
        modpoly h = mp_gcd(rem, vs, p);
        if (h.size() > 1 && h.size() < rem.size()) {
          parts.push_back(h);
          rem = mp_div_exact(rem, h, p);
        }
      }
      if (rem.size() > 1) parts.push_back(rem);
      for (auto& h : parts) next.push_back(std::move(h));
    }
    factors = std::move(next);
  }

  // make all factors monic
  for (modpoly& g : factors) {
    long inv = mod_inv(g.back(), p);
    for (long& c : g) c = c * inv % p;
  }
  std::sort(factors.begin(), factors.end());
  return factors;
}

// --- lifting: arithmetic on mpz coefficient vectors modulo m ----------------

struct zmodpoly {
  std::vector<Int> c;
  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  int degree() const { return static_cast<int>(c.size()) - 1; }
};

inline Int mod_canonical(const Int& v, const Int& m) {
  Int r = v % m;
  if (r < 0) r += m;
  return r;
}

inline zmodpoly zm_reduce(const int_polynomial& f, const Int& m) {
  zmodpoly r;
  r.c.resize(f.coefficients().size());
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = mod_canonical(f.coefficients()[i], m);
  r.trim();
  return r;
}

inline zmodpoly zm_from_modpoly(const modpoly& a) {
  zmodpoly r;
  r.c.assign(a.begin(), a.end());
  r.trim();
  return r;
}

inline zmodpoly zm_mul(const zmodpoly& a, const zmodpoly& b, const Int& m) {
  if (a.c.empty() || b.c.empty()) return {};
  zmodpoly r;
  r.c.assign(a.c.size() + b.c.size() - 1, Int(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  for (Int& v : r.c) v = mod_canonical(v, m);
  r.trim();
  return r;
}

inline zmodpoly zm_add(const zmodpoly& a, const zmodpoly& b, const Int& m) {
  zmodpoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (size_t i = 0; i < r.c.size(); ++i) {
    Int v = 0;
    if (i < a.c.size()) v += a.c[i];
    if (i < b.c.size()) v += b.c[i];
    r.c[i] = mod_canonical(v, m);
  }
  r.trim();
  return r;
}

inline zmodpoly zm_sub(const zmodpoly& a, const zmodpoly& b, const Int& m) {
  zmodpoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()));
  for (size_t i = 0; i < r.c.size(); ++i) {
    Int v = 0;
    if (i < a.c.size()) v += a.c[i];
    if (i < b.c.size()) v -= b.c[i];
    r.c[i] = mod_canonical(v, m);
  }
  r.trim();
  return r;
}

// divmod by a divisor whose leading coefficient is invertible mod m (monic here).
inline std::pair<zmodpoly, zmodpoly> zm_divmod(const zmodpoly& a, const zmodpoly& b, const Int& m) {
  if (b.c.empty()) throw error("division by zero polynomial");
  Int lead_inv;
  if (b.c.back() == 1) {
    lead_inv = 1;
  } else {
    if (mpz_invert(lead_inv.get_mpz_t(), b.c.back().get_mpz_t(), m.get_mpz_t()) == 0)
      throw error("leading coefficient not invertible in Hensel division");
  }
  zmodpoly rem = a;
  zmodpoly quo;
  if (rem.degree() >= b.degree())
    quo.c.assign(static_cast<size_t>(rem.degree() - b.degree()) + 1, Int(0));
  while (rem.degree() >= b.degree() && !rem.c.empty()) {
    Int q = mod_canonical(rem.c.back() * lead_inv, m);
    size_t shift = rem.c.size() - b.c.size();
    quo.c[shift] = q;
    if (q != 0)
      for (size_t i = 0; i < b.c.size(); ++i)
        rem.c[shift + i] = mod_canonical(rem.c[shift + i] - q * b.c[i], m);
    rem.c.pop_back();
    rem.trim();
  }
  quo.trim();
  return {quo, rem};
}

// extended euclid over F_p returning s, t with s*a + t*b = 1 (a, b coprime)
inline std::pair<modpoly, modpoly> mp_xgcd(const modpoly& a, const modpoly& b, long p) {
  modpoly r0 = a, r1 = b;
  modpoly s0 = {1}, s1 = {};
  modpoly t0 = {}, t1 = {1};
  auto sub_scaled = [&](const modpoly& x, const modpoly& y, const modpoly& q) {
    // x - q*y
    modpoly qy = mp_mul(q, y, p);
    modpoly r(std::max(x.size(), qy.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) {
      long v = (i < x.size() ? x[i] : 0) - (i < qy.size() ? qy[i] : 0);
      r[i] = (v % p + p) % p;
    }
    mp_trim(r);
    return r;
  };
  while (!r1.empty()) {
    // q = r0 / r1
    modpoly q;
    {
      modpoly num = r0;
      long inv = mod_inv(r1.back(), p);
      if (num.size() >= r1.size()) q.assign(num.size() - r1.size() + 1, 0);
      while (num.size() >= r1.size() && !num.empty()) {
        long qc = num.back() * inv % p;
        size_t shift = num.size() - r1.size();
        q[shift] = qc;
        for (size_t i = 0; i < r1.size(); ++i)
          num[shift + i] = ((num[shift + i] - qc * r1[i]) % p + p) % p;
        num.pop_back();
        mp_trim(num);
      }
      mp_trim(q);
      r0 = num;
    }
    std::swap(r0, r1);
    modpoly ns = sub_scaled(s0, s1, q);
    s0 = s1;
    s1 = ns;
    modpoly nt = sub_scaled(t0, t1, q);
    t0 = t1;
    t1 = nt;
  }
  // r0 is a nonzero constant; normalize to 1
  long inv = mod_inv(r0[0], p);
  for (long& v : s0) v = v * inv % p;
  for (long& v : t0) v = v * inv % p;
  return {s0, t0};
}

// One quadratic Hensel step: from f = g h (mod m) to (mod m^2).
// Requires s g + t h = 1 (mod m), h monic. Follows von zur Gathen 15.10.
struct hensel_pair {
  zmodpoly g, h, s, t;
};

inline hensel_pair hensel_step(const int_polynomial& f, const hensel_pair& in, const Int& m) {
  Int m2 = m * m;
  zmodpoly fq = zm_reduce(f, m2);
  zmodpoly e = zm_sub(fq, zm_mul(in.g, in.h, m2), m2);
  auto [q, r] = zm_divmod(zm_mul(in.s, e, m2), in.h, m2);
  zmodpoly g2 = zm_add(in.g, zm_add(zm_mul(in.t, e, m2), zm_mul(q, in.g, m2), m2), m2);
  zmodpoly h2 = zm_add(in.h, r, m2);
  zmodpoly one;
  one.c = {Int(1)};
  zmodpoly b = zm_sub(zm_add(zm_mul(in.s, g2, m2), zm_mul(in.t, h2, m2), m2), one, m2);
  auto [c, d] = zm_divmod(zm_mul(in.s, b, m2), h2, m2);
  zmodpoly s2 = zm_sub(in.s, d, m2);
  zmodpoly t2 = zm_sub(in.t, zm_add(zm_mul(in.t, b, m2), zm_mul(c, g2, m2), m2), m2);
  return {g2, h2, s2, t2};
}

// Lift the modular factor list of monic f from mod p to mod >= target.
inline std::vector<zmodpoly> hensel_lift_tree(const int_polynomial& f,
                                              const std::vector<modpoly>& factors, long p,
                                              const Int& target, Int& modulus_out) {
  if (factors.size() == 1) {
    Int m(p);
    while (m < target) m = m * m;
    modulus_out = m;
    return {zm_reduce(f, m)};
  }
  size_t half = factors.size() / 2;
  modpoly g0 = {1}, h0 = {1};
  for (size_t i = 0; i < half; ++i) g0 = mp_mul(g0, factors[i], p);
  for (size_t i = half; i < factors.size(); ++i) h0 = mp_mul(h0, factors[i], p);
  auto [s0, t0] = mp_xgcd(g0, h0, p);

  hensel_pair cur{zm_from_modpoly(g0), zm_from_modpoly(h0), zm_from_modpoly(s0),
                  zm_from_modpoly(t0)};
  Int m(p);
  while (m < target) {
    cur = hensel_step(f, cur, m);
    m = m * m;
  }
  int_polynomial gz(std::vector<Int>(cur.g.c));
  int_polynomial hz(std::vector<Int>(cur.h.c));

  Int sub_mod;
  std::vector<modpoly> left(factors.begin(), factors.begin() + static_cast<long>(half));
  std::vector<modpoly> right(factors.begin() + static_cast<long>(half), factors.end());
  auto lifted_left = hensel_lift_tree(gz, left, p, m, sub_mod);
  auto lifted_right = hensel_lift_tree(hz, right, p, m, sub_mod);
  // sub-lifts may have overshot to a larger modulus; reduce back to m
  std::vector<zmodpoly> out;
  for (auto& z : lifted_left) {
    for (Int& v : z.c) v = mod_canonical(v, m);
    z.trim();
    out.push_back(std::move(z));
  }
  for (auto& z : lifted_right) {
    for (Int& v : z.c) v = mod_canonical(v, m);
    z.trim();
    out.push_back(std::move(z));
  }
  modulus_out = m;
  return out;
}

inline int_polynomial symmetric_lift(const zmodpoly& a, const Int& m) {
  Int half = m / 2;
  std::vector<Int> c(a.c.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.c[i] > half ? a.c[i] - m : a.c[i];
  return int_polynomial(std::move(c));
}

// Factor a monic squarefree integer polynomial into monic irreducibles.
inline std::vector<int_polynomial> factor_squarefree(const int_polynomial& f) {
  if (f.degree() <= 1) return {f};

  static const std::array<long, 21> primes = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                              41, 43, 47, 53, 59, 61, 67, 71, 73, 79};
  long p = 0;
  modpoly fp;
  for (long cand : primes) {
    fp = mp_from_int_poly(f, cand);
    if (static_cast<int>(fp.size()) - 1 != f.degree()) continue;  // lc vanished (non-monic case)
    modpoly g = mp_gcd(fp, mp_derivative(fp, cand), cand);
    if (g.size() == 1) {
      p = cand;
      break;
    }
  }
  if (p == 0) throw error("no usable prime for factorization (degree too large?)");

  std::vector<modpoly> mod_factors = berlekamp(fp, p);
  if (mod_factors.size() == 1) return {f};

  // Landau-Mignotte style bound: any monic factor has |coeff| <= 2^deg * (||f||_2 + 1).
  Int norm2 = 0;
  for (const Int& c : f.coefficients()) norm2 += c * c;
  Int bound = sqrt(norm2) + 1 + 1;
  bound <<= static_cast<unsigned>(f.degree());
  Int target = 2 * bound + 1;

  Int modulus;
  std::vector<zmodpoly> lifted = hensel_lift_tree(f, mod_factors, p, target, modulus);

  // Zassenhaus recombination over subsets of lifted factors.
  std::vector<int_polynomial> result;
  std::vector<size_t> remaining(lifted.size());
  std::iota(remaining.begin(), remaining.end(), size_t{0});
  int_polynomial rest = f;

  size_t take = 1;
  while (!remaining.empty() && 2 * take <= remaining.size()) {
    bool found = false;
    std::vector<size_t> idx(take);
    std::iota(idx.begin(), idx.end(), size_t{0});
    while (true) {
      zmodpoly prod;
      prod.c = {Int(1)};
      for (size_t i : idx) prod = zm_mul(prod, lifted[remaining[i]], modulus);
      int_polynomial cand = symmetric_lift(prod, modulus);
      if (cand.is_monic() && rest.divisible_by(cand)) {
        result.push_back(cand);
        rest = rest.exact_div(cand);
        std::vector<size_t> nr;
        for (size_t i = 0, j = 0; i < remaining.size(); ++i) {
          if (j < idx.size() && idx[j] == i) {
            ++j;
            continue;
          }
          nr.push_back(remaining[i]);
        }
        remaining = std::move(nr);
        found = true;
        break;
      }
      // next combination
      long pos = static_cast<long>(take) - 1;
      while (pos >= 0 && idx[static_cast<size_t>(pos)] ==
                             remaining.size() - take + static_cast<size_t>(pos))
        --pos;
      if (pos < 0) break;
      ++idx[static_cast<size_t>(pos)];
      for (size_t i = static_cast<size_t>(pos) + 1; i < take; ++i) idx[i] = idx[i - 1] + 1;
    }
    if (!found) ++take;
  }
  if (rest.degree() > 0) result.push_back(rest);

  std::sort(result.begin(), result.end(), [](const int_polynomial& a, const int_polynomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    for (int i = a.degree(); i >= 0; --i)
      if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
    return false;
  });
  return result;
}

}  // namespace detail

// Yun's squarefree decomposition of a monic integer polynomial:
// f = prod_i q_i^i with the q_i squarefree and pairwise coprime.
inline std::vector<std::pair<int_polynomial, int>> squarefree_decomposition(
    const int_polynomial& f) {
  if (!f.is_monic()) throw error("squarefree decomposition requires a monic polynomial");
  std::vector<std::pair<int_polynomial, int>> out;
  int_polynomial df = f.derivative();
  int_polynomial g = poly_gcd(f, df);
  if (g.degree() == 0) {
    out.emplace_back(f, 1);
    return out;
  }
  int_polynomial c = f.exact_div(g);
  int_polynomial d = df.exact_div(g) - c.derivative();
  int mult = 1;
  while (c.degree() > 0) {
    int_polynomial a = poly_gcd(c, d);
    if (a.degree() > 0) out.emplace_back(a, mult);
    c = c.exact_div(a.degree() > 0 ? a : int_polynomial{1});
    d = d.exact_div(a.degree() > 0 ? a : int_polynomial{1}) - c.derivative();
    ++mult;
  }
  return out;
}

// Exact factorization of a monic integer polynomial into monic irreducibles
// over Q, with multiplicities; the product reconstructs the input exactly.
inline std::vector<std::pair<int_polynomial, int>> factor_over_q(const int_polynomial& f) {
  if (f.is_zero()) throw error("cannot factor the zero polynomial");
  if (!f.is_monic()) throw error("factor_over_q requires a monic polynomial");
  std::vector<std::pair<int_polynomial, int>> out;
  if (f.degree() == 0) return out;
  for (const auto& [sq, mult] : squarefree_decomposition(f)) {
    for (const auto& irr : detail::factor_squarefree(sq)) out.emplace_back(irr, mult);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
    for (int i = a.first.degree(); i >= 0; --i)
      if (a.first.coeff(i) != b.first.coeff(i)) return a.first.coeff(i) < b.first.coeff(i);
    return a.second < b.second;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Cyclotomic polynomials.

inline int euler_phi(int m) {
  int result = m, n = m;
  for (int q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      result -= result / q;
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

inline const int_polynomial& cyclotomic(int m) {
  static std::map<int, int_polynomial> cache;
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  std::vector<Int> xm(static_cast<size_t>(m) + 1);
  xm[0] = -1;
  xm[static_cast<size_t>(m)] = 1;
  int_polynomial phi(std::move(xm));
  for (int d = 1; d < m; ++d)
    if (m % d == 0) phi = phi.exact_div(cyclotomic(d));
  return cache.emplace(m, std::move(phi)).first->second;
}

// All m with Euler phi(m) <= d: the only orders whose cyclotomic polynomial
// can divide a degree-d characteristic polynomial.
inline std::vector<int> cyclotomic_orders(int d) {
  std::vector<int> orders;
  // phi(m) >= sqrt(m/2), so m <= 2 (d+1)^2 is a safe cutoff.
  int cap = 2 * (d + 1) * (d + 1) + 2;
  for (int m = 1; m <= cap; ++m)
    if (euler_phi(m) <= d) orders.push_back(m);
  return orders;
}

}  // namespace toruslab
