#pragma once

// Exact integer and rational linear algebra. Everything here is
// arbitrary-precision: entries of A^n grow like e^{h n} and leave any fixed
// width around n ~ 40, so the whole module is built on GMP.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toruslab/errors.hpp"

namespace toruslab {

using Int = mpz_class;
using Rat = mpq_class;

// ---------------------------------------------------------------------------
// int_matrix: dense square matrix of arbitrary-precision integers.

class int_matrix {
 public:
  int_matrix() = default;
  explicit int_matrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {
    if (dim < 1) throw error("matrix dimension must be >= 1");
  }
  int_matrix(int dim, std::vector<Int> entries) : dim_(dim), a_(std::move(entries)) {
    if (dim < 1 || a_.size() != static_cast<size_t>(dim) * dim)
      throw error("entry count does not match dimension");
  }
  int_matrix(std::initializer_list<std::initializer_list<long>> rows) {
    dim_ = static_cast<int>(rows.size());
    if (dim_ < 1) throw error("matrix dimension must be >= 1");
    a_.reserve(static_cast<size_t>(dim_) * dim_);
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != dim_) throw error("matrix rows must be square");
      for (long v : r) a_.emplace_back(v);
    }
  }

  static int_matrix identity(int dim) {
    int_matrix m(dim);
    for (int i = 0; i < dim; ++i) m.at(i, i) = 1;
    return m;
  }

  int dim() const { return dim_; }
  Int& at(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const Int& at(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }

  bool operator==(const int_matrix& o) const { return dim_ == o.dim_ && a_ == o.a_; }
  bool operator!=(const int_matrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const Int& v : a_)
      if (v != 0) return false;
    return true;
  }

  int_matrix transpose() const {
    int_matrix t(dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend int_matrix operator*(const int_matrix& x, const int_matrix& y) {
    if (x.dim_ != y.dim_) throw error("dimension mismatch");
    int_matrix r(x.dim_);
    Int acc, t;
    for (int i = 0; i < x.dim_; ++i)
      for (int j = 0; j < x.dim_; ++j) {
        acc = 0;
        for (int k = 0; k < x.dim_; ++k) {
          t = x.at(i, k) * y.at(k, j);
          acc += t;
        }
        r.at(i, j) = acc;
      }
    return r;
  }

  friend int_matrix operator+(const int_matrix& x, const int_matrix& y) {
    if (x.dim_ != y.dim_) throw error("dimension mismatch");
    int_matrix r(x.dim_);
    for (size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] + y.a_[i];
    return r;
  }

  friend int_matrix operator-(const int_matrix& x, const int_matrix& y) {
    if (x.dim_ != y.dim_) throw error("dimension mismatch");
    int_matrix r(x.dim_);
    for (size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] - y.a_[i];
    return r;
  }

  int_matrix scaled(const Int& s) const {
    int_matrix r(dim_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
  }

  std::vector<Int> apply(const std::vector<Int>& v) const {
    if (static_cast<int>(v.size()) != dim_) throw error("dimension mismatch");
    std::vector<Int> r(dim_);
    Int t;
    for (int i = 0; i < dim_; ++i) {
      Int acc = 0;
      for (int j = 0; j < dim_; ++j) {
        t = at(i, j) * v[j];
        acc += t;
      }
      r[i] = acc;
    }
    return r;
  }

  // Fraction-free Gaussian elimination (Bareiss).
  Int determinant() const {
    int_matrix w(*this);
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < dim_; ++k) {
      if (w.at(k, k) == 0) {
        int p = -1;
        for (int i = k + 1; i < dim_; ++i)
          if (w.at(i, k) != 0) {
            p = i;
            break;
          }
        if (p < 0) return 0;
        for (int j = 0; j < dim_; ++j) std::swap(w.at(k, j), w.at(p, j));
        sign = -sign;
      }
      for (int i = k + 1; i < dim_; ++i)
        for (int j = k + 1; j < dim_; ++j) {
          Int num = w.at(i, j) * w.at(k, k) - w.at(i, k) * w.at(k, j);
          mpz_divexact(w.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
        }
      prev = w.at(k, k);
    }
    return sign > 0 ? w.at(dim_ - 1, dim_ - 1) : -w.at(dim_ - 1, dim_ - 1);
  }

  bool is_unimodular() const {
    Int d = determinant();
    return d == 1 || d == -1;
  }

  // Exact adjugate via cofactor expansion; fine for the d <= 8 regime.
  int_matrix adjugate() const {
    if (dim_ == 1) return identity(1);
    int_matrix adj(dim_);
    int_matrix minor(dim_ - 1);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        int r = 0;
        for (int ii = 0; ii < dim_; ++ii) {
          if (ii == i) continue;
          int c = 0;
          for (int jj = 0; jj < dim_; ++jj) {
            if (jj == j) continue;
            minor.at(r, c) = at(ii, jj);
            ++c;
          }
          ++r;
        }
        Int cof = minor.determinant();
        adj.at(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
      }
    return adj;
  }

  // Exact inverse; only defined for |det| = 1.
  int_matrix unimodular_inverse() const {
    Int d = determinant();
    if (d == 1) return adjugate();
    if (d == -1) return adjugate().scaled(-1);
    throw non_unimodular_error("matrix has determinant " + d.get_str() + ", expected +-1");
  }

  const std::vector<Int>& entries() const { return a_; }

 private:
  int dim_ = 0;
  std::vector<Int> a_;
};

// A^l for any integer l; negative powers require |det A| = 1.
inline int_matrix mat_pow(const int_matrix& a, long l) {
  int_matrix base = l >= 0 ? a : a.unimodular_inverse();
  unsigned long e = static_cast<unsigned long>(l >= 0 ? l : -l);
  int_matrix r = int_matrix::identity(a.dim());
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

namespace detail {

// (Q_n, A^n) by binary doubling: Q_{2m} = Q_m + (A^m)^T Q_m A^m, so the
// whole form costs O(log n) multiplies (n reaches 10^9 for simple-class
// dissipation sweeps, where a term-by-term sum would never finish).
inline std::pair<int_matrix, int_matrix> gram_form_with_power(const int_matrix& a, long n) {
  if (n == 1) return {a.transpose() * a, a};
  auto [qm, am] = gram_form_with_power(a, n / 2);
  int_matrix q = qm + am.transpose() * qm * am;
  int_matrix an = am * am;
  if (n % 2 == 1) {
    an = an * a;
    q = q + an.transpose() * an;
  }
  return {q, an};
}

}  // namespace detail

// Q_n = sum_{l=1..n} (A^l)^T (A^l); the quadratic form with
// k^T Q_n k = sum_{l=1..n} |A^l k|^2.
inline int_matrix gram_form(const int_matrix& a, long n) {
  if (n < 1) throw error("gram_form requires n >= 1");
  return detail::gram_form_with_power(a, n).first;
}

// ---------------------------------------------------------------------------
// Scaled conversion helpers: big integers to doubles without overflow.

// z ~ mantissa * 2^exp with mantissa in [0.5, 1).
inline double mpz_scaled_to_double(const Int& z, long scale_pow2) {
  long ex = 0;
  double m = mpz_get_d_2exp(&ex, z.get_mpz_t());
  return std::ldexp(m, static_cast<int>(ex - scale_pow2));
}

inline long mpz_bit_length(const Int& z) {
  if (z == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

inline double mpz_log(const Int& z) {
  if (z <= 0) throw error("mpz_log requires a positive value");
  long ex = 0;
  double m = mpz_get_d_2exp(&ex, z.get_mpz_t());
  return std::log(m) + static_cast<double>(ex) * M_LN2;
}

namespace detail {

// Full-precision conversion: accumulates 64-bit limbs, so the result carries
// the long double's whole mantissa (mpz_get_d would truncate at 53 bits).
inline long double mpz_to_long_double(const Int& z) {
  size_t limbs = mpz_size(z.get_mpz_t());
  long double v = 0.0L;
  for (size_t i = limbs; i-- > 0;)
    v = v * 18446744073709551616.0L /* 2^64 */ +
        static_cast<long double>(mpz_getlimbn(z.get_mpz_t(), i));
  return mpz_sgn(z.get_mpz_t()) < 0 ? -v : v;
}

}  // namespace detail

namespace detail {

// Largest eigenvalue of a symmetric PSD matrix given as scaled doubles,
// by power iteration with a residual-based stopping rule; the residual bound
// is a certified eigenvalue error for symmetric matrices.
inline double symmetric_top_eigenvalue(const std::vector<double>& s, int d, double rel_tol) {
  auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (int i = 0; i < d; ++i) {
      double acc = 0;
      for (int j = 0; j < d; ++j) acc += s[static_cast<size_t>(i) * d + j] * x[j];
      y[i] = acc;
    }
  };
  std::vector<double> x(d), y(d);
  for (int i = 0; i < d; ++i) x[i] = 1.0 / std::sqrt(static_cast<double>(d)) + 1e-3 * (i + 1);
  double nx = 0;
  for (double v : x) nx += v * v;
  nx = std::sqrt(nx);
  for (double& v : x) v /= nx;

  double rho = 0;
  for (long it = 0; it < 200000; ++it) {
    matvec(x, y);
    rho = 0;
    for (int i = 0; i < d; ++i) rho += x[i] * y[i];
    double res = 0;
    for (int i = 0; i < d; ++i) {
      double r = y[i] - rho * x[i];
      res += r * r;
    }
    res = std::sqrt(res);
    if (res <= rel_tol * std::max(rho, 1e-300)) return rho;
    double ny = 0;
    for (double v : y) ny += v * v;
    ny = std::sqrt(ny);
    if (ny == 0) return 0.0;
    for (int i = 0; i < d; ++i) x[i] = y[i] / ny;
  }
  // Slow spectral-gap case: the Rayleigh quotient is still within the last
  // residual of a true eigenvalue; accept it rather than stall.
  return rho;
}

}  // namespace detail

// Largest singular value of A, relative accuracy ~1e-12, computed from the
// exact integer matrix scaled by a power of two.
inline double operator_two_norm_log(const int_matrix& a) {
  int d = a.dim();
  int_matrix s = a.transpose() * a;
  if (s.is_zero()) throw error("operator norm of zero matrix has no logarithm");
  long maxbits = 0;
  for (const Int& v : s.entries()) maxbits = std::max(maxbits, mpz_bit_length(v));
  long scale = maxbits > 500 ? maxbits - 500 : 0;
  std::vector<double> sd(static_cast<size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      sd[static_cast<size_t>(i) * d + j] = mpz_scaled_to_double(s.at(i, j), scale);
  double rho = detail::symmetric_top_eigenvalue(sd, d, 1e-13);
  // sigma_max^2 = rho * 2^scale
  return 0.5 * (std::log(rho) + static_cast<double>(scale) * M_LN2);
}

inline double operator_two_norm(const int_matrix& a) {
  if ((a.transpose() * a).is_zero()) return 0.0;
  return std::exp(operator_two_norm_log(a));
}

// ---------------------------------------------------------------------------
// Rational vectors and matrices (canonical reduced form is maintained by
// mpq_class itself).

struct rat_vector {
  std::vector<Rat> v;

  int dim() const { return static_cast<int>(v.size()); }
  bool is_zero() const {
    for (const Rat& x : v)
      if (x != 0) return false;
    return true;
  }
};

class rat_matrix {
 public:
  rat_matrix() = default;
  explicit rat_matrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim) {
    if (dim < 1) throw error("matrix dimension must be >= 1");
  }
  explicit rat_matrix(const int_matrix& m) : rat_matrix(m.dim()) {
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) at(i, j) = Rat(m.at(i, j));
  }

  int dim() const { return dim_; }
  Rat& at(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const Rat& at(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
  bool operator==(const rat_matrix& o) const { return dim_ == o.dim_ && a_ == o.a_; }

  friend rat_matrix operator*(const rat_matrix& x, const rat_matrix& y) {
    if (x.dim_ != y.dim_) throw error("dimension mismatch");
    rat_matrix r(x.dim_);
    for (int i = 0; i < x.dim_; ++i)
      for (int j = 0; j < x.dim_; ++j) {
        Rat acc = 0;
        for (int k = 0; k < x.dim_; ++k) acc += x.at(i, k) * y.at(k, j);
        r.at(i, j) = acc;
      }
    return r;
  }

  rat_vector apply(const rat_vector& v) const {
    if (v.dim() != dim_) throw error("dimension mismatch");
    rat_vector r;
    r.v.resize(dim_);
    for (int i = 0; i < dim_; ++i) {
      Rat acc = 0;
      for (int j = 0; j < dim_; ++j) acc += at(i, j) * v.v[j];
      r.v[i] = acc;
    }
    return r;
  }

 private:
  int dim_ = 0;
  std::vector<Rat> a_;
};

// ---------------------------------------------------------------------------
// Text format shared by the CLI and the file formats: rows separated by ';',
// entries by ',', rationals as "p/q". "2,1;1,1" is the cat map.

namespace detail {

inline std::vector<std::vector<std::string>> split_matrix_text(std::string_view text) {
  std::vector<std::vector<std::string>> rows(1);
  std::string cur;
  auto push_entry = [&](std::vector<std::string>& row) {
    size_t b = cur.find_first_not_of(" \t\n\r");
    if (b == std::string::npos) {
      cur.clear();
      return;
    }
    size_t e = cur.find_last_not_of(" \t\n\r");
    row.push_back(cur.substr(b, e - b + 1));
    cur.clear();
  };
  for (char c : text) {
    if (c == ',') {
      push_entry(rows.back());
      if (rows.back().empty()) throw parse_error("empty entry in matrix text");
    } else if (c == ';') {
      push_entry(rows.back());
      rows.emplace_back();
    } else {
      cur.push_back(c);
    }
  }
  push_entry(rows.back());
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  if (rows.empty()) throw parse_error("empty matrix text");
  return rows;
}

inline Rat parse_rational_entry(const std::string& s) {
  try {
    size_t slash = s.find('/');
    if (slash == std::string::npos) {
      Rat r(Int(s), 1);
      r.canonicalize();
      return r;
    }
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw parse_error("zero denominator in '" + s + "'");
    Rat r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw parse_error("cannot parse rational entry '" + s + "'");
  }
}

}  // namespace detail

inline int_matrix parse_int_matrix(std::string_view text) {
  auto rows = detail::split_matrix_text(text);
  int d = static_cast<int>(rows.size());
  int_matrix m(d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[i].size()) != d)
      throw parse_error("matrix text is not square (row " + std::to_string(i + 1) + " has " +
                        std::to_string(rows[i].size()) + " of " + std::to_string(d) + " entries)");
    for (int j = 0; j < d; ++j) {
      try {
        m.at(i, j) = Int(rows[i][j]);
      } catch (const std::invalid_argument&) {
        throw parse_error("cannot parse integer entry '" + rows[i][j] + "'");
      }
    }
  }
  return m;
}

inline rat_matrix parse_rat_matrix(std::string_view text) {
  auto rows = detail::split_matrix_text(text);
  int d = static_cast<int>(rows.size());
  rat_matrix m(d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[i].size()) != d) throw parse_error("matrix text is not square");
    for (int j = 0; j < d; ++j) m.at(i, j) = detail::parse_rational_entry(rows[i][j]);
  }
  return m;
}

inline rat_vector parse_rat_vector(std::string_view text) {
  auto rows = detail::split_matrix_text(text);
  if (rows.size() != 1) throw parse_error("vector text must not contain ';'");
  rat_vector v;
  for (const auto& s : rows[0]) v.v.push_back(detail::parse_rational_entry(s));
  return v;
}

inline std::string format_matrix(const int_matrix& m) {
  std::string s;
  for (int i = 0; i < m.dim(); ++i) {
    if (i) s += ';';
    for (int j = 0; j < m.dim(); ++j) {
      if (j) s += ',';
      s += m.at(i, j).get_str();
    }
  }
  return s;
}

// Linear part of a toral map: unimodularity is part of the contract.
inline int_matrix parse_unimodular_matrix(std::string_view text) {
  int_matrix m = parse_int_matrix(text);
  if (!m.is_unimodular())
    throw non_unimodular_error("matrix " + std::string(text) + " has |det| != 1 (det = " +
                               m.determinant().get_str() + ")");
  return m;
}

}  // namespace toruslab
