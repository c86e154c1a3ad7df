#pragma once

// Integer polynomials with exact arithmetic, plus the characteristic
// polynomial of an exact integer matrix.

#include <complex>
#include <string>
#include <vector>

#include "toruslab/exact.hpp"

namespace toruslab {

// Coefficients ascending by degree; the leading coefficient is nonzero except
// for the zero polynomial, which is stored as {}.
class int_polynomial {
 public:
  int_polynomial() = default;
  explicit int_polynomial(std::vector<Int> coeffs) : c_(std::move(coeffs)) { normalize(); }
  int_polynomial(std::initializer_list<long> coeffs) {
    for (long v : coeffs) c_.emplace_back(v);
    normalize();
  }

  static int_polynomial x_power(int n) {
    std::vector<Int> c(static_cast<size_t>(n) + 1);
    c.back() = 1;
    return int_polynomial(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero poly
  const Int& coeff(int i) const {
    static const Int zero = 0;
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)] : zero;
  }
  const Int& leading() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  const std::vector<Int>& coefficients() const { return c_; }

  bool operator==(const int_polynomial& o) const { return c_ == o.c_; }
  bool operator!=(const int_polynomial& o) const { return c_ != o.c_; }

  friend int_polynomial operator+(const int_polynomial& a, const int_polynomial& b) {
    std::vector<Int> c(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < c.size(); ++i) {
      if (i < a.c_.size()) c[i] += a.c_[i];
      if (i < b.c_.size()) c[i] += b.c_[i];
    }
    return int_polynomial(std::move(c));
  }

  friend int_polynomial operator-(const int_polynomial& a, const int_polynomial& b) {
    std::vector<Int> c(std::max(a.c_.size(), b.c_.size()));
    for (size_t i = 0; i < c.size(); ++i) {
      if (i < a.c_.size()) c[i] += a.c_[i];
      if (i < b.c_.size()) c[i] -= b.c_[i];
    }
    return int_polynomial(std::move(c));
  }

  friend int_polynomial operator*(const int_polynomial& a, const int_polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Int> c(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return int_polynomial(std::move(c));
  }

  int_polynomial operator-() const {
    std::vector<Int> c(c_);
    for (Int& v : c) v = -v;
    return int_polynomial(std::move(c));
  }

  int_polynomial scaled(const Int& s) const {
    if (s == 0) return {};
    std::vector<Int> c(c_);
    for (Int& v : c) v *= s;
    return int_polynomial(std::move(c));
  }

  int_polynomial derivative() const {
    if (degree() < 1) return {};
    std::vector<Int> c(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * static_cast<long>(i);
    return int_polynomial(std::move(c));
  }

  // Division by a monic divisor is exact over Z; returns {quotient, remainder}.
  std::pair<int_polynomial, int_polynomial> divmod_monic(const int_polynomial& div) const {
    if (!div.is_monic()) throw error("divmod_monic requires a monic divisor");
    std::vector<Int> rem(c_);
    int dd = div.degree();
    if (degree() < dd) return {int_polynomial{}, *this};
    std::vector<Int> quo(static_cast<size_t>(degree() - dd) + 1);
    for (int i = degree(); i >= dd; --i) {
      Int q = rem[static_cast<size_t>(i)];
      if (q == 0) continue;
      quo[static_cast<size_t>(i - dd)] = q;
      for (int j = 0; j <= dd; ++j) rem[static_cast<size_t>(i - dd + j)] -= q * div.coeff(j);
    }
    return {int_polynomial(std::move(quo)), int_polynomial(std::move(rem))};
  }

  bool divisible_by(const int_polynomial& div) const { return divmod_monic(div).second.is_zero(); }

  // Exact quotient; throws if the division leaves a remainder.
  int_polynomial exact_div(const int_polynomial& div) const {
    auto [q, r] = divmod_monic(div);
    if (!r.is_zero()) throw error("polynomial division is not exact");
    return q;
  }

  Int content() const {
    Int g = 0;
    for (const Int& v : c_) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
      if (g == 1) break;
    }
    return g;
  }

  // Primitive part with positive leading coefficient.
  int_polynomial primitive_part() const {
    if (is_zero()) return {};
    Int g = content();
    if (leading() < 0) g = -g;
    std::vector<Int> c(c_);
    for (Int& v : c) mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), g.get_mpz_t());
    return int_polynomial(std::move(c));
  }

  Int eval(const Int& x) const {
    Int acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  template <typename T>
  T eval_floating(const T& x) const {
    T acc{};
    for (size_t i = c_.size(); i-- > 0;) {
      T coeff;
      if constexpr (std::is_floating_point_v<T>) {
        coeff = static_cast<T>(c_[i].get_d());
      } else {
        coeff = T(static_cast<typename T::value_type>(c_[i].get_d()));
      }
      acc = acc * x + coeff;
    }
    return acc;
  }

  // Exact Horner with a matrix argument.
  int_matrix eval_matrix(const int_matrix& a) const {
    int d = a.dim();
    int_matrix acc(d);
    if (is_zero()) return acc;
    for (size_t i = c_.size(); i-- > 0;) {
      acc = acc * a;
      for (int k = 0; k < d; ++k) acc.at(k, k) += c_[i];
    }
    return acc;
  }

  std::string str(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
      const Int& v = coeff(i);
      if (v == 0) continue;
      if (!s.empty()) s += v > 0 ? " + " : " - ";
      else if (v < 0) s += "-";
      Int av = abs(v);
      if (av != 1 || i == 0) s += av.get_str();
      if (i > 0) {
        s += var;
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s;
  }

 private:
  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Int> c_;
};

// Primitive gcd of integer polynomials via a primitive remainder sequence.
// Degrees stay <= 8 here, so the simple PRS is plenty.
inline int_polynomial poly_gcd(int_polynomial a, int_polynomial b) {
  a = a.is_zero() ? a : a.primitive_part();
  b = b.is_zero() ? b : b.primitive_part();
  while (!b.is_zero()) {
    // pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b
    if (a.degree() < b.degree()) {
      std::swap(a, b);
      continue;
    }
    int k = a.degree() - b.degree() + 1;
    Int lc = b.leading();
    Int mult = 1;
    for (int i = 0; i < k; ++i) mult *= lc;
    int_polynomial r = a.scaled(mult);
    // long division of r by b (leading coefficient now divides exactly)
    while (!r.is_zero() && r.degree() >= b.degree()) {
      Int q;
      mpz_divexact(q.get_mpz_t(), r.leading().get_mpz_t(), b.leading().get_mpz_t());
      int shift = r.degree() - b.degree();
      std::vector<Int> sub(static_cast<size_t>(shift + b.degree()) + 1);
      for (int i = 0; i <= b.degree(); ++i) sub[static_cast<size_t>(i + shift)] = q * b.coeff(i);
      r = r - int_polynomial(std::move(sub));
    }
    a = b;
    b = r.is_zero() ? r : r.primitive_part();
  }
  return a.is_zero() ? a : a.primitive_part();
}

// Characteristic polynomial det(xI - A) by fraction-free Faddeev-LeVerrier:
// the only divisions are by k = 1..d and are exact over Z.
inline int_polynomial char_poly(const int_matrix& a) {
  int d = a.dim();
  std::vector<Int> c(static_cast<size_t>(d) + 1);
  c[static_cast<size_t>(d)] = 1;
  int_matrix n = a;
  for (int k = 1; k <= d; ++k) {
    Int tr = 0;
    for (int i = 0; i < d; ++i) tr += n.at(i, i);
    Int ck;
    mpz_divexact_ui(ck.get_mpz_t(), tr.get_mpz_t(), static_cast<unsigned long>(k));
    ck = -ck;
    c[static_cast<size_t>(d - k)] = ck;
    if (k < d) {
      for (int i = 0; i < d; ++i) n.at(i, i) += ck;
      n = a * n;
    }
  }
  return int_polynomial(std::move(c));
}

}  // namespace toruslab
