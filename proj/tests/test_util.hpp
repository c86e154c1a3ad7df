#pragma once

// Shared helpers for the test suites: random unimodular matrices as bounded
// words in elementary matrices, and a brute-force characteristic polynomial.

#include <functional>
#include <random>

#include "toruslab/exact.hpp"
#include "toruslab/polynomial.hpp"

namespace toruslab::testing {

// Random element of SL(d, Z) as a product of elementary shears I + e_ij.
// Entry growth is kept in check by rejecting words with large entries.
inline int_matrix random_sl(int d, std::mt19937& rng, int word_len = 12, long entry_cap = 60) {
  while (true) {
    int_matrix m = int_matrix::identity(d);
    std::uniform_int_distribution<int> idx(0, d - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int w = 0; w < word_len; ++w) {
      int i = idx(rng), j = idx(rng);
      if (i == j) continue;
      int_matrix e = int_matrix::identity(d);
      e.at(i, j) = coin(rng) ? 1 : -1;
      m = m * e;
    }
    bool ok = true;
    for (const Int& v : m.entries())
      if (abs(v) > entry_cap) ok = false;
    // avoid handing back the identity too often
    if (ok && !(m == int_matrix::identity(d))) return m;
  }
}

// Independent characteristic polynomial oracle: cofactor expansion of
// det(xI - A) over polynomial entries.
inline int_polynomial char_poly_cofactor(const int_matrix& a) {
  int d = a.dim();
  std::vector<std::vector<int_polynomial>> m(static_cast<size_t>(d),
                                             std::vector<int_polynomial>(static_cast<size_t>(d)));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      std::vector<Int> c;
      c.push_back(-a.at(i, j));
      if (i == j) c.push_back(1);
      m[static_cast<size_t>(i)][static_cast<size_t>(j)] = int_polynomial(std::move(c));
    }
  std::function<int_polynomial(const std::vector<std::vector<int_polynomial>>&)> det =
      [&](const std::vector<std::vector<int_polynomial>>& mm) -> int_polynomial {
    size_t n = mm.size();
    if (n == 1) return mm[0][0];
    int_polynomial acc;
    for (size_t col = 0; col < n; ++col) {
      std::vector<std::vector<int_polynomial>> minor;
      for (size_t i = 1; i < n; ++i) {
        std::vector<int_polynomial> row;
        for (size_t j = 0; j < n; ++j)
          if (j != col) row.push_back(mm[i][j]);
        minor.push_back(std::move(row));
      }
      int_polynomial term = mm[0][col] * det(minor);
      acc = (col % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
  };
  return det(m);
}

inline int_matrix cat_map() { return int_matrix{{2, 1}, {1, 1}}; }

inline int_matrix shear_map() { return int_matrix{{1, 1}, {0, 1}}; }

inline int_matrix rotation_map() { return int_matrix{{0, -1}, {1, 0}}; }

// companion matrix of x^3 - x - 1 (smallest-entropy 3d ergodic automorphism)
inline int_matrix plastic_map() { return int_matrix{{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}; }

inline int_matrix blockdiag(const int_matrix& a, const int_matrix& b) {
  int d = a.dim() + b.dim();
  int_matrix m(d);
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m.at(i, j) = a.at(i, j);
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) m.at(a.dim() + i, a.dim() + j) = b.at(i, j);
  return m;
}

}  // namespace toruslab::testing
