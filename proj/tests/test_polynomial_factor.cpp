#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"
#include "toruslab/factor.hpp"

using namespace toruslab;
using namespace toruslab::testing;

TEST_CASE("polynomial arithmetic basics") {
  int_polynomial p({1, -3, 1});
  int_polynomial q({-1, 1});  // x - 1
  REQUIRE((p * q).degree() == 3);
  REQUIRE((p * q).exact_div(q) == p);
  REQUIRE(p.eval(Int(3)) == 1);
  REQUIRE(p.derivative() == int_polynomial({-3, 2}));
  REQUIRE(p.str() == "x^2 - 3x + 1");
}

TEST_CASE("poly_gcd finds common factors") {
  int_polynomial a({-1, 1});          // x - 1
  int_polynomial b({1, -3, 1});       // coprime with a
  int_polynomial f = a * a * b;
  REQUIRE(poly_gcd(f, f.derivative()) == a);
  REQUIRE(poly_gcd(b, a).degree() == 0);
}

TEST_CASE("cyclotomic polynomials") {
  REQUIRE(cyclotomic(1) == int_polynomial({-1, 1}));
  REQUIRE(cyclotomic(2) == int_polynomial({1, 1}));
  REQUIRE(cyclotomic(4) == int_polynomial({1, 0, 1}));
  REQUIRE(cyclotomic(6) == int_polynomial({1, -1, 1}));
  REQUIRE(cyclotomic(12) == int_polynomial({1, 0, -1, 0, 1}));
  // degree of Phi_m equals phi(m)
  for (int m = 1; m <= 30; ++m) REQUIRE(cyclotomic(m).degree() == euler_phi(m));
  // x^12 - 1 = prod over divisors
  int_polynomial x12m1 = int_polynomial::x_power(12) - int_polynomial({1});
  int_polynomial prod{1};
  for (int m : {1, 2, 3, 4, 6, 12}) prod = prod * cyclotomic(m);
  REQUIRE(prod == x12m1);
}

TEST_CASE("cyclotomic_orders covers exactly phi(m) <= d") {
  auto orders = cyclotomic_orders(2);
  REQUIRE(orders == std::vector<int>{1, 2, 3, 4, 6});
  auto o4 = cyclotomic_orders(4);
  REQUIRE(std::find(o4.begin(), o4.end(), 5) != o4.end());
  REQUIRE(std::find(o4.begin(), o4.end(), 12) != o4.end());
  REQUIRE(std::find(o4.begin(), o4.end(), 7) == o4.end());  // phi(7) = 6 > 4
}

TEST_CASE("factor_over_q examples") {
  // x^2 - 3x + 1 is irreducible
  auto f1 = factor_over_q(int_polynomial({1, -3, 1}));
  REQUIRE(f1.size() == 1);
  REQUIRE(f1[0].first == int_polynomial({1, -3, 1}));
  REQUIRE(f1[0].second == 1);

  // (x-1)^3
  int_polynomial xm1({-1, 1});
  auto f2 = factor_over_q(xm1 * xm1 * xm1);
  REQUIRE(f2.size() == 1);
  REQUIRE(f2[0].first == xm1);
  REQUIRE(f2[0].second == 3);

  // char poly of blockdiag(cat, plastic companion) splits into the two blocks
  auto a = blockdiag(cat_map(), plastic_map());
  auto f3 = factor_over_q(char_poly(a));
  REQUIRE(f3.size() == 2);
  REQUIRE(f3[0].first == int_polynomial({1, -3, 1}));
  REQUIRE(f3[0].second == 1);
  REQUIRE(f3[1].first == int_polynomial({-1, -1, 0, 1}));
  REQUIRE(f3[1].second == 1);
}

TEST_CASE("factorization reconstructs the input product") {
  std::vector<int_polynomial> irreducibles = {
      int_polynomial({-1, 1}),        // x - 1
      int_polynomial({1, 1}),         // x + 1
      int_polynomial({1, -3, 1}),     // cat
      int_polynomial({-1, -1, 0, 1}), // plastic
      int_polynomial({1, 0, 1}),      // Phi_4
      int_polynomial({-1, 1, 1}),     // x^2 + x - 1
  };
  std::mt19937 rng(11);
  for (int t = 0; t < 20; ++t) {
    int_polynomial f{1};
    std::map<std::string, int> expect;
    std::uniform_int_distribution<int> pick(0, static_cast<int>(irreducibles.size()) - 1);
    std::uniform_int_distribution<int> mult(1, 2);
    int deg_budget = 8;
    while (true) {
      const auto& p = irreducibles[static_cast<size_t>(pick(rng))];
      int m = mult(rng);
      if (f.degree() + p.degree() * m > deg_budget) break;
      for (int i = 0; i < m; ++i) f = f * p;
      expect[p.str()] += m;
    }
    if (f.degree() == 0) continue;
    auto factors = factor_over_q(f);
    int_polynomial rebuilt{1};
    for (const auto& [p, m] : factors) {
      for (int i = 0; i < m; ++i) rebuilt = rebuilt * p;
      REQUIRE(expect.count(p.str()) == 1);
      REQUIRE(expect[p.str()] == m);
    }
    REQUIRE(rebuilt == f);
    REQUIRE(factors.size() == expect.size());
  }
}

TEST_CASE("factorization of random characteristic polynomials reconstructs") {
  std::mt19937 rng(5150);
  for (int d = 2; d <= 6; ++d)
    for (int t = 0; t < 6; ++t) {
      auto a = random_sl(d, rng);
      auto cp = char_poly(a);
      auto factors = factor_over_q(cp);
      int_polynomial rebuilt{1};
      int degsum = 0;
      for (const auto& [p, m] : factors) {
        REQUIRE(p.is_monic());
        for (int i = 0; i < m; ++i) rebuilt = rebuilt * p;
        degsum += p.degree() * m;
      }
      REQUIRE(rebuilt == cp);
      REQUIRE(degsum == d);
    }
}

TEST_CASE("squarefree decomposition") {
  int_polynomial a({-1, 1});
  int_polynomial b({1, -3, 1});
  auto parts = squarefree_decomposition(a * a * a * b);
  REQUIRE(parts.size() == 2);
  // multiplicity 1 part is b, multiplicity 3 part is a
  for (const auto& [q, m] : parts) {
    if (m == 1) REQUIRE(q == b);
    if (m == 3) REQUIRE(q == a);
    REQUIRE((m == 1 || m == 3));
  }
}

TEST_CASE("degree-8 product of quadratics factors correctly") {
  // stress the recombination stage: four distinct quadratics
  int_polynomial f{1};
  std::vector<int_polynomial> qs = {
      int_polynomial({1, -3, 1}),
      int_polynomial({-1, -1, 1}),  // x^2 - x - 1
      int_polynomial({1, -4, 1}),   // x^2 - 4x + 1
      int_polynomial({-1, -3, 1}),  // x^2 - 3x - 1
  };
  for (const auto& q : qs) f = f * q;
  auto factors = factor_over_q(f);
  REQUIRE(factors.size() == 4);
  int_polynomial rebuilt{1};
  for (const auto& [p, m] : factors) {
    REQUIRE(m == 1);
    rebuilt = rebuilt * p;
  }
  REQUIRE(rebuilt == f);
}
