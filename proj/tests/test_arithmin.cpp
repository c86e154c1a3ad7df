#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"
#include "toruslab/arithmin.hpp"

using namespace toruslab;
using namespace toruslab::testing;

namespace {

Int fib(int n) {
  Int a = 0, b = 1;
  for (int i = 0; i < n; ++i) {
    Int t = a + b;
    a = b;
    b = t;
  }
  return a;
}

std::vector<Int> iv(std::initializer_list<long> xs) {
  std::vector<Int> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

}  // namespace

TEST_CASE("min_sum on the cat map, alpha = 1") {
  auto a = cat_map();
  auto r1 = min_sum(min_instance(a, 1));
  REQUIRE(r1.exact);
  REQUIRE(r1.value_exact == 1);
  // |A k| = 1 at k = (1,-1) and k = (1,-2); the tie-break picks (1,-2)
  REQUIRE(r1.argmin == iv({1, -2}));
  REQUIRE(r1.certified);

  auto r3 = min_sum(min_instance(a, 3));
  REQUIRE(r3.value_exact == 8);
  REQUIRE(r3.argmin == iv({2, -3}));

  // M(n) = F_{2n} for the cat map
  min_table table(a, 1.0);
  for (long n = 1; n <= 20; ++n) REQUIRE(table.value(n).value_exact == fib(2 * static_cast<int>(n)));
}

TEST_CASE("min_sum on the identity") {
  auto id = int_matrix::identity(2);
  for (long n : {1L, 5L, 9L}) {
    auto r = min_sum(min_instance(id, n));
    REQUIRE(r.value_exact == n);
    int nz = 0;
    for (const Int& v : r.argmin) nz += (v != 0);
    REQUIRE(nz == 1);
  }
  auto rhalf = min_sum(min_instance(id, 5, 0.5));
  REQUIRE(rhalf.value == Catch::Approx(5.0).epsilon(1e-12));
  REQUIRE(rhalf.certified);
}

TEST_CASE("min_sum with alpha < 1 is certified against the oracle") {
  auto a = cat_map();
  for (long n : {1L, 2L, 3L, 4L, 6L}) {
    min_instance inst(a, n, 0.5);
    auto fast = min_sum(inst);
    auto slow = brute_force_oracle(inst, 30);
    REQUIRE(fast.certified);
    REQUIRE(fast.value == Catch::Approx(slow.value).epsilon(1e-10));
  }
  // spec'd spot value: n=1, alpha=0.5 has minimum |A k| = 1
  auto r = min_sum(min_instance(a, 1, 0.5));
  REQUIRE(r.value == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("min_coarse examples") {
  auto a = cat_map();
  auto r0 = min_coarse(min_instance(int_matrix::identity(2), 0, 1.0, min_variant::coarse));
  REQUIRE(r0.value_exact == 2);

  auto r2 = min_coarse(min_instance(a, 2, 1.0, min_variant::coarse));
  REQUIRE(r2.value_exact == 7);
  // (1,-1) and (1,-2) both reach 7; the lexicographic tie-break picks (1,-2)
  REQUIRE(r2.argmin == iv({1, -2}));
  {
    Int at = 0;
    for (const Int& c : r2.argmin) at += c * c;
    auto v = mat_pow(a, 2).apply(r2.argmin);
    for (const Int& c : v) at += c * c;
    REQUIRE(at == 7);
  }

  auto r1 = min_coarse(min_instance(a, 1, 1.0, min_variant::coarse));
  REQUIRE(r1.value_exact == 3);

  for (long n : {1L, 4L, 9L}) {
    auto r = min_coarse(min_instance(int_matrix::identity(2), n, 1.0, min_variant::coarse));
    REQUIRE(r.value_exact == 2);
  }
}

TEST_CASE("min_coarse against oracle with alpha = 0.7") {
  auto a = cat_map();
  for (long n : {1L, 3L, 5L}) {
    min_instance inst(a, n, 0.7, min_variant::coarse);
    auto fast = min_coarse(inst);
    auto slow = brute_force_oracle(inst, 40);
    REQUIRE(fast.certified);
    REQUIRE(fast.value == Catch::Approx(slow.value).epsilon(1e-10));
  }
}

TEST_CASE("min_degenerate with B = identity reduces to min_sum") {
  auto a = cat_map();
  for (long n : {1L, 2L, 4L}) {
    min_instance inst(a, n, 1.0, min_variant::degenerate);
    inst.b = Eigen::MatrixXd::Identity(2, 2);
    auto deg = min_degenerate(inst);
    auto plain = min_sum(min_instance(a, n));
    REQUIRE(deg.certified);
    REQUIRE(deg.value == Catch::Approx(plain.value).epsilon(1e-10));
    REQUIRE(deg.argmin == plain.argmin);
  }
}

TEST_CASE("min_degenerate with B = diag(1,0) on the cat map") {
  // objective: sum over l of the first component of A^l k, squared. Brute
  // force over |k|_inf <= 20 gives minimum 1, reached by (3,-5) (orbit
  // (1,-2) -> (0,-1)) and by (1,-2) (orbit (0,-1) -> (-1,-1)); the
  // tie-break selects (1,-2).
  auto a = cat_map();
  min_instance inst(a, 2, 1.0, min_variant::degenerate);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
  b(0, 0) = 1.0;
  inst.b = b;
  auto deg = min_degenerate(inst);
  auto oracle = brute_force_oracle(inst, 20);
  REQUIRE(deg.certified);
  REQUIRE(oracle.value == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(deg.value == Catch::Approx(oracle.value).epsilon(1e-10));
  REQUIRE(deg.argmin == iv({1, -2}));
}

TEST_CASE("min_degenerate along the unstable eigendirection reports infimum zero") {
  auto a = cat_map();
  double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Eigen::Vector2d u(phi, 1.0);
  u.normalize();
  min_instance inst(a, 3, 1.0, min_variant::degenerate);
  inst.b = Eigen::MatrixXd(u * u.transpose());
  auto r = min_degenerate(inst);
  REQUIRE(r.infimum_zero);
  REQUIRE_FALSE(r.certified);
  REQUIRE(r.search_radius == Catch::Approx(30.0));
  REQUIRE(r.value > 0.0);
}

TEST_CASE("brute_force_oracle examples and caps") {
  auto a = cat_map();
  REQUIRE(brute_force_oracle(min_instance(a, 3), 10).value_exact == 8);
  REQUIRE(brute_force_oracle(min_instance(int_matrix::identity(2), 5, 0.5), 3).value ==
          Catch::Approx(5.0));
  REQUIRE(brute_force_oracle(min_instance(a, 1, 0.5), 5).value == Catch::Approx(1.0));
  REQUIRE_THROWS_AS(brute_force_oracle(min_instance(a, 1), 51), precondition_error);
  min_instance d4(int_matrix::identity(4), 1);
  REQUIRE_THROWS_AS(brute_force_oracle(d4, 11), precondition_error);
}

TEST_CASE("certified minima agree with the oracle on random maps") {
  std::mt19937 rng(60601);
  for (int d = 2; d <= 3; ++d)
    for (int t = 0; t < 8; ++t) {
      auto a = random_sl(d, rng, 8, 12);
      for (long n : {1L, 3L, 5L}) {
        for (double alpha : {1.0, 0.5}) {
          min_instance inst(a, n, alpha);
          auto fast = solve_min(inst);
          REQUIRE(fast.certified);
          Int maxc = 0;
          for (const Int& v : fast.argmin) {
            Int av = abs(v);
            if (av > maxc) maxc = av;
          }
          if (maxc <= 28) {
            auto slow = brute_force_oracle(inst, std::min<long>(30, maxc.get_si() + 2 > 30 ? 30 : 30));
            REQUIRE(fast.value == Catch::Approx(slow.value).epsilon(1e-10));
          }
        }
      }
    }
}

TEST_CASE("property: strict monotonicity of M(n) for full_sum") {
  for (const auto& a : {cat_map(), shear_map(), plastic_map()}) {
    min_table table(a, 1.0);
    Int prev = 0;
    for (long n = 1; n <= 12; ++n) {
      Int v = table.value(n).value_exact;
      REQUIRE(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("property: M_alpha(n) >= M_1(n)^alpha") {
  auto a = plastic_map();
  min_table t1(a, 1.0);
  min_table th(a, 0.5);
  for (long n = 1; n <= 10; ++n) {
    double m1 = t1.value(n).value;
    double mh = th.value(n).value;
    REQUIRE(mh >= std::pow(m1, 0.5) - 1e-10);
  }
}

TEST_CASE("property: symmetric-window identity for the cat map") {
  // min over l = 1..2n+1 equals min over the symmetric window l = -n..n via
  // the substitution k -> A^(n+1) k; for the symmetric cat map the window
  // minimum is sum_l lambda^(2l) rounded to the nearest integer.
  auto a = cat_map();
  double lam = (3.0 + std::sqrt(5.0)) / 2.0;
  min_table table(a, 1.0);
  for (long n = 0; 2 * n + 1 <= 9; ++n) {
    long len = 2 * n + 1;
    Int m = table.value(len).value_exact;
    // reference: rounded symmetric eigenvalue sum
    long double s = 0.0L;
    for (long l = -n; l <= n; ++l) s += powl(static_cast<long double>(lam), 2.0L * l);
    REQUIRE(m == Int(static_cast<long>(llroundl(s))));

    // substitution check, exact: objective over l=1..len at the argmin z
    // equals the symmetric objective at A^(n+1) z
    auto z = table.value(len).argmin;
    auto shifted = mat_pow(a, n + 1).apply(z);
    Int sym = 0;
    for (long l = -n; l <= n; ++l) {
      auto v = mat_pow(a, l).apply(shifted);
      for (const Int& c : v) sym += c * c;
    }
    REQUIRE(sym == m);
  }
  // frozen values: lengths 1,3,5,7,9
  REQUIRE(table.value(1).value_exact == 1);
  REQUIRE(table.value(3).value_exact == 8);
  REQUIRE(table.value(5).value_exact == 55);
  REQUIRE(table.value(7).value_exact == 377);
  REQUIRE(table.value(9).value_exact == 2584);
}

TEST_CASE("property: invariance under signed permutation conjugation") {
  auto a = plastic_map();
  // S: signed permutation: (x,y,z) -> (z, -x, y)
  int_matrix s{{0, 0, 1}, {-1, 0, 0}, {0, 1, 0}};
  REQUIRE(abs(s.determinant()) == 1);
  int_matrix conj = s * a * s.unimodular_inverse();
  min_table ta(a, 1.0), tc(conj, 1.0);
  for (long n = 1; n <= 8; ++n) REQUIRE(ta.value(n).value_exact == tc.value(n).value_exact);
}

TEST_CASE("growth_rate_fit recovers h_hat for ergodic maps") {
  {
    min_table table(cat_map(), 1.0);
    auto fit = growth_rate_fit(table.curve(16));
    REQUIRE_FALSE(fit.linear_growth);
    REQUIRE(fit.rate == Catch::Approx(0.4812118250596035).margin(0.02));
  }
  {
    min_table table(plastic_map(), 1.0);
    auto fit = growth_rate_fit(table.curve(40));
    REQUIRE_FALSE(fit.linear_growth);
    REQUIRE(fit.rate == Catch::Approx(std::log(1.3247179572447454) / 3.0).margin(0.01));
  }
}

TEST_CASE("growth_rate_fit flags linear growth on the identity") {
  min_table table(int_matrix::identity(2), 1.0);
  auto fit = growth_rate_fit(table.curve(16));
  REQUIRE(fit.linear_growth);
}

TEST_CASE("growth_rate_fit requires enough certified data") {
  min_table table(cat_map(), 1.0);
  REQUIRE_THROWS_AS(growth_rate_fit(table.curve(4)), insufficient_data_error);
}

TEST_CASE("budget exhaustion degrades to an uncertified result") {
  auto r = min_sum(min_instance(cat_map(), 10), /*budget=*/2);
  REQUIRE_FALSE(r.certified);
  REQUIRE(r.budget_exceeded);
  REQUIRE(r.value_exact > 0);
}

TEST_CASE("min_curve CSV round-trips the fields") {
  min_table table(cat_map(), 1.0);
  auto csv = min_curve_csv(table.curve(3));
  REQUIRE(csv.find("n,value,argmin,certified,nodes") == 0);
  REQUIRE(csv.find("3,8,2 -3,true,") != std::string::npos);
}
