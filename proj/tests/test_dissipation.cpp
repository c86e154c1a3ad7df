#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"
#include "toruslab/dissipation.hpp"

using namespace toruslab;
using namespace toruslab::testing;

TEST_CASE("operator_norm examples") {
  {
    min_table t(int_matrix::identity(2), 1.0);
    auto r = operator_norm(t, noise_model(0.01), 100);
    REQUIRE(r.log_norm == -1.0);  // M(n) = n exactly
    REQUIRE(r.norm == Catch::Approx(std::exp(-1.0)).epsilon(1e-14));
  }
  {
    min_table t(cat_map(), 1.0);
    REQUIRE(operator_norm(t, noise_model(1.0), 1).log_norm == -1.0);
    REQUIRE(operator_norm(t, noise_model(1.0), 3).log_norm == -8.0);
  }
}

TEST_CASE("n_diss examples") {
  REQUIRE(n_diss(int_matrix::identity(2), noise_model(0.01)) == 101);
  REQUIRE(n_diss(shear_map(), noise_model(0.01)) == 101);
  // cat map at eps = 1e-6: M(n) = F_{2n}, F_30 = 832040 <= 1e6 < F_32
  REQUIRE(n_diss(cat_map(), noise_model(1e-6)) == 16);
  // eps = 1, n = 1: eps M(1) = 1 = ln(1/eta) exactly; the strict-inequality
  // convention counts the boundary as not dissipated
  REQUIRE(n_diss(cat_map(), noise_model(1.0)) == 2);
}

TEST_CASE("n_diss under degenerate noise") {
  auto a = cat_map();
  noise_model effective(1e-3);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
  b(0, 0) = 1.0;
  effective.degeneracy = b;
  long n_eff = n_diss(a, effective);
  REQUIRE(n_eff >= 1);

  double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Eigen::Vector2d u(phi, 1.0);
  u.normalize();
  noise_model dead(1e-3);
  dead.degeneracy = Eigen::MatrixXd(u * u.transpose());
  REQUIRE_THROWS_AS(n_diss(a, dead), infinite_dissipation_error);
}

TEST_CASE("classify is a pure spectral decision") {
  REQUIRE(classify(cat_map()) == dissipation_class::logarithmic);
  REQUIRE(classify(shear_map()) == dissipation_class::simple);
  REQUIRE(classify(rotation_map()) == dissipation_class::simple);
  REQUIRE(classify(plastic_map()) == dissipation_class::logarithmic);
  REQUIRE(classify(blockdiag(cat_map(), int_matrix::identity(1))) == dissipation_class::simple);
}

namespace {
std::vector<double> geometric_grid(double lo_exp, double hi_exp, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i)
    g.push_back(std::pow(10.0, lo_exp + (hi_exp - lo_exp) * i / (points - 1)));
  return g;
}
}  // namespace

TEST_CASE("r_diss_fit on the cat map matches the rate-constant prediction") {
  auto grid = geometric_grid(-3, -9, 7);
  auto rep = r_diss_fit(cat_map(), 1.0, grid);
  REQUIRE(rep.classification == dissipation_class::logarithmic);
  REQUIRE(rep.r_diss_predicted == Catch::Approx(1.0 / (2.0 * h_hat(cat_map()))).epsilon(1e-12));
  REQUIRE(std::abs(rep.r_diss_fit - rep.r_diss_predicted) / rep.r_diss_predicted < 0.05);
  // entries sorted by decreasing epsilon with strictly positive times
  for (size_t i = 1; i < rep.entries.size(); ++i) {
    REQUIRE(rep.entries[i].epsilon < rep.entries[i - 1].epsilon);
    REQUIRE(rep.entries[i].n_diss >= rep.entries[i - 1].n_diss);
  }
}

TEST_CASE("r_diss_fit with alpha = 1/2 doubles the rate constant") {
  auto grid = geometric_grid(-3, -9, 7);
  auto rep = r_diss_fit(cat_map(), 0.5, grid);
  REQUIRE(rep.r_diss_predicted == Catch::Approx(1.0 / h_hat(cat_map())).epsilon(1e-12));
  REQUIRE(std::abs(rep.r_diss_fit - rep.r_diss_predicted) / rep.r_diss_predicted < 0.05);
}

TEST_CASE("r_diss_fit on the identity reports the simple class") {
  auto rep = r_diss_fit(int_matrix::identity(2), 1.0, geometric_grid(-2, -4, 5));
  REQUIRE(rep.classification == dissipation_class::simple);
  REQUIRE(rep.r_diss_fit == Catch::Approx(1.0).margin(0.02));
  REQUIRE(rep.r_diss_predicted == Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("n_diss_coarse examples") {
  // saturation: the identity's coarse minimum is constant 2
  noise_model small(0.01);
  REQUIRE_THROWS_AS(n_diss_coarse(int_matrix::identity(2), small), infinite_dissipation_error);

  // the same certificate fires for a nonergodic positive-entropy block map
  REQUIRE_THROWS_AS(n_diss_coarse(blockdiag(cat_map(), int_matrix::identity(1)), small),
                    infinite_dissipation_error);
  // while the standard dissipation time is finite
  REQUIRE(n_diss(blockdiag(cat_map(), int_matrix::identity(1)), small) == 101);

  // cat map, eps = 1: coarse minimum at n = 1 is 3 > ln(1/eta) = 1
  REQUIRE(n_diss_coarse(cat_map(), noise_model(1.0)) == 1);

  // asymptotic equivalence with the standard time at small eps
  long nc = n_diss_coarse(cat_map(), noise_model(1e-6));
  long nd = n_diss(cat_map(), noise_model(1e-6));
  REQUIRE(std::abs(nc - nd) <= 2);
}

TEST_CASE("threshold_robustness ratio bounds") {
  {
    auto tab = threshold_robustness(cat_map(), 1.0, {1e-6}, {0.5, std::exp(-1.0), 0.1});
    REQUIRE(tab.all_within_bound);
    // k = ceil(ln 0.1 / ln 0.5) = 4
    const auto& e = tab.entries[0];
    for (long n : e.n_diss_per_eta) REQUIRE(n >= 1);
    double r = static_cast<double>(e.n_diss_per_eta[2]) / e.n_diss_per_eta[0];
    REQUIRE(r <= 4.0);
    REQUIRE(r >= 0.25);
  }
  {
    min_table t(int_matrix::identity(2), 1.0);
    noise_model n2(0.01);
    n2.threshold_eta = std::exp(-2.0);
    REQUIRE(n_diss(t, n2) == 201);
    noise_model n1(0.01);
    REQUIRE(static_cast<double>(n_diss(t, n2)) / n_diss(t, n1) < 2.0);
  }
  {
    auto tab = threshold_robustness(shear_map(), 1.0, {1e-2, 1e-3}, {0.3, 0.3});
    for (const auto& e : tab.entries) REQUIRE(e.n_diss_per_eta[0] == e.n_diss_per_eta[1]);
    REQUIRE(tab.all_within_bound);
  }
}

TEST_CASE("property: contraction bound log||T^n|| <= -eps n") {
  for (const auto& a : {cat_map(), shear_map(), plastic_map()}) {
    min_table t(a, 1.0);
    noise_model noise(0.37);
    for (long n = 1; n <= 10; ++n)
      REQUIRE(operator_norm(t, noise, n).log_norm <= -noise.epsilon * n + 1e-12);
  }
}

TEST_CASE("property: n_diss is nonincreasing in eps and alpha") {
  auto a = cat_map();
  // shrinking the noise can only delay dissipation
  long prev = 0;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
    long n = n_diss(a, noise_model(eps));
    REQUIRE(n >= prev);
    prev = n;
  }
  // and |A^l k| >= 1 makes the objective nondecreasing in alpha
  for (double eps : {1e-3, 1e-5, 1e-7}) {
    long n_half = n_diss(a, noise_model(eps, 0.5));
    long n_full = n_diss(a, noise_model(eps, 1.0));
    REQUIRE(n_full <= n_half);
  }
}

TEST_CASE("property: absolute upper bound n_diss <= ceil(1/eps) + 1") {
  std::mt19937 rng(808);
  for (int d = 2; d <= 3; ++d)
    for (int t = 0; t < 5; ++t) {
      auto a = random_sl(d, rng, 8, 12);
      for (double eps : {0.5, 0.05, 0.02})
        for (double alpha : {1.0, 0.5}) {
          long n = n_diss(a, noise_model(eps, alpha));
          REQUIRE(n <= static_cast<long>(std::ceil(1.0 / eps)) + 1);
        }
    }
}

TEST_CASE("dissipation CSV layout") {
  auto rep = r_diss_fit(int_matrix::identity(2), 1.0, geometric_grid(-2, -4, 5));
  auto csv = dissipation_csv(rep);
  REQUIRE(csv.rfind("epsilon,n_diss,log_norm_at_n_diss\n", 0) == 0);
  REQUIRE(csv.find("0.01,101,") != std::string::npos);
}
