#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"
#include "toruslab/io.hpp"

using namespace toruslab;
using namespace toruslab::testing;

TEST_CASE("spectral report JSON round trip") {
  auto rep = analyze(blockdiag(cat_map(), plastic_map()));
  json j = to_json(rep);
  auto back = spectral_report_from_json(json::parse(j.dump()));
  REQUIRE(back.dim == rep.dim);
  REQUIRE(back.ergodic == rep.ergodic);
  REQUIRE(back.zero_entropy == rep.zero_entropy);
  REQUIRE(back.diagonalizable == rep.diagonalizable);
  REQUIRE(back.entropy == rep.entropy);
  REQUIRE(back.h_hat == rep.h_hat);
  REQUIRE(back.factors.size() == rep.factors.size());
  for (size_t i = 0; i < rep.factors.size(); ++i) {
    REQUIRE(back.factors[i].poly == rep.factors[i].poly);
    REQUIRE(back.factors[i].multiplicity == rep.factors[i].multiplicity);
  }
  REQUIRE(back.eigenvalues.size() == rep.eigenvalues.size());
  for (size_t i = 0; i < rep.eigenvalues.size(); ++i)
    REQUIRE(back.eigenvalues[i].value == rep.eigenvalues[i].value);
}

TEST_CASE("eigenvalue triples carry re, im, multiplicity") {
  json j = to_json(analyze(rotation_map()));
  REQUIRE(j["eigenvalues"].size() == 2);
  REQUIRE(j["eigenvalues"][0].size() == 3);
  REQUIRE(j["eigenvalues"][0][2] == 1);
  // Phi_4 = x^2 + 1 as an ascending coefficient array of strings
  REQUIRE(j["factors"][0]["coefficients"] == json::array({"1", "0", "1"}));
}

TEST_CASE("dissipation report JSON round trip") {
  std::vector<double> grid = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  auto rep = r_diss_fit(cat_map(), 1.0, grid);
  auto back = dissipation_report_from_json(json::parse(to_json(rep).dump()));
  REQUIRE(back.classification == rep.classification);
  REQUIRE(back.entries.size() == rep.entries.size());
  for (size_t i = 0; i < rep.entries.size(); ++i) {
    REQUIRE(back.entries[i].epsilon == rep.entries[i].epsilon);
    REQUIRE(back.entries[i].n_diss == rep.entries[i].n_diss);
  }
  REQUIRE(back.r_diss_fit == rep.r_diss_fit);
  REQUIRE(back.r_diss_predicted == rep.r_diss_predicted);
}

TEST_CASE("dynamo report JSON fields") {
  auto rep = dynamo_scan(shear_map(), noise_model(0.02));
  json j = to_json(rep);
  REQUIRE(j["classification"] == "anti_dynamo");
  REQUIRE(j["n_p"].get<long>() == rep.n_p);
  REQUIRE(j["gamma_fit"].is_null());  // not a sweep
  REQUIRE(j["n_th"].get<long>() == *rep.n_th);

  auto rep_id = dynamo_scan(int_matrix::identity(2), noise_model(0.1));
  REQUIRE(to_json(rep_id)["n_th"].is_null());
}

TEST_CASE("emitted CSV is parseable by the tool's own reader") {
  min_table table(cat_map(), 1.0);
  auto csv = parse_csv(min_curve_csv(table.curve(6)));
  REQUIRE(csv.front() == std::vector<std::string>{"n", "value", "argmin", "certified", "nodes"});
  REQUIRE(csv.size() == 7);  // header + 6 rows
  REQUIRE(csv[3][0] == "3");
  REQUIRE(csv[3][1] == "8");
  REQUIRE(csv[3][2] == "2 -3");

  auto rep = r_diss_fit(int_matrix::identity(2), 1.0, {1e-2, 2e-3, 1e-3, 5e-4, 1e-4});
  auto dcsv = parse_csv(dissipation_csv(rep));
  REQUIRE(dcsv.front() ==
          std::vector<std::string>{"epsilon", "n_diss", "log_norm_at_n_diss"});
  REQUIRE(std::stol(dcsv[1][1]) == rep.entries[0].n_diss);
}

TEST_CASE("golden byte stability under a fixed configuration") {
  auto run = [] {
    min_table table(plastic_map(), 1.0);
    return min_curve_csv(table.curve(10)) + to_json(analyze(plastic_map())).dump(2) +
           dissipation_csv(r_diss_fit(plastic_map(), 1.0, {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}));
  };
  REQUIRE(run() == run());
}

TEST_CASE("robustness table JSON") {
  auto tab = threshold_robustness(cat_map(), 1.0, {1e-4}, {0.5, 0.1});
  json j = to_json(tab);
  REQUIRE(j["all_within_bound"].get<bool>());
  REQUIRE(j["entries"][0]["n_diss"].size() == 2);
}

TEST_CASE("affine classification JSON") {
  toral_map m{int_matrix::identity(2), std::vector<double>{std::sqrt(2.0), std::sqrt(3.0)}};
  json j = to_json(classify_affine(m));
  REQUIRE(j["class"] == "heuristic_ergodic");
  REQUIRE(j["height_bound"].get<long>() > 0);
}
