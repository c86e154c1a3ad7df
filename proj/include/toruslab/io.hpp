#pragma once

// JSON serialization of the report types. The field names here are the wire
// format: eigenvalues as [re, im, multiplicity] triples, polynomial factors
// as ascending coefficient arrays (see docs/formats.md).

#include <json.hpp>

#include "toruslab/dissipation.hpp"
#include "toruslab/dynamo.hpp"
#include "toruslab/spectral.hpp"

namespace toruslab {

using json = nlohmann::json;

inline json to_json(const spectral_report& r) {
  json j;
  j["dim"] = r.dim;
  json eigs = json::array();
  for (const auto& e : r.eigenvalues)
    eigs.push_back({e.value.real(), e.value.imag(), e.multiplicity});
  j["eigenvalues"] = std::move(eigs);
  j["entropy_h"] = r.entropy;
  j["spectral_radius_rho"] = r.spectral_radius;
  j["ergodic"] = r.ergodic;
  j["diagonalizable"] = r.diagonalizable;
  j["zero_entropy"] = r.zero_entropy;
  j["irreducible"] = r.irreducible;
  json factors = json::array();
  for (const auto& f : r.factors) {
    json fj;
    json coeffs = json::array();
    for (const Int& c : f.poly.coefficients()) coeffs.push_back(c.get_str());
    fj["coefficients"] = std::move(coeffs);
    fj["degree_dj"] = f.degree;
    fj["entropy_hj"] = f.entropy;
    fj["h_hat_j"] = f.h_hat;
    fj["multiplicity"] = f.multiplicity;
    factors.push_back(std::move(fj));
  }
  j["factors"] = std::move(factors);
  j["h_hat"] = r.h_hat;
  j["lambda_hat_geo"] = r.lambda_hat_geo;
  return j;
}

inline spectral_report spectral_report_from_json(const json& j) {
  spectral_report r;
  r.dim = j.at("dim").get<int>();
  for (const auto& e : j.at("eigenvalues"))
    r.eigenvalues.push_back(
        {{e.at(0).get<double>(), e.at(1).get<double>()}, e.at(2).get<int>()});
  r.entropy = j.at("entropy_h").get<double>();
  r.spectral_radius = j.at("spectral_radius_rho").get<double>();
  r.ergodic = j.at("ergodic").get<bool>();
  r.diagonalizable = j.at("diagonalizable").get<bool>();
  r.zero_entropy = j.at("zero_entropy").get<bool>();
  r.irreducible = j.at("irreducible").get<bool>();
  for (const auto& fj : j.at("factors")) {
    factor_block f;
    std::vector<Int> coeffs;
    for (const auto& c : fj.at("coefficients")) coeffs.emplace_back(c.get<std::string>());
    f.poly = int_polynomial(std::move(coeffs));
    f.degree = fj.at("degree_dj").get<int>();
    f.entropy = fj.at("entropy_hj").get<double>();
    f.h_hat = fj.at("h_hat_j").get<double>();
    f.multiplicity = fj.at("multiplicity").get<int>();
    r.factors.push_back(std::move(f));
  }
  r.h_hat = j.at("h_hat").get<double>();
  r.lambda_hat_geo = j.at("lambda_hat_geo").get<double>();
  return r;
}

inline json to_json(const dissipation_report& r) {
  json j;
  j["classification"] = to_string(r.classification);
  j["alpha"] = r.alpha;
  j["eta"] = r.eta;
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"epsilon", e.epsilon}, {"n_diss", e.n_diss}, {"log_norm", e.log_norm}});
  j["entries"] = std::move(entries);
  j["r_diss_fit"] = r.r_diss_fit;
  j["r_diss_predicted"] = r.r_diss_predicted;
  j["fit_residual"] = r.fit_residual;
  return j;
}

inline dissipation_report dissipation_report_from_json(const json& j) {
  dissipation_report r;
  std::string cls = j.at("classification").get<std::string>();
  r.classification = cls == "simple" ? dissipation_class::simple
                     : cls == "logarithmic" ? dissipation_class::logarithmic
                                            : dissipation_class::none;
  r.alpha = j.at("alpha").get<double>();
  r.eta = j.at("eta").get<double>();
  for (const auto& e : j.at("entries"))
    r.entries.push_back({e.at("epsilon").get<double>(), e.at("n_diss").get<long>(),
                         e.at("log_norm").get<double>()});
  r.r_diss_fit = j.at("r_diss_fit").get<double>();
  r.r_diss_predicted = j.at("r_diss_predicted").get<double>();
  r.fit_residual = j.at("fit_residual").get<double>();
  return r;
}

inline json to_json(const dynamo_report& r) {
  json j;
  j["classification"] = to_string(r.classification);
  j["r_dyn"] = r.r_dyn;
  j["r_dyn_divergent"] = r.r_dyn_divergent;
  j["n_p"] = r.n_p;
  j["peak_log_norm"] = r.peak_log_norm;
  if (r.n_th)
    j["n_th"] = *r.n_th;
  else
    j["n_th"] = nullptr;
  j["scan_capped"] = r.scan_capped;
  if (std::isnan(r.gamma_fit))
    j["gamma_fit"] = nullptr;
  else
    j["gamma_fit"] = r.gamma_fit;
  return j;
}

inline json to_json(const affine_classification& c) {
  json j;
  switch (c.value) {
    case affine_class::ergodic: j["class"] = "ergodic"; break;
    case affine_class::nonergodic: j["class"] = "nonergodic"; break;
    case affine_class::heuristic_ergodic: j["class"] = "heuristic_ergodic"; break;
  }
  j["height_bound"] = c.height_bound;
  return j;
}

inline json to_json(const robustness_table& t) {
  json j;
  j["etas"] = t.etas;
  json entries = json::array();
  for (const auto& e : t.entries)
    entries.push_back({{"epsilon", e.epsilon}, {"n_diss", e.n_diss_per_eta}});
  j["entries"] = std::move(entries);
  j["all_within_bound"] = t.all_within_bound;
  return j;
}

// CSV readers for the tool's own emissions (round-trip support).

inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::string cell;
  std::vector<std::string> row;
  for (char ch : text) {
    if (ch == ',') {
      row.push_back(cell);
      cell.clear();
    } else if (ch == '\n') {
      row.push_back(cell);
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else {
      cell.push_back(ch);
    }
  }
  if (!cell.empty() || !row.empty()) {
    row.push_back(cell);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace toruslab
