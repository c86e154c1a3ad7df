// toruslab command-line front end: spectral analysis, dissipation and dynamo
// sweeps, arithmetic minimum tables, and the truncated Fourier simulator.
// JSON reports go to stdout; with -o/--out BASE the tool writes BASE.json
// (and BASE.csv for commands that emit sweep or trajectory data).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "toruslab/io.hpp"
#include "toruslab/toruslab.hpp"

namespace {

using namespace toruslab;

constexpr int exit_ok = 0;
constexpr int exit_parse = 2;
constexpr int exit_budget = 3;
constexpr int exit_precondition = 4;
constexpr int exit_internal = 1;

struct output_sink {
  std::string base;  // empty: stdout JSON only

  void emit(const json& j, const std::string& csv = "") const {
    if (base.empty()) {
      std::cout << j.dump(2) << "\n";
      return;
    }
    {
      std::ofstream f(base + ".json");
      if (!f) throw error("cannot write " + base + ".json");
      f << j.dump(2) << "\n";
    }
    if (!csv.empty()) {
      std::ofstream f(base + ".csv");
      if (!f) throw error("cannot write " + base + ".csv");
      f << csv;
    }
    std::cout << "wrote " << base << ".json" << (csv.empty() ? "" : " and " + base + ".csv")
              << "\n";
  }
};

// geometric grid "start:stop:points", strictly decreasing
std::vector<double> parse_eps_grid(const std::string& text) {
  auto c1 = text.find(':');
  auto c2 = text.rfind(':');
  if (c1 == std::string::npos || c2 == c1)
    throw parse_error("eps grid must be start:stop:points, e.g. 1e-3:1e-9:7");
  double start = std::stod(text.substr(0, c1));
  double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  int points = std::stoi(text.substr(c2 + 1));
  if (!(start > stop) || !(stop > 0.0) || points < 2)
    throw parse_error("eps grid must be strictly decreasing with >= 2 points");
  std::vector<double> grid;
  for (int i = 0; i < points; ++i)
    grid.push_back(start * std::pow(stop / start, static_cast<double>(i) / (points - 1)));
  return grid;
}

Eigen::MatrixXd parse_real_matrix(const std::string& text) {
  auto rows = detail::split_matrix_text(text);
  int d = static_cast<int>(rows.size());
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != d)
      throw parse_error("degeneracy matrix is not square");
    for (int j = 0; j < d; ++j) {
      const std::string& s = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
      auto slash = s.find('/');
      if (slash != std::string::npos)
        m(i, j) = std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
      else
        m(i, j) = std::stod(s);
    }
  }
  return m;
}

shift_vector parse_shift(const std::string& text) {
  // rationals (possibly with '/') parse exactly; anything with '.' or 'e'
  // falls back to inexact reals
  bool exact = text.find('.') == std::string::npos && text.find('e') == std::string::npos &&
               text.find('E') == std::string::npos;
  if (exact) return parse_rat_vector(text);
  std::vector<double> v;
  for (const auto& cell : detail::split_matrix_text(text)[0]) v.push_back(std::stod(cell));
  return v;
}

struct common_options {
  std::string matrix;
  std::string shift;
  double alpha = 1.0;
  double eps = 0.0;
  std::string eps_grid;
  double eta = std::exp(-1.0);
  bool coarse = false;
  std::string degenerate_b;
  int cutoff = 64;
  long n_max = 0;
  std::string out;
  std::uint64_t budget = default_node_budget;
};

void add_common(CLI::App* cmd, common_options& o, bool need_matrix = true) {
  auto* m = cmd->add_option("-m,--matrix", o.matrix,
                            "integer matrix, rows ';'-separated: \"2,1;1,1\"");
  if (need_matrix) m->required();
  cmd->add_option("-c,--shift", o.shift, "affine shift vector, e.g. \"1/2,1/3\" or \"0.1,0.2\"");
  cmd->add_option("-a,--alpha", o.alpha, "stability index in (0,1]")->capture_default_str();
  cmd->add_option("-e,--eps", o.eps, "noise level");
  cmd->add_option("--eps-grid", o.eps_grid, "geometric grid start:stop:points, e.g. 1e-3:1e-9:7");
  cmd->add_option("--eta", o.eta, "dissipation threshold in (0,1)")->capture_default_str();
  cmd->add_flag("--coarse", o.coarse, "coarse-grained variant (noise only at entry/exit)");
  cmd->add_option("--degenerate-B", o.degenerate_b, "degenerate noise matrix B (real entries)");
  cmd->add_option("-K,--cutoff", o.cutoff, "Fourier mode cutoff |k|_inf <= K")
      ->capture_default_str();
  cmd->add_option("-n,--n-max", o.n_max, "iteration horizon");
  cmd->add_option("-o,--out", o.out, "output base path (writes .json and .csv)");
  cmd->add_option("--budget", o.budget, "enumeration node budget")->capture_default_str();
}

std::optional<Eigen::MatrixXd> degeneracy_of(const common_options& o) {
  if (o.degenerate_b.empty()) return std::nullopt;
  return parse_real_matrix(o.degenerate_b);
}

int check_budget_flags(const min_curve& curve) {
  for (const auto& [n, r] : curve.entries)
    if (r.budget_exceeded) {
      std::cerr << "enumeration budget exceeded at n = " << n << "\n";
      return exit_budget;
    }
  return exit_ok;
}

// ---------------------------------------------------------------------------

int cmd_analyze(const common_options& o) {
  int_matrix a = parse_unimodular_matrix(o.matrix);
  output_sink{o.out}.emit(to_json(analyze(a)));
  return exit_ok;
}

int cmd_dissipation(const common_options& o) {
  int_matrix a = parse_unimodular_matrix(o.matrix);
  if (o.eps_grid.empty()) throw parse_error("dissipation needs --eps-grid");
  auto grid = parse_eps_grid(o.eps_grid);

  json j;
  std::string csv;
  if (!o.degenerate_b.empty()) {
    auto b = degeneracy_of(o);
    if (degeneracy_case(a, *b) == degeneracy::no_dissipation) {
      j["classification"] = "none";
      j["note"] = "degenerate noise annihilates dissipation for this B (infimum 0, n_diss = inf)";
      output_sink{o.out}.emit(j);
      return exit_ok;
    }
    min_table table(a, o.alpha, min_variant::degenerate, b, o.budget);
    dissipation_report rep;
    rep.alpha = o.alpha;
    rep.eta = o.eta;
    rep.classification = classify(a);
    for (double eps : grid) {
      noise_model noise(eps, o.alpha);
      noise.threshold_eta = o.eta;
      long n = n_diss(table, noise);
      rep.entries.push_back({eps, n, -eps * table.value(n).value});
    }
    if (rep.classification == dissipation_class::logarithmic && rep.entries.size() >= 5) {
      std::vector<std::pair<double, double>> pts;
      for (size_t i = rep.entries.size() - 5; i < rep.entries.size(); ++i)
        pts.emplace_back(std::log(1.0 / rep.entries[i].epsilon),
                         static_cast<double>(rep.entries[i].n_diss));
      rep.r_diss_fit = detail::least_squares(pts).slope;
      rep.fit_residual = detail::least_squares(pts).residual;
      rep.r_diss_predicted = 1.0 / (2.0 * o.alpha * h_hat(a));
    }
    j = to_json(rep);
    j["degenerate"] = true;
    csv = dissipation_csv(rep);
  } else if (o.coarse) {
    dissipation_report rep;
    rep.alpha = o.alpha;
    rep.eta = o.eta;
    rep.classification = classify(a);
    bool any_infinite = false;
    for (double eps : grid) {
      noise_model noise(eps, o.alpha);
      noise.threshold_eta = o.eta;
      try {
        long n = n_diss_coarse(a, noise);
        rep.entries.push_back({eps, n, 0.0});
      } catch (const infinite_dissipation_error&) {
        any_infinite = true;
      }
    }
    if (rep.entries.empty()) rep.classification = dissipation_class::none;
    if (rep.classification == dissipation_class::logarithmic && rep.entries.size() >= 5) {
      std::vector<std::pair<double, double>> pts;
      for (size_t i = rep.entries.size() - 5; i < rep.entries.size(); ++i)
        pts.emplace_back(std::log(1.0 / rep.entries[i].epsilon),
                         static_cast<double>(rep.entries[i].n_diss));
      rep.r_diss_fit = detail::least_squares(pts).slope;
      rep.fit_residual = detail::least_squares(pts).residual;
      rep.r_diss_predicted = 1.0 / (2.0 * o.alpha * h_hat(a));
    }
    j = to_json(rep);
    j["coarse"] = true;
    if (any_infinite)
      j["note"] = "coarse minimum saturates at some grid points; those entries are omitted";
    csv = dissipation_csv(rep);
  } else {
    dissipation_report rep = r_diss_fit(a, o.alpha, grid, o.eta);
    j = to_json(rep);
    csv = dissipation_csv(rep);
  }
  output_sink{o.out}.emit(j, csv);
  return exit_ok;
}

int cmd_dynamo(const common_options& o) {
  int_matrix f = parse_unimodular_matrix(o.matrix);
  if (!o.eps_grid.empty()) {
    auto grid = parse_eps_grid(o.eps_grid);
    auto fit = peak_scaling_fit(f, o.alpha, grid);
    double eps_rep = grid.back();
    noise_model noise(eps_rep, o.alpha);
    dynamo_report rep = dynamo_scan(f, noise);
    rep.gamma_fit = fit.gamma;
    json j = to_json(rep);
    j["representative_epsilon"] = eps_rep;
    if (fit.predicted) j["gamma_predicted"] = *fit.predicted;
    json pts = json::array();
    for (auto [eps, peak] : fit.points) pts.push_back({{"epsilon", eps}, {"peak_log_norm", peak}});
    j["peak_points"] = std::move(pts);
    output_sink{o.out}.emit(j, dynamo_csv(rep));
    return exit_ok;
  }
  if (!(o.eps > 0.0)) throw parse_error("dynamo needs -e or --eps-grid");
  noise_model noise(o.eps, o.alpha);
  dynamo_report rep = o.n_max > 0 ? dynamo_scan(f, noise, o.n_max) : dynamo_scan(f, noise);
  output_sink{o.out}.emit(to_json(rep), dynamo_csv(rep));
  return exit_ok;
}

int cmd_simulate(const common_options& o, const std::string& f0_mode) {
  int_matrix f = parse_unimodular_matrix(o.matrix);
  toral_map map{f, {}};
  if (!o.shift.empty()) map.shift = parse_shift(o.shift);
  noise_model noise(o.eps, o.alpha);
  noise.degeneracy = degeneracy_of(o);
  mode_box box{f.dim(), o.cutoff};
  long n_max = o.n_max > 0 ? o.n_max : 20;

  truncated_operator op(map, noise, box);

  std::vector<int> mode(static_cast<size_t>(f.dim()), 0);
  mode[0] = 1;
  if (!f0_mode.empty()) {
    auto cells = detail::split_matrix_text(f0_mode)[0];
    if (static_cast<int>(cells.size()) != f.dim()) throw parse_error("f0 mode dimension mismatch");
    for (size_t i = 0; i < cells.size(); ++i) mode[i] = std::stoi(cells[i]);
  }
  auto traj = evolve_density(op, density_state::cosine(box, mode), n_max);

  // operator-norm columns: the exact value from the minimization ladder and
  // the truncated power-iteration estimate
  min_table table(op.koopman_matrix(), o.alpha,
                  noise.degeneracy ? min_variant::degenerate : min_variant::full_sum,
                  noise.degeneracy, o.budget);
  std::string csv = "n,l2_fluct,bg_entropy,dropped_mass,norm_analytic,norm_truncated\n";
  double max_dev = 0.0;
  char buf[160];
  for (const auto& p : traj) {
    double analytic = 1.0, truncated = 1.0;
    if (p.n >= 1) {
      auto est = norm_estimate(op, p.n);
      analytic = est.analytic;
      truncated = est.estimate;
      if (est.valid) max_dev = std::max(max_dev, std::abs(est.estimate - est.analytic));
    }
    std::snprintf(buf, sizeof buf, "%ld,%.12g,%.12g,%.12g,%.12g,%.12g\n", p.n, p.l2_fluct,
                  p.bg_entropy, p.dropped_mass, analytic, truncated);
    csv += buf;
  }

  json j;
  j["n_max"] = n_max;
  j["cutoff"] = box.cutoff;
  j["mode_count"] = box.mode_count();
  j["entropy_initial"] = traj.front().bg_entropy;
  j["entropy_final"] = traj.back().bg_entropy;
  j["l2_fluct_initial"] = traj.front().l2_fluct;
  j["l2_fluct_final"] = traj.back().l2_fluct;
  j["dropped_mass_total"] = traj.back().dropped_mass;
  j["max_norm_cross_check_deviation"] = max_dev;
  output_sink{o.out}.emit(j, csv);
  return exit_ok;
}

int cmd_mincurve(const common_options& o) {
  int_matrix a = parse_unimodular_matrix(o.matrix);
  long n_max = o.n_max > 0 ? o.n_max : 16;
  min_variant variant = o.coarse ? min_variant::coarse
                        : !o.degenerate_b.empty() ? min_variant::degenerate
                                                  : min_variant::full_sum;
  min_table table(a, o.alpha, variant, degeneracy_of(o), o.budget);
  min_curve curve = table.curve(n_max);
  int rc = check_budget_flags(curve);
  if (rc != exit_ok) return rc;

  json j;
  j["alpha"] = o.alpha;
  j["variant"] = variant == min_variant::full_sum ? "full_sum"
                 : variant == min_variant::coarse ? "coarse"
                                                  : "degenerate";
  j["n_max"] = n_max;
  auto fit_ok = curve.entries.size() >= 6;
  if (fit_ok) {
    try {
      auto fit = growth_rate_fit(curve);
      j["growth_rate"] = fit.rate;
      j["linear_growth"] = fit.linear_growth;
      j["fit_residual"] = fit.residual;
    } catch (const insufficient_data_error&) {
      j["growth_rate"] = nullptr;
    }
  }
  output_sink{o.out}.emit(j, min_curve_csv(curve));
  return exit_ok;
}

int cmd_classify_affine(const common_options& o, long height) {
  int_matrix f = parse_unimodular_matrix(o.matrix);
  toral_map map{f, {}};
  if (!o.shift.empty()) map.shift = parse_shift(o.shift);
  else map.shift = rat_vector{std::vector<Rat>(static_cast<size_t>(f.dim()), Rat(0))};
  output_sink{o.out}.emit(to_json(classify_affine(map, height)));
  return exit_ok;
}

int cmd_degeneracy_check(const common_options& o) {
  int_matrix a = parse_unimodular_matrix(o.matrix);
  if (o.degenerate_b.empty()) throw parse_error("degeneracy-check needs --degenerate-B");
  auto b = degeneracy_of(o);
  json j;
  j["case"] = degeneracy_case(a, *b) == degeneracy::no_dissipation ? "no_dissipation"
                                                                   : "effective";
  output_sink{o.out}.emit(j);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "toruslab: noise-induced dissipation times, arithmetic minima, and kinematic-dynamo "
      "time scales of toral automorphisms"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a TOML config file");

  common_options o_analyze, o_diss, o_dyn, o_sim, o_curve, o_aff, o_deg;
  std::string f0_mode;
  long height = 0;

  add_common(app.add_subcommand("analyze", "spectral and arithmetic classification"), o_analyze);
  add_common(app.add_subcommand("dissipation", "dissipation-time sweep and rate-constant fit"),
             o_diss);
  add_common(app.add_subcommand("dynamo", "push-forward norm scan and peak scaling"), o_dyn);
  auto* sim = app.add_subcommand("simulate", "truncated Fourier-mode simulation");
  add_common(sim, o_sim);
  sim->add_option("--f0-mode", f0_mode, "cosine mode of the initial density (default 1,0,...)");
  add_common(app.add_subcommand("mincurve", "raw M(n) table"), o_curve);
  auto* aff = app.add_subcommand("classify-affine", "ergodicity of F + c");
  add_common(aff, o_aff);
  aff->add_option("--height", height, "integer-relation search height for real shifts");
  add_common(app.add_subcommand("degeneracy-check", "degenerate-noise spanning test"), o_deg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_parse;
  }

  try {
    if (app.got_subcommand("analyze")) return cmd_analyze(o_analyze);
    if (app.got_subcommand("dissipation")) return cmd_dissipation(o_diss);
    if (app.got_subcommand("dynamo")) return cmd_dynamo(o_dyn);
    if (app.got_subcommand("simulate")) return cmd_simulate(o_sim, f0_mode);
    if (app.got_subcommand("mincurve")) return cmd_mincurve(o_curve);
    if (app.got_subcommand("classify-affine")) return cmd_classify_affine(o_aff, height);
    if (app.got_subcommand("degeneracy-check")) return cmd_degeneracy_check(o_deg);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_parse;
  } catch (const non_unimodular_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_parse;
  } catch (const precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_precondition;
  } catch (const not_diagonalizable_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_precondition;
  } catch (const infinite_dissipation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_precondition;
  } catch (const no_peak_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_precondition;
  } catch (const insufficient_data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_precondition;
  } catch (const negative_density_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_precondition;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_internal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_internal;
  }
  return exit_ok;
}
