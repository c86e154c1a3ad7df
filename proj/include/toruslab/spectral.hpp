#pragma once

// Spectral and arithmetic classification of toral maps: eigenvalues, KS
// entropy, exact ergodicity and zero-entropy decisions, irreducible
// factorization over Q with per-block entropies, the minimal dimensionally
// averaged entropy, affine-shift ergodicity, and the degenerate-noise
// spanning test.
//
// Ergodicity and zero entropy are decided by exact cyclotomic divisibility
// over Z, never by float thresholds on |lambda|: eigenvalues of
// near-parabolic matrices sit numerically on the unit circle.

#include <Eigen/Dense>

#include <complex>
#include <numeric>
#include <variant>

#include "toruslab/factor.hpp"

namespace toruslab {

namespace detail {

inline std::complex<long double> eval_poly_ld(const int_polynomial& f,
                                              std::complex<long double> z) {
  std::complex<long double> acc = 0.0L;
  for (int i = f.degree(); i >= 0; --i) acc = acc * z + mpz_to_long_double(f.coeff(i));
  return acc;
}

// Newton refinement of the companion-matrix estimates on the exact
// polynomial, evaluated in long double (~2x the target precision).
inline std::complex<long double> refine_root(const int_polynomial& f,
                                             std::complex<long double> z) {
  int_polynomial df = f.derivative();
  std::complex<long double> best = z;
  long double best_res = std::abs(eval_poly_ld(f, z));
  for (int it = 0; it < 100; ++it) {
    std::complex<long double> fz = eval_poly_ld(f, z);
    std::complex<long double> dfz = eval_poly_ld(df, z);
    if (std::abs(dfz) == 0.0L) break;
    std::complex<long double> step = fz / dfz;
    z -= step;
    long double res = std::abs(eval_poly_ld(f, z));
    if (res < best_res) {
      best = z;
      best_res = res;
    }
    if (std::abs(step) <= 1e-17L * (1.0L + std::abs(z))) break;
  }
  // Residual sanity: |f(z)| should be tiny relative to the coefficient scale.
  long double scale = 0.0L;
  for (const Int& c : f.coefficients()) scale = std::max(scale, std::abs(mpz_to_long_double(c)));
  long double zpow = 1.0L;
  for (int i = 0; i < f.degree(); ++i) zpow *= std::max(1.0L, std::abs(best));
  if (best_res > 1e-9L * scale * zpow)
    throw convergence_failure("root refinement stalled; residual " +
                              std::to_string(static_cast<double>(best_res)));
  return best;
}

// All roots of a monic squarefree integer polynomial, conjugate pairing
// enforced exactly.
inline std::vector<std::complex<long double>> squarefree_roots(const int_polynomial& f) {
  int n = f.degree();
  if (n == 0) return {};
  if (n == 1) return {std::complex<long double>(-mpz_to_long_double(f.coeff(0)), 0.0L)};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -f.coeff(i).get_d();
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);

  std::vector<std::complex<long double>> roots;
  roots.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::complex<long double> z(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
    roots.push_back(refine_root(f, z));
  }

  // Snap near-real roots and enforce exact conjugate pairs.
  for (auto& z : roots)
    if (std::abs(z.imag()) <= 1e-13L * (1.0L + std::abs(z))) z = {z.real(), 0.0L};
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  for (size_t i = 0; i < roots.size(); ++i) {
    if (roots[i].imag() <= 0.0L) continue;
    // find the matching conjugate (closest root with negative imaginary part)
    size_t match = roots.size();
    long double best = 1e30L;
    for (size_t j = 0; j < roots.size(); ++j) {
      if (roots[j].imag() >= 0.0L) continue;
      long double dist = std::abs(roots[j] - std::conj(roots[i]));
      if (dist < best) {
        best = dist;
        match = j;
      }
    }
    if (match < roots.size()) {
      long double re = (roots[i].real() + roots[match].real()) / 2.0L;
      long double im = (roots[i].imag() - roots[match].imag()) / 2.0L;
      roots[i] = {re, im};
      roots[match] = {re, -im};
    }
  }
  return roots;
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct eigenvalue {
  std::complex<double> value;
  int multiplicity = 1;
};

struct factor_block {
  int_polynomial poly;  // monic irreducible over Q
  int degree = 0;
  double entropy = 0.0;        // sum of ln|root| over roots with |root| >= 1
  double h_hat = 0.0;          // entropy / degree
  int multiplicity = 1;        // power in the characteristic polynomial
  std::vector<std::complex<double>> roots;
};

struct spectral_report {
  int dim = 0;
  std::vector<eigenvalue> eigenvalues;
  double entropy = 0.0;
  double spectral_radius = 1.0;
  bool ergodic = false;
  bool diagonalizable = false;
  bool zero_entropy = false;
  bool irreducible = false;
  std::vector<factor_block> factors;
  double h_hat = 0.0;
  double lambda_hat_geo = 1.0;  // exp(h_hat)
};

namespace detail {

// Entropy of one irreducible block from its refined roots. Roots within 1e-9
// of the unit circle contribute zero; whether they are genuine roots of unity
// is decided exactly elsewhere.
inline double block_entropy(const std::vector<std::complex<long double>>& roots) {
  long double h = 0.0L;
  for (const auto& z : roots) {
    long double m = std::abs(z);
    if (std::abs(m - 1.0L) <= 1e-9L) continue;
    if (m > 1.0L) h += std::log(m);
  }
  return static_cast<double>(h);
}

}  // namespace detail

// Factorization of char_poly(A) with per-block roots and entropies.
inline std::vector<factor_block> factor_spectrum(const int_matrix& a) {
  std::vector<factor_block> blocks;
  for (const auto& [poly, mult] : factor_over_q(char_poly(a))) {
    factor_block b;
    b.poly = poly;
    b.degree = poly.degree();
    b.multiplicity = mult;
    auto roots = detail::squarefree_roots(poly);
    b.entropy = detail::block_entropy(roots);
    b.h_hat = b.entropy / b.degree;
    for (const auto& z : roots)
      b.roots.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
    blocks.push_back(std::move(b));
  }
  return blocks;
}

// All d eigenvalues with algebraic multiplicities, |error| ~ 1e-12 after
// refinement; conjugate pairing is exact by construction.
inline std::vector<eigenvalue> eigenvalues(const int_matrix& a) {
  std::vector<eigenvalue> out;
  for (const auto& b : factor_spectrum(a))
    for (const auto& z : b.roots) out.push_back({z, b.multiplicity});
  std::sort(out.begin(), out.end(), [](const eigenvalue& x, const eigenvalue& y) {
    if (x.value.real() != y.value.real()) return x.value.real() > y.value.real();
    return x.value.imag() > y.value.imag();
  });
  return out;
}

// KS entropy h(A) = sum over |lambda| >= 1 of ln|lambda|.
inline double entropy(const int_matrix& a) {
  if (!a.is_unimodular()) throw non_unimodular_error("entropy requires |det| = 1");
  double h = 0.0;
  for (const auto& b : factor_spectrum(a)) h += b.entropy * b.multiplicity;
  return h;
}

// Exact decision: ergodic iff no cyclotomic polynomial divides char_poly.
inline bool is_ergodic(const int_matrix& a) {
  if (!a.is_unimodular()) throw non_unimodular_error("is_ergodic requires |det| = 1");
  int_polynomial cp = char_poly(a);
  for (int m : cyclotomic_orders(a.dim()))
    if (cp.divisible_by(cyclotomic(m))) return false;
  return true;
}

// Exact decision: true iff char_poly is a product of cyclotomic polynomials.
inline bool zero_entropy_class(const int_matrix& a) {
  if (!a.is_unimodular()) throw non_unimodular_error("zero_entropy_class requires |det| = 1");
  int_polynomial p = char_poly(a);
  const auto orders = cyclotomic_orders(a.dim());
  bool progress = true;
  while (p.degree() > 0 && progress) {
    progress = false;
    for (int m : orders) {
      const int_polynomial& phi = cyclotomic(m);
      while (p.degree() >= phi.degree() && p.divisible_by(phi)) {
        p = p.exact_div(phi);
        progress = true;
      }
    }
  }
  return p.degree() == 0;
}

// Minimal dimensionally averaged entropy: min over irreducible factors of
// (factor entropy) / (factor degree).
inline double h_hat(const int_matrix& a) {
  if (!a.is_unimodular()) throw non_unimodular_error("h_hat requires |det| = 1");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : factor_spectrum(a)) best = std::min(best, b.h_hat);
  return best;
}

// Exact: diagonalizable iff the squarefree radical of char_poly annihilates A.
inline bool is_diagonalizable(const int_matrix& a) {
  int_polynomial radical{1};
  for (const auto& [poly, mult] : factor_over_q(char_poly(a))) radical = radical * poly;
  return radical.eval_matrix(a).is_zero();
}

inline bool is_irreducible(const int_matrix& a) {
  auto factors = factor_over_q(char_poly(a));
  return factors.size() == 1 && factors[0].second == 1 && factors[0].first.degree() == a.dim();
}

inline spectral_report analyze(const int_matrix& a) {
  if (!a.is_unimodular()) throw non_unimodular_error("analyze requires |det| = 1");
  spectral_report r;
  r.dim = a.dim();
  r.factors = factor_spectrum(a);
  r.entropy = 0.0;
  r.h_hat = std::numeric_limits<double>::infinity();
  r.spectral_radius = 0.0;
  for (const auto& b : r.factors) {
    r.entropy += b.entropy * b.multiplicity;
    r.h_hat = std::min(r.h_hat, b.h_hat);
    for (const auto& z : b.roots) {
      r.eigenvalues.push_back({z, b.multiplicity});
      r.spectral_radius = std::max(r.spectral_radius, std::abs(z));
    }
  }
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](const eigenvalue& x, const eigenvalue& y) {
    if (x.value.real() != y.value.real()) return x.value.real() > y.value.real();
    return x.value.imag() > y.value.imag();
  });
  r.lambda_hat_geo = std::exp(r.h_hat);
  r.ergodic = is_ergodic(a);
  r.zero_entropy = zero_entropy_class(a);
  r.diagonalizable = is_diagonalizable(a);
  r.irreducible = r.factors.size() == 1 && r.factors[0].multiplicity == 1 &&
                  r.factors[0].degree == r.dim;
  return r;
}

// ---------------------------------------------------------------------------
// Affine maps F + c.

// Shift part of an affine toral map: absent, exact rational, or real
// (inexact; ergodicity statements about it are only heuristic).
using shift_vector = std::variant<std::monostate, rat_vector, std::vector<double>>;

struct toral_map {
  int_matrix linear;
  shift_vector shift;

  bool has_shift() const { return !std::holds_alternative<std::monostate>(shift); }
  bool shift_exact() const { return std::holds_alternative<rat_vector>(shift); }
};

// Kernel lattice basis {x : M x = 0} of an integer matrix, by unimodular row
// reduction of M^T (rows of the transform aligned with vanished rows of the
// echelon form are the kernel).
inline std::vector<std::vector<Int>> integer_kernel_basis(const int_matrix& m) {
  int d = m.dim();
  int_matrix h = m.transpose();
  int_matrix u = int_matrix::identity(d);
  int rank = 0;
  for (int col = 0; col < d && rank < d; ++col) {
    // Euclidean reduction of column entries below 'rank'
    while (true) {
      int nonzero = -1, count = 0;
      Int minabs = 0;
      for (int i = rank; i < d; ++i) {
        if (h.at(i, col) != 0) {
          ++count;
          Int a = abs(h.at(i, col));
          if (nonzero < 0 || a < minabs) {
            minabs = a;
            nonzero = i;
          }
        }
      }
      if (count == 0) {
        nonzero = -1;
        break;
      }
      if (count == 1) {
        // move the pivot row into place
        if (nonzero != rank)
          for (int j = 0; j < d; ++j) {
            std::swap(h.at(nonzero, j), h.at(rank, j));
            std::swap(u.at(nonzero, j), u.at(rank, j));
          }
        ++rank;
        break;
      }
      for (int i = rank; i < d; ++i) {
        if (i == nonzero || h.at(i, col) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), h.at(i, col).get_mpz_t(), h.at(nonzero, col).get_mpz_t());
        if (q != 0)
          for (int j = 0; j < d; ++j) {
            h.at(i, j) -= q * h.at(nonzero, j);
            u.at(i, j) -= q * u.at(nonzero, j);
          }
      }
    }
  }
  std::vector<std::vector<Int>> kernel;
  for (int i = rank; i < d; ++i) {
    std::vector<Int> row(static_cast<size_t>(d));
    bool zero = true;
    for (int j = 0; j < d; ++j) {
      row[static_cast<size_t>(j)] = u.at(i, j);
      if (row[static_cast<size_t>(j)] != 0) zero = false;
    }
    if (!zero) kernel.push_back(std::move(row));
  }
  return kernel;
}

enum class affine_class { ergodic, nonergodic, heuristic_ergodic };

struct affine_classification {
  affine_class value = affine_class::nonergodic;
  long height_bound = 0;  // nonzero when the decision was a heuristic search
};

namespace detail {

// Heuristic integer-relation search: is there a small integer combination of
// the kernel basis b_i with c . (sum a_i b_i) within 1e-9 of an integer?
// Exhaustive over |a|_inf <= height for rank <= 2, direct per-vector scan
// otherwise. The defaults keep the Dirichlet approximation floor for generic
// irrationals well above the acceptance threshold.
inline bool find_integer_relation(const std::vector<double>& dots, long height) {
  size_t r = dots.size();
  auto near_integer = [](long double v) {
    long double frac = v - std::floor(v + 0.5L);
    return std::abs(frac) < 1e-9L;
  };
  if (r == 1) {
    for (long a = 1; a <= height; ++a)
      if (near_integer(static_cast<long double>(a) * dots[0])) return true;
    return false;
  }
  if (r == 2) {
    for (long a0 = -height; a0 <= height; ++a0)
      for (long a1 = 0; a1 <= height; ++a1) {
        if (a0 == 0 && a1 == 0) continue;
        if (near_integer(static_cast<long double>(a0) * dots[0] +
                         static_cast<long double>(a1) * dots[1]))
          return true;
      }
    return false;
  }
  // rank >= 3: scan axis directions and small boxes
  long box = std::min<long>(height, 20);
  std::vector<long> a(r, -box);
  while (true) {
    bool all_zero = true;
    long double s = 0.0L;
    for (size_t i = 0; i < r; ++i) {
      if (a[i] != 0) all_zero = false;
      s += static_cast<long double>(a[i]) * dots[i];
    }
    if (!all_zero && near_integer(s)) return true;
    size_t pos = 0;
    while (pos < r && a[pos] == box) a[pos++] = -box;
    if (pos == r) break;
    ++a[pos];
  }
  for (size_t i = 0; i < r; ++i)
    for (long v = box + 1; v <= height; ++v)
      if (near_integer(static_cast<long double>(v) * dots[i])) return true;
  return false;
}

}  // namespace detail

// Ergodicity of the affine map F + c. Exact for rational shifts; for real
// shifts the nonexistence of integer relations is heuristic, bounded by a
// search height.
inline affine_classification classify_affine(const toral_map& map, long height_request = 0) {
  const int_matrix& f = map.linear;
  if (!f.is_unimodular()) throw non_unimodular_error("classify_affine requires |det| = 1");
  if (is_ergodic(f)) return {affine_class::ergodic, 0};

  // some root of unity != 1 in the spectrum forces nonergodicity regardless of c
  int_polynomial cp = char_poly(f);
  for (int m : cyclotomic_orders(f.dim()))
    if (m >= 2 && cp.divisible_by(cyclotomic(m))) return {affine_class::nonergodic, 0};

  // now 1 is the only root of unity: the fixed lattice of F^T is nonzero
  int_matrix ft_minus_i = f.transpose() - int_matrix::identity(f.dim());
  auto kernel = integer_kernel_basis(ft_minus_i);
  if (kernel.empty()) throw error("internal: eigenvalue 1 without an integer fixed vector");

  if (!map.has_shift() || map.shift_exact()) {
    // any rational c admits k in the fixed lattice with c . k integral
    return {affine_class::nonergodic, 0};
  }

  const auto& c = std::get<std::vector<double>>(map.shift);
  if (static_cast<int>(c.size()) != f.dim()) throw error("shift dimension mismatch");
  std::vector<double> dots;
  for (const auto& b : kernel) {
    long double s = 0.0L;
    for (int j = 0; j < f.dim(); ++j)
      s += static_cast<long double>(c[static_cast<size_t>(j)]) *
           detail::mpz_to_long_double(b[static_cast<size_t>(j)]);
    dots.push_back(static_cast<double>(s));
  }
  long height = height_request;
  if (height <= 0) height = dots.size() == 1 ? 1000000 : (dots.size() == 2 ? 1000 : 100);
  if (detail::find_integer_relation(dots, height)) return {affine_class::nonergodic, height};
  return {affine_class::heuristic_ergodic, height};
}

// ---------------------------------------------------------------------------
// Eigenbasis data and the degenerate-noise spanning test.

struct eigen_basis_data {
  std::vector<std::complex<double>> values;
  Eigen::MatrixXcd v;  // columns: unit eigenvectors of A
  Eigen::MatrixXcd u;  // columns: dual forms (eigenvectors of A^T), <u_i, v_j> = 0 for i != j
};

inline Eigen::MatrixXd to_eigen(const int_matrix& a) {
  Eigen::MatrixXd m(a.dim(), a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m(i, j) = a.at(i, j).get_d();
  return m;
}

inline eigen_basis_data eigen_basis(const int_matrix& a) {
  Eigen::MatrixXd m = to_eigen(a);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  eigen_basis_data out;
  int d = a.dim();
  out.v = es.eigenvectors();
  for (int j = 0; j < d; ++j) {
    out.v.col(j).normalize();
    out.values.push_back(es.eigenvalues()[j]);
  }
  // dual basis: columns of (V^{-1})^H satisfy <v_i, u_j> = delta_ij
  Eigen::MatrixXcd vinv = out.v.inverse();
  out.u = vinv.adjoint();
  return out;
}

enum class degeneracy { no_dissipation, effective };

// Spanning test for degenerate noise g_{eps,alpha,B}: dissipation dies iff
// all nondegenerate eigenvectors of B^T stay inside one proper F-invariant
// subspace, detected as rank deficiency of {F^h u_j : 1 <= h <= d}.
inline degeneracy degeneracy_case(const int_matrix& a, const Eigen::MatrixXd& b,
                                  double eigvec_condition_bound = 1e8,
                                  double degeneracy_tol = 1e-10, double rank_cutoff = 1e-8) {
  int d = a.dim();
  if (b.rows() != d || b.cols() != d) throw error("degeneracy matrix dimension mismatch");
  Eigen::EigenSolver<Eigen::MatrixXd> es(b.transpose());
  Eigen::MatrixXcd vecs = es.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> cond_svd(vecs);
  double cond = cond_svd.singularValues()(0) / cond_svd.singularValues()(d - 1);
  if (!(cond < eigvec_condition_bound))
    throw not_diagonalizable_error("eigenvector condition number " + std::to_string(cond) +
                                   " exceeds bound");

  // F acts on the dual side: A k -> forms <A^l k, u> = <k, F^l u> with F = A^T
  Eigen::MatrixXd f_mat = to_eigen(a).transpose();
  std::vector<Eigen::VectorXcd> span_vectors;
  for (int j = 0; j < d; ++j) {
    if (std::abs(es.eigenvalues()[j]) <= degeneracy_tol) continue;
    Eigen::VectorXcd w = vecs.col(j);
    for (int h = 1; h <= d; ++h) {
      w = f_mat.cast<std::complex<double>>() * w;
      span_vectors.push_back(w);
    }
  }
  if (span_vectors.empty()) return degeneracy::no_dissipation;
  Eigen::MatrixXcd s(d, static_cast<int>(span_vectors.size()));
  for (int c = 0; c < s.cols(); ++c) s.col(c) = span_vectors[static_cast<size_t>(c)];
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s);
  int rank = 0;
  double top = svd.singularValues()(0);
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rank_cutoff * top) ++rank;
  return rank < d ? degeneracy::no_dissipation : degeneracy::effective;
}

}  // namespace toruslab
