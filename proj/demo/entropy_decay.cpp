// Density relaxation under the noisy cat map: the Boltzmann-Gibbs entropy
// climbs to 0 on the dissipation time scale.

#include <cstdio>

#include "toruslab/toruslab.hpp"

using namespace toruslab;

int main() {
  int_matrix cat{{2, 1}, {1, 1}};
  noise_model noise(0.01);
  mode_box box{2, 64};
  truncated_operator op(toral_map{cat, {}}, noise, box);

  long nd = n_diss(cat, noise);
  std::printf("n_diss(eps = %.2g) = %ld\n\n", noise.epsilon, nd);

  auto traj = evolve_density(op, density_state::cosine(box, {1, 0}), 2 * nd);
  std::printf("%4s %14s %14s\n", "n", "l2_fluct", "bg_entropy");
  for (const auto& p : traj) std::printf("%4ld %14.6e %14.8f\n", p.n, p.l2_fluct, p.bg_entropy);
  return 0;
}
