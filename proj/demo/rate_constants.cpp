// Rate constants for a few classic maps: fitted against predicted, plus the
// simple-class constants. Build with the library and run without arguments.

#include <cstdio>

#include "toruslab/toruslab.hpp"

using namespace toruslab;

int main() {
  std::vector<std::pair<const char*, int_matrix>> maps = {
      {"cat [[2,1],[1,1]]", int_matrix{{2, 1}, {1, 1}}},
      {"x^3 - x - 1 companion", int_matrix{{0, 1, 0}, {0, 0, 1}, {1, 1, 0}}},
      {"shear [[1,1],[0,1]]", int_matrix{{1, 1}, {0, 1}}},
      {"identity", int_matrix::identity(2)},
  };

  std::printf("%-24s %-12s %10s %10s\n", "map", "class", "fit", "predicted");
  for (const auto& [name, m] : maps) {
    auto grid = std::vector<double>{1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9};
    auto rep = r_diss_fit(m, 1.0, grid);
    std::printf("%-24s %-12s %10.5f %10.5f\n", name, to_string(rep.classification),
                rep.r_diss_fit, rep.r_diss_predicted);
  }
  return 0;
}
