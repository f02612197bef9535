// Runs the inverse anisotropic mean curvature flow from a wobbly curve and
// watches the rescaled body approach the Wulff shape.

#include <cstdio>

#include "wulff_lab/wulff_lab.hpp"

using namespace wulff_lab;

int main() {
  const auto norm = FinslerNorm2::elliptic_axes({1.0, 2.0});
  const auto start = from_fourier(AngleGrid(512), 1.0, {{0.0, 0.0}, {0.08, 0.0}, {0.0, 0.05}});

  const auto trace = run(start, norm, 2.0, 3.0, {0.5, 1.0, 1.5, 2.0, 2.5});
  std::printf("%5s %14s %16s %14s %14s\n", "t", "P_F e^-t", "F", "E_F", "fit distance");
  for (const auto& st : trace.states)
    std::printf("%5.2f %14.10f %16.12f %+14.8f %14.3e\n", st.t, st.report.P_F * std::exp(-st.t), st.report.F_quotient,
                st.report.E_F, st.rescaled_fit.distance);
  std::printf("Wulff bound %.12f, %zu time steps\n", 1.0 / norm.unit_wulff_volume(), trace.steps.size());
}
