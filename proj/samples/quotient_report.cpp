// Prints the momentum quotient of a few bodies next to its Wulff lower bound.

#include <cstdio>

#include "wulff_lab/wulff_lab.hpp"

using namespace wulff_lab;

int main() {
  const auto norm = FinslerNorm2::elliptic_axes({1.0, 2.0});
  const double p = 2.0;

  auto show = [&](const char* name, const FunctionalReport& r) {
    std::printf("%-22s F = %.12f  bound = %.12f  E_F = %+.6f\n", name, r.F_quotient, r.lower_bound(), r.E_F);
  };

  show("Wulff shape", functional_value(wulff(norm, 1.0), norm, p));
  show("disk", functional_value(from_fourier(AngleGrid(), 1.0, {}), norm, p));
  show("square", functional_value(box2(1.0, 1.0), norm, p));
  show("thin rectangle", functional_value(box2(10.0, 0.1), norm, p));
  show("hexagon", functional_value(convex_hull({{1, 0}, {0.5, 0.87}, {-0.5, 0.87}, {-1, 0}, {-0.5, -0.87}, {0.5, -0.87}}),
                                   norm, p));

  const auto cube = box_polytope({1.0, 1.0, 1.0});
  show("cube (euclidean)", functional_value(cube, FinslerNormX::euclidean(3), p));
}
