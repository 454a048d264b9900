// First non-origin water-wave collision as a function of depth (g = 1).

#include <cstdio>
#include <vector>

#include "hfstab/hfstab.hpp"

int main() {
  std::vector<double> depths = hfstab::log_grid(0.25, 100.0, 12);
  for (const auto& p : hfstab::trace_first_collision_vs_depth(1.0, depths, 10))
    std::printf("h = %9.4f   Im lambda = %.10f   mu = %+.10f\n", p.h, p.im_lambda, p.mu);

  hfstab::ModelSpec deep = hfstab::make_model("water-waves-deep");
  auto events = hfstab::non_origin(hfstab::find_collisions(deep, hfstab::bifurcation_speed(deep, 1, 1), 3));
  std::printf("deep water      Im lambda = %.10f   mu = %+.10f\n", events.front().lambda.imag(), events.front().mu);
}
