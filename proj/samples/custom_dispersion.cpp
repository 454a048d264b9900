// Defines a scalar model from a dispersion-relation string and analyzes it.
//
//   custom_dispersion "k^3 - 0.25*k^5"

#include <cstdio>
#include <exception>

#include "hfstab/hfstab.hpp"

int main(int argc, char** argv) {
  hfstab::CustomModelSpec spec;
  spec.kind = hfstab::PoissonKind::scalar;
  spec.omega1 = argc > 1 ? argv[1] : "k^3 - 0.25*k^5";
  try {
    hfstab::ModelSpec model = hfstab::make_custom_model(spec);
    hfstab::AnalysisReport r = hfstab::run_pipeline(model);
    std::printf("omega(k) = %s\nc = %.12f\n", hfstab::dsl::print(hfstab::dsl::parse(spec.omega1)).c_str(), r.speed);
    for (const auto& e : r.events)
      if (!e.at_origin)
        std::printf("  n1=%+d n2=%+d  mu=%+.10f  Im lambda=%+.10f  %s\n", e.first.n, e.second.n, e.mu,
                    e.lambda.imag(), hfstab::to_string(*e.verdict));
    std::printf("%s\n", r.overall());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
