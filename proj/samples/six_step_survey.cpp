// Runs the necessary-condition pipeline on every built-in model and prints a
// one-line summary per model.

#include <cstdio>

#include "hfstab/hfstab.hpp"

int main() {
  for (const auto& id : hfstab::builtin_model_ids()) {
    hfstab::ModelSpec model = hfstab::make_model(id);
    hfstab::AnalysisReport r = hfstab::run_pipeline(model);
    std::printf("%-20s c = %+.6f  non-origin collisions: %2d  opposite signature: %2d  %s\n", id.c_str(), r.speed,
                r.counts["non_origin"], r.counts["potential_instability"], r.overall());
  }
}
