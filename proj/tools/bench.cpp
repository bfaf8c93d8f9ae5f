#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"

#include "nicf/chebyshev.hpp"
#include "nicf/transfer.hpp"
#include "nicf/weights.hpp"

using namespace nicf;

namespace {

double best_of(int reps, const WeightFamily& family, int degree, long long K,
               bool parallel) {
  double best = 0.0;
  for (int r = 0; r < reps; ++r) {
    double t = time_operator_build(family, degree, K, parallel);
    if (r == 0 || t < best) best = t;
  }
  return best;
}

bool results_match(const WeightFamily& family, int degree, long long K) {
  SampledFunction probe = SampledFunction::sample(
      [](double x) { return std::cos(3.0 * x) + x * x; }, family.domain(),
      degree);
  SampledFunction a = apply_U(family, probe, K);
  SampledFunction b = apply_U_serial(family, probe, K);
  for (int i = 0; i <= degree; ++i) {
    if (a.values()[i] != b.values()[i]) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator build benchmark: threaded kernel vs serial reference"};
  std::vector<int> degrees{32, 64, 128};
  long long truncation = 10000;
  int reps = 3;
  app.add_option("--degree", degrees, "collocation degrees to time");
  app.add_option("--truncation", truncation, "digit truncation K");
  app.add_option("--reps", reps, "repetitions, best time kept");
  CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("truncation K = %lld, best of %d\n\n", truncation, reps);
  std::printf("%-10s %-7s %12s %12s %9s %8s\n", "family", "degree", "serial_s",
              "threaded_s", "speedup", "match");
  for (WeightKind kind : {WeightKind::FoldedU, WeightKind::ConjugateU}) {
    WeightFamily family(kind);
    for (int degree : degrees) {
      double serial = best_of(reps, family, degree, truncation, false);
      double threaded = best_of(reps, family, degree, truncation, true);
      bool match = results_match(family, degree, truncation);
      std::printf("%-10s %-7d %12.4f %12.4f %9.2f %8s\n",
                  family.name().c_str(), degree, serial, threaded,
                  serial / threaded, match ? "yes" : "NO");
      if (!match) return 1;
    }
  }
  return 0;
}
