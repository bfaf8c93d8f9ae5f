#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nicf/interval.hpp"
#include "nicf/maps.hpp"

namespace nicf {

// Volume-decay experiment: gamma_n = U^n applied to the reciprocal H = 1/h of
// the invariant density, so that lambda(T^-n E) = integral over E of
// gamma_n h. The per-step error e(n) = sup |gamma_n h - c h| measures the
// distance to the limiting constant c = integral of H d-mu.
struct DecayReport {
  MapKind map_kind = MapKind::Folded;
  int degree = 64;
  int n_min = 1;
  int n_max = 0;
  std::vector<double> errors;  // e(n) for n = n_min .. n_max
  double stated_rate = 0.0;    // 0.288 (folded) or 0.234 (conjugate)
  double fitted_rate = 0.0;    // exp of the least-squares slope of log e(n)
  int fit_first = 0;           // fit window: n with 1e-12 < e(n) < 1e-2
  int fit_last = 0;
  int noise_floor_n = 0;       // first n with e(n) < 1e-13, else n_max + 1
  bool ratios_ok = false;      // e(n+1)/e(n) <= stated_rate on 3 <= n < floor
  bool verdict = false;        // fitted_rate <= stated_rate
  std::string warning;         // set when the floor arrives before n_max
};

// Folded or EvenConjugate only; n_max >= 2. The truncation default is higher
// here than elsewhere: the sup-norm errors bottom out at the second-order
// remainder of the digit tail, which scales like 1/K^3 and must sit below
// the 1e-13 noise floor for the late-n ratios to be meaningful.
DecayReport gkl_iterate(MapKind kind, int n_max, int degree = 64,
                        long long K = 30000);

// lambda(map^-n E) computed two independent ways: the operator route
// integrates gamma_n h over E in closed quadrature; the sampling route counts
// uniform starts whose n-th image lands in E. Odd-map sets reduce to folded
// integrals part by part through x <-> -x symmetry; even-map sets pass
// through the conjugation J.
struct PreimageVolumeReport {
  MapKind map_kind = MapKind::Folded;
  int n = 0;
  double operator_value = 0.0;    // lambda(map^-n E), operator route
  double limit_value = 0.0;       // its n -> infinity limit
  double invariant_mass = 0.0;    // mass of E under the map's measure
  double residual_over_mass = 0.0;
  double mc_value = 0.0;          // lambda(map^-n E), sampling route
  double mc_standard_error = 0.0;
  double mc_discrepancy = 0.0;    // |operator_value - mc_value|
  long long n_samples = 0;
  std::uint64_t seed = 0;
};

PreimageVolumeReport preimage_volume_check(MapKind kind, const IntervalUnion& E,
                                           int n, long long n_samples = 10000000,
                                           std::uint64_t seed = 20240917,
                                           int degree = 64, long long K = 10000);

// Side-by-side decay constants per operator family: the stated geometric
// rate, the certified bound behind it, and the empirically fitted rate, with
// the classical Gauss-map rate as a reference line (certified and fitted are
// NaN there).
struct LevyRow {
  std::string label;
  double stated = 0.0;
  double certified = 0.0;
  double fitted = 0.0;
};

std::vector<LevyRow> levy_comparison();

}  // namespace nicf
