#pragma once

#include <cstdint>
#include <string>

#include "nicf/interval.hpp"
#include "nicf/maps.hpp"

namespace nicf {

// Invariant measures of the five maps, plus plain Lebesgue measure. Each
// probability density integrates to 1 over its domain; Lebesgue gives raw
// interval length.
enum class DensityKind { FoldedMu, OddMuO, EvenMuE, ConjugateMuE, HurwitzNu, Lebesgue };

std::string density_name(DensityKind kind);
Interval density_domain(DensityKind kind);

// The invariant measure matching each map.
DensityKind invariant_measure(MapKind kind);

// Normalized density value at x. raw_density omits the normalization
// constant (1/log G style); Lebesgue is 1 either way.
double density(DensityKind kind, double x);
double raw_density(DensityKind kind, double x);

struct MeasureValue {
  double value = 0.0;
  DensityKind kind = DensityKind::Lebesgue;
  IntervalUnion set;
};

// Measure of a finite interval union, evaluated from the closed-form log
// antiderivative of the density (exact up to rounding).
MeasureValue measure(DensityKind kind, const IntervalUnion& E);

// Invariant measure of the one-step preimage of E under the given map:
// closed-form branch measures for digits up to K, plus the exact tail of the
// remaining branches (the branch measures telescope to a single log for the
// unit-gap families and to log-gamma differences otherwise).
double preimage_measure(MapKind kind, const IntervalUnion& E, long long K = 10000);

struct PushforwardReport {
  int n_samples = 0;
  double max_discrepancy = 0.0;
};

// Checks mu(E) = 2 mu_o(E) for random subintervals E of [0, 1/2].
PushforwardReport pushforward_check(int n_samples, std::uint64_t seed = 20240917);

}  // namespace nicf
