#pragma once

#include <vector>

#include "nicf/chebyshev.hpp"
#include "nicf/maps.hpp"
#include "nicf/measures.hpp"
#include "nicf/weights.hpp"

namespace nicf {

// A finite admissible digit word together with the closed interval of points
// whose expansion starts with it.  The endpoints come from pushing the
// parameter range of the final digit through the composed inverse branches;
// each branch is monotone, so orientation is tracked rather than sampled.
struct CylinderSpec {
  MapKind kind = MapKind::Folded;
  DigitSequence word;
  Interval interval{0.0, 0.0};
};

CylinderSpec make_cylinder(MapKind kind, const std::vector<NicfDigit>& word);
Interval cylinder_interval(const CylinderSpec& spec);
int cylinder_rank(const CylinderSpec& spec);

// Mass of the cylinder under the invariant measure of its map.
double cylinder_measure(const CylinderSpec& spec);

// The image of the cylinder indicator after rank-many applications of the
// weighted transfer operator: a smooth product of branch weights evaluated
// along the partial branch compositions.
struct PushedIndicator {
  CylinderSpec base;
  SampledFunction values;
};

double pushed_indicator_at(const CylinderSpec& spec, const WeightFamily& family,
                           double y);
PushedIndicator pushed_indicator(const CylinderSpec& spec,
                                 const WeightFamily& family, int degree = 64);

// An odd-map cylinder is carried by |.| onto the union of one folded cylinder
// per admissible continuation sign of its final digit.
std::vector<CylinderSpec> odd_cylinder_as_folded(const DigitSequence& odd_word);

// Set image of E under the conjugation J, as a union of intervals in [0, 1].
IntervalUnion conjugate_J_image(const IntervalUnion& E);

// |mu(T^-n E meet F) - mu(E) mu(F)| where the joint mass is the integral of
// the (n - rank)-times transferred pushed indicator over E.
double mixing_correlation(const IntervalUnion& E, const CylinderSpec& F, int n,
                          const WeightFamily& family, int degree = 64,
                          long long K = 10000);

// The same gap for the odd map with origin-symmetric E, computed through the
// folded reduction of the odd cylinder.
double odd_mixing_correlation(const IntervalUnion& E, const DigitSequence& odd_word,
                              int n, int degree = 64, long long K = 10000);

// The conjugate-system gap with E given on [-1/2, 1/2] and mapped through J;
// the cylinder argument lives natively in the conjugate system.
double conjugate_mixing(const IntervalUnion& E, const CylinderSpec& F_tilde, int n,
                        int degree = 64, long long K = 10000);

}  // namespace nicf
