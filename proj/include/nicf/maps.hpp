#pragma once

#include <string>
#include <vector>

#include "nicf/golden.hpp"
#include "nicf/interval.hpp"

namespace nicf {

// The five interval maps. Folded acts on [0, 1/2]; Odd and Even on
// [-1/2, 1/2]; EvenConjugate on [0, 1]; HurwitzDual on [0, g].
enum class MapKind { Folded, Odd, Even, EvenConjugate, HurwitzDual };

// One expansion step. Folded/Even/EvenConjugate/HurwitzDual digits are a pair
// (a, e) with a >= 2 and e in {-1, +1}. Odd-map digits are a single signed
// integer b with |b| >= 2, stored in `a` with e = 0 marking the absent sign
// part.
struct NicfDigit {
  long long a = 0;
  int e = 0;
};

struct DigitSequence {
  MapKind kind = MapKind::Folded;
  std::vector<NicfDigit> digits;
  bool terminated = false;  // the orbit hit 0 exactly (rational input)
};

std::string map_name(MapKind kind);
Interval map_domain(MapKind kind);

// One application of the map; 0 is a fixed point by convention. Throws
// std::domain_error when x lies outside the map's domain.
double apply_map(MapKind kind, double x);

// First n digits of the expansion of x, fewer with terminated=true when the
// orbit reaches 0. Digit rules:
//   Folded        a = floor(1/x + 1/2),   e = sign(1/x - a), next = |1/x - a|
//   Odd           b = sign(x)*floor(1/|x| + 1/2),            next = 1/x - b
//   Even          a = floor(1/|x| + 1/2), e = sign(x),       next = 1/|x| - a
//   EvenConjugate x <= 1/2: (floor(1/x), +1) Gauss step; x > 1/2: the mirrored
//                 step (floor(1/(1-x)), -1), next = frac(1/(1-x))
//   HurwitzDual   a = floor(1/x + g^2),   e = sign(1/x - a), next = |1/x - a|
// A zero sign remainder takes e = +1.
DigitSequence expand(MapKind kind, double x, int n);

// Evaluates the finite continued fraction encoded by seq (tail value 0).
// Validates admissibility first.
double reconstruct(const DigitSequence& seq);

// Checks per-digit and adjacent-pair admissibility for seq's kind; throws
// std::invalid_argument naming the violated constraint.
void validate_digits(const DigitSequence& seq);

// Conjugation between the Even map's domain and the unit interval:
// J(x) = x on [0, 1/2], x + 1 on [-1/2, 0); J(0) = 0.
double conjugate_J(double x);
double conjugate_J_inverse(double y);

}  // namespace nicf
