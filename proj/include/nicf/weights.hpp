#pragma once

#include <string>

#include "nicf/interval.hpp"

namespace nicf {

enum class WeightKind {
  FoldedU,     // branch weights of the folded-map operator on [0, 1/2]
  ConjugateU,  // branch weights of the conjugate even-map operator on [0, 1]
};

// H(y) = (G + y)(G + 1 - y) / G^3, the reciprocal of the unnormalized
// invariant density of the folded map.
double folded_H(double y);
double folded_H_derivative(double y);

// Reciprocal of the normalized invariant density of the conjugate map,
// (G + x) log G.
double conjugate_H(double x);

// One two-parameter family of branch weights w(k, e, y) together with the
// inverse-branch points they multiply.  FoldedU indexes branches by digit
// k and sign e with k >= 2 for e = +1 and k >= 3 for e = -1; ConjugateU
// uses e = +1 for the branches accumulating at 0 and e = -1 for those
// accumulating at 1, both with k >= 2.
class WeightFamily {
 public:
  explicit WeightFamily(WeightKind kind) : kind_(kind) {}

  WeightKind kind() const { return kind_; }
  std::string name() const;
  Interval domain() const;
  long long k_min(int e) const;

  double weight(long long k, int e, double y) const;
  double weight_derivative(long long k, int e, double y) const;

  // Point fed to the argument function by branch (k, e).
  double branch_point(long long k, int e, double y) const;
  // Limit of branch_point as k grows.
  double branch_limit(int e) const;

  // Closed forms for the sums over all branches with k > K, obtained by
  // telescoping; exact up to rounding, no truncation error.
  double weight_sum_tail(long long K, double y) const;
  double weight_derivative_sum_tail(long long K, double y) const;

 private:
  void check_point(double y) const;
  void check_branch(long long k, int e) const;

  WeightKind kind_;
};

}  // namespace nicf
