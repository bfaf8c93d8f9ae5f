#pragma once

#include <functional>
#include <vector>

#include "nicf/interval.hpp"

namespace nicf {

// Chebyshev-Gauss-Lobatto points on the interval, ascending, endpoints
// included; degree N gives N+1 nodes.
std::vector<double> cgl_nodes(const Interval& domain, int degree);

// A C^1 function sampled at Chebyshev-Gauss-Lobatto nodes. Evaluation
// anywhere in the domain is barycentric interpolation; the derivative is the
// spectral differentiation of the same representation; the definite integral
// uses Clenshaw-Curtis weights.
class SampledFunction {
 public:
  SampledFunction(Interval domain, int degree);
  static SampledFunction sample(const std::function<double(double)>& f,
                                Interval domain, int degree);

  const Interval& domain() const { return domain_; }
  int degree() const { return degree_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double operator()(double x) const;
  SampledFunction derivative() const;
  double definite_integral() const;

  // max |f| over the nodes and a uniform grid of `fine` extra points
  double sup_abs(int fine = 2001) const;
  double node_sup_abs() const;

  // Differentiation matrix row acting on nodal values: f'(node i) = row_i . values.
  std::vector<std::vector<double>> differentiation_matrix() const;

 private:
  Interval domain_;
  int degree_ = 0;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> bary_;
};

// Clenshaw-Curtis weights on [-1, 1] for degree N (N+1 nodes, sum 2).
std::vector<double> cc_weights(int degree);

double cc_quadrature(const std::function<double(double)>& f, const Interval& domain,
                     int degree);

}  // namespace nicf
