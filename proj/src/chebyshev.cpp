#include "nicf/chebyshev.hpp"

#include <cmath>
#include <stdexcept>

#include "nicf/kahan.hpp"

namespace nicf {

std::vector<double> cgl_nodes(const Interval& domain, int degree) {
  if (degree < 1) throw std::invalid_argument("collocation degree must be >= 1");
  std::vector<double> x(degree + 1);
  double a = domain.lo, b = domain.hi;
  for (int j = 0; j <= degree; ++j) {
    x[j] = a + (b - a) * 0.5 * (1.0 - std::cos(M_PI * j / degree));
  }
  x[0] = a;
  x[degree] = b;
  return x;
}

SampledFunction::SampledFunction(Interval domain, int degree)
    : domain_(domain), degree_(degree), nodes_(cgl_nodes(domain, degree)),
      values_(degree + 1, 0.0), bary_(degree + 1) {
  for (int j = 0; j <= degree; ++j) {
    bary_[j] = (j % 2 == 0) ? 1.0 : -1.0;
  }
  bary_[0] *= 0.5;
  bary_[degree] *= 0.5;
}

SampledFunction SampledFunction::sample(const std::function<double(double)>& f,
                                        Interval domain, int degree) {
  SampledFunction s(domain, degree);
  for (int j = 0; j <= degree; ++j) s.values_[j] = f(s.nodes_[j]);
  return s;
}

double SampledFunction::operator()(double x) const {
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= degree_; ++j) {
    double d = x - nodes_[j];
    if (d == 0.0) return values_[j];
    double t = bary_[j] / d;
    num += t * values_[j];
    den += t;
  }
  return num / den;
}

std::vector<std::vector<double>> SampledFunction::differentiation_matrix() const {
  int n = degree_;
  std::vector<std::vector<double>> D(n + 1, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i <= n; ++i) {
    double row_sum = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (j == i) continue;
      D[i][j] = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
      row_sum += D[i][j];
    }
    D[i][i] = -row_sum;  // rows sum to zero, so constants map to ~0
  }
  return D;
}

SampledFunction SampledFunction::derivative() const {
  auto D = differentiation_matrix();
  SampledFunction out(domain_, degree_);
  for (int i = 0; i <= degree_; ++i) {
    Accumulator acc;
    for (int j = 0; j <= degree_; ++j) acc.add(D[i][j] * values_[j]);
    out.values_[i] = acc.total();
  }
  return out;
}

std::vector<double> cc_weights(int degree) {
  if (degree < 1) throw std::invalid_argument("quadrature degree must be >= 1");
  int n = degree;
  std::vector<double> w(n + 1, 0.0);
  if (n == 1) {
    w[0] = w[1] = 1.0;
    return w;
  }
  for (int i = 1; i < n; ++i) {
    double theta = M_PI * i / n;
    double v = 1.0;
    if (n % 2 == 0) {
      for (int k = 1; k <= n / 2 - 1; ++k) {
        v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
      }
      v -= std::cos(n * theta) / (static_cast<double>(n) * n - 1.0);
    } else {
      for (int k = 1; k <= (n - 1) / 2; ++k) {
        v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
      }
    }
    w[i] = 2.0 * v / n;
  }
  double endpoint = (n % 2 == 0) ? 1.0 / (static_cast<double>(n) * n - 1.0)
                                 : 1.0 / (static_cast<double>(n) * n);
  w[0] = w[n] = endpoint;
  return w;
}

double SampledFunction::definite_integral() const {
  std::vector<double> w = cc_weights(degree_);
  Accumulator acc;
  for (int j = 0; j <= degree_; ++j) acc.add(w[j] * values_[j]);
  return acc.total() * 0.5 * domain_.length();
}

double SampledFunction::sup_abs(int fine) const {
  double m = node_sup_abs();
  if (fine > 1) {
    double a = domain_.lo, len = domain_.length();
    for (int i = 0; i < fine; ++i) {
      double x = a + len * i / (fine - 1.0);
      m = std::max(m, std::fabs((*this)(x)));
    }
  }
  return m;
}

double SampledFunction::node_sup_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

double cc_quadrature(const std::function<double(double)>& f, const Interval& domain,
                     int degree) {
  return SampledFunction::sample(f, domain, degree).definite_integral();
}

}  // namespace nicf
