#include "nicf/weights.hpp"

#include <sstream>
#include <stdexcept>

#include "nicf/golden.hpp"

namespace nicf {

double folded_H(double y) {
  const auto& c = golden();
  return (c.G + y) * (c.G2 - y) / c.G3;
}

double folded_H_derivative(double y) {
  const auto& c = golden();
  return (1.0 - 2.0 * y) / c.G3;
}

double conjugate_H(double x) {
  const auto& c = golden();
  return (c.G + x) * c.log_G;
}

std::string WeightFamily::name() const {
  return kind_ == WeightKind::FoldedU ? "folded" : "conjugate";
}

Interval WeightFamily::domain() const {
  return kind_ == WeightKind::FoldedU ? Interval{0.0, 0.5} : Interval{0.0, 1.0};
}

long long WeightFamily::k_min(int e) const {
  if (kind_ == WeightKind::FoldedU) return e == -1 ? 3 : 2;
  return 2;
}

void WeightFamily::check_point(double y) const {
  Interval d = domain();
  if (!(y >= d.lo && y <= d.hi)) {
    std::ostringstream msg;
    msg << "y = " << y << " outside the domain [" << d.lo << ", " << d.hi
        << "] of the " << name() << " weight family";
    throw std::domain_error(msg.str());
  }
}

void WeightFamily::check_branch(long long k, int e) const {
  if ((e != 1 && e != -1) || k < k_min(e)) {
    std::ostringstream msg;
    msg << "branch (k = " << k << ", e = " << e << ") is not admissible for the "
        << name() << " weight family";
    throw std::invalid_argument(msg.str());
  }
}

double WeightFamily::weight(long long k, int e, double y) const {
  check_branch(k, e);
  check_point(y);
  const auto& c = golden();
  if (kind_ == WeightKind::FoldedU) {
    double u = static_cast<double>(k) + e * y;
    return folded_H(y) * (1.0 / (u + c.G - 2.0) - 1.0 / (u + c.G - 1.0));
  }
  double u = static_cast<double>(k) + y;
  if (e == 1) return (c.G + y) * (1.0 / u - 1.0 / (u + c.G - 1.0));
  return (c.G + y) * (1.0 / (u + c.G - 2.0) - 1.0 / u);
}

double WeightFamily::weight_derivative(long long k, int e, double y) const {
  check_branch(k, e);
  check_point(y);
  const auto& c = golden();
  if (kind_ == WeightKind::FoldedU) {
    double u = static_cast<double>(k) + e * y;
    double d1 = 1.0 / (u + c.G - 2.0);
    double d2 = 1.0 / (u + c.G - 1.0);
    return folded_H_derivative(y) * (d1 - d2) -
           e * folded_H(y) * (d1 * d1 - d2 * d2);
  }
  double u = static_cast<double>(k) + y;
  if (e == 1) {
    double diff = 1.0 / u - 1.0 / (u + c.G - 1.0);
    double sum = 1.0 / u + 1.0 / (u + c.G - 1.0);
    return diff * (1.0 - (c.G + y) * sum);
  }
  double diff = 1.0 / (u + c.G - 2.0) - 1.0 / u;
  double sum = 1.0 / (u + c.G - 2.0) + 1.0 / u;
  return diff * (1.0 - (c.G + y) * sum);
}

double WeightFamily::branch_point(long long k, int e, double y) const {
  check_branch(k, e);
  check_point(y);
  if (kind_ == WeightKind::FoldedU) return 1.0 / (static_cast<double>(k) + e * y);
  double v = 1.0 / (static_cast<double>(k) + y);
  return e == 1 ? v : 1.0 - v;
}

double WeightFamily::branch_limit(int e) const {
  if ((e != 1 && e != -1)) throw std::invalid_argument("branch sign must be +1 or -1");
  if (kind_ == WeightKind::FoldedU) return 0.0;
  return e == 1 ? 0.0 : 1.0;
}

double WeightFamily::weight_sum_tail(long long K, double y) const {
  if (K < 2) throw std::invalid_argument("tail truncation K must be >= 2");
  check_point(y);
  const auto& c = golden();
  double Kd = static_cast<double>(K);
  if (kind_ == WeightKind::FoldedU) {
    return folded_H(y) *
           (1.0 / (Kd + c.G - 1.0 + y) + 1.0 / (Kd + c.G - 1.0 - y));
  }
  return (c.G + y) / (Kd + y + c.G - 1.0);
}

double WeightFamily::weight_derivative_sum_tail(long long K, double y) const {
  if (K < 2) throw std::invalid_argument("tail truncation K must be >= 2");
  check_point(y);
  const auto& c = golden();
  double Kd = static_cast<double>(K);
  if (kind_ == WeightKind::FoldedU) {
    double p = Kd + c.G - 1.0 + y;
    double m = Kd + c.G - 1.0 - y;
    return folded_H_derivative(y) * (1.0 / p + 1.0 / m) +
           folded_H(y) * (1.0 / (m * m) - 1.0 / (p * p));
  }
  double d = Kd + y + c.G - 1.0;
  return (Kd - 1.0) / (d * d);
}

}  // namespace nicf
