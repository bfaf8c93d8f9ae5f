#include "nicf/maps.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace nicf {

const GoldenConstants& golden() {
  static const GoldenConstants c = [] {
    GoldenConstants k;
    double s5 = std::sqrt(5.0);
    k.G = (s5 + 1.0) / 2.0;
    k.g = k.G - 1.0;
    k.g2 = k.g * k.g;
    k.G2 = k.G + 1.0;
    k.G3 = 2.0 * k.G + 1.0;
    k.log_G = std::log(k.G);
    k.inv_log_G = 1.0 / k.log_G;
    k.wirsing = 0.303663;
    return k;
  }();
  return c;
}

std::string map_name(MapKind kind) {
  switch (kind) {
    case MapKind::Folded: return "folded";
    case MapKind::Odd: return "odd";
    case MapKind::Even: return "even";
    case MapKind::EvenConjugate: return "conjugate";
    case MapKind::HurwitzDual: return "hurwitz";
  }
  return "unknown";
}

Interval map_domain(MapKind kind) {
  switch (kind) {
    case MapKind::Folded: return {0.0, 0.5};
    case MapKind::Odd: return {-0.5, 0.5};
    case MapKind::Even: return {-0.5, 0.5};
    case MapKind::EvenConjugate: return {0.0, 1.0};
    case MapKind::HurwitzDual: return {0.0, golden().g};
  }
  return {0.0, 0.0};
}

namespace {

void check_domain(MapKind kind, double x) {
  Interval d = map_domain(kind);
  if (!(x >= d.lo && x <= d.hi)) {
    std::ostringstream msg;
    msg << "x = " << x << " outside the domain [" << d.lo << ", " << d.hi
        << "] of the " << map_name(kind) << " map";
    throw std::domain_error(msg.str());
  }
}

struct StepResult {
  double next = 0.0;
  NicfDigit digit;
  bool at_zero = false;  // input was an exact fixed point of the zero branch
};

StepResult step(MapKind kind, double x) {
  StepResult r;
  switch (kind) {
    case MapKind::Folded: {
      if (x == 0.0) { r.at_zero = true; return r; }
      double inv = 1.0 / x;
      double a = std::floor(inv + 0.5);
      double rem = inv - a;
      r.digit = {static_cast<long long>(a), rem < 0.0 ? -1 : +1};
      r.next = std::fabs(rem);
      return r;
    }
    case MapKind::Odd: {
      if (x == 0.0) { r.at_zero = true; return r; }
      double s = x > 0.0 ? 1.0 : -1.0;
      double k = std::floor(1.0 / std::fabs(x) + 0.5);
      double b = s * k;
      r.digit = {static_cast<long long>(b), 0};
      r.next = 1.0 / x - b;
      return r;
    }
    case MapKind::Even: {
      if (x == 0.0) { r.at_zero = true; return r; }
      double a = std::floor(1.0 / std::fabs(x) + 0.5);
      r.digit = {static_cast<long long>(a), x > 0.0 ? +1 : -1};
      r.next = 1.0 / std::fabs(x) - a;
      return r;
    }
    case MapKind::EvenConjugate: {
      // Gauss step on (0, 1/2], mirrored Gauss step on (1/2, 1); both
      // endpoints of [0, 1] map to the fixed point 0.
      if (x == 0.0 || x == 1.0) { r.at_zero = true; return r; }
      if (x <= 0.5) {
        double k = std::floor(1.0 / x);
        r.digit = {static_cast<long long>(k), +1};
        r.next = 1.0 / x - k;
      } else {
        double z = 1.0 - x;
        double k = std::floor(1.0 / z);
        r.digit = {static_cast<long long>(k), -1};
        r.next = 1.0 / z - k;
      }
      return r;
    }
    case MapKind::HurwitzDual: {
      if (x == 0.0) { r.at_zero = true; return r; }
      double inv = 1.0 / x;
      double a = std::floor(inv + golden().g2);
      // At the right endpoint 1/x + g^2 = 2 exactly; keep the rounding of that
      // boundary from producing the inadmissible digit 1.
      if (a < 2.0) a = 2.0;
      double rem = inv - a;
      r.digit = {static_cast<long long>(a), rem < 0.0 ? -1 : +1};
      r.next = std::fabs(rem);
      return r;
    }
  }
  throw std::logic_error("unreachable map kind");
}

}  // namespace

double apply_map(MapKind kind, double x) {
  check_domain(kind, x);
  StepResult r = step(kind, x);
  return r.at_zero ? 0.0 : r.next;
}

DigitSequence expand(MapKind kind, double x, int n) {
  check_domain(kind, x);
  if (n < 1) throw std::invalid_argument("expansion length n must be >= 1");
  DigitSequence seq;
  seq.kind = kind;
  for (int i = 0; i < n; ++i) {
    StepResult r = step(kind, x);
    if (r.at_zero) {
      seq.terminated = true;
      break;
    }
    seq.digits.push_back(r.digit);
    x = r.next;
    if (x == 0.0) {
      seq.terminated = true;
      break;
    }
  }
  return seq;
}

void validate_digits(const DigitSequence& seq) {
  const auto& d = seq.digits;
  auto fail = [&](size_t i, const std::string& what) {
    std::ostringstream msg;
    msg << map_name(seq.kind) << " digit " << i + 1 << " (" << d[i].a;
    if (seq.kind != MapKind::Odd) msg << "," << (d[i].e > 0 ? "+1" : "-1");
    msg << ") " << what;
    throw std::invalid_argument(msg.str());
  };
  for (size_t i = 0; i < d.size(); ++i) {
    switch (seq.kind) {
      case MapKind::Folded:
        if (d[i].e != 1 && d[i].e != -1) fail(i, "needs a sign in {-1,+1}");
        if (d[i].a < 2) fail(i, "violates a >= 2");
        if (d[i].a + d[i].e < 2) fail(i, "violates a + e >= 2");
        break;
      case MapKind::Odd:
        if (d[i].e != 0) fail(i, "carries a sign part, but odd digits are single signed integers");
        if (std::llabs(d[i].a) < 2) fail(i, "violates |b| >= 2");
        if (i + 1 < d.size()) {
          if (d[i].a == 2 && d[i + 1].a < 2) fail(i, "with b = 2 must be followed by b >= 2");
          if (d[i].a == -2 && d[i + 1].a > -2) fail(i, "with b = -2 must be followed by b <= -2");
        }
        break;
      case MapKind::Even:
        if (d[i].e != 1 && d[i].e != -1) fail(i, "needs a sign in {-1,+1}");
        if (d[i].a < 2) fail(i, "violates a >= 2");
        if (i + 1 < d.size() && d[i].a == 2 && d[i + 1].e != 1) {
          fail(i, "with a = 2 must be followed by sign +1");
        }
        break;
      case MapKind::EvenConjugate:
        if (d[i].e != 1 && d[i].e != -1) fail(i, "needs a sign in {-1,+1}");
        if (d[i].a < 2) fail(i, "violates a >= 2");
        break;
      case MapKind::HurwitzDual:
        if (d[i].e != 1 && d[i].e != -1) fail(i, "needs a sign in {-1,+1}");
        if (d[i].a < 2) fail(i, "violates a >= 2");
        if (i + 1 < d.size() && d[i].e == -1 && d[i + 1].a < 3) {
          fail(i, "with sign -1 must be followed by a >= 3");
        }
        break;
    }
  }
}

double reconstruct(const DigitSequence& seq) {
  if (seq.digits.empty()) throw std::invalid_argument("cannot reconstruct from an empty digit sequence");
  validate_digits(seq);
  const auto& d = seq.digits;
  double v = 0.0;
  switch (seq.kind) {
    case MapKind::Folded:
    case MapKind::HurwitzDual:
      // x = 1/(a1 + e1/(a2 + e2/(...)))
      for (size_t i = d.size(); i-- > 0;) {
        v = 1.0 / (static_cast<double>(d[i].a) + d[i].e * v);
      }
      return v;
    case MapKind::Odd:
      // x = 1/(b1 + 1/(b2 + ...))
      for (size_t i = d.size(); i-- > 0;) {
        v = 1.0 / (static_cast<double>(d[i].a) + v);
      }
      return v;
    case MapKind::Even:
      // x = e1/(a1 + e2/(a2 + ...))
      for (size_t i = d.size(); i-- > 0;) {
        v = d[i].e / (static_cast<double>(d[i].a) + v);
      }
      return v;
    case MapKind::EvenConjugate:
      // inverse branches 1/(k+v) for sign +1 and 1 - 1/(k+v) for sign -1
      for (size_t i = d.size(); i-- > 0;) {
        double w = 1.0 / (static_cast<double>(d[i].a) + v);
        v = d[i].e > 0 ? w : 1.0 - w;
      }
      return v;
  }
  throw std::logic_error("unreachable map kind");
}

double conjugate_J(double x) {
  if (!(x >= -0.5 && x <= 0.5)) {
    throw std::domain_error("conjugate_J expects x in [-1/2, 1/2]");
  }
  return x >= 0.0 ? x : x + 1.0;
}

double conjugate_J_inverse(double y) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw std::domain_error("conjugate_J_inverse expects y in [0, 1]");
  }
  return y < 0.5 ? y : y - 1.0;
}

}  // namespace nicf
