#include "nicf/measures.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "nicf/kahan.hpp"

namespace nicf {

std::string density_name(DensityKind kind) {
  switch (kind) {
    case DensityKind::FoldedMu: return "mu";
    case DensityKind::OddMuO: return "mu_o";
    case DensityKind::EvenMuE: return "mu_e";
    case DensityKind::ConjugateMuE: return "mu_e_tilde";
    case DensityKind::HurwitzNu: return "nu";
    case DensityKind::Lebesgue: return "lebesgue";
  }
  return "unknown";
}

Interval density_domain(DensityKind kind) {
  switch (kind) {
    case DensityKind::FoldedMu: return {0.0, 0.5};
    case DensityKind::OddMuO: return {-0.5, 0.5};
    case DensityKind::EvenMuE: return {-0.5, 0.5};
    case DensityKind::ConjugateMuE: return {0.0, 1.0};
    case DensityKind::HurwitzNu: return {0.0, golden().g};
    case DensityKind::Lebesgue: return {-0.5, 1.0};
  }
  return {0.0, 0.0};
}

DensityKind invariant_measure(MapKind kind) {
  switch (kind) {
    case MapKind::Folded: return DensityKind::FoldedMu;
    case MapKind::Odd: return DensityKind::OddMuO;
    case MapKind::Even: return DensityKind::EvenMuE;
    case MapKind::EvenConjugate: return DensityKind::ConjugateMuE;
    case MapKind::HurwitzDual: return DensityKind::HurwitzNu;
  }
  return DensityKind::Lebesgue;
}

namespace {

void check_point(DensityKind kind, double x) {
  Interval d = density_domain(kind);
  if (!(x >= d.lo && x <= d.hi)) {
    std::ostringstream msg;
    msg << "x = " << x << " outside the domain [" << d.lo << ", " << d.hi
        << "] of " << density_name(kind);
    throw std::domain_error(msg.str());
  }
}

// Normalized antiderivatives, increasing on the domain, with F(domain) of
// total increment 1 for the probability kinds.
double antiderivative(DensityKind kind, double x) {
  const auto& c = golden();
  switch (kind) {
    case DensityKind::FoldedMu:
      return c.inv_log_G * (std::log(c.G + x) - std::log(c.G2 - x));
    case DensityKind::OddMuO: {
      double t = std::fabs(x);
      double v = 0.5 * c.inv_log_G *
                 (std::log((c.G + t) / c.G) + std::log(c.G2 / (c.G2 - t)));
      return x < 0.0 ? -v : v;
    }
    case DensityKind::EvenMuE:
      if (x >= 0.0) return c.inv_log_G * std::log((c.G + x) / c.G);
      return c.inv_log_G * (std::log(c.G2 + x) - std::log(c.G2));
    case DensityKind::ConjugateMuE:
      return c.inv_log_G * std::log((c.G + x) / c.G);
    case DensityKind::HurwitzNu:
      if (x <= c.g2) return c.inv_log_G * (std::log(2.0 + x) - std::log(2.0 - x));
      return c.inv_log_G * (std::log(2.0 + c.g2) - std::log(2.0 - c.g2) +
                            std::log(2.0 + x) - std::log(2.0 + c.g2));
    case DensityKind::Lebesgue:
      return x;
  }
  return 0.0;
}

double part_measure(DensityKind kind, double lo, double hi) {
  return antiderivative(kind, hi) - antiderivative(kind, lo);
}

}  // namespace

double raw_density(DensityKind kind, double x) {
  check_point(kind, x);
  const auto& c = golden();
  switch (kind) {
    case DensityKind::FoldedMu:
      return 1.0 / (c.G + x) + 1.0 / (c.G2 - x);
    case DensityKind::OddMuO: {
      double t = std::fabs(x);
      return 1.0 / (c.G + t) + 1.0 / (c.G2 - t);
    }
    case DensityKind::EvenMuE:
      return x >= 0.0 ? 1.0 / (c.G + x) : 1.0 / (c.G2 + x);
    case DensityKind::ConjugateMuE:
      return 1.0 / (c.G + x);
    case DensityKind::HurwitzNu:
      if (x < c.g2) return 1.0 / (2.0 + x) + 1.0 / (2.0 - x);
      return 1.0 / (2.0 + x);
    case DensityKind::Lebesgue:
      return 1.0;
  }
  return 0.0;
}

double density(DensityKind kind, double x) {
  double raw = raw_density(kind, x);
  const auto& c = golden();
  switch (kind) {
    case DensityKind::OddMuO: return 0.5 * c.inv_log_G * raw;
    case DensityKind::Lebesgue: return raw;
    default: return c.inv_log_G * raw;
  }
}

MeasureValue measure(DensityKind kind, const IntervalUnion& E) {
  Interval d = density_domain(kind);
  Accumulator acc;
  for (const auto& p : E.parts()) {
    if (p.lo < d.lo || p.hi > d.hi) {
      std::ostringstream msg;
      msg << "interval [" << p.lo << ", " << p.hi << "] outside the domain of "
          << density_name(kind);
      throw std::domain_error(msg.str());
    }
    acc.add(part_measure(kind, p.lo, p.hi));
  }
  MeasureValue out;
  out.value = std::max(0.0, acc.total());
  out.kind = kind;
  out.set = E;
  return out;
}

double preimage_measure(MapKind kind, const IntervalUnion& E, long long K) {
  if (K < 3) throw std::invalid_argument("preimage truncation K must be >= 3");
  DensityKind m = invariant_measure(kind);
  Interval dom = map_domain(kind);
  for (const auto& p : E.parts()) {
    if (p.lo < dom.lo || p.hi > dom.hi) {
      std::ostringstream msg;
      msg << "interval [" << p.lo << ", " << p.hi << "] outside the domain of the "
          << map_name(kind) << " map";
      throw std::domain_error(msg.str());
    }
  }

  const auto& c = golden();
  const double C = c.inv_log_G;
  Accumulator acc;

  for (const auto& p : E.parts()) {
    double al = p.lo, be = p.hi;
    switch (kind) {
      case MapKind::Folded: {
        for (long long a = 2; a <= K; ++a) {
          acc.add(part_measure(m, 1.0 / (a + be), 1.0 / (a + al)));
          if (a >= 3) acc.add(part_measure(m, 1.0 / (a - al), 1.0 / (a - be)));
        }
        double Kc = static_cast<double>(K) + 1.0 - c.g2;
        acc.add(C * std::log((Kc + be) / (Kc + al)));
        acc.add(C * std::log((Kc - al) / (Kc - be)));
        break;
      }
      case MapKind::Odd: {
        for (long long b = 2; b <= K; ++b) {
          double a1 = (b == 2) ? std::max(al, 0.0) : al;
          if (be > a1) {
            acc.add(part_measure(m, 1.0 / (b + be), 1.0 / (b + a1)));
          }
          double b1 = (b == 2) ? std::min(be, 0.0) : be;
          if (b1 > al) {
            acc.add(part_measure(m, 1.0 / (b1 - b), 1.0 / (al - b)));
          }
        }
        double Kc = static_cast<double>(K) + 1.0 - c.g2;
        acc.add(0.5 * C * std::log((Kc + be) / (Kc + al)));
        acc.add(0.5 * C * std::log((Kc - al) / (Kc - be)));
        break;
      }
      case MapKind::Even: {
        for (long long a = 2; a <= K; ++a) {
          double a1 = (a == 2) ? std::max(al, 0.0) : al;
          if (be > a1) {
            acc.add(part_measure(m, 1.0 / (a + be), 1.0 / (a + a1)));
            acc.add(part_measure(m, -1.0 / (a + a1), -1.0 / (a + be)));
          }
        }
        double Kd = static_cast<double>(K) + 1.0;
        acc.add(C * (std::lgamma(Kd + al) - std::lgamma(Kd + al + c.g) -
                     std::lgamma(Kd + be) + std::lgamma(Kd + be + c.g)));
        acc.add(C * (std::lgamma(Kd + be) - std::lgamma(Kd + be - c.g2) -
                     std::lgamma(Kd + al) + std::lgamma(Kd + al - c.g2)));
        break;
      }
      case MapKind::EvenConjugate: {
        for (long long k = 2; k <= K; ++k) {
          acc.add(part_measure(m, 1.0 / (k + be), 1.0 / (k + al)));
          acc.add(part_measure(m, 1.0 - 1.0 / (k + al), 1.0 - 1.0 / (k + be)));
        }
        double Kd = static_cast<double>(K) + 1.0;
        acc.add(C * (std::lgamma(Kd + al) - std::lgamma(Kd + al + c.g) -
                     std::lgamma(Kd + be) + std::lgamma(Kd + be + c.g)));
        acc.add(C * (std::lgamma(Kd + be) - std::lgamma(Kd + be - c.g2) -
                     std::lgamma(Kd + al) + std::lgamma(Kd + al - c.g2)));
        break;
      }
      case MapKind::HurwitzDual: {
        double b2 = std::min(be, c.g2);
        for (long long i = 2; i <= K; ++i) {
          acc.add(part_measure(m, 1.0 / (i + be), 1.0 / (i + al)));
          if (b2 > al) {
            acc.add(part_measure(m, 1.0 / (i - al), 1.0 / (i - b2)));
          }
        }
        double Kc = static_cast<double>(K) + 0.5;
        acc.add(C * std::log((Kc + be) / (Kc + al)));
        if (b2 > al) acc.add(C * std::log((Kc - al) / (Kc - b2)));
        break;
      }
    }
  }
  return std::max(0.0, acc.total());
}

PushforwardReport pushforward_check(int n_samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  PushforwardReport report;
  report.n_samples = n_samples;
  for (int i = 0; i < n_samples; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    IntervalUnion E(a, b);
    double folded = measure(DensityKind::FoldedMu, E).value;
    double odd2 = 2.0 * measure(DensityKind::OddMuO, E).value;
    report.max_discrepancy = std::max(report.max_discrepancy, std::fabs(folded - odd2));
  }
  return report;
}

}  // namespace nicf
