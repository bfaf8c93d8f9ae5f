#include "nicf/gkl.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "nicf/chebyshev.hpp"
#include "nicf/golden.hpp"
#include "nicf/kahan.hpp"
#include "nicf/measures.hpp"
#include "nicf/transfer.hpp"
#include "nicf/weights.hpp"

namespace nicf {

namespace {

struct FamilySetup {
  WeightFamily family;
  DensityKind density_kind;   // density paired with the starting reciprocal
  bool raw = false;           // whether that density is the unnormalized one
  double limit_constant = 0.0;
  double stated_rate = 0.0;
};

// The folded start 1/h uses the raw density (limit 1/(2 log G)); the
// conjugate start uses the normalized one, making the limit exactly 1.
FamilySetup family_setup(MapKind kind) {
  const auto& c = golden();
  switch (kind) {
    case MapKind::Folded:
      return {WeightFamily(WeightKind::FoldedU), DensityKind::FoldedMu, true,
              0.5 * c.inv_log_G, 0.288};
    case MapKind::EvenConjugate:
      return {WeightFamily(WeightKind::ConjugateU), DensityKind::ConjugateMuE,
              false, 1.0, 0.234};
    default:
      throw std::invalid_argument(
          "volume decay is computed for the folded and conjugate maps; the "
          "odd and even maps reduce to them");
  }
}

double paired_density(const FamilySetup& s, double x) {
  return s.raw ? raw_density(s.density_kind, x) : density(s.density_kind, x);
}

SampledFunction starting_reciprocal(MapKind kind, int degree) {
  if (kind == MapKind::Folded) {
    return SampledFunction::sample(folded_H, map_domain(kind), degree);
  }
  return SampledFunction::sample(conjugate_H, map_domain(kind), degree);
}

double sup_error(const FamilySetup& s, const SampledFunction& gamma) {
  Interval dom = gamma.domain();
  double sup = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    double x = dom.lo + (dom.hi - dom.lo) * i / 2000.0;
    double diff =
        std::fabs(gamma(x) - s.limit_constant) * paired_density(s, x);
    if (diff > sup) sup = diff;
  }
  for (double x : gamma.nodes()) {
    double diff =
        std::fabs(gamma(x) - s.limit_constant) * paired_density(s, x);
    if (diff > sup) sup = diff;
  }
  return sup;
}

double integrate_volume(const FamilySetup& s, const SampledFunction& gamma,
                        const IntervalUnion& E) {
  Accumulator acc;
  for (const auto& part : E.parts()) {
    acc.add(cc_quadrature(
        [&](double x) { return gamma(x) * paired_density(s, x); }, part, 200));
  }
  return acc.total();
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t shard) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (shard + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Fraction of uniform starts on the map's domain whose n-th image lies in E.
// Sharded generators make the count independent of the thread layout.
double survey_fraction(MapKind kind, const IntervalUnion& E, int n,
                       long long n_samples, std::uint64_t seed) {
  const int shards = 256;
  Interval dom = map_domain(kind);
  long long hits = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) reduction(+ : hits)
#endif
  for (int s = 0; s < shards; ++s) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(s)));
    long long count = n_samples / shards + (s < n_samples % shards ? 1 : 0);
    for (long long i = 0; i < count; ++i) {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      double x = dom.lo + (dom.hi - dom.lo) * u;
      for (int k = 0; k < n; ++k) x = apply_map(kind, x);
      if (E.contains(x)) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(n_samples);
}

void check_inside(MapKind kind, const IntervalUnion& E) {
  Interval dom = map_domain(kind);
  for (const auto& part : E.parts()) {
    if (part.lo < dom.lo - 1e-15 || part.hi > dom.hi + 1e-15) {
      std::ostringstream msg;
      msg << "the set reaches [" << part.lo << ", " << part.hi
          << "], outside the domain of the " << map_name(kind) << " map";
      throw std::domain_error(msg.str());
    }
  }
}

}  // namespace

DecayReport gkl_iterate(MapKind kind, int n_max, int degree, long long K) {
  if (n_max < 2) {
    throw std::invalid_argument("the decay iteration needs n_max >= 2");
  }
  FamilySetup s = family_setup(kind);
  DecayReport report;
  report.map_kind = kind;
  report.degree = degree;
  report.n_min = 1;
  report.n_max = n_max;
  report.stated_rate = s.stated_rate;

  SampledFunction gamma = starting_reciprocal(kind, degree);
  report.errors.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    gamma = apply_U(s.family, gamma, K);
    report.errors.push_back(sup_error(s, gamma));
  }

  report.noise_floor_n = n_max + 1;
  for (int n = 1; n <= n_max; ++n) {
    if (report.errors[n - 1] < 1e-13) {
      report.noise_floor_n = n;
      break;
    }
  }
  if (report.noise_floor_n <= n_max) {
    std::ostringstream msg;
    msg << "errors reach the rounding floor at n = " << report.noise_floor_n
        << "; raise the collocation degree to resolve later steps";
    report.warning = msg.str();
  }

  report.ratios_ok = true;
  for (int n = 3; n + 1 < report.noise_floor_n && n < n_max; ++n) {
    double ratio = report.errors[n] / report.errors[n - 1];
    if (!(ratio <= s.stated_rate)) report.ratios_ok = false;
  }

  // Least squares on (n, log e(n)) over the resolved range.
  report.fit_first = 0;
  report.fit_last = 0;
  double sn = 0.0, se = 0.0, snn = 0.0, sne = 0.0;
  int m = 0;
  for (int n = 1; n <= n_max; ++n) {
    double e = report.errors[n - 1];
    if (!(e > 1e-12 && e < 1e-2)) continue;
    if (m == 0) report.fit_first = n;
    report.fit_last = n;
    double le = std::log(e);
    sn += n;
    se += le;
    snn += static_cast<double>(n) * n;
    sne += n * le;
    ++m;
  }
  if (m >= 2) {
    double slope = (m * sne - sn * se) / (m * snn - sn * sn);
    report.fitted_rate = std::exp(slope);
  } else {
    report.warning += report.warning.empty() ? "" : "; ";
    report.warning += "fewer than two resolved errors; rate fit skipped";
  }
  report.verdict = m >= 2 && report.fitted_rate <= s.stated_rate;
  return report;
}

PreimageVolumeReport preimage_volume_check(MapKind kind, const IntervalUnion& E,
                                           int n, long long n_samples,
                                           std::uint64_t seed, int degree,
                                           long long K) {
  if (n < 0) throw std::invalid_argument("the preimage depth n must be >= 0");
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (kind == MapKind::HurwitzDual) {
    throw std::invalid_argument(
        "the two-route volume identity covers the folded, odd, even, and "
        "conjugate maps");
  }
  check_inside(kind, E);

  // Reduce to the operator family and the sets it integrates over. Odd sets
  // split into two folded images whose integrals add; even sets map through J.
  MapKind op_kind = kind;
  std::vector<IntervalUnion> pieces;
  switch (kind) {
    case MapKind::Folded:
      pieces.push_back(E);
      break;
    case MapKind::Odd:
      op_kind = MapKind::Folded;
      pieces.push_back(E.intersect(Interval{0.0, 0.5}));
      pieces.push_back(E.intersect(Interval{-0.5, 0.0}).negate());
      break;
    case MapKind::Even: {
      op_kind = MapKind::EvenConjugate;
      std::vector<Interval> shifted;
      for (const auto& p : E.parts()) {
        if (p.hi > 0.0) shifted.push_back({std::max(p.lo, 0.0), p.hi});
        if (p.lo < 0.0) shifted.push_back({p.lo + 1.0, std::min(p.hi, 0.0) + 1.0});
      }
      pieces.push_back(IntervalUnion(std::move(shifted)));
      break;
    }
    default:
      pieces.push_back(E);
      break;
  }

  FamilySetup s = family_setup(op_kind);
  SampledFunction gamma = starting_reciprocal(op_kind, degree);
  for (int k = 0; k < n; ++k) gamma = apply_U(s.family, gamma, K);

  double dom_length = map_domain(op_kind).length();
  PreimageVolumeReport report;
  report.map_kind = kind;
  report.n = n;
  report.n_samples = n_samples;
  report.seed = seed;
  Accumulator op_value, limit;
  for (const auto& piece : pieces) {
    op_value.add(integrate_volume(s, gamma, piece));
    limit.add(dom_length * measure(s.density_kind, piece).value);
  }
  report.operator_value = op_value.total();
  report.limit_value = limit.total();
  report.invariant_mass = measure(invariant_measure(kind), E).value;
  report.residual_over_mass =
      std::fabs(report.operator_value - report.limit_value) /
      report.invariant_mass;

  double fraction = survey_fraction(kind, E, n, n_samples, seed);
  double total_length = map_domain(kind).length();
  report.mc_value = total_length * fraction;
  report.mc_standard_error =
      total_length *
      std::sqrt(fraction * (1.0 - fraction) / static_cast<double>(n_samples));
  report.mc_discrepancy = std::fabs(report.operator_value - report.mc_value);
  return report;
}

std::vector<LevyRow> levy_comparison() {
  const auto& c = golden();
  double nan = std::numeric_limits<double>::quiet_NaN();
  BoundReport s1 = s1_bound_folded();
  BoundReport s2 = s2_bound_folded();
  PhiBoundReport l2 = phi_bound_conjugate();
  PsiBoundReport l3 = psi_bound_conjugate();
  DecayReport folded = gkl_iterate(MapKind::Folded, 12);
  DecayReport conj = gkl_iterate(MapKind::EvenConjugate, 12);
  return {
      {"folded", 0.288, s1.certified + s2.certified, folded.fitted_rate},
      {"conjugate", 0.234, l2.phi_at_zero + l3.total_sup, conj.fitted_rate},
      {"gauss-wirsing", c.wirsing, nan, nan},
  };
}

}  // namespace nicf
