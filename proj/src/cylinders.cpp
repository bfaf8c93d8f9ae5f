#include "nicf/cylinders.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nicf/golden.hpp"
#include "nicf/kahan.hpp"
#include "nicf/transfer.hpp"

namespace nicf {

namespace {

// Inverse branch of the map for one digit, with its direction of monotonicity.
struct BranchImage {
  double value = 0.0;
  bool increasing = false;
};

BranchImage apply_branch(MapKind kind, const NicfDigit& d, double t) {
  double a = static_cast<double>(d.a);
  switch (kind) {
    case MapKind::Folded:
    case MapKind::HurwitzDual:
      return {1.0 / (a + d.e * t), d.e == -1};
    case MapKind::Odd:
      return {1.0 / (a + t), false};
    case MapKind::Even:
      return {d.e / (a + t), d.e == -1};
    case MapKind::EvenConjugate:
      if (d.e == 1) return {1.0 / (a + t), false};
      return {1.0 - 1.0 / (a + t), true};
  }
  return {};
}

// Values the expansion tail can take after the word's final digit, shaped by
// the pair constraints that digit imposes.
Interval tail_range(MapKind kind, const NicfDigit& last) {
  const auto& c = golden();
  switch (kind) {
    case MapKind::Folded:
      return {0.0, 0.5};
    case MapKind::Odd:
      if (last.a == 2) return {0.0, 0.5};
      if (last.a == -2) return {-0.5, 0.0};
      return {-0.5, 0.5};
    case MapKind::Even:
      if (last.a == 2) return {0.0, 0.5};
      return {-0.5, 0.5};
    case MapKind::EvenConjugate:
      return {0.0, 1.0};
    case MapKind::HurwitzDual:
      if (last.e == -1) return {0.0, c.g2};
      return {0.0, c.g};
  }
  return {0.0, 0.0};
}

void check_family_match(const CylinderSpec& spec, const WeightFamily& family) {
  bool ok = (spec.kind == MapKind::Folded &&
             family.kind() == WeightKind::FoldedU) ||
            (spec.kind == MapKind::EvenConjugate &&
             family.kind() == WeightKind::ConjugateU);
  if (!ok) {
    std::ostringstream msg;
    msg << "cylinder for the " << map_name(spec.kind)
        << " map does not match the " << family.name() << " weight family";
    throw std::invalid_argument(msg.str());
  }
}

// Integral over E of f against the invariant density of the map.
double integrate_against(const SampledFunction& f, DensityKind dens,
                         const IntervalUnion& E) {
  Accumulator acc;
  for (const auto& part : E.parts()) {
    acc.add(cc_quadrature([&](double y) { return f(y) * density(dens, y); },
                          part, 200));
  }
  return acc.total();
}

}  // namespace

CylinderSpec make_cylinder(MapKind kind, const std::vector<NicfDigit>& word) {
  if (word.empty()) {
    throw std::invalid_argument("a cylinder needs at least one digit");
  }
  CylinderSpec spec;
  spec.kind = kind;
  spec.word.kind = kind;
  spec.word.digits = word;
  validate_digits(spec.word);

  Interval range = tail_range(kind, word.back());
  double lo = range.lo, hi = range.hi;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    BranchImage a = apply_branch(kind, *it, lo);
    BranchImage b = apply_branch(kind, *it, hi);
    if (a.increasing) {
      lo = a.value;
      hi = b.value;
    } else {
      lo = b.value;
      hi = a.value;
    }
  }
  spec.interval = {lo, hi};
  return spec;
}

Interval cylinder_interval(const CylinderSpec& spec) { return spec.interval; }

int cylinder_rank(const CylinderSpec& spec) {
  return static_cast<int>(spec.word.digits.size());
}

double cylinder_measure(const CylinderSpec& spec) {
  return measure(invariant_measure(spec.kind), IntervalUnion(spec.interval)).value;
}

double pushed_indicator_at(const CylinderSpec& spec, const WeightFamily& family,
                           double y) {
  check_family_match(spec, family);
  double product = 1.0;
  double z = y;
  for (auto it = spec.word.digits.rbegin(); it != spec.word.digits.rend(); ++it) {
    product *= family.weight(it->a, it->e, z);
    z = family.branch_point(it->a, it->e, z);
  }
  return product;
}

PushedIndicator pushed_indicator(const CylinderSpec& spec,
                                 const WeightFamily& family, int degree) {
  check_family_match(spec, family);
  SampledFunction values = SampledFunction::sample(
      [&](double y) { return pushed_indicator_at(spec, family, y); },
      family.domain(), degree);
  return {spec, std::move(values)};
}

std::vector<CylinderSpec> odd_cylinder_as_folded(const DigitSequence& odd_word) {
  if (odd_word.kind != MapKind::Odd) {
    throw std::invalid_argument("the folded reduction expects an odd-map word");
  }
  if (odd_word.digits.empty()) {
    throw std::invalid_argument("a cylinder needs at least one digit");
  }
  validate_digits(odd_word);
  size_t r = odd_word.digits.size();
  std::vector<NicfDigit> base(r);
  for (size_t i = 0; i < r; ++i) {
    long long b = odd_word.digits[i].a;
    base[i].a = std::llabs(b);
    if (i + 1 < r) {
      long long next = odd_word.digits[i + 1].a;
      base[i].e = (b > 0) == (next > 0) ? 1 : -1;
    }
  }
  std::vector<CylinderSpec> out;
  for (int e : {1, -1}) {
    if (base[r - 1].a + e < 2) continue;
    base[r - 1].e = e;
    out.push_back(make_cylinder(MapKind::Folded, base));
  }
  return out;
}

IntervalUnion conjugate_J_image(const IntervalUnion& E) {
  std::vector<Interval> out;
  for (const auto& p : E.parts()) {
    if (!(p.lo >= -0.5 && p.hi <= 0.5)) {
      throw std::domain_error("conjugate_J_image expects sets inside [-1/2, 1/2]");
    }
    if (p.hi > 0.0) out.push_back({std::max(p.lo, 0.0), p.hi});
    if (p.lo < 0.0) out.push_back({p.lo + 1.0, std::min(p.hi, 0.0) + 1.0});
  }
  return IntervalUnion(std::move(out));
}

double mixing_correlation(const IntervalUnion& E, const CylinderSpec& F, int n,
                          const WeightFamily& family, int degree, long long K) {
  check_family_match(F, family);
  int r = cylinder_rank(F);
  if (n < r) {
    std::ostringstream msg;
    msg << "mixing at time n = " << n << " needs n >= the cylinder rank " << r;
    throw std::invalid_argument(msg.str());
  }
  DensityKind dens = invariant_measure(F.kind);
  SampledFunction carried = pushed_indicator(F, family, degree).values;
  for (int i = r; i < n; ++i) carried = apply_U(family, carried, K);
  double joint = integrate_against(carried, dens, E);
  double product = measure(dens, E).value * cylinder_measure(F);
  return std::fabs(joint - product);
}

double odd_mixing_correlation(const IntervalUnion& E, const DigitSequence& odd_word,
                              int n, int degree, long long K) {
  IntervalUnion mirrored = E.negate();
  bool symmetric = mirrored.parts().size() == E.parts().size();
  if (symmetric) {
    for (size_t i = 0; i < E.parts().size(); ++i) {
      symmetric = symmetric &&
                  std::fabs(E.parts()[i].lo - mirrored.parts()[i].lo) < 1e-12 &&
                  std::fabs(E.parts()[i].hi - mirrored.parts()[i].hi) < 1e-12;
    }
  }
  if (!symmetric) {
    throw std::invalid_argument(
        "the folded reduction needs E symmetric about the origin");
  }
  std::vector<CylinderSpec> folded = odd_cylinder_as_folded(odd_word);
  int r = static_cast<int>(odd_word.digits.size());
  if (n < r) {
    std::ostringstream msg;
    msg << "mixing at time n = " << n << " needs n >= the cylinder rank " << r;
    throw std::invalid_argument(msg.str());
  }
  IntervalUnion e_plus = E.intersect(Interval{0.0, 0.5});
  WeightFamily family(WeightKind::FoldedU);
  Accumulator joint, mass;
  for (const auto& part : folded) {
    SampledFunction carried = pushed_indicator(part, family, degree).values;
    for (int i = r; i < n; ++i) carried = apply_U(family, carried, K);
    joint.add(integrate_against(carried, DensityKind::FoldedMu, e_plus));
    mass.add(cylinder_measure(part));
  }
  double mu_e = measure(DensityKind::FoldedMu, e_plus).value;
  return std::fabs(0.5 * joint.total() - mu_e * 0.5 * mass.total());
}

double conjugate_mixing(const IntervalUnion& E, const CylinderSpec& F_tilde, int n,
                        int degree, long long K) {
  return mixing_correlation(conjugate_J_image(E), F_tilde, n,
                            WeightFamily(WeightKind::ConjugateU), degree, K);
}

}  // namespace nicf
