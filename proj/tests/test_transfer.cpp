#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <functional>
#include <stdexcept>

#include <boost/math/special_functions/digamma.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nicf/golden.hpp"
#include "nicf/kahan.hpp"
#include "nicf/measures.hpp"
#include "nicf/transfer.hpp"

using namespace nicf;

namespace {

const WeightFamily kFolded(WeightKind::FoldedU);
const WeightFamily kConjugate(WeightKind::ConjugateU);

double brute_phi2(double y, long long terms) {
  Accumulator acc;
  const double B = golden().G - 2.0;
  for (long long k = 2; k <= terms; ++k) {
    double u = k + y;
    acc.add(1.0 / (u * (u + B)));
  }
  for (long long k = 3; k <= terms; ++k) {
    double u = k - y;
    acc.add(1.0 / (u * (u + B)));
  }
  return acc.total();
}

double brute_phi1(double y, long long terms) {
  Accumulator acc;
  for (long long k = terms; k >= 2; --k) acc.add(1.0 / ((k + y) * (k + y)));
  for (long long k = terms; k >= 3; --k) acc.add(1.0 / ((k - y) * (k - y)));
  return acc.total();
}

SampledFunction sample_on(const WeightFamily& fam,
                          const std::function<double(double)>& f, int degree = 64) {
  return SampledFunction::sample(f, fam.domain(), degree);
}

double max_node_diff(const SampledFunction& a, const SampledFunction& b) {
  double worst = 0.0;
  for (size_t i = 0; i < a.values().size(); ++i) {
    worst = std::max(worst, std::fabs(a.values()[i] - b.values()[i]));
  }
  return worst;
}

}  // namespace

TEST_CASE("weight families evaluate known closed-form values") {
  const auto& c = golden();
  CHECK(folded_H(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(folded_H(0.5) ==
        doctest::Approx((c.G + 0.5) * (c.G2 - 0.5) / c.G3).epsilon(1e-15));
  for (int i = 0; i <= 20; ++i) {
    double y = 0.5 * i / 20.0;
    CHECK(folded_H(y) * (c.G3 / ((c.G + y) * (c.G2 - y))) ==
          doctest::Approx(1.0).epsilon(1e-14));
    double x = i / 20.0;
    CHECK(conjugate_H(x) * density(DensityKind::ConjugateMuE, x) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }

  CHECK(kFolded.weight(2, 1, 0.0) ==
        doctest::Approx(2.0 * c.G - 3.0).epsilon(1e-14));
  CHECK(kConjugate.weight(2, 1, 0.0) ==
        doctest::Approx(1.0 / (2.0 * c.G2)).epsilon(1e-14));
  CHECK(kConjugate.weight(2, -1, 0.0) ==
        doctest::Approx(0.5 * c.g2).epsilon(1e-14));

  CHECK(kFolded.branch_point(3, -1, 0.5) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(kConjugate.branch_point(4, -1, 0.25) ==
        doctest::Approx(1.0 - 1.0 / 4.25).epsilon(1e-15));
  CHECK(kFolded.branch_limit(1) == 0.0);
  CHECK(kFolded.branch_limit(-1) == 0.0);
  CHECK(kConjugate.branch_limit(1) == 0.0);
  CHECK(kConjugate.branch_limit(-1) == 1.0);

  CHECK_THROWS_AS(kFolded.weight(2, -1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(kFolded.weight(1, 1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(kConjugate.weight(3, 0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(kFolded.weight(3, 1, 0.6), std::domain_error);
  CHECK_THROWS_AS(kConjugate.weight(3, 1, -0.2), std::domain_error);
}

TEST_CASE("weight derivatives match centered differences") {
  const double h = 1e-6;
  for (const auto* fam : {&kFolded, &kConjugate}) {
    double hi = fam->domain().hi;
    for (long long k : {2, 3, 7, 40}) {
      for (int e : {1, -1}) {
        if (k < fam->k_min(e)) continue;
        for (int i = 1; i <= 9; ++i) {
          double y = hi * i / 10.0;
          double fd =
              (fam->weight(k, e, y + h) - fam->weight(k, e, y - h)) / (2.0 * h);
          CHECK(fam->weight_derivative(k, e, y) ==
                doctest::Approx(fd).epsilon(1e-7));
        }
      }
    }
  }
  CHECK(folded_H_derivative(0.3) ==
        doctest::Approx((folded_H(0.3 + h) - folded_H(0.3 - h)) / (2.0 * h))
            .epsilon(1e-9));
}

TEST_CASE("weight sums telescope to one and derivative sums to zero") {
  for (const auto* fam : {&kFolded, &kConjugate}) {
    CAPTURE(fam->name());
    // truncation-independence: the closed tails make the partial sums agree
    // across K to rounding
    double hi = fam->domain().hi;
    for (int i = 0; i <= 10; ++i) {
      double y = hi * i / 10.0;
      for (long long K : {5LL, 37LL, 500LL}) {
        Accumulator acc, dacc;
        for (int e : {1, -1}) {
          for (long long k = fam->k_min(e); k <= K; ++k) {
            acc.add(fam->weight(k, e, y));
            dacc.add(fam->weight_derivative(k, e, y));
          }
        }
        acc.add(fam->weight_sum_tail(K, y));
        dacc.add(fam->weight_derivative_sum_tail(K, y));
        CHECK(acc.total() == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::fabs(dacc.total()) < 1e-12);
      }
    }
    CHECK(weight_sum_check(*fam, 2000, 400) < 1e-12);
    CHECK(weight_derivative_sum_check(*fam, 2000, 400) < 1e-10);
    // positivity on a sample of branches
    for (long long k : {2, 3, 11}) {
      for (int e : {1, -1}) {
        if (k < fam->k_min(e)) continue;
        CHECK(fam->weight(k, e, 0.37 * hi) > 0.0);
      }
    }
  }
}

TEST_CASE("folded weights over squared digits rearrange into partial fractions") {
  const auto& c = golden();
  for (long long k = 2; k <= 50; ++k) {
    for (int e : {1, -1}) {
      if (k < kFolded.k_min(e)) continue;
      for (int i = 0; i <= 16; ++i) {
        double y = 0.5 * i / 16.0;
        double u = static_cast<double>(k) + e * y;
        double H = folded_H(y);
        double direct = kFolded.weight(k, e, y) / (u * u);
        double form1 = H * (-c.G3 / (u * u) - c.G3 / u +
                            (c.G3 + c.G2) / (u + c.G - 2.0) -
                            c.G2 / (u + c.G - 1.0));
        double form2 = H * (-c.G3 / (u * u) + c.G / (u * (u + c.G - 2.0)) +
                            c.G2 * (1.0 / (u + c.G - 2.0) -
                                    1.0 / (u + c.G - 1.0)));
        CHECK(std::fabs(form1 - direct) < 1e-12);
        CHECK(std::fabs(form2 - direct) < 1e-12);
      }
    }
  }
}

TEST_CASE("phi1 matches its series and brute-force sums") {
  const auto& c = golden();
  double limit = M_PI * M_PI / 3.0 - 9.0 / 4.0;
  CHECK(phi1(0.0) == doctest::Approx(limit).epsilon(1e-15));
  CHECK(phi1(0.5) == doctest::Approx(0.9807155122004689).epsilon(1e-12));
  CHECK(phi1(0.25) == doctest::Approx(0.9949004121560439).epsilon(1e-12));
  // continuity across the series crossover
  CHECK(std::fabs(phi1(1e-3 * (1.0 - 1e-13)) - phi1(1e-3)) < 1e-9);
  for (double y : {0.5, 0.25, 0.1, 0.003}) {
    long long terms = 200000;
    double tail = 2.0 / (terms + 0.5);  // integral estimate of both remainders
    CHECK(phi1(y) == doctest::Approx(brute_phi1(y, terms) + tail).epsilon(2e-6));
  }
  CHECK_THROWS_AS(phi1(-0.01), std::domain_error);
  CHECK_THROWS_AS(phi1(0.51), std::domain_error);
  (void)c;
}

TEST_CASE("phi2 brackets its tail and matches the digamma value at zero") {
  const auto& c = golden();
  BracketedValue fine = phi2(0.0, 1000000);
  CHECK(fine.half_width < 1e-11);
  CHECK(fine.value == doctest::Approx(1.1642516098681602).epsilon(2e-12));
  double closed = (2.0 / (c.G - 2.0)) *
                      (boost::math::digamma(c.G) - boost::math::digamma(2.0)) -
                  1.0 / (2.0 * c.G);
  CHECK(fine.value == doctest::Approx(closed).epsilon(1e-12));

  for (double y : {0.0, 0.2, 0.5}) {
    BracketedValue coarse = phi2(y, 2000);
    BracketedValue finer = phi2(y, 200000);
    CHECK(std::fabs(coarse.value - finer.value) <=
          coarse.half_width + finer.half_width + 1e-14);
    CHECK(coarse.half_width > finer.half_width);
    double brute = brute_phi2(y, 2000000);
    CHECK(std::fabs(finer.value - brute) < 1e-6);
  }
  CHECK_THROWS_AS(phi2(0.7), std::domain_error);
  CHECK_THROWS_AS(phi2(0.1, 2), std::invalid_argument);
}

TEST_CASE("slope bound: grid sup with padding stays under 0.097") {
  BoundReport r = s1_bound_folded(1e-3, 3000);
  CHECK(r.threshold == 0.097);
  CHECK(r.grid_sup > 0.0968);
  CHECK(r.grid_sup < 0.0969);
  CHECK(r.argmax < 0.01);
  CHECK(r.padding > 0.0);
  CHECK(r.certified < r.threshold);
  CHECK(r.pass);
  CHECK(r.value_at_zero == doctest::Approx(0.09688056299934589).epsilon(1e-12));
  // pointwise values agree with an independent recomputation at a few spots
  const auto& c = golden();
  for (double y : {0.0, 0.1, 0.5}) {
    BracketedValue p2 = phi2(y, 3000);
    double direct = -(c.G + y) * (c.G2 - y) * phi1(y) +
                    c.G * folded_H(y) * p2.value + c.G * c.G;
    CHECK(s1_pointwise(y, 3000) == doctest::Approx(direct).epsilon(1e-13));
  }
  CHECK_THROWS_AS(s1_bound_folded(0.5), std::invalid_argument);
}

TEST_CASE("curvature bound: majorant sup sits at zero and stays under 0.191") {
  const auto& c = golden();
  BoundReport r = s2_bound_folded(1e-4);
  CHECK(r.threshold == 0.191);
  CHECK(r.argmax == 0.0);
  CHECK(r.grid_sup == doctest::Approx(0.19098300562505258).epsilon(1e-13));
  CHECK(r.value_at_zero == r.grid_sup);
  CHECK(r.certified < r.threshold);
  CHECK(r.pass);
  CHECK(s2_pointwise(0.5) == doctest::Approx(0.5 / c.G3).epsilon(1e-13));
  // the majorant really dominates the truncated absolute-derivative sum
  for (int i = 0; i <= 100; ++i) {
    double y = 0.5 * i / 100.0;
    Accumulator acc;
    for (int e : {1, -1}) {
      for (long long k = kFolded.k_min(e); k <= 2000; ++k) {
        acc.add(std::fabs(kFolded.weight_derivative(k, e, y)));
      }
    }
    CHECK(0.25 * acc.total() <= s2_pointwise(y) + 1e-12);
  }
}

TEST_CASE("transfer operator fixes constants and the invariant density") {
  for (const auto* fam : {&kFolded, &kConjugate}) {
    CAPTURE(fam->name());
    SampledFunction one = sample_on(*fam, [](double) { return 1.0; });
    SampledFunction uone = apply_U(*fam, one, 2000);
    CHECK(max_node_diff(uone, one) < 1e-12);
  }

  DensityKind dens[2] = {DensityKind::FoldedMu, DensityKind::ConjugateMuE};
  const WeightFamily* fams[2] = {&kFolded, &kConjugate};
  for (int idx = 0; idx < 2; ++idx) {
    CAPTURE(fams[idx]->name());
    SampledFunction h =
        sample_on(*fams[idx], [&](double y) { return raw_density(dens[idx], y); });
    SampledFunction ph = apply_P(*fams[idx], h, 10000);
    CHECK(max_node_diff(ph, h) < 1e-10);
    SampledFunction residual = ph;
    for (size_t i = 0; i < residual.values().size(); ++i) {
      residual.values()[i] -= h.values()[i];
    }
    CHECK(residual.sup_abs() < 1e-10);
  }
}

TEST_CASE("weighted and length-side operators are conjugate through the density") {
  DensityKind dens[2] = {DensityKind::FoldedMu, DensityKind::ConjugateMuE};
  const WeightFamily* fams[2] = {&kFolded, &kConjugate};
  for (int idx = 0; idx < 2; ++idx) {
    CAPTURE(fams[idx]->name());
    const WeightFamily& fam = *fams[idx];
    auto f = [](double y) { return 0.3 + y * y - 0.25 * y; };
    SampledFunction fs = sample_on(fam, f);
    SampledFunction lhs = apply_U(fam, fs, 10000);
    SampledFunction hf = sample_on(
        fam, [&](double y) { return raw_density(dens[idx], y) * f(y); });
    SampledFunction phf = apply_P(fam, hf, 10000);
    double worst = 0.0;
    for (size_t i = 0; i < lhs.values().size(); ++i) {
      double rhs = phf.values()[i] / raw_density(dens[idx], lhs.nodes()[i]);
      worst = std::max(worst, std::fabs(lhs.values()[i] - rhs));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("transfer operator preserves the invariant integral") {
  DensityKind dens[2] = {DensityKind::FoldedMu, DensityKind::ConjugateMuE};
  const WeightFamily* fams[2] = {&kFolded, &kConjugate};
  for (int idx = 0; idx < 2; ++idx) {
    CAPTURE(fams[idx]->name());
    const WeightFamily& fam = *fams[idx];
    auto f = [](double y) { return std::cos(2.0 * y) + 0.5 * y; };
    SampledFunction fs = sample_on(fam, f);
    SampledFunction uf = apply_U(fam, fs, 10000);
    double before = cc_quadrature(
        [&](double y) { return fs(y) * density(dens[idx], y); }, fam.domain(), 200);
    double after = cc_quadrature(
        [&](double y) { return uf(y) * density(dens[idx], y); }, fam.domain(), 200);
    CHECK(after == doctest::Approx(before).epsilon(1e-10));
  }
}

TEST_CASE("collocation route agrees with direct pointwise evaluation") {
  auto f = [](double y) { return 1.0 / (golden().G + y); };
  auto df = [](double y) {
    double u = golden().G + y;
    return -1.0 / (u * u);
  };
  for (const auto* fam : {&kFolded, &kConjugate}) {
    CAPTURE(fam->name());
    SampledFunction fs = sample_on(*fam, f);
    SampledFunction uf = apply_U(*fam, fs, 10000);
    for (int i = 0; i <= 64; i += 8) {
      double y = uf.nodes()[i];
      CHECK(uf.values()[i] ==
            doctest::Approx(apply_U_at(*fam, f, df, 10000, y)).epsilon(1e-12));
    }
    SampledFunction pf = apply_P(*fam, fs, 10000);
    for (int i = 0; i <= 64; i += 16) {
      double y = pf.nodes()[i];
      CHECK(pf.values()[i] ==
            doctest::Approx(apply_P_at(*fam, f, df, 10000, y)).epsilon(1e-12));
    }
  }
}

TEST_CASE("digit truncation is invisible once tails are folded in") {
  auto identity = [](double y) { return y; };
  auto one = [](double) { return 1.0; };
  auto square = [](double y) { return y * y; };
  auto dsquare = [](double y) { return 2.0 * y; };
  for (const auto* fam : {&kFolded, &kConjugate}) {
    CAPTURE(fam->name());
    for (double frac : {0.0, 0.6}) {
      double y = fam->domain().hi * frac;
      // linear arguments are handled exactly by the first-order tail
      double coarse = apply_U_at(*fam, identity, one, 1000, y);
      double fine = apply_U_at(*fam, identity, one, 10000, y);
      CHECK(std::fabs(coarse - fine) < 1e-12);
      // quadratic remainders shrink like 1/K^3
      double q1 = apply_U_at(*fam, square, dsquare, 10000, y);
      double q2 = apply_U_at(*fam, square, dsquare, 30000, y);
      CHECK(std::fabs(q1 - q2) < 1e-10);
    }
  }
}

TEST_CASE("parallel and serial operator builds agree bitwise") {
  auto f = [](double y) { return std::sin(3.0 * y) + 0.2 * y; };
  for (const auto* fam : {&kFolded, &kConjugate}) {
    CAPTURE(fam->name());
    SampledFunction fs = sample_on(*fam, f, 48);
    SampledFunction a = apply_U(*fam, fs, 2000);
    SampledFunction b = apply_U_serial(*fam, fs, 2000);
    for (size_t i = 0; i < a.values().size(); ++i) {
      CHECK(a.values()[i] == b.values()[i]);
    }
#ifdef _OPENMP
    int saved = omp_get_max_threads();
    omp_set_num_threads(3);
    SampledFunction c = apply_U(*fam, fs, 2001);
    omp_set_num_threads(saved);
    SampledFunction d = apply_U_serial(*fam, fs, 2001);
    for (size_t i = 0; i < c.values().size(); ++i) {
      CHECK(c.values()[i] == d.values()[i]);
    }
#endif
  }
}

TEST_CASE("operator rejects mismatched arguments and unreachable tolerances") {
  SampledFunction wrong = SampledFunction::sample(
      [](double y) { return y; }, Interval{0.0, 0.25}, 16);
  CHECK_THROWS_AS(apply_U(kFolded, wrong, 1000), std::invalid_argument);
  CHECK_THROWS_AS(apply_P(kConjugate, wrong, 1000), std::invalid_argument);

  SampledFunction wiggly = sample_on(kFolded, [](double y) {
    return std::cos(40.0 * y);
  });
  CHECK_THROWS_AS(apply_U(kFolded, wiggly, 10, 1e-13), std::runtime_error);
  CHECK_NOTHROW(apply_U(kFolded, wiggly, 10000));

  SampledFunction ok = sample_on(kConjugate, [](double y) { return y; }, 16);
  CHECK_THROWS_AS(apply_U(kConjugate, ok, 2), std::invalid_argument);
}

TEST_CASE("derivative norms contract under both operators") {
  ContractionReport folded = contraction_estimate(kFolded, 20, 48, 3000);
  CHECK(folded.threshold == 0.288);
  CHECK(folded.n_rated >= 20);
  CHECK(folded.max_ratio > 0.0);
  CHECK(folded.max_ratio < 0.288);
  CHECK(folded.fd_max_rel < 1e-6);
  CHECK(folded.pass);

  ContractionReport conj = contraction_estimate(kConjugate, 20, 48, 3000);
  CHECK(conj.threshold == 0.234);
  CHECK(conj.max_ratio < 0.234);
  CHECK(conj.fd_max_rel < 1e-6);
  CHECK(conj.pass);

  CHECK_THROWS_AS(contraction_estimate(kFolded, 0), std::invalid_argument);
}

TEST_CASE("first conjugate block bound: value at zero, monotone decay") {
  PhiBoundReport r = phi_bound_conjugate();
  CHECK(r.threshold == 0.1346);
  CHECK(r.phi_at_zero == doctest::Approx(0.13453900584020037).epsilon(1e-12));
  CHECK(r.phi_at_zero < r.threshold);
  CHECK(r.decreasing_on_grid);
  CHECK(r.pass);
  const auto& c = golden();
  CHECK(conjugate_phi(0.0) ==
        doctest::Approx(1.0 / (4.0 * (c.G + 1.0)) +
                        c.G / (9.0 * (c.G + 1.0) * (c.G + 2.0)) +
                        c.G / (16.0 * (c.G + 2.0) * (c.G + 3.0)) +
                        c.G / (25.0 * (c.G + 3.0)))
            .epsilon(1e-14));
  CHECK_THROWS_AS(conjugate_phi(1.2), std::domain_error);
}

TEST_CASE("second conjugate block bound: component sups against quoted constants") {
  const auto& c = golden();
  PsiBoundReport r = psi_bound_conjugate();
  CHECK(r.psi2_sup == doctest::Approx(c.g2 * c.g2 / 6.0).epsilon(1e-12));
  CHECK(r.psi5_sup ==
        doctest::Approx(1.5 / ((c.G + 3.0) * (c.G + 3.0))).epsilon(1e-12));
  CHECK(r.psi2_sup < r.psi2_threshold);
  CHECK(r.psi5_sup < r.psi5_threshold);

  // the two middle blocks exceed their quoted constants: the constants match
  // the first branch family alone at the same endpoints
  CHECK(r.psi3_sup == doctest::Approx(0.004346997283572164).epsilon(1e-9));
  CHECK(r.psi4_sup == doctest::Approx(0.0036343852270732573).epsilon(1e-9));
  CHECK(r.psi3_sup >= r.psi3_threshold);
  CHECK(r.psi4_sup >= r.psi4_threshold);
  CHECK(r.psi3_first_family_endpoint ==
        doctest::Approx(0.0018520789202945292).epsilon(1e-12));
  CHECK(r.psi4_first_family_endpoint ==
        doctest::Approx(0.0024603265880001122).epsilon(1e-12));
  CHECK(r.psi3_first_family_endpoint < r.psi3_threshold);
  CHECK(r.psi4_first_family_endpoint < r.psi4_threshold);

  CHECK(r.total_sup == doctest::Approx(0.10039139767499679).epsilon(1e-9));
  CHECK(r.total_sup >= r.stated_total);
  CHECK(r.total_sup >= r.stated_total_proof);
  CHECK(r.combined_with_phi ==
        doctest::Approx(0.23493040351519717).epsilon(1e-9));
  CHECK(r.combined_with_phi >= r.combined_threshold);
  CHECK(r.signs_consistent);
  CHECK_FALSE(r.pass);

  for (double x : {0.0, 0.4, 1.0}) {
    double direct = 1.0 / (6.0 * (c.G + 1.0 + x) * (c.G + 1.0 + x)) +
                    0.25 * (std::fabs(kConjugate.weight_derivative(3, 1, x)) +
                            std::fabs(kConjugate.weight_derivative(3, -1, x))) +
                    0.3 * (std::fabs(kConjugate.weight_derivative(4, 1, x)) +
                           std::fabs(kConjugate.weight_derivative(4, -1, x))) +
                    1.5 / ((c.G + 3.0 + x) * (c.G + 3.0 + x));
    CHECK(conjugate_psi(x) == doctest::Approx(direct).epsilon(1e-14));
  }
}
