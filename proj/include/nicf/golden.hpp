#pragma once

namespace nicf {

// Golden-ratio constants used throughout: G = (sqrt(5)+1)/2 and g = G - 1
// satisfy g = 1/G, G + 1 = G^2, g^2 = 2 - G = 1/G^2; wirsing is the classical
// Gauss-map decay rate kept as a reference line in rate tables.
struct GoldenConstants {
  double G;
  double g;
  double g2;
  double G2;
  double G3;
  double log_G;
  double inv_log_G;
  double wirsing;
};

const GoldenConstants& golden();

}  // namespace nicf
