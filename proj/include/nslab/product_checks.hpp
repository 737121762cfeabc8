#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nslab/lp.hpp"

namespace nslab {

/// Named bilinear / composition estimate families checked empirically.
/// Exponent tuples default to the d = 3, p = 2 instances used by the
/// acceptance suite; the constraint block of each family is validated
/// before any trial runs.
///   algebra            ||fg||_{B^s_{p,r}} <= C(||f||_inf ||g||_B + ||g||_inf ||f||_B), s > 0
///   product-sum        ||fg||_{B^{s2}_{q,1}} <= C ||f||_{B^{s1}_{p1,1}} ||g||_{B^{s2}_{p2,1}}
///   product-dual       ||fg||_{B^{-s}_{q,inf}} <= C ||f||_{B^{s}_{p1,1}} ||g||_{B^{-s}_{p2,inf}}
///   nonstd-product     ||fg||_{B^{s1+s2-d/p1}_{p2,inf}} <= C ||f||_{B^{s1}_{p1,1}} ||g||_{B^{s2}_{p2,inf}}
///   lowfreq-a          low ||f g^h||_{B^{-s0}_{2,inf}} <= C (||f||_{B^{s}_{p,1}} + ||S_{j0+N0} f||_{p*}) ||g^h||_{B^{-s}_{p,inf}}
///   lowfreq-b          same with the rough factor split high
///   mixed-low-1        low-norm product bound against B^{d/p}_{p,1} x B^{-s1}_{2,1}
///   mixed-low-2        against B^{d/p-d/2-s1}_{p,1} x B^{d/p}_{2,1}
///   mixed-low-3        against B^{d/p-1}_{p,1} x B^{d/p-d/2-s1+1}_{2,1}
///   high-product       low ||F G^h||_{B^{-s1}_{2,inf}} <= C ||F||_{B^{d/p-1}_{p,1}} ||G^h||_{B^{1-d/p}_{p,1}}
///   composition        ||F(f)||_{B^s_{p,r}} <= C ||f||_{B^s_{p,r}}, F smooth, F(0) = 0
struct ProductCheckConfig {
  std::string id = "algebra";
  int trials = 200;
  double s1 = 1.0;  ///< low-regularity parameter of the mixed-low family
  double p = 2.0;
  double sigma = 1.0, sigma1 = 1.2, sigma2 = 0.8;
  double p1 = 2.0, p2 = 2.0;
  int n0_max = 4;  ///< scan S_{j0+N0} offsets 0..n0_max for the lowfreq family
  int n = 16;
  double length;
  int j_min = -2, j_max = 3, j0 = 0;
  std::uint64_t seed = 12345;

  ProductCheckConfig();
};

struct RatioStats {
  std::string id;
  int trials = 0;
  double max = 0.0;
  double median = 0.0;
  bool all_finite = true;
  int smallest_n0 = -1;  ///< lowfreq family only: smallest offset with max <= 10 median
  std::vector<double> ratios;
};

std::vector<std::string> product_check_ids();

RatioStats run_product_check(const ProductCheckConfig& cfg);

}  // namespace nslab
