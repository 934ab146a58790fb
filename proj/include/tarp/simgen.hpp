#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tarp/data.hpp"
#include "tarp/rng.hpp"

namespace tarp {

enum class Scheme { I, II, III, IV };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SchemeSpec {
  Scheme scheme = Scheme::I;
  Eigen::Index n = 200;
  Eigen::Index p = 2000;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument when the scheme cannot be built at this (n, p).
  void validate() const;
};

struct Truth {
  Scheme scheme = Scheme::I;
  Eigen::VectorXd beta;
  /// Nonzero coefficients; empty for Scheme III whose beta is dense.
  std::vector<Eigen::Index> active;
};

struct Simulated {
  Dataset data;
  Truth truth;
};

/// Draws n rows of the scheme's covariates and y = X beta + noise_sd * N(0, 1).
///
///   I:   AR(1) columns, corr 0.9^|i-j|; 30 random coefficients equal to 1.
///   II:  (p/100 - 2) equicorrelated blocks of 100 (first half rho = 0.3,
///        rest rho = 0.9) plus 200 independent columns; 20 unit coefficients
///        in the rho = 0.9 blocks and one in the independent group.
///   III: x = P diag(15, 10, 7) w with P an orthonormal p x 3 basis; beta = P[:, 0].
///   IV:  independent Brownian-bridge paths on p interior points of (0, 5),
///        shifted and scaled toward (0, 10); 20 coefficients uniform on (2, 2.5).
Simulated generate(const SchemeSpec& spec);

/// Brownian bridge on [0, T] evaluated at ascending `times` in [0, T].
/// Values at t = 0 and t = T are exactly zero.
Eigen::VectorXd brownian_bridge(const Eigen::VectorXd& times, double T, Rng& rng);

/// Affine map used by Scheme IV: x = 5 + c * B with c chosen so that four
/// standard deviations of the widest bridge marginal reach 0 and 10.
double bridge_scale(double T);

/// Balanced two-class data: n rows, p standard-normal predictors, the first
/// `informative` shifted by +-shift according to the class.
Simulated generate_two_class(Eigen::Index n, Eigen::Index p, Eigen::Index informative,
                             double shift, std::uint64_t seed);

}  // namespace tarp
