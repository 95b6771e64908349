#pragma once

#include <string_view>

#include "lhvbell/bell_analysis.hpp"
#include "lhvbell/lhv_model.hpp"

namespace lhvbell {

// Closed-form expectations of the model, from the second moments of the
// hidden variables and Isserlis' theorem for complex Gaussians:
//
//   F_A, F_B analyzer amplitudes, mu = <|F|^2> = (1 + 2 chi^2) / 2,
//   <F_A F_B>  = chi sqrt(1 + chi^2) cos(theta_A - theta_B)   (equal signs),
//   <F_A F_B*> = 0,
//   <|F_A|^2 |F_B|^2> = mu^2 + |<F_A F_B>|^2.
//
// The intensity rates |F|^2 - 1/2 then have mean chi^2 and joint moment
// chi^4 + chi^2 (1 + chi^2) cos^2(delta). The quadrature-derived rates are
// 4|F|^2 - 4|E_vac|^2 with <|E_vac|^2> = 1/2, which multiplies every joint
// moment by exactly 16.

enum class OracleKind {
  second_moment,
  fourth_moment,
  correlation_e,
  bell_s,
  mean_rate,
  negative_fraction,
};

std::string_view to_string(OracleKind kind) noexcept;

struct OracleResult {
  double value = 0.0;
  OracleKind kind = OracleKind::second_moment;
};

/// <r_a_plus>: chi^2 (intensity) or 4 chi^2 (quadrature-derived), for any angle.
double oracle_mean_rate(double chi, Representation rep);

/// <R^i_A R^j_B> at delta = theta_A - theta_B.
double oracle_joint_moment(double chi, double delta, Sign i, Sign j, Representation rep);

/// (1 + chi^2) cos(2 delta) / (1 + 3 chi^2). Same for both representations.
/// Throws DegenerateDenominator at chi = 0, where every joint moment vanishes.
double oracle_correlation_e(double chi, double delta);

/// CHSH combination of oracle_correlation_e over the four angle pairs.
double oracle_bell_s(double chi, const BellAngles& angles);

/// P(r_a_plus < 0). Intensity: |F|^2 is exponential with mean mu, so
/// 1 - exp(-1 / (1 + 2 chi^2)). Quadrature-derived: P(|F|^2 < |E_5|^2) for
/// independent exponentials with means mu and 1/2, i.e. 1 / (2 (1 + chi^2)).
double oracle_negative_fraction(double chi, Representation rep);

/// <4 |E_5|^2> = 2, the mean blocked-input record.
double oracle_dark_noise_mean() noexcept;

/// Correlation <sgn X^+_{A;1} sgn X^+_{B;1}> = (2/pi) asin(rho) with
/// rho = 2 chi sqrt(1 + chi^2) cos(delta) / (1 + 2 chi^2).
double oracle_sign_correlation(double chi, double delta);

/// CHSH of oracle_sign_correlation.
double oracle_sign_bell_s(double chi, const BellAngles& angles);

/// chi at which oracle_bell_s at the standard angles equals 2:
/// chi^2 = (sqrt 2 - 1) / (3 - sqrt 2).
double oracle_classical_crossing_chi() noexcept;

}  // namespace lhvbell
