#include "lhvbell/analytic_oracle.hpp"

#include <cmath>
#include <numbers>

#include "lhvbell/errors.hpp"

namespace lhvbell {
namespace {

double validated(double chi) { return SqueezeParameter(chi).value(); }

double representation_scale(Representation rep) noexcept {
  return rep == Representation::QuadratureDerived ? 16.0 : 1.0;
}

template <class F>
double chsh_of(const BellAngles& angles, F&& correlation) {
  std::array<double, 4> e{};
  for (std::size_t p = 0; p < 4; ++p) {
    const AnalyzerSettings s = angles.pair(p);
    e[p] = correlation(s.theta_a - s.theta_b);
  }
  return chsh(e);
}

}  // namespace

std::string_view to_string(OracleKind kind) noexcept {
  switch (kind) {
    case OracleKind::second_moment: return "second_moment";
    case OracleKind::fourth_moment: return "fourth_moment";
    case OracleKind::correlation_e: return "correlation_E";
    case OracleKind::bell_s: return "bell_S";
    case OracleKind::mean_rate: return "mean_rate";
    case OracleKind::negative_fraction: return "negative_fraction";
  }
  return "unknown";
}

double oracle_mean_rate(double chi, Representation rep) {
  const double c = validated(chi);
  return rep == Representation::QuadratureDerived ? 4.0 * c * c : c * c;
}

double oracle_joint_moment(double chi, double delta, Sign i, Sign j, Representation rep) {
  const double c = validated(chi);
  const double c2 = c * c;
  // |<F_A F_B>|^2 is c2 (1 + c2) cos^2 for equal signs and sin^2 for opposite.
  const double trig = (i == j) ? std::cos(delta) : std::sin(delta);
  return representation_scale(rep) * (c2 * c2 + c2 * (1.0 + c2) * trig * trig);
}

double oracle_correlation_e(double chi, double delta) {
  const double c = validated(chi);
  if (c == 0.0) throw DegenerateDenominator("correlation is 0/0 at chi = 0");
  const double c2 = c * c;
  return (1.0 + c2) * std::cos(2.0 * delta) / (1.0 + 3.0 * c2);
}

double oracle_bell_s(double chi, const BellAngles& angles) {
  return chsh_of(angles, [chi](double delta) { return oracle_correlation_e(chi, delta); });
}

double oracle_negative_fraction(double chi, Representation rep) {
  const double c = validated(chi);
  if (rep == Representation::QuadratureDerived) return 1.0 / (2.0 * (1.0 + c * c));
  return -std::expm1(-1.0 / (1.0 + 2.0 * c * c));
}

double oracle_dark_noise_mean() noexcept { return 2.0; }

double oracle_sign_correlation(double chi, double delta) {
  const double c = validated(chi);
  const double rho = 2.0 * c * std::sqrt(1.0 + c * c) * std::cos(delta) / (1.0 + 2.0 * c * c);
  return 2.0 / std::numbers::pi * std::asin(rho);
}

double oracle_sign_bell_s(double chi, const BellAngles& angles) {
  return chsh_of(angles, [chi](double delta) { return oracle_sign_correlation(chi, delta); });
}

double oracle_classical_crossing_chi() noexcept {
  const double root2 = std::numbers::sqrt2;
  return std::sqrt((root2 - 1.0) / (3.0 - root2));
}

}  // namespace lhvbell
