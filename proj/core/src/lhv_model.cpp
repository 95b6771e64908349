#include "lhvbell/lhv_model.hpp"

#include <cmath>

namespace lhvbell {
namespace {

std::array<double, 2> quadratures(Complex amplitude) noexcept {
  return {quadrature(amplitude, PhaseIndex::first), quadrature(amplitude, PhaseIndex::second)};
}

double power(const std::array<double, 2>& x) noexcept { return x[0] * x[0] + x[1] * x[1]; }

}  // namespace

std::string_view to_string(Representation rep) noexcept {
  return rep == Representation::QuadratureDerived ? "eq3" : "eq4";
}

std::optional<Representation> parse_representation(std::string_view text) noexcept {
  if (text == "eq3") return Representation::QuadratureDerived;
  if (text == "eq4") return Representation::WignerIntensity;
  return std::nullopt;
}

AnalyzerAmplitudes analyzer_amplitudes(const HiddenVariableSample& sample,
                                       const AnalyzerSettings& settings) noexcept {
  const auto& e = sample.e;
  const double ca = std::cos(settings.theta_a), sa = std::sin(settings.theta_a);
  const double cb = std::cos(settings.theta_b), sb = std::sin(settings.theta_b);
  return {e[0] * ca + e[2] * sa, e[2] * ca - e[0] * sa,
          e[1] * cb + e[3] * sb, e[3] * cb - e[1] * sb};
}

QuadratureRealities quadrature_realities(const HiddenVariableSample& sample,
                                         const AnalyzerSettings& settings) noexcept {
  const AnalyzerAmplitudes f = analyzer_amplitudes(sample, settings);
  return {quadratures(f.a_plus), quadratures(f.a_minus), quadratures(f.b_plus),
          quadratures(f.b_minus), quadratures(sample.e[4]), quadratures(sample.e[5])};
}

CountRatePair count_rates_eq3(const QuadratureRealities& q) noexcept {
  const double dark_a = power(q.va);
  const double dark_b = power(q.vb);
  return {power(q.a_plus) - dark_a, power(q.a_minus) - dark_a, power(q.b_plus) - dark_b,
          power(q.b_minus) - dark_b, Representation::QuadratureDerived};
}

CountRatePair count_rates_eq4(const HiddenVariableSample& sample,
                              const AnalyzerSettings& settings) noexcept {
  const AnalyzerAmplitudes f = analyzer_amplitudes(sample, settings);
  return {intensity(f.a_plus) - 0.5, intensity(f.a_minus) - 0.5, intensity(f.b_plus) - 0.5,
          intensity(f.b_minus) - 0.5, Representation::WignerIntensity};
}

CountRatePair count_rates(const HiddenVariableSample& sample, const AnalyzerSettings& settings,
                          Representation rep) noexcept {
  if (rep == Representation::QuadratureDerived) {
    return count_rates_eq3(quadrature_realities(sample, settings));
  }
  return count_rates_eq4(sample, settings);
}

CountRatePair dark_noise_rates(const HiddenVariableSample& sample) noexcept {
  const double a = power(quadratures(sample.e[4]));
  const double b = power(quadratures(sample.e[5]));
  return {a, a, b, b, Representation::QuadratureDerived};
}

}  // namespace lhvbell
