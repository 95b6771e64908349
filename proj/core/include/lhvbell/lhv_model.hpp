#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "lhvbell/gaussian_core.hpp"

namespace lhvbell {

/// Which relation turns hidden variables into count-rate realities.
enum class Representation {
  /// Quadrature-derived rates: signal quadratures squared minus the
  /// dark-noise quadratures squared.
  QuadratureDerived,
  /// Wigner symbol of the intensity: |F|^2 - 1/2.
  WignerIntensity,
};

/// "eq3" / "eq4".
std::string_view to_string(Representation rep) noexcept;
std::optional<Representation> parse_representation(std::string_view text) noexcept;

/// Analyzer angles in radians. Angles are used as given; nothing is reduced.
struct AnalyzerSettings {
  double theta_a = 0.0;
  double theta_b = 0.0;
};

/// Local-oscillator phase: l = 1 is phi = 0, l = 2 is phi = pi/2.
enum class PhaseIndex { first = 0, second = 1 };

/// e^{i phi_l}, exact (1 or i).
constexpr Complex phase_factor(PhaseIndex l) noexcept {
  return l == PhaseIndex::first ? Complex{1.0, 0.0} : Complex{0.0, 1.0};
}

/// X = e^{i phi} F + c.c. = 2 Re(e^{i phi} F).
inline double quadrature(Complex amplitude, PhaseIndex l) noexcept {
  return 2.0 * (phase_factor(l) * amplitude).real();
}

/// The twelve quadrature realities of one sample. Index 0 is l = 1, index 1
/// is l = 2.
struct QuadratureRealities {
  std::array<double, 2> a_plus{};
  std::array<double, 2> a_minus{};
  std::array<double, 2> b_plus{};
  std::array<double, 2> b_minus{};
  std::array<double, 2> va{};
  std::array<double, 2> vb{};
};

/// Count-rate realities. Values may be negative.
struct CountRatePair {
  double a_plus = 0.0;
  double a_minus = 0.0;
  double b_plus = 0.0;
  double b_minus = 0.0;
  Representation representation = Representation::WignerIntensity;

  friend bool operator==(const CountRatePair&, const CountRatePair&) = default;
};

/// Signal mode amplitudes seen by the two output ports of each analyzer.
/// plus: E cos(theta) + E' sin(theta); minus: E' cos(theta) - E sin(theta),
/// with (E, E') = (E_1, E_3) on side A and (E_2, E_4) on side B.
struct AnalyzerAmplitudes {
  Complex a_plus;
  Complex a_minus;
  Complex b_plus;
  Complex b_minus;
};

AnalyzerAmplitudes analyzer_amplitudes(const HiddenVariableSample& sample,
                                       const AnalyzerSettings& settings) noexcept;

QuadratureRealities quadrature_realities(const HiddenVariableSample& sample,
                                         const AnalyzerSettings& settings) noexcept;

/// Sum of squared signal quadratures minus the same vacuum subtraction on both
/// ports of an analyzer.
CountRatePair count_rates_eq3(const QuadratureRealities& q) noexcept;

/// |F|^2 - 1/2 for every port.
CountRatePair count_rates_eq4(const HiddenVariableSample& sample,
                              const AnalyzerSettings& settings) noexcept;

/// Dispatch on representation. For QuadratureDerived this goes through
/// quadrature_realities().
CountRatePair count_rates(const HiddenVariableSample& sample, const AnalyzerSettings& settings,
                          Representation rep) noexcept;

/// Blocked-input record: (X_{va;1})^2 + (X_{va;2})^2 on both A ports and the
/// vb analogue on both B ports, i.e. 4|E_5|^2 and 4|E_6|^2. Tagged
/// QuadratureDerived since it is the term that relation subtracts.
CountRatePair dark_noise_rates(const HiddenVariableSample& sample) noexcept;

}  // namespace lhvbell
