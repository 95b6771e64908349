#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lhvbell/random_stream.hpp"

namespace lhvbell {

using Complex = std::complex<double>;

/// |z|^2 as re^2 + im^2 (std::norm goes through hypot in libstdc++).
constexpr double intensity(Complex z) noexcept { return z.real() * z.real() + z.imag() * z.imag(); }

/// Squeezing strength chi of the two-mode squeezed Wigner function. Finite and
/// nonnegative. No upper bound is enforced; quadrature variances grow like
/// chi^2, so very large values mostly buy cancellation error.
class SqueezeParameter {
 public:
  /// Throws InvalidArgument for negative, NaN or infinite chi.
  explicit SqueezeParameter(double chi);

  [[nodiscard]] double value() const noexcept { return chi_; }

  friend bool operator==(const SqueezeParameter&, const SqueezeParameter&) = default;

 private:
  double chi_;
};

/// One draw of the six complex hidden variables. e[0] is E_1, ..., e[5] is
/// E_6. (E_1, E_2) and (E_3, E_4) are the squeezed pairs, E_5 and E_6 the
/// vacuum (dark-noise) modes of apparatus A and B.
struct HiddenVariableSample {
  std::array<Complex, 6> e{};

  [[nodiscard]] bool finite() const noexcept;

  friend bool operator==(const HiddenVariableSample&, const HiddenVariableSample&) = default;
};

/// Real-component moments of the hidden-variable distribution.
///
/// Completing the square in the squeezed exponent gives, for each pair
/// (E, E') = (E_1, E_2) or (E_3, E_4), two independent bivariate normal
/// blocks: (Re E, Re E') with covariance [[var_sq, cov_x], [cov_x, var_sq]] and
/// (Im E, Im E') with [[var_sq, cov_y], [cov_y, var_sq]]. Every other pair of
/// real components is uncorrelated.
struct CovarianceModel {
  SqueezeParameter chi{0.0};
  double var_sq = 0.25;   ///< (1 + 2 chi^2) / 4
  double cov_x = 0.0;     ///< +chi sqrt(1 + chi^2) / 2
  double cov_y = 0.0;     ///< -chi sqrt(1 + chi^2) / 2
  double var_vac = 0.25;  ///< 1 / 4

  friend bool operator==(const CovarianceModel&, const CovarianceModel&) = default;
};

CovarianceModel build_covariance(SqueezeParameter chi) noexcept;
CovarianceModel build_covariance(double chi);

/// W_sq(E, E') = 4 exp[-(2 + 4 chi^2)(|E|^2 + |E'|^2) + 8 chi sqrt(1 + chi^2) Re(E E')] / pi^2
double squeezed_wigner(SqueezeParameter chi, Complex e, Complex e_prime) noexcept;

/// W_vac(E) = 2 exp(-2 |E|^2) / pi
double vacuum_wigner(Complex e) noexcept;

/// Joint density W_sq(E_1,E_2) W_sq(E_3,E_4) W_vac(E_5) W_vac(E_6) with
/// respect to the twelve real coordinates.
double density(const CovarianceModel& model, const HiddenVariableSample& sample);

/// Natural logarithm of density(); stays finite where density() underflows.
double log_density(const CovarianceModel& model, const HiddenVariableSample& sample);

/// Number of Philox blocks consumed per sample. Sample i of a stream reads
/// blocks [kBlocksPerSample * i, kBlocksPerSample * (i + 1)).
inline constexpr std::uint64_t kBlocksPerSample = 6;

/// Block-Cholesky sampler with the factors of one model precomputed.
class GaussianSampler {
 public:
  explicit GaussianSampler(const CovarianceModel& model) noexcept;

  /// Sample number `index` of `stream`.
  [[nodiscard]] HiddenVariableSample operator()(const RandomStream& stream,
                                                std::uint64_t index) const noexcept;

 private:
  struct BlockFactor {
    double l11, l21, l22;
  };
  BlockFactor re_;
  BlockFactor im_;
  double vac_;
};

/// Draw sample number `index` of `stream`.
HiddenVariableSample sample_at(const CovarianceModel& model, const RandomStream& stream,
                               std::uint64_t index) noexcept;

/// Fill `out` with samples first_index, first_index + 1, ... of `stream`.
void sample_into(const CovarianceModel& model, const RandomStream& stream,
                 std::uint64_t first_index, std::span<HiddenVariableSample> out) noexcept;

/// n independent draws (samples 0..n-1 of `stream`). Throws InvalidArgument
/// for n == 0 and CapacityError when the buffer cannot be allocated.
std::vector<HiddenVariableSample> sample_batch(const CovarianceModel& model,
                                               const RandomStream& stream, std::size_t n);

/// Index of a real component: component_index(k, false) is Re E_{k+1},
/// component_index(k, true) is Im E_{k+1}.
constexpr std::size_t component_index(std::size_t mode, bool imaginary) noexcept {
  return 2 * mode + (imaginary ? 1 : 0);
}

inline constexpr std::size_t kRealComponents = 12;

/// Full 12x12 covariance table of the real components (all means are zero),
/// ordered Re E_1, Im E_1, Re E_2, ..., Im E_6.
class SecondMomentTable {
 public:
  using Matrix = std::array<std::array<double, kRealComponents>, kRealComponents>;

  explicit SecondMomentTable(const Matrix& covariance) noexcept : cov_(covariance) {}

  [[nodiscard]] double covariance(std::size_t i, std::size_t j) const { return cov_.at(i).at(j); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return cov_; }

  /// <E_j E_k> for modes j, k in 0..5.
  [[nodiscard]] Complex product_moment(std::size_t j, std::size_t k) const;
  /// <E_j conj(E_k)>.
  [[nodiscard]] Complex conjugate_moment(std::size_t j, std::size_t k) const;
  /// <|E_j|^2>.
  [[nodiscard]] double intensity(std::size_t j) const { return conjugate_moment(j, j).real(); }

 private:
  Matrix cov_;
};

SecondMomentTable exact_second_moments(const CovarianceModel& model) noexcept;

}  // namespace lhvbell
