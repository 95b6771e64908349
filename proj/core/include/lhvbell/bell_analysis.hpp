#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lhvbell/compensated_sum.hpp"
#include "lhvbell/gaussian_core.hpp"
#include "lhvbell/lhv_model.hpp"

namespace lhvbell {

enum class Sign { plus = 0, minus = 1 };

enum class Rate { a_plus = 0, a_minus = 1, b_plus = 2, b_minus = 3 };

inline constexpr std::array<Rate, 4> kAllRates{Rate::a_plus, Rate::a_minus, Rate::b_plus,
                                               Rate::b_minus};

/// "a_plus", "a_minus", "b_plus", "b_minus".
std::string_view to_string(Rate rate) noexcept;

double rate_value(const CountRatePair& rates, Rate rate) noexcept;

/// Running sums for the correlation ratio of one angle pair.
///
/// Per sample, with p_ij = R^i_A R^j_B:
///   d = p_++ + p_-- - p_+- - p_-+   (numerator term)
///   s = p_++ + p_-- + p_+- + p_-+   (denominator term)
/// The accumulator keeps compensated sums of p_ij, p_ij^2, the four rates,
/// d^2, s^2, d s and |s|, plus a negative-value counter per rate. It locks to
/// the representation of the first pair it sees.
class JointMomentAccumulator {
 public:
  JointMomentAccumulator() = default;
  explicit JointMomentAccumulator(Representation rep) : representation_(rep) {}

  /// Throws RepresentationMismatch when `rates` carries another representation.
  void add(const CountRatePair& rates);

  /// Appends another accumulator's sample multiset. Counts add exactly.
  void merge(const JointMomentAccumulator& other);

  [[nodiscard]] std::uint64_t count() const noexcept { return n_; }
  [[nodiscard]] std::optional<Representation> representation() const noexcept {
    return representation_;
  }

  [[nodiscard]] double product_sum(Sign a, Sign b) const noexcept;
  [[nodiscard]] double product_square_sum(Sign a, Sign b) const noexcept;
  [[nodiscard]] double rate_sum(Rate rate) const noexcept;
  [[nodiscard]] std::uint64_t negative_count(Rate rate) const noexcept;

  [[nodiscard]] double numerator_sum() const noexcept;
  [[nodiscard]] double denominator_sum() const noexcept;
  [[nodiscard]] double numerator_square_sum() const noexcept { return d_sq_.value(); }
  [[nodiscard]] double denominator_square_sum() const noexcept { return s_sq_.value(); }
  [[nodiscard]] double cross_sum() const noexcept { return ds_.value(); }
  [[nodiscard]] double denominator_abs_sum() const noexcept { return s_abs_.value(); }

 private:
  void check(Representation rep);

  std::optional<Representation> representation_;
  std::uint64_t n_ = 0;
  std::array<std::array<CompensatedSum, 2>, 2> products_{};
  std::array<std::array<CompensatedSum, 2>, 2> product_squares_{};
  std::array<CompensatedSum, 4> rates_{};
  std::array<std::uint64_t, 4> negatives_{};
  CompensatedSum d_sq_, s_sq_, ds_, s_abs_;
};

/// Feeds a run of count-rate pairs into `acc`.
void accumulate(JointMomentAccumulator& acc, std::span<const CountRatePair> rates);

/// When the correlation denominator is treated as zero. The mean denominator
/// S/n is rejected when |S| <= epsilon * sum|s| (the relative floor), or when
/// it lies within `min_significance` standard errors of zero. At chi = 0 the
/// exact denominator is 0 and a finite sample only sees noise, which the
/// second test catches.
struct DenominatorPolicy {
  double epsilon = 1e-12;
  double min_significance = 3.0;
};

struct CorrelationEstimate {
  double e = 0.0;
  double std_error = 0.0;
  std::uint64_t n = 0;
};

/// E = (<p_++> + <p_--> - <p_+-> - <p_-+>) / (<p_++> + <p_--> + <p_+-> + <p_-+>).
/// Standard error by the delta method. Needs n >= 2.
CorrelationEstimate correlation_e(const JointMomentAccumulator& acc,
                                  const DenominatorPolicy& policy = {});

/// Same ratio over the merged chunks, with a leave-one-chunk-out jackknife
/// standard error (delta method when there is only one chunk). Chunks are
/// merged in span order.
CorrelationEstimate correlation_e(std::span<const JointMomentAccumulator> chunks,
                                  const DenominatorPolicy& policy = {});

struct EstimationOptions {
  std::size_t chunks = 32;
  std::size_t workers = 0;  ///< 0: default_worker_count()
  DenominatorPolicy policy{};
};

/// One accumulator per chunk for samples 0..n-1 of `stream` at fixed angles.
std::vector<JointMomentAccumulator> accumulate_angle_pair(const CovarianceModel& model,
                                                          const AnalyzerSettings& settings,
                                                          Representation rep, std::uint64_t n,
                                                          const RandomStream& stream,
                                                          const EstimationOptions& options = {});

/// CHSH angle set (radians).
struct BellAngles {
  double a = 0.0;
  double a_prime = 0.0;
  double b = 0.0;
  double b_prime = 0.0;

  /// (0, pi/4, pi/8, 3 pi/8).
  static BellAngles standard() noexcept;

  /// Pair p in order (a,b), (a,b'), (a',b), (a',b').
  [[nodiscard]] AnalyzerSettings pair(std::size_t p) const noexcept;
};

/// E(a,b) - E(a,b') + E(a',b) + E(a',b').
constexpr double chsh(const std::array<double, 4>& e) noexcept {
  return e[0] - e[1] + e[2] + e[3];
}

struct BellEstimate {
  std::array<double, 4> e{};
  std::array<double, 4> e_std_error{};
  double s = 0.0;
  double s_std_error = 0.0;
  std::uint64_t n_per_pair = 0;
  Representation representation = Representation::WignerIntensity;
};

/// Raw chunk accumulators of the four angle pairs; pair p ran on
/// stream.child(p).
struct BellRun {
  BellAngles angles;
  Representation representation = Representation::WignerIntensity;
  std::uint64_t n_per_pair = 0;
  std::array<std::vector<JointMomentAccumulator>, 4> chunks;

  [[nodiscard]] JointMomentAccumulator total(std::size_t pair) const;
};

BellRun run_bell(const CovarianceModel& model, const BellAngles& angles, Representation rep,
                 std::uint64_t n_per_pair, const RandomStream& stream,
                 const EstimationOptions& options = {});

/// Throws DegenerateDenominator if any pair's denominator is degenerate.
BellEstimate estimate_bell(const BellRun& run, const DenominatorPolicy& policy = {});

BellEstimate bell_s(const CovarianceModel& model, const BellAngles& angles, Representation rep,
                    std::uint64_t n_per_pair, const RandomStream& stream,
                    const EstimationOptions& options = {});

/// Fraction of samples with each rate < 0, with binomial standard errors.
struct PositivityReport {
  Representation representation = Representation::WignerIntensity;
  std::uint64_t n = 0;
  std::array<double, 4> fraction{};
  std::array<double, 4> std_error{};
};

PositivityReport positivity_from(const JointMomentAccumulator& acc);

PositivityReport positivity_report(const CovarianceModel& model, const AnalyzerSettings& settings,
                                   Representation rep, std::uint64_t n,
                                   const RandomStream& stream,
                                   const EstimationOptions& options = {});

struct SweepRow {
  double chi = 0.0;
  std::optional<BellEstimate> estimate;  ///< empty when status != "ok"
  std::string status;                    ///< "ok", "degenerate_denominator", "invalid_chi"
  std::string detail;
  std::optional<PositivityReport> positivity;  ///< from the (a, b) pair
};

/// One row per grid point; row r runs on substream stream.substream_index + r,
/// so a single-point grid reproduces bell_s on `stream`. Errors are recorded
/// per row and the sweep continues. Throws InvalidArgument for an empty grid.
std::vector<SweepRow> sweep_chi(std::span<const double> chi_grid, const BellAngles& angles,
                                Representation rep, std::uint64_t n_per_pair,
                                const RandomStream& stream,
                                const EstimationOptions& options = {});

/// CHSH with genuine +-1 observables on the same hidden variables:
/// A = sgn X^+_{A;1}(theta_A), B = sgn X^+_{B;1}(theta_B). Pair p runs on
/// stream.child(p), i.e. the same samples bell_s uses.
struct SignBellEstimate {
  std::array<double, 4> e{};
  std::array<double, 4> e_std_error{};
  double s = 0.0;
  double s_std_error = 0.0;
  std::uint64_t n_per_pair = 0;
};

SignBellEstimate sign_bell_s(const CovarianceModel& model, const BellAngles& angles,
                             std::uint64_t n_per_pair, const RandomStream& stream,
                             const EstimationOptions& options = {});

}  // namespace lhvbell
