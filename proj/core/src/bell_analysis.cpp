#include "lhvbell/bell_analysis.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "lhvbell/errors.hpp"
#include "lhvbell/monte_carlo.hpp"
#include "lhvbell/parallel.hpp"

namespace lhvbell {
namespace {

constexpr std::size_t idx(Sign s) noexcept { return static_cast<std::size_t>(s); }
constexpr std::size_t idx(Rate r) noexcept { return static_cast<std::size_t>(r); }

void check_denominator(double sum, double sum_sq, double abs_sum, std::uint64_t n,
                       const DenominatorPolicy& policy) {
  if (!(abs_sum > 0.0) || std::abs(sum) <= policy.epsilon * abs_sum) {
    throw DegenerateDenominator("correlation denominator vanishes");
  }
  if (n > 1 && policy.min_significance > 0.0) {
    const double count = static_cast<double>(n);
    const double mean = sum / count;
    const double variance = std::max(0.0, (sum_sq - count * mean * mean) / (count - 1.0));
    const double se = std::sqrt(variance / count);
    if (std::abs(mean) < policy.min_significance * se) {
      throw DegenerateDenominator("correlation denominator " + std::to_string(mean) +
                                  " is within " + std::to_string(policy.min_significance) +
                                  " standard errors (" + std::to_string(se) + ") of zero");
    }
  }
}

double delta_method_error(const JointMomentAccumulator& acc, double e) {
  const double count = static_cast<double>(acc.count());
  const double mean_s = acc.denominator_sum() / count;
  const double residual_sq = acc.numerator_square_sum() - 2.0 * e * acc.cross_sum() +
                             e * e * acc.denominator_square_sum();
  const double variance = std::max(0.0, residual_sq / (count - 1.0));
  return std::sqrt(variance / count) / std::abs(mean_s);
}

}  // namespace

std::string_view to_string(Rate rate) noexcept {
  switch (rate) {
    case Rate::a_plus: return "a_plus";
    case Rate::a_minus: return "a_minus";
    case Rate::b_plus: return "b_plus";
    case Rate::b_minus: return "b_minus";
  }
  return "unknown";
}

double rate_value(const CountRatePair& rates, Rate rate) noexcept {
  switch (rate) {
    case Rate::a_plus: return rates.a_plus;
    case Rate::a_minus: return rates.a_minus;
    case Rate::b_plus: return rates.b_plus;
    case Rate::b_minus: return rates.b_minus;
  }
  return 0.0;
}

void JointMomentAccumulator::check(Representation rep) {
  if (!representation_) {
    representation_ = rep;
  } else if (*representation_ != rep) {
    throw RepresentationMismatch(std::string("accumulator holds ") +
                                 std::string(to_string(*representation_)) + " rates, got " +
                                 std::string(to_string(rep)));
  }
}

void JointMomentAccumulator::add(const CountRatePair& r) {
  check(r.representation);
  const std::array<double, 2> a{r.a_plus, r.a_minus};
  const std::array<double, 2> b{r.b_plus, r.b_minus};
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const double p = a[i] * b[j];
      products_[i][j].add(p);
      product_squares_[i][j].add(p * p);
    }
  }
  const double pp = a[0] * b[0], mm = a[1] * b[1], pm = a[0] * b[1], mp = a[1] * b[0];
  const double d = (pp + mm) - (pm + mp);
  const double s = (pp + mm) + (pm + mp);
  d_sq_.add(d * d);
  s_sq_.add(s * s);
  ds_.add(d * s);
  s_abs_.add(std::abs(s));
  for (Rate rate : kAllRates) {
    const double v = rate_value(r, rate);
    rates_[idx(rate)].add(v);
    if (v < 0.0) ++negatives_[idx(rate)];
  }
  ++n_;
}

void JointMomentAccumulator::merge(const JointMomentAccumulator& other) {
  if (other.n_ == 0 && !other.representation_) return;
  if (other.representation_) check(*other.representation_);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      products_[i][j].merge(other.products_[i][j]);
      product_squares_[i][j].merge(other.product_squares_[i][j]);
    }
  }
  for (std::size_t k = 0; k < 4; ++k) {
    rates_[k].merge(other.rates_[k]);
    negatives_[k] += other.negatives_[k];
  }
  d_sq_.merge(other.d_sq_);
  s_sq_.merge(other.s_sq_);
  ds_.merge(other.ds_);
  s_abs_.merge(other.s_abs_);
  n_ += other.n_;
}

double JointMomentAccumulator::product_sum(Sign a, Sign b) const noexcept {
  return products_[idx(a)][idx(b)].value();
}

double JointMomentAccumulator::product_square_sum(Sign a, Sign b) const noexcept {
  return product_squares_[idx(a)][idx(b)].value();
}

double JointMomentAccumulator::rate_sum(Rate rate) const noexcept {
  return rates_[idx(rate)].value();
}

std::uint64_t JointMomentAccumulator::negative_count(Rate rate) const noexcept {
  return negatives_[idx(rate)];
}

double JointMomentAccumulator::numerator_sum() const noexcept {
  return (product_sum(Sign::plus, Sign::plus) + product_sum(Sign::minus, Sign::minus)) -
         (product_sum(Sign::plus, Sign::minus) + product_sum(Sign::minus, Sign::plus));
}

double JointMomentAccumulator::denominator_sum() const noexcept {
  return (product_sum(Sign::plus, Sign::plus) + product_sum(Sign::minus, Sign::minus)) +
         (product_sum(Sign::plus, Sign::minus) + product_sum(Sign::minus, Sign::plus));
}

void accumulate(JointMomentAccumulator& acc, std::span<const CountRatePair> rates) {
  for (const CountRatePair& r : rates) acc.add(r);
}

CorrelationEstimate correlation_e(const JointMomentAccumulator& acc,
                                  const DenominatorPolicy& policy) {
  if (acc.count() < 2) throw InvalidArgument("correlation_e needs at least two samples");
  check_denominator(acc.denominator_sum(), acc.denominator_square_sum(),
                    acc.denominator_abs_sum(), acc.count(), policy);
  const double e = acc.numerator_sum() / acc.denominator_sum();
  return {e, delta_method_error(acc, e), acc.count()};
}

CorrelationEstimate correlation_e(std::span<const JointMomentAccumulator> chunks,
                                  const DenominatorPolicy& policy) {
  if (chunks.empty()) throw InvalidArgument("correlation_e needs at least one chunk");
  JointMomentAccumulator total;
  for (const auto& c : chunks) total.merge(c);
  CorrelationEstimate est = correlation_e(total, policy);
  if (chunks.size() < 2) return est;

  const double numerator = total.numerator_sum();
  const double denominator = total.denominator_sum();
  const double k = static_cast<double>(chunks.size());
  std::vector<double> leave_out;
  leave_out.reserve(chunks.size());
  double mean = 0.0;
  for (const auto& c : chunks) {
    const double d = denominator - c.denominator_sum();
    if (d == 0.0) throw DegenerateDenominator("leave-one-chunk-out denominator vanishes");
    leave_out.push_back((numerator - c.numerator_sum()) / d);
    mean += leave_out.back();
  }
  mean /= k;
  double ss = 0.0;
  for (double v : leave_out) ss += (v - mean) * (v - mean);
  est.std_error = std::sqrt((k - 1.0) / k * ss);
  return est;
}

std::vector<JointMomentAccumulator> accumulate_angle_pair(const CovarianceModel& model,
                                                          const AnalyzerSettings& settings,
                                                          Representation rep, std::uint64_t n,
                                                          const RandomStream& stream,
                                                          const EstimationOptions& options) {
  require_chunking(n, options.chunks);
  std::vector<JointMomentAccumulator> chunks(options.chunks, JointMomentAccumulator(rep));
  const GaussianSampler sampler(model);
  parallel_for(options.chunks, options.workers, [&](std::size_t k) {
    const ChunkRange range = chunk_range(n, options.chunks, k);
    JointMomentAccumulator& acc = chunks[k];
    for (std::uint64_t i = range.first; i < range.first + range.count; ++i) {
      acc.add(count_rates(sampler(stream, i), settings, rep));
    }
  });
  return chunks;
}

BellAngles BellAngles::standard() noexcept {
  using std::numbers::pi;
  return {0.0, pi / 4.0, pi / 8.0, 3.0 * pi / 8.0};
}

AnalyzerSettings BellAngles::pair(std::size_t p) const noexcept {
  switch (p) {
    case 0: return {a, b};
    case 1: return {a, b_prime};
    case 2: return {a_prime, b};
    default: return {a_prime, b_prime};
  }
}

JointMomentAccumulator BellRun::total(std::size_t pair) const {
  JointMomentAccumulator t(representation);
  for (const auto& c : chunks.at(pair)) t.merge(c);
  return t;
}

BellRun run_bell(const CovarianceModel& model, const BellAngles& angles, Representation rep,
                 std::uint64_t n_per_pair, const RandomStream& stream,
                 const EstimationOptions& options) {
  BellRun run{angles, rep, n_per_pair, {}};
  for (std::size_t p = 0; p < 4; ++p) {
    run.chunks[p] =
        accumulate_angle_pair(model, angles.pair(p), rep, n_per_pair, stream.child(p), options);
  }
  return run;
}

BellEstimate estimate_bell(const BellRun& run, const DenominatorPolicy& policy) {
  BellEstimate out;
  out.n_per_pair = run.n_per_pair;
  out.representation = run.representation;
  double var = 0.0;
  for (std::size_t p = 0; p < 4; ++p) {
    const CorrelationEstimate est = correlation_e(run.chunks[p], policy);
    out.e[p] = est.e;
    out.e_std_error[p] = est.std_error;
    var += est.std_error * est.std_error;
  }
  out.s = chsh(out.e);
  out.s_std_error = std::sqrt(var);
  return out;
}

BellEstimate bell_s(const CovarianceModel& model, const BellAngles& angles, Representation rep,
                    std::uint64_t n_per_pair, const RandomStream& stream,
                    const EstimationOptions& options) {
  return estimate_bell(run_bell(model, angles, rep, n_per_pair, stream, options),
                       options.policy);
}

PositivityReport positivity_from(const JointMomentAccumulator& acc) {
  PositivityReport report;
  report.representation = acc.representation().value_or(Representation::WignerIntensity);
  report.n = acc.count();
  if (acc.count() == 0) return report;
  const double count = static_cast<double>(acc.count());
  for (Rate rate : kAllRates) {
    const double p = static_cast<double>(acc.negative_count(rate)) / count;
    report.fraction[idx(rate)] = p;
    report.std_error[idx(rate)] = std::sqrt(p * (1.0 - p) / count);
  }
  return report;
}

PositivityReport positivity_report(const CovarianceModel& model, const AnalyzerSettings& settings,
                                   Representation rep, std::uint64_t n,
                                   const RandomStream& stream,
                                   const EstimationOptions& options) {
  if (n == 0) throw InvalidArgument("positivity_report needs n >= 1");
  EstimationOptions opts = options;
  if (opts.chunks > n) opts.chunks = static_cast<std::size_t>(n);
  JointMomentAccumulator total(rep);
  for (const auto& c : accumulate_angle_pair(model, settings, rep, n, stream, opts)) {
    total.merge(c);
  }
  return positivity_from(total);
}

std::vector<SweepRow> sweep_chi(std::span<const double> chi_grid, const BellAngles& angles,
                                Representation rep, std::uint64_t n_per_pair,
                                const RandomStream& stream, const EstimationOptions& options) {
  if (chi_grid.empty()) throw InvalidArgument("sweep_chi needs a nonempty grid");
  std::vector<SweepRow> rows;
  rows.reserve(chi_grid.size());
  for (std::size_t r = 0; r < chi_grid.size(); ++r) {
    SweepRow row;
    row.chi = chi_grid[r];
    const RandomStream row_stream{stream.master_seed, stream.substream_index + r};
    try {
      const CovarianceModel model = build_covariance(row.chi);
      const BellRun run = run_bell(model, angles, rep, n_per_pair, row_stream, options);
      row.positivity = positivity_from(run.total(0));
      row.estimate = estimate_bell(run, options.policy);
      row.status = "ok";
    } catch (const DegenerateDenominator& e) {
      row.status = "degenerate_denominator";
      row.detail = e.what();
    } catch (const InvalidArgument& e) {
      row.status = "invalid_chi";
      row.detail = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

SignBellEstimate sign_bell_s(const CovarianceModel& model, const BellAngles& angles,
                             std::uint64_t n_per_pair, const RandomStream& stream,
                             const EstimationOptions& options) {
  SignBellEstimate out;
  out.n_per_pair = n_per_pair;
  double var = 0.0;
  for (std::size_t p = 0; p < 4; ++p) {
    const AnalyzerSettings settings = angles.pair(p);
    const MeanEstimate m = estimate_mean(
        model, stream.child(p), n_per_pair, options.chunks, options.workers,
        [&settings](const HiddenVariableSample& s) {
          const QuadratureRealities q = quadrature_realities(s, settings);
          const double a = q.a_plus[0] >= 0.0 ? 1.0 : -1.0;
          const double b = q.b_plus[0] >= 0.0 ? 1.0 : -1.0;
          return a * b;
        });
    out.e[p] = m.mean;
    out.e_std_error[p] = m.std_error;
    var += m.std_error * m.std_error;
  }
  out.s = chsh(out.e);
  out.s_std_error = std::sqrt(var);
  return out;
}

}  // namespace lhvbell
