#include "lhvbell/gaussian_core.hpp"

#include <cmath>
#include <new>
#include <numbers>
#include <string>

#include "lhvbell/errors.hpp"

namespace lhvbell {
namespace {

using std::numbers::pi;

double log_squeezed(double chi, Complex e, Complex e_prime) noexcept {
  const double exponent = -(2.0 + 4.0 * chi * chi) * (intensity(e) + intensity(e_prime)) +
                          8.0 * chi * std::sqrt(1.0 + chi * chi) * (e * e_prime).real();
  return std::log(4.0 / (pi * pi)) + exponent;
}

double log_vacuum(Complex e) noexcept { return std::log(2.0 / pi) - 2.0 * intensity(e); }

void require_finite(const HiddenVariableSample& sample) {
  if (!sample.finite()) throw InvalidArgument("hidden-variable sample has a non-finite component");
}

}  // namespace

SqueezeParameter::SqueezeParameter(double chi) : chi_(chi) {
  if (!std::isfinite(chi) || chi < 0.0) {
    throw InvalidArgument("squeeze parameter must be finite and nonnegative, got " +
                          std::to_string(chi));
  }
}

bool HiddenVariableSample::finite() const noexcept {
  for (const Complex& z : e) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

CovarianceModel build_covariance(SqueezeParameter chi) noexcept {
  const double c = chi.value();
  const double cross = c * std::sqrt(1.0 + c * c) / 2.0;
  return {chi, (1.0 + 2.0 * c * c) / 4.0, cross, -cross, 0.25};
}

CovarianceModel build_covariance(double chi) { return build_covariance(SqueezeParameter(chi)); }

double squeezed_wigner(SqueezeParameter chi, Complex e, Complex e_prime) noexcept {
  return std::exp(log_squeezed(chi.value(), e, e_prime));
}

double vacuum_wigner(Complex e) noexcept { return 2.0 * std::exp(-2.0 * intensity(e)) / pi; }

double density(const CovarianceModel& model, const HiddenVariableSample& sample) {
  require_finite(sample);
  const auto& e = sample.e;
  return squeezed_wigner(model.chi, e[0], e[1]) * squeezed_wigner(model.chi, e[2], e[3]) *
         vacuum_wigner(e[4]) * vacuum_wigner(e[5]);
}

double log_density(const CovarianceModel& model, const HiddenVariableSample& sample) {
  require_finite(sample);
  const auto& e = sample.e;
  const double chi = model.chi.value();
  return log_squeezed(chi, e[0], e[1]) + log_squeezed(chi, e[2], e[3]) + log_vacuum(e[4]) +
         log_vacuum(e[5]);
}

GaussianSampler::GaussianSampler(const CovarianceModel& model) noexcept {
  // Lower Cholesky factor of [[v, c], [c, v]].
  auto factor = [](double v, double c) {
    const double l11 = std::sqrt(v);
    return BlockFactor{l11, c / l11, std::sqrt((v * v - c * c) / v)};
  };
  re_ = factor(model.var_sq, model.cov_x);
  im_ = factor(model.var_sq, model.cov_y);
  vac_ = std::sqrt(model.var_vac);
}

HiddenVariableSample GaussianSampler::operator()(const RandomStream& stream,
                                                 std::uint64_t index) const noexcept {
  const std::uint64_t base = index * kBlocksPerSample;
  HiddenVariableSample s;
  for (std::size_t pair = 0; pair < 2; ++pair) {
    const auto zx = stream.gaussian_pair(base + 2 * pair);
    const auto zy = stream.gaussian_pair(base + 2 * pair + 1);
    s.e[2 * pair] = {re_.l11 * zx[0], im_.l11 * zy[0]};
    s.e[2 * pair + 1] = {re_.l21 * zx[0] + re_.l22 * zx[1], im_.l21 * zy[0] + im_.l22 * zy[1]};
  }
  const auto va = stream.gaussian_pair(base + 4);
  const auto vb = stream.gaussian_pair(base + 5);
  s.e[4] = {vac_ * va[0], vac_ * va[1]};
  s.e[5] = {vac_ * vb[0], vac_ * vb[1]};
  return s;
}

HiddenVariableSample sample_at(const CovarianceModel& model, const RandomStream& stream,
                               std::uint64_t index) noexcept {
  return GaussianSampler(model)(stream, index);
}

void sample_into(const CovarianceModel& model, const RandomStream& stream,
                 std::uint64_t first_index, std::span<HiddenVariableSample> out) noexcept {
  const GaussianSampler sampler(model);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sampler(stream, first_index + i);
}

std::vector<HiddenVariableSample> sample_batch(const CovarianceModel& model,
                                               const RandomStream& stream, std::size_t n) {
  if (n == 0) throw InvalidArgument("sample_batch needs n >= 1");
  std::vector<HiddenVariableSample> out;
  try {
    out.resize(n);
  } catch (const std::length_error&) {
    throw CapacityError("cannot size a batch of " + std::to_string(n) + " samples");
  } catch (const std::bad_alloc&) {
    throw CapacityError("cannot allocate a batch of " + std::to_string(n) + " samples");
  }
  sample_into(model, stream, 0, out);
  return out;
}

Complex SecondMomentTable::product_moment(std::size_t j, std::size_t k) const {
  // <(a + ib)(c + id)> = <ac> - <bd> + i(<ad> + <bc>)
  const std::size_t a = component_index(j, false), b = component_index(j, true);
  const std::size_t c = component_index(k, false), d = component_index(k, true);
  return {covariance(a, c) - covariance(b, d), covariance(a, d) + covariance(b, c)};
}

Complex SecondMomentTable::conjugate_moment(std::size_t j, std::size_t k) const {
  // <(a + ib)(c - id)> = <ac> + <bd> + i(<bc> - <ad>)
  const std::size_t a = component_index(j, false), b = component_index(j, true);
  const std::size_t c = component_index(k, false), d = component_index(k, true);
  return {covariance(a, c) + covariance(b, d), covariance(b, c) - covariance(a, d)};
}

SecondMomentTable exact_second_moments(const CovarianceModel& model) noexcept {
  SecondMomentTable::Matrix m{};
  for (std::size_t mode = 0; mode < 4; ++mode) {
    m[component_index(mode, false)][component_index(mode, false)] = model.var_sq;
    m[component_index(mode, true)][component_index(mode, true)] = model.var_sq;
  }
  for (std::size_t mode = 4; mode < 6; ++mode) {
    m[component_index(mode, false)][component_index(mode, false)] = model.var_vac;
    m[component_index(mode, true)][component_index(mode, true)] = model.var_vac;
  }
  for (std::size_t first : {std::size_t{0}, std::size_t{2}}) {
    const std::size_t xa = component_index(first, false), xb = component_index(first + 1, false);
    const std::size_t ya = component_index(first, true), yb = component_index(first + 1, true);
    m[xa][xb] = m[xb][xa] = model.cov_x;
    m[ya][yb] = m[yb][ya] = model.cov_y;
  }
  return SecondMomentTable(m);
}

}  // namespace lhvbell
