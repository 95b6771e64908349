#include "experiment_config.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

namespace lhvbell::experiment {
namespace {

std::string quoted(std::string_view text) { return "'" + std::string(text) + "'"; }

}  // namespace

std::string_view to_string(Command command) noexcept {
  switch (command) {
    case Command::validate: return "validate";
    case Command::bell: return "bell";
    case Command::positivity: return "positivity";
    case Command::sweep: return "sweep";
    case Command::sample_dump: return "sample-dump";
  }
  return "unknown";
}

EstimationOptions ExperimentConfig::estimation_options() const {
  EstimationOptions options;
  options.chunks = chunks;
  options.workers = workers;
  options.policy.epsilon = epsilon;
  return options;
}

double parse_real(std::string_view text, std::string_view what) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw ConfigError("invalid " + std::string(what) + " " + quoted(text));
  }
  return value;
}

double parse_angle(std::string_view text) {
  constexpr std::string_view kDegrees = "deg";
  if (text.size() > kDegrees.size() && text.ends_with(kDegrees)) {
    text.remove_suffix(kDegrees.size());
    return parse_real(text, "angle") * std::numbers::pi / 180.0;
  }
  return parse_real(text, "angle");
}

BellAngles parse_angles(const std::vector<std::string>& tokens) {
  if (tokens.size() != 4) {
    throw ConfigError("angles needs exactly four values (a, a', b, b'), got " +
                      std::to_string(tokens.size()));
  }
  return {parse_angle(tokens[0]), parse_angle(tokens[1]), parse_angle(tokens[2]),
          parse_angle(tokens[3])};
}

std::uint64_t parse_count(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  if (auto [ptr, ec] = std::from_chars(text.data(), end, value); ec == std::errc{} && ptr == end) {
    return value;
  }
  const double real = parse_real(text, what);
  if (real < 0.0 || real != std::floor(real) || real >= 0x1.0p64) {
    throw ConfigError(std::string(what) + " must be a nonnegative integer, got " + quoted(text));
  }
  return static_cast<std::uint64_t>(real);
}

void validate_config(const ExperimentConfig& config, Command command) {
  if (config.chi_grid.empty()) throw ConfigError("no chi value given");
  for (double chi : config.chi_grid) {
    if (!std::isfinite(chi) || chi < 0.0) {
      throw ConfigError("chi must be finite and nonnegative, got " + std::to_string(chi));
    }
  }
  for (double a : {config.angles.a, config.angles.a_prime, config.angles.b, config.angles.b_prime}) {
    if (!std::isfinite(a)) throw ConfigError("angles must be finite");
  }
  if (!std::isfinite(config.epsilon) || config.epsilon < 0.0) {
    throw ConfigError("epsilon must be finite and nonnegative");
  }
  if (config.samples == 0) throw ConfigError("samples must be >= 1");
  if (config.chunks == 0) throw ConfigError("chunks must be >= 1");

  switch (command) {
    case Command::validate:
    case Command::bell:
    case Command::sweep:
      if (config.chunks < kMinErrorBarChunks) {
        throw ConfigError("chunks must be >= " + std::to_string(kMinErrorBarChunks) +
                          " for error-bar subcommands");
      }
      if (config.samples < config.chunks) throw ConfigError("samples must be >= chunks");
      break;
    case Command::positivity:
      break;
    case Command::sample_dump:
      if (config.samples > config.dump_cap) {
        throw ConfigError("sample-dump of " + std::to_string(config.samples) +
                          " rows exceeds dump-cap " + std::to_string(config.dump_cap));
      }
      if (config.chi_grid.size() != 1) throw ConfigError("sample-dump takes a single chi");
      break;
  }
}

}  // namespace lhvbell::experiment
