#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lhvbell/bell_analysis.hpp"
#include "lhvbell/lhv_model.hpp"

namespace lhvbell::experiment {

/// Usage or configuration problem; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { validate, bell, positivity, sweep, sample_dump };

std::string_view to_string(Command command) noexcept;

inline constexpr int kExitOk = 0;
inline constexpr int kExitAnalysisFailure = 1;
inline constexpr int kExitUsage = 2;

/// Everything a run depends on. Keys of the config file and command-line
/// flags share names: chi, chi-grid, angles, representation, samples, seed,
/// chunks, out-csv, out-json, epsilon, dump-cap.
struct ExperimentConfig {
  std::vector<double> chi_grid{0.2};
  BellAngles angles = BellAngles::standard();
  Representation representation = Representation::WignerIntensity;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 20240611;
  std::size_t chunks = 32;
  std::string out_csv;
  std::string out_json;
  double epsilon = 1e-12;
  std::uint64_t dump_cap = 100000;
  std::size_t workers = 0;  ///< 0: LHVBELL_WORKERS or hardware concurrency

  [[nodiscard]] EstimationOptions estimation_options() const;
};

/// Minimum chunk count for subcommands that report batch-means error bars.
inline constexpr std::size_t kMinErrorBarChunks = 32;

/// Radians, or degrees with a "deg" suffix ("22.5deg").
double parse_angle(std::string_view text);

/// Four angles a, a', b, b' from separate tokens.
BellAngles parse_angles(const std::vector<std::string>& tokens);

double parse_real(std::string_view text, std::string_view what);

/// Nonnegative integer; scientific notation with an integral value ("1e7")
/// is accepted.
std::uint64_t parse_count(std::string_view text, std::string_view what);

/// Throws ConfigError when a field is out of range for `command`.
void validate_config(const ExperimentConfig& config, Command command);

}  // namespace lhvbell::experiment
