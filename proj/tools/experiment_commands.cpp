#include "experiment_commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "lhvbell/analytic_oracle.hpp"
#include "lhvbell/errors.hpp"
#include "lhvbell/monte_carlo.hpp"

namespace lhvbell::experiment {
namespace {

using nlohmann::ordered_json;
using std::numbers::pi;

constexpr double kValidateTolerance = 5.0;  // standard errors

std::string fmt(double v) { return format_number(v); }
std::string fmt(std::uint64_t v) { return format_number(v); }

std::string rep_name(Representation rep) { return std::string(to_string(rep)); }

ordered_json angles_json(const BellAngles& a) {
  return {{"theta_a", a.a}, {"theta_a_prime", a.a_prime}, {"theta_b", a.b},
          {"theta_b_prime", a.b_prime}};
}

ordered_json config_json(const ExperimentConfig& c, Command command) {
  return {{"command", std::string(to_string(command))},
          {"chi_grid", c.chi_grid},
          {"angles", angles_json(c.angles)},
          {"representation", rep_name(c.representation)},
          {"samples", c.samples},
          {"seed", c.seed},
          {"chunks", c.chunks},
          {"epsilon", c.epsilon}};
}

std::optional<double> oracle_or_empty(const std::function<double()>& f) {
  try {
    return f();
  } catch (const DegenerateDenominator&) {
    return std::nullopt;
  }
}

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

// ----------------------------------------------------------------------------
// validate

struct ValidationRow {
  std::string quantity;
  double chi = 0.0;
  std::optional<double> oracle;
  std::optional<double> estimate;
  std::optional<double> std_error;
  std::string status;  // pass, fail, expected_degenerate
  std::string detail;
};

class Validator {
 public:
  explicit Validator(const ExperimentConfig& config) : config_(config) {}

  void compare(const std::string& quantity, double chi, const std::function<double()>& oracle,
               const std::function<MeanEstimate(const RandomStream&)>& estimate) {
    ValidationRow row{quantity, chi, {}, {}, {}, {}, {}};
    const RandomStream stream{config_.seed, next_substream_++};
    row.oracle = oracle_or_empty(oracle);
    try {
      const MeanEstimate est = estimate(stream);
      row.estimate = est.mean;
      row.std_error = est.std_error;
      if (!row.oracle) {
        row.status = "fail";
        row.detail = "oracle degenerate but estimate is not";
      } else {
        const double dev = std::abs(est.mean - *row.oracle);
        row.status = dev <= kValidateTolerance * est.std_error ? "pass" : "fail";
      }
    } catch (const DegenerateDenominator& e) {
      row.status = row.oracle ? "fail" : "expected_degenerate";
      row.detail = std::string("DegenerateDenominator: ") + e.what();
    }
    rows_.push_back(std::move(row));
  }

  void upper_bound(const std::string& quantity, double chi, double bound,
                   const std::function<MeanEstimate(const RandomStream&)>& estimate) {
    ValidationRow row{quantity, chi, bound, {}, {}, {}, "one-sided: |estimate| <= bound"};
    const MeanEstimate est = estimate(RandomStream{config_.seed, next_substream_++});
    row.estimate = est.mean;
    row.std_error = est.std_error;
    row.status = std::abs(est.mean) <= bound + kValidateTolerance * est.std_error ? "pass" : "fail";
    rows_.push_back(std::move(row));
  }

  [[nodiscard]] const std::vector<ValidationRow>& rows() const noexcept { return rows_; }

 private:
  const ExperimentConfig& config_;
  std::uint64_t next_substream_ = 0;
  std::vector<ValidationRow> rows_;
};

MeanEstimate from_correlation(const CorrelationEstimate& e) { return {e.e, e.std_error, e.n}; }

}  // namespace

CommandResult cmd_validate(const ExperimentConfig& config) {
  Validator v(config);
  const std::uint64_t n = config.samples;
  const std::size_t chunks = config.chunks;
  const std::size_t workers = config.workers;
  const EstimationOptions options = config.estimation_options();
  const Representation rep = config.representation;

  for (double chi : config.chi_grid) {
    const CovarianceModel model = build_covariance(chi);
    auto mean_of = [&](auto f) {
      return [&, f](const RandomStream& s) { return estimate_mean(model, s, n, chunks, workers, f); };
    };
    auto component = [](const HiddenVariableSample& s, std::size_t mode, bool imag) {
      return imag ? s.e[mode].imag() : s.e[mode].real();
    };

    v.compare("var_re_e1", chi, [&] { return model.var_sq; },
              mean_of([=](const HiddenVariableSample& s) {
                return component(s, 0, false) * component(s, 0, false);
              }));
    v.compare("cov_re_e1_re_e2", chi, [&] { return model.cov_x; },
              mean_of([=](const HiddenVariableSample& s) {
                return component(s, 0, false) * component(s, 1, false);
              }));
    v.compare("cov_im_e1_im_e2", chi, [&] { return model.cov_y; },
              mean_of([=](const HiddenVariableSample& s) {
                return component(s, 0, true) * component(s, 1, true);
              }));
    v.compare("cov_re_e3_re_e4", chi, [&] { return model.cov_x; },
              mean_of([=](const HiddenVariableSample& s) {
                return component(s, 2, false) * component(s, 3, false);
              }));
    v.compare("intensity_e5", chi, [] { return 0.5; },
              mean_of([](const HiddenVariableSample& s) { return intensity(s.e[4]); }));
    for (Representation r : {Representation::QuadratureDerived, Representation::WignerIntensity}) {
      v.compare("mean_rate_a_plus_" + rep_name(r), chi, [&] { return oracle_mean_rate(chi, r); },
                mean_of([r, &config](const HiddenVariableSample& s) {
                  return count_rates(s, {config.angles.a, config.angles.b}, r).a_plus;
                }));
    }
    v.compare("dark_noise_mean_a", chi, [] { return oracle_dark_noise_mean(); },
              mean_of([](const HiddenVariableSample& s) { return dark_noise_rates(s).a_plus; }));

    for (double delta : {0.0, pi / 8, pi / 4, 3 * pi / 8}) {
      v.compare("E_" + rep_name(rep) + "_delta_" + fmt(delta), chi,
                [&] { return oracle_correlation_e(chi, delta); },
                [&](const RandomStream& s) {
                  return from_correlation(correlation_e(
                      accumulate_angle_pair(model, {delta, 0.0}, rep, n, s, options),
                      options.policy));
                });
    }
    v.compare("S_" + rep_name(rep), chi, [&] { return oracle_bell_s(chi, config.angles); },
              [&](const RandomStream& s) {
                const BellEstimate b = bell_s(model, config.angles, rep, n, s, options);
                return MeanEstimate{b.s, b.s_std_error, n};
              });
    for (Representation r : {Representation::QuadratureDerived, Representation::WignerIntensity}) {
      v.compare("negative_fraction_a_plus_" + rep_name(r), chi,
                [&] { return oracle_negative_fraction(chi, r); },
                [&](const RandomStream& s) {
                  const PositivityReport p = positivity_report(
                      model, {config.angles.a, config.angles.b}, r, n, s, options);
                  return MeanEstimate{p.fraction[0], p.std_error[0], n};
                });
    }
    auto sign_s = [&](const RandomStream& s) {
      const SignBellEstimate b = sign_bell_s(model, config.angles, n, s, options);
      return MeanEstimate{b.s, b.s_std_error, n};
    };
    v.compare("sign_S", chi, [&] { return oracle_sign_bell_s(chi, config.angles); }, sign_s);
    v.upper_bound("sign_S_classical_bound", chi, 2.0, sign_s);
  }

  CommandResult result;
  result.csv = CsvTable({"quantity", "chi", "oracle", "estimate", "stderr", "z", "tolerance_sigma",
                         "status"});
  ordered_json rows = ordered_json::array();
  std::size_t failures = 0;
  for (const ValidationRow& row : v.rows()) {
    std::string z;
    std::optional<double> z_value;
    if (row.oracle && row.estimate && row.std_error && *row.std_error > 0.0) {
      z_value = (*row.estimate - *row.oracle) / *row.std_error;
      z = fmt(*z_value);
    }
    result.csv.add_row({row.quantity, fmt(row.chi), row.oracle ? fmt(*row.oracle) : "",
                        row.estimate ? fmt(*row.estimate) : "",
                        row.std_error ? fmt(*row.std_error) : "", z, fmt(kValidateTolerance),
                        row.status});
    rows.push_back({{"quantity", row.quantity},
                    {"chi", row.chi},
                    {"oracle", optional_json(row.oracle)},
                    {"estimate", optional_json(row.estimate)},
                    {"stderr", optional_json(row.std_error)},
                    {"z", optional_json(z_value)},
                    {"status", row.status},
                    {"detail", row.detail}});
    if (row.status == "fail") ++failures;
  }
  result.summary = config_json(config, Command::validate);
  result.summary["tolerance_sigma"] = kValidateTolerance;
  result.summary["rows"] = rows;
  result.summary["failures"] = failures;
  result.exit_code = failures == 0 ? kExitOk : kExitAnalysisFailure;
  result.message = "validate: " + std::to_string(v.rows().size() - failures) + "/" +
                   std::to_string(v.rows().size()) + " rows within tolerance";
  return result;
}

// ----------------------------------------------------------------------------
// bell / sweep

namespace {

ordered_json bell_row_json(const ExperimentConfig& config, const SweepRow& row) {
  ordered_json j{{"chi", row.chi}, {"status", row.status}};
  std::array<std::optional<double>, 4> oracle_e{};
  for (std::size_t p = 0; p < 4; ++p) {
    const AnalyzerSettings s = config.angles.pair(p);
    oracle_e[p] = oracle_or_empty([&] { return oracle_correlation_e(row.chi, s.theta_a - s.theta_b); });
  }
  const auto oracle_s = oracle_or_empty([&] { return oracle_bell_s(row.chi, config.angles); });
  ordered_json oe = ordered_json::array();
  for (const auto& e : oracle_e) oe.push_back(optional_json(e));
  if (row.estimate) {
    const BellEstimate& b = *row.estimate;
    j["E"] = b.e;
    j["E_stderr"] = b.e_std_error;
    j["S"] = b.s;
    j["stderr_S"] = b.s_std_error;
  } else {
    j["detail"] = row.detail;
  }
  j["oracle_E"] = oe;
  j["oracle_S"] = optional_json(oracle_s);
  if (row.estimate && oracle_s) {
    j["deviation_S"] = row.estimate->s - *oracle_s;
    j["deviation_S_sigma"] = (row.estimate->s - *oracle_s) / row.estimate->s_std_error;
  }
  if (row.positivity) {
    ordered_json neg;
    for (Rate r : kAllRates) {
      neg[std::string(to_string(r))] = {
          {"fraction", row.positivity->fraction[static_cast<std::size_t>(r)]},
          {"stderr", row.positivity->std_error[static_cast<std::size_t>(r)]}};
    }
    j["negative_fractions"] = neg;
    j["oracle_negative_fraction"] = oracle_negative_fraction(row.chi, config.representation);
  }
  return j;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config) {
  return sweep_chi(config.chi_grid, config.angles, config.representation, config.samples,
                   RandomStream{config.seed, 0}, config.estimation_options());
}

}  // namespace

CommandResult cmd_bell(const ExperimentConfig& config) {
  const std::vector<SweepRow> rows = run_sweep(config);
  CommandResult result;
  result.csv = CsvTable({"chi", "theta_a", "theta_a_prime", "theta_b", "theta_b_prime",
                         "representation", "E_ab", "E_abp", "E_apb", "E_apbp", "S", "stderr_S",
                         "n", "seed", "status"});
  ordered_json json_rows = ordered_json::array();
  bool all_ok = true;
  for (const SweepRow& row : rows) {
    std::vector<std::string> cells{fmt(row.chi),
                                   fmt(config.angles.a),
                                   fmt(config.angles.a_prime),
                                   fmt(config.angles.b),
                                   fmt(config.angles.b_prime),
                                   rep_name(config.representation)};
    if (row.estimate) {
      for (double e : row.estimate->e) cells.push_back(fmt(e));
      cells.push_back(fmt(row.estimate->s));
      cells.push_back(fmt(row.estimate->s_std_error));
    } else {
      cells.insert(cells.end(), 6, "");
      all_ok = false;
    }
    cells.push_back(fmt(config.samples));
    cells.push_back(fmt(config.seed));
    cells.push_back(row.status);
    result.csv.add_row(std::move(cells));
    json_rows.push_back(bell_row_json(config, row));
  }
  result.summary = config_json(config, Command::bell);
  result.summary["rows"] = json_rows;
  result.exit_code = all_ok ? kExitOk : kExitAnalysisFailure;
  result.message = all_ok ? "bell: done" : "bell: some rows have a degenerate denominator";
  return result;
}

CommandResult cmd_sweep(const ExperimentConfig& config) {
  const std::vector<SweepRow> rows = run_sweep(config);
  CommandResult result;
  std::vector<std::string> header{"chi", "representation", "S", "stderr_S", "oracle_S"};
  for (Rate r : kAllRates) {
    header.push_back("neg_frac_" + std::string(to_string(r)));
    header.push_back("neg_frac_" + std::string(to_string(r)) + "_stderr");
  }
  header.insert(header.end(), {"oracle_neg_frac", "n", "seed", "status"});
  result.csv = CsvTable(header);
  ordered_json json_rows = ordered_json::array();
  for (const SweepRow& row : rows) {
    std::vector<std::string> cells{fmt(row.chi), rep_name(config.representation)};
    if (row.estimate) {
      cells.push_back(fmt(row.estimate->s));
      cells.push_back(fmt(row.estimate->s_std_error));
    } else {
      cells.insert(cells.end(), 2, "");
    }
    const auto oracle_s = oracle_or_empty([&] { return oracle_bell_s(row.chi, config.angles); });
    cells.push_back(oracle_s ? fmt(*oracle_s) : "");
    for (std::size_t k = 0; k < 4; ++k) {
      cells.push_back(row.positivity ? fmt(row.positivity->fraction[k]) : "");
      cells.push_back(row.positivity ? fmt(row.positivity->std_error[k]) : "");
    }
    cells.push_back(fmt(oracle_negative_fraction(row.chi, config.representation)));
    cells.push_back(fmt(config.samples));
    cells.push_back(fmt(config.seed));
    cells.push_back(row.status);
    result.csv.add_row(std::move(cells));
    json_rows.push_back(bell_row_json(config, row));
  }
  result.summary = config_json(config, Command::sweep);
  result.summary["rows"] = json_rows;
  result.summary["oracle_crossing_chi"] = oracle_classical_crossing_chi();
  result.message = "sweep: " + std::to_string(rows.size()) + " rows";
  return result;
}

// ----------------------------------------------------------------------------
// positivity

CommandResult cmd_positivity(const ExperimentConfig& config) {
  CommandResult result;
  result.csv = CsvTable(
      {"chi", "representation", "rate", "negative_fraction", "stderr", "oracle", "n", "seed"});
  ordered_json json_rows = ordered_json::array();
  const AnalyzerSettings settings{config.angles.a, config.angles.b};
  for (std::size_t r = 0; r < config.chi_grid.size(); ++r) {
    const double chi = config.chi_grid[r];
    const PositivityReport report =
        positivity_report(build_covariance(chi), settings, config.representation, config.samples,
                          RandomStream{config.seed, r}, config.estimation_options());
    const double oracle = oracle_negative_fraction(chi, config.representation);
    for (Rate rate : kAllRates) {
      const std::size_t k = static_cast<std::size_t>(rate);
      result.csv.add_row({fmt(chi), rep_name(config.representation), std::string(to_string(rate)),
                          fmt(report.fraction[k]), fmt(report.std_error[k]), fmt(oracle),
                          fmt(config.samples), fmt(config.seed)});
      json_rows.push_back({{"chi", chi},
                           {"rate", std::string(to_string(rate))},
                           {"negative_fraction", report.fraction[k]},
                           {"stderr", report.std_error[k]},
                           {"oracle", oracle},
                           {"deviation_sigma", report.std_error[k] > 0
                                                   ? ordered_json((report.fraction[k] - oracle) /
                                                                  report.std_error[k])
                                                   : ordered_json(nullptr)}});
    }
  }
  result.summary = config_json(config, Command::positivity);
  result.summary["rows"] = json_rows;
  result.message = "positivity: done";
  return result;
}

// ----------------------------------------------------------------------------
// sample-dump

CommandResult cmd_sample_dump(const ExperimentConfig& config) {
  const double chi = config.chi_grid.front();
  const CovarianceModel model = build_covariance(chi);
  const AnalyzerSettings settings{config.angles.a, config.angles.b};
  std::vector<std::string> header{"index"};
  for (int m = 1; m <= 6; ++m) {
    header.push_back("re_e" + std::to_string(m));
    header.push_back("im_e" + std::to_string(m));
  }
  for (const char* q : {"x_a_plus", "x_a_minus", "x_b_plus", "x_b_minus", "x_va", "x_vb"}) {
    header.push_back(std::string(q) + "_1");
    header.push_back(std::string(q) + "_2");
  }
  for (Rate r : kAllRates) header.push_back("r_" + std::string(to_string(r)));

  CommandResult result;
  result.csv = CsvTable(header);
  const GaussianSampler sampler(model);
  const RandomStream stream{config.seed, 0};
  for (std::uint64_t i = 0; i < config.samples; ++i) {
    const HiddenVariableSample s = sampler(stream, i);
    const QuadratureRealities q = quadrature_realities(s, settings);
    const CountRatePair rates = count_rates(s, settings, config.representation);
    std::vector<std::string> cells{fmt(i)};
    for (const Complex& z : s.e) {
      cells.push_back(fmt(z.real()));
      cells.push_back(fmt(z.imag()));
    }
    for (const auto& x : {q.a_plus, q.a_minus, q.b_plus, q.b_minus, q.va, q.vb}) {
      cells.push_back(fmt(x[0]));
      cells.push_back(fmt(x[1]));
    }
    for (Rate r : kAllRates) cells.push_back(fmt(rate_value(rates, r)));
    result.csv.add_row(std::move(cells));
  }
  result.summary = config_json(config, Command::sample_dump);
  result.summary["theta_a"] = settings.theta_a;
  result.summary["theta_b"] = settings.theta_b;
  result.summary["rows"] = config.samples;
  result.message = "sample-dump: " + std::to_string(config.samples) + " rows";
  return result;
}

// ----------------------------------------------------------------------------
// dispatch

int run_command(Command command, const ExperimentConfig& config, std::ostream& out,
                std::ostream& err) {
  try {
    validate_config(config, command);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CommandResult result;
  try {
    switch (command) {
      case Command::validate: result = cmd_validate(config); break;
      case Command::bell: result = cmd_bell(config); break;
      case Command::sweep: result = cmd_sweep(config); break;
      case Command::positivity: result = cmd_positivity(config); break;
      case Command::sample_dump: result = cmd_sample_dump(config); break;
    }
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const lhvbell::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitAnalysisFailure;
  }

  if (config.out_csv.empty()) {
    result.csv.write(out);
  } else {
    std::ofstream file(config.out_csv, std::ios::binary | std::ios::trunc);
    if (file) result.csv.write(file);
    if (!file) {
      err << "error: cannot write " << config.out_csv << '\n';
      return kExitAnalysisFailure;
    }
  }
  if (!config.out_json.empty()) {
    std::ofstream file(config.out_json, std::ios::binary | std::ios::trunc);
    if (file) file << result.summary.dump(2) << '\n';
    if (!file) {
      err << "error: cannot write " << config.out_json << '\n';
      return kExitAnalysisFailure;
    }
  }
  err << result.message << '\n';
  return result.exit_code;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo and exact oracle for a local hidden-variable model of quadrature "
               "Bell tests on a two-mode squeezed source",
               "lhvbell"};
  app.set_config("--config", "", "flat key = value file; keys are the long flag names");
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string chi, samples, seed, chunks, epsilon, dump_cap, representation;
  std::vector<std::string> chi_grid, angles;
  ExperimentConfig config;
  app.add_option("--chi", chi, "squeeze parameter (single run)");
  app.add_option("--chi-grid", chi_grid, "comma-separated squeeze parameters")->delimiter(',');
  app.add_option("--angles", angles, "a,a',b,b' in radians; suffix 'deg' for degrees")
      ->delimiter(',');
  app.add_option("--representation", representation, "eq3 (quadrature-derived) or eq4 (intensity)");
  app.add_option("--samples", samples, "samples per angle pair / per run");
  app.add_option("--seed", seed, "64-bit master seed");
  app.add_option("--chunks", chunks, "batch-means chunks (>= 32 for error bars)");
  app.add_option("--out-csv", config.out_csv, "CSV output path (default: stdout)");
  app.add_option("--out-json", config.out_json, "JSON summary output path");
  app.add_option("--epsilon", epsilon, "relative floor for degenerate denominators");
  app.add_option("--dump-cap", dump_cap, "maximum rows for sample-dump");

  const std::array<std::pair<Command, const char*>, 5> commands{{
      {Command::validate, "oracle vs Monte Carlo agreement table"},
      {Command::bell, "CHSH estimate per chi"},
      {Command::positivity, "negative count-rate fractions"},
      {Command::sweep, "S and negative fractions across a chi grid"},
      {Command::sample_dump, "raw hidden variables and derived realities"},
  }};
  for (const auto& [command, help] : commands) {
    app.add_subcommand(std::string(to_string(command)), help);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  Command command = Command::validate;
  for (const auto& [c, help] : commands) {
    if (app.got_subcommand(std::string(to_string(c)))) command = c;
  }

  try {
    if (!chi.empty() && !chi_grid.empty()) throw ConfigError("give either chi or chi-grid");
    if (!chi.empty()) config.chi_grid = {parse_real(chi, "chi")};
    if (!chi_grid.empty()) {
      config.chi_grid.clear();
      for (const auto& c : chi_grid) config.chi_grid.push_back(parse_real(c, "chi-grid entry"));
    }
    if (!angles.empty()) config.angles = parse_angles(angles);
    if (!representation.empty()) {
      const auto rep = parse_representation(representation);
      if (!rep) throw ConfigError("representation must be eq3 or eq4, got '" + representation + "'");
      config.representation = *rep;
    }
    if (!samples.empty()) config.samples = parse_count(samples, "samples");
    if (!seed.empty()) config.seed = parse_count(seed, "seed");
    if (!chunks.empty()) config.chunks = static_cast<std::size_t>(parse_count(chunks, "chunks"));
    if (!epsilon.empty()) config.epsilon = parse_real(epsilon, "epsilon");
    if (!dump_cap.empty()) config.dump_cap = parse_count(dump_cap, "dump-cap");
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return run_command(command, config, out, err);
}

}  // namespace lhvbell::experiment
