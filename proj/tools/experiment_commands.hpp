#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "csv_writer.hpp"
#include "experiment_config.hpp"
#include "json.hpp"

namespace lhvbell::experiment {

/// Tables and summary produced by a subcommand before anything is written.
struct CommandResult {
  CsvTable csv{{}};
  nlohmann::ordered_json summary;
  int exit_code = kExitOk;
  std::string message;  ///< one-line human summary for stderr
};

CommandResult cmd_validate(const ExperimentConfig& config);
CommandResult cmd_bell(const ExperimentConfig& config);
CommandResult cmd_sweep(const ExperimentConfig& config);
CommandResult cmd_positivity(const ExperimentConfig& config);
CommandResult cmd_sample_dump(const ExperimentConfig& config);

/// Validates `config` for `command`, runs it and writes the CSV (to
/// config.out_csv, or `out` when empty) and the JSON summary (when
/// config.out_json is set). Returns the process exit code.
int run_command(Command command, const ExperimentConfig& config, std::ostream& out,
                std::ostream& err);

/// Full command line (without argv[0]).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lhvbell::experiment
