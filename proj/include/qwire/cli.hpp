#pragma once

// Batch front-end: run configuration, its key=value file form, and the
// subcommands behind the qwire executable.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qwire::cli {

enum ExitCode { kSuccess = 0, kPartialFailure = 1, kConfigError = 2 };

struct RunConfig {
    std::string subcommand;  // sweep | field | universality | oned | oracle-compare

    // geometry
    std::string geometry = "hard-wall";  // hard-wall | general
    std::string potential_file;
    int num_modes = 16;

    // impurity
    double epsilon = 0.3;
    double rho0 = 0.01;
    std::vector<double> rho_ladder{0.04, 0.02, 0.01};
    std::vector<double> rho0_list{1e-3, 1e-2, 1e-1};

    // energy: omega, or threshold_m with offset above (m pi)^2
    int mode_n = 1;
    int threshold_m = 0;
    std::optional<double> omega;
    double offset = 0.0;
    /// "start:stop:count" or "a,b,c"; a number may carry the suffix pi2 (times pi^2).
    std::string omega_grid;
    /// Near-threshold offsets as multiples of |Delta_m| (universality).
    std::vector<double> offset_factors{1e-2, 1e-4, 1e-6};

    // field grid
    std::string field_mode = "defect";  // clean | defect | threshold
    int nx = 101;
    int ny = 51;
    double x_min = -2.0;
    double x_max = 2.0;
    bool components = false;

    // 1D barrier
    double alpha = 1.0;
    double barrier_width = 1e-3;

    // oracle
    bool oracle = false;
    int cells_per_width = 400;
    double half_length = 0.05;

    // output
    std::string out;  // empty: stdout
    std::string format = "csv";  // csv | json
    int threads = 0;

    bool operator==(const RunConfig&) const = default;
};

/// key=value lines, '#' comments, keys as in emit_config. Throws ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// Applies one key=value pair (used for files and command-line overrides).
void set_option(RunConfig& config, const std::string& key, const std::string& value);
/// Every key, fixed order, doubles with 17 significant digits.
std::string emit_config(const RunConfig& config);

/// Throws ConfigError naming the violated constraint.
void validate(const RunConfig& config);
std::vector<double> parse_omega_grid(const std::string& text);

/// A rectangular result table written as CSV (header row) or JSON lines.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
};

std::string format_number(double v);
std::string format_int(long v);
void write_table(const Table& table, const std::string& format, std::ostream& out);

struct CommandResult {
    Table table;
    int exit_code = kSuccess;
    std::vector<std::string> log;
};

CommandResult run_sweep(const RunConfig& config);
CommandResult run_field(const RunConfig& config);
CommandResult run_universality(const RunConfig& config);
CommandResult run_oned(const RunConfig& config);
CommandResult run_oracle_compare(const RunConfig& config);

/// Validates, dispatches on config.subcommand and writes the table to
/// config.out (or `out` when empty). Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& log);

}  // namespace qwire::cli
