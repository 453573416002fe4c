#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "clr2d/bounds.hpp"
#include "clr2d/counter.hpp"

namespace clr2d::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

/// Process exit codes.
enum ExitCode : int { kOk = 0, kViolation = 1, kConfigError = 2, kFlagged = 3 };

/// Every validation problem of a config, one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::vector<std::string>& problems);
  [[nodiscard]] const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class Command { Constants, Count, Verify, Sweep, Bracket };
enum class Format { Csv, Json };
enum class Engine { Auto, Ode, Lattice };

const char* to_string(Command c);
std::optional<Command> parse_command(const std::string& name);
std::optional<Format> parse_format(const std::string& name);

/// Geometric grid start * factor^i, i < count.
struct Schedule {
  double start;
  double factor;
  int count;

  [[nodiscard]] std::vector<double> values() const;
};

/// Seeded random potentials added to a verification battery.
struct Battery {
  int inv_square_well = 0;
  int sampled = 0;
};

struct ExperimentConfig {
  std::optional<Command> command;
  Operator op = Antisymmetric{};
  std::optional<RadialPotential> potential;
  /// Weight exponents alpha; verify and constants iterate over all of them.
  std::vector<double> alphas;
  /// Flux grid for the constants table.
  std::vector<double> fluxes;
  std::optional<Schedule> lambda_schedule;
  double lambda = 1.0;
  std::string out_path;
  Format format = Format::Csv;
  std::uint64_t seed = 0;
  Battery battery;
  /// Fixed bracket interval length; the default follows bracket_length().
  std::optional<double> bracket_L;
  /// Also run the shooting count in `bracket` rows with lambda <= 100.
  bool bracket_with_count = false;
  Engine engine = Engine::Auto;
  CountSettings count_settings;
};

/// Strict JSON: unknown keys, wrong types and invalid values are all
/// collected into one ConfigError.
ExperimentConfig parse_config(const std::string& text);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

using Cell = std::variant<std::monostate, std::int64_t, double, ExtReal, bool, std::string>;

struct Report {
  std::string kind;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;
  int exit_code = kOk;
};

Report run_constants(const ExperimentConfig& cfg);
Report run_count(const ExperimentConfig& cfg, unsigned workers = 1);
Report run_verify(const ExperimentConfig& cfg, unsigned workers = 1);
Report run_sweep(const ExperimentConfig& cfg, unsigned workers = 1);
Report run_bracket(const ExperimentConfig& cfg, unsigned workers = 1);

/// Dispatches on cfg.command.
Report run(const ExperimentConfig& cfg, unsigned workers = 1);

std::string render_csv(const Report& report);
std::string render_json(const Report& report);

/// Writes the report; an empty path writes to stdout.
void emit_report(const Report& report, Format format, const std::string& path);

/// Seeded random battery potentials, identical on every platform.
std::vector<RadialPotential> random_battery(const Battery& battery, std::uint64_t seed);

}  // namespace clr2d::cli
