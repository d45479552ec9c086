#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "slspec/potential.hpp"

namespace slspec {

enum class Command { spectrum, eigenfunction, validate, gamma };
enum class Method { asym, shoot, both };
enum class EigenKind { asym, biorth, oracle };
enum class OutputFormat { csv, json };

std::string to_string(Command c);
std::string to_string(Method m);
std::string to_string(EigenKind k);
std::string to_string(OutputFormat f);

/// Invalid configuration or unreadable input; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string potential_path;
  Command command = Command::spectrum;
  int n_min = 1;
  int n_max = 10;
  int n = 1;  // eigenfunction index
  int grid = 513;
  Method method = Method::asym;
  EigenKind kind = EigenKind::asym;
  double alpha = 2.0;
  double tol_root = 1e-13;
  /// Target accuracy of the oracle integrators. Values below 1e-10 shrink the
  /// fixed steps by (tol_quad/1e-10)^{1/4}, down to a factor 1/16.
  double tol_quad = 1e-10;
  OutputFormat format = OutputFormat::csv;
  std::string out_path;  // empty: standard output
  int jobs = 1;

  /// Throws ConfigError: n range nonempty, grid ≥ 16, tolerances > 0, α > 0.
  void validate() const;
  /// Echo of every field that affects output (the output path and job count
  /// are excluded so results compare equal across runs).
  std::string to_json() const;
};

std::string cmd_spectrum(const RunConfig& cfg, const PotentialSpec& p);
std::string cmd_eigenfunction(const RunConfig& cfg, const PotentialSpec& p);
std::string cmd_validate(const RunConfig& cfg, const PotentialSpec& p);
std::string cmd_gamma(const RunConfig& cfg, const PotentialSpec& p);

/// Loads the potential, dispatches, writes to cfg.out_path or `out`.
/// Returns 0, 2 (config or file error) or 3 (internal error); diagnostics go to `err`.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace slspec
