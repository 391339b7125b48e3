#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "extwm/svg.hpp"

namespace extwm::harness {

using json = nlohmann::ordered_json;  // insertion order -> stable report layout

// Invalid configuration (unknown kind, bad parameter, malformed JSON value).
// run() maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string kind;      // evolve | harmonic | coercivity | phase | renorm |
                         // spectral | full-verify
  json params;           // kind-specific numeric parameters (object)
  std::uint32_t seed = 2718281u;
  std::string out_dir;   // empty -> no files written
  bool figures = false;

  // Validates top-level shape; kind-specific parameters are validated by the
  // experiment itself. Throws ConfigError.
  static Config from_json(const json& j);
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;   // the measured quantity
  std::string detail;   // bound / context, human-readable
};

struct Table {
  std::string name;  // file stem, e.g. "local_energy"
  std::string csv;   // full file contents, header line included
};

struct Bundle {
  std::string kind;
  json summary;                     // full JSON report (checks appended on write)
  std::vector<CheckResult> checks;
  std::vector<Table> tables;
  std::vector<svg::Figure> figures;

  bool all_pass() const;
  json checks_json() const;  // machine-readable pass/fail list
};

// Executes the experiment named by c.kind. Throws ConfigError for invalid
// configuration; numerical work itself does not throw on assertion failure —
// failures are recorded in checks.
Bundle run_experiment(const Config& c);

// Writes <out_dir>/summary.json and one <name>.csv per table. Creates the
// directory. Returns the paths written.
std::vector<std::string> write_bundle(const Bundle& b, const std::string& out_dir);

// Writes one <name>.svg per figure that has data; figures without data are
// skipped and reported in *warnings. Returns the paths written.
std::vector<std::string> emit_figures(const Bundle& b, const std::string& out_dir,
                                      std::vector<std::string>* warnings);

// The numbered acceptance criteria, one or more checks per criterion; check
// names are prefixed "A<k>". Used by kind=full-verify and the acceptance
// test binary.
std::vector<CheckResult> acceptance_checks();

// Full pipeline: run, write, emit figures, print per-check lines to stdout.
// Exit-code contract: 0 all checks pass, 1 at least one check failed,
// 2 invalid configuration.
int run(const Config& c);

}  // namespace extwm::harness
