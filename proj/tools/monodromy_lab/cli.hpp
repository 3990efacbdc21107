#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

namespace monodromy::lab {

// Configuration shared by all subcommands. Invariants enforced after
// parsing: epsilon in (0, 0.1], samples a power of two in [256, 2^20],
// |turns| in [1, 8], format csv or json, tolerance names from the registry.
struct RunConfig {
  std::string command;
  double epsilon = 0.05;
  unsigned long long samples = 2048;
  double center_j = 0.0;
  double center_h = 1.0;
  long long turns = 1;
  std::string format = "csv";
  std::string out_path;
  std::map<std::string, double> tolerances;
  unsigned threads = 1;
};

// Invalid configuration (maps to exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (maps to exit code 2).
class FileParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Named verification tolerances with their defaults; the set doubles as the
// registry of legal --tol names.
const std::map<std::string, double>& default_tolerances();

// Full command-line entry point (also used by the tests). Returns the
// process exit code: 0 success, 1 failed check/certification, 2 usage or
// parse error.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

} // namespace monodromy::lab
