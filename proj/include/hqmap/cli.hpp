#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace hqmap::cli {

struct RunConfig {
  std::string subcommand;  // analyze | certify | hilbert | jacobian | eremenko | presets
  std::string map;
  std::string curve;
  std::optional<double> K;
  std::size_t N = 1024;
  std::size_t M = 1024;
  int grid_radii = 12;
  std::size_t grid_angles = 256;
  std::size_t taus = 64;
  std::string A = "const:1";
  double B = 1.0;
  double q = 3.0;
  double Q = 2.0;
  std::size_t depth = 64;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
};

/// Exit status: 0 when every check passes, 1 when a check fails, 2 for
/// input or configuration errors. The report goes to config.out, or to `out`
/// when no path is given; messages go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses the command line and calls run().
int main(int argc, char** argv);

}  // namespace hqmap::cli
