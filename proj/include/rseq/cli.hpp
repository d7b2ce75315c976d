#pragma once

// Command-line driver: configuration, presets, dispatch and artifacts.

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rseq/equilibrium.hpp"
#include "rseq/hermite_pade.hpp"

namespace rseq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitError = 2;

struct SigmaConfig {
  std::string kind = "arcsine";  // arcsine | constant | point_mass | chebyshev | legendre
  double atom = 0.0;
  /// Density polynomial in t (lowest degree first) for chebyshev / legendre.
  std::vector<double> density;
};

struct RunConfig {
  std::vector<Interval> F;
  SigmaConfig sigma;
  GridParams grid;
  std::vector<int> n_list{5, 10, 20, 40};
  unsigned precision_bits = kDefaultPrecisionBits;
  double tolerance_scale = 1.0;
  double balayage_point = 2.0;
  int samples = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::filesystem::path output = "out";
  std::string preset;

  IntervalUnion support() const { return IntervalUnion(F); }
  MarkovSpec markov() const;
  nlohmann::ordered_json normalized() const;
};

/// Configuration rejected; `violations` lists every problem found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Names of the bundled presets.
std::vector<std::string> preset_names();
/// Bundled preset as a configuration document.
nlohmann::json preset(const std::string& name);

/// Parses and validates a configuration document.  A "preset" key supplies
/// defaults that the remaining keys override.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::filesystem::path> out;
  std::optional<int> threads;
  std::optional<unsigned> precision_bits;
  std::optional<int> nodes;
  std::optional<double> tolerance_scale;
};

/// Applies flag overrides and re-validates.
void apply_overrides(RunConfig& cfg, const Overrides& o);

const std::vector<std::string>& commands();

/// Runs one command, writing artifacts under cfg.output.  Returns the exit code.
int run(const std::string& command, const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full entry point: argument parsing, config loading and dispatch.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Lower-case hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace rseq::cli
