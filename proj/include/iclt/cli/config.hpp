#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iclt/clt.hpp"
#include "iclt/errors.hpp"
#include "iclt/sequences.hpp"
#include "iclt/suites.hpp"

namespace iclt::cli {

enum class Command { Verify, Clt, Tails, Blocks, Clark, Correlations, Optimality };
enum class Format { Csv, Json };

std::optional<Command> parse_command(std::string_view name);
const char* command_name(Command c);

/// Bad config file: message carries the line and JSON pointer of the offending value.
class ConfigError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

struct VerifyParams {
  int n_max = 12;
  int max_pairs = 12;
  int sequences = 3;
  int alpha_count = 64;
  int l_max = 8;
  int m_max = 8;
};

struct CorrelationParams {
  int n_max = 8;
  int max_pairs = 3;
  int sequences = 1;
  bool decay = true;
  std::vector<int> q_values{3, 4, 5, 6, 7, 8, 9, 10};
};

struct ClarkParams {
  std::vector<cplx> alphas;  // empty: alpha_count equispaced values
  int alpha_count = 8;
};

struct BlocksParams {
  std::optional<double> phi;  // default: the sequence's own envelope
  bool variance_ratio = false;
};

struct RunConfig {
  int schema_version = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  Format format = Format::Csv;
  TestProduct inner{"zeros[0,0.5]", BlaschkeProduct::make(1.0, {0.0, 0.5})};
  std::vector<TestProduct> products;  // empty: built-in suites
  std::optional<CoefficientSequence> sequence;
  std::vector<std::int64_t> N;  // empty: per-command default
  SumMode mode = SumMode::Partial;
  SamplingSpec sampling;
  std::int64_t tail_cutoff = 0;
  double tail_rel_tol = 1e-6;
  GaussianThresholds thresholds;
  VerifyParams verify;
  CorrelationParams correlations;
  ClarkParams clark;
  BlocksParams blocks;
  std::optional<std::size_t> quadrature_max_points;

  /// Compact JSON of the file with keys sorted; the digest is taken over it.
  std::string canonical;
  /// JSON pointer → 1-based line of the value, for later error messages.
  std::map<std::string, int> lines;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> grid;
  std::optional<std::size_t> mc_samples;
  std::optional<int> threads;
  std::optional<Format> format;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
void apply_overrides(RunConfig& config, const Overrides& o);
/// Command-specific preconditions, checked before any work starts.
void validate_for(const RunConfig& config, Command c);
/// Fills command defaults (N list, sequence, mode) into a copy.
RunConfig resolved(const RunConfig& config, Command c);
/// Hex SHA-256 of the canonical config text.
std::string config_digest(const RunConfig& config);

}  // namespace iclt::cli
