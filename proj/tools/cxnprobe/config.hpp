#pragma once

#include <cstddef>
#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cxnprobe::cli {

// Thrown for malformed or schema-violating configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Effective run configuration. Precedence: built-in defaults, then the
// config file, then command-line flags.
struct RunConfig {
  std::string experiment;  // "sorting" | "jabberwocky" | "" (inferred from command)
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
  std::string output_dir;

  // stimuli
  std::string stimulus_source = "generate";  // generate | builtin | file
  std::string lexicon;
  std::size_t n_sets = 1000;
  std::size_t per_construction = 5000;
  std::string language;
  std::string stimuli_path;

  // containers
  std::string sentences_container;
  std::string jabberwocky_container;
  std::string corpus_container;

  // standardization
  bool standardize = false;
  std::string stats_path;
  std::string stats_container;
  std::string stats_source_id;

  // analysis options
  std::string linkage = "ward";
  std::string tier = "both";
  std::string incongruent = "mean";

  // report
  std::vector<std::string> summaries;
  std::string baselines;
};

inline constexpr const char* kConfigSchema = "runconfig/1";

RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
nlohmann::ordered_json config_to_json(const RunConfig& c);
std::string config_hash(const RunConfig& c);

}  // namespace cxnprobe::cli
