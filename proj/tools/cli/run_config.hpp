#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "elkbc/ranking.hpp"
#include "elkbc/trainer.hpp"

namespace elkbc::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Which concepts may replace a slot, for negatives or ranking candidates.
enum class PoolChoice { kAll, kNamed };  // every concept except ⊥, or also without ⊤

struct RunConfig {
  TrainConfig train;

  std::filesystem::path theory;  // training theory (.nf), required by train and eval
  std::filesystem::path valid;   // optional axiom lines sharing the theory's names
  std::filesystem::path test;

  std::filesystem::path checkpoint;
  std::filesystem::path log;
  std::filesystem::path report;
  std::filesystem::path ranks;

  PoolChoice sampler_pool = PoolChoice::kAll;
  PoolChoice eval_pool = PoolChoice::kNamed;
  MicroAverage micro = MicroAverage::kTestSubjects;
  bool filter_train = true;      // drop competitors that are training axioms
  bool filter_closure = true;    // and those entailed by train ∪ test
  bool drop_entailed_tests = false;  // remove test axioms the training closure entails
  std::string task = "kbc";

  double closure_cap = 1e8;
  unsigned threads = 1;

  /// Flat JSON object with every key, in the syntax the parser accepts.
  std::string to_json() const;
};

/// Every accepted key, in documentation order.
const std::vector<std::string>& run_config_keys();

/// Parses `key = value` lines (`#` starts a comment) or, when the text starts
/// with `{`, a JSON object whose nested objects are flattened with dots.
/// `model` is applied first so its defaults never override explicit keys.
/// Relative paths resolve against `base`. Input paths must exist and output
/// paths must have an existing parent directory. Throws ConfigError.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base = {});
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace elkbc::cli
