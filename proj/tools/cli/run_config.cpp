#include "cli/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

namespace elkbc::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what + ", got '" + value + "'");
}

std::size_t to_size(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || v.empty()) bad_value(key, v, "expected a non-negative integer");
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    bad_value(key, v, "expected a number");
  }
  if (used != v.size()) bad_value(key, v, "expected a number");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "expected true or false");
}

PoolChoice to_pool(const std::string& key, const std::string& v) {
  if (v == "all") return PoolChoice::kAll;
  if (v == "named") return PoolChoice::kNamed;
  bad_value(key, v, "expected 'all' or 'named'");
}

std::string_view pool_tag(PoolChoice p) { return p == PoolChoice::kAll ? "all" : "named"; }

enum class PathKind { kInput, kOutput };

struct PathKey {
  fs::path RunConfig::*field;
  PathKind kind;
};

const std::map<std::string, PathKey>& path_keys() {
  static const std::map<std::string, PathKey> keys = {
      {"data.theory", {&RunConfig::theory, PathKind::kInput}},
      {"data.valid", {&RunConfig::valid, PathKind::kInput}},
      {"data.test", {&RunConfig::test, PathKind::kInput}},
      {"out.checkpoint", {&RunConfig::checkpoint, PathKind::kOutput}},
      {"out.log", {&RunConfig::log, PathKind::kOutput}},
      {"out.report", {&RunConfig::report, PathKind::kOutput}},
      {"out.ranks", {&RunConfig::ranks, PathKind::kOutput}},
  };
  return keys;
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> s = [] {
    std::map<std::string, Setter> m;
    m["dim"] = [](RunConfig& c, auto& k, auto& v) { c.train.hyper.dim = to_size(k, v); };
    m["gamma"] = [](RunConfig& c, auto& k, auto& v) { c.train.hyper.gamma = to_double(k, v); };
    m["epsilon"] = [](RunConfig& c, auto& k, auto& v) { c.train.hyper.epsilon = to_double(k, v); };
    m["delta"] = [](RunConfig& c, auto& k, auto& v) { c.train.hyper.delta = to_double(k, v); };
    m["lambda"] = [](RunConfig& c, auto& k, auto& v) { c.train.hyper.lambda = to_double(k, v); };
    m["learning_rate"] = [](RunConfig& c, auto& k, auto& v) { c.train.learning_rate = to_double(k, v); };
    m["epochs"] = [](RunConfig& c, auto& k, auto& v) { c.train.epochs = to_size(k, v); };
    m["batch_size"] = [](RunConfig& c, auto& k, auto& v) { c.train.batch_size = to_size(k, v); };
    m["seed"] = [](RunConfig& c, auto& k, auto& v) { c.train.seed = to_size(k, v); };
    m["negatives"] = [](RunConfig& c, auto& k, auto& v) {
      const auto s = parse_negative_scope(v);
      if (!s) bad_value(k, v, "expected 'gci2-only' or 'all-forms'");
      c.train.scope = *s;
    };
    m["negatives_per_positive"] = [](RunConfig& c, auto& k, auto& v) {
      c.train.negatives_per_positive = to_size(k, v);
    };
    m["patience"] = [](RunConfig& c, auto& k, auto& v) { c.train.patience = to_size(k, v); };
    m["early_stop"] = [](RunConfig& c, auto& k, auto& v) { c.train.early_stop = to_size(k, v); };
    m["lr_factor"] = [](RunConfig& c, auto& k, auto& v) { c.train.lr_factor = to_double(k, v); };
    m["lr_floor"] = [](RunConfig& c, auto& k, auto& v) { c.train.lr_floor = to_double(k, v); };
    m["improvement"] = [](RunConfig& c, auto& k, auto& v) { c.train.improvement = to_double(k, v); };
    m["sampler.mode"] = [](RunConfig& c, auto& k, auto& v) {
      const auto s = parse_sampler_mode(v);
      if (!s) bad_value(k, v, "expected 'random', 'filtered' or 'biased'");
      c.train.sampler.mode = *s;
    };
    m["sampler.biased_p"] = [](RunConfig& c, auto& k, auto& v) { c.train.sampler.biased_p = to_double(k, v); };
    m["sampler.retry_limit"] = [](RunConfig& c, auto& k, auto& v) {
      c.train.sampler.retry_limit = to_size(k, v);
    };
    m["sampler.seed"] = [](RunConfig& c, auto& k, auto& v) { c.train.sampler.seed = to_size(k, v); };
    m["sampler.pool"] = [](RunConfig& c, auto& k, auto& v) { c.sampler_pool = to_pool(k, v); };
    m["eval.pool"] = [](RunConfig& c, auto& k, auto& v) { c.eval_pool = to_pool(k, v); };
    m["eval.micro"] = [](RunConfig& c, auto& k, auto& v) {
      const auto s = parse_micro_average(v);
      if (!s) bad_value(k, v, "expected 'test-subjects' or 'signature'");
      c.micro = *s;
    };
    m["eval.filter_train"] = [](RunConfig& c, auto& k, auto& v) { c.filter_train = to_bool(k, v); };
    m["eval.filter_closure"] = [](RunConfig& c, auto& k, auto& v) { c.filter_closure = to_bool(k, v); };
    m["eval.drop_entailed_tests"] = [](RunConfig& c, auto& k, auto& v) { c.drop_entailed_tests = to_bool(k, v); };
    m["eval.task"] = [](RunConfig& c, auto&, auto& v) { c.task = v; };
    m["closure.cap"] = [](RunConfig& c, auto& k, auto& v) { c.closure_cap = to_double(k, v); };
    m["threads"] = [](RunConfig& c, auto& k, auto& v) {
      const auto n = to_size(k, v);
      if (n == 0) bad_value(k, v, "expected at least 1");
      c.threads = static_cast<unsigned>(n);
    };
    return m;
  }();
  return s;
}

using Entries = std::vector<std::pair<std::string, std::string>>;

Entries parse_flat(std::string_view text) {
  Entries out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    out.emplace_back(trim(t.substr(0, eq)), unquote(trim(t.substr(eq + 1))));
  }
  return out;
}

void flatten(const nlohmann::json& j, const std::string& prefix, Entries& out) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object()) {
      flatten(v, key, out);
    } else if (v.is_string()) {
      out.emplace_back(key, v.get<std::string>());
    } else if (v.is_boolean()) {
      out.emplace_back(key, v.get<bool>() ? "true" : "false");
    } else if (v.is_number_integer() || v.is_number_unsigned()) {
      out.emplace_back(key, v.dump());
    } else if (v.is_number_float()) {
      std::ostringstream s;
      s.precision(17);
      s << v.get<double>();
      out.emplace_back(key, s.str());
    } else {
      throw ConfigError("config key '" + key + "': unsupported JSON value " + v.dump());
    }
  }
}

Entries parse_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("JSON config must be an object");
  Entries out;
  flatten(j, "", out);
  return out;
}

void check_path(const std::string& key, const fs::path& p, PathKind kind) {
  if (p.empty()) return;
  if (kind == PathKind::kInput) {
    if (!fs::is_regular_file(p)) throw ConfigError("config key '" + key + "': no such file " + p.string());
    return;
  }
  const fs::path parent = p.parent_path().empty() ? fs::path(".") : p.parent_path();
  if (!fs::is_directory(parent)) {
    throw ConfigError("config key '" + key + "': directory " + parent.string() + " does not exist");
  }
}

}  // namespace

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k{"model"};
    for (const auto& [name, key] : path_keys()) k.push_back(name);
    for (const auto& [name, setter] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

RunConfig parse_run_config(std::string_view text, const fs::path& base) {
  const auto first = text.find_first_not_of(" \t\r\n");
  const Entries entries = first != std::string_view::npos && text[first] == '{' ? parse_json(text) : parse_flat(text);

  RunConfig c;
  std::map<std::string, std::string> seen;
  for (const auto& [k, v] : entries) {
    if (k != "model" && !path_keys().contains(k) && !setters().contains(k)) {
      throw ConfigError("unknown config key '" + k + "'");
    }
    if (!seen.emplace(k, v).second) throw ConfigError("config key '" + k + "' given twice");
  }

  if (const auto it = seen.find("model"); it != seen.end()) {
    const auto kind = parse_model_kind(it->second);
    if (!kind) bad_value("model", it->second, "expected ELEM, ELBE or BOX2EL");
    c.train = TrainConfig::defaults(*kind);
  }
  for (const auto& [k, v] : seen) {
    if (k == "model") continue;
    if (const auto p = path_keys().find(k); p != path_keys().end()) {
      if (!v.empty()) c.*(p->second.field) = fs::path(v).is_absolute() ? fs::path(v) : base / v;
      check_path(k, c.*(p->second.field), p->second.kind);
    } else {
      setters().at(k)(c, k, v);
    }
  }
  if (!seen.contains("sampler.seed")) c.train.sampler.seed = c.train.seed;

  try {
    c.train.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid training configuration: ") + e.what());
  }
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path.parent_path());
}

std::string RunConfig::to_json() const {
  const TrainConfig& t = train;
  nlohmann::json j = {
      {"model", std::string(model_tag(t.model))},
      {"dim", t.hyper.dim},
      {"gamma", t.hyper.gamma},
      {"epsilon", t.hyper.epsilon},
      {"delta", t.hyper.delta},
      {"lambda", t.hyper.lambda},
      {"learning_rate", t.learning_rate},
      {"epochs", t.epochs},
      {"batch_size", t.batch_size},
      {"seed", t.seed},
      {"negatives", std::string(negative_scope_tag(t.scope))},
      {"negatives_per_positive", t.negatives_per_positive},
      {"patience", t.patience},
      {"early_stop", t.early_stop},
      {"lr_factor", t.lr_factor},
      {"lr_floor", t.lr_floor},
      {"improvement", t.improvement},
      {"sampler.mode", std::string(sampler_mode_tag(t.sampler.mode))},
      {"sampler.biased_p", t.sampler.biased_p},
      {"sampler.retry_limit", t.sampler.retry_limit},
      {"sampler.seed", t.sampler.seed},
      {"sampler.pool", std::string(pool_tag(sampler_pool))},
      {"eval.pool", std::string(pool_tag(eval_pool))},
      {"eval.micro", std::string(micro_average_tag(micro))},
      {"eval.filter_train", filter_train},
      {"eval.filter_closure", filter_closure},
      {"eval.drop_entailed_tests", drop_entailed_tests},
      {"eval.task", task},
      {"closure.cap", closure_cap},
      {"threads", threads},
  };
  for (const auto& [name, key] : path_keys()) j[name] = (this->*(key.field)).string();
  return j.dump();
}

}  // namespace elkbc::cli
