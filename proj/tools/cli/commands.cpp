#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>

#include "cli/run_config.hpp"
#include "elkbc/closure.hpp"
#include "elkbc/normalizer.hpp"
#include "elkbc/ranking.hpp"
#include "elkbc/reasoner.hpp"
#include "elkbc/sampler.hpp"
#include "elkbc/toy.hpp"
#include "elkbc/trainer.hpp"

namespace elkbc::cli {

namespace fs = std::filesystem;

namespace {

// Failures the user can fix; reported with exit status 1.
class UserError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string config;
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw UserError("cannot write " + p.string());
  out << text;
  if (!out) throw UserError("failed writing " + p.string());
}

void require_input(const fs::path& p, std::string_view what) {
  if (!fs::is_regular_file(p)) throw UserError(std::string(what) + " not found: " + p.string());
}

void require_parent(const fs::path& p) {
  const fs::path parent = p.parent_path().empty() ? fs::path(".") : p.parent_path();
  if (!fs::is_directory(parent)) throw UserError("output directory does not exist: " + parent.string());
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

RunConfig load_config(const Globals& g) {
  if (g.config.empty()) throw UserError("this command needs --config");
  RunConfig c = load_run_config(g.config);
  if (g.seed) {
    c.train.seed = *g.seed;
    c.train.sampler.seed = *g.seed;
  }
  if (g.threads) c.threads = *g.threads;
  return c;
}

// The training theory with the validation and test axioms read into its
// signature, so ids agree between train and eval.
struct Data {
  Theory theory;
  std::vector<NormalizedAxiom> valid;
  std::vector<NormalizedAxiom> test;
};

Data load_data(const RunConfig& c) {
  if (c.theory.empty()) throw UserError("config needs data.theory");
  Data d{load_normalized_file(c.theory.string()), {}, {}};
  if (!c.valid.empty()) d.valid = load_axioms_into(c.valid.string(), d.theory.signature());
  if (!c.test.empty()) d.test = load_axioms_into(c.test.string(), d.theory.signature());
  return d;
}

std::vector<ConceptId> named_concepts(const Signature& sig) {
  std::vector<ConceptId> out;
  for (ConceptId c = 2; c < sig.concept_count(); ++c) out.push_back(c);
  return out;
}

ClosureOptions oracle_options(const RunConfig& c) {
  ClosureOptions o;
  o.cap = c.closure_cap;
  o.threads = c.threads;
  return o;
}

// ---------------------------------------------------------------- normalize

int cmd_normalize(const fs::path& in, const fs::path& out, fs::path ledger, std::ostream& os) {
  require_input(in, "input file");
  require_parent(out);
  if (ledger.empty()) ledger = fs::path(out.string() + ".fresh.tsv");
  require_parent(ledger);
  std::vector<InputAxiom> input;
  try {
    input = in.extension() == ".nf" ? to_input_axioms(load_normalized_file(in.string())) : load_input_file(in.string());
  } catch (const ParseError& e) {
    throw UserError(in.string() + ": " + e.what());
  }
  const auto result = normalize(input);
  save_normalized_file(result.theory, out.string());
  write_file(ledger, format_ledger(result.ledger));
  os << "normalized " << input.size() << " axioms into " << result.theory.size() << " ("
     << result.ledger.size() << " fresh names) -> " << out.string() << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- classify

int cmd_classify(const fs::path& in, const fs::path& out, std::ostream& os) {
  require_input(in, "theory");
  const Theory t = load_normalized_file(in.string());
  const auto cls = classify(t);
  const std::string text = format_hierarchy(cls.subsumption, t.signature());
  if (out.empty()) {
    os << text;
  } else {
    require_parent(out);
    write_file(out, text);
    os << "wrote hierarchy of " << t.signature().concept_count() << " concepts -> " << out.string() << "\n";
  }
  return kExitOk;
}

// ------------------------------------------------------------------ closure

int cmd_closure(const fs::path& in, bool materialize, const fs::path& out_dir, const std::vector<std::string>& queries,
                double cap, unsigned threads, std::ostream& os, std::ostream& es) {
  require_input(in, "theory");
  if (!materialize && queries.empty()) throw UserError("closure needs --materialize or --query");
  if (materialize && out_dir.empty()) throw UserError("--materialize needs --out DIR");
  if (materialize && !fs::is_directory(out_dir)) throw UserError("output directory does not exist: " + out_dir.string());

  const Theory t = load_normalized_file(in.string());
  ClosureOptions opts;
  opts.mode = materialize ? ClosureMode::kMaterialized : ClosureMode::kOracle;
  opts.cap = cap;
  opts.threads = threads;
  std::optional<DeductiveClosure> dc;
  try {
    dc.emplace(DeductiveClosure::compute(t, opts));
  } catch (const MaterializationCapError& e) {
    es << "error: " << e.what() << "\n"
       << "hint: answer individual entailment questions without materializing, e.g.\n"
       << "  elkbc closure " << in.string() << " --query \"GCI0 A B\"\n";
    return kExitResource;
  }

  if (materialize) {
    for (Variant v : kGciVariants) {
      std::string text;
      for (const auto& ax : dc->axioms(v)) text += format_axiom(ax, t.signature()) + "\n";
      write_file(out_dir / (lower(variant_tag(v)) + ".nf"), text);
      os << variant_tag(v) << '\t' << dc->count(v) << "\n";
    }
  }
  for (const auto& q : queries) {
    const auto ax = parse_axiom_line_known(q, t.signature());
    os << (dc->entails(ax) ? "true" : "false") << "\n";
  }
  return kExitOk;
}

// -------------------------------------------------------------------- train

std::string log_json(const TrainLog& log) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : log.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"monitored_loss", e.monitored_loss},
                      {"learning_rate", e.learning_rate},
                      {"negatives", e.negatives},
                      {"skipped_negatives", e.skipped_negatives}});
  }
  const nlohmann::json j = {{"best_epoch", log.best_epoch},
                            {"best_loss", log.best_loss},
                            {"early_stopped", log.early_stopped},
                            {"monitored_validation", log.monitored_validation},
                            {"epochs", epochs}};
  return j.dump(2) + "\n";
}

int cmd_train(const Globals& g, std::ostream& os) {
  RunConfig c = load_config(g);
  if (c.checkpoint.empty()) throw UserError("config needs out.checkpoint");
  const Data d = load_data(c);
  if (c.sampler_pool == PoolChoice::kNamed) c.train.sampler.pool = named_concepts(d.theory.signature());

  std::optional<DeductiveClosure> dc;
  if (c.train.sampler.mode != SamplerMode::kRandom) dc.emplace(DeductiveClosure::compute(d.theory, oracle_options(c)));
  const auto result = train(d.theory, c.train, dc ? &*dc : nullptr, d.valid);

  CheckpointHeader h;
  h.model = c.train.model;
  h.hyper = c.train.hyper;
  h.concepts = d.theory.signature().concept_count();
  h.roles = d.theory.signature().role_count();
  h.signature_hash = signature_hash(d.theory.signature());
  h.config_json = c.to_json();
  save_checkpoint(c.checkpoint.string(), result.model, h);
  if (!c.log.empty()) write_file(c.log, log_json(result.log));

  const auto& last = result.log.epochs.back();
  os << model_tag(c.train.model) << ": " << result.log.epochs.size() << " epochs, final loss " << last.train_loss
     << ", best monitored loss " << result.log.best_loss << " at epoch " << result.log.best_epoch
     << (result.log.early_stopped ? " (early stop)" : "") << "\n"
     << "checkpoint -> " << c.checkpoint.string() << "\n";
  return kExitOk;
}

// --------------------------------------------------------------------- eval

int cmd_eval(const Globals& g, std::ostream& os) {
  const RunConfig c = load_config(g);
  if (c.checkpoint.empty()) throw UserError("config needs out.checkpoint");
  if (!fs::is_regular_file(c.checkpoint)) {
    throw UserError("checkpoint not found: " + c.checkpoint.string() + " (run `elkbc train` with this config first)");
  }
  if (c.test.empty()) throw UserError("config needs data.test");
  const auto ckpt = load_checkpoint(c.checkpoint.string());
  const Data d = load_data(c);
  if (ckpt.header.signature_hash != signature_hash(d.theory.signature())) {
    throw UserError("checkpoint was trained on a different signature than " + c.theory.string());
  }

  RankingTask task;
  task.test = d.test;
  if (c.drop_entailed_tests) {
    const auto train_dc = DeductiveClosure::compute(d.theory, oracle_options(c));
    auto kept = filter_test_set(d.test, train_dc);
    os << "dropped " << kept.removed << " test axioms entailed by the training theory\n";
    task.test = std::move(kept.kept);
  }
  if (c.eval_pool == PoolChoice::kNamed) task.pool = named_concepts(d.theory.signature());
  if (c.filter_train) task.train = d.theory.axioms();
  std::optional<DeductiveClosure> dc;
  if (c.filter_closure) {
    Theory both = d.theory;
    for (const auto& ax : d.test) both.add(ax);
    dc.emplace(DeductiveClosure::compute(both, oracle_options(c)));
    task.closures.push_back(&*dc);
  }
  task.micro = c.micro;
  task.signature_concepts = d.theory.signature().concept_count();
  task.threads = c.threads;

  const auto report = score_and_rank(ckpt.model, task);
  const std::string json = report_json(report, c.task);
  if (c.report.empty()) {
    os << json;
  } else {
    write_file(c.report, json);
    os << "H@10 " << report.raw.hits10 << ", filtered H@10 " << report.filtered.hits10 << " over "
       << report.ranks.size() << " test axioms -> " << c.report.string() << "\n";
  }
  if (!c.ranks.empty()) write_file(c.ranks, ranks_csv(report, d.theory.signature()));
  return kExitOk;
}

// ------------------------------------------------------------- sample-check

int cmd_sample_check(const fs::path& in, const std::string& mode_tag, double p, std::size_t count,
                     const std::string& variant_filter, std::uint64_t seed, unsigned threads, std::ostream& os) {
  require_input(in, "theory");
  const auto mode = parse_sampler_mode(mode_tag);
  if (!mode) throw UserError("unknown sampler mode '" + mode_tag + "'");
  const Theory t = load_normalized_file(in.string());

  std::vector<NormalizedAxiom> axioms;
  for (const auto& ax : t.axioms()) {
    if (variant_filter.empty() || variant_tag(ax.variant) == variant_filter) axioms.push_back(ax);
  }
  if (!variant_filter.empty() && !parse_variant_tag(variant_filter)) {
    throw UserError("unknown axiom variant '" + variant_filter + "'");
  }

  ClosureOptions o;
  o.threads = threads;
  const auto dc = DeductiveClosure::compute(t, o);
  SamplerConfig sc;
  sc.mode = *mode;
  sc.biased_p = p;
  sc.seed = seed;
  sc.validate();
  const NegativeSampler sampler(sc, t.signature().concept_count(), &dc);
  const auto batch = sample_batch(axioms, count, sampler, seed);

  std::map<std::string, std::pair<std::size_t, std::size_t>> per_variant;  // (samples, entailed)
  std::size_t entailed = 0;
  for (const auto& neg : batch.negatives) {
    const bool e = dc.entails(neg);
    entailed += e;
    auto& slot = per_variant[std::string(variant_tag(neg.variant))];
    ++slot.first;
    slot.second += e;
  }
  nlohmann::json by_variant = nlohmann::json::object();
  for (const auto& [tag, n] : per_variant) by_variant[tag] = {{"samples", n.first}, {"entailed", n.second}};
  const auto n = batch.negatives.size();
  const nlohmann::json j = {{"mode", mode_tag},
                            {"biased_p", p},
                            {"samples", n},
                            {"entailed", entailed},
                            {"entailed_fraction", n == 0 ? 0.0 : static_cast<double>(entailed) / n},
                            {"skipped", batch.skipped},
                            {"per_variant", by_variant}};
  os << j.dump(2) << "\n";
  return kExitOk;
}

// ----------------------------------------------------------------- toy-demo

int cmd_toy_demo(const std::string& model_tag_arg, fs::path out_dir, std::uint64_t seed, std::ostream& os) {
  std::vector<ModelKind> kinds;
  if (lower(model_tag_arg) == "all") {
    kinds = {ModelKind::kElem, ModelKind::kElbe, ModelKind::kBox2El};
  } else if (const auto k = parse_model_kind(model_tag_arg)) {
    kinds = {*k};
  } else {
    throw UserError("unknown model '" + model_tag_arg + "' (ELEM, ELBE, BOX2EL or all)");
  }
  if (out_dir.empty()) {
    const char* cache = std::getenv(kCacheDirEnv);
    out_dir = fs::path(cache && *cache ? cache : ".") / "toy-demo";
  }
  fs::create_directories(out_dir);

  const Theory toy = toy_protein_theory();
  nlohmann::json report = nlohmann::json::object();
  for (ModelKind kind : kinds) {
    const std::string tag(model_tag(kind));
    std::string assertions = "regime,check,lhs,rhs,pass\n";
    for (const auto& regime : toy_regimes()) {
      const auto run = run_toy_regime(kind, regime, seed);
      const std::string stem = tag + "_" + regime.name();
      write_file(out_dir / (stem + "_concepts.csv"), concepts_csv(run.model, toy.signature()));
      write_file(out_dir / (stem + "_roles.csv"), roles_csv(run.model, toy.signature()));
      nlohmann::json checks = nlohmann::json::array();
      for (const auto& ch : run.checks) {
        assertions += regime.name() + ",\"" + ch.name + "\"," + std::to_string(ch.lhs) + "," + std::to_string(ch.rhs) +
                      "," + (ch.pass ? "true" : "false") + "\n";
        checks.push_back({{"check", ch.name}, {"lhs", ch.lhs}, {"rhs", ch.rhs}, {"pass", ch.pass}});
      }
      report[tag][regime.name()] = {{"epochs", run.log.epochs.size()},
                                    {"positive_loss", run.final_positive_loss},
                                    {"all_pass", all_pass(run.checks)},
                                    {"checks", checks}};
      os << tag << ' ' << regime.name() << ": " << (all_pass(run.checks) ? "all assertions pass" : "assertions FAIL")
         << " (positive loss " << run.final_positive_loss << ")\n";
    }
    write_file(out_dir / (tag + "_assertions.csv"), assertions);
  }
  write_file(out_dir / "report.json", report.dump(2) + "\n");
  os << "wrote toy-demo output to " << out_dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric EL++ embeddings for knowledge base completion", "elkbc"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed (overrides the config)");
  app.add_option("--threads", g.threads, "Worker threads for closure and evaluation")->check(CLI::PositiveNumber);
  app.add_option("--config", g.config, "Run configuration (key = value lines or JSON)");

  fs::path in, out_path, ledger, out_dir;
  bool materialize = false;
  std::vector<std::string> queries;
  double cap = ClosureOptions{}.cap;
  std::string mode = "filtered", variant, model = "ELEM";
  double p = 0.5;
  std::size_t count = 1;

  auto* normalize_cmd = app.add_subcommand("normalize", "Normalize an .elpp ontology into .nf axioms");
  normalize_cmd->add_option("input", in, "Input .elpp (or .nf) file")->required();
  normalize_cmd->add_option("-o,--out", out_path, "Output .nf file")->required();
  normalize_cmd->add_option("--ledger", ledger, "Fresh-name ledger (default: <out>.fresh.tsv)");

  auto* classify_cmd = app.add_subcommand("classify", "Print the concept hierarchy of a .nf theory");
  classify_cmd->add_option("theory", in, "Normalized theory")->required();
  classify_cmd->add_option("-o,--out", out_path, "Write the hierarchy here instead of stdout");

  auto* closure_cmd = app.add_subcommand("closure", "Deductive closure: materialize it or answer queries");
  closure_cmd->add_option("theory", in, "Normalized theory")->required();
  closure_cmd->add_flag("--materialize", materialize, "Write one .nf file per GCI form into --out");
  closure_cmd->add_option("--out", out_dir, "Output directory for --materialize");
  closure_cmd->add_option("--query", queries, "Axiom line to test, e.g. \"GCI0 A B\" (repeatable)");
  closure_cmd->add_option("--cap", cap, "Refuse to materialize when |C|^3 exceeds this");

  auto* train_cmd = app.add_subcommand("train", "Train a model from --config");
  auto* eval_cmd = app.add_subcommand("eval", "Rank held-out axioms with a trained checkpoint");

  auto* sample_cmd = app.add_subcommand("sample-check", "Report how many sampled negatives are entailed");
  sample_cmd->add_option("theory", in, "Normalized theory")->required();
  sample_cmd->add_option("--mode", mode, "random, filtered or biased");
  sample_cmd->add_option("--p", p, "Entailed fraction for biased sampling");
  sample_cmd->add_option("--count", count, "Corruptions per axiom");
  sample_cmd->add_option("--variant", variant, "Only corrupt axioms of this form, e.g. GCI1");

  auto* toy_cmd = app.add_subcommand("toy-demo", "Train the two-function toy ontology in 2D and check its geometry");
  toy_cmd->add_option("--model", model, "ELEM, ELBE, BOX2EL or all");
  toy_cmd->add_option("--out", out_dir, std::string("Output directory (default: $") + kCacheDirEnv + "/toy-demo)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUser;
  }

  const std::uint64_t seed = g.seed.value_or(42);
  const unsigned threads = g.threads.value_or(1);
  try {
    if (*normalize_cmd) return cmd_normalize(in, out_path, ledger, out);
    if (*classify_cmd) return cmd_classify(in, out_path, out);
    if (*closure_cmd) return cmd_closure(in, materialize, out_dir, queries, cap, threads, out, err);
    if (*train_cmd) return cmd_train(g, out);
    if (*eval_cmd) return cmd_eval(g, out);
    if (*sample_cmd) return cmd_sample_check(in, mode, p, count, variant, seed, threads, out);
    if (*toy_cmd) return cmd_toy_demo(model, out_dir, seed, out);
  } catch (const MaterializationCapError& e) {
    err << "error: " << e.what() << "\n";
    return kExitResource;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitResource;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUser;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUser;
  }
  return kExitUser;
}

}  // namespace elkbc::cli
