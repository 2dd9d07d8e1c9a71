#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "cli/run_config.hpp"

namespace elkbc::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kData = ELKBC_TEST_DATA_DIR;

TEST(RunConfig, DefaultsMatchTheTrainer) {
  const auto c = parse_run_config("");
  EXPECT_EQ(c.train.model, ModelKind::kElem);
  EXPECT_EQ(c.train.hyper.dim, 50u);
  EXPECT_EQ(c.train.epochs, 2000u);
  EXPECT_EQ(c.threads, 1u);
  EXPECT_TRUE(c.filter_closure);
}

TEST(RunConfig, ParsesKeyValueLines) {
  const auto c = parse_run_config(
      "# comment\n"
      "model = BOX2EL\n"
      "dim = 8   # trailing comment\n"
      "gamma = -0.5\n"
      "negatives = gci2-only\n"
      "sampler.mode = biased\n"
      "sampler.biased_p = 0.25\n"
      "eval.micro = signature\n"
      "eval.task = \"protein function\"\n"
      "threads = 3\n");
  EXPECT_EQ(c.train.model, ModelKind::kBox2El);
  EXPECT_EQ(c.train.hyper.dim, 8u);
  EXPECT_DOUBLE_EQ(c.train.hyper.gamma, -0.5);
  EXPECT_EQ(c.train.scope, NegativeScope::kGci2Only);
  EXPECT_EQ(c.train.sampler.mode, SamplerMode::kBiased);
  EXPECT_DOUBLE_EQ(c.train.sampler.biased_p, 0.25);
  EXPECT_EQ(c.micro, MicroAverage::kSignature);
  EXPECT_EQ(c.task, "protein function");
  EXPECT_EQ(c.threads, 3u);
}

TEST(RunConfig, ModelDefaultsNeverOverrideExplicitKeys) {
  const auto c = parse_run_config("dim = 7\nmodel = ELBE\n");
  EXPECT_EQ(c.train.model, ModelKind::kElbe);
  EXPECT_EQ(c.train.hyper.dim, 7u);
  EXPECT_DOUBLE_EQ(c.train.hyper.epsilon, TrainConfig::defaults(ModelKind::kElbe).hyper.epsilon);
}

TEST(RunConfig, JsonIsFlattenedWithDots) {
  const auto flat = parse_run_config("model = ELBE\nepochs = 5\nsampler.mode = filtered\nsampler.seed = 9\n");
  const auto json = parse_run_config(R"({"model": "ELBE", "epochs": 5, "sampler": {"mode": "filtered", "seed": 9}})");
  EXPECT_EQ(json.to_json(), flat.to_json());
}

TEST(RunConfig, SamplerSeedFollowsTheSeedUnlessSet) {
  EXPECT_EQ(parse_run_config("seed = 5").train.sampler.seed, 5u);
  EXPECT_EQ(parse_run_config("seed = 5\nsampler.seed = 6").train.sampler.seed, 6u);
}

TEST(RunConfig, RoundTripsThroughJson) {
  const auto c = parse_run_config("model = BOX2EL\ndim = 3\nlearning_rate = 0.123456789\ndata.theory = appendix_e.nf\n"
                                  "eval.filter_train = false\n",
                                  kData);
  EXPECT_EQ(c.theory, kData / "appendix_e.nf");
  EXPECT_EQ(parse_run_config(c.to_json()).to_json(), c.to_json());
}

TEST(RunConfig, EveryKeyIsDocumentedOnce) {
  const auto& keys = run_config_keys();
  std::set<std::string> unique(keys.begin(), keys.end());
  EXPECT_EQ(unique.size(), keys.size());
  EXPECT_TRUE(unique.contains("sampler.biased_p"));
  EXPECT_TRUE(unique.contains("out.checkpoint"));
}

TEST(RunConfig, RejectsUnknownAndDuplicateKeys) {
  EXPECT_THROW(parse_run_config("dimension = 4"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"sampler": {"frob": 1}})"), ConfigError);
  EXPECT_THROW(parse_run_config("dim = 4\ndim = 5"), ConfigError);
  EXPECT_THROW(parse_run_config("just a line"), ConfigError);
  EXPECT_THROW(parse_run_config("{not json"), ConfigError);
}

TEST(RunConfig, RejectsBadValues) {
  EXPECT_THROW(parse_run_config("model = TransE"), ConfigError);
  EXPECT_THROW(parse_run_config("dim = four"), ConfigError);
  EXPECT_THROW(parse_run_config("dim = -3"), ConfigError);
  EXPECT_THROW(parse_run_config("gamma = 0.1x"), ConfigError);
  EXPECT_THROW(parse_run_config("negatives = some"), ConfigError);
  EXPECT_THROW(parse_run_config("eval.filter_train = maybe"), ConfigError);
  EXPECT_THROW(parse_run_config("threads = 0"), ConfigError);
  EXPECT_THROW(parse_run_config("epochs = 0"), ConfigError);
  EXPECT_THROW(parse_run_config("sampler.biased_p = 1.5"), ConfigError);
}

TEST(RunConfig, PathsMustExistAtParseTime) {
  EXPECT_NO_THROW(parse_run_config("data.theory = appendix_e.nf", kData));
  EXPECT_THROW(parse_run_config("data.theory = missing.nf", kData), ConfigError);
  EXPECT_THROW(parse_run_config("data.test = missing.nf", kData), ConfigError);
  EXPECT_NO_THROW(parse_run_config("out.checkpoint = new.ckpt", kData));
  EXPECT_THROW(parse_run_config("out.report = no/such/dir/r.json", kData), ConfigError);
}

TEST(RunConfig, LoadsFilesRelativeToTheirDirectory) {
  const auto c = load_run_config(kData / "appendix_e.cfg");
  EXPECT_EQ(c.theory, kData / "appendix_e.nf");
  EXPECT_EQ(c.test, kData / "appendix_e_test.nf");
  EXPECT_EQ(c.train.sampler.mode, SamplerMode::kFiltered);
  EXPECT_THROW(load_run_config(kData / "nope.cfg"), ConfigError);
}

}  // namespace
}  // namespace elkbc::cli
