#include <gtest/gtest.h>

#include <set>

#include "test_helpers.hpp"

using namespace gwiener;
using namespace gwiener::testing;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  for (const char* kind : {"sensor", "er", "grid"}) {
    GraphSpec g;
    g.kind = kind;
    g.n = 16;
    g.k = 4;
    g.rows = g.cols = 4;
    g.seed = 3;
    cfg.graphs.push_back(g);
  }
  cfg.trials = 6;
  cfg.regularization = 1e-10;
  return cfg;
}

}  // namespace

TEST(Seeds, RolesAndTrialsAreDistinct) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 200; ++t)
    for (SeedRole r : {SeedRole::Signal, SeedRole::Noise, SeedRole::VertexSet})
      EXPECT_TRUE(seen.insert(derive_seed(1, t, r)).second);
  EXPECT_EQ(derive_seed(5, 2, SeedRole::Noise), derive_seed(5, 2, SeedRole::Noise));
  EXPECT_NE(derive_seed(5, 2, SeedRole::Noise), derive_seed(6, 2, SeedRole::Noise));
}

TEST(RunTrial, IdentityMethodIsExact) {
  ExperimentConfig cfg = small_config();
  cfg.methods = {"identity"};
  cfg.noise = {"clean"};
  const TrialResult r = run_trial(cfg, 0);
  ASSERT_EQ(r.cells.size(), 3u * 2u * 2u);
  for (const auto& c : r.cells) {
    ASSERT_FALSE(c.failure.has_value());
    EXPECT_EQ(c.squared_error, 0.0);
    EXPECT_NEAR(c.analytic, 0.0, 1e-12);
  }
}

TEST(RunTrial, Deterministic) {
  const ExperimentContext ctx = prepare_experiment(small_config());
  const TrialResult a = run_trial(ctx, 2), b = run_trial(ctx, 2), c = run_trial(ctx, 3);
  ASSERT_EQ(a.cells.size(), b.cells.size());
  bool differs = false;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    EXPECT_EQ(a.cells[i].squared_error, b.cells[i].squared_error);
    differs |= a.cells[i].squared_error != c.cells[i].squared_error;
  }
  EXPECT_TRUE(differs);
}

TEST(RunTrial, UnconstrainedAnalyticNeverExceedsPredefined) {
  const ExperimentContext ctx = prepare_experiment(small_config());
  for (Eigen::Index t = 0; t < 3; ++t) {
    const TrialResult r = run_trial(ctx, t);
    for (std::size_t i = 0; i < ctx.cells.size(); ++i) {
      if (ctx.cells[i].method != "unc") continue;
      for (std::size_t j = 0; j < ctx.cells.size(); ++j) {
        const CellKey &a = ctx.cells[i], &b = ctx.cells[j];
        if (b.method != "pre" || a.graph != b.graph || a.noise != b.noise || a.band != b.band || a.domain != b.domain)
          continue;
        ASSERT_FALSE(r.cells[i].failure.has_value()) << *r.cells[i].failure;
        ASSERT_FALSE(r.cells[j].failure.has_value()) << *r.cells[j].failure;
        EXPECT_LE(r.cells[i].analytic, r.cells[j].analytic + 1e-10);
      }
    }
  }
}

TEST(RunExperiment, SingleTrialMatchesRunTrial) {
  ExperimentConfig cfg = small_config();
  cfg.trials = 1;
  const MseTable table = run_experiment(cfg);
  const TrialResult r = run_trial(cfg, 0);
  ASSERT_EQ(table.rows.size(), r.cells.size());
  for (std::size_t i = 0; i < r.cells.size(); ++i) {
    EXPECT_EQ(table.rows[i].trials, 1);
    EXPECT_DOUBLE_EQ(table.rows[i].mse_db, 10.0 * std::log10(r.cells[i].squared_error));
    EXPECT_EQ(table.rows[i].std_db, 0.0);
  }
}

TEST(RunExperiment, ThreadCountDoesNotChangeOutput) {
  ExperimentConfig cfg = small_config();
  const std::string one = to_csv(run_experiment(cfg));
  cfg.threads = 4;
  EXPECT_EQ(to_csv(run_experiment(cfg)), one);
  EXPECT_EQ(to_csv(run_experiment(cfg)), one);
}

TEST(RunExperiment, ValidationErrors) {
  ExperimentConfig cfg = small_config();
  cfg.methods.clear();
  EXPECT_THROW(run_experiment(cfg), Error);
  cfg = small_config();
  cfg.ratio = 3;
  try {
    validate(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotDivisible);
  }
  cfg = small_config();
  cfg.methods = {"magic"};
  EXPECT_THROW(validate(cfg), Error);
  cfg = small_config();
  cfg.trials = 0;
  EXPECT_THROW(validate(cfg), Error);
}

TEST(Aggregate, FailedTrialsAreCountedAndAllFailedIsFatal) {
  ExperimentContext ctx;
  ctx.cells.push_back({"g", "noisy", "fullband", "vertex", "pre"});
  std::vector<TrialResult> trials(3);
  for (Eigen::Index t = 0; t < 3; ++t) {
    trials[t].trial = t;
    trials[t].cells.push_back({0.1 * double(t + 1), 0.2, std::nullopt});
  }
  trials[1].cells[0].failure = "pre: singular";
  const MseTable table = aggregate(ctx, trials);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0].trials, 2);
  EXPECT_EQ(table.rows[0].failed, 1);
  EXPECT_NEAR(table.rows[0].mean_mse, 0.2, 1e-15);
  EXPECT_NEAR(table.rows[0].mse_db, 10.0 * std::log10(0.2), 1e-12);
  for (auto& t : trials) t.cells[0].failure = "pre: singular";
  try {
    aggregate(ctx, trials);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllTrialsFailed);
  }
}

TEST(Csv, HeaderOnlyForEmptyTable) {
  EXPECT_EQ(to_csv(MseTable{}), "graph,noise,band,domain,method,mse_db,std_db,trials\n");
}

TEST(Csv, RoundTripAndQuoting) {
  MseTable t;
  MseRow row;
  row.key = {"my,graph", "noisy", "fullband", "vertex", "say \"hi\""};
  row.mse_db = -12.3456789;
  row.std_db = 1.99;
  row.trials = 20;
  t.rows.push_back(row);
  const std::string text = to_csv(t);
  const auto parsed = parse_csv(text);
  ASSERT_EQ(parsed.size(), 2u);
  ASSERT_EQ(parsed[1].size(), 8u);
  EXPECT_EQ(parsed[1][0], "my,graph");
  EXPECT_EQ(parsed[1][4], "say \"hi\"");
  EXPECT_EQ(parsed[1][5], "-12.35");
  EXPECT_EQ(parsed[1][6], "1.99");
  EXPECT_EQ(parsed[1][7], "20");
}

TEST(Csv, FourSignificantDigits) {
  EXPECT_EQ(format_sig4(-16.2349), "-16.23");
  EXPECT_EQ(format_sig4(3.0), "3");
  EXPECT_EQ(format_sig4(0.000123456), "0.0001235");
}

TEST(Config, ParsesKeysAndRejectsErrors) {
  const auto doc = KeyValueDocument::parse(
      "# comment\n graphs = sensor, grid \n n = 16\ntrials=3 # trailing\nmethods = unc,pre\nsigma2 = 0.1\nseed = 9\n");
  const ExperimentConfig cfg = parse_experiment(doc);
  ASSERT_EQ(cfg.graphs.size(), 2u);
  EXPECT_EQ(cfg.graphs[0].kind, "sensor");
  EXPECT_EQ(cfg.graphs[1].rows, 4);
  EXPECT_EQ(cfg.trials, 3);
  EXPECT_EQ(cfg.methods, (std::vector<std::string>{"unc", "pre"}));
  EXPECT_DOUBLE_EQ(cfg.sigma2, 0.1);
  EXPECT_EQ(cfg.base_seed, 9u);
  EXPECT_THROW(KeyValueDocument::parse("n = 1\nn = 2\n"), Error);
  EXPECT_THROW(KeyValueDocument::parse("just words\n"), Error);
  EXPECT_THROW(parse_experiment(KeyValueDocument::parse("bogus = 1\n")), Error);
  EXPECT_THROW(parse_experiment(KeyValueDocument::parse("methods =\n")), Error);
  EXPECT_THROW(parse_experiment(KeyValueDocument::parse("n = 30\n graphs = sensor\n")), Error);
}
