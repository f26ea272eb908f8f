#include "uape/evaluate.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "test_util.hpp"
#include "uape/synthetic.hpp"

namespace uape {
namespace {

// Exhaustive pairwise counting; the independent route for the rank-based
// implementation.
double auc_by_pairs(std::span<const double> scores,
                    std::span<const std::uint8_t> labels) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!labels[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j]) continue;
      ++pairs;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

TEST(RocAuc, PerfectRankingIsOne) {
  const std::vector<double> scores{0.9, 0.8, 0.2, 0.1};
  const std::vector<std::uint8_t> labels{1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(roc_auc(scores, labels), 1.0);
}

TEST(RocAuc, AllTiesIsHalf) {
  const std::vector<double> scores{0.4, 0.4, 0.4, 0.4};
  const std::vector<std::uint8_t> labels{1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(roc_auc(scores, labels), 0.5);
}

TEST(RocAuc, HandDerivedPairCounting) {
  // Pairs (a,b): win, (c,b): loss -> 0.5.
  const std::vector<double> scores{0.9, 0.8, 0.3};
  const std::vector<std::uint8_t> labels{1, 0, 1};
  EXPECT_DOUBLE_EQ(roc_auc(scores, labels), 0.5);
}

TEST(RocAuc, DegenerateLabelsRejected) {
  const std::vector<double> scores{0.1, 0.2};
  EXPECT_THROW(roc_auc(scores, std::vector<std::uint8_t>{1, 1}), DataError);
  EXPECT_THROW(roc_auc(scores, std::vector<std::uint8_t>{0, 0}), DataError);
}

TEST(RocAucProperty, MatchesExhaustivePairCounting) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + uniform_below(rng, 30);
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t k = 0; k < n; ++k) {
      scores[k] = unit_double(rng()) < 0.3 ? 0.5 : unit_double(rng());
      labels[k] = static_cast<std::uint8_t>(uniform_below(rng, 2));
    }
    labels[0] = 1;
    labels[1] = 0;  // never degenerate
    EXPECT_NEAR(roc_auc(scores, labels), auc_by_pairs(scores, labels), 1e-12);
  }
}

TEST(RocAucProperty, MonotoneTransformInvariance) {
  std::mt19937_64 rng(103);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + uniform_below(rng, 20);
    std::vector<double> scores(n), transformed(n);
    std::vector<std::uint8_t> labels(n);
    for (std::size_t k = 0; k < n; ++k) {
      scores[k] = unit_double(rng());
      transformed[k] = std::exp(3.0 * scores[k]) + 1.0;  // strictly increasing
      labels[k] = static_cast<std::uint8_t>(uniform_below(rng, 2));
    }
    labels[0] = 1;
    labels[1] = 0;
    EXPECT_EQ(roc_auc(scores, labels), roc_auc(transformed, labels));
  }
}

TEST(RocAucProperty, LabelFlipAntisymmetry) {
  std::mt19937_64 rng(107);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + uniform_below(rng, 20);
    std::vector<double> scores(n);
    std::vector<std::uint8_t> labels(n), flipped(n);
    for (std::size_t k = 0; k < n; ++k) {
      scores[k] = unit_double(rng()) < 0.25 ? 0.25 : unit_double(rng());
      labels[k] = static_cast<std::uint8_t>(uniform_below(rng, 2));
    }
    labels[0] = 1;
    labels[1] = 0;
    for (std::size_t k = 0; k < n; ++k) flipped[k] = labels[k] ? 0 : 1;
    EXPECT_NEAR(roc_auc(scores, flipped), 1.0 - roc_auc(scores, labels), 1e-12);
  }
}

TEST(ActivationCurve, EmptyTraceIsAllUnknown) {
  CascadeTrace trace;
  trace.node_count = 10;
  trace.topic_count = 1;
  const auto rows = activation_curve(trace, 1, 4);
  ASSERT_EQ(rows.size(), 5u);
  for (const CurveRow& r : rows) {
    EXPECT_EQ(r.unknown, 10u);
    EXPECT_EQ(r.positive + r.neutral + r.negative, 0u);
  }
}

TEST(ActivationCurve, SingleEventBookkeeping) {
  CascadeTrace trace;
  trace.node_count = 10;
  trace.topic_count = 1;
  trace.rounds = 3;
  trace.events.push_back({1, 4, 0, Attitude::Unknown, Attitude::Negative, 2,
                          0.5, 0.25});
  const auto rows = activation_curve(trace, 1, 3);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].negative, 0u);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    EXPECT_EQ(rows[r].negative, 1u);
    EXPECT_EQ(rows[r].unknown, 9u);
  }
}

TEST(ActivationCurveProperty, CountsPartitionTheNodes) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SyntheticResult data =
        generate_synthetic({20, 60, 2, 3, 300 + seed});
    SimulationConfig config;
    config.rounds = 4;
    const RunResult run = run_uape(data.graph, data.attitudes, config);
    const auto rows = activation_curve(run.trace, 2, 4);
    EXPECT_EQ(rows.size(), 2u * 5u);
    for (const CurveRow& r : rows)
      EXPECT_EQ(r.positive + r.neutral + r.negative + r.unknown, 20u);
  }
}

TEST(ActivationCurve, RejectsEventsPastTheHorizon) {
  CascadeTrace trace;
  trace.node_count = 2;
  trace.topic_count = 1;
  trace.events.push_back({7, 0, 0, Attitude::Unknown, Attitude::Neutral, 1,
                          0.0, 0.5});
  EXPECT_THROW(activation_curve(trace, 1, 3), std::invalid_argument);
}

// Five nodes: s -> a -> b, s -> c, d isolated; s seeded positive. The default
// engine run activates s, a, b, c and never reaches d.
struct FiveNodeFixture {
  DirectedGraph graph;
  AttitudeState attitudes;
  SimulationConfig config;

  FiveNodeFixture()
      : graph({"s", "a", "b", "c", "d"}, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 3, 1.0}}),
        attitudes(5, 1) {
    attitudes.set(0, 0, Attitude::Positive);
    config.rounds = 3;
    config.topic = 0;
  }

  GroundTruth truth_from_run() const {
    const RunResult run = run_uape(graph, attitudes, config);
    GroundTruth truth(5, 1);
    for (NodeId v = 0; v < 5; ++v)
      truth.set(v, 0, run.state.attitudes.known(v, 0) ? 1 : 0);
    return truth;
  }
};

TEST(EvaluateRun, SelfConsistencyIsExactlyOne) {
  const FiveNodeFixture fx;
  const GroundTruth truth = fx.truth_from_run();
  EXPECT_EQ(truth.label(4, 0), 0);  // non-degenerate
  EXPECT_EQ(truth.label(2, 0), 1);
  const EvaluationReport report =
      evaluate_run(fx.graph, fx.attitudes, fx.config, truth);
  ASSERT_EQ(report.auc.size(), 1u);
  EXPECT_DOUBLE_EQ(report.auc[0].second, 1.0);
}

TEST(EvaluateRun, SeedOnlyIcScoresNearHalf) {
  const FiveNodeFixture fx;
  const GroundTruth truth = fx.truth_from_run();
  SimulationConfig ic = fx.config;
  ic.model = Model::Ic;
  ic.ic_p = 0.0;
  const EvaluationReport report = evaluate_run(fx.graph, fx.attitudes, ic, truth);
  // Positives: seed (score 1) and three spread nodes (score 0); negative: d
  // (score 0). Pairs: one win + three ties -> (1 + 1.5) / 4.
  ASSERT_EQ(report.auc.size(), 1u);
  EXPECT_DOUBLE_EQ(report.auc[0].second, 0.625);
}

TEST(EvaluateRun, ReportCurveMatchesActivationCurve) {
  const FiveNodeFixture fx;
  const GroundTruth truth = fx.truth_from_run();
  const EvaluationReport report =
      evaluate_run(fx.graph, fx.attitudes, fx.config, truth);
  const RunResult run = run_uape(fx.graph, fx.attitudes, fx.config);
  const auto expected = activation_curve(run.trace, 1, fx.config.rounds);
  ASSERT_EQ(report.curve.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i)
    EXPECT_EQ(report.curve[i], expected[i]);
}

TEST(EvaluateRun, MissingTruthRowsReported) {
  const FiveNodeFixture fx;
  GroundTruth truth(5, 1);
  for (NodeId v = 0; v < 4; ++v) truth.set(v, 0, 1);  // node "d" missing
  try {
    evaluate_run(fx.graph, fx.attitudes, fx.config, truth);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("\"d\""), std::string::npos) << e.what();
  }
}

TEST(LoadTruth, ParsesAndValidates) {
  DirectedGraph g({"x", "y"}, {{0, 1, 1.0}});
  {
    std::istringstream in("x,0,1\ny,0,0\n");
    const GroundTruth truth = load_truth(in, g, 1, "truth");
    EXPECT_EQ(truth.label(0, 0), 1);
    EXPECT_EQ(truth.label(1, 0), 0);
  }
  {
    std::istringstream in("x,0,0.7\n");
    EXPECT_THROW(load_truth(in, g, 1, "truth"), DataError);
  }
  {
    std::istringstream in("z,0,1\n");
    EXPECT_THROW(load_truth(in, g, 1, "truth"), DataError);
  }
}

}  // namespace
}  // namespace uape
