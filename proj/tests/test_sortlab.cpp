#include <gtest/gtest.h>

#include <random>

#include "cxnprobe/builtin_stimuli.hpp"
#include "cxnprobe/sortlab.hpp"
#include "cxnprobe/stimgen.hpp"
#include "cxnprobe/synthetic.hpp"
#include "fixtures.hpp"

using namespace cxnprobe;

namespace {

std::vector<Stimulus> flatten(const std::vector<StimulusSet>& sets) {
  std::vector<Stimulus> out;
  for (const auto& s : sets) out.insert(out.end(), s.grid.begin(), s.grid.end());
  return out;
}

}  // namespace

TEST(SortExperiment, ConstructionKeyedFixture) {
  const auto sets = generate_sorting_sets(fixtures::lexicon(), 30, 1);
  synthetic::ClusterSpec spec;
  spec.seed = 2;
  const auto m = synthetic::sentence_container(flatten(sets), synthetic::Key::construction, spec);
  const auto r = run_sorting_experiment(sets, m, {Linkage::ward, 2});
  EXPECT_EQ(r.summary.mean_cdev, 0.0);
  EXPECT_EQ(r.summary.mean_vdev, 12.0);
  ASSERT_TRUE(r.summary.paired_test);
  EXPECT_TRUE(r.summary.paired_test->degenerate);
  EXPECT_EQ(r.summary.paired_test->p_value, 0.0);
  for (const auto& o : r.outcomes) EXPECT_FALSE(o.degenerate);
}

TEST(SortExperiment, VerbKeyedFixtureMirrors) {
  const auto sets = generate_sorting_sets(fixtures::lexicon(), 30, 1);
  synthetic::ClusterSpec spec;
  spec.seed = 3;
  const auto m = synthetic::sentence_container(flatten(sets), synthetic::Key::verb, spec);
  for (auto linkage : {Linkage::ward, Linkage::complete, Linkage::average}) {
    const auto r = run_sorting_experiment(sets, m, {linkage, 1});
    EXPECT_EQ(r.summary.mean_cdev, 12.0);
    EXPECT_EQ(r.summary.mean_vdev, 0.0);
  }
}

TEST(SortExperiment, StandardizationKeepsOrdering) {
  const auto sets = generate_sorting_sets(fixtures::lexicon(), 20, 5);
  synthetic::ClusterSpec spec;
  spec.seed = 6;
  spec.sigma = 4.0;
  const auto m = synthetic::sentence_container(flatten(sets), synthetic::Key::construction, spec);
  const auto z = apply_standardization(m, compute_standardization_stats(m, "self"));
  const auto raw = run_sorting_experiment(sets, m, {});
  const auto std = run_sorting_experiment(sets, z, {});
  EXPECT_LT(raw.summary.mean_cdev, raw.summary.mean_vdev);
  EXPECT_LT(std.summary.mean_cdev, std.summary.mean_vdev);
}

TEST(SortExperiment, JobsDoNotChangeResults) {
  const auto sets = generate_sorting_sets(fixtures::lexicon(), 40, 9);
  synthetic::ClusterSpec spec;
  spec.seed = 1;
  spec.sigma = 12.0;  // noisy enough that deviations vary
  const auto m = synthetic::sentence_container(flatten(sets), synthetic::Key::construction, spec);
  const auto one = run_sorting_experiment(sets, m, {Linkage::ward, 1});
  const auto many = run_sorting_experiment(sets, m, {Linkage::ward, 8});
  ASSERT_EQ(one.outcomes.size(), many.outcomes.size());
  for (std::size_t i = 0; i < one.outcomes.size(); ++i) {
    EXPECT_EQ(one.outcomes[i].assignments, many.outcomes[i].assignments);
  }
  EXPECT_EQ(one.summary.mean_cdev, many.summary.mean_cdev);
  EXPECT_TRUE(one.summary.ci95_cdev.contains(one.summary.mean_cdev));
  EXPECT_TRUE(one.summary.ci95_vdev.contains(one.summary.mean_vdev));
  for (const auto& o : one.outcomes) {
    EXPECT_GE(o.construction_deviation, 0);
    EXPECT_LE(o.construction_deviation, 12);
    EXPECT_LE(o.verb_deviation, 12);
  }
}

TEST(SortExperiment, MissingItemsAreListed) {
  const auto sets = generate_sorting_sets(fixtures::lexicon(), 2, 9);
  auto stimuli = flatten(sets);
  const std::string dropped = stimuli[3].item_id;
  stimuli.erase(stimuli.begin() + 3);
  const auto m = synthetic::sentence_container(stimuli, synthetic::Key::construction, {});
  try {
    run_sorting_experiment(sets, m, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::missing_item);
    EXPECT_NE(std::string(e.what()).find(dropped), std::string::npos);
  }
}

TEST(SortExperiment, DegenerateInputFlagged) {
  auto set = load_builtin_stimuli("en-bencini");
  EmbeddingMatrix m;
  m.manifest.dim = 3;
  for (const auto& s : set.grid) {
    m.manifest.items.push_back({s.item_id, m.manifest.count, 1, std::nullopt, {}, {}});
    ++m.manifest.count;
    m.data.insert(m.data.end(), {1.0f, 2.0f, 3.0f});
  }
  const auto r = run_sorting_experiment(std::vector<StimulusSet>{set}, m, {});
  EXPECT_TRUE(r.outcomes[0].degenerate);
  EXPECT_FALSE(r.summary.paired_test);
}

TEST(SortExperiment, TokenContainerIsPooled) {
  const auto sets = generate_sorting_sets(fixtures::lexicon(), 3, 2);
  const auto stimuli = flatten(sets);
  EmbeddingMatrix tokens;
  tokens.manifest.dim = 8;
  tokens.manifest.granularity = Granularity::token;
  Rng rng(4);
  for (const auto& s : stimuli) {
    const std::size_t axis = static_cast<std::size_t>(
        std::find(kSortingConstructions.begin(), kSortingConstructions.end(), s.construction) -
        kSortingConstructions.begin());
    tokens.manifest.items.push_back({s.item_id, tokens.manifest.count, 3, std::nullopt, {0}, {}});
    for (int r = 0; r < 3; ++r) {
      for (std::size_t d = 0; d < 8; ++d) {
        tokens.data.push_back(r == 0 ? 100.0f : static_cast<float>(rng.normal() + (d == axis ? 30 : 0)));
      }
    }
    tokens.manifest.count += 3;
  }
  const auto r = run_sorting_experiment(sets, tokens, {});
  EXPECT_EQ(r.summary.mean_cdev, 0.0);
}

TEST(SortProjection, CoordinatesPerItem) {
  const auto set = generate_sorting_sets(fixtures::lexicon(), 1, 3)[0];
  const auto m = synthetic::sentence_container(set.grid, synthetic::Key::construction, {});
  const auto p = project_set(set, m, m.item_index());
  ASSERT_EQ(p.points.size(), 16u);
  EXPECT_EQ(p.points[0].item_id, set.grid[0].item_id);
  EXPECT_GE(p.explained_variance_ratio[0], p.explained_variance_ratio[1]);
  EXPECT_FALSE(p.zero_variance_warning);
}
