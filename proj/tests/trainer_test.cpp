/* Copyright 2026 The StyleAug Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include "styleaug/dataset.hpp"
#include "styleaug/error.hpp"
#include "styleaug/parallel.hpp"
#include "styleaug/trainer.hpp"
#include "test_util.hpp"

namespace styleaug {
namespace {

ErrorCode error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::kIoError;
}

const Dataset& small_synthetic() {
  static const Dataset ds = make_synthetic_dataset({.num_classes = 3, .per_class = 25, .size = 64, .seed = 1});
  return ds;
}

TrainConfig quick_config() {
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.policy = AugmentationPolicy::named(PolicyKind::kCrop);
  return cfg;
}

TEST(Synthetic, ShapeCountsAndDeterminism) {
  const Dataset& ds = small_synthetic();
  EXPECT_EQ(ds.num_classes(), 3u);
  EXPECT_EQ(ds.items.size(), 75u);
  for (std::size_t c : ds.class_counts()) EXPECT_EQ(c, 25u);
  for (const auto& item : ds.items) {
    EXPECT_EQ(item.image.height(), 64u);
    for (float v : item.image.pixels().data()) {
      ASSERT_GE(v, 0.0f);
      ASSERT_LE(v, 1.0f);
    }
  }
  const Dataset again = make_synthetic_dataset({.num_classes = 3, .per_class = 25, .size = 64, .seed = 1});
  EXPECT_EQ(again.items[10].image, ds.items[10].image);
  const Dataset other = make_synthetic_dataset({.num_classes = 3, .per_class = 25, .size = 64, .seed = 2});
  EXPECT_NE(other.items[10].image, ds.items[10].image);
}

TEST(Synthetic, SplitKeepsClassBalance) {
  const auto [train, eval] = split_dataset(small_synthetic(), 0.2);
  for (std::size_t c : train.class_counts()) EXPECT_EQ(c, 20u);
  for (std::size_t c : eval.class_counts()) EXPECT_EQ(c, 5u);
}

TEST(DatasetDir, SaveLoadRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "styleaug_dataset_test";
  std::filesystem::remove_all(dir);
  const Dataset ds = make_synthetic_dataset({.num_classes = 2, .per_class = 3, .size = 32, .seed = 4});
  save_dataset_dir(ds, dir);
  const Dataset back = load_dataset_dir(dir);
  EXPECT_EQ(back.class_names, ds.class_names);
  ASSERT_EQ(back.items.size(), ds.items.size());
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    EXPECT_EQ(back.items[i].label, ds.items[i].label);
    EXPECT_LE(testing::max_abs_diff(back.items[i].image.pixels(), ds.items[i].image.pixels()),
              0.5 / 255.0 + 1e-6);
  }
  std::filesystem::remove_all(dir);
  EXPECT_EQ(error_of([&] { load_dataset_dir(dir); }), ErrorCode::kIoError);
}

TEST(Probe, FeaturesAndLogits) {
  ImageRGB gray(224, 224);
  for (float& v : gray.pixels().data()) v = 0.75f;
  const auto f = probe_features(gray);
  ASSERT_EQ(f.size(), kProbeInputDim);
  for (double v : f) EXPECT_NEAR(v, 0.25, 1e-6);
  EXPECT_EQ(error_of([] { probe_features(ImageRGB(100, 100)); }), ErrorCode::kShapeError);

  LinearProbe p = LinearProbe::zeros(2, 3);
  p.weights = {1, 0, 0, 0, 1, 1};
  p.bias = {0.5, -0.5};
  const std::vector<double> x{1, 2, 3};
  EXPECT_EQ(p.logits(x), (std::vector<double>{1.5, 4.5}));
  EXPECT_EQ(p.predict(x), 1u);
  const LinearProbe q = LinearProbe::from_tensor_file(p.to_tensor_file());
  EXPECT_EQ(q.weights, p.weights);
  EXPECT_EQ(q.bias, p.bias);
}

TEST(Train, DeterministicAndWorkerIndependent) {
  TrainConfig cfg = quick_config();
  const TrainResult a = train(small_synthetic(), cfg);
  cfg.workers = 4;
  const TrainResult b = train(small_synthetic(), cfg);
  EXPECT_EQ(a.probe.weights, b.probe.weights);
  ASSERT_EQ(a.history.size(), 2u);
  EXPECT_EQ(a.history[1].loss, b.history[1].loss);
  EXPECT_EQ(a.history[1].mean_jsd, b.history[1].mean_jsd);
}

TEST(Train, LearnsTheSyntheticClasses) {
  TrainConfig cfg = quick_config();
  cfg.epochs = 6;
  const TrainResult r = train(small_synthetic(), cfg);
  EXPECT_TRUE(r.probe.all_finite());
  EXPECT_LT(r.history.back().loss, r.history.front().loss);
  EXPECT_GT(r.history.back().eval_acc, 0.6);
}

TEST(Train, ZeroLambdaOnlyTrainsOriginalView) {
  TrainConfig cfg = quick_config();
  cfg.loss.lambda = 0.0;
  const TrainResult r = train(small_synthetic(), cfg);
  for (const auto& m : r.history) EXPECT_EQ(m.loss, m.ce);
}

TEST(Train, ErrorPaths) {
  const Dataset tiny = make_synthetic_dataset({.num_classes = 2, .per_class = 10, .size = 64, .seed = 0});
  EXPECT_EQ(error_of([&] { train(tiny, quick_config()); }), ErrorCode::kDatasetTooSmall);
  Dataset one = make_synthetic_dataset({.num_classes = 2, .per_class = 30, .size = 64, .seed = 0});
  one.class_names.pop_back();
  std::erase_if(one.items, [](const LabeledImage& item) { return item.label == 1; });
  EXPECT_EQ(error_of([&] { train(one, quick_config()); }), ErrorCode::kDatasetTooSmall);
  TrainConfig bad = quick_config();
  bad.learning_rate = 0.0;
  EXPECT_EQ(error_of([&] { train(small_synthetic(), bad); }), ErrorCode::kInvalidParameter);
  TrainConfig wild = quick_config();
  wild.learning_rate = 1e300;
  EXPECT_EQ(error_of([&] { train(small_synthetic(), wild); }), ErrorCode::kDivergenceDetected);
}

TEST(ConsistencyEval, ZeroProbeIsPerfectlyConsistent) {
  const LinearProbe zero = LinearProbe::zeros(3);
  const double v = consistency_eval(zero, small_synthetic(), AugmentationPolicy::named(PolicyKind::kCrop), 3);
  EXPECT_EQ(v, 0.0);
}

TEST(History, CsvLayout) {
  const auto path = std::filesystem::temp_directory_path() / "styleaug_history.csv";
  write_history_csv({{1, 1.5, 1.0, 0.04, 0.5, 0.01}}, path);
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "epoch,loss,ce,jsd,eval_acc,mean_jsd");
  EXPECT_EQ(row, "1,1.5,1,0.04,0.5,0.01");
  std::filesystem::remove(path);
}

TEST(Parallel, CoversEveryIndexAndRethrows) {
  for (std::size_t workers : {1u, 3u, 8u}) {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), workers, [&](std::size_t i) { hits[i] += 1; });
    EXPECT_EQ(std::set<int>(hits.begin(), hits.end()), std::set<int>{1});
    try {
      parallel_for(50, workers, [](std::size_t i) {
        if (i == 7 || i == 30) fail(ErrorCode::kEmptyInput, std::to_string(i));
      });
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_STREQ(e.what(), "7");
    }
  }
}

}  // namespace
}  // namespace styleaug
