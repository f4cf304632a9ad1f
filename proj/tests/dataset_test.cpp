#include "synthmetric/dataset.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "synthmetric/builtin.hpp"
#include "synthmetric/rng.hpp"

using namespace synthmetric;

namespace {

template <typename Fn>
ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return ErrorCode::Io;
}

Dataset balanced(std::size_t n_per_class) {
  FeatureSchema schema{{"a"}, {FeatureKind::Binary}, "label"};
  std::vector<double> values;
  std::vector<int> labels;
  for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
    values.push_back(static_cast<double>(i % 3 == 0));
    labels.push_back(i < n_per_class ? 0 : 1);
  }
  return Dataset(schema, values, labels);
}

}  // namespace

TEST(Rng, SameSeedSameStream) {
  Rng a(RngSeed{42});
  Rng b(RngSeed{42});
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, DerivedSeedsSeparateStreams) {
  const RngSeed base{7};
  EXPECT_EQ(derive_seed(base, "x", 1).value, derive_seed(base, "x", 1).value);
  EXPECT_NE(derive_seed(base, "x", 1).value, derive_seed(base, "x", 2).value);
  EXPECT_NE(derive_seed(base, "x", 1).value, derive_seed(base, "y", 1).value);
  EXPECT_NE(derive_seed(base, "x").value, derive_seed(RngSeed{8}, "x").value);
}

TEST(Rng, UniformAndBelowRanges) {
  Rng rng(RngSeed{3});
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    ASSERT_LT(rng.below(7), 7u);
  }
  EXPECT_NEAR(sum / 20000.0, 0.5, 0.01);
}

TEST(Rng, NormalMoments) {
  Rng rng(RngSeed{11});
  double s = 0.0, s2 = 0.0;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.02);
  EXPECT_NEAR(s2 / n, 1.0, 0.03);
}

TEST(Csv, BinaryColumnsInferred) {
  const Dataset d = parse_csv("a,b,label\n0,1,0\n1,1,1\n0,0,1\n", "label");
  EXPECT_EQ(d.rows(), 3u);
  EXPECT_EQ(d.cols(), 2u);
  EXPECT_EQ(d.schema().feature_kinds, (std::vector<FeatureKind>{FeatureKind::Binary, FeatureKind::Binary}));
  EXPECT_EQ(d.labels(), (std::vector<int>{0, 1, 1}));
  EXPECT_EQ(d.at(1, 0), 1.0);
}

TEST(Csv, ContinuousColumnMinMaxScaled) {
  const Dataset d = parse_csv("x,label\n0.0,0\n5.0,1\n10.0,1\n", "label");
  EXPECT_EQ(d.schema().feature_kinds[0], FeatureKind::Continuous);
  EXPECT_EQ(d.at(0, 0), 0.0);
  EXPECT_EQ(d.at(1, 0), 0.5);
  EXPECT_EQ(d.at(2, 0), 1.0);
  EXPECT_EQ(d.ranges()[0].min, 0.0);
  EXPECT_EQ(d.ranges()[0].max, 10.0);
}

TEST(Csv, ConstantContinuousColumnMapsToZero) {
  const Dataset d = parse_csv("x,label\n3.5,0\n3.5,1\n", "label");
  EXPECT_EQ(d.at(0, 0), 0.0);
  EXPECT_EQ(d.at(1, 0), 0.0);
}

TEST(Csv, LabelColumnMayBeAnywhere) {
  const Dataset d = parse_csv("label,a\n1,0\n0,1\n", "label");
  EXPECT_EQ(d.schema().feature_names, std::vector<std::string>{"a"});
  EXPECT_EQ(d.labels(), (std::vector<int>{1, 0}));
}

TEST(Csv, Errors) {
  EXPECT_EQ(code_of([] { parse_csv("a,b\n0,1\n", "label"); }), ErrorCode::MissingLabelColumn);
  EXPECT_EQ(code_of([] { parse_csv("a,label\n0,0\n1,0\n", "label"); }), ErrorCode::ConstantLabel);
  EXPECT_EQ(code_of([] { parse_csv("a,label\n", "label"); }), ErrorCode::EmptyDataset);
  EXPECT_EQ(code_of([] { parse_csv("a,label\n0,2\n1,0\n", "label"); }), ErrorCode::InvalidLabel);
}

TEST(Csv, NonNumericCellReportsCoordinates) {
  try {
    parse_csv("a,b,label\n0,1,0\n1,yes,1\n", "label");
    FAIL();
  } catch (const NonNumericCellError& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonNumericCell);
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.col(), 1u);
  }
}

TEST(Csv, RoundTripBinary) {
  BuiltinSpec spec;
  spec.n = 120;
  spec.d = 12;
  const Dataset d = make_builtin_dataset(spec);
  const Dataset back = parse_csv(to_csv(d), d.schema().label_name);
  EXPECT_EQ(back.schema(), d.schema());
  EXPECT_EQ(back.values(), d.values());
  EXPECT_EQ(back.labels(), d.labels());
}

TEST(Csv, RoundTripContinuousWithInteriorValues) {
  const Dataset d = parse_csv("x,y,label\n0,1,0\n0.25,0,1\n1,0.125,0\n0.5,0.5,1\n", "label");
  const Dataset back = parse_csv(to_csv(d), "label");
  EXPECT_EQ(back.schema(), d.schema());
  EXPECT_EQ(back.values(), d.values());
  EXPECT_EQ(back.labels(), d.labels());
}

TEST(Csv, LoadLikeUsesReferenceScaling) {
  const auto dir = std::filesystem::temp_directory_path() / "synthmetric_dataset_test";
  std::filesystem::create_directories(dir);
  const Dataset ref = parse_csv("x,b,label\n0,0,0\n10,1,1\n4,0,1\n", "label");
  {
    std::ofstream(dir / "like.csv") << "x,b,label\n5,1,0\n20,0,1\n";
  }
  const Dataset d = load_csv_like(dir / "like.csv", ref);
  EXPECT_EQ(d.at(0, 0), 0.5);
  EXPECT_EQ(d.at(1, 0), 1.0);  // clamped
  EXPECT_EQ(d.provenance()[0], Dataset::kSyntheticRow);
  {
    std::ofstream(dir / "bad.csv") << "x,label\n5,0\n20,1\n";
  }
  EXPECT_EQ(code_of([&] { load_csv_like(dir / "bad.csv", ref); }), ErrorCode::SchemaMismatch);
  std::filesystem::remove_all(dir);
}

TEST(Dataset, RejectsOutOfRangeValues) {
  FeatureSchema schema{{"a"}, {FeatureKind::Binary}, "label"};
  EXPECT_EQ(code_of([&] { Dataset(schema, {0.5}, {0}); }), ErrorCode::NonBinaryFeature);
}

TEST(Dataset, SubsetKeepsProvenance) {
  const Dataset d = balanced(5);
  const std::vector<std::size_t> pick{7, 2};
  const Dataset s = d.subset(pick);
  EXPECT_EQ(s.provenance(), (std::vector<std::int64_t>{7, 2}));
  EXPECT_EQ(s.label(0), 1);
  EXPECT_EQ(s.label(1), 0);
}

TEST(ClassCounts, Examples) {
  EXPECT_EQ(class_counts(std::vector<int>{0, 1, 0, 1}), (ClassCounts{2, 2}));
  EXPECT_EQ(class_counts(std::vector<int>{1, 1, 1}), (ClassCounts{0, 3}));
  EXPECT_EQ(class_counts(std::vector<int>{}), (ClassCounts{0, 0}));
}

TEST(Kfold, TenRowsFiveFolds) {
  const FoldPlan plan = stratified_kfold(balanced(5), 5, RngSeed{1});
  const Dataset d = balanced(5);
  for (std::size_t f = 0; f < 5; ++f) {
    const auto test = plan.test_indices(f);
    ASSERT_EQ(test.size(), 2u);
    EXPECT_NE(d.label(test[0]), d.label(test[1]));
  }
}

TEST(Kfold, HundredRowsFiveFolds) {
  const Dataset d = balanced(50);
  const FoldPlan plan = stratified_kfold(d, 5, RngSeed{9});
  for (std::size_t f = 0; f < 5; ++f) {
    const auto test = plan.test_indices(f);
    std::vector<int> labels;
    for (auto i : test) labels.push_back(d.label(i));
    EXPECT_EQ(class_counts(labels), (ClassCounts{10, 10}));
  }
}

TEST(Kfold, DeterministicAndPartitioning) {
  const Dataset d = balanced(23);
  const FoldPlan a = stratified_kfold(d, 4, RngSeed{5});
  const FoldPlan b = stratified_kfold(d, 4, RngSeed{5});
  EXPECT_EQ(a.assignments, b.assignments);
  std::set<std::size_t> seen;
  for (std::size_t f = 0; f < 4; ++f) {
    const auto test = a.test_indices(f);
    const auto train = a.train_indices(f);
    EXPECT_EQ(test.size() + train.size(), d.rows());
    for (auto i : test) EXPECT_TRUE(seen.insert(i).second);
  }
  EXPECT_EQ(seen.size(), d.rows());
}

TEST(Kfold, StratificationBoundHoldsAcrossSeedsAndK) {
  FeatureSchema schema{{"a"}, {FeatureKind::Binary}, "label"};
  for (std::size_t n1 : {7u, 13u, 31u}) {
    std::vector<double> values(40 + n1, 0.0);
    std::vector<int> labels(40 + n1, 0);
    for (std::size_t i = 0; i < n1; ++i) labels[i] = 1;
    const Dataset d(schema, values, labels);
    for (std::size_t k = 2; k <= 7; ++k) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const FoldPlan plan = stratified_kfold(d, k, RngSeed{seed});
        for (std::size_t f = 0; f < k; ++f) {
          std::vector<int> labels_f;
          for (auto i : plan.test_indices(f)) labels_f.push_back(d.label(i));
          const auto c = class_counts(labels_f);
          const auto ceil0 = static_cast<long>((40 + k - 1) / k);
          const auto ceil1 = static_cast<long>((n1 + k - 1) / k);
          EXPECT_LE(std::labs(static_cast<long>(c.n_benign) - ceil0), 1);
          EXPECT_LE(std::labs(static_cast<long>(c.n_malware) - ceil1), 1);
        }
      }
    }
  }
}

TEST(Kfold, Errors) {
  EXPECT_EQ(code_of([] { stratified_kfold(balanced(3), 5, RngSeed{1}); }), ErrorCode::TooFewSamplesPerClass);
  EXPECT_EQ(code_of([] { stratified_kfold(balanced(3), 1, RngSeed{1}); }), ErrorCode::InvalidArgument);
}

TEST(Builtin, BalancedBinaryAndDeterministic) {
  BuiltinSpec spec;
  const Dataset a = make_builtin_dataset(spec);
  const Dataset b = make_builtin_dataset(spec);
  EXPECT_EQ(a.values(), b.values());
  EXPECT_EQ(a.rows(), 1000u);
  EXPECT_EQ(a.cols(), 30u);
  EXPECT_TRUE(a.schema().all_binary());
  EXPECT_EQ(class_counts(a), (ClassCounts{500, 500}));
  spec.seed = 2;
  EXPECT_NE(make_builtin_dataset(spec).values(), a.values());
}
