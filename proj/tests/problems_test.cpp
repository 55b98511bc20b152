#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "nlsreg/problems/fh.hpp"
#include "nlsreg/problems/group_lasso.hpp"
#include "nlsreg/problems/instance_io.hpp"
#include "nlsreg/problems/mnist.hpp"
#include "nlsreg/problems/svm.hpp"
#include "test_support.hpp"

using namespace nlsreg;
using namespace nlsreg::problems;
using nlsreg::testing::Gen;

namespace {

double max_relative_error(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

GroupLassoConfig small_group_lasso() {
  GroupLassoConfig c;
  c.observations = 40;
  c.signal_length = 64;
  c.groups = 8;
  c.active_groups = 3;
  return c;
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::vector<std::uint8_t> idx_images(std::uint32_t count, std::uint32_t rows, std::uint32_t cols,
                                     const std::vector<std::uint8_t>& pixels) {
  std::vector<std::uint8_t> out;
  put_be32(out, 0x803);
  put_be32(out, count);
  put_be32(out, rows);
  put_be32(out, cols);
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

std::vector<std::uint8_t> idx_labels(const std::vector<std::uint8_t>& labels) {
  std::vector<std::uint8_t> out;
  put_be32(out, 0x801);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

}  // namespace

TEST(GroupLasso, RowsAreOrthonormal) {
  const GroupLassoInstance inst = generate_group_lasso(1);
  const Matrix gram = inst.A * inst.A.transpose();
  EXPECT_LE((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(inst.A.rows(), 200);
  EXPECT_EQ(inst.A.cols(), 512);
}

TEST(GroupLasso, TruthIsGroupSparseWithConstantGroups) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GroupLassoInstance inst = generate_group_lasso(seed);
    int active = 0;
    for (const auto& group : inst.groups) {
      const double first = inst.x_true(group.front());
      EXPECT_TRUE(first == -1.0 || first == 0.0 || first == 1.0);
      for (Index i : group) EXPECT_EQ(inst.x_true(i), first);
      active += first != 0.0;
    }
    EXPECT_EQ(active, 5);
    EXPECT_EQ(inst.groups.size(), 16u);
    EXPECT_NO_THROW(validate_partition(inst.groups, 512));
  }
}

TEST(GroupLasso, NoiseFreeTruthHasZeroResidual) {
  GroupLassoConfig c = small_group_lasso();
  c.noise = 0.0;
  const GroupLassoInstance inst = generate_group_lasso(3, c);
  GroupLassoSetup setup = make_group_lasso(inst);
  EXPECT_LE(objective(*setup.problem, inst.x_true).f, 1e-28);
  EXPECT_EQ(setup.problem->num_residuals(), c.observations);
  EXPECT_EQ(setup.x0, Vector::Zero(c.signal_length));
}

TEST(GroupLasso, AdjointAndSpectralNorm) {
  const GroupLassoInstance inst = generate_group_lasso(2);
  GroupLassoSetup setup = make_group_lasso(inst);
  Gen gen(2);
  EXPECT_LE(nlsreg::testing::adjoint_defect(*setup.problem, setup.x0, gen), 1e-10);
  EXPECT_NEAR(spectral_norm(*setup.problem, setup.x0), 1.0, 1e-4);
}

TEST(GroupLasso, SeedsAreReproducibleAndDistinct) {
  const GroupLassoInstance a = generate_group_lasso(7, small_group_lasso());
  const GroupLassoInstance b = generate_group_lasso(7, small_group_lasso());
  const GroupLassoInstance c = generate_group_lasso(8, small_group_lasso());
  EXPECT_EQ(a.A, b.A);
  EXPECT_EQ(a.b, b.b);
  EXPECT_NE(a.A, c.A);
}

TEST(GroupLasso, RejectsIndivisibleLayout) {
  GroupLassoConfig c = small_group_lasso();
  c.groups = 7;
  EXPECT_THROW(generate_group_lasso(1, c), std::invalid_argument);
  c = small_group_lasso();
  c.active_groups = 9;
  EXPECT_THROW(generate_group_lasso(1, c), std::invalid_argument);
}

TEST(Svm, ResidualAtOriginIsOne) {
  const SvmInstance inst = generate_svm(1);
  SvmProblem p(inst.train.features, inst.train.labels);
  EXPECT_EQ(p.residual(Vector::Zero(p.num_variables())), Vector::Ones(p.num_residuals()));
}

TEST(Svm, ResidualIsBounded) {
  const SvmInstance inst = generate_svm(2);
  SvmProblem p(inst.train.features, inst.train.labels);
  Gen gen(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector r = p.residual(3.0 * gen.normal_vector(p.num_variables()));
    EXPECT_GE(r.minCoeff(), 0.0);
    EXPECT_LE(r.maxCoeff(), 2.0);
  }
}

TEST(Svm, LabelsAreSignsAndClassesBalanced) {
  const SvmInstance inst = generate_svm(3);
  for (const LabeledData* d : {&inst.train, &inst.test}) {
    for (Index i = 0; i < d->labels.size(); ++i) EXPECT_TRUE(d->labels(i) == 1.0 || d->labels(i) == -1.0);
    EXPECT_LE(std::abs(d->labels.sum()), 1.0);
  }
  EXPECT_EQ(inst.train.features.rows(), 400);
  EXPECT_EQ(inst.test.features.rows(), 100);
  EXPECT_EQ(inst.train.features.cols(), 50);
}

TEST(Svm, JacobianMatchesFiniteDifferences) {
  const SvmInstance inst = generate_svm(4);
  SvmProblem p(inst.train.features, inst.train.labels);
  Gen gen(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Vector x = 0.2 * gen.normal_vector(p.num_variables());
    const Matrix fd = nlsreg::testing::central_difference_jacobian(p, x, 1e-6);
    EXPECT_LE(max_relative_error(nlsreg::testing::dense_jacobian(p, x), fd), 1e-6);
    EXPECT_LE(nlsreg::testing::adjoint_defect(p, x, gen), 1e-10);
  }
}

TEST(Svm, AccuracyCountsSigns) {
  LabeledData d{Matrix::Identity(4, 2), Vector{{1.0, -1.0, 1.0, 1.0}}};
  // Scores: 1, -1, 0, 0; zero predicts +1.
  EXPECT_DOUBLE_EQ(accuracy(d, Vector{{1.0, 1.0}}), 0.75);
  EXPECT_DOUBLE_EQ(accuracy(d, Vector{{1.0, -1.0}}), 1.0);
}

TEST(Svm, SetupUsesOnesAndLHalf) {
  const SvmInstance inst = generate_svm(5);
  SvmSetup setup = make_svm(inst);
  EXPECT_EQ(setup.x0, Vector::Ones(50));
  EXPECT_EQ(setup.regularizer.kind(), RegularizerKind::LHalf);
  EXPECT_EQ(setup.regularizer.weight(), 0.1);
}

TEST(FitzHughNagumo, TruthHasZeroResidual) {
  FHProblem p(generate_fh());
  const Vector r = p.residual(fh_reference_parameters());
  EXPECT_EQ(r.size(), 202);
  EXPECT_EQ(r.cwiseAbs().maxCoeff(), 0.0);
}

TEST(FitzHughNagumo, ReferenceTrajectoryOscillatesWithAmplitudeTwo) {
  const FHTrajectory t = fh_forward(fh_reference_parameters());
  EXPECT_EQ(t.v(0), 2.0);
  EXPECT_EQ(t.w(0), 0.0);
  EXPECT_NEAR(t.v.maxCoeff(), 2.0, 0.1);
  EXPECT_NEAR(t.v.minCoeff(), -2.0, 0.1);
}

TEST(FitzHughNagumo, SensitivityMatchesCentralDifferences) {
  FHProblem p(generate_fh());
  const Vector points[] = {Vector{{0.5, 0.2, 1.0, 0.5, 0.5}}, Vector::Constant(5, 0.5),
                           Vector{{0.0, 0.3, 0.8, 0.0, 0.0}}};
  for (const Vector& x : points) {
    const Matrix fd = nlsreg::testing::central_difference_jacobian(p, x, 1e-6);
    EXPECT_LE(max_relative_error(nlsreg::testing::dense_jacobian(p, x), fd), 1e-4) << x.transpose();
  }
}

TEST(FitzHughNagumo, AdjointConsistency) {
  FHProblem p(generate_fh());
  Gen gen(6);
  EXPECT_LE(nlsreg::testing::adjoint_defect(p, Vector::Constant(5, 0.5), gen), 1e-10);
}

TEST(FitzHughNagumo, StepHalvingChangesLittle) {
  FHGrid coarse, fine;
  fine.steps_per_sample = 2 * coarse.steps_per_sample;
  for (const Vector& x : {fh_reference_parameters(), Vector(Vector::Constant(5, 0.5))}) {
    const FHTrajectory a = fh_forward(x, coarse), b = fh_forward(x, fine);
    const double err = std::max((a.v - b.v).cwiseAbs().maxCoeff(), (a.w - b.w).cwiseAbs().maxCoeff());
    EXPECT_LE(err, 1e-6) << x.transpose();
  }
}

TEST(FitzHughNagumo, TinyTimeScaleIsAnEvaluationError) {
  EXPECT_THROW(fh_forward(Vector{{0.0, 1e-9, 1.0, 0.0, 0.0}}), EvaluationError);
  FHProblem p(generate_fh());
  EXPECT_THROW(p.residual(Vector{{0.0, 0.0, 1.0, 0.0, 0.0}}), EvaluationError);
}

TEST(FitzHughNagumo, SetupUsesHalvesAndL1) {
  FHSetup setup = make_fh(generate_fh());
  EXPECT_EQ(setup.x0, Vector::Constant(5, 0.5));
  EXPECT_EQ(setup.regularizer.kind(), RegularizerKind::L1);
  EXPECT_EQ(setup.regularizer.weight(), 10.0);
}

TEST(Mnist, ParsesSyntheticIdx) {
  // Three 2x2 images labeled 1, 3, 7.
  const std::vector<std::uint8_t> pixels{0, 255, 51, 102, 1, 2, 3, 4, 255, 0, 0, 255};
  const IdxImages images = parse_idx_images(idx_images(3, 2, 2, pixels));
  EXPECT_EQ(images.count, 3u);
  EXPECT_EQ(images.rows, 2u);
  EXPECT_EQ(images.pixels, pixels);
  const std::vector<std::uint8_t> labels = parse_idx_labels(idx_labels({1, 3, 7}));
  const LabeledData d = select_ones_and_sevens(images, labels);
  ASSERT_EQ(d.features.rows(), 2);
  EXPECT_EQ(d.labels, (Vector{{1.0, -1.0}}));
  EXPECT_DOUBLE_EQ(d.features(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(d.features(0, 2), 0.2);
  EXPECT_DOUBLE_EQ(d.features(1, 3), 1.0);
}

TEST(Mnist, BadMagicReportsOffset) {
  auto bytes = idx_images(1, 1, 1, {0});
  bytes[3] = 0x01;
  try {
    parse_idx_images(bytes);
    FAIL() << "expected IdxParseError";
  } catch (const IdxParseError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
}

TEST(Mnist, TruncatedInputIsRejected) {
  auto bytes = idx_images(2, 2, 2, {1, 2, 3, 4, 5});
  EXPECT_THROW(parse_idx_images(bytes), IdxParseError);
  EXPECT_THROW(parse_idx_labels({0, 0, 8}), IdxParseError);
}

TEST(Mnist, LoadsDirectoryOfIdxFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "nlsreg_mnist_test";
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::vector<std::uint8_t>& bytes) {
    std::ofstream(dir / name, std::ios::binary)
        .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  };
  write("train-images-idx3-ubyte", idx_images(2, 1, 2, {10, 20, 30, 40}));
  write("train-labels-idx1-ubyte", idx_labels({7, 1}));
  write("t10k-images-idx3-ubyte", idx_images(1, 1, 2, {0, 0}));
  write("t10k-labels-idx1-ubyte", idx_labels({4}));
  const SvmInstance inst = load_mnist_idx(dir);
  EXPECT_EQ(inst.train.labels, (Vector{{-1.0, 1.0}}));
  EXPECT_EQ(inst.test.features.rows(), 0);
  std::filesystem::remove_all(dir);
}

TEST(InstanceIo, GroupLassoRoundTrip) {
  const GroupLassoInstance a = generate_group_lasso(9, small_group_lasso());
  const std::string text = serialize(a);
  EXPECT_EQ(instance_kind(text), "group_lasso");
  const GroupLassoInstance b = deserialize_group_lasso(text);
  EXPECT_EQ(a.A, b.A);
  EXPECT_EQ(a.b, b.b);
  EXPECT_EQ(a.x_true, b.x_true);
  EXPECT_EQ(a.groups, b.groups);
  EXPECT_EQ(a.seed, b.seed);
  EXPECT_EQ(serialize(b), text);
}

TEST(InstanceIo, SvmAndFhRoundTrip) {
  const SvmInstance svm = generate_svm(10);
  const SvmInstance svm2 = deserialize_svm(serialize(svm));
  EXPECT_EQ(svm.train.features, svm2.train.features);
  EXPECT_EQ(svm.test.labels, svm2.test.labels);

  const FHInstance fh = generate_fh();
  const FHInstance fh2 = deserialize_fh(serialize(fh));
  EXPECT_EQ(fh.v_data, fh2.v_data);
  EXPECT_EQ(fh.x_true, fh2.x_true);
  EXPECT_EQ(fh.grid.steps_per_sample, fh2.grid.steps_per_sample);
}

TEST(InstanceIo, RejectsWrongKindAndGarbage) {
  const std::string text = serialize(generate_fh());
  EXPECT_THROW(deserialize_svm(text), std::runtime_error);
  EXPECT_THROW(instance_kind("not json"), std::runtime_error);
  EXPECT_THROW(instance_kind("{\"format\":\"other\"}"), std::runtime_error);
}
