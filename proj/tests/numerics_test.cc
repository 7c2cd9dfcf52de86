/* Copyright 2026 The GLQA Authors. All Rights Reserved.

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
#include <cmath>
#include <stdexcept>

#include "glqa/diagnostics.h"
#include "glqa/grad_check.h"
#include "glqa/kernels.h"
#include "glqa/ops.h"
#include "glqa/rng.h"
#include "glqa/tape.h"
#include "glqa/tensor.h"
#include "gtest/gtest.h"

namespace glqa {
namespace {

Tensor RandomTensor(std::size_t r, std::size_t c, std::uint64_t seed,
                    double scale = 1.0) {
  Rng rng(seed);
  Tensor t(r, c);
  for (double& x : t.data()) x = rng.UniformReal(-scale, scale);
  return t;
}

TEST(TensorTest, ShapeAndIndexing) {
  Tensor t(2, 3, 1.5);
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.cols(), 3u);
  EXPECT_EQ(t.size(), 6u);
  t(1, 2) = 4.0;
  EXPECT_EQ(t[5], 4.0);
  EXPECT_EQ(t.row(1)[2], 4.0);
  EXPECT_EQ(ShapeString(t.shape()), "[2x3]");
}

TEST(TensorTest, ItemRequiresScalar) {
  EXPECT_DOUBLE_EQ(Tensor::Scalar(3.0).item(), 3.0);
  EXPECT_THROW(Tensor(1, 2).item(), ShapeError);
}

TEST(TensorTest, DataConstructorChecksSize) {
  EXPECT_THROW(Tensor(2, 2, std::vector<double>{1, 2, 3}), ShapeError);
}

TEST(TensorTest, AddInPlaceChecksShape) {
  Tensor a(1, 2, 1.0);
  EXPECT_THROW(a.AddInPlace(Tensor(2, 1)), ShapeError);
  a.AddInPlace(Tensor::Row({1.0, 2.0}));
  EXPECT_EQ(a, Tensor::Row({2.0, 3.0}));
}

TEST(TapeTest, BackwardRejectsNonScalarLoss) {
  Tape tape;
  Var x = tape.Variable(Tensor::Row({1.0, 2.0}));
  EXPECT_THROW(tape.Backward(x), ShapeError);
}

TEST(TapeTest, SumOfTanhAtZeroHasUnitGradient) {
  Tape tape;
  Var x = tape.Variable(Tensor(1, 4));
  tape.Backward(Sum(Tanh(x)));
  EXPECT_EQ(tape.grad(x), Tensor(1, 4, 1.0));
}

TEST(TapeTest, SquaredNormGradient) {
  Tape tape;
  Var x = tape.Variable(Tensor::Row({1.0, 2.0}));
  tape.Backward(Sum(Mul(x, x)));
  EXPECT_EQ(tape.grad(x), Tensor::Row({2.0, 4.0}));
}

TEST(TapeTest, GradientsAccumulateAcrossUses) {
  Tape tape;
  Var x = tape.Variable(Tensor::Row({3.0, -1.0, 7.0}));
  tape.Backward(Add(Sum(x), Sum(x)));
  EXPECT_EQ(tape.grad(x), Tensor(1, 3, 2.0));
}

TEST(TapeTest, ParamAccumulatesIntoSink) {
  Tensor w = Tensor::Row({1.0, 2.0});
  Tensor sink(1, 2, 10.0);
  Tape tape;
  Var p = tape.Param(w, &sink);
  tape.Backward(Sum(Scale(p, 3.0)));
  EXPECT_EQ(sink, Tensor::Row({13.0, 13.0}));
}

TEST(TapeTest, ConstantParamGetsNoGradient) {
  Tensor w = Tensor::Row({1.0, 2.0});
  Tape tape;
  Var p = tape.Param(w, nullptr);
  EXPECT_FALSE(tape.requires_grad(p));
  Var y = Sum(p);
  EXPECT_FALSE(tape.requires_grad(y));
}

TEST(TapeTest, BackwardIsDeterministic) {
  auto run = [] {
    Tape tape;
    Var w = tape.Variable(RandomTensor(4, 3, 1));
    Var x = tape.Constant(RandomTensor(2, 4, 2));
    tape.Backward(Sum(Tanh(MatMul(x, w))));
    return tape.grad(w);
  };
  EXPECT_EQ(run(), run());
}

TEST(OpsTest, ConcatAxis0AndAxis1) {
  Tape tape;
  Var a = tape.Constant(Tensor::Row({1.0, 2.0}));
  Var b = tape.Constant(Tensor::Row({3.0}));
  EXPECT_EQ(tape.value(Concat(a, b, 1)), Tensor::Row({1.0, 2.0, 3.0}));
  Var c = tape.Constant(Tensor::Row({5.0, 6.0}));
  EXPECT_EQ(tape.value(Concat(a, c, 0)),
            Tensor(2, 2, std::vector<double>{1, 2, 5, 6}));
  EXPECT_THROW(Concat(a, b, 0), ShapeError);
}

TEST(OpsTest, ShapeErrorsNameOpAndShapes) {
  Tape tape;
  Var a = tape.Constant(Tensor(2, 3));
  Var b = tape.Constant(Tensor(2, 3));
  try {
    MatMul(a, b);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("matmul"), std::string::npos) << msg;
    EXPECT_NE(msg.find("[2x3]"), std::string::npos) << msg;
  }
  EXPECT_THROW(Add(a, tape.Constant(Tensor(3, 2))), ShapeError);
  EXPECT_THROW(Mul(a, tape.Constant(Tensor(1, 3))), ShapeError);
}

TEST(OpsTest, MatMulValue) {
  Tape tape;
  Var a = tape.Constant(Tensor(2, 2, std::vector<double>{1, 2, 3, 4}));
  Var b = tape.Constant(Tensor(2, 1, std::vector<double>{5, 6}));
  EXPECT_EQ(tape.value(MatMul(a, b)),
            Tensor(2, 1, std::vector<double>{17, 39}));
}

TEST(OpsTest, SoftmaxHandExample) {
  Tape tape;
  Var x = tape.Constant(Tensor::Row({0.0, std::log(2.0), std::log(3.0)}));
  const Tensor p = tape.value(Softmax(x));
  EXPECT_NEAR(p[0], 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[2], 1.0 / 2.0, 1e-15);
}

TEST(OpsTest, SoftmaxOfConstantsIsUniform) {
  for (double c : {-1000.0, 0.0, 3.5, 1000.0}) {
    const Tensor p = SoftmaxValue(Tensor(1, 3, c));
    for (double v : p.data()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-15);
  }
}

TEST(OpsTest, SoftmaxIsOverflowSafe) {
  const Tensor p = SoftmaxValue(Tensor::Row({1e308, 1e308, -1e308}));
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_EQ(p[2], 0.0);
}

TEST(OpsTest, SoftmaxRejectsEmpty) {
  Tape tape;
  EXPECT_THROW(Softmax(tape.Constant(Tensor(1, 0))), std::invalid_argument);
}

TEST(OpsTest, SoftmaxSumsToOneAndIsShiftInvariant) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Tensor x = RandomTensor(1, 1 + rng.Uniform(40), trial, 30.0);
    const Tensor p = SoftmaxValue(x);
    double sum = 0.0;
    for (double v : p.data()) {
      EXPECT_GT(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    Tensor shifted = x;
    for (double& v : shifted.data()) v += 17.25;
    const Tensor q = SoftmaxValue(shifted);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
  }
}

TEST(OpsTest, CosineExamples) {
  const double a[] = {1.0, 1.0};
  const double b[] = {1.0, 0.0};
  EXPECT_NEAR(CosineValue(a, b), 1.0 / std::sqrt(2.0), 1e-15);
  const double c[] = {2.0, 2.0};
  EXPECT_NEAR(CosineValue(a, c), 1.0, 1e-15);
  const double d[] = {-3.0, -3.0};
  EXPECT_NEAR(CosineValue(a, d), -1.0, 1e-15);
}

TEST(OpsTest, CosineDegenerateThrows) {
  const double a[] = {0.0, 0.0};
  const double b[] = {1.0, 0.0};
  try {
    CosineValue(a, b);
    FAIL() << "expected domain_error";
  } catch (const std::domain_error& e) {
    EXPECT_STREQ(e.what(), "degenerate vector in cosine");
  }
  Tape tape;
  EXPECT_THROW(Cosine(tape.Constant(Tensor(1, 2)),
                      tape.Constant(Tensor::Row({1.0, 0.0}))),
               std::domain_error);
}

TEST(OpsTest, CosineRowsDegenerateRowIsZeroWithDiagnostic) {
  Diagnostics::Global().Reset();
  Tape tape;
  Var x = tape.Constant(Tensor(2, 2, std::vector<double>{0, 0, 1, 0}));
  Var u = tape.Constant(Tensor::Row({1.0, 1.0}));
  const Tensor c = tape.value(CosineRows(x, u));
  EXPECT_EQ(c[0], 0.0);
  EXPECT_NEAR(c[1], 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(Diagnostics::Global().Count(DiagKind::kDegenerateCosine), 1u);
}

TEST(OpsTest, CosineScaleInvarianceAndRange) {
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor u = RandomTensor(1, 7, 100 + trial);
    const Tensor v = RandomTensor(1, 7, 200 + trial);
    const double c = CosineValue(u.data(), v.data());
    EXPECT_GE(c, -1.0);
    EXPECT_LE(c, 1.0);
    Tensor s = u;
    for (double& x : s.data()) x *= 42.0;
    EXPECT_NEAR(CosineValue(s.data(), v.data()), c, 1e-12);
  }
}

TEST(OpsTest, NormalizeRowsHitsTarget) {
  Tape tape;
  Var x = tape.Constant(Tensor(2, 2, std::vector<double>{3, 4, 0, 2}));
  const Tensor y = tape.value(NormalizeRows(x, 0.5));
  EXPECT_NEAR(y(0, 0), 0.3, 1e-15);
  EXPECT_NEAR(y(0, 1), 0.4, 1e-15);
  EXPECT_NEAR(y(1, 1), 0.5, 1e-15);
}

TEST(OpsTest, MeanAndMaxRows) {
  Tape tape;
  Var x = tape.Constant(Tensor(2, 2, std::vector<double>{1, 3, 3, 5}));
  EXPECT_EQ(tape.value(MeanRows(x)), Tensor::Row({2.0, 4.0}));
  Var y = tape.Constant(Tensor(2, 2, std::vector<double>{1, 5, 3, 2}));
  EXPECT_EQ(tape.value(MaxRows(y)), Tensor::Row({3.0, 5.0}));
}

TEST(OpsTest, GatherRowsFrozenRowGetsNoGradient) {
  Tape tape;
  Var table = tape.Variable(RandomTensor(4, 2, 9));
  const int ids[] = {1, 2, 1};
  tape.Backward(Sum(GatherRows(table, ids, 1)));
  const Tensor& g = tape.grad(table);
  EXPECT_EQ(g(1, 0), 0.0);
  EXPECT_EQ(g(2, 0), 1.0);
  EXPECT_EQ(g(0, 0), 0.0);
}

TEST(OpsTest, GatherWeightedSumMatchesDenseProduct) {
  const Tensor table = RandomTensor(6, 3, 4);
  const int ids[] = {1, 4};
  const double w[] = {0.5, 2.0};
  Tape tape;
  const Tensor sparse =
      tape.value(GatherWeightedSum(tape.Constant(table), ids, w));
  Tensor dense(1, 6);
  dense[1] = 0.5;
  dense[4] = 2.0;
  const Tensor full =
      tape.value(MatMul(tape.Constant(dense), tape.Constant(table)));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(sparse[i], full[i], 1e-15);
}

TEST(OpsTest, ReluSubgradientAtKinkIsZero) {
  Tape tape;
  Var x = tape.Variable(Tensor::Row({-1.0, 0.0, 2.0}));
  tape.Backward(Sum(Relu(x)));
  EXPECT_EQ(tape.grad(x), Tensor::Row({0.0, 0.0, 1.0}));
}

// Every differentiable op against central differences.
struct OpCase {
  const char* name;
  std::size_t rows, cols;
  std::function<Var(Var)> build;
};

class OpGradientTest : public ::testing::TestWithParam<int> {};

std::vector<OpCase> OpCases() {
  auto c = [](Var x, std::size_t r, std::size_t cc, std::uint64_t seed) {
    return x.tape->Constant(RandomTensor(r, cc, seed));
  };
  return {
      {"add", 2, 3, [=](Var x) { return Sum(Mul(Add(x, c(x, 2, 3, 1)), x)); }},
      {"sub", 2, 3, [=](Var x) { return Sum(Mul(Sub(c(x, 2, 3, 1), x), x)); }},
      {"scale", 1, 4, [](Var x) { return Sum(Mul(Scale(x, -2.5), x)); }},
      {"matmul_left", 2, 3,
       [=](Var x) { return Sum(Tanh(MatMul(x, c(x, 3, 4, 2)))); }},
      {"matmul_right", 3, 4,
       [=](Var x) { return Sum(Tanh(MatMul(c(x, 2, 3, 3), x))); }},
      {"transpose", 2, 3,
       [=](Var x) { return Sum(Tanh(MatMul(Transpose(x), c(x, 2, 2, 4)))); }},
      {"sigmoid", 2, 2, [](Var x) { return Sum(Mul(Sigmoid(x), x)); }},
      {"concat0", 1, 3,
       [=](Var x) { return Sum(Tanh(Concat(x, Scale(x, 2.0), 0))); }},
      {"concat1", 2, 2,
       [=](Var x) { return Sum(Tanh(Concat(x, c(x, 2, 1, 5), 1))); }},
      {"slices", 3, 4,
       [](Var x) {
         return Sum(Mul(SliceCols(x, 1, 2), Tanh(SliceCols(x, 2, 2)))) ;
       }},
      {"slice_rows", 3, 2,
       [](Var x) { return Sum(Tanh(SliceRows(x, 1, 2))); }},
      {"mean", 2, 3, [](Var x) { return Mul(Mean(Tanh(x)), Mean(x)); }},
      {"mean_rows", 3, 2, [](Var x) { return Sum(Tanh(MeanRows(x))); }},
      {"max_rows", 3, 2, [](Var x) { return Sum(Tanh(MaxRows(x))); }},
      {"broadcast", 1, 3,
       [=](Var x) { return Sum(Mul(BroadcastRows(x, 4), c(x, 4, 3, 6))); }},
      {"softmax", 1, 5,
       [=](Var x) { return Sum(Mul(Softmax(x), c(x, 1, 5, 7))); }},
      {"cosine", 1, 4, [=](Var x) { return Cosine(x, c(x, 1, 4, 8)); }},
      {"cosine_of_projection", 3, 4,
       [=](Var w) {
         return Cosine(MatMul(c(w, 1, 3, 9), w), c(w, 1, 4, 10));
       }},
      {"cosine_rows", 3, 4,
       [=](Var x) { return Sum(Mul(CosineRows(x, c(x, 1, 4, 11)), c(x, 1, 3, 12))); }},
      {"cosine_rows_u", 1, 4,
       [=](Var u) { return Sum(Mul(CosineRows(c(u, 3, 4, 13), u), c(u, 1, 3, 14))); }},
      {"normalize_rows", 2, 3,
       [=](Var x) { return Sum(Mul(NormalizeRows(x, 0.7), c(x, 2, 3, 15))); }},
      {"gather_weighted_sum", 5, 3,
       [](Var t) {
         static const int ids[] = {0, 3, 4};
         static const double w[] = {1.0, 0.5, -2.0};
         return Sum(Tanh(GatherWeightedSum(t, ids, w)));
       }},
      {"gather_rows", 5, 3,
       [](Var t) {
         static const int ids[] = {4, 0, 4};
         return Sum(Tanh(GatherRows(t, ids)));
       }},
  };
}

TEST_P(OpGradientTest, MatchesCentralDifferences) {
  const OpCase op = OpCases()[static_cast<std::size_t>(GetParam())];
  const GradCheckResult r = CheckGradient(
      op.build, RandomTensor(op.rows, op.cols, 77 + GetParam()));
  EXPECT_LT(r.max_rel_error, 1e-6)
      << op.name << " worst index " << r.worst_index << " analytic "
      << r.analytic << " numeric " << r.numeric;
}

INSTANTIATE_TEST_SUITE_P(AllOps, OpGradientTest,
                         ::testing::Range(0, static_cast<int>(OpCases().size())),
                         [](const ::testing::TestParamInfo<int>& info) {
                           return std::string(
                               OpCases()[static_cast<std::size_t>(info.param)].name);
                         });

TEST(GradCheckTest, SumHasExactUnitGradient) {
  const GradCheckResult r =
      CheckGradient([](Var x) { return Sum(x); }, RandomTensor(2, 5, 3));
  EXPECT_LT(r.max_rel_error, 1e-9);
}

TEST(GradCheckTest, RelativeErrorDefinition) {
  EXPECT_NEAR(RelativeError(1.0, 1.1), 0.1 / 1.1, 1e-15);
  EXPECT_DOUBLE_EQ(RelativeError(0.0, 1e-10), 1e-10 / 1e-8);
  EXPECT_DOUBLE_EQ(RelativeError(0.0, 1e-10, 1e-6), 1e-10 / 1e-6);
}

TEST(GradCheckTest, DetectsWrongGradient) {
  std::vector<double> point = {0.3, -0.2};
  const std::vector<double> wrong = {1.0, 1.0};
  auto f = [&] { return point[0] * point[0] + point[1]; };
  const GradCheckResult r = CheckGradient(f, point, wrong);
  EXPECT_GT(r.max_rel_error, 0.1);
  EXPECT_EQ(r.worst_index, 0u);
  EXPECT_EQ(point[0], 0.3);  // restored
}

TEST(KernelsTest, ParallelMatchesSerialBitwise) {
  for (auto [m, k, n] : {std::tuple{1, 7, 5}, std::tuple{64, 300, 128},
                         std::tuple{200, 40, 564}}) {
    const Tensor a = RandomTensor(m, k, 1);
    const Tensor b = RandomTensor(k, n, 2);
    Tensor s, p;
    kernels::MatMulSerial(a, b, s);
    kernels::MatMul(a, b, p);
    EXPECT_EQ(s, p);

    const Tensor c = RandomTensor(m, n, 3);
    Tensor sa(k, n, 1.0), pa(k, n, 1.0);
    kernels::MatMulTransAAccSerial(a, c, sa);
    kernels::MatMulTransAAcc(a, c, pa);
    EXPECT_EQ(sa, pa);

    Tensor sb(m, k, -1.0), pb(m, k, -1.0);
    kernels::MatMulTransBAccSerial(c, b, sb);
    kernels::MatMulTransBAcc(c, b, pb);
    EXPECT_EQ(sb, pb);
  }
}

TEST(KernelsTest, SerialMatMulHandExample) {
  Tensor out;
  kernels::MatMulSerial(Tensor(1, 2, std::vector<double>{1, 2}),
                        Tensor(2, 2, std::vector<double>{3, 4, 5, 6}), out);
  EXPECT_EQ(out, Tensor(1, 2, std::vector<double>{13, 16}));
}

TEST(KernelsTest, ShapeMismatchThrows) {
  Tensor out;
  EXPECT_THROW(kernels::MatMul(Tensor(2, 3), Tensor(2, 3), out), ShapeError);
}

TEST(RngTest, SubstreamsAreIndependentAndDeterministic) {
  EXPECT_EQ(SubstreamSeed(1, "a"), SubstreamSeed(1, "a"));
  EXPECT_NE(SubstreamSeed(1, "a"), SubstreamSeed(1, "b"));
  EXPECT_NE(SubstreamSeed(1, "a", 0), SubstreamSeed(1, "a", 1));
  EXPECT_NE(SubstreamSeed(1, "a"), SubstreamSeed(2, "a"));
  Rng x(3, "s"), y(3, "s");
  for (int i = 0; i < 10; ++i) EXPECT_EQ(x.Next(), y.Next());
}

TEST(RngTest, UniformStaysInRange) {
  Rng rng(4);
  for (int i = 0; i < 10000; ++i) {
    EXPECT_LT(rng.Uniform(7), 7u);
    const double u = rng.UniformReal();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace glqa
