#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "oracle.hpp"
#include "tpmg/params.hpp"
#include "tpmg/stencil.hpp"

using namespace tpmg;

namespace {

const double kOmega2 = 6.71e-4 * 4.0;  // a few coarsenings below the base run
const double kLambda2 = 3.32e-2;

LevelOperator make_op(int nx, int nz, bool flat, int P = 1, double omega2 = kOmega2, double lambda2 = kLambda2) {
  return LevelOperator(PanelGrid(nx, nz, 0.01, flat), omega2, lambda2, Decomposition::decompose(nx, P));
}

}  // namespace

TEST(Operator, ConstantGivesVolume) {
  const auto op = make_op(8, 4, false, 4);
  auto u = op.make_field();
  u.fill(2.5);
  auto v = op.make_field();
  apply_operator(u, op, v);
  const auto& g = op.grid();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 4; ++k)
        EXPECT_NEAR(v.at(i, j, k), 2.5 * g.column_area(i, j) * g.mass_profile()[k], 1e-13 * 2.5 * g.column_area(i, j));
}

TEST(Operator, MassOnlyWithoutCoupling) {
  const auto op = make_op(8, 4, false, 1, 0.0, 1.0);
  const Eigen::VectorXd x = oracle::random_vector(256, 3);
  const Eigen::VectorXd y = oracle::apply(op, x);
  const auto& g = op.grid();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 4; ++k) {
        const int m = 4 * (8 * i + j) + k;
        EXPECT_DOUBLE_EQ(y[m], g.column_area(i, j) * g.mass_profile()[k] * x[m]);
      }
}

TEST(Operator, MatchesAssembledMatrix) {
  for (bool flat : {true, false}) {
    const auto op = make_op(8, 4, flat);
    const auto A = assemble_matrix(op.grid(), kOmega2, kLambda2);
    for (unsigned seed = 0; seed < 5; ++seed) {
      const Eigen::VectorXd x = oracle::random_vector(256, seed);
      const auto ref = A.multiply(std::span<const double>(x.data(), 256));
      EXPECT_LE(oracle::rel(oracle::apply(op, x), Eigen::Map<const Eigen::VectorXd>(ref.data(), 256)), 1e-13)
          << "flat=" << flat;
    }
  }
}

TEST(Operator, IndependentOfDecomposition) {
  const Eigen::VectorXd x = oracle::random_vector(16 * 16 * 3, 4);
  const Eigen::VectorXd ref = oracle::apply(make_op(16, 3, false, 1), x);
  for (int P : {4, 16}) EXPECT_EQ(oracle::apply(make_op(16, 3, false, P), x), ref);
}

TEST(Operator, HandAssembledCube) {
  // Unit cells: nx=2 on [-1,1] gives dxi=1, levels 1,2,3 give dr=1.
  const PanelGrid g(2, std::vector<double>{1.0, 2.0, 3.0}, true);
  const auto A = oracle::dense(assemble_matrix(g, 1.0, 1.0));
  Eigen::MatrixXd hand = Eigen::MatrixXd::Zero(8, 8);
  auto id = [](int i, int j, int k) { return 2 * (2 * i + j) + k; };
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const int c = id(i, j, k);
        hand(c, c) = 4.0;
        hand(c, id(1 - i, j, k)) = -1.0;
        hand(c, id(i, 1 - j, k)) = -1.0;
        hand(c, id(i, j, 1 - k)) = -1.0;
      }
  EXPECT_EQ((A - hand).norm(), 0.0);
  const LevelOperator op(g, 1.0, 1.0, Decomposition::decompose(2, 1));
  const Eigen::MatrixXd free = oracle::dense_of(8, [&](const Eigen::VectorXd& x) { return oracle::apply(op, x); });
  EXPECT_LE((free - hand).norm(), 1e-14);
}

TEST(Operator, SymmetricPositiveDefinite) {
  for (bool flat : {true, false}) {
    const auto op = make_op(8, 4, flat);
    const Eigen::MatrixXd A = oracle::dense(assemble_matrix(op.grid(), kOmega2, kLambda2));
    EXPECT_EQ((A - A.transpose()).norm(), 0.0);
    const Eigen::MatrixXd F = oracle::dense_of(256, [&](const Eigen::VectorXd& x) { return oracle::apply(op, x); });
    EXPECT_LE((F - F.transpose()).norm() / F.norm(), 1e-15);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Operator, RandomProbes) {
  const auto op = make_op(16, 8, false, 4, 1.0, 1e2);
  const int n = 16 * 16 * 8;
  for (unsigned s = 0; s < 10; ++s) {
    const Eigen::VectorXd x = oracle::random_vector(n, s), y = oracle::random_vector(n, s + 100);
    const double xy = x.dot(oracle::apply(op, y)), yx = y.dot(oracle::apply(op, x));
    EXPECT_NEAR(xy, yx, 1e-12 * (std::abs(xy) + 1));
    EXPECT_GT(x.dot(oracle::apply(op, x)), 0.0);
  }
}

TEST(Operator, Residual) {
  const auto op = make_op(8, 4, false, 4);
  const Eigen::VectorXd fv = oracle::random_vector(256, 1), uv = oracle::random_vector(256, 2);
  const auto f = oracle::from_eigen(op.decomposition(), 4, fv);
  auto u = op.make_field();
  auto r = op.make_field();
  compute_residual(f, u, op, r);
  EXPECT_EQ(oracle::to_eigen(r), fv);
  u = oracle::from_eigen(op.decomposition(), 4, uv);
  compute_residual(f, u, op, r);
  EXPECT_LE(oracle::rel(oracle::to_eigen(r), fv - oracle::apply(op, uv)), 1e-15);
}

TEST(Operator, RejectsMismatchedFields) {
  const auto op = make_op(8, 4, false);
  DistributedField wrong(Decomposition::decompose(8, 4), 4);
  auto v = op.make_field();
  EXPECT_THROW(apply_operator(wrong, op, v), std::invalid_argument);
  EXPECT_THROW(LevelOperator(PanelGrid(8, 4, 0.01), -1.0, 1.0, Decomposition::decompose(8, 1)), std::invalid_argument);
}

TEST(VerticalBlock, MatchesAssembledColumns) {
  // A thick shell: thin layers amplify rounding in the centre distances entrywise.
  for (bool flat : {true, false}) {
    const LevelOperator op(PanelGrid(8, 4, 0.5, flat), kOmega2, kLambda2, Decomposition::decompose(8, 1));
    const auto A = assemble_matrix(op.grid(), kOmega2, kLambda2);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) {
        const auto b = op.vertical_block(i, j);
        const int base = 4 * (8 * i + j);
        for (int k = 0; k < 4; ++k) {
          EXPECT_NEAR(b.diag[k], A.at(base + k, base + k), 1e-13 * b.diag[k]);
          if (k + 1 < 4) {
            EXPECT_NEAR(b.super[k], A.at(base + k, base + k + 1), 1e-13 * std::abs(b.super[k]));
            EXPECT_EQ(b.super[k], b.sub[k + 1]);
          }
          const double off = (k > 0 ? std::abs(b.sub[k]) : 0.0) + (k + 1 < 4 ? std::abs(b.super[k]) : 0.0);
          EXPECT_GT(b.diag[k], off);
        }
      }
  }
}

TEST(VerticalBlock, SingleLevelAndNoVerticalCoupling) {
  const LevelOperator one(PanelGrid(4, 1, 0.01), kOmega2, kLambda2, Decomposition::decompose(4, 1));
  const auto A1 = assemble_matrix(one.grid(), kOmega2, kLambda2);
  const auto b1 = one.vertical_block(1, 2);
  ASSERT_EQ(b1.diag.size(), 1u);
  EXPECT_NEAR(b1.diag[0], A1.at(6, 6), 1e-13 * b1.diag[0]);

  const auto op = make_op(4, 4, false, 1, kOmega2, 0.0);
  const auto A = assemble_matrix(op.grid(), kOmega2, 0.0);
  const auto b = op.vertical_block(3, 0);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(b.sub[k], 0.0);
    EXPECT_EQ(b.super[k], 0.0);
    EXPECT_NEAR(b.diag[k], A.at(4 * 12 + k, 4 * 12 + k), 1e-13 * b.diag[k]);
  }
}

TEST(Assembly, RefusesLargeGrids) {
  EXPECT_THROW(assemble_matrix(PanelGrid(64, 32, 0.01), 1.0, 1.0), std::invalid_argument);
}

TEST(FieldDump, RoundTrip) {
  const auto op = make_op(8, 4, false, 4);
  const Eigen::VectorXd x = oracle::random_vector(256, 77);
  const auto f = oracle::from_eigen(op.decomposition(), 4, x);
  const auto path = (std::filesystem::temp_directory_path() / "tpmg_dump_test.bin").string();
  write_field_dump(path, f, kDumpFlatMode);
  const auto d = read_field_dump(path);
  EXPECT_EQ(d.nx, 8u);
  EXPECT_EQ(d.nz, 4u);
  EXPECT_EQ(d.flags, kDumpFlatMode);
  EXPECT_EQ(d.values, f.to_global());
  {
    std::ofstream bad(path, std::ios::binary);
    bad << "XXXXjunk";
  }
  EXPECT_THROW(read_field_dump(path), std::runtime_error);
  std::filesystem::remove(path);
  EXPECT_THROW(read_field_dump(path), std::runtime_error);
}
