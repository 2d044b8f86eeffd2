#include "irs_swipt/sdp.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace irs_swipt;
using namespace irs_swipt::sdp;

namespace {

// max tr(C X) s.t. tr(X) = 1.
SdpProblem max_eig_problem(const HermMat& c) {
  SdpProblem p(Sense::Maximize);
  auto b = p.add_block(c.rows());
  p.set_objective(b, c);
  p.add_constraint({{{b, Coefficient::dense(HermMat::Identity(c.rows(), c.rows()))}},
                    Relation::Equal, 1.0, "trace"});
  return p;
}

}  // namespace

TEST(SdpSolve, MaxEigenvalueOnDiagonal) {
  HermMat c = HermMat::Zero(3, 3);
  c(0, 0) = 1.0;
  c(1, 1) = 4.0;
  c(2, 2) = 2.0;
  auto p = max_eig_problem(c);
  auto s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.objective_value, 4.0, 1e-6);
  HermMat e2 = HermMat::Zero(3, 3);
  e2(1, 1) = 1.0;
  EXPECT_LT((s.primal[0] - e2).norm(), 1e-6);

  auto r = check_kkt(p, s);
  EXPECT_LT(r.primal_feasibility, 1e-8);
  EXPECT_LT(r.dual_feasibility, 1e-8);
  EXPECT_LT(r.gap, 1e-7);
  EXPECT_GT(r.psd_floor, -1e-8);
}

TEST(SdpSolve, DegenerateZeroTraceBound) {
  SdpProblem p(Sense::Maximize);
  auto b = p.add_block(3);
  p.set_objective(b, HermMat::Identity(3, 3));
  p.add_constraint({{{b, Coefficient::dense(HermMat::Identity(3, 3))}},
                    Relation::LessEqual, 0.0, "tr<=0"});
  auto s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.objective_value, 0.0, 1e-6);
  EXPECT_LT(s.primal[0].norm(), 1e-6);
}

TEST(SdpSolve, InfeasibleDetected) {
  // tr(X) <= 1 and X_00 >= 2 cannot both hold.
  SdpProblem p(Sense::Maximize);
  auto b = p.add_block(2);
  p.set_objective(b, HermMat::Identity(2, 2));
  p.add_constraint({{{b, Coefficient::dense(HermMat::Identity(2, 2))}},
                    Relation::LessEqual, 1.0, "power"});
  p.add_constraint({{{b, Coefficient::entry(2, 0, 0, 1.0)}}, Relation::GreaterEqual,
                    2.0, "floor"});
  auto s = solve(p);
  EXPECT_EQ(s.status, Status::Infeasible);
}

TEST(SdpSolve, UnboundedDetected) {
  SdpProblem p(Sense::Maximize);
  auto b = p.add_block(2);
  p.set_objective(b, HermMat::Identity(2, 2));
  p.add_constraint({{{b, Coefficient::entry(2, 0, 0, 1.0)}}, Relation::GreaterEqual,
                    1.0, "floor"});
  auto s = solve(p);
  EXPECT_EQ(s.status, Status::Unbounded);
}

TEST(SdpSolve, MaxIterReportedHonestly) {
  std::mt19937_64 rng(1);
  auto p = max_eig_problem(testutil::random_hermitian(10, rng));
  SolverOptions opt;
  opt.max_iter = 2;
  auto s = solve(p, opt);
  EXPECT_EQ(s.status, Status::MaxIter);
  EXPECT_EQ(s.primal.size(), 1u);
}

TEST(SdpSolve, LambdaMaxPropertyUpToDim51) {
  std::mt19937_64 rng(2024);
  for (Eigen::Index n : {1, 2, 4, 9, 17, 33, 51}) {
    for (int rep = 0; rep < 3; ++rep) {
      HermMat c = testutil::random_hermitian(n, rng);
      auto s = solve(max_eig_problem(c));
      ASSERT_EQ(s.status, Status::Optimal) << "n=" << n;
      const double lmax = numerics::principal_eigvec(c).value;
      EXPECT_LE(std::abs(s.objective_value - lmax), 1e-6 * std::max(1.0, std::abs(lmax)))
          << "n=" << n;
      EXPECT_LT(s.gap, 1e-7);
      // Weak duality (maximization): primal <= dual + tolerance.
      EXPECT_LE(s.objective_value, s.dual_objective + 1e-7 * (1.0 + std::abs(lmax)));
    }
  }
}

TEST(SdpSolve, ScalingInvariance) {
  std::mt19937_64 rng(17);
  HermMat c = testutil::random_hermitian(6, rng);
  // Add a power constraint and a diagonal floor to make the argmax nontrivial.
  auto build = [&](double kappa) {
    SdpProblem p(Sense::Maximize);
    auto b = p.add_block(6);
    p.set_objective(b, c * kappa);
    p.add_constraint({{{b, Coefficient::dense(HermMat::Identity(6, 6))}},
                      Relation::LessEqual, 1.0, "power"});
    p.add_constraint({{{b, Coefficient::entry(6, 2, 2, 1.0)}}, Relation::GreaterEqual,
                      0.2, "floor"});
    return p;
  };
  auto s1 = solve(build(1.0));
  for (double kappa : {1e-6, 0.5, 30.0, 1e5}) {
    auto sk = solve(build(kappa));
    ASSERT_EQ(sk.status, Status::Optimal);
    EXPECT_NEAR(sk.objective_value / kappa, s1.objective_value,
                1e-6 * std::max(1.0, std::abs(s1.objective_value)));
    EXPECT_LT((sk.primal[0] - s1.primal[0]).norm(), 1e-6);
  }
}

TEST(SdpSolve, ComplementarySlacknessAndDualSigns) {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    HermMat c = testutil::random_psd(4, rng);
    CVec h = testutil::random_cvec(4, rng);
    SdpProblem p(Sense::Maximize);
    auto b = p.add_block(4);
    p.set_objective(b, c);
    p.add_constraint({{{b, Coefficient::dense(HermMat::Identity(4, 4))}},
                      Relation::LessEqual, 1.0, "power"});
    p.add_constraint({{{b, Coefficient::dense(h * h.adjoint())}}, Relation::GreaterEqual,
                      0.3 * h.squaredNorm(), "sinr"});
    auto s = solve(p);
    ASSERT_EQ(s.status, Status::Optimal);
    auto r = check_kkt(p, s);
    EXPECT_LT(r.max_complementary_slackness, 1e-6);
    EXPECT_LT(r.dual_feasibility, 1e-7);
    for (double d : s.dual) EXPECT_GE(d, -1e-9);
  }
}

TEST(SdpSolve, MinimizationWithEqualities) {
  // min tr(X) s.t. X_00 = 1, X_11 = 2, Re X_01 = 1  -> X = [[1,1],[1,2]], obj 3.
  SdpProblem p(Sense::Minimize);
  auto b = p.add_block(2);
  p.set_objective(b, HermMat::Identity(2, 2));
  p.add_constraint({{{b, Coefficient::entry(2, 0, 0, 1.0)}}, Relation::Equal, 1.0, "x00"});
  p.add_constraint({{{b, Coefficient::entry(2, 1, 1, 1.0)}}, Relation::Equal, 2.0, "x11"});
  p.add_constraint({{{b, Coefficient::entry(2, 0, 1, 0.5)}}, Relation::Equal, 1.0, "x01"});
  auto s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  EXPECT_NEAR(s.objective_value, 3.0, 1e-6);
  EXPECT_NEAR(s.primal[0](0, 1).real(), 1.0, 1e-6);
  auto r = check_kkt(p, s);
  EXPECT_LT(r.dual_feasibility, 1e-7);
  EXPECT_LT(r.gap, 1e-7);
}

TEST(CheckKkt, PerturbedPrimalIsFlagged) {
  HermMat c = HermMat::Zero(3, 3);
  c(0, 0) = 1.0;
  c(1, 1) = 4.0;
  c(2, 2) = 2.0;
  auto p = max_eig_problem(c);
  auto s = solve(p);
  ASSERT_EQ(s.status, Status::Optimal);
  auto bad = s;
  bad.primal[0] += 0.1 * HermMat::Identity(3, 3);
  EXPECT_GT(check_kkt(p, bad).primal_feasibility, 1e-3);
  // Renormalized to unit trace it stays feasible but loses optimality.
  bad.primal[0] /= bad.primal[0].trace().real();
  bad.objective_value = p.objective_value(bad.primal);
  EXPECT_GT(check_kkt(p, bad).gap, 1e-3);
}

TEST(SdpProblem, RejectsMalformed) {
  SdpProblem p;
  EXPECT_THROW(p.add_block(0), std::invalid_argument);
  auto b = p.add_block(2);
  EXPECT_THROW(p.set_objective(b, HermMat::Identity(3, 3)), std::invalid_argument);
  EXPECT_THROW(p.add_constraint({{{5, Coefficient::entry(2, 0, 0, 1.0)}}, Relation::Equal,
                                 1.0, ""}),
               std::invalid_argument);
  HermMat bad = HermMat::Zero(2, 2);
  bad(0, 1) = 1.0;
  p.set_objective(b, bad);
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(SdpDump, WritesBlocksAndConstraints) {
  auto p = max_eig_problem(HermMat::Identity(2, 2));
  std::ostringstream os;
  dump(p, os);
  const auto text = os.str();
  EXPECT_NE(text.find("sense max"), std::string::npos);
  EXPECT_NE(text.find("blocks 1 2"), std::string::npos);
  EXPECT_NE(text.find("constraint 0 = 1 1"), std::string::npos);
}
