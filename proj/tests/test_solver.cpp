#include <gtest/gtest.h>

#include <map>
#include <random>

#include "pmp/solver.hpp"

using namespace pmp::nlp;

namespace {

Poly x(int i) { return Poly::var(i); }

Problem named(int n) {
  Problem p;
  for (int i = 0; i < n; ++i) p.var_names.push_back("x" + std::to_string(i));
  return p;
}

Poly random_poly(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> var(0, n - 1), deg(0, 4), count(1, 6);
  std::uniform_real_distribution<double> coef(-2, 2);
  Poly p;
  const int terms = count(rng);
  for (int t = 0; t < terms; ++t) {
    Poly m = coef(rng);
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) m = m * x(var(rng));
    p += m;
  }
  return p;
}

}  // namespace

TEST(Poly, ArithmeticAndEvaluation) {
  const Poly p = (x(0) + 2.0) * (x(1) - x(0)) + 3.0 * x(2) * x(2);
  const std::vector<double> v{1.0, 4.0, -2.0};
  EXPECT_DOUBLE_EQ(p(v), 3.0 * 3.0 + 12.0);
  EXPECT_EQ(p.degree(), 2);
  EXPECT_EQ(p.support(), (std::vector<int>{0, 1, 2}));
  EXPECT_TRUE((x(0) - x(0)).is_zero());
}

TEST(Poly, DerivativesMatchFiniteDifferences) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  constexpr int n = 4;
  for (int trial = 0; trial < 100; ++trial) {
    const Poly p = random_poly(rng, n);
    std::vector<double> pt(n);
    for (auto& v : pt) v = u(rng);
    std::vector<double> grad(n, 0.0);
    p.gradient(pt, 1.0, [&](int i, double g) { grad[i] += g; });
    std::map<std::pair<int, int>, double> hess;
    p.hessian(pt, 1.0, [&](int i, int j, double h) { hess[{i, j}] += h; });
    const double h = 1e-5;
    for (int i = 0; i < n; ++i) {
      auto plus = pt, minus = pt;
      plus[i] += h;
      minus[i] -= h;
      EXPECT_NEAR(grad[i], (p(plus) - p(minus)) / (2 * h), 1e-6 * std::max(1.0, std::abs(grad[i])));
      for (int j = 0; j <= i; ++j) {
        std::vector<double> gp(n, 0.0), gm(n, 0.0);
        p.gradient(plus, 1.0, [&](int k, double g) { gp[k] += g; });
        p.gradient(minus, 1.0, [&](int k, double g) { gm[k] += g; });
        const double fd = (gp[j] - gm[j]) / (2 * h);
        const double exact = hess.count({i, j}) ? hess[{i, j}] : 0.0;
        EXPECT_NEAR(exact, fd, 1e-6 * std::max(1.0, std::abs(exact)));
      }
    }
  }
}

TEST(Solver, QuadraticWithActiveBound) {
  // min x0^2 + x1^2  s.t. x0 + x1 = 2, x0 <= 0.5  ->  (0.5, 1.5).
  Problem p = named(2);
  p.objective = x(0) * x(0) + x(1) * x(1);
  p.equalities.push_back({x(0) + x(1), 2.0, "sum"});
  p.inequalities.push_back({x(0), -kInf, 0.5, "cap"});
  SolverOptions opt;
  opt.tol_compl = 1e-10;
  opt.tol_dual = 1e-10;
  const auto r = solve(p, {0.0, 0.0}, opt);
  ASSERT_TRUE(r.ok()) << to_string(r.status);
  EXPECT_NEAR(r.x[0], 0.5, 1e-8);
  EXPECT_NEAR(r.x[1], 1.5, 1e-8);
  EXPECT_NEAR(r.objective, 2.5, 1e-8);
}

TEST(Solver, QuadraticWithInactiveBound) {
  Problem p = named(2);
  p.objective = (x(0) - 1.0) * (x(0) - 1.0) + (x(1) - 2.0) * (x(1) - 2.0);
  p.inequalities.push_back({x(0) + x(1), -kInf, 10.0, "loose"});
  SolverOptions opt;
  opt.tol_compl = 1e-10;
  const auto r = solve(p, {5.0, -3.0}, opt);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r.x[0], 1.0, 1e-8);
  EXPECT_NEAR(r.x[1], 2.0, 1e-8);
}

TEST(Solver, Rosenbrock) {
  Problem p = named(2);
  const Poly a = 1.0 - x(0);
  const Poly b = x(1) - x(0) * x(0);
  p.objective = a * a + 100.0 * b * b;
  SolverOptions opt;
  opt.tol_dual = 1e-9;
  const auto r = solve(p, {-1.2, 1.0}, opt);
  ASSERT_TRUE(r.ok()) << to_string(r.status);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 1.0, 1e-6);
}

// Hock-Schittkowski problem 71, the standard nonconvex test with a product
// inequality, a sphere equality and box bounds.
TEST(Solver, Hs071) {
  Problem p = named(4);
  p.objective = x(0) * x(3) * (x(0) + x(1) + x(2)) + x(2);
  p.inequalities.push_back({x(0) * x(1) * x(2) * x(3), 25.0, kInf, "product"});
  p.equalities.push_back({x(0) * x(0) + x(1) * x(1) + x(2) * x(2) + x(3) * x(3), 40.0, "sphere"});
  for (int i = 0; i < 4; ++i) p.inequalities.push_back({x(i), 1.0, 5.0, "box"});
  SolverOptions opt;
  opt.tol_compl = 1e-9;
  const auto r = solve(p, {1.0, 5.0, 5.0, 1.0}, opt);
  ASSERT_TRUE(r.ok()) << to_string(r.status);
  EXPECT_NEAR(r.objective, 17.0140173, 1e-6);
  EXPECT_NEAR(r.x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.x[1], 4.7429994, 1e-6);
  EXPECT_NEAR(r.x[2], 3.8211503, 1e-6);
  EXPECT_NEAR(r.x[3], 1.3794082, 1e-6);
  EXPECT_LT(primal_violation(p, r.x), 1e-8);
}

TEST(Solver, InconsistentEqualitiesDoNotConverge) {
  Problem p = named(1);
  p.objective = x(0);
  p.equalities.push_back({x(0), 1.0, "a"});
  p.equalities.push_back({x(0), 2.0, "b"});
  SolverOptions opt;
  opt.max_iterations = 50;
  EXPECT_FALSE(solve(p, {0.0}, opt).ok());
}

TEST(PrimalViolation, ReportsWorstResidual) {
  Problem p = named(2);
  p.equalities.push_back({x(0) + x(1), 1.0, "eq"});
  p.inequalities.push_back({x(0), 0.0, 0.5, "box"});
  EXPECT_DOUBLE_EQ(primal_violation(p, std::vector<double>{0.25, 0.75}), 0.0);
  EXPECT_DOUBLE_EQ(primal_violation(p, std::vector<double>{0.75, 0.75}), 0.5);
  EXPECT_DOUBLE_EQ(primal_violation(p, std::vector<double>{-0.2, 1.2}), 0.2);
}

TEST(ConstraintJacobian, MatchesFiniteDifferences) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  Problem p = named(3);
  p.equalities.push_back({x(0) * x(1) - x(2), 0.0, "e"});
  p.inequalities.push_back({x(2) * x(2) * x(0), -1.0, 1.0, "i"});
  std::vector<double> pt{u(rng), u(rng), u(rng)};
  const auto J = constraint_jacobian(p, pt);
  ASSERT_EQ(J.rows(), 2);
  ASSERT_EQ(J.cols(), 3);
  const double h = 1e-6;
  for (int j = 0; j < 3; ++j) {
    auto plus = pt, minus = pt;
    plus[j] += h;
    minus[j] -= h;
    EXPECT_NEAR(J(0, j), (p.equalities[0].g(plus) - p.equalities[0].g(minus)) / (2 * h), 1e-8);
    EXPECT_NEAR(J(1, j), (p.inequalities[0].g(plus) - p.inequalities[0].g(minus)) / (2 * h), 1e-8);
  }
}
