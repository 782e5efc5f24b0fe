#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "solve.hpp"

using namespace lapbel;

TEST_CASE("constant data reproduces the constant solution") {
  auto mesh = build_icosphere(3);
  SparseSpdMatrix A = assemble_operator(*mesh);
  Eigen::VectorXd load = assemble_load_l2(*mesh, [](const Vec3&) { return 1.0; });
  for (SolveMethod method : {SolveMethod::ConjugateGradient, SolveMethod::Direct}) {
    SolverConfig cfg;
    cfg.method = method;
    Eigen::VectorXd z = green_solve(A, load, cfg);
    CHECK((z - Eigen::VectorXd::Ones(z.size())).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("CG and direct solutions agree") {
  for (int level : {2, 3}) {
    auto mesh = build_icosphere(level);
    SparseSpdMatrix A = assemble_operator(*mesh);
    Eigen::VectorXd load =
        assemble_load_l2(*mesh, [](const Vec3& x) { return x.z() + 0.5 * x.x(); });
    SolverConfig cg;
    cg.rel_tolerance = 1e-12;
    SolverConfig direct;
    direct.method = SolveMethod::Direct;
    Eigen::VectorXd zc = green_solve(A, load, cg);
    Eigen::VectorXd zd = green_solve(A, load, direct);
    CHECK((zc - zd).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("Green operator is self-adjoint in the mass inner product") {
  auto mesh = build_icosphere(3);
  SparseSpdMatrix A = assemble_operator(*mesh);
  SparseSpdMatrix M = assemble_mass(*mesh);
  SolverConfig cfg;
  cfg.rel_tolerance = 1e-12;
  std::mt19937 rng(42);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd f(mesh->vertex_count()), g(mesh->vertex_count());
    for (int i = 0; i < f.size(); ++i) {
      f[i] = gauss(rng);
      g[i] = gauss(rng);
    }
    CHECK(green_adjoint_check(A, M, f, g, cfg) <= 1e-9);
  }
  Eigen::VectorXd f = Eigen::VectorXd::LinSpaced(mesh->vertex_count(), -1.0, 2.0);
  CHECK(green_adjoint_check(A, M, f, f, cfg) == 0.0);
}

TEST_CASE("near-monotone solution for nonnegative concentrated data") {
  auto mesh = build_icosphere(3);
  SparseSpdMatrix A = assemble_operator(*mesh);
  Eigen::VectorXd load =
      assemble_load_l2(*mesh, [](const Vec3& x) { return std::exp(3.0 * (x.z() - 1.0)); });
  Eigen::VectorXd z = green_solve(A, load);
  CHECK(z.minCoeff() >= -1e-3);
}

TEST_CASE("solver config validation") {
  auto mesh = build_icosphere(1);
  SparseSpdMatrix A = assemble_operator(*mesh);
  Eigen::VectorXd load = Eigen::VectorXd::Ones(A.dimension);

  SolverConfig bad_tol;
  bad_tol.rel_tolerance = 1e-3; // above the 1e-4 cap
  CHECK_THROWS_AS(green_solve(A, load, bad_tol), Error);

  SolverConfig low_iter;
  low_iter.max_iterations = 3; // below the dimension
  CHECK_THROWS_AS(green_solve(A, load, low_iter), Error);

  Eigen::VectorXd wrong(5);
  CHECK_THROWS_AS(green_solve(A, wrong), Error);
}

TEST_CASE("zero load gives the zero solution without iterations") {
  auto mesh = build_icosphere(1);
  SparseSpdMatrix A = assemble_operator(*mesh);
  Eigen::VectorXd z = green_solve(A, Eigen::VectorXd::Zero(A.dimension));
  CHECK(z.cwiseAbs().maxCoeff() == 0.0);
}
