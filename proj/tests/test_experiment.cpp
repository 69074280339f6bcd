#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "reachbound/experiment.hpp"

using namespace reachbound;

TEST(Experiment, SingleRowIsSound) {
  ConvergenceConfig cfg;
  cfg.set_kind = ShapeKind::set_U;
  cfg.n_list = {2};
  cfg.reps = 1;
  cfg.base_seed = 5;
  const auto t = run_convergence(cfg);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_GE(t.rows[0].rconv_bound, 1.0);
  EXPECT_GE(t.rows[0].reach_bound, 1.0);
  EXPECT_EQ(t.rows[0].seed, 5u);
  EXPECT_NEAR(t.rows[0].epsilon_rconv, 0.35 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(t.rows[0].epsilon_reach, std::sqrt(1.25) * 0.35, 1e-15);
}

TEST(Experiment, DeterministicCsvAndSeeds) {
  ConvergenceConfig cfg;
  cfg.set_kind = ShapeKind::set_W;
  cfg.n_list = {2, 3};
  cfg.reps = 2;
  cfg.base_seed = 100;
  const auto a = run_convergence(cfg);
  const auto b = run_convergence(cfg);
  std::ostringstream sa, sb;
  write_experiment_csv(sa, a);
  write_experiment_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  for (std::size_t k = 0; k < a.rows.size(); ++k) EXPECT_EQ(a.rows[k].seed, 100 + k);
  // Any single row can be reproduced from its index alone.
  const auto row = run_replication(cfg, 3, 1, 3);
  EXPECT_EQ(row.rconv_bound, a.rows[3].rconv_bound);
  EXPECT_EQ(row.reach_bound, a.rows[3].reach_bound);
}

TEST(Experiment, RateFitExactRecovery) {
  std::vector<std::pair<double, double>> nm;
  for (double n : {2.0, 3.0, 4.0, 6.0, 8.0}) nm.emplace_back(n, 1.0 + 2.0 / n);
  const auto fit = rate_fit(nm, 1.0);
  EXPECT_NEAR(fit.coefficient, 2.0, 1e-12);
  EXPECT_NEAR(fit.exponent, 1.0, 1e-12);
  // Non-integer exponents are recovered too.
  nm.clear();
  for (double n = 2; n <= 12; ++n) nm.emplace_back(n, 1.0 + 1.71 * std::pow(n, -0.59));
  const auto u = rate_fit(nm, 1.0);
  EXPECT_NEAR(u.coefficient, 1.71, 1e-9);
  EXPECT_NEAR(u.exponent, 0.59, 1e-9);
}

TEST(Experiment, RateFitNeedsThreePoints) {
  EXPECT_THROW(rate_fit({{2, 1.5}, {3, 1.2}, {4, 0.9}}, 1.0), PreconditionError);
  EXPECT_THROW(rate_fit({{2, 1.5}, {2, 1.2}, {4, 1.1}}, 1.0), PreconditionError);
}

TEST(Experiment, RejectsBadConfig) {
  ConvergenceConfig cfg;
  cfg.n_list = {};
  EXPECT_THROW(run_convergence(cfg), PreconditionError);
  cfg.n_list = {2};
  cfg.reps = 0;
  EXPECT_THROW(run_convergence(cfg), PreconditionError);
  cfg.reps = 1;
  cfg.set_kind = ShapeKind::disk;
  EXPECT_THROW(run_convergence(cfg), PreconditionError);
}
