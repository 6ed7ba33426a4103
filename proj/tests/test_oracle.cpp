#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "sla/material.hpp"
#include "sla/oracle.hpp"
#include "test_helpers.hpp"

namespace sla {
namespace {

using test::rel_diff;

MaterialParams params() {
  MaterialParams m;
  m.rho0 = 2000.0;
  m.s1 = 800.0;
  m.s2 = -450.0;
  m.lambda = -3e3;
  m.mu1 = 1.2e4;
  m.mu2 = 900.0;
  m.mu3 = 1.4e3;
  m.beta = 1.5e3;
  return m;
}

TEST(Oracle, SuiteMeetsTolerance) {
  const auto t0 = std::chrono::steady_clock::now();
  const oracle::KernelReport r = oracle::validate_kernels(100);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(r.samples, 100);
  EXPECT_LT(r.max_rel_error_elasticity, 1e-5);
  EXPECT_LT(r.max_rel_error_viscosity, 1e-5);
  EXPECT_LT(seconds, 5.0);
}

TEST(Oracle, SuiteIsReproducibleForSeed) {
  const auto a = oracle::validate_kernels(20, 99);
  const auto b = oracle::validate_kernels(20, 99);
  EXPECT_EQ(a.max_rel_error_elasticity, b.max_rel_error_elasticity);
  EXPECT_EQ(a.max_rel_error_viscosity, b.max_rel_error_viscosity);
}

TEST(Oracle, ReferenceConfigurationClosedForm) {
  const MaterialParams m = params();
  const Tensor2 H{0.3, -0.2, 0.7, 0.1};
  const Tensor2 S = H + transpose(H);
  const Tensor2 closed = m.beta * trace(H) * Tensor2::identity() + m.s1 * S - m.s2 * S;
  EXPECT_LT(rel_diff(oracle::fd_elasticity(Tensor2::identity(), H, m), closed), 1e-7);
  EXPECT_LT(rel_diff(elasticity_apply(Tensor2::identity(), H, m), closed), 1e-14);
}

TEST(Oracle, MatchesTangentsOnRandomStates) {
  std::mt19937_64 rng(21);
  const MaterialParams m = params();
  for (int i = 0; i < 100; ++i) {
    const Tensor2 F = test::random_deformation(rng, 0.5);
    const Tensor2 H = test::random_tensor(rng);
    EXPECT_LT(rel_diff(elasticity_apply(F, H, m), oracle::fd_elasticity(F, H, m)), 1e-5);
    EXPECT_LT(rel_diff(viscosity_apply(F, H, m), oracle::fd_viscosity(F, H, m)), 1e-5);
  }
}

// The oracle must be able to tell a wrong volumetric sign apart.
TEST(Oracle, DetectsWrongVolumetricSign) {
  const MaterialParams m = params();
  const Tensor2 F{1.1, 0.1, -0.05, 0.95};
  const Tensor2 H = Tensor2::diag(0.2, 0.1);
  const Tensor2 wrong =
      elasticity_apply(F, H, m) - 2.0 * m.beta * trace(H) * Tensor2::identity();
  EXPECT_GT(rel_diff(wrong, oracle::fd_elasticity(F, H, m)), 1e-2);
}

TEST(Oracle, ConstitutiveStressAtRestIsElasticStress) {
  const MaterialParams m = params();
  const Tensor2 F{1.05, 0.2, 0.0, 0.97};
  const double p = -m.beta * std::log(det(F));
  EXPECT_LT(rel_diff(oracle::constitutive_stress(F, Tensor2::zero(), m),
                     elastic_stress(p, left_cauchy_green(F), m)),
            1e-14);
}

}  // namespace
}  // namespace sla
