#include "sla/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace sla::oracle {

Tensor2 constitutive_stress(const Tensor2& F, const Tensor2& Fdot, const MaterialParams& m) {
  const double J = det(F);
  const Tensor2 I = Tensor2::identity();
  const Tensor2 B = F * transpose(F);
  const Tensor2 Binv = inverse(B);
  const Tensor2 D = sym(Fdot * inverse(F));
  const double p = -m.beta * std::log(J);
  return -p * I + m.s1 * B + m.s2 * Binv + m.lambda * trace(D) * I + 2.0 * m.mu1 * D +
         m.mu2 * (D * B + B * D) + m.mu3 * (D * Binv + Binv * D);
}

Tensor2 fd_elasticity(const Tensor2& F, const Tensor2& H, const MaterialParams& m, double h) {
  const Tensor2 dF = H * F;
  const Tensor2 plus = constitutive_stress(F + h * dF, Tensor2::zero(), m);
  const Tensor2 minus = constitutive_stress(F - h * dF, Tensor2::zero(), m);
  return (1.0 / (2.0 * h)) * (plus - minus);
}

Tensor2 fd_viscosity(const Tensor2& F, const Tensor2& Hdot, const MaterialParams& m, double h) {
  const Tensor2 dFdot = Hdot * F;
  const Tensor2 plus = constitutive_stress(F, h * dFdot, m);
  const Tensor2 minus = constitutive_stress(F, -h * dFdot, m);
  return (1.0 / (2.0 * h)) * (plus - minus);
}

namespace {

double relative_error(const Tensor2& got, const Tensor2& want) {
  const double scale = std::max(frobenius_norm(want), 1e-300);
  return frobenius_norm(got - want) / scale;
}

}  // namespace

KernelReport validate_kernels(int samples, std::uint64_t seed, double max_strain, double h) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> positive(0.5, 2.0);

  auto random_tensor = [&] { return Tensor2{unit(rng), unit(rng), unit(rng), unit(rng)}; };

  KernelReport report;
  for (int i = 0; i < samples; ++i) {
    Tensor2 G = random_tensor();
    const double g = frobenius_norm(G);
    if (g > 0.0) G *= max_strain * std::abs(unit(rng)) / g;
    const Tensor2 F = Tensor2::identity() + G;

    MaterialParams m;
    m.rho0 = 2000.0 * positive(rng);
    m.s1 = 1e3 * unit(rng);
    m.s2 = 1e3 * unit(rng);
    m.lambda = 1e4 * unit(rng);
    m.mu1 = 1e4 * positive(rng);
    m.mu2 = 1e3 * positive(rng);
    m.mu3 = 1e3 * positive(rng);
    m.beta = 1e3 * positive(rng);

    const Tensor2 H = random_tensor();
    const Tensor2 Hdot = random_tensor();

    report.max_rel_error_elasticity = std::max(
        report.max_rel_error_elasticity,
        relative_error(elasticity_apply(F, H, m), fd_elasticity(F, H, m, h)));
    report.max_rel_error_viscosity = std::max(
        report.max_rel_error_viscosity,
        relative_error(viscosity_apply(F, Hdot, m), fd_viscosity(F, Hdot, m, h)));
    ++report.samples;
  }
  return report;
}

}  // namespace sla::oracle
