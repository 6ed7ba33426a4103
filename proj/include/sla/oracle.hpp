#pragma once

// Numerical differentiation of the full constitutive map, kept independent
// of the closed-form tensors in material.hpp so that it can check them.

#include <cstdint>

#include "sla/material.hpp"

namespace sla::oracle {

/// Full Cauchy stress T(F, Fdot) of the Mooney-Rivlin-type solid with the
/// pressure law p(J) = -beta ln(J), J = det F (so rho dp/drho = beta), and
/// D = sym(Fdot F^-1).
Tensor2 constitutive_stress(const Tensor2& F, const Tensor2& Fdot, const MaterialParams& m);

/// Central difference of T along F -> F + h H F at Fdot = 0.
Tensor2 fd_elasticity(const Tensor2& F, const Tensor2& H, const MaterialParams& m,
                      double h = 1e-6);

/// Central difference of T along Fdot -> h Hdot F at Fdot = 0.
Tensor2 fd_viscosity(const Tensor2& F, const Tensor2& Hdot, const MaterialParams& m,
                     double h = 1e-6);

struct KernelReport {
  int samples = 0;
  double max_rel_error_elasticity = 0.0;
  double max_rel_error_viscosity = 0.0;

  double max_rel_error() const {
    return max_rel_error_elasticity > max_rel_error_viscosity ? max_rel_error_elasticity
                                                              : max_rel_error_viscosity;
  }
};

/// Compares the closed-form L and M against the finite-difference oracle on
/// `samples` random states with ||F - I|| <= max_strain. Material parameters
/// are drawn alongside each state; all four viscosities are non-zero.
KernelReport validate_kernels(int samples = 100, std::uint64_t seed = 12345,
                              double max_strain = 0.5, double h = 1e-6);

}  // namespace sla::oracle
