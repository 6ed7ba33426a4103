#pragma once

// Constitutive kernels for the Mooney-Rivlin-type viscoelastic solid
//
//   T = -p I + s1 B + s2 B^-1 + lambda tr(D) I + 2 mu1 D
//           + mu2 (D B + B D) + mu3 (D B^-1 + B^-1 D),
//
// linearized about the current configuration. H is the gradient of the step
// displacement with respect to current coordinates, so F_next = (I + H) F.
//
// Units: m, Pa, kg/m^3, Ma. Viscosities are in Pa*Ma, so M[Hdot] with Hdot
// in 1/Ma is already in Pa.

#include "sla/tensor.hpp"

namespace sla {

struct MaterialParams {
  double rho0 = 0.0;    ///< reference density, kg/m^3
  double s1 = 0.0;      ///< Pa
  double s2 = 0.0;      ///< Pa
  double lambda = 0.0;  ///< Pa*Ma
  double mu1 = 0.0;     ///< Pa*Ma
  double mu2 = 0.0;     ///< Pa*Ma
  double mu3 = 0.0;     ///< Pa*Ma
  double beta = 0.0;    ///< volumetric penalty, Pa

  friend bool operator==(const MaterialParams&, const MaterialParams&) = default;
};

/// Throws ValidationError when rho0 or beta is non-positive or any value is
/// non-finite. With `nearly_incompressible`, beta must also exceed
/// 1e3 * max(|s1|, |s2|).
void validate(const MaterialParams& m, bool nearly_incompressible = false);

/// Evolving state carried by one quadrature point.
struct PointState {
  Tensor2 F = Tensor2::identity();  ///< deformation gradient w.r.t. the initial configuration
  Tensor2 Te = Tensor2::zero();     ///< elastic Cauchy stress, Pa
  double p = 0.0;                   ///< pressure, Pa
  double rho = 0.0;                 ///< current density, kg/m^3
  Tensor2 H_prev = Tensor2::zero(); ///< last step's relative displacement gradient

  friend bool operator==(const PointState&, const PointState&) = default;
};

enum class StressUpdate {
  Increment,  ///< Te += L(F)[H]
  Recompute,  ///< Te = -p I + s1 B + s2 B^-1 from the updated p and F
};

/// B = F F^T.
Tensor2 left_cauchy_green(const Tensor2& F);

/// -p I + s1 B + s2 B^-1.
Tensor2 elastic_stress(double p, const Tensor2& B, const MaterialParams& m);

/// L(F)[H] = beta tr(H) I + s1 (H B + B H^T) - s2 (B^-1 H + H^T B^-1).
///
/// The volumetric term carries a plus sign: it follows from p' = p - beta tr H
/// substituted into T = -p I + ..., and keeps the penalty coercive.
Tensor2 elasticity_apply(const Tensor2& F, const Tensor2& H, const MaterialParams& m);

/// M(F)[Hdot] = lambda tr(Hdot) I + M0 (Hdot + Hdot^T) + (Hdot + Hdot^T) M0,
/// with M0 = (mu1 I + mu2 B + mu3 B^-1) / 2.
Tensor2 viscosity_apply(const Tensor2& F, const Tensor2& Hdot, const MaterialParams& m);

/// K(F, Te)[H] = tr(H) Te - Te H^T + L(F)[H].
Tensor2 piola_elasticity_apply(const Tensor2& F, const Tensor2& Te, const Tensor2& H,
                               const MaterialParams& m);

/// First Piola-Kirchhoff stress relative to the current configuration,
/// Te + K(F, Te)[H] + M(F)[Hdot].
Tensor2 linearized_piola_stress(const PointState& st, const Tensor2& H, const Tensor2& Hdot,
                                const MaterialParams& m);

/// p - beta tr(H).
double pressure_update(double p, const Tensor2& H, double beta);

/// rho / det(I + H). Throws ElementInverted if det(I + H) <= 0.
double density_update(double rho, const Tensor2& H);

/// Advances one point through a step with relative displacement gradient H.
/// The stored stress is symmetrized after the update.
PointState update_point_state(const PointState& st, const Tensor2& H, double dt,
                              const MaterialParams& m,
                              StressUpdate mode = StressUpdate::Increment);

/// Stress-free reference state (F = I) with the given Cauchy stress, where
/// the stress is assumed to be a pure pressure -q I. p is chosen so that
/// elastic_stress(p, I) reproduces Te.
PointState hydrostatic_point(double q, const MaterialParams& m);

}  // namespace sla
