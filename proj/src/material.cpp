#include "sla/material.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sla {

void validate(const MaterialParams& m, bool nearly_incompressible) {
  for (double v : {m.rho0, m.s1, m.s2, m.lambda, m.mu1, m.mu2, m.mu3, m.beta}) {
    if (!std::isfinite(v)) throw ValidationError("material parameter is not finite");
  }
  if (m.rho0 <= 0.0) throw ValidationError("rho0 must be positive");
  if (m.beta <= 0.0) throw ValidationError("beta must be positive");
  if (nearly_incompressible && m.beta < 1e3 * std::max(std::abs(m.s1), std::abs(m.s2))) {
    throw ValidationError("beta must dominate s1 and s2 for a nearly incompressible material");
  }
}

Tensor2 left_cauchy_green(const Tensor2& F) { return F * transpose(F); }

Tensor2 elastic_stress(double p, const Tensor2& B, const MaterialParams& m) {
  return -p * Tensor2::identity() + m.s1 * B + m.s2 * inverse(B);
}

Tensor2 elasticity_apply(const Tensor2& F, const Tensor2& H, const MaterialParams& m) {
  const Tensor2 B = left_cauchy_green(F);
  const Tensor2 Binv = inverse(B);
  const Tensor2 Ht = transpose(H);
  return m.beta * trace(H) * Tensor2::identity() + m.s1 * (H * B + B * Ht) -
         m.s2 * (Binv * H + Ht * Binv);
}

Tensor2 viscosity_apply(const Tensor2& F, const Tensor2& Hdot, const MaterialParams& m) {
  const Tensor2 B = left_cauchy_green(F);
  Tensor2 M0 = 0.5 * (m.mu1 * Tensor2::identity() + m.mu2 * B);
  if (m.mu3 != 0.0) M0 += 0.5 * m.mu3 * inverse(B);
  const Tensor2 S = Hdot + transpose(Hdot);
  return m.lambda * trace(Hdot) * Tensor2::identity() + M0 * S + S * M0;
}

Tensor2 piola_elasticity_apply(const Tensor2& F, const Tensor2& Te, const Tensor2& H,
                               const MaterialParams& m) {
  return trace(H) * Te - Te * transpose(H) + elasticity_apply(F, H, m);
}

Tensor2 linearized_piola_stress(const PointState& st, const Tensor2& H, const Tensor2& Hdot,
                                const MaterialParams& m) {
  return st.Te + piola_elasticity_apply(st.F, st.Te, H, m) + viscosity_apply(st.F, Hdot, m);
}

double pressure_update(double p, const Tensor2& H, double beta) { return p - beta * trace(H); }

double density_update(double rho, const Tensor2& H) {
  const double J = det(Tensor2::identity() + H);
  if (!(J > 0.0)) {
    throw ElementInverted("det(I + H) = " + std::to_string(J) + " is not positive");
  }
  return rho / J;
}

PointState update_point_state(const PointState& st, const Tensor2& H, double dt,
                              const MaterialParams& m, StressUpdate mode) {
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  PointState next;
  next.rho = density_update(st.rho, H);
  next.F = (Tensor2::identity() + H) * st.F;
  next.p = pressure_update(st.p, H, m.beta);
  if (mode == StressUpdate::Increment) {
    next.Te = sym(st.Te + elasticity_apply(st.F, H, m));
  } else {
    next.Te = sym(elastic_stress(next.p, left_cauchy_green(next.F), m));
  }
  next.H_prev = H;
  return next;
}

PointState hydrostatic_point(double q, const MaterialParams& m) {
  PointState st;
  st.F = Tensor2::identity();
  st.Te = -q * Tensor2::identity();
  st.p = q + m.s1 + m.s2;
  st.rho = m.rho0;
  st.H_prev = Tensor2::zero();
  return st;
}

}  // namespace sla
