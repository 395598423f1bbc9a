#pragma once

#include <complex>
#include <optional>

#include "sparsecp/phase_diagram.hpp"

namespace sparsecp {

using cplx = std::complex<double>;

/// Inputs of the limit-ratio formulas. beta and gamma_coeff are only
/// meaningful (and only filled by make_limit_params) where the star saddle exists.
struct LimitParams {
  double p = 0.0;
  cplx z0{};
  std::optional<double> beta;
  std::optional<double> gamma_coeff;
};

/// Local coordinates around z0: z_j = z0 + zeta_j / sqrt(n).
struct Displacement {
  cplx zeta1{};
  cplx zeta2{};
};

/// exp(-|w1|^2/2 - |w2|^2/2 + w1 conj(w2)).
cplx ginibre_kernel(cplx w1, cplx w2);

/// Root beta in [0, 1] of p beta - p + 2 = p z (1-beta)^2 (2 - p z (1-beta)),
/// z = |z0|^2. Throws DomainError when no root exists in [0, 1] (the point
/// is then outside the star region).
double beta_solve(double p, double z0sq);

/// 2b^2(1 - (1-4a+2a^2)b^2) / ((1 - (1-4a+3a^2)b^2)(1 + (2a-2a^2)b^2)) at
/// b^2 = 2/p and the star alpha. Throws DomainError when the star saddle is
/// absent or a denominator factor is not positive.
double gamma_coeff(double p, double z0sq);
double gamma_coeff_at(double alpha, double b);

/// Fills beta and gamma_coeff when the star saddle exists at (sqrt(2/p), |z0|^2).
LimitParams make_limit_params(double p, cplx z0);

/// (1 - exp(-x)) / x, with its series near 0.
double kernel_det_ratio(double x);

/// Limiting normalized ratio f2(z1,z2)/sqrt(f2(z1,z1) f2(z2,z2)) in `region`.
/// Throws DomainError for Region::Boundary or when region is Omega1 and beta
/// or gamma_coeff is missing.
double limit_ratio(Region region, const LimitParams& params, const Displacement& d);

/// The beta = 1, gamma = 0 case: (1 - exp(-|zeta1 - zeta2|^2)) / |zeta1 - zeta2|^2.
double ginibre_limit_ratio(const Displacement& d);

}  // namespace sparsecp
