#include "sparsecp/limit_laws.hpp"

#include <cmath>
#include <sstream>

#include "sparsecp/errors.hpp"
#include "sparsecp/roots.hpp"

namespace sparsecp {

cplx ginibre_kernel(cplx w1, cplx w2) {
  return std::exp(-0.5 * std::norm(w1) - 0.5 * std::norm(w2) + w1 * std::conj(w2));
}

double beta_solve(double p, double z0sq) {
  if (!(p > 0) || !(z0sq >= 0)) throw DomainError("beta_solve requires p > 0 and |z0|^2 >= 0");
  if (z0sq == 0) {
    if (p < 2) throw DomainError("beta_solve: |z0|^2 = 0 with p < 2 is outside the star region");
    return 1 - 2 / p;
  }
  // In u = 1 - beta: F(u) = -p^2 z^2 u^3 + 2 p z u^2 + p u - 2, F(0) = -2.
  // F increases up to its positive critical point u_c, so the smallest
  // positive root (the one continuous with u = 2/p at z = 0) lies in [0, u_c].
  const double pz = p * z0sq;
  auto F = [p, pz](double u) { return ((-pz * pz * u + 2 * pz) * u + p) * u - 2; };
  auto dF = [p, pz](double u) { return (-3 * pz * pz * u + 4 * pz) * u + p; };
  const double u_c = (4 * pz + std::sqrt(16 * pz * pz + 12 * p * pz * pz)) / (6 * pz * pz);
  const double hi = std::min(u_c, 1.0);
  if (F(hi) < 0) {
    std::ostringstream msg;
    msg << "beta_solve: no root in [0, 1] at p=" << p << ", |z0|^2=" << z0sq
        << " (not in the star region)";
    throw DomainError(msg.str());
  }
  RootOptions opts;
  opts.residual_tol = 1e-12 * std::max(1.0, p);
  return 1 - find_root(F, dF, 0.0, hi, opts);
}

double gamma_coeff_at(double alpha, double b) {
  const double b2 = b * b;
  const double a = alpha;
  const double num = 2 * b2 * (1 - (1 - 4 * a + 2 * a * a) * b2);
  const double d1 = 1 - (1 - 4 * a + 3 * a * a) * b2;
  const double d2 = 1 + (2 * a - 2 * a * a) * b2;
  if (!(d1 > 0) || !(d2 > 0)) {
    std::ostringstream msg;
    msg << "gamma_coeff: non-positive denominator factor "
        << (d1 > 0 ? "1 + (2a - 2a^2) b^2 = " : "1 - (1 - 4a + 3a^2) b^2 = ")
        << (d1 > 0 ? d2 : d1) << " at alpha=" << alpha << ", b=" << b;
    throw DomainError(msg.str());
  }
  return num / (d1 * d2);
}

double gamma_coeff(double p, double z0sq) {
  const PhasePoint pt = PhasePoint::from_p(p, z0sq);
  const auto star = star_saddle(pt);
  if (!star) {
    std::ostringstream msg;
    msg << "gamma_coeff: no star saddle at p=" << p << ", |z0|^2=" << z0sq;
    throw DomainError(msg.str());
  }
  return gamma_coeff_at(star->alpha, pt.b());
}

LimitParams make_limit_params(double p, cplx z0) {
  LimitParams params;
  params.p = p;
  params.z0 = z0;
  const double z0sq = std::norm(z0);
  const PhasePoint pt = PhasePoint::from_p(p, z0sq);
  const auto star = star_saddle(pt);
  if (star) {
    params.beta = beta_solve(p, z0sq);
    params.gamma_coeff = gamma_coeff_at(star->alpha, pt.b());
  }
  return params;
}

double kernel_det_ratio(double x) {
  if (x < 1e-6) return 1 - x / 2 + x * x / 6;
  return -std::expm1(-x) / x;
}

double limit_ratio(Region region, const LimitParams& params, const Displacement& d) {
  const cplx delta = d.zeta1 - d.zeta2;
  const double proj = (std::conj(params.z0) * delta).real();
  switch (region) {
    case Region::Omega1: {
      if (!params.beta || !params.gamma_coeff) {
        throw DomainError("limit_ratio: Omega1 needs beta and gamma_coeff");
      }
      return std::exp(-*params.gamma_coeff * proj * proj) *
             kernel_det_ratio(*params.beta * std::norm(delta));
    }
    case Region::Omega2: return std::exp(-params.p * proj * proj);
    case Region::Omega3: return 1.0;
    case Region::Boundary: break;
  }
  throw DomainError("limit_ratio: no limit law is stated on a phase boundary");
}

double ginibre_limit_ratio(const Displacement& d) {
  return kernel_det_ratio(std::norm(d.zeta1 - d.zeta2));
}

}  // namespace sparsecp
