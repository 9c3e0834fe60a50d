#pragma once

#include <cstdint>

#include "subnls/grid.hpp"

namespace subnls {

/// |u|_p / (|grad u|_2^theta |u|_2^{1-theta}), theta = N(1/2 - 1/p); 0 for the zero field.
double gn_quotient(const RadialField& u, double p);

struct GNEstimate {
  double value = 0.0;        // best quotient found (a lower estimate of the sharp constant)
  double uncertainty = 0.0;  // |value(n) - value(n/2)|, a discretization error flag
  double family_value = 0.0; // best quotient over the Gaussian/sech seed family
  int iterations = 0;
  bool converged = false;
};

struct GNOptions {
  double r_max = 30.0;
  int n = 3000;
  int max_iterations = 500;
  double tol = 1e-12;
};

/// Estimate of the sharp Gagliardo-Nirenberg constant C_{N,p}, 2 < p < 2*.
///
/// The optimizer is the positive ground state of Lap Q - Q + |Q|^{p-2}Q = 0; it is
/// computed by Petviashvili iteration on the radial grid from the best seed of
/// the parametric family, followed by a preconditioned ascent polish.
GNEstimate gn_constant(int dim, double p, const GNOptions& opt = {});

struct GNValidation {
  int fields = 0;
  int violations = 0;       // fields whose quotient exceeds the estimate by more than 1e-10 relative
  double max_quotient = 0.0;
};

/// Quotients of `fields` random Gaussian mixtures, seeded deterministically, against `estimate`.
GNValidation validate_gn(int dim, double p, double estimate, int fields = 1000, std::uint64_t seed = 1);

}  // namespace subnls
