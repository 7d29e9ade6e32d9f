#pragma once

#include <complex>
#include <span>
#include <vector>

namespace lipcot::poly {

using Complex = std::complex<double>;

struct RootFinderOptions {
  double tolerance = 1e-12;
  int max_iterations = 500;
  double initial_radius = 0.7;
};

/// Roots of the monic polynomial z^n + c[0] z^(n-1) + ... + c[n-1].
///
/// Durand-Kerner (Weierstrass) simultaneous iteration. Iteration stops once
/// every correction is below tolerance * max(1, |z|), or once every root's
/// residual is at the rounding floor of its Horner evaluation (clustered or
/// repeated roots cannot get closer than that). Throws NonConvergence when
/// neither happens within max_iterations.
std::vector<Complex> durand_kerner(std::span<const double> tail_coeffs,
                                   const RootFinderOptions& options = {});

/// Coefficients (1, c_1, ..., c_n) of prod_k (1 - r_k x), i.e. the monic
/// polynomial in z with the given roots written in powers of z^-1.
std::vector<Complex> expand_roots(std::span<const Complex> roots);

std::vector<double> multiply(std::span<const double> lhs, std::span<const double> rhs);

/// Sum_k coeffs[k] * x^k.
Complex evaluate(std::span<const double> coeffs, Complex x);

}  // namespace lipcot::poly
