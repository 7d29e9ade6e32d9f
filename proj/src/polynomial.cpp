#include "lipcot/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lipcot/error.hpp"

namespace lipcot::poly {
namespace {

// Golden-ratio angle; keeps the starting points off any symmetry axis of a
// real polynomial.
constexpr double kAngularOffset = 1.0 / std::numbers::phi;

struct Evaluation {
  Complex value;
  double rounding_bound;
};

Evaluation evaluate_monic(std::span<const double> tail, Complex z) {
  Complex value = 1.0;
  double bound = 1.0;
  const double modulus = std::abs(z);
  for (double c : tail) {
    value = value * z + c;
    bound = bound * modulus + std::abs(c);
  }
  const double n = static_cast<double>(tail.size());
  return {value, 4.0 * n * std::numeric_limits<double>::epsilon() * bound};
}

}  // namespace

std::vector<Complex> durand_kerner(std::span<const double> tail_coeffs,
                                   const RootFinderOptions& options) {
  const std::size_t degree = tail_coeffs.size();
  if (degree == 0) return {};
  if (degree == 1) return {Complex(-tail_coeffs[0], 0.0)};

  std::vector<Complex> roots(degree);
  for (std::size_t k = 0; k < degree; ++k) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(degree) +
        kAngularOffset;
    roots[k] = std::polar(options.initial_radius, angle);
  }

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    double worst_step = 0.0;
    bool all_at_floor = true;
    for (std::size_t i = 0; i < degree; ++i) {
      const auto [value, floor] = evaluate_monic(tail_coeffs, roots[i]);
      if (std::abs(value) > floor) all_at_floor = false;

      Complex denom = 1.0;
      for (std::size_t j = 0; j < degree; ++j) {
        if (j == i) continue;
        Complex diff = roots[i] - roots[j];
        if (diff == Complex(0.0, 0.0)) diff = Complex(1e-14, 1e-14);
        denom *= diff;
      }
      const Complex step = value / denom;
      roots[i] -= step;
      worst_step = std::max(worst_step, std::abs(step) / std::max(1.0, std::abs(roots[i])));
    }
    if (!std::isfinite(worst_step)) break;
    if (worst_step < options.tolerance || all_at_floor) return roots;
  }
  throw Error(ErrorCode::NonConvergence,
              "Durand-Kerner did not converge for degree " + std::to_string(degree));
}

std::vector<Complex> expand_roots(std::span<const Complex> roots) {
  std::vector<Complex> coeffs{Complex(1.0, 0.0)};
  coeffs.reserve(roots.size() + 1);
  for (const Complex& r : roots) {
    coeffs.push_back(Complex(0.0, 0.0));
    for (std::size_t k = coeffs.size() - 1; k > 0; --k) coeffs[k] -= r * coeffs[k - 1];
  }
  return coeffs;
}

std::vector<double> multiply(std::span<const double> lhs, std::span<const double> rhs) {
  if (lhs.empty() || rhs.empty()) return {};
  std::vector<double> out(lhs.size() + rhs.size() - 1, 0.0);
  for (std::size_t i = 0; i < lhs.size(); ++i)
    for (std::size_t j = 0; j < rhs.size(); ++j) out[i + j] += lhs[i] * rhs[j];
  return out;
}

Complex evaluate(std::span<const double> coeffs, Complex x) {
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace lipcot::poly
