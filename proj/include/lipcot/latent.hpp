#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lipcot/lpc.hpp"

namespace lipcot::latent {

enum class MethodTag { LpcCoeff, Cepstrum, DominantSpectral };

std::string_view to_string(MethodTag tag) noexcept;
/// Accepts "lpc", "cepstrum", "dsc".
MethodTag parse_method(std::string_view name);

/// Which feature space a latent vector lives in, plus that space's parameters.
struct LatentMethod {
  MethodTag tag = MethodTag::LpcCoeff;
  std::vector<double> weights;  // LpcCoeff; empty means all ones
  int cepstrum_terms = 0;       // Cepstrum M; 0 means 2L
  bool reduced = false;         // DominantSpectral: drop conjugate duplicates

  bool operator==(const LatentMethod&) const = default;
};

LatentMethod lpc_coeff_method(std::vector<double> weights = {});
LatentMethod cepstrum_method(int terms = 0);
LatentMethod dsc_method(bool reduced = false);

/// Resolves defaults for a given order (unit weights, M = 2L) and validates.
LatentMethod resolve(const LatentMethod& method, int order);

/// Feature-space dimension for a model of this order.
std::size_t dimension(const LatentMethod& method, int order);

struct LatentVector {
  LatentMethod method;
  std::vector<double> values;
};

LatentVector features_lpc_coeff(const lpc::LpcModel& model, std::span<const double> weights);

/// (c_0, c_1, sqrt(2) c_2, ..., sqrt(M) c_M).
LatentVector features_cepstrum(const lpc::LpcModel& model, int terms);

/// (u_1..u_L, v_1..v_L, log sigma^2) ordered by |u|, or the reduced form
/// keeping only non-negative-frequency poles.
LatentVector features_dsc(const lpc::LpcModel& model, bool reduced = false);

/// Dispatches on method.tag.
LatentVector features(const lpc::LpcModel& model, const LatentMethod& method);

/// Raw cepstrum c_0..c_M from the coefficient recursion.
std::vector<double> lpc_to_cepstrum(const lpc::LpcModel& model, int terms);

/// Raw cepstrum c_1..c_M from the pole sums (1/n) sum_k p_k^n; c_0 = log sigma^2.
std::vector<double> pole_cepstrum(const lpc::LpcModel& model, int terms);

struct CepstrumInverse {
  std::vector<double> coeffs;
  double noise_power = 0.0;
};

CepstrumInverse cepstrum_to_lpc(std::span<const double> ceps, int order);

lpc::LpcModel latent_to_model(const LatentVector& vec, int order, double lambda,
                              double sample_rate);

double distance(const LatentVector& lhs, const LatentVector& rhs);

/// Pole-product distance between two stable models (reference only; not
/// used for clustering).
double distance_pole(const lpc::LpcModel& lhs, const lpc::LpcModel& rhs);

}  // namespace lipcot::latent
