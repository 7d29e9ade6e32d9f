#include "lipcot/latent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "lipcot/error.hpp"
#include "lipcot/polynomial.hpp"

namespace lipcot::latent {
namespace {

using lpc::Complex;

constexpr double kRealizableResidue = 1e-6;

double log_noise_power(const lpc::LpcModel& model) {
  if (!(model.noise_power > 0.0))
    throw Error(ErrorCode::ZeroNoisePower, "log sigma^2 undefined for sigma^2 = 0");
  return std::log(model.noise_power);
}

void check_dimension(const LatentVector& vec, std::size_t expected) {
  if (vec.values.size() != expected)
    throw Error(ErrorCode::DimensionMismatch, "latent vector has " +
                                                  std::to_string(vec.values.size()) +
                                                  " values, expected " + std::to_string(expected));
}

struct DominantComponent {
  double freq;   // u
  double power;  // v
};

double pole_frequency(Complex p, double sample_rate) {
  if (p.imag() == 0.0) return p.real() < 0.0 ? 0.5 * sample_rate : 0.0;
  return sample_rate / (2.0 * std::numbers::pi) * std::arg(p);
}

Complex component_pole(double freq, double power, double sample_rate) {
  const double radius = 1.0 - std::exp(-0.5 * power);
  return std::polar(radius, 2.0 * std::numbers::pi * freq / sample_rate);
}

std::size_t reduced_count(int order) { return static_cast<std::size_t>((order + 1) / 2); }

}  // namespace

std::string_view to_string(MethodTag tag) noexcept {
  switch (tag) {
    case MethodTag::LpcCoeff: return "lpc";
    case MethodTag::Cepstrum: return "cepstrum";
    case MethodTag::DominantSpectral: return "dsc";
  }
  return "unknown";
}

MethodTag parse_method(std::string_view name) {
  if (name == "lpc") return MethodTag::LpcCoeff;
  if (name == "cepstrum") return MethodTag::Cepstrum;
  if (name == "dsc") return MethodTag::DominantSpectral;
  throw Error(ErrorCode::InvalidArgument, "unknown latent method '" + std::string(name) + "'");
}

LatentMethod lpc_coeff_method(std::vector<double> weights) {
  return {MethodTag::LpcCoeff, std::move(weights), 0, false};
}
LatentMethod cepstrum_method(int terms) { return {MethodTag::Cepstrum, {}, terms, false}; }
LatentMethod dsc_method(bool reduced) { return {MethodTag::DominantSpectral, {}, 0, reduced}; }

LatentMethod resolve(const LatentMethod& method, int order) {
  if (order < 1) throw Error(ErrorCode::InvalidOrder, "order must be >= 1");
  LatentMethod out = method;
  switch (method.tag) {
    case MethodTag::LpcCoeff:
      if (out.weights.empty()) out.weights.assign(static_cast<std::size_t>(order), 1.0);
      if (out.weights.size() != static_cast<std::size_t>(order))
        throw Error(ErrorCode::DimensionMismatch, "need one weight per LPC coefficient");
      for (double w : out.weights)
        if (!(w > 0.0) || !std::isfinite(w))
          throw Error(ErrorCode::InvalidArgument, "weights must be positive");
      out.cepstrum_terms = 0;
      out.reduced = false;
      break;
    case MethodTag::Cepstrum:
      if (out.cepstrum_terms == 0) out.cepstrum_terms = 2 * order;
      if (out.cepstrum_terms < 1)
        throw Error(ErrorCode::InvalidArgument, "cepstrum needs M >= 1");
      out.weights.clear();
      out.reduced = false;
      break;
    case MethodTag::DominantSpectral:
      out.weights.clear();
      out.cepstrum_terms = 0;
      break;
  }
  return out;
}

std::size_t dimension(const LatentMethod& method, int order) {
  const LatentMethod m = resolve(method, order);
  const auto l = static_cast<std::size_t>(order);
  switch (m.tag) {
    case MethodTag::LpcCoeff: return l + 1;
    case MethodTag::Cepstrum: return static_cast<std::size_t>(m.cepstrum_terms) + 1;
    case MethodTag::DominantSpectral: return m.reduced ? 2 * reduced_count(order) + 1 : 2 * l + 1;
  }
  return 0;
}

LatentVector features_lpc_coeff(const lpc::LpcModel& model, std::span<const double> weights) {
  const int order = static_cast<int>(model.order());
  const LatentMethod method =
      resolve(lpc_coeff_method({weights.begin(), weights.end()}), order);
  LatentVector out{method, {}};
  out.values.reserve(model.order() + 1);
  for (std::size_t i = 0; i < model.order(); ++i)
    out.values.push_back(method.weights[i] * model.coeffs[i]);
  out.values.push_back(log_noise_power(model));
  return out;
}

std::vector<double> lpc_to_cepstrum(const lpc::LpcModel& model, int terms) {
  if (terms < 1) throw Error(ErrorCode::InvalidArgument, "cepstrum needs M >= 1");
  const auto& a = model.coeffs;
  const auto order = static_cast<int>(a.size());
  std::vector<double> c(static_cast<std::size_t>(terms) + 1, 0.0);
  c[0] = log_noise_power(model);
  for (int n = 1; n <= terms; ++n) {
    double acc = n <= order ? -a[n - 1] : 0.0;
    const int upper = std::min(n - 1, order);
    for (int m = 1; m <= upper; ++m)
      acc -= (1.0 - static_cast<double>(m) / n) * a[m - 1] * c[n - m];
    c[n] = acc;
  }
  return c;
}

std::vector<double> pole_cepstrum(const lpc::LpcModel& model, int terms) {
  if (terms < 1) throw Error(ErrorCode::InvalidArgument, "cepstrum needs M >= 1");
  const auto roots = lpc::poles(model);
  std::vector<double> c(static_cast<std::size_t>(terms) + 1, 0.0);
  c[0] = log_noise_power(model);
  std::vector<Complex> powers(roots.begin(), roots.end());
  for (int n = 1; n <= terms; ++n) {
    Complex sum = 0.0;
    for (std::size_t k = 0; k < roots.size(); ++k) {
      sum += powers[k];
      powers[k] *= roots[k];
    }
    c[n] = sum.real() / n;
  }
  return c;
}

LatentVector features_cepstrum(const lpc::LpcModel& model, int terms) {
  const LatentMethod method = resolve(cepstrum_method(terms), static_cast<int>(model.order()));
  auto c = lpc_to_cepstrum(model, method.cepstrum_terms);
  for (std::size_t n = 2; n < c.size(); ++n) c[n] *= std::sqrt(static_cast<double>(n));
  return {method, std::move(c)};
}

LatentVector features_dsc(const lpc::LpcModel& model, bool reduced) {
  const int order = static_cast<int>(model.order());
  const LatentMethod method = resolve(dsc_method(reduced), order);
  const double log_power = log_noise_power(model);

  std::vector<DominantComponent> comps;
  for (const Complex& p : lpc::poles(model)) {
    const double radius = std::min(std::abs(p), lpc::kMaxPoleRadius);
    comps.push_back({pole_frequency(p, model.sample_rate), -2.0 * std::log(1.0 - radius)});
  }
  std::sort(comps.begin(), comps.end(), [](const auto& x, const auto& y) {
    return std::tuple(std::abs(x.freq), x.freq, x.power) <
           std::tuple(std::abs(y.freq), y.freq, y.power);
  });

  if (reduced) {
    std::erase_if(comps, [](const auto& c) { return c.freq < 0.0; });
    if (comps.size() != reduced_count(order))
      throw Error(ErrorCode::DimensionMismatch,
                  "reduced dominant-spectral features need conjugate-paired poles");
  }

  LatentVector out{method, {}};
  out.values.reserve(2 * comps.size() + 1);
  for (const auto& c : comps) out.values.push_back(c.freq);
  for (const auto& c : comps) out.values.push_back(c.power);
  out.values.push_back(log_power);
  return out;
}

LatentVector features(const lpc::LpcModel& model, const LatentMethod& method) {
  switch (method.tag) {
    case MethodTag::LpcCoeff: return features_lpc_coeff(model, method.weights);
    case MethodTag::Cepstrum: return features_cepstrum(model, method.cepstrum_terms);
    case MethodTag::DominantSpectral: return features_dsc(model, method.reduced);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown latent method");
}

CepstrumInverse cepstrum_to_lpc(std::span<const double> ceps, int order) {
  if (order < 1) throw Error(ErrorCode::InvalidOrder, "order must be >= 1");
  if (ceps.size() < static_cast<std::size_t>(order) + 1)
    throw Error(ErrorCode::InsufficientCoefficients,
                "need c_0..c_" + std::to_string(order) + ", got " + std::to_string(ceps.size()) +
                    " values");
  CepstrumInverse out;
  out.coeffs.assign(static_cast<std::size_t>(order), 0.0);
  auto& a = out.coeffs;
  for (int i = 1; i <= order; ++i) {
    double acc = -ceps[i];
    for (int m = 1; m < i; ++m) acc -= (1.0 - static_cast<double>(m) / i) * a[m - 1] * ceps[i - m];
    a[i - 1] = acc;
  }
  out.noise_power = std::exp(ceps[0]);
  return out;
}

lpc::LpcModel latent_to_model(const LatentVector& vec, int order, double lambda,
                              double sample_rate) {
  const LatentMethod method = resolve(vec.method, order);
  check_dimension(vec, dimension(method, order));
  for (double v : vec.values)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite latent value");

  lpc::LpcModel model;
  model.lambda = lambda;
  model.sample_rate = sample_rate;
  model.noise_power = std::exp(vec.values.back());
  const auto l = static_cast<std::size_t>(order);

  switch (method.tag) {
    case MethodTag::LpcCoeff:
      model.coeffs.resize(l);
      for (std::size_t i = 0; i < l; ++i) model.coeffs[i] = vec.values[i] / method.weights[i];
      break;

    case MethodTag::Cepstrum: {
      std::vector<double> raw = vec.values;
      for (std::size_t n = 2; n < raw.size(); ++n) raw[n] /= std::sqrt(static_cast<double>(n));
      auto inv = cepstrum_to_lpc(raw, order);
      model.coeffs = std::move(inv.coeffs);
      model.noise_power = inv.noise_power;
      break;
    }

    case MethodTag::DominantSpectral: {
      const std::size_t count = method.reduced ? reduced_count(order) : l;
      std::vector<Complex> roots;
      roots.reserve(l);
      // An odd-order reduced vector carries one real pole; take the entry
      // closest to DC or Nyquist and project it onto the real axis.
      std::size_t real_index = count;
      if (method.reduced && l % 2 == 1) {
        double best = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
          const double u = std::abs(vec.values[i]);
          const double gap = std::min(u, std::abs(0.5 * sample_rate - u));
          if (real_index == count || gap < best) {
            best = gap;
            real_index = i;
          }
        }
      }
      for (std::size_t i = 0; i < count; ++i) {
        const double u = vec.values[i];
        const double v = vec.values[count + i];
        if (!method.reduced) {
          roots.push_back(component_pole(u, v, sample_rate));
        } else if (i == real_index) {
          const double radius = 1.0 - std::exp(-0.5 * v);
          roots.emplace_back(std::abs(u) < 0.25 * sample_rate ? radius : -radius, 0.0);
        } else {
          const Complex p = component_pole(u, v, sample_rate);
          roots.push_back(p);
          roots.push_back(std::conj(p));
        }
      }
      const auto expanded = poly::expand_roots(roots);
      model.coeffs.resize(l);
      for (std::size_t k = 1; k <= l; ++k) {
        if (std::abs(expanded[k].imag()) >= kRealizableResidue)
          throw Error(ErrorCode::NonRealizable,
                      "pole set is not conjugate-symmetric (imaginary residue " +
                          std::to_string(std::abs(expanded[k].imag())) + ")");
        model.coeffs[k - 1] = expanded[k].real();
      }
      break;
    }
  }
  return model;
}

double distance(const LatentVector& lhs, const LatentVector& rhs) {
  if (lhs.method.tag != rhs.method.tag || lhs.values.size() != rhs.values.size())
    throw Error(ErrorCode::DimensionMismatch, "latent vectors from different spaces");
  double acc = 0.0;
  for (std::size_t i = 0; i < lhs.values.size(); ++i) {
    const double d = lhs.values[i] - rhs.values[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double distance_pole(const lpc::LpcModel& lhs, const lpc::LpcModel& rhs) {
  const auto p = lpc::poles(lhs);
  const auto q = lpc::poles(rhs);
  for (const auto* set : {&p, &q})
    for (const Complex& z : *set)
      if (!(std::abs(z) < 1.0))
        throw Error(ErrorCode::UnstableModel, "pole distance needs poles strictly inside |z| = 1");

  auto log_gram = [](const std::vector<Complex>& x, const std::vector<Complex>& y) {
    double acc = 0.0;
    for (const Complex& xi : x)
      for (const Complex& yj : y) acc += std::log(std::abs(1.0 - xi * std::conj(yj)));
    return acc;
  };
  const double squared = 2.0 * log_gram(p, q) - log_gram(p, p) - log_gram(q, q);
  return std::sqrt(std::max(0.0, squared));
}

}  // namespace lipcot::latent
