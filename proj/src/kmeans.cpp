#include "lipcot/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "lipcot/error.hpp"

namespace lipcot::kmeans {
namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

std::span<const double> row(std::span<const double> data, std::size_t dim, std::size_t i) {
  return data.subspan(i * dim, dim);
}

std::size_t count_distinct_rows(std::span<const double> data, std::size_t dim) {
  const std::size_t n = data.size() / dim;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto less = [&](std::size_t a, std::size_t b) {
    const auto ra = row(data, dim, a), rb = row(data, dim, b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t distinct = n == 0 ? 0 : 1;
  for (std::size_t i = 1; i < n; ++i)
    if (less(order[i - 1], order[i])) ++distinct;
  return distinct;
}

}  // namespace

std::uint32_t nearest(std::span<const double> point, std::span<const double> centroids,
                      std::size_t dim, double* sq_dist) {
  const std::size_t k = centroids.size() / dim;
  std::uint32_t best = 0;
  double best_dist = squared_distance(point, row(centroids, dim, 0));
  for (std::size_t c = 1; c < k; ++c) {
    const double d = squared_distance(point, row(centroids, dim, c));
    if (d < best_dist) {
      best_dist = d;
      best = static_cast<std::uint32_t>(c);
    }
  }
  if (sq_dist) *sq_dist = best_dist;
  return best;
}

void assign_serial(std::span<const double> data, std::span<const double> centroids,
                   std::size_t dim, std::span<std::uint32_t> labels,
                   std::span<double> sq_dist) {
  const std::size_t n = labels.size();
  for (std::size_t i = 0; i < n; ++i)
    labels[i] = nearest(row(data, dim, i), centroids, dim, &sq_dist[i]);
}

void assign_parallel(std::span<const double> data, std::span<const double> centroids,
                     std::size_t dim, std::span<std::uint32_t> labels,
                     std::span<double> sq_dist) {
  const auto n = static_cast<std::ptrdiff_t>(labels.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    labels[idx] = nearest(row(data, dim, idx), centroids, dim, &sq_dist[idx]);
  }
}

std::vector<double> seed_plus_plus(std::span<const double> data, std::size_t dim,
                                   std::size_t k, std::uint64_t seed) {
  const std::size_t n = data.size() / dim;
  std::mt19937_64 rng(seed);
  std::vector<double> centroids;
  centroids.reserve(k * dim);

  const auto first = std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * n));
  auto first_row = row(data, dim, first);
  centroids.insert(centroids.end(), first_row.begin(), first_row.end());

  std::vector<double> closest(n);
  for (std::size_t i = 0; i < n; ++i) closest[i] = squared_distance(row(data, dim, i), first_row);

  for (std::size_t c = 1; c < k; ++c) {
    const double total = std::accumulate(closest.begin(), closest.end(), 0.0);
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double target = uniform01(rng) * total;
      double running = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        running += closest[i];
        if (closest[i] > 0.0 && running > target) {
          pick = i;
          break;
        }
      }
      // Rounding can leave target at the very end of the cumulative sum.
      while (closest[pick] == 0.0 && pick > 0) --pick;
    }
    auto chosen = row(data, dim, pick);
    centroids.insert(centroids.end(), chosen.begin(), chosen.end());
    for (std::size_t i = 0; i < n; ++i)
      closest[i] = std::min(closest[i], squared_distance(row(data, dim, i), chosen));
  }
  return centroids;
}

Result fit(std::span<const double> data, std::size_t dim, std::size_t k, std::uint64_t seed,
           const Options& options) {
  if (dim == 0 || data.size() % dim != 0)
    throw Error(ErrorCode::DimensionMismatch, "data size is not a multiple of the dimension");
  const std::size_t n = data.size() / dim;
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "K must be >= 1");
  if (n < k)
    throw Error(ErrorCode::TooFewVectors,
                std::to_string(n) + " vectors cannot form " + std::to_string(k) + " clusters");
  if (const std::size_t distinct = count_distinct_rows(data, dim); distinct < k)
    throw Error(ErrorCode::TooFewVectors, "only " + std::to_string(distinct) +
                                              " distinct vectors for " + std::to_string(k) +
                                              " clusters");

  Result result;
  result.centroids = seed_plus_plus(data, dim, k, seed);
  result.labels.assign(n, 0);
  std::vector<double> sq_dist(n, 0.0);
  std::vector<double> sums(k * dim);
  std::vector<double> updated(k * dim);

  auto assign = [&] {
    if (options.parallel)
      assign_parallel(data, result.centroids, dim, result.labels, sq_dist);
    else
      assign_serial(data, result.centroids, dim, result.labels, sq_dist);
    result.inertia_history.push_back(std::accumulate(sq_dist.begin(), sq_dist.end(), 0.0));
    result.counts.assign(k, 0);
    for (auto label : result.labels) ++result.counts[label];
  };

  // Moves the point farthest from its own centroid into each empty cluster.
  auto reseed_empty = [&]() -> bool {
    bool any = false;
    for (std::size_t c = 0; c < k; ++c) {
      if (result.counts[c] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (result.counts[result.labels[i]] < 2) continue;
        if (far == n || sq_dist[i] > sq_dist[far]) far = i;
      }
      if (far == n) break;
      --result.counts[result.labels[far]];
      result.labels[far] = static_cast<std::uint32_t>(c);
      result.counts[c] = 1;
      sq_dist[far] = 0.0;
      auto src = row(data, dim, far);
      std::copy(src.begin(), src.end(), updated.begin() + static_cast<std::ptrdiff_t>(c * dim));
      any = true;
    }
    return any;
  };

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    assign();
    result.iterations = iter + 1;

    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto src = row(data, dim, i);
      double* dst = sums.data() + result.labels[i] * dim;
      for (std::size_t d = 0; d < dim; ++d) dst[d] += src[d];
    }
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t d = 0; d < dim; ++d)
        updated[c * dim + d] = result.counts[c] > 0
                                   ? sums[c * dim + d] / static_cast<double>(result.counts[c])
                                   : result.centroids[c * dim + d];
    const bool reseeded = reseed_empty();

    double displacement = 0.0;
    for (std::size_t c = 0; c < k; ++c)
      displacement = std::max(displacement,
                              std::sqrt(squared_distance(row(updated, dim, c),
                                                         row(result.centroids, dim, c))));
    result.centroids.swap(updated);
    if (displacement < options.tolerance && !reseeded) break;
  }

  // Final labels against the final centroids; every cluster must keep a member.
  assign();
  for (std::size_t guard = 0; guard < k; ++guard) {
    std::copy(result.centroids.begin(), result.centroids.end(), updated.begin());
    if (!reseed_empty()) break;
    result.centroids.swap(updated);
    assign();
  }
  return result;
}

}  // namespace lipcot::kmeans
