#pragma once

#include <cstdint>
#include <span>
#include <vector>

// Lloyd's k-means over row-major data. The assignment step has a serial
// reference kernel and an OpenMP kernel; they must agree label for label.
namespace lipcot::kmeans {

struct Options {
  double tolerance = 1e-6;  // max centroid displacement
  int max_iterations = 300;
  bool parallel = true;
};

struct Result {
  std::vector<double> centroids;  // k x dim, row-major
  std::vector<std::uint32_t> labels;
  std::vector<std::size_t> counts;
  std::vector<double> inertia_history;  // one entry per assignment pass
  int iterations = 0;
};

/// Nearest centroid per row (lowest index wins ties) and its squared distance.
void assign_serial(std::span<const double> data, std::span<const double> centroids,
                   std::size_t dim, std::span<std::uint32_t> labels,
                   std::span<double> sq_dist);

void assign_parallel(std::span<const double> data, std::span<const double> centroids,
                     std::size_t dim, std::span<std::uint32_t> labels,
                     std::span<double> sq_dist);

std::uint32_t nearest(std::span<const double> point, std::span<const double> centroids,
                      std::size_t dim, double* sq_dist = nullptr);

/// k-means++ seeding.
std::vector<double> seed_plus_plus(std::span<const double> data, std::size_t dim,
                                   std::size_t k, std::uint64_t seed);

/// Requires at least k distinct rows; throws TooFewVectors otherwise.
Result fit(std::span<const double> data, std::size_t dim, std::size_t k, std::uint64_t seed,
           const Options& options = {});

}  // namespace lipcot::kmeans
