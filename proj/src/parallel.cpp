#include "lipcot/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace lipcot::parallel {

int configure_from_env() {
  if (const char* env = std::getenv("LIPCOT_THREADS")) {
    try {
      const int requested = std::stoi(env);
      if (requested > 0) omp_set_num_threads(requested);
    } catch (const std::exception&) {
      // Malformed values leave the OpenMP default in place.
    }
  }
  return omp_get_max_threads();
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace lipcot::parallel
