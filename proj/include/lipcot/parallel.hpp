#pragma once

namespace lipcot::parallel {

/// Caps OpenMP parallelism at LIPCOT_THREADS when that variable holds a
/// positive integer. Returns the resulting thread count.
int configure_from_env();

int max_threads();

}  // namespace lipcot::parallel
