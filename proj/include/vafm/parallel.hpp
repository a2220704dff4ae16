#pragma once

#include <omp.h>

namespace vafm {

/// Bounds the worker count used by every parallel loop in the library.
/// Zero restores the OpenMP default (all cores).
inline void set_thread_count(int n) {
  static const int default_threads = omp_get_max_threads();
  omp_set_num_threads(n > 0 ? n : default_threads);
}

inline int thread_count() { return omp_get_max_threads(); }

}  // namespace vafm
