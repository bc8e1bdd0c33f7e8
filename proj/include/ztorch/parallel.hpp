#pragma once

// Thin OpenMP shim. Every kernel built on these has a serial twin in the same
// translation unit; tests pin the two to identical output.

#define ZT_PRAGMA(x) _Pragma(#x)

#ifdef ZTORCH_HAS_OPENMP
#include <omp.h>
#define ZT_OMP_PARALLEL_FOR ZT_PRAGMA(omp parallel for schedule(static))
#define ZT_OMP_PARALLEL_FOR_IF(cond) ZT_PRAGMA(omp parallel for schedule(static) if (cond))
#else
#define ZT_OMP_PARALLEL_FOR
#define ZT_OMP_PARALLEL_FOR_IF(cond)
#endif

namespace ztorch {

inline int max_threads() noexcept {
#ifdef ZTORCH_HAS_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

inline void set_threads(int n) noexcept {
#ifdef ZTORCH_HAS_OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

/// Which implementation of a data-parallel kernel to run.
enum class Exec { serial, parallel };

}  // namespace ztorch
