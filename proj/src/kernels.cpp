#include "nslab/kernels.hpp"

#include <algorithm>
#include <cstdlib>

namespace nslab::kernels {

int thread_cap() {
  static const int cap = [] {
    int n = 1;
#ifdef _OPENMP
    n = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("BESOV_NS_THREADS")) {
      const int req = std::atoi(env);
      if (req >= 1) n = std::min(n, req);
    }
    return std::max(1, n);
  }();
  return cap;
}

Exec default_exec() {
  return thread_cap() > 1 ? Exec::parallel : Exec::serial;
}

}  // namespace nslab::kernels
