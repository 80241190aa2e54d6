#include "bhlab/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bhlab {

void apply_thread_cap_from_env() {
  const char* raw = std::getenv("BHLAB_THREADS");
  if (raw == nullptr || *raw == '\0') return;
  int cap = 0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, cap);
  if (ec != std::errc{} || ptr != end || cap <= 0) {
    throw std::invalid_argument("BHLAB_THREADS must be a positive integer, got '" +
                                std::string(raw) + "'");
  }
  set_max_threads(cap);
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_max_threads(int threads) {
#ifdef _OPENMP
  omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

}  // namespace bhlab
