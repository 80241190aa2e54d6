#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <random>
#include <vector>

namespace bhlab {

/// Selects between the threaded kernels and their single-threaded reference
/// path. Both must produce bit-identical results.
enum class Exec { serial, parallel };

/// splitmix64 finalizer. Per-restart and per-trial seeds are
/// `mix_seed(master + index)`.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix_seed(master + index);
}

using Rng = std::mt19937_64;

// The std:: distributions are implementation-defined; these are not.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return draw % bound;
}

template <class T>
void shuffle(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = uniform_below(rng, i);
    std::swap(values[i - 1], values[j]);
  }
}

/// Applies the BHLAB_THREADS cap (if set) to the OpenMP runtime.
void apply_thread_cap_from_env();

/// Number of threads the parallel kernels will use.
int max_threads();

void set_max_threads(int threads);

/// Runs body(i) for i in [0, count). With Exec::parallel the iterations are
/// spread over OpenMP threads. Exceptions are collected per index and the
/// lowest-index one is rethrown, so failures are reported deterministically.
template <class Body>
void for_each_index(std::size_t count, Exec exec, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
  [[maybe_unused]] const bool threaded = exec == Exec::parallel && count > 1;
#pragma omp parallel for schedule(dynamic) if (threaded)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace bhlab
