// Times each parallel kernel against its serial reference and checks that
// both paths produce identical results.

#include <chrono>
#include <cstdio>
#include <functional>

#include "bhlab/bhverify.hpp"
#include "bhlab/combdim.hpp"
#include "bhlab/parallel.hpp"

using namespace bhlab;

namespace {

template <class F>
auto timed(F&& f, double& seconds) {
  const auto start = std::chrono::steady_clock::now();
  auto result = f();
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

template <class F, class Eq>
bool bench(const char* name, F&& run, Eq&& same) {
  double serial_s = 0, parallel_s = 0;
  const auto a = timed([&] { return run(Exec::serial); }, serial_s);
  const auto b = timed([&] { return run(Exec::parallel); }, parallel_s);
  const bool ok = same(a, b);
  std::printf("%-22s serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n", name, serial_s, parallel_s,
              serial_s / parallel_s, ok ? "identical" : "MISMATCH");
  return ok;
}

}  // namespace

int main() {
  apply_thread_cap_from_env();
  std::printf("threads: %d\n", max_threads());
  bool ok = true;

  const auto triangle = gen_triangle(4);
  const auto ns = n_range(1, 12);
  PsiOptions exact;
  exact.budget = 200'000;
  ok &= bench("psi_profile", [&](Exec e) { return psi_profile(triangle, ns, exact, e); },
              [](const auto& a, const auto& b) { return a == b; });

  const auto full = gen_full(3, 12);
  ok &= bench("psi_greedy", [&](Exec e) { return psi_greedy(full, 20, 256, 1, e); },
              [](auto a, auto b) { return a == b; });

  const auto p = random_polynomial(gen_full(3, 6), CoefficientDistribution::gaussian, 2);
  OptimizerSettings s;
  s.restarts = 128;
  ok &= bench("sup_norm_poly", [&](Exec e) { return sup_norm_poly(p, s, e); },
              [](const auto& a, const auto& b) { return a.value == b.value && a.witness == b.witness; });

  ok &= bench("sup_norm_form", [&](Exec e) { return sup_norm_form(symmetric_tensor(p, gen_full(3, 6)), s, e); },
              [](const auto& a, const auto& b) { return a.value == b.value && a.witness == b.witness; });

  OptimizerSettings vs;
  vs.restarts = 16;
  ok &= bench("verify_theorem",
              [&](Exec e) { return verify_theorem(gen_triangle(3), 1.5, 16, CoefficientDistribution::steinhaus, 0, vs, 0.05, e); },
              [](const auto& a, const auto& b) {
                if (a.trials.size() != b.trials.size()) return false;
                for (std::size_t i = 0; i < a.trials.size(); ++i) {
                  if (a.trials[i].sup_poly != b.trials[i].sup_poly || a.trials[i].sup_form != b.trials[i].sup_form) return false;
                }
                return a.max_quotient == b.max_quotient && a.c_hat == b.c_hat;
              });
  return ok ? 0 : 1;
}
