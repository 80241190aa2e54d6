// One PASS/FAIL line per acceptance criterion; exit status is the number of
// failures. Run from ctest or by hand.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include "bhlab/bhverify.hpp"
#include "bhlab/cli.hpp"
#include "bhlab/combdim.hpp"
#include "bhlab/reports.hpp"
#include "oracles.hpp"

using namespace bhlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_s;  // 0: no limit
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome dimension_diagonal() {
  PsiOptions opt;
  opt.mode = PsiMode::exact;
  Outcome o;
  const IndexSet sets[] = {gen_arith_diagonal(3, 60), gen_prime_diagonal(3, 12)};
  double worst = 0;
  for (const auto& set : sets) {
    const auto est = estimate_dim(set, 2, 8, FitMethod::least_squares, opt);
    worst = std::max(worst, std::abs(est.slope - 1.0));
  }
  o.pass = worst <= 1e-9;
  o.detail = fmt("max |slope - 1| = %.3g", worst);
  return o;
}

Outcome dimension_triangle() {
  PsiOptions opt;
  opt.mode = PsiMode::exact;
  opt.budget = 50'000'000;
  const std::vector<std::uint64_t> ns{1, 4, 9, 16};
  const auto est = estimate_dim(gen_triangle(4), ns, FitMethod::least_squares, opt);
  Outcome o;
  o.pass = est.slope >= 1.35 && est.slope <= 1.65;
  for (const auto& p : est.profile.points) o.pass = o.pass && p.exact;
  o.detail = fmt("slope = %.6f, psi(16) = %.0f", est.slope, double(est.profile.points.back().psi));
  return o;
}

Outcome psi_oracle() {
  Rng rng(2024);
  int instances = 0, equal = 0, mismatches = 0, greedy_over = 0;
  while (instances < 300) {
    const unsigned m = 1 + static_cast<unsigned>(uniform_below(rng, 3));
    const auto set = oracle::random_index_set(rng, m, 12, 6);
    for (std::uint64_t n = 1; n <= 3; ++n) {
      const auto exact = psi_exact(set, n, 10'000'000);
      const auto greedy = psi_greedy(set, n, 32, uniform_below(rng, 1000));
      mismatches += exact != oracle::brute_force_psi(set, n);
      greedy_over += greedy > exact;
      equal += greedy == exact;
      ++instances;
    }
  }
  const double rate = double(equal) / instances;
  Outcome o;
  o.pass = mismatches == 0 && greedy_over == 0 && rate >= 0.9;
  o.detail = fmt("%.0f instances, oracle mismatches %.0f, greedy equality %.3f", instances, mismatches, rate);
  if (greedy_over) o.detail += ", greedy exceeded exact";
  return o;
}

Outcome interpolation_identity() {
  int checked = 0, failed = 0;
  for (unsigned m = 1; m <= 20; ++m) {
    for (std::int64_t k = 1; k <= 4 * static_cast<std::int64_t>(m); ++k) {
      failed += !exponents_exact(m, Rational(k, 4)).interpolation_identity_holds();
      ++checked;
    }
  }
  return {failed == 0, fmt("%.0f (m, d) pairs, %.0f failures", checked, failed)};
}

Outcome holder_chain() {
  Rng rng(7);
  double worst = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const unsigned m = 1 + static_cast<unsigned>(uniform_below(rng, 12));
    const double d = std::max(1e-3, m * uniform01(rng));
    std::vector<Complex> c(1 + uniform_below(rng, 40));
    for (auto& z : c) {
      if (uniform01(rng) < 0.1) continue;
      z = std::polar(std::exp(8 * uniform01(rng) - 4), 2 * std::numbers::pi * uniform01(rng));
    }
    c[0] += 1e-3;
    worst = std::max(worst, holder_chain_check(c, m, d).margin);
  }
  return {worst <= 1 + 1e-9, fmt("10000 vectors, max margin %.15f", worst)};
}

Outcome polarization() {
  Rng rng(11);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const unsigned m = 1 + static_cast<unsigned>(uniform_below(rng, 6));
    const auto set = oracle::random_index_set(rng, m, 6, 4);
    const auto p = random_polynomial(set, CoefficientDistribution::gaussian, trial);
    const auto& vars = p.variable_support();
    std::vector<Point> args;
    for (unsigned k = 0; k < m; ++k) args.push_back(oracle::random_point(rng, vars));
    const Complex base = polarize_eval(p, args);

    auto swapped = args;
    std::swap(swapped[0], swapped[uniform_below(rng, m)]);
    worst = std::max(worst, oracle::rel_diff(polarize_eval(p, swapped), base));

    const Point y = oracle::random_point(rng, vars);
    const Complex a{uniform01(rng) - 0.5, uniform01(rng) - 0.5};
    auto combo = args, only_y = args;
    for (auto& [v, z] : combo[m - 1]) z += a * y.at(v);
    only_y[m - 1] = y;
    worst = std::max(worst, oracle::rel_diff(polarize_eval(p, combo), base + a * polarize_eval(p, only_y)));

    worst = std::max(worst, oracle::rel_diff(polarize_eval(p, std::vector<Point>(m, args[0])), evaluate(p, args[0])));

    double m_fact = 1;
    for (unsigned k = 2; k <= m; ++k) m_fact *= k;
    for (const auto& tuple : set.tuples()) {
      std::vector<Point> basis;
      double alpha_fact = 1;
      for (VarIndex v : tuple.entries()) basis.push_back(Point{{v, 1.0}});
      const auto alpha = tuple_to_exponent(tuple);
      for (const auto& [v, e] : alpha.entries()) {
        for (unsigned k = 2; k <= e; ++k) alpha_fact *= k;
      }
      worst = std::max(worst, oracle::rel_diff(polarize_eval(p, basis) * (m_fact / alpha_fact), p.coefficient(alpha)));
    }
  }
  return {worst <= 1e-10, fmt("1000 polynomials, max relative error %.3g", worst)};
}

SparsePolynomial poly(unsigned m, std::vector<std::pair<MultiIndex, Complex>> terms) {
  SparsePolynomial::Terms t;
  for (auto& [idx, c] : terms) t.emplace(tuple_to_exponent(idx), c);
  return SparsePolynomial(m, std::move(t));
}

const MultilinearForm kHadamard(2, {{{1, 1}, 1.0}, {{1, 2}, 1.0}, {{2, 1}, 1.0}, {{2, 2}, -1.0}});

Outcome known_norms() {
  const OptimizerSettings s;
  double worst = 0;
  const std::pair<SparsePolynomial, double> polys[] = {
      {poly(2, {{MultiIndex{1, 1}, 3.0}}), 3.0},
      {poly(2, {{MultiIndex{1, 1}, 1.0}, {MultiIndex{2, 2}, 1.0}}), 2.0},
      {poly(2, {{MultiIndex{1, 1}, 1.0}, {MultiIndex{2, 2}, -1.0}}), 2.0}};
  for (const auto& [p, norm] : polys) worst = std::max(worst, std::abs(sup_norm_poly(p, s).value - norm));
  const std::pair<MultilinearForm, double> forms[] = {
      {MultilinearForm(2, {{{1, 1}, 2.0}, {{2, 2}, Complex{0, -1}}, {{3, 3}, 0.5}}), 3.5},
      {MultilinearForm(3, {{{1, 1, 1}, 1.0}, {{2, 2, 2}, -2.0}}), 3.0},
      {kHadamard, 2 * std::sqrt(2.0)}};
  for (const auto& [t, norm] : forms) worst = std::max(worst, std::abs(sup_norm_form(t, s).value - norm));
  return {worst <= 1e-6, fmt("6 closed forms, max abs error %.3g", worst)};
}

Outcome khinchine_step() {
  const OptimizerSettings s;
  double worst = 0;
  auto check = [&](const MultilinearForm& t, double norm) {
    const double rhs = std::pow(kKhinchineSteinhaus, t.order() - 1.0) * norm;
    for (std::size_t k = 1; k <= t.order(); ++k) worst = std::max(worst, mixed_norm_lhs(t, k) / rhs);
  };
  check(kHadamard, 2 * std::sqrt(2.0));
  check(MultilinearForm(2, {{{1, 1}, 2.0}, {{2, 2}, 1.0}}), 3.0);
  check(MultilinearForm(3, {{{1, 2, 3}, 5.0}}), 5.0);

  Rng rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const unsigned m = 2 + static_cast<unsigned>(uniform_below(rng, 2));
    MultilinearForm::Entries entries;
    const std::size_t count = 1 + uniform_below(rng, 12);
    for (std::size_t e = 0; e < count; ++e) {
      std::vector<VarIndex> key(m);
      for (auto& v : key) v = 1 + uniform_below(rng, 5);
      entries[key] = std::polar(1.0, 2 * std::numbers::pi * uniform01(rng));
    }
    const MultilinearForm t(m, entries);
    const double sup = sup_norm_form(t, s).value;
    const double rhs = std::pow(kKhinchineSteinhaus, m - 1.0) * sup * 1.05;
    for (std::size_t k = 1; k <= m; ++k) worst = std::max(worst, mixed_norm_lhs(t, k) / rhs);
  }
  const double hadamard_ratio = mixed_norm_lhs(kHadamard, 1) / sup_norm_form(kHadamard, s).value;
  Outcome o;
  o.pass = worst <= 1.0 && std::abs(hadamard_ratio - 1) <= 1e-6;
  o.detail = fmt("max margin %.4f, Hadamard ratio %.9f", worst, hadamard_ratio);
  return o;
}

Outcome polarization_bound() {
  const OptimizerSettings s;
  Rng rng(17);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned m = 1 + static_cast<unsigned>(uniform_below(rng, 4));
    const auto set = oracle::random_index_set(rng, m, 8, 4);
    const auto p = random_polynomial(set, CoefficientDistribution::steinhaus, trial);
    const double form = sup_norm_form(symmetric_tensor(p, set), s).value;
    worst = std::max(worst, form / (std::exp(double(m)) * sup_norm_poly(p, s).value * 1.05));
  }
  return {worst <= 1.0, fmt("200 instances, max margin %.4f", worst)};
}

Outcome theorem_end_to_end() {
  const OptimizerSettings s;
  Outcome o;
  const std::pair<IndexSet, double> cases[] = {{gen_arith_diagonal(2, 10), 1.0}, {gen_triangle(2), 1.5}};
  double worst = 0;
  for (const auto& [set, d] : cases) {
    const auto r = verify_theorem(set, d, 20, CoefficientDistribution::steinhaus, 0, s);
    o.pass = o.pass && r.hard_steps_pass();
    worst = std::max(worst, r.max_quotient / (theorem_bound(set.order(), d, r.c_hat).value * 1.05));
  }
  const auto single = verify_theorem(IndexSet(3, {MultiIndex{1, 2, 3}}), 1, 5, CoefficientDistribution::steinhaus, 0, s);
  const bool singleton_ok = std::abs(single.max_quotient - 1) <= 1e-12 && std::abs(single.c_hat * 3 - 1) <= 1e-15;
  o.pass = o.pass && worst <= 1.0 && singleton_ok;
  o.detail = fmt("max Q/bound margin %.4f, singleton Q = %.15f, C_hat = %.15f", worst, single.max_quotient, single.c_hat);
  return o;
}

Outcome stirling() {
  double prev = INFINITY, at200 = 0;
  bool monotone = true;
  for (unsigned m : {10u, 50u, 100u, 200u}) {
    ComparisonRequest r;
    r.m = m;
    r.C = 1;
    r.d = 1.5;
    const double q = theorem_bound(m, 1.5, 1).value / *comparison_bounds(r).asymptotic_bound;
    monotone = monotone && q < prev;
    prev = at200 = q;
  }
  return {monotone && std::abs(at200 - 1) <= 0.1, fmt("ratio at m=200: %.4f, monotone: %.0f", at200, monotone)};
}

Outcome cli_determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "bhlab_acceptance";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto path = [&](const char* f) { return (dir / f).string(); };
  auto run = [&](std::vector<std::string> args, std::string& stdout_text) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    stdout_text = out.str();
    return code;
  };
  std::string ignored;
  run({"gen", "--family", "triangle", "--R", "3", "--out", path("t.idx")}, ignored);
  run({"gen", "--family", "arith-diagonal", "--m", "2", "--terms", "10", "--out", path("d.idx")}, ignored);
  write_text_file(path("p.poly"), "m 3\n1 0 1 1 2\n0 -1 2 3 3\n0.5 0.5 1 2 3\n");

  const std::vector<std::pair<std::vector<std::string>, std::string>> cases{
      {{"gen", "--family", "deltaM", "--m", "3", "--N", "4", "--M", "2"}, ""},
      {{"psi", "--input", path("t.idx"), "--n", "1:6", "--mode", "greedy", "--seed", "3", "--out", path("o.csv")}, "o.csv"},
      {{"dim", "--input", path("t.idx"), "--n", "1,4,9", "--out", path("o.csv")}, "o.csv"},
      {{"bound", "--m", "3", "--d", "1.5", "--c-lambda", "0.4", "--deltaM", "2"}, ""},
      {{"supnorm", "--poly", path("p.poly"), "--restarts", "16", "--seed", "5"}, ""},
      {{"verify", "--input", path("d.idx"), "--d", "1", "--trials", "5", "--seed", "7", "--out", path("r.json")}, "r.json"},
      {{"verify", "--input", path("t.idx"), "--d", "1.5", "--trials", "4", "--dist", "gaussian", "--out", path("r.json")}, "r.json"}};
  int differing = 0;
  for (const auto& [args, file] : cases) {
    std::string reference_out, reference_file;
    bool first = true;
    for (const char* threads : {"1", "4", "1", "2"}) {
      setenv("BHLAB_THREADS", threads, 1);
      std::string out;
      run(args, out);
      const std::string written = file.empty() ? "" : read_text_file(path(file.c_str()));
      if (first) {
        reference_out = out;
        reference_file = written;
        first = false;
      } else if (out != reference_out || written != reference_file) {
        ++differing;
      }
    }
  }
  unsetenv("BHLAB_THREADS");
  std::filesystem::remove_all(dir);
  return {differing == 0, fmt("%.0f invocations x 4 runs, %.0f differing", double(cases.size()), differing)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "dimension of the diagonal sets", 10, dimension_diagonal},
      {2, "dimension of the triangle set", 300, dimension_triangle},
      {3, "psi oracle equivalence", 120, psi_oracle},
      {4, "interpolation identity", 0, interpolation_identity},
      {5, "Hoelder chain", 30, holder_chain},
      {6, "polarization identities", 60, polarization},
      {7, "known-norm suite", 0, known_norms},
      {8, "Khinchine mixed-norm step", 0, khinchine_step},
      {9, "polarization bound", 0, polarization_bound},
      {10, "theorem end to end", 0, theorem_end_to_end},
      {11, "Stirling asymptotics", 0, stirling},
      {12, "CLI determinism", 0, cli_determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0 && secs > c.time_limit_s) {
      o.pass = false;
      o.detail += fmt(" [over time limit %.0f s]", c.time_limit_s);
    }
    failures += !o.pass;
    std::printf("criterion %2d %s  %-32s %s (%.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
