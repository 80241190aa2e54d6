#include "bhlab/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <vector>

#include "bhlab/bhverify.hpp"
#include "bhlab/combdim.hpp"
#include "bhlab/index_core.hpp"
#include "bhlab/parallel.hpp"
#include "bhlab/polylab.hpp"
#include "bhlab/reports.hpp"

namespace bhlab {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::uint64_t parse_u64(std::string_view token, const char* flag) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw UsageError(std::string(flag) + ": expected an integer, got '" + std::string(token) + "'");
  }
  return v;
}

double parse_double(std::string_view token, const char* flag) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw UsageError(std::string(flag) + ": expected a number, got '" + std::string(token) + "'");
  }
  return v;
}

// "1,4,9" or "a:b".
std::vector<std::uint64_t> parse_n_list(const std::string& text) {
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    const auto first = parse_u64(std::string_view(text).substr(0, colon), "--n");
    const auto last = parse_u64(std::string_view(text).substr(colon + 1), "--n");
    if (first < 1 || first > last) throw UsageError("--n: range must satisfy 1 <= a <= b");
    return n_range(first, last);
  }
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(parse_u64(std::string_view(text).substr(pos, comma - pos), "--n"));
    pos = comma + 1;
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

struct GenArgs {
  std::string family;
  unsigned m = 2;
  std::uint64_t N = 0, M = 0, terms = 0, R = 0;
  std::string out;
};

struct PsiArgs {
  std::string input;
  std::string n;
  std::string mode = "exact";
  std::uint64_t budget = 1'000'000;
  std::uint64_t restarts = 32;
  std::uint64_t seed = 0;
  std::string out;
  std::string fit = "least_squares";
};

struct BoundArgs {
  unsigned m = 0;
  double d = 0.0;
  double c_lambda = 1.0;
  std::optional<unsigned> delta_M;
  std::string classical;
  std::optional<double> asymptotic_C;
};

struct SupArgs {
  std::string poly;
  OptimizerSettings settings;
};

struct VerifyArgs {
  std::string input;
  double d = 0.0;
  std::uint64_t trials = 20;
  std::string dist = "steinhaus";
  double slack = 0.05;
  std::string out;
  OptimizerSettings settings;
};

int run_gen(const GenArgs& a, std::ostream& out) {
  auto need = [](std::uint64_t v, const char* flag) {
    if (v == 0) throw UsageError(std::string("gen: ") + flag + " is required for this family");
    return v;
  };
  std::optional<IndexSet> set;
  if (a.family == "full") {
    set = gen_full(a.m, need(a.N, "--N"));
  } else if (a.family == "deltaM") {
    set = gen_delta_M(a.m, static_cast<unsigned>(need(a.M, "--M")), need(a.N, "--N"));
  } else if (a.family == "prime-diagonal") {
    set = gen_prime_diagonal(a.m, need(a.terms, "--terms"));
  } else if (a.family == "arith-diagonal") {
    set = gen_arith_diagonal(a.m, need(a.terms, "--terms"));
  } else {
    set = gen_triangle(need(a.R, "--R"));
  }
  const auto text = serialize_index_set(*set);
  if (a.out.empty()) {
    out << text;
  } else {
    write_text_file(a.out, text);
    out << "wrote " << set->size() << " tuples (m = " << set->order() << ") to " << a.out << '\n';
  }
  return kExitOk;
}

PsiOptions psi_options(const PsiArgs& a, bool fallback) {
  PsiOptions o;
  if (a.mode == "exact") {
    o.mode = fallback ? PsiMode::exact_or_greedy : PsiMode::exact;
  } else {
    o.mode = PsiMode::greedy;
  }
  o.budget = a.budget;
  o.restarts = a.restarts;
  o.seed = a.seed;
  return o;
}

int run_psi(const PsiArgs& a, std::ostream& out) {
  const auto set = parse_index_set(read_text_file(a.input));
  const auto ns = parse_n_list(a.n);
  const auto profile = psi_profile(set, ns, psi_options(a, false));
  const auto csv = profile_to_csv(profile);
  out << csv;
  if (!a.out.empty()) write_text_file(a.out, csv);
  return kExitOk;
}

int run_dim(const PsiArgs& a, std::ostream& out) {
  const auto set = parse_index_set(read_text_file(a.input));
  const auto ns = parse_n_list(a.n);
  const auto est = estimate_dim(set, ns, fit_method_from_string(a.fit), psi_options(a, true));
  const auto csv = profile_to_csv(est.profile);
  out << csv;
  if (!a.out.empty()) write_text_file(a.out, csv);
  bool all_exact = true;
  for (const auto& p : est.profile.points) all_exact = all_exact && p.exact;
  out << "fit " << to_string(est.method) << " over n in [" << est.n_min << ", " << est.n_max << "]\n";
  out << "slope " << format_double(est.slope) << '\n';
  out << "intercept " << format_double(est.intercept) << '\n';
  if (!all_exact) out << "note: some psi values are heuristic lower bounds (exact=false)\n";
  return kExitOk;
}

int run_bound(const BoundArgs& a, std::ostream& out) {
  const auto b = theorem_bound(a.m, a.d, a.c_lambda);
  out << "theorem_bound " << format_double(b.value) << '\n';
  out << "  e_factor " << format_double(b.e_factor) << '\n';
  out << "  constant_factor " << format_double(b.constant_factor) << '\n';
  out << "  khinchine_factor " << format_double(b.khinchine_factor) << '\n';
  ComparisonRequest req;
  req.m = a.m;
  req.M = a.delta_M;
  if (!a.classical.empty()) {
    const auto comma = a.classical.find(',');
    if (comma == std::string::npos) throw UsageError("--classical expects eps,kappa");
    req.eps = parse_double(std::string_view(a.classical).substr(0, comma), "--classical");
    req.kappa = parse_double(std::string_view(a.classical).substr(comma + 1), "--classical");
  }
  if (a.asymptotic_C) {
    req.C = a.asymptotic_C;
    req.d = a.d;
  }
  const auto cmp = comparison_bounds(req);
  if (cmp.delta_M_bound) out << "delta_M_bound " << format_double(*cmp.delta_M_bound) << '\n';
  if (cmp.classical_bound) out << "classical_bound " << format_double(*cmp.classical_bound) << '\n';
  if (cmp.asymptotic_bound) out << "asymptotic_bound " << format_double(*cmp.asymptotic_bound) << '\n';
  return kExitOk;
}

int run_supnorm(const SupArgs& a, std::ostream& out) {
  const auto p = parse_polynomial(read_text_file(a.poly));
  const auto est = sup_norm_poly(p, a.settings);
  out << "sup_norm " << format_double(est.value) << '\n';
  out << "converged " << (est.converged ? "true" : "false") << '\n';
  out << "evaluations " << est.evaluations << '\n';
  out << "coeff_l2 " << format_double(coeff_norm(p, 2.0)) << '\n';
  out << "witness";
  for (const auto& [var, phase] : est.witness) out << ' ' << var << ':' << format_double(phase);
  out << '\n';
  return kExitOk;
}

int run_verify(const VerifyArgs& a, std::ostream& out) {
  const auto set = parse_index_set(read_text_file(a.input));
  const auto report = verify_theorem(set, a.d, a.trials, distribution_from_string(a.dist),
                                     a.settings.seed, a.settings, a.slack);
  if (!a.out.empty()) write_report(report, ReportFormat::json, std::filesystem::path(a.out));
  auto line = [&](const char* name, const StepSummary& s, const char* kind) {
    out << "  " << std::left << std::setw(13) << name << " max_margin " << format_double(s.max_margin)
        << "  " << (s.pass ? "pass" : (std::string_view(kind) == "hard" ? "FAIL" : "WARN")) << " ("
        << kind << ")\n";
  };
  out << "index set " << (report.lambda_label.empty() ? "(unlabelled)" : report.lambda_label)
      << ", m = " << report.m << ", d = " << format_double(report.d) << ", trials = " << report.trials.size()
      << '\n';
  line("khinchine", report.khinchine, "soft");
  line("polarization", report.polarization, "soft");
  line("max_modulus", report.max_modulus, "soft");
  line("holder", report.holder, "hard");
  out << "c_hat " << format_double(report.c_hat) << '\n';
  out << "max_quotient " << format_double(report.max_quotient) << '\n';
  out << "theorem_bound " << format_double(report.theorem_bound.value) << " (margin "
      << format_double(report.theorem_margin) << ", " << (report.theorem_pass ? "pass" : "WARN") << ")\n";
  return report.hard_steps_pass() ? kExitOk : kExitCheckFailed;
}

void add_optimizer_flags(CLI::App* cmd, OptimizerSettings& s) {
  cmd->add_option("--restarts", s.restarts, "random restarts")->capture_default_str();
  cmd->add_option("--iters", s.max_iterations, "max iterations per restart")->capture_default_str();
  cmd->add_option("--grid", s.grid_resolution, "phase grid points per variable (0 = off)")
      ->capture_default_str();
  cmd->add_option("--seed", s.seed, "random seed")->capture_default_str();
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bhlab: combinatorial dimension profiles and restricted Bohnenblust-Hille checks", "bhlab"};
  app.require_subcommand(1);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate an index set in .idx format");
  gen->add_option("--family", gen_args.family, "index set family")
      ->required()
      ->check(CLI::IsMember({"full", "deltaM", "prime-diagonal", "arith-diagonal", "triangle"}));
  gen->add_option("--m", gen_args.m, "degree")->capture_default_str();
  gen->add_option("--N", gen_args.N, "number of variables (full, deltaM)");
  gen->add_option("--M", gen_args.M, "max distinct variables per monomial (deltaM)");
  gen->add_option("--terms", gen_args.terms, "number of tuples (diagonal families)");
  gen->add_option("--R", gen_args.R, "side length (triangle)");
  gen->add_option("--out", gen_args.out, "output .idx file (default: stdout)");

  PsiArgs psi_args;
  auto* psi = app.add_subcommand("psi", "compute psi(n) for an index set");
  PsiArgs dim_args;
  auto* dim = app.add_subcommand("dim", "estimate the combinatorial dimension from a psi profile");
  for (auto [cmd, a] : {std::pair{psi, &psi_args}, std::pair{dim, &dim_args}}) {
    cmd->add_option("--input", a->input, ".idx file")->required();
    cmd->add_option("--n", a->n, "n values: comma list or a:b range")->required();
    cmd->add_option("--mode", a->mode, "exact or greedy")
        ->check(CLI::IsMember({"exact", "greedy"}))
        ->capture_default_str();
    cmd->add_option("--budget", a->budget, "branch-and-bound node budget")->capture_default_str();
    cmd->add_option("--restarts", a->restarts, "greedy restarts")->capture_default_str();
    cmd->add_option("--seed", a->seed, "random seed")->capture_default_str();
    cmd->add_option("--out", a->out, "write the profile CSV here");
  }
  dim->add_option("--fit", dim_args.fit, "least_squares or endpoint")
      ->check(CLI::IsMember({"least_squares", "endpoint"}))
      ->capture_default_str();

  BoundArgs bound_args;
  auto* bound = app.add_subcommand("bound", "evaluate the theorem bound and comparison bounds");
  bound->add_option("--m", bound_args.m, "degree")->required();
  bound->add_option("--d", bound_args.d, "dimension parameter")->required();
  bound->add_option("--c-lambda", bound_args.c_lambda, "Bayart constant")->capture_default_str();
  bound->add_option("--deltaM", bound_args.delta_M, "report 2^(M/2) m^((M+1)/2) for this M");
  bound->add_option("--classical", bound_args.classical, "report kappa (1+eps)^m; value eps,kappa");
  bound->add_option("--asymptotic", bound_args.asymptotic_C, "report (2C/sqrt(pi))^d m^d for this C");

  SupArgs sup_args;
  auto* sup = app.add_subcommand("supnorm", "estimate the sup norm of a .poly polynomial");
  sup->add_option("--poly", sup_args.poly, ".poly file")->required();
  add_optimizer_flags(sup, sup_args.settings);

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "check every step of the inequality chain on random polynomials");
  verify->add_option("--input", verify_args.input, ".idx file")->required();
  verify->add_option("--d", verify_args.d, "dimension parameter")->required();
  verify->add_option("--trials", verify_args.trials, "random polynomials")->capture_default_str();
  verify->add_option("--dist", verify_args.dist, "steinhaus or gaussian")
      ->check(CLI::IsMember({"steinhaus", "gaussian"}))
      ->capture_default_str();
  verify->add_option("--slack", verify_args.slack, "slack for sup-dependent steps")->capture_default_str();
  verify->add_option("--out", verify_args.out, "write the JSON report here");
  add_optimizer_flags(verify, verify_args.settings);

  std::vector<const char*> argv{"bhlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    apply_thread_cap_from_env();
    if (gen->parsed()) return run_gen(gen_args, out);
    if (psi->parsed()) return run_psi(psi_args, out);
    if (dim->parsed()) return run_dim(dim_args, out);
    if (bound->parsed()) return run_bound(bound_args, out);
    if (sup->parsed()) return run_supnorm(sup_args, out);
    if (verify->parsed()) return run_verify(verify_args, out);
  } catch (const BudgetExhausted& e) {
    err << "bhlab: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "bhlab: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace bhlab
