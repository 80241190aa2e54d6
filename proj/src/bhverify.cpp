#include "bhlab/bhverify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace bhlab {

namespace {

void require_dimension(unsigned m, double d) {
  if (m == 0) throw std::domain_error("m must be >= 1");
  if (!(d > 0.0) || d > static_cast<double>(m)) {
    throw std::domain_error("dimension parameter d must satisfy 0 < d <= m");
  }
}

}  // namespace

ExponentData exponents(unsigned m, double d) {
  require_dimension(m, d);
  ExponentData e;
  e.m = m;
  e.d = d;
  e.bh_exponent = 2.0 * m / (m + 1.0);
  e.bayart_exponent = 2.0 * d / (1.0 + d);
  e.theta = d / m;
  return e;
}

ExactExponents exponents_exact(unsigned m, Rational d) {
  if (m == 0) throw std::domain_error("m must be >= 1");
  if (d <= 0 || d > Rational(m)) throw std::domain_error("dimension parameter d must satisfy 0 < d <= m");
  ExactExponents e;
  e.m = m;
  e.d = d;
  e.bh_exponent = Rational(2 * static_cast<std::int64_t>(m), m + 1);
  e.bayart_exponent = 2 * d / (1 + d);
  e.theta = d / static_cast<std::int64_t>(m);
  return e;
}

bool ExactExponents::interpolation_identity_holds() const {
  return 1 / bh_exponent == theta / bayart_exponent + (1 - theta) / 2;
}

BoundValue theorem_bound(unsigned m, double d, double C) {
  if (m == 0) throw std::domain_error("m must be >= 1");
  if (!(C > 0.0)) throw std::domain_error("constant C must be positive");
  if (d < 0.0 || d > static_cast<double>(m)) throw std::domain_error("d must satisfy 0 <= d <= m");
  BoundValue b;
  if (d == 0.0) {
    b.value = b.e_factor = b.constant_factor = b.khinchine_factor = 1.0;
    return b;
  }
  const double md = static_cast<double>(m);
  // (C m m!)^(d/m) through logs; m! overflows a double past m = 170.
  const double log_constant = (d / md) * (std::log(C) + std::log(md) + std::lgamma(md + 1.0));
  const double log_khinchine = ((md - 1.0) * d / md) * std::log(kKhinchineSteinhaus);
  b.e_factor = std::exp(d);
  b.constant_factor = std::exp(log_constant);
  b.khinchine_factor = std::exp(log_khinchine);
  b.value = b.e_factor * b.constant_factor * b.khinchine_factor;
  return b;
}

ComparisonBounds comparison_bounds(const ComparisonRequest& r) {
  if (r.m == 0) throw std::domain_error("m must be >= 1");
  const double m = r.m;
  ComparisonBounds out;
  if (r.M) {
    if (*r.M < 1 || *r.M > r.m) throw std::domain_error("M must satisfy 1 <= M <= m");
    const double M = *r.M;
    out.delta_M_bound = std::pow(2.0, M / 2.0) * std::pow(m, (M + 1.0) / 2.0);
  }
  if (r.eps || r.kappa) {
    if (!r.eps || !r.kappa) throw std::invalid_argument("classical bound needs both eps and kappa");
    if (!(*r.eps > 0.0) || !(*r.kappa > 0.0)) throw std::domain_error("eps and kappa must be positive");
    out.classical_bound = *r.kappa * std::pow(1.0 + *r.eps, m);
  }
  if (r.C || r.d) {
    if (!r.C || !r.d) throw std::invalid_argument("asymptotic bound needs both C and d");
    if (!(*r.C > 0.0) || *r.d < 0.0) throw std::domain_error("asymptotic bound needs C > 0, d >= 0");
    out.asymptotic_bound = std::pow(2.0 * *r.C / std::sqrt(std::numbers::pi), *r.d) * std::pow(m, *r.d);
  }
  return out;
}

double mixed_norm_lhs(const MultilinearForm& t, std::size_t k) {
  if (k < 1 || k > t.order()) {
    throw std::out_of_range("slot " + std::to_string(k) + " outside 1.." + std::to_string(t.order()));
  }
  std::map<VarIndex, double> squares;
  for (const auto& [index, value] : t.entries()) squares[index[k - 1]] += std::norm(value);
  double sum = 0.0;
  for (const auto& [var, sq] : squares) sum += std::sqrt(sq);
  return sum;
}

double bayart_lhs(const MultilinearForm& t, const IndexSet& set, double d) {
  if (!(d > 0.0)) throw std::domain_error("bayart_lhs needs d > 0");
  std::vector<double> moduli;
  moduli.reserve(set.size());
  for (const auto& tuple : set.tuples()) {
    const auto v = t.entry(std::vector<VarIndex>(tuple.entries().begin(), tuple.entries().end()));
    if (v != Complex{}) moduli.push_back(std::abs(v));
  }
  return lp_norm(moduli, 2.0 * d / (1.0 + d));
}

double bayart_ratio(const MultilinearForm& t, const IndexSet& set, double d) {
  double rhs = 0.0;
  for (std::size_t k = 1; k <= t.order(); ++k) rhs += mixed_norm_lhs(t, k);
  if (rhs == 0.0) throw std::domain_error("Bayart ratio undefined for the zero form");
  return bayart_lhs(t, set, d) / rhs;
}

BayartEstimate estimate_bayart_constant(const IndexSet& set, double d, std::uint64_t trials,
                                        CoefficientDistribution dist, std::uint64_t seed, Exec exec) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (!(d > 0.0)) throw std::domain_error("d must be positive");
  std::vector<std::optional<double>> ratios(trials);
  for_each_index(trials, exec, [&](std::size_t i) {
    const auto p = random_polynomial(set, dist, derive_seed(seed, i));
    const auto t = symmetric_tensor(p, set);
    if (t.size() == 0) return;
    ratios[i] = bayart_ratio(t, set, d);
  });
  BayartEstimate out;
  for (const auto& r : ratios) {
    if (!r) {
      ++out.skipped;
      continue;
    }
    out.ratios.push_back(*r);
    out.c_hat = std::max(out.c_hat, *r);
  }
  return out;
}

HolderCheck holder_chain_check(std::span<const Complex> c, unsigned m, double d) {
  const auto e = exponents(m, d);
  if (c.empty()) throw std::invalid_argument("coefficient vector must be nonempty");
  std::vector<double> moduli;
  moduli.reserve(c.size());
  for (const auto& z : c) moduli.push_back(std::abs(z));
  HolderCheck h;
  h.lhs = lp_norm(moduli, e.bh_exponent);
  h.rhs = std::pow(lp_norm(moduli, e.bayart_exponent), e.theta) *
          std::pow(lp_norm(moduli, 2.0), 1.0 - e.theta);
  h.margin = h.rhs == 0.0 ? (h.lhs == 0.0 ? 1.0 : INFINITY) : h.lhs / h.rhs;
  return h;
}

TrialRecord verify_polynomial(const SparsePolynomial& p, const IndexSet& set, double d,
                              const OptimizerSettings& settings) {
  const unsigned m = set.order();
  const auto e = exponents(m, d);
  const auto t = symmetric_tensor(p, set);

  TrialRecord rec;
  rec.sup_poly = sup_norm_poly(p, settings, Exec::serial).value;
  rec.sup_form = sup_norm_form(t, settings, Exec::serial).value;
  if (rec.sup_poly == 0.0 || rec.sup_form == 0.0) {
    throw std::domain_error("sup norm estimate is zero; the polynomial is degenerate");
  }

  const double khinchine_rhs = std::pow(kKhinchineSteinhaus, m - 1.0) * rec.sup_form;
  for (std::size_t k = 1; k <= m; ++k) {
    rec.khinchine_margin = std::max(rec.khinchine_margin, mixed_norm_lhs(t, k) / khinchine_rhs);
  }
  rec.polarization_margin = rec.sup_form / (std::exp(static_cast<double>(m)) * rec.sup_poly);
  rec.max_modulus_margin = coeff_norm(p, 2.0) / rec.sup_poly;

  std::vector<Complex> coefficients;
  coefficients.reserve(p.size());
  for (const auto& [alpha, c] : p.terms()) coefficients.push_back(c);
  rec.holder_margin = holder_chain_check(coefficients, m, d).margin;
  rec.bayart_ratio = bayart_ratio(t, set, d);
  rec.quotient = coeff_norm(p, e.bh_exponent) / rec.sup_poly;
  return rec;
}

VerificationReport summarize(const IndexSet& set, double d, const OptimizerSettings& settings,
                             double slack, std::vector<TrialRecord> trials) {
  VerificationReport r;
  r.lambda_label = set.label();
  r.m = set.order();
  r.d = d;
  r.settings = settings;
  r.slack = slack;
  for (const auto& t : trials) {
    r.c_hat = std::max(r.c_hat, t.bayart_ratio);
    r.max_quotient = std::max(r.max_quotient, t.quotient);
    r.khinchine.max_margin = std::max(r.khinchine.max_margin, t.khinchine_margin);
    r.polarization.max_margin = std::max(r.polarization.max_margin, t.polarization_margin);
    r.max_modulus.max_margin = std::max(r.max_modulus.max_margin, t.max_modulus_margin);
    r.holder.max_margin = std::max(r.holder.max_margin, t.holder_margin);
  }
  r.khinchine.pass = r.khinchine.max_margin <= 1.0 + slack;
  r.polarization.pass = r.polarization.max_margin <= 1.0 + slack;
  r.max_modulus.pass = r.max_modulus.max_margin <= 1.0 + slack;
  r.holder.pass = r.holder.max_margin <= 1.0 + kExactSlack;
  r.theorem_bound = theorem_bound(r.m, d, r.c_hat > 0.0 ? r.c_hat : 1.0);
  r.theorem_margin = r.max_quotient / r.theorem_bound.value;
  r.theorem_pass = r.theorem_margin <= 1.0 + slack;
  r.trials = std::move(trials);
  return r;
}

VerificationReport verify_theorem(const IndexSet& set, double d, std::uint64_t trials,
                                  CoefficientDistribution dist, std::uint64_t seed,
                                  const OptimizerSettings& settings, double slack, Exec exec) {
  if (set.empty()) throw std::invalid_argument("index set is empty");
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (!(slack >= 0.0)) throw std::invalid_argument("slack must be nonnegative");
  exponents(set.order(), d);
  settings.validate();

  std::vector<TrialRecord> records(trials);
  for_each_index(trials, exec, [&](std::size_t i) {
    const std::uint64_t trial_seed = derive_seed(seed, i);
    try {
      records[i] = verify_polynomial(random_polynomial(set, dist, trial_seed), set, d, settings);
    } catch (const std::exception& e) {
      throw std::runtime_error("trial " + std::to_string(i) + ": " + e.what());
    }
    records[i].seed = trial_seed;
  });
  return summarize(set, d, settings, slack, std::move(records));
}

}  // namespace bhlab
