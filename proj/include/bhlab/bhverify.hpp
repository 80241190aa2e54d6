#pragma once

// Bound formulas, exponent arithmetic, mixed norms, the empirical Bayart
// constant, and the per-step verifier of the restricted BH chain.

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bhlab/index_core.hpp"
#include "bhlab/parallel.hpp"
#include "bhlab/polylab.hpp"

namespace bhlab {

/// 2/sqrt(pi): the Steinhaus-Khinchine constant per extra slot.
inline constexpr double kKhinchineSteinhaus = 1.1283791670955126;

struct ExponentData {
  unsigned m = 0;
  double d = 0.0;
  double bh_exponent = 0.0;      // 2m/(m+1)
  double bayart_exponent = 0.0;  // 2d/(1+d)
  double theta = 0.0;            // d/m
};

/// Throws std::domain_error unless 0 < d <= m.
ExponentData exponents(unsigned m, double d);

using Rational = boost::rational<std::int64_t>;

struct ExactExponents {
  unsigned m = 0;
  Rational d;
  Rational bh_exponent;
  Rational bayart_exponent;
  Rational theta;

  /// 1/bh == theta/bayart + (1 - theta)/2, compared exactly.
  bool interpolation_identity_holds() const;
};

ExactExponents exponents_exact(unsigned m, Rational d);

struct BoundValue {
  double value = 0.0;
  double e_factor = 0.0;          // e^d
  double constant_factor = 0.0;   // (C m m!)^(d/m)
  double khinchine_factor = 0.0;  // (2/sqrt(pi))^((m-1)d/m)
};

/// e^d (C m m!)^(d/m) (2/sqrt(pi))^((m-1)d/m). d = 0 gives 1.
BoundValue theorem_bound(unsigned m, double d, double C);

struct ComparisonRequest {
  unsigned m = 0;
  std::optional<unsigned> M;
  std::optional<double> eps;
  std::optional<double> kappa;
  std::optional<double> C;
  std::optional<double> d;
};

struct ComparisonBounds {
  std::optional<double> delta_M_bound;     // 2^(M/2) m^((M+1)/2)
  std::optional<double> classical_bound;   // kappa (1+eps)^m
  std::optional<double> asymptotic_bound;  // (2C/sqrt(pi))^d m^d
};

/// Fills each bound whose parameters are present.
ComparisonBounds comparison_bounds(const ComparisonRequest& request);

/// l1 over slot k (1-based) of the l2 norms over the remaining slots.
double mixed_norm_lhs(const MultilinearForm& t, std::size_t k);

/// l_{2d/(1+d)} aggregate of |T| at the tuples of `set`.
double bayart_lhs(const MultilinearForm& t, const IndexSet& set, double d);

/// bayart_lhs / sum_k mixed_norm_lhs(t, k).
double bayart_ratio(const MultilinearForm& t, const IndexSet& set, double d);

struct BayartEstimate {
  double c_hat = 0.0;
  std::vector<double> ratios;  // one per non-degenerate trial, in trial order
  std::uint64_t skipped = 0;
};

/// Max Bayart ratio over random symmetric tensors on `set`.
BayartEstimate estimate_bayart_constant(const IndexSet& set, double d, std::uint64_t trials,
                                        CoefficientDistribution dist, std::uint64_t seed,
                                        Exec exec = Exec::parallel);

struct HolderCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};

/// ||c||_{2m/(m+1)} <= ||c||_{2d/(1+d)}^theta ||c||_2^(1-theta), theta = d/m.
HolderCheck holder_chain_check(std::span<const Complex> c, unsigned m, double d);

struct TrialRecord {
  std::uint64_t seed = 0;
  double sup_poly = 0.0;
  double sup_form = 0.0;
  double quotient = 0.0;  // ||c||_{2m/(m+1)} / sup_poly
  double khinchine_margin = 0.0;
  double polarization_margin = 0.0;
  double max_modulus_margin = 0.0;
  double holder_margin = 0.0;
  double bayart_ratio = 0.0;
};

struct StepSummary {
  double max_margin = 0.0;
  bool pass = true;
};

struct VerificationReport {
  std::string lambda_label;
  unsigned m = 0;
  double d = 0.0;
  OptimizerSettings settings;
  double slack = 0.05;
  double c_hat = 0.0;
  double max_quotient = 0.0;
  BoundValue theorem_bound;
  double theorem_margin = 0.0;
  bool theorem_pass = false;
  StepSummary khinchine;     // soft: sup-dependent
  StepSummary polarization;  // soft
  StepSummary max_modulus;   // soft
  StepSummary holder;        // hard: exact inequality
  std::vector<TrialRecord> trials;

  bool hard_steps_pass() const { return holder.pass; }
  bool soft_steps_pass() const {
    return khinchine.pass && polarization.pass && max_modulus.pass && theorem_pass;
  }
};

inline constexpr double kExactSlack = 1e-9;

/// All chain margins for one polynomial supported on `set`.
TrialRecord verify_polynomial(const SparsePolynomial& p, const IndexSet& set, double d,
                              const OptimizerSettings& settings);

/// Runs `trials` random polynomials on `set` and aggregates the margins.
/// Soft steps pass when margin <= 1 + slack, the Hoelder step when
/// margin <= 1 + kExactSlack.
VerificationReport verify_theorem(const IndexSet& set, double d, std::uint64_t trials,
                                  CoefficientDistribution dist, std::uint64_t seed,
                                  const OptimizerSettings& settings, double slack = 0.05,
                                  Exec exec = Exec::parallel);

/// Aggregates pre-computed trial records (used by verify_theorem).
VerificationReport summarize(const IndexSet& set, double d, const OptimizerSettings& settings,
                             double slack, std::vector<TrialRecord> trials);

}  // namespace bhlab
