#pragma once

// Sparse m-homogeneous polynomials over C, their symmetric m-linear forms,
// and sup-norm estimation on the polytorus.

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bhlab/index_core.hpp"
#include "bhlab/parallel.hpp"

namespace bhlab {

using Complex = std::complex<double>;

/// A point given by its coordinates on finitely many variables.
using Point = std::map<VarIndex, Complex>;

/// A point on the polytorus, as phase angles in [0, 2pi).
using PhasePoint = std::map<VarIndex, double>;

Point point_from_phases(const PhasePoint& phases);

class SparsePolynomial {
 public:
  using Terms = std::map<ExponentVector, Complex>;

  /// Every key must have degree m; exact zero coefficients are dropped.
  SparsePolynomial(unsigned m, Terms terms);

  unsigned order() const noexcept { return m_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  const std::vector<VarIndex>& variable_support() const noexcept { return support_; }
  Complex coefficient(const ExponentVector& alpha) const;

  SparsePolynomial scaled(Complex factor) const;

  bool operator==(const SparsePolynomial& other) const {
    return m_ == other.m_ && terms_ == other.terms_;
  }

 private:
  unsigned m_;
  Terms terms_;
  std::vector<VarIndex> support_;
};

/// Sum over alpha of c_alpha * prod_j z_j^alpha_j. Throws std::invalid_argument
/// if z misses a variable of the support.
Complex evaluate(const SparsePolynomial& p, const Point& z);

enum class CoefficientDistribution { steinhaus, gaussian };

const char* to_string(CoefficientDistribution dist);
CoefficientDistribution distribution_from_string(const std::string& name);

/// One coefficient per monomial of `set`, drawn in canonical-tuple order.
/// steinhaus: uniform phase, modulus 1. gaussian: standard complex normal
/// (E|c|^2 = 1).
SparsePolynomial random_polynomial(const IndexSet& set, CoefficientDistribution dist,
                                   std::uint64_t seed);

/// P^(x_1, ..., x_m) by the signed polarization sum
///   1/(2^m m!) * sum_{eps in {-1,1}^m} (prod eps_j) P(sum_j eps_j x_j).
Complex polarize_eval(const SparsePolynomial& p, std::span<const Point> args);

class MultilinearForm {
 public:
  using Entries = std::map<std::vector<VarIndex>, Complex>;

  /// Keys must have length m; exact zeros are dropped.
  MultilinearForm(unsigned m, Entries entries);

  unsigned order() const noexcept { return m_; }
  const Entries& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  Complex entry(const std::vector<VarIndex>& index) const;

  /// Sorted distinct variables that occur in slot k.
  std::vector<VarIndex> slot_support(std::size_t k) const;

  /// T(x_1, ..., x_m); each x_k must cover slot k's support.
  Complex evaluate(std::span<const Point> args) const;

 private:
  unsigned m_;
  Entries entries_;
};

/// Entries P^(e_{i_1}, ..., e_{i_m}) = c_alpha * alpha! / m! at the raw tuples
/// of `on`. Throws std::invalid_argument if a monomial of P has no tuple in `on`.
MultilinearForm symmetric_tensor(const SparsePolynomial& p, const IndexSet& on);

struct OptimizerSettings {
  std::uint64_t restarts = 32;
  std::uint64_t max_iterations = 500;
  double step_size = 0.5;
  double tolerance = 1e-10;
  std::uint64_t grid_resolution = 64;
  std::uint64_t seed = 0;

  void validate() const;
};

struct NormEstimate {
  double value = 0.0;
  PhasePoint witness;
  bool converged = false;
  std::uint64_t evaluations = 0;
};

/// For forms the witness is one phase vector per slot.
struct FormNormEstimate {
  double value = 0.0;
  std::vector<PhasePoint> witness;
  bool converged = false;
  std::uint64_t evaluations = 0;
};

/// Lower estimate of sup |P| over the polytorus of P's variable support
/// (equal to the sup over the unit ball of c_0 by maximum modulus).
/// Combines an exhaustive phase grid (support size <= 4, grid_resolution > 0)
/// with multistart gradient ascent on theta -> |P(e^{i theta})|^2.
NormEstimate sup_norm_poly(const SparsePolynomial& p, const OptimizerSettings& settings,
                           Exec exec = Exec::parallel);

/// Lower estimate of sup |T| over products of polytori by alternating exact
/// single-slot maximization from random phase starts.
FormNormEstimate sup_norm_form(const MultilinearForm& t, const OptimizerSettings& settings,
                               Exec exec = Exec::parallel);

/// (sum_alpha |c_alpha|^p)^(1/p), p > 0.
double coeff_norm(const SparsePolynomial& p, double exponent);

/// l_p (quasi-)norm of a list of moduli, computed with max-scaling.
double lp_norm(std::span<const double> moduli, double exponent);

// .poly text format: header `m <int>`, then `re im i_1 ... i_m` per term.
SparsePolynomial parse_polynomial(std::string_view text);
std::string serialize_polynomial(const SparsePolynomial& p);

}  // namespace bhlab
