#pragma once

// psi(n) = max |(A_1 x ... x A_m) ∩ Λ| over label sets with |A_t| <= n, and
// log-log estimates of the growth exponent of psi.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bhlab/index_core.hpp"
#include "bhlab/parallel.hpp"

namespace bhlab {

/// The branch-and-bound ran out of nodes. Carries the best value found,
/// which is a lower bound for psi but not certified exact.
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(std::uint64_t best_lower_bound, std::uint64_t nodes);
  std::uint64_t best_lower_bound() const noexcept { return best_; }
  std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  std::uint64_t best_;
  std::uint64_t nodes_;
};

struct PsiSearchResult {
  std::uint64_t value = 0;
  std::uint64_t nodes = 0;
};

/// Exact psi by depth-first branch-and-bound over slot labels.
/// Throws BudgetExhausted after `budget` nodes.
PsiSearchResult psi_search(const IndexSet& set, std::uint64_t n, std::uint64_t budget);

std::uint64_t psi_exact(const IndexSet& set, std::uint64_t n, std::uint64_t budget);

/// Lower bound for psi from seeded random starts + single-label swap hill
/// climbing. Restarts are independent (seed derived per restart).
std::uint64_t psi_greedy(const IndexSet& set, std::uint64_t n, std::uint64_t restarts,
                         std::uint64_t seed, Exec exec = Exec::parallel);

/// Number of tuples of `set` inside A_1 x ... x A_m.
std::uint64_t coverage(const IndexSet& set, std::span<const std::vector<VarIndex>> label_sets);

struct PsiPoint {
  std::uint64_t n = 0;
  std::uint64_t psi = 0;
  bool exact = false;
  bool operator==(const PsiPoint&) const = default;
};

struct PsiProfile {
  std::vector<PsiPoint> points;  // strictly increasing n
  bool operator==(const PsiProfile&) const = default;
};

enum class PsiMode {
  exact,           ///< branch-and-bound; BudgetExhausted propagates
  greedy,          ///< heuristic only
  exact_or_greedy  ///< exact where the budget allows, heuristic otherwise
};

struct PsiOptions {
  PsiMode mode = PsiMode::exact_or_greedy;
  std::uint64_t budget = 1'000'000;
  std::uint64_t restarts = 32;
  std::uint64_t seed = 0;
};

/// psi at every n in `ns` (must be strictly increasing and positive).
/// Heuristic points are raised to the running maximum, which stays a valid
/// lower bound because psi is nondecreasing.
PsiProfile psi_profile(const IndexSet& set, std::span<const std::uint64_t> ns,
                       const PsiOptions& options, Exec exec = Exec::parallel);

enum class FitMethod { least_squares, endpoint };

struct DimEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  std::uint64_t n_min = 0;
  std::uint64_t n_max = 0;
  FitMethod method = FitMethod::least_squares;
  PsiProfile profile;
};

/// Slope of log psi against log n. least_squares: OLS over all points;
/// endpoint: log psi(n_max) / log n_max. Throws std::domain_error if any
/// psi is zero.
DimEstimate fit_dimension(PsiProfile profile, FitMethod method);

DimEstimate estimate_dim(const IndexSet& set, std::span<const std::uint64_t> ns,
                         FitMethod method, const PsiOptions& options,
                         Exec exec = Exec::parallel);

/// Window form: n in [n_min .. n_max].
DimEstimate estimate_dim(const IndexSet& set, std::uint64_t n_min, std::uint64_t n_max,
                         FitMethod method, const PsiOptions& options,
                         Exec exec = Exec::parallel);

std::vector<std::uint64_t> n_range(std::uint64_t first, std::uint64_t last);

const char* to_string(FitMethod method);
FitMethod fit_method_from_string(const std::string& name);

}  // namespace bhlab
