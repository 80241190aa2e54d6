#include "bhlab/combdim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bhlab {

BudgetExhausted::BudgetExhausted(std::uint64_t best_lower_bound, std::uint64_t nodes)
    : std::runtime_error("search budget exhausted after " + std::to_string(nodes) +
                         " nodes; best lower bound " + std::to_string(best_lower_bound)),
      best_(best_lower_bound),
      nodes_(nodes) {}

namespace {

// Index set with slot labels renumbered densely (0..S_t-1, in label order).
struct DenseInstance {
  std::size_t m = 0;
  std::size_t count = 0;
  std::vector<std::size_t> support_sizes;
  std::vector<std::uint32_t> labels;  // count * m, row-major

  std::uint32_t at(std::size_t tuple, std::size_t slot) const { return labels[tuple * m + slot]; }

  explicit DenseInstance(const IndexSet& set) : m(set.order()), count(set.size()) {
    const auto supports = set.slot_supports();
    support_sizes.reserve(m);
    for (const auto& s : supports) support_sizes.push_back(s.size());
    labels.resize(count * m);
    for (std::size_t i = 0; i < count; ++i) {
      const auto& t = set.tuples()[i];
      for (std::size_t s = 0; s < m; ++s) {
        const auto& sup = supports[s];
        labels[i * m + s] =
            static_cast<std::uint32_t>(std::lower_bound(sup.begin(), sup.end(), t[s]) - sup.begin());
      }
    }
  }
};

std::uint64_t sum_top(std::vector<std::uint64_t>& values, std::size_t k) {
  k = std::min(k, values.size());
  if (k == 0) return 0;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k - 1), values.end(),
                   std::greater<>());
  return std::accumulate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k),
                         std::uint64_t{0});
}

class BranchAndBound {
 public:
  BranchAndBound(const DenseInstance& inst, std::uint64_t n, std::uint64_t budget,
                 std::uint64_t incumbent)
      : inst_(inst), budget_(budget), best_(incumbent) {
    state_.resize(inst.m);
    in_count_.assign(inst.m, 0);
    cap_.resize(inst.m);
    g_.resize(inst.m);
    for (std::size_t s = 0; s < inst.m; ++s) {
      state_[s].assign(inst.support_sizes[s], kUndecided);
      cap_[s] = std::min<std::uint64_t>(n, inst.support_sizes[s]);
      g_[s].resize(inst.support_sizes[s]);
    }
  }

  PsiSearchResult run() {
    node();
    return {best_, nodes_};
  }

 private:
  enum : std::uint8_t { kUndecided, kIn, kOut };

  struct Change {
    std::uint32_t slot;
    std::uint32_t label;
  };

  void set(std::size_t slot, std::uint32_t label, std::uint8_t value) {
    state_[slot][label] = value;
    if (value == kIn) ++in_count_[slot];
    trail_.push_back({static_cast<std::uint32_t>(slot), label});
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      const auto [slot, label] = trail_.back();
      trail_.pop_back();
      if (state_[slot][label] == kIn) --in_count_[slot];
      state_[slot][label] = kUndecided;
    }
  }

  // Fills a_ (compatible tuples whose slot label is In) and g_
  // (per undecided label, compatible tuples using it). Returns the number of
  // compatible tuples with every label In.
  std::uint64_t tally() {
    const std::size_t m = inst_.m;
    a_.assign(m, 0);
    for (auto& g : g_) std::fill(g.begin(), g.end(), 0);
    std::uint64_t covered = 0;
    for (std::size_t i = 0; i < inst_.count; ++i) {
      bool ok = true;
      bool all_in = true;
      for (std::size_t s = 0; s < m; ++s) {
        const auto st = state_[s][inst_.at(i, s)];
        if (st == kOut) {
          ok = false;
          break;
        }
        all_in = all_in && st == kIn;
      }
      if (!ok) continue;
      if (all_in) ++covered;
      for (std::size_t s = 0; s < m; ++s) {
        const auto label = inst_.at(i, s);
        if (state_[s][label] == kIn) {
          ++a_[s];
        } else {
          ++g_[s][label];
        }
      }
    }
    return covered;
  }

  // Forces labels that cannot help (no capacity left or no compatible tuple)
  // out, and takes every remaining label of a slot when they all fit.
  bool propagate() {
    bool changed = false;
    for (std::size_t s = 0; s < inst_.m; ++s) {
      const std::uint64_t room = cap_[s] - in_count_[s];
      std::uint64_t undecided = 0;
      for (std::uint32_t v = 0; v < state_[s].size(); ++v) {
        if (state_[s][v] != kUndecided) continue;
        if (room == 0 || g_[s][v] == 0) {
          set(s, v, kOut);
          changed = true;
        } else {
          ++undecided;
        }
      }
      if (undecided > 0 && undecided <= room) {
        for (std::uint32_t v = 0; v < state_[s].size(); ++v) {
          if (state_[s][v] == kUndecided) set(s, v, kIn);
        }
        changed = true;
      }
    }
    return changed;
  }

  std::uint64_t slot_bound(std::size_t s) {
    scratch_.clear();
    for (std::uint32_t v = 0; v < state_[s].size(); ++v) {
      if (state_[s][v] == kUndecided) scratch_.push_back(g_[s][v]);
    }
    return a_[s] + sum_top(scratch_, cap_[s] - in_count_[s]);
  }

  void node() {
    if (nodes_ >= budget_) throw BudgetExhausted(best_, nodes_);
    ++nodes_;
    const std::size_t mark = trail_.size();

    std::uint64_t covered = tally();
    while (propagate()) covered = tally();
    best_ = std::max(best_, covered);

    std::uint64_t bound = UINT64_MAX;
    std::size_t open_slots = 0;
    std::size_t branch_slot = inst_.m;
    for (std::size_t s = 0; s < inst_.m; ++s) {
      const bool open = std::find(state_[s].begin(), state_[s].end(), kUndecided) != state_[s].end();
      if (!open) continue;
      ++open_slots;
      if (branch_slot == inst_.m) branch_slot = s;
      bound = std::min(bound, slot_bound(s));
    }

    if (open_slots == 1) {
      // Every other slot is settled, so the slot bound is attained.
      best_ = std::max(best_, bound);
    } else if (open_slots > 1 && bound > best_) {
      auto& labels = state_[branch_slot];
      const auto label = static_cast<std::uint32_t>(
          std::find(labels.begin(), labels.end(), kUndecided) - labels.begin());
      const std::size_t branch_mark = trail_.size();
      set(branch_slot, label, kIn);
      node();
      undo_to(branch_mark);
      set(branch_slot, label, kOut);
      node();
      undo_to(branch_mark);
    }
    undo_to(mark);
  }

  const DenseInstance& inst_;
  std::uint64_t budget_;
  std::uint64_t best_;
  std::uint64_t nodes_ = 0;
  std::vector<std::vector<std::uint8_t>> state_;
  std::vector<std::uint64_t> in_count_;
  std::vector<std::uint64_t> cap_;
  std::vector<std::uint64_t> a_;
  std::vector<std::vector<std::uint64_t>> g_;
  std::vector<Change> trail_;
  std::vector<std::uint64_t> scratch_;
};

std::uint64_t greedy_restart(const DenseInstance& inst, std::uint64_t n, Rng& rng) {
  const std::size_t m = inst.m;
  std::vector<std::vector<char>> in(m);
  std::vector<std::uint64_t> size(m, 0), cap(m);
  for (std::size_t s = 0; s < m; ++s) {
    in[s].assign(inst.support_sizes[s], 0);
    cap[s] = std::min<std::uint64_t>(n, inst.support_sizes[s]);
  }

  // Random start: take whole tuples in random order while they fit, then pad
  // each slot with random unused labels.
  std::vector<std::size_t> order(inst.count);
  std::iota(order.begin(), order.end(), 0);
  shuffle(order, rng);
  for (std::size_t i : order) {
    bool fits = true;
    for (std::size_t s = 0; s < m && fits; ++s) {
      fits = in[s][inst.at(i, s)] || size[s] < cap[s];
    }
    if (!fits) continue;
    for (std::size_t s = 0; s < m; ++s) {
      auto& flag = in[s][inst.at(i, s)];
      if (!flag) {
        flag = 1;
        ++size[s];
      }
    }
  }
  for (std::size_t s = 0; s < m; ++s) {
    std::vector<std::uint32_t> unused;
    for (std::uint32_t v = 0; v < in[s].size(); ++v) {
      if (!in[s][v]) unused.push_back(v);
    }
    shuffle(unused, rng);
    for (std::size_t k = 0; size[s] < cap[s]; ++k) {
      in[s][unused[k]] = 1;
      ++size[s];
    }
  }

  auto covered = [&] {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < inst.count; ++i) {
      bool all = true;
      for (std::size_t s = 0; s < m && all; ++s) all = in[s][inst.at(i, s)];
      c += all;
    }
    return c;
  };

  // First-improvement swap climbing. For slot s, hits[v] counts tuples with
  // label v in slot s whose other labels are all selected; swapping u -> v
  // changes coverage by hits[v] - hits[u].
  std::vector<std::uint64_t> hits;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t s = 0; s < m && !improved; ++s) {
      hits.assign(inst.support_sizes[s], 0);
      for (std::size_t i = 0; i < inst.count; ++i) {
        bool others = true;
        for (std::size_t r = 0; r < m && others; ++r) {
          if (r != s) others = in[r][inst.at(i, r)];
        }
        if (others) ++hits[inst.at(i, s)];
      }
      for (std::uint32_t u = 0; u < hits.size() && !improved; ++u) {
        if (!in[s][u]) continue;
        for (std::uint32_t v = 0; v < hits.size(); ++v) {
          if (!in[s][v] && hits[v] > hits[u]) {
            in[s][u] = 0;
            in[s][v] = 1;
            improved = true;
            break;
          }
        }
      }
    }
  }
  return covered();
}

void require_n(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("n must be >= 1");
}

}  // namespace

PsiSearchResult psi_search(const IndexSet& set, std::uint64_t n, std::uint64_t budget) {
  require_n(n);
  if (set.empty()) return {0, 0};
  const DenseInstance inst(set);
  const std::uint64_t incumbent = psi_greedy(set, n, 8, 0, Exec::serial);
  return BranchAndBound(inst, n, budget, incumbent).run();
}

std::uint64_t psi_exact(const IndexSet& set, std::uint64_t n, std::uint64_t budget) {
  return psi_search(set, n, budget).value;
}

std::uint64_t psi_greedy(const IndexSet& set, std::uint64_t n, std::uint64_t restarts,
                         std::uint64_t seed, Exec exec) {
  require_n(n);
  if (restarts == 0) throw std::invalid_argument("restarts must be >= 1");
  if (set.empty()) return 0;
  const DenseInstance inst(set);
  std::vector<std::uint64_t> results(restarts);
  for_each_index(restarts, exec, [&](std::size_t r) {
    Rng rng(derive_seed(seed, r));
    results[r] = greedy_restart(inst, n, rng);
  });
  return *std::max_element(results.begin(), results.end());
}

std::uint64_t coverage(const IndexSet& set, std::span<const std::vector<VarIndex>> label_sets) {
  if (label_sets.size() != set.order()) throw std::invalid_argument("need one label set per slot");
  std::uint64_t count = 0;
  for (const auto& t : set.tuples()) {
    bool inside = true;
    for (std::size_t s = 0; s < t.order() && inside; ++s) {
      const auto& a = label_sets[s];
      inside = std::find(a.begin(), a.end(), t[s]) != a.end();
    }
    count += inside;
  }
  return count;
}

PsiProfile psi_profile(const IndexSet& set, std::span<const std::uint64_t> ns,
                       const PsiOptions& options, Exec exec) {
  for (std::size_t i = 0; i < ns.size(); ++i) {
    require_n(ns[i]);
    if (i > 0 && ns[i] <= ns[i - 1]) throw std::invalid_argument("n values must be strictly increasing");
  }
  PsiProfile profile;
  profile.points.resize(ns.size());
  for_each_index(ns.size(), exec, [&](std::size_t i) {
    const std::uint64_t n = ns[i];
    PsiPoint& point = profile.points[i];
    point.n = n;
    switch (options.mode) {
      case PsiMode::exact:
        point.psi = psi_exact(set, n, options.budget);
        point.exact = true;
        break;
      case PsiMode::greedy:
        point.psi = psi_greedy(set, n, options.restarts, options.seed, Exec::serial);
        break;
      case PsiMode::exact_or_greedy:
        try {
          point.psi = psi_exact(set, n, options.budget);
          point.exact = true;
        } catch (const BudgetExhausted& e) {
          point.psi = std::max(e.best_lower_bound(),
                               psi_greedy(set, n, options.restarts, options.seed, Exec::serial));
        }
        break;
    }
  });
  std::uint64_t running = 0;
  for (auto& p : profile.points) {
    if (!p.exact) p.psi = std::max(p.psi, running);
    running = std::max(running, p.psi);
  }
  return profile;
}

DimEstimate fit_dimension(PsiProfile profile, FitMethod method) {
  const auto& pts = profile.points;
  if (pts.size() < 2) throw std::invalid_argument("need at least two n values to fit a dimension");
  for (const auto& p : pts) {
    if (p.psi == 0) {
      throw std::domain_error("psi(" + std::to_string(p.n) + ") = 0: logarithm undefined");
    }
  }
  DimEstimate est;
  est.method = method;
  est.n_min = pts.front().n;
  est.n_max = pts.back().n;
  if (method == FitMethod::endpoint) {
    if (est.n_max < 2) throw std::domain_error("endpoint fit needs n_max >= 2");
    est.slope = std::log(static_cast<double>(pts.back().psi)) / std::log(static_cast<double>(est.n_max));
    est.intercept = 0.0;
  } else {
    const double k = static_cast<double>(pts.size());
    double sx = 0, sy = 0;
    for (const auto& p : pts) {
      sx += std::log(static_cast<double>(p.n));
      sy += std::log(static_cast<double>(p.psi));
    }
    const double mx = sx / k, my = sy / k;
    double sxx = 0, sxy = 0;
    for (const auto& p : pts) {
      const double dx = std::log(static_cast<double>(p.n)) - mx;
      sxx += dx * dx;
      sxy += dx * (std::log(static_cast<double>(p.psi)) - my);
    }
    est.slope = sxy / sxx;
    est.intercept = my - est.slope * mx;
  }
  est.profile = std::move(profile);
  return est;
}

DimEstimate estimate_dim(const IndexSet& set, std::span<const std::uint64_t> ns, FitMethod method,
                         const PsiOptions& options, Exec exec) {
  return fit_dimension(psi_profile(set, ns, options, exec), method);
}

DimEstimate estimate_dim(const IndexSet& set, std::uint64_t n_min, std::uint64_t n_max,
                         FitMethod method, const PsiOptions& options, Exec exec) {
  if (n_min < 1 || n_min >= n_max) throw std::invalid_argument("need 1 <= n_min < n_max");
  const auto ns = n_range(n_min, n_max);
  return estimate_dim(set, ns, method, options, exec);
}

std::vector<std::uint64_t> n_range(std::uint64_t first, std::uint64_t last) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = first; n <= last; ++n) out.push_back(n);
  return out;
}

const char* to_string(FitMethod method) {
  return method == FitMethod::endpoint ? "endpoint" : "least_squares";
}

FitMethod fit_method_from_string(const std::string& name) {
  if (name == "least_squares") return FitMethod::least_squares;
  if (name == "endpoint") return FitMethod::endpoint;
  throw std::invalid_argument("unknown fit method '" + name + "'");
}

}  // namespace bhlab
