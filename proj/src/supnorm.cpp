#include <algorithm>
#include <cmath>
#include <numbers>

#include "bhlab/polylab.hpp"

namespace bhlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-14;

double wrap_phase(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r >= kTwoPi ? 0.0 : r;
}

// P restricted to the polytorus of its support, with variables renumbered
// 0..d-1: P(theta) = sum_a c_a exp(i <a, theta>).
class TorusPolynomial {
 public:
  explicit TorusPolynomial(const SparsePolynomial& p) : support_(p.variable_support()) {
    for (const auto& [alpha, c] : p.terms()) {
      Term term{c, {}};
      for (const auto& [var, exp] : alpha.entries()) {
        const auto pos = std::lower_bound(support_.begin(), support_.end(), var) - support_.begin();
        term.powers.emplace_back(static_cast<std::size_t>(pos), static_cast<double>(exp));
      }
      terms_.push_back(std::move(term));
    }
  }

  std::size_t dimension() const { return support_.size(); }
  const std::vector<VarIndex>& support() const { return support_; }

  Complex value(std::span<const double> theta) const {
    Complex sum{};
    for (const auto& t : terms_) sum += t.coefficient * std::polar(1.0, phase(t, theta));
    return sum;
  }

  // Returns P(theta) and fills dP/dtheta_j.
  Complex value_and_derivative(std::span<const double> theta, std::vector<Complex>& dp) const {
    dp.assign(support_.size(), Complex{});
    Complex sum{};
    for (const auto& t : terms_) {
      const Complex term = t.coefficient * std::polar(1.0, phase(t, theta));
      sum += term;
      const Complex rotated{-term.imag(), term.real()};  // i * term
      for (const auto& [pos, exp] : t.powers) dp[pos] += exp * rotated;
    }
    return sum;
  }

 private:
  struct Term {
    Complex coefficient;
    std::vector<std::pair<std::size_t, double>> powers;
  };

  static double phase(const Term& t, std::span<const double> theta) {
    double angle = 0.0;
    for (const auto& [pos, exp] : t.powers) angle += exp * theta[pos];
    return angle;
  }

  std::vector<VarIndex> support_;
  std::vector<Term> terms_;
};

struct Candidate {
  std::vector<double> theta;
  double modulus = 0.0;
  bool converged = false;
  std::uint64_t evaluations = 0;
};

// Gradient ascent on log |P(theta)|^2 with backtracking. Working with the
// log makes the iteration invariant under scaling P.
Candidate ascend(const TorusPolynomial& poly, std::vector<double> theta, const OptimizerSettings& s) {
  Candidate out;
  std::vector<Complex> dp;
  std::vector<double> grad(theta.size()), trial(theta.size());
  Complex p = poly.value_and_derivative(theta, dp);
  ++out.evaluations;
  double f = std::norm(p);
  double step = s.step_size;
  for (std::uint64_t iter = 0; iter < s.max_iterations; ++iter) {
    if (f == 0.0) break;
    double gg = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      grad[j] = 2.0 * (std::conj(p) * dp[j]).real() / f;
      gg += grad[j] * grad[j];
    }
    if (gg == 0.0) {
      out.converged = true;
      break;
    }
    step = std::min(2.0 * step, s.step_size);
    double f_trial = 0.0;
    bool accepted = false;
    while (step >= kMinStep) {
      for (std::size_t j = 0; j < theta.size(); ++j) trial[j] = theta[j] + step * grad[j];
      f_trial = std::norm(poly.value(trial));
      ++out.evaluations;
      if (f_trial >= f * (1.0 + kArmijo * step * gg)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      out.converged = true;
      break;
    }
    const double improvement = (f_trial - f) / f;
    theta.swap(trial);
    p = poly.value_and_derivative(theta, dp);
    ++out.evaluations;
    f = std::norm(p);
    if (improvement < s.tolerance) {
      out.converged = true;
      break;
    }
  }
  out.theta = std::move(theta);
  out.modulus = std::sqrt(f);
  return out;
}

// Exhaustive grid with theta_0 = 0 (|P| is invariant under a common phase
// rotation since P is homogeneous). Returns the best grid point.
Candidate grid_search(const TorusPolynomial& poly, std::uint64_t resolution, Exec exec) {
  const std::size_t d = poly.dimension();
  std::uint64_t count = 1;
  for (std::size_t j = 1; j < d; ++j) count *= resolution;
  const std::uint64_t chunks = std::min<std::uint64_t>(count, resolution);
  const std::uint64_t per_chunk = (count + chunks - 1) / chunks;
  const double h = kTwoPi / static_cast<double>(resolution);

  auto point_at = [&](std::uint64_t index, std::vector<double>& theta) {
    theta.assign(d, 0.0);
    for (std::size_t j = 1; j < d; ++j) {
      theta[j] = h * static_cast<double>(index % resolution);
      index /= resolution;
    }
  };

  std::vector<std::pair<double, std::uint64_t>> best(chunks, {-1.0, 0});
  for_each_index(chunks, exec, [&](std::size_t c) {
    std::vector<double> theta;
    const std::uint64_t end = std::min<std::uint64_t>(count, (c + 1) * per_chunk);
    for (std::uint64_t idx = c * per_chunk; idx < end; ++idx) {
      point_at(idx, theta);
      const double modulus = std::abs(poly.value(theta));
      if (modulus > best[c].first) best[c] = {modulus, idx};
    }
  });
  auto winner = best.front();
  for (const auto& b : best) {
    if (b.first > winner.first) winner = b;
  }
  Candidate out;
  point_at(winner.second, out.theta);
  out.modulus = winner.first;
  out.converged = true;
  out.evaluations = count;
  return out;
}

}  // namespace

NormEstimate sup_norm_poly(const SparsePolynomial& p, const OptimizerSettings& settings, Exec exec) {
  settings.validate();
  const TorusPolynomial poly(p);
  const std::size_t d = poly.dimension();

  // Slot 0 is the refined grid point (if any); slots 1.. are the restarts.
  std::vector<Candidate> candidates(settings.restarts + 1);
  std::uint64_t grid_evaluations = 0;
  if (settings.grid_resolution > 0 && d >= 1 && d <= 4) {
    Candidate grid = grid_search(poly, settings.grid_resolution, exec);
    grid_evaluations = grid.evaluations;
    candidates[0] = ascend(poly, std::move(grid.theta), settings);
  }
  for_each_index(settings.restarts, exec, [&](std::size_t r) {
    Rng rng(derive_seed(settings.seed, r));
    std::vector<double> theta(d);
    for (auto& t : theta) t = kTwoPi * uniform01(rng);
    candidates[r + 1] = ascend(poly, std::move(theta), settings);
  });

  NormEstimate est;
  est.evaluations = grid_evaluations;
  const Candidate* best = nullptr;
  for (const auto& c : candidates) {
    est.evaluations += c.evaluations;
    if (c.theta.size() == d && (best == nullptr || c.modulus > best->modulus)) best = &c;
  }
  for (std::size_t j = 0; j < d; ++j) est.witness.emplace(poly.support()[j], wrap_phase(best->theta[j]));
  est.converged = best->converged;
  est.value = std::abs(evaluate(p, point_from_phases(est.witness)));
  return est;
}

// ---------------------------------------------------------------------------

namespace {

struct DenseForm {
  std::size_t m = 0;
  std::vector<std::vector<VarIndex>> supports;
  std::vector<Complex> values;
  std::vector<std::uint32_t> positions;  // values.size() * m

  explicit DenseForm(const MultilinearForm& t) : m(t.order()) {
    for (std::size_t k = 0; k < m; ++k) supports.push_back(t.slot_support(k));
    for (const auto& [index, value] : t.entries()) {
      values.push_back(value);
      for (std::size_t k = 0; k < m; ++k) {
        const auto& sup = supports[k];
        positions.push_back(static_cast<std::uint32_t>(
            std::lower_bound(sup.begin(), sup.end(), index[k]) - sup.begin()));
      }
    }
  }
};

struct FormCandidate {
  std::vector<std::vector<Complex>> x;
  double value = 0.0;
  bool converged = false;
  std::uint64_t evaluations = 0;
};

// Round-robin exact maximization: with the other slots fixed, T is linear in
// slot k with coefficients L_v, maximized by x_v = conj(L_v)/|L_v|.
FormCandidate alternate(const DenseForm& form, std::vector<std::vector<Complex>> x,
                        const OptimizerSettings& s) {
  FormCandidate out;
  std::vector<Complex> partial;
  double previous = -1.0;
  double value = 0.0;
  for (std::uint64_t sweep = 0; sweep < s.max_iterations; ++sweep) {
    for (std::size_t k = 0; k < form.m; ++k) {
      partial.assign(form.supports[k].size(), Complex{});
      for (std::size_t e = 0; e < form.values.size(); ++e) {
        Complex prod = form.values[e];
        for (std::size_t l = 0; l < form.m; ++l) {
          if (l != k) prod *= x[l][form.positions[e * form.m + l]];
        }
        partial[form.positions[e * form.m + k]] += prod;
      }
      value = 0.0;
      for (std::size_t v = 0; v < partial.size(); ++v) {
        const double mod = std::abs(partial[v]);
        value += mod;
        if (mod > 0.0) x[k][v] = std::conj(partial[v]) / mod;
      }
      ++out.evaluations;
    }
    if (previous >= 0.0 && value - previous <= s.tolerance * value) {
      out.converged = true;
      break;
    }
    previous = value;
  }
  out.x = std::move(x);
  out.value = value;
  return out;
}

}  // namespace

FormNormEstimate sup_norm_form(const MultilinearForm& t, const OptimizerSettings& settings, Exec exec) {
  settings.validate();
  const DenseForm form(t);
  std::vector<FormCandidate> candidates(settings.restarts);
  for_each_index(settings.restarts, exec, [&](std::size_t r) {
    Rng rng(derive_seed(settings.seed, r));
    std::vector<std::vector<Complex>> x(form.m);
    for (std::size_t k = 0; k < form.m; ++k) {
      for (std::size_t v = 0; v < form.supports[k].size(); ++v) {
        x[k].push_back(std::polar(1.0, kTwoPi * uniform01(rng)));
      }
    }
    candidates[r] = alternate(form, std::move(x), settings);
  });

  FormNormEstimate est;
  const FormCandidate* best = &candidates.front();
  for (const auto& c : candidates) {
    est.evaluations += c.evaluations;
    if (c.value > best->value) best = &c;
  }
  est.converged = best->converged;
  std::vector<Point> args(form.m);
  est.witness.resize(form.m);
  for (std::size_t k = 0; k < form.m; ++k) {
    for (std::size_t v = 0; v < form.supports[k].size(); ++v) {
      est.witness[k].emplace(form.supports[k][v], wrap_phase(std::arg(best->x[k][v])));
    }
    args[k] = point_from_phases(est.witness[k]);
  }
  est.value = t.size() == 0 ? 0.0 : std::abs(t.evaluate(args));
  return est;
}

}  // namespace bhlab
