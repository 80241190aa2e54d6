#include "bhlab/polylab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bhlab {

Point point_from_phases(const PhasePoint& phases) {
  Point z;
  for (const auto& [var, theta] : phases) z.emplace_hint(z.end(), var, std::polar(1.0, theta));
  return z;
}

SparsePolynomial::SparsePolynomial(unsigned m, Terms terms) : m_(m) {
  if (m_ == 0) throw std::invalid_argument("polynomial degree must be >= 1");
  for (auto& [alpha, c] : terms) {
    if (alpha.degree() != m_) {
      throw std::invalid_argument("monomial of degree " + std::to_string(alpha.degree()) +
                                  " in a " + std::to_string(m_) + "-homogeneous polynomial");
    }
    if (c != Complex{}) {
      terms_.emplace_hint(terms_.end(), alpha, c);
      for (const auto& [var, exp] : alpha.entries()) support_.push_back(var);
    }
  }
  std::sort(support_.begin(), support_.end());
  support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
}

Complex SparsePolynomial::coefficient(const ExponentVector& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Complex{} : it->second;
}

SparsePolynomial SparsePolynomial::scaled(Complex factor) const {
  Terms out;
  for (const auto& [alpha, c] : terms_) out.emplace_hint(out.end(), alpha, c * factor);
  return SparsePolynomial(m_, std::move(out));
}

namespace {

Complex int_pow(Complex z, unsigned exp) {
  Complex out{1.0, 0.0};
  while (exp > 0) {
    if (exp & 1U) out *= z;
    z *= z;
    exp >>= 1U;
  }
  return out;
}

// m! / alpha! as a double; exact while it fits in 64 bits.
double multinomial(const ExponentVector& alpha) {
  std::uint64_t value = 1;
  unsigned partial = 0;
  bool exact = true;
  long double approx = 1.0L;
  for (const auto& [var, exp] : alpha.entries()) {
    for (unsigned k = 1; k <= exp; ++k) {
      ++partial;
      // value *= partial / k, kept integral: binomial(partial, k) steps.
      approx = approx * partial / k;
      if (exact) {
        std::uint64_t prod = 0;
        if (__builtin_mul_overflow(value, partial, &prod)) {
          exact = false;
        } else {
          value = prod / k;
        }
      }
    }
  }
  return exact ? static_cast<double>(value) : static_cast<double>(approx);
}

}  // namespace

Complex evaluate(const SparsePolynomial& p, const Point& z) {
  Complex sum{};
  for (const auto& [alpha, c] : p.terms()) {
    Complex term = c;
    for (const auto& [var, exp] : alpha.entries()) {
      auto it = z.find(var);
      if (it == z.end()) {
        throw std::invalid_argument("point has no coordinate for variable " + std::to_string(var));
      }
      term *= int_pow(it->second, exp);
    }
    sum += term;
  }
  return sum;
}

const char* to_string(CoefficientDistribution dist) {
  return dist == CoefficientDistribution::gaussian ? "gaussian" : "steinhaus";
}

CoefficientDistribution distribution_from_string(const std::string& name) {
  if (name == "steinhaus") return CoefficientDistribution::steinhaus;
  if (name == "gaussian") return CoefficientDistribution::gaussian;
  throw std::invalid_argument("unknown coefficient distribution '" + name + "'");
}

SparsePolynomial random_polynomial(const IndexSet& set, CoefficientDistribution dist,
                                   std::uint64_t seed) {
  if (set.empty()) throw std::invalid_argument("cannot draw a polynomial on an empty index set");
  std::vector<MultiIndex> canonical;
  canonical.reserve(set.size());
  for (const auto& t : set.tuples()) canonical.push_back(canonicalize(t));
  std::sort(canonical.begin(), canonical.end());

  Rng rng(mix_seed(seed));
  constexpr double two_pi = 2.0 * std::numbers::pi;
  SparsePolynomial::Terms terms;
  for (const auto& t : canonical) {
    Complex c;
    if (dist == CoefficientDistribution::steinhaus) {
      c = std::polar(1.0, two_pi * uniform01(rng));
    } else {
      const double u1 = 1.0 - uniform01(rng);  // (0, 1]
      const double u2 = uniform01(rng);
      c = std::polar(std::sqrt(-std::log(u1)), two_pi * u2);
    }
    terms.emplace(tuple_to_exponent(t), c);
  }
  return SparsePolynomial(set.order(), std::move(terms));
}

Complex polarize_eval(const SparsePolynomial& p, std::span<const Point> args) {
  const unsigned m = p.order();
  if (args.size() != m) {
    throw std::invalid_argument("polarization needs " + std::to_string(m) + " arguments, got " +
                                std::to_string(args.size()));
  }
  if (m > 30) throw std::invalid_argument("polarization sum limited to m <= 30");
  Point y;
  for (VarIndex v : p.variable_support()) y.emplace_hint(y.end(), v, Complex{});
  for (const auto& x : args) {
    for (const auto& [var, value] : x) y.emplace(var, Complex{});
  }

  Complex sum{};
  const std::uint64_t patterns = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    for (auto& [var, value] : y) value = Complex{};
    int sign = 1;
    for (unsigned j = 0; j < m; ++j) {
      const bool negative = (mask >> j) & 1U;
      if (negative) sign = -sign;
      for (const auto& [var, value] : args[j]) y[var] += negative ? -value : value;
    }
    const Complex value = evaluate(p, y);
    sum += sign > 0 ? value : -value;
  }
  double factorial = 1.0;
  for (unsigned k = 2; k <= m; ++k) factorial *= k;
  return sum / (static_cast<double>(patterns) * factorial);
}

MultilinearForm::MultilinearForm(unsigned m, Entries entries) : m_(m) {
  if (m_ == 0) throw std::invalid_argument("multilinear form order must be >= 1");
  for (auto& [index, value] : entries) {
    if (index.size() != m_) throw std::invalid_argument("entry index has the wrong arity");
    if (value != Complex{}) entries_.emplace_hint(entries_.end(), index, value);
  }
}

Complex MultilinearForm::entry(const std::vector<VarIndex>& index) const {
  auto it = entries_.find(index);
  return it == entries_.end() ? Complex{} : it->second;
}

std::vector<VarIndex> MultilinearForm::slot_support(std::size_t k) const {
  if (k >= m_) throw std::out_of_range("slot index out of range");
  std::vector<VarIndex> out;
  for (const auto& [index, value] : entries_) out.push_back(index[k]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Complex MultilinearForm::evaluate(std::span<const Point> args) const {
  if (args.size() != m_) throw std::invalid_argument("form evaluation needs one point per slot");
  Complex sum{};
  for (const auto& [index, value] : entries_) {
    Complex term = value;
    for (std::size_t k = 0; k < m_; ++k) {
      auto it = args[k].find(index[k]);
      if (it == args[k].end()) {
        throw std::invalid_argument("slot " + std::to_string(k + 1) + " point has no coordinate " +
                                    std::to_string(index[k]));
      }
      term *= it->second;
    }
    sum += term;
  }
  return sum;
}

MultilinearForm symmetric_tensor(const SparsePolynomial& p, const IndexSet& on) {
  if (on.order() != p.order()) throw std::invalid_argument("index set and polynomial degrees differ");
  MultilinearForm::Entries entries;
  for (const auto& [alpha, c] : p.terms()) {
    const MultiIndex* tuple = on.representative(alpha);
    if (tuple == nullptr) {
      std::ostringstream msg;
      msg << "monomial (";
      const auto t = exponent_to_tuple(alpha);
      for (std::size_t s = 0; s < t.order(); ++s) msg << (s ? "," : "") << t[s];
      msg << ") has no tuple in the index set";
      throw std::invalid_argument(msg.str());
    }
    entries.emplace(std::vector<VarIndex>(tuple->entries().begin(), tuple->entries().end()),
                    c / multinomial(alpha));
  }
  return MultilinearForm(p.order(), std::move(entries));
}

double lp_norm(std::span<const double> moduli, double exponent) {
  if (!(exponent > 0.0)) throw std::domain_error("l_p exponent must be positive");
  double scale = 0.0;
  for (double v : moduli) scale = std::max(scale, v);
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : moduli) sum += std::pow(v / scale, exponent);
  return scale * std::pow(sum, 1.0 / exponent);
}

double coeff_norm(const SparsePolynomial& p, double exponent) {
  std::vector<double> moduli;
  moduli.reserve(p.size());
  for (const auto& [alpha, c] : p.terms()) moduli.push_back(std::abs(c));
  return lp_norm(moduli, exponent);
}

void OptimizerSettings::validate() const {
  if (restarts == 0) throw std::invalid_argument("restarts must be >= 1");
  if (max_iterations == 0) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(step_size > 0.0)) throw std::invalid_argument("step_size must be positive");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
}

// ---------------------------------------------------------------------------
// .poly format

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const auto start = s.find_first_not_of(" \t", pos);
    if (start == std::string_view::npos) break;
    auto end = s.find_first_of(" \t", start);
    if (end == std::string_view::npos) end = s.size();
    out.push_back(s.substr(start, end - start));
    pos = end;
  }
  return out;
}

template <class T>
T parse_number(std::string_view token, std::size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(token) + "'");
  }
  return value;
}

void append_double(std::string& out, double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  out.append(buf, ptr);
}

}  // namespace

SparsePolynomial parse_polynomial(std::string_view text) {
  unsigned m = 0;
  SparsePolynomial::Terms terms;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto tokens = split_ws(line);
    if (m == 0) {
      if (tokens.size() != 2 || tokens[0] != "m") throw ParseError(line_no, "expected header 'm <int>'");
      m = parse_number<unsigned>(tokens[1], line_no, "a positive integer");
      if (m == 0 || m > 64) throw ParseError(line_no, "degree must be in [1, 64]");
      continue;
    }
    if (tokens.size() != m + 2) {
      throw ParseError(line_no, "expected 're im' and " + std::to_string(m) + " indices, got " +
                                    std::to_string(tokens.size()) + " fields");
    }
    const double re = parse_number<double>(tokens[0], line_no, "a real number");
    const double im = parse_number<double>(tokens[1], line_no, "a real number");
    std::vector<VarIndex> entries;
    for (std::size_t k = 2; k < tokens.size(); ++k) {
      const auto v = parse_number<VarIndex>(tokens[k], line_no, "a positive integer");
      if (v == 0) throw ParseError(line_no, "indices must be positive, got 0");
      entries.push_back(v);
    }
    auto [it, inserted] = terms.emplace(tuple_to_exponent(MultiIndex(std::move(entries))), Complex{re, im});
    if (!inserted) throw ParseError(line_no, "monomial listed twice");
  }
  if (m == 0) throw ParseError(std::max<std::size_t>(line_no, 1), "missing header 'm <int>'");
  return SparsePolynomial(m, std::move(terms));
}

std::string serialize_polynomial(const SparsePolynomial& p) {
  std::vector<std::pair<MultiIndex, Complex>> rows;
  for (const auto& [alpha, c] : p.terms()) rows.emplace_back(exponent_to_tuple(alpha), c);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out = "m " + std::to_string(p.order()) + "\n";
  for (const auto& [t, c] : rows) {
    append_double(out, c.real());
    out += ' ';
    append_double(out, c.imag());
    for (VarIndex v : t.entries()) out += ' ' + std::to_string(v);
    out += '\n';
  }
  return out;
}

}  // namespace bhlab
