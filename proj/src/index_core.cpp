#include "bhlab/index_core.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace bhlab {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error(what);
  return out;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error(what);
  return out;
}

void require_positive(std::uint64_t value, const char* name) {
  if (value == 0) throw std::invalid_argument(std::string(name) + " must be >= 1");
}

}  // namespace

MultiIndex::MultiIndex(std::vector<VarIndex> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("multi-index must have at least one slot");
  for (VarIndex v : entries_) {
    if (v == 0) throw std::invalid_argument("variable indices start at 1");
  }
}

ExponentVector::ExponentVector(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& [var, exp] = entries_[i];
    if (var == 0) throw std::invalid_argument("variable indices start at 1");
    if (exp == 0) throw std::invalid_argument("zero exponents are not stored");
    if (i > 0 && entries_[i - 1].first == var) {
      throw std::invalid_argument("variable " + std::to_string(var) + " listed twice");
    }
    degree_ += exp;
  }
  if (degree_ == 0) throw std::invalid_argument("exponent vector must have positive degree");
}

unsigned ExponentVector::exponent(VarIndex var) const noexcept {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), Entry{var, 0});
  return (it != entries_.end() && it->first == var) ? it->second : 0;
}

MultiIndex canonicalize(const MultiIndex& t) {
  std::vector<VarIndex> sorted(t.entries().begin(), t.entries().end());
  std::sort(sorted.begin(), sorted.end());
  return MultiIndex(std::move(sorted));
}

ExponentVector tuple_to_exponent(const MultiIndex& t) {
  std::vector<VarIndex> sorted(t.entries().begin(), t.entries().end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<ExponentVector::Entry> entries;
  for (VarIndex v : sorted) {
    if (!entries.empty() && entries.back().first == v) {
      ++entries.back().second;
    } else {
      entries.emplace_back(v, 1U);
    }
  }
  return ExponentVector(std::move(entries));
}

MultiIndex exponent_to_tuple(const ExponentVector& a) {
  std::vector<VarIndex> entries;
  entries.reserve(a.degree());
  for (const auto& [var, exp] : a.entries()) entries.insert(entries.end(), exp, var);
  return MultiIndex(std::move(entries));
}

std::size_t weight(const ExponentVector& a) noexcept { return a.entries().size(); }

IndexSet::IndexSet(unsigned m, std::vector<MultiIndex> tuples, std::string label)
    : m_(m), tuples_(std::move(tuples)), label_(std::move(label)) {
  require_positive(m_, "m");
  std::sort(tuples_.begin(), tuples_.end());
  for (std::size_t i = 0; i < tuples_.size(); ++i) {
    const MultiIndex& t = tuples_[i];
    if (t.order() != m_) {
      throw std::invalid_argument("tuple of length " + std::to_string(t.order()) +
                                  " in an index set with m = " + std::to_string(m_));
    }
    auto [it, inserted] = by_monomial_.emplace(tuple_to_exponent(t), i);
    if (!inserted) {
      std::ostringstream msg;
      msg << "duplicate monomial: tuples (";
      for (std::size_t s = 0; s < m_; ++s) msg << (s ? "," : "") << tuples_[it->second][s];
      msg << ") and (";
      for (std::size_t s = 0; s < m_; ++s) msg << (s ? "," : "") << t[s];
      msg << ") have the same multiset";
      throw DuplicateMonomial(msg.str());
    }
  }
}

std::vector<std::vector<VarIndex>> IndexSet::slot_supports() const {
  std::vector<std::vector<VarIndex>> supports(m_);
  for (const auto& t : tuples_) {
    for (std::size_t s = 0; s < m_; ++s) supports[s].push_back(t[s]);
  }
  for (auto& s : supports) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return supports;
}

const MultiIndex* IndexSet::representative(const ExponentVector& monomial) const {
  auto it = by_monomial_.find(monomial);
  return it == by_monomial_.end() ? nullptr : &tuples_[it->second];
}

std::vector<ExponentVector> IndexSet::monomials() const {
  std::vector<ExponentVector> out;
  out.reserve(by_monomial_.size());
  for (const auto& [alpha, idx] : by_monomial_) out.push_back(alpha);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void enumerate_nondecreasing(unsigned m, VarIndex N, std::vector<VarIndex>& prefix,
                             std::vector<MultiIndex>& out, unsigned max_weight) {
  if (prefix.size() == m) {
    out.emplace_back(prefix);
    return;
  }
  const VarIndex start = prefix.empty() ? 1 : prefix.back();
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (i == 0 || prefix[i] != prefix[i - 1]) ++distinct;
  }
  for (VarIndex v = start; v <= N; ++v) {
    const bool is_new = prefix.empty() || v != prefix.back();
    if (is_new && distinct + 1 > max_weight) break;
    prefix.push_back(v);
    enumerate_nondecreasing(m, N, prefix, out, max_weight);
    prefix.pop_back();
  }
}

}  // namespace

IndexSet gen_full(unsigned m, VarIndex N) {
  return gen_delta_M(m, m, N);
}

IndexSet gen_delta_M(unsigned m, unsigned M, VarIndex N) {
  require_positive(m, "m");
  require_positive(N, "N");
  if (M < 1 || M > m) throw std::invalid_argument("M must satisfy 1 <= M <= m");
  std::vector<MultiIndex> tuples;
  std::vector<VarIndex> prefix;
  enumerate_nondecreasing(m, N, prefix, tuples, M);
  std::string label = M == m ? "full(m=" + std::to_string(m) + ",N=" + std::to_string(N) + ")"
                             : "deltaM(m=" + std::to_string(m) + ",M=" + std::to_string(M) +
                                   ",N=" + std::to_string(N) + ")";
  return IndexSet(m, std::move(tuples), std::move(label));
}

std::uint64_t nth_prime(unsigned j) {
  require_positive(j, "prime index");
  unsigned found = 0;
  for (std::uint64_t candidate = 2;; ++candidate) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= candidate; ++d) {
      if (candidate % d == 0) {
        prime = false;
        break;
      }
    }
    if (prime && ++found == j) return candidate;
  }
}

IndexSet gen_prime_diagonal(unsigned m, std::uint64_t T) {
  require_positive(m, "m");
  require_positive(T, "T");
  std::vector<std::uint64_t> primes(m);
  for (unsigned j = 0; j < m; ++j) primes[j] = nth_prime(j + 1);
  std::vector<std::uint64_t> powers(primes);
  std::vector<MultiIndex> tuples;
  tuples.reserve(T);
  for (std::uint64_t i = 1; i <= T; ++i) {
    if (i > 1) {
      for (unsigned j = 0; j < m; ++j) {
        std::uint64_t next = 0;
        if (__builtin_mul_overflow(powers[j], primes[j], &next)) {
          throw std::overflow_error("prime-diagonal index p_" + std::to_string(j + 1) + "^" +
                                    std::to_string(i) + " (j=" + std::to_string(j + 1) +
                                    ", i=" + std::to_string(i) + ") exceeds 64 bits");
        }
        powers[j] = next;
      }
    }
    tuples.emplace_back(powers);
  }
  return IndexSet(m, std::move(tuples),
                  "prime-diagonal(m=" + std::to_string(m) + ",T=" + std::to_string(T) + ")");
}

IndexSet gen_arith_diagonal(unsigned m, std::uint64_t T) {
  require_positive(m, "m");
  require_positive(T, "T");
  checked_mul(T, m, "arith-diagonal index exceeds 64 bits");
  std::vector<MultiIndex> tuples;
  tuples.reserve(T);
  for (std::uint64_t i = 1; i <= T; ++i) {
    std::vector<VarIndex> entries(m);
    for (unsigned j = 1; j <= m; ++j) entries[j - 1] = (i - 1) * m + j;
    tuples.emplace_back(std::move(entries));
  }
  return IndexSet(m, std::move(tuples),
                  "arith-diagonal(m=" + std::to_string(m) + ",T=" + std::to_string(T) + ")");
}

std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b) {
  constexpr const char* msg = "Cantor pairing overflows 64 bits";
  const std::uint64_t s = checked_add(a, b, msg);
  const std::uint64_t s1 = checked_add(s, 1, msg);
  // One of s, s+1 is even; halve it before multiplying.
  const std::uint64_t tri = (s % 2 == 0) ? checked_mul(s / 2, s1, msg) : checked_mul(s, s1 / 2, msg);
  return checked_add(tri, b, msg);
}

IndexSet gen_triangle(std::uint64_t R) {
  require_positive(R, "R");
  constexpr const char* msg = "triangle index exceeds 64 bits";
  auto slot_label = [&](unsigned t, std::uint64_t a, std::uint64_t b) {
    return checked_add(checked_mul(3, cantor_pair(a, b), msg), t - 1, msg);
  };
  const std::uint64_t count = checked_mul(checked_mul(R, R, msg), R, msg);
  std::vector<MultiIndex> tuples;
  tuples.reserve(count);
  for (std::uint64_t i = 1; i <= R; ++i) {
    for (std::uint64_t j = 1; j <= R; ++j) {
      for (std::uint64_t k = 1; k <= R; ++k) {
        tuples.push_back(MultiIndex{slot_label(1, i, j), slot_label(2, j, k), slot_label(3, k, i)});
      }
    }
  }
  return IndexSet(3, std::move(tuples), "triangle(R=" + std::to_string(R) + ")");
}

// ---------------------------------------------------------------------------
// .idx format

namespace {

constexpr std::string_view kLabelPrefix = "label:";

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

std::uint64_t parse_positive(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected a positive integer, got '" + std::string(token) + "'");
  }
  if (value == 0) throw ParseError(line, "indices must be positive, got 0");
  return value;
}

}  // namespace

IndexSet parse_index_set(std::string_view text) {
  unsigned m = 0;
  std::string label;
  std::vector<MultiIndex> tuples;
  std::map<ExponentVector, std::size_t> seen;  // monomial -> line
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      const auto comment = trim(line.substr(hash + 1));
      if (comment.starts_with(kLabelPrefix)) label = std::string(trim(comment.substr(kLabelPrefix.size())));
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto tokens = split_ws(line);
    if (m == 0) {
      if (tokens.size() != 2 || tokens[0] != "m") throw ParseError(line_no, "expected header 'm <int>'");
      const auto value = parse_positive(tokens[1], line_no);
      if (value > 64) throw ParseError(line_no, "m = " + std::to_string(value) + " is too large");
      m = static_cast<unsigned>(value);
      continue;
    }
    if (tokens.size() != m) {
      throw ParseError(line_no, "arity mismatch: expected " + std::to_string(m) + " indices, got " +
                                    std::to_string(tokens.size()));
    }
    std::vector<VarIndex> entries;
    entries.reserve(m);
    for (auto tok : tokens) entries.push_back(parse_positive(tok, line_no));
    MultiIndex t(std::move(entries));
    auto [it, inserted] = seen.emplace(tuple_to_exponent(t), line_no);
    if (!inserted) {
      throw ParseError(line_no, "duplicate monomial (same multiset as line " +
                                    std::to_string(it->second) + ")");
    }
    tuples.push_back(std::move(t));
  }
  if (m == 0) throw ParseError(std::max<std::size_t>(line_no, 1), "missing header 'm <int>'");
  return IndexSet(m, std::move(tuples), std::move(label));
}

std::string serialize_index_set(const IndexSet& set) {
  std::ostringstream out;
  if (!set.label().empty()) out << "# " << kLabelPrefix << ' ' << set.label() << '\n';
  out << "m " << set.order() << '\n';
  for (const auto& t : set.tuples()) {
    for (std::size_t s = 0; s < t.order(); ++s) out << (s ? " " : "") << t[s];
    out << '\n';
  }
  return out.str();
}

}  // namespace bhlab
