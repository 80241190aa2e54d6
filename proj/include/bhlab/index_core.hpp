#pragma once

// Multi-indices, exponent vectors and monomial index sets.
//
// A MultiIndex keeps its slot order: the combinatorial dimension of a set
// depends on which slot a variable occupies, while monomial identity only
// depends on the multiset of entries (see canonicalize / tuple_to_exponent).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bhlab {

using VarIndex = std::uint64_t;

/// Input text did not follow the expected file format.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Ordered m-tuple of positive variable indices.
class MultiIndex {
 public:
  explicit MultiIndex(std::vector<VarIndex> entries);
  MultiIndex(std::initializer_list<VarIndex> entries)
      : MultiIndex(std::vector<VarIndex>(entries)) {}

  std::size_t order() const noexcept { return entries_.size(); }
  std::span<const VarIndex> entries() const noexcept { return entries_; }
  VarIndex operator[](std::size_t slot) const { return entries_[slot]; }

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<VarIndex> entries_;
};

/// Sparse multi-exponent: (variable, exponent) pairs sorted by variable,
/// exponents strictly positive.
class ExponentVector {
 public:
  using Entry = std::pair<VarIndex, unsigned>;

  explicit ExponentVector(std::vector<Entry> entries);

  unsigned degree() const noexcept { return degree_; }
  std::span<const Entry> entries() const noexcept { return entries_; }
  unsigned exponent(VarIndex var) const noexcept;

  auto operator<=>(const ExponentVector& other) const { return entries_ <=> other.entries_; }
  bool operator==(const ExponentVector& other) const { return entries_ == other.entries_; }

 private:
  std::vector<Entry> entries_;
  unsigned degree_ = 0;
};

MultiIndex canonicalize(const MultiIndex& t);
ExponentVector tuple_to_exponent(const MultiIndex& t);
MultiIndex exponent_to_tuple(const ExponentVector& a);

/// Number of distinct variables in the monomial.
std::size_t weight(const ExponentVector& a) noexcept;

/// Raised when two tuples of an index set describe the same monomial.
class DuplicateMonomial : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite set of m-tuples, at most one representative per monomial.
/// Tuples are kept in lexicographic order of their raw entries.
class IndexSet {
 public:
  IndexSet(unsigned m, std::vector<MultiIndex> tuples, std::string label = {});

  unsigned order() const noexcept { return m_; }
  std::size_t size() const noexcept { return tuples_.size(); }
  bool empty() const noexcept { return tuples_.empty(); }
  std::span<const MultiIndex> tuples() const noexcept { return tuples_; }
  const std::string& label() const noexcept { return label_; }

  /// Sorted distinct values taken by each slot.
  std::vector<std::vector<VarIndex>> slot_supports() const;

  /// The stored tuple whose multiset equals the monomial, or nullptr.
  const MultiIndex* representative(const ExponentVector& monomial) const;

  /// Exponent vectors of all tuples (the set Gamma), in canonical order.
  std::vector<ExponentVector> monomials() const;

  bool operator==(const IndexSet& other) const {
    return m_ == other.m_ && tuples_ == other.tuples_ && label_ == other.label_;
  }

 private:
  unsigned m_;
  std::vector<MultiIndex> tuples_;
  std::string label_;
  std::map<ExponentVector, std::size_t> by_monomial_;
};

// Generators.

/// All canonical tuples over [1..N]; binomial(N+m-1, m) of them.
IndexSet gen_full(unsigned m, VarIndex N);

/// Canonical tuples over [1..N] with at most M distinct variables.
IndexSet gen_delta_M(unsigned m, unsigned M, VarIndex N);

/// Tuples (p_1^i, ..., p_m^i), i = 1..T, with p_j the j-th prime.
/// Throws std::overflow_error naming (j, i) if some power exceeds 64 bits.
IndexSet gen_prime_diagonal(unsigned m, std::uint64_t T);

/// Tuples ((i-1)m+1, ..., (i-1)m+m), i = 1..T.
IndexSet gen_arith_diagonal(unsigned m, std::uint64_t T);

/// Triangle family, m = 3: (s1(i,j), s2(j,k), s3(k,i)) for i,j,k in [1..R]
/// with s_t(a,b) = 3*cantor(a,b) + (t-1).
IndexSet gen_triangle(std::uint64_t R);

/// Cantor pairing (a+b)(a+b+1)/2 + b with overflow checking.
std::uint64_t cantor_pair(std::uint64_t a, std::uint64_t b);

/// j-th prime, 1-based.
std::uint64_t nth_prime(unsigned j);

// .idx text format.
IndexSet parse_index_set(std::string_view text);
std::string serialize_index_set(const IndexSet& set);

}  // namespace bhlab
