#include <doctest.h>

#include "bhlab/index_core.hpp"
#include "oracles.hpp"

using namespace bhlab;

TEST_CASE("canonicalize sorts entries") {
  CHECK(canonicalize(MultiIndex{5, 2, 2}) == MultiIndex{2, 2, 5});
  CHECK(canonicalize(MultiIndex{1, 1, 1}) == MultiIndex{1, 1, 1});
  CHECK(canonicalize(MultiIndex{12, 14, 13}) == MultiIndex{12, 13, 14});
}

TEST_CASE("multi-index validation") {
  CHECK_THROWS_AS(MultiIndex(std::vector<VarIndex>{}), std::invalid_argument);
  CHECK_THROWS_AS((MultiIndex{1, 0}), std::invalid_argument);
}

TEST_CASE("tuple <-> exponent vector") {
  const auto a = tuple_to_exponent(MultiIndex{2, 2, 5});
  CHECK(a == ExponentVector({{2, 2}, {5, 1}}));
  CHECK(a.degree() == 3);
  CHECK(tuple_to_exponent(MultiIndex{7, 7, 7}) == ExponentVector({{7, 3}}));
  CHECK(tuple_to_exponent(MultiIndex{1, 2}) == ExponentVector({{1, 1}, {2, 1}}));

  CHECK(exponent_to_tuple(ExponentVector({{2, 2}, {5, 1}})) == MultiIndex{2, 2, 5});
  CHECK(exponent_to_tuple(ExponentVector({{7, 3}})) == MultiIndex{7, 7, 7});
  CHECK(exponent_to_tuple(ExponentVector({{9, 1}, {1, 1}, {3, 1}})) == MultiIndex{1, 3, 9});

  CHECK(weight(ExponentVector({{2, 2}, {5, 1}})) == 2);
  CHECK(weight(ExponentVector({{7, 3}})) == 1);
  CHECK(weight(ExponentVector({{1, 1}, {2, 1}, {3, 1}})) == 3);

  CHECK_THROWS_AS(ExponentVector({{1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(ExponentVector({{1, 1}, {1, 2}}), std::invalid_argument);
}

TEST_CASE("tuple properties on random tuples") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 1 + uniform_below(rng, 6);
    std::vector<VarIndex> entries(m);
    for (auto& e : entries) e = 1 + uniform_below(rng, 5);
    const MultiIndex t(entries);
    const auto c = canonicalize(t);
    CHECK(canonicalize(c) == c);
    CHECK(tuple_to_exponent(t) == tuple_to_exponent(c));
    CHECK(exponent_to_tuple(tuple_to_exponent(t)) == c);
    const auto a = tuple_to_exponent(t);
    CHECK(a.degree() == m);
    std::sort(entries.begin(), entries.end());
    CHECK(weight(a) == static_cast<std::size_t>(std::unique(entries.begin(), entries.end()) - entries.begin()));
  }
}

TEST_CASE("gen_full") {
  const auto s = gen_full(2, 2);
  CHECK(s.size() == 3);
  CHECK(s.tuples()[0] == MultiIndex{1, 1});
  CHECK(s.tuples()[1] == MultiIndex{1, 2});
  CHECK(s.tuples()[2] == MultiIndex{2, 2});
  CHECK(gen_full(1, 4).size() == 4);
  CHECK(gen_full(3, 2).size() == 4);
  // binomial(N+m-1, m)
  CHECK(gen_full(3, 5).size() == 35);
  CHECK(gen_full(4, 4).size() == 35);
}

TEST_CASE("gen_delta_M") {
  const auto s = gen_delta_M(3, 1, 2);
  REQUIRE(s.size() == 2);
  CHECK(s.tuples()[0] == MultiIndex{1, 1, 1});
  CHECK(s.tuples()[1] == MultiIndex{2, 2, 2});
  CHECK(gen_delta_M(2, 2, 2).tuples().size() == gen_full(2, 2).size());
  CHECK(gen_delta_M(3, 3, 4).tuples().size() == gen_full(3, 4).size());
  const auto d334 = gen_delta_M(3, 3, 4);
  const auto f34 = gen_full(3, 4);
  CHECK(std::equal(d334.tuples().begin(), d334.tuples().end(), f34.tuples().begin()));

  // Oracle: all binomial(5,3) = 10 canonical tuples over 3 variables, minus
  // the single one of weight 3.
  const auto full = gen_full(3, 3);
  std::size_t expected = 0;
  for (const auto& t : full.tuples()) expected += weight(tuple_to_exponent(t)) <= 2;
  CHECK(expected == 9);
  const auto d = gen_delta_M(3, 2, 3);
  CHECK(d.size() == 9);
  const auto d425 = gen_delta_M(4, 2, 5);
  for (const auto& t : d425.tuples()) CHECK(weight(tuple_to_exponent(t)) <= 2);
  CHECK_THROWS_AS(gen_delta_M(3, 4, 2), std::invalid_argument);
}

TEST_CASE("gen_prime_diagonal") {
  const auto s = gen_prime_diagonal(2, 3);
  REQUIRE(s.size() == 3);
  CHECK(s.tuples()[0] == MultiIndex{2, 3});
  CHECK(s.tuples()[1] == MultiIndex{4, 9});
  CHECK(s.tuples()[2] == MultiIndex{8, 27});
  CHECK(gen_prime_diagonal(3, 1).tuples()[0] == MultiIndex{2, 3, 5});

  // 3^40 < 2^64 <= 3^41: the first failing T for m = 2 is 41.
  CHECK(gen_prime_diagonal(2, 40).tuples().back()[1] == 12157665459056928801ULL);
  try {
    gen_prime_diagonal(2, 41);
    FAIL("expected overflow");
  } catch (const std::overflow_error& e) {
    CHECK(std::string(e.what()).find("j=2, i=41") != std::string::npos);
  }
  CHECK(nth_prime(1) == 2);
  CHECK(nth_prime(10) == 29);
}

TEST_CASE("gen_arith_diagonal") {
  const auto s = gen_arith_diagonal(3, 2);
  REQUIRE(s.size() == 2);
  CHECK(s.tuples()[0] == MultiIndex{1, 2, 3});
  CHECK(s.tuples()[1] == MultiIndex{4, 5, 6});
  CHECK(gen_arith_diagonal(1, 3).size() == 3);
  const auto big = gen_arith_diagonal(2, 100);
  CHECK(big.size() == 100);
  CHECK(big.tuples().back()[1] == 200);
}

TEST_CASE("diagonal families have disjoint entry sets") {
  for (const auto& s : {gen_prime_diagonal(3, 8), gen_arith_diagonal(4, 10)}) {
    std::vector<VarIndex> all;
    for (const auto& t : s.tuples()) all.insert(all.end(), t.entries().begin(), t.entries().end());
    std::sort(all.begin(), all.end());
    CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  }
}

TEST_CASE("gen_triangle") {
  // cantor(1,1) = 4, so the labels are 12, 13, 14.
  CHECK(cantor_pair(1, 1) == 4);
  const auto one = gen_triangle(1);
  REQUIRE(one.size() == 1);
  CHECK(one.tuples()[0] == MultiIndex{12, 13, 14});
  CHECK(gen_triangle(2).size() == 8);
  CHECK(gen_triangle(3).size() == 27);
  const auto tri3 = gen_triangle(3);
  for (const auto& t : tri3.tuples()) {
    CHECK(t[0] % 3 == 0);
    CHECK(t[1] % 3 == 1);
    CHECK(t[2] % 3 == 2);
  }
  CHECK_THROWS_AS(cantor_pair(UINT64_MAX / 2, UINT64_MAX / 2), std::overflow_error);
}

TEST_CASE("index set rejects duplicate monomials and bad arity") {
  CHECK_THROWS_AS(IndexSet(2, {MultiIndex{1, 2}, MultiIndex{2, 1}}), DuplicateMonomial);
  CHECK_THROWS_AS(IndexSet(3, {MultiIndex{1, 2}}), std::invalid_argument);
  const IndexSet s(2, {MultiIndex{2, 1}, MultiIndex{1, 1}});
  CHECK(s.representative(ExponentVector({{1, 1}, {2, 1}})) != nullptr);
  CHECK(*s.representative(ExponentVector({{1, 1}, {2, 1}})) == MultiIndex{2, 1});
  CHECK(s.representative(ExponentVector({{2, 2}})) == nullptr);
  const auto supports = s.slot_supports();
  CHECK(supports[0] == std::vector<VarIndex>{1, 2});
  CHECK(supports[1] == std::vector<VarIndex>{1});
}

TEST_CASE("parse .idx") {
  const auto s = parse_index_set("m 2\n2 3\n4 9\n");
  CHECK(s.order() == 2);
  CHECK(s.size() == 2);
  CHECK(s.tuples()[0] == MultiIndex{2, 3});
  CHECK(s.tuples()[1] == MultiIndex{4, 9});

  const auto commented = parse_index_set("# a comment\n\nm 3   # header\n 1 2 3\n\n# done\n");
  CHECK(commented.size() == 1);

  auto error_line = [](const char* text) -> std::size_t {
    try {
      parse_index_set(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(error_line("m 2\n1 2\n2 1\n") == 3);   // duplicate monomial
  CHECK(error_line("m 3\n1 2\n") == 2);        // arity
  CHECK(error_line("m 2\n1 0\n") == 2);        // zero index
  CHECK(error_line("m 2\n1 -4\n") == 2);       // negative index
  CHECK(error_line("m 2\n1 x\n") == 2);        // malformed
  CHECK(error_line("2 3\n") == 1);             // missing header
  CHECK(error_line("# nothing\n") == 1);
  try {
    parse_index_set("m 2\n1 2\n2 1\n");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("duplicate monomial") != std::string::npos);
  }
}

TEST_CASE("serialize/parse round trip") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = oracle::random_index_set(rng, 1 + static_cast<unsigned>(uniform_below(rng, 4)), 20, 9);
    CHECK(parse_index_set(serialize_index_set(s)) == s);
  }
  const auto tri = gen_triangle(3);
  CHECK(parse_index_set(serialize_index_set(tri)) == tri);
  CHECK(serialize_index_set(IndexSet(2, {MultiIndex{4, 9}, MultiIndex{2, 3}})) == "m 2\n2 3\n4 9\n");
}
