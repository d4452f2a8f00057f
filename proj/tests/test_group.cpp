#include <doctest.h>

#include <algorithm>
#include <deque>
#include <set>
#include <vector>

#include "parfell/error.hpp"
#include "parfell/group.hpp"

using namespace parfell;

namespace {

// Stack-based free reduction, kept separate from the library version.
std::vector<Letter> stack_reduce(const std::vector<Letter>& w) {
  std::vector<Letter> out;
  for (Letter l : w) {
    if (!out.empty() && out.back() == -l) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

// Breadth-first search over generators, returning the set of reduced words.
std::set<std::vector<Letter>> bfs_ball(int rank, std::size_t radius) {
  std::set<std::vector<Letter>> seen{{}};
  std::deque<std::vector<Letter>> frontier{{}};
  while (!frontier.empty()) {
    auto w = frontier.front();
    frontier.pop_front();
    if (w.size() == radius) continue;
    for (int k = 1; k <= rank; ++k) {
      for (Letter l : {k, -k}) {
        auto next = w;
        next.push_back(l);
        next = stack_reduce(next);
        if (seen.insert(next).second) frontier.push_back(next);
      }
    }
  }
  return seen;
}

}  // namespace

TEST_CASE("reduce_word examples") {
  CHECK(reduce_word(2, {}).word().empty());
  std::vector<Letter> cancel{1, -1};
  CHECK(reduce_word(2, cancel).word().empty());
  std::vector<Letter> w{1, 2, -2, 1};
  CHECK(reduce_word(2, w).word() == std::vector<Letter>{1, 1});
}

TEST_CASE("reduce_word agrees with a stack oracle on random words") {
  unsigned state = 12345;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Letter> w;
    std::size_t len = trial % 12;
    for (std::size_t i = 0; i < len; ++i) {
      state = state * 1103515245U + 12345U;
      int k = static_cast<int>((state >> 16) % 3) + 1;
      w.push_back(((state >> 20) & 1U) ? k : -k);
    }
    CHECK(reduce_word(3, w).word() == stack_reduce(w));
  }
}

TEST_CASE("multiply") {
  auto z4 = GroupSpec::cyclic(4);
  CHECK(multiply(z4, GroupElement::from_index(1), GroupElement::from_index(3)).index() == 0);

  auto f2 = GroupSpec::free(2);
  auto a = f2.parse("a");
  CHECK(multiply(f2, a, f2.parse("a^-1 b")) == f2.parse("b"));
  CHECK(multiply(f2, f2.identity(), a) == a);
  CHECK(multiply(z4, z4.identity(), GroupElement::from_index(2)).index() == 2);
}

TEST_CASE("ball enumeration order and sizes") {
  auto f1 = GroupSpec::free(1);
  std::vector<GroupElement> expect1;
  for (const char* s : {"e", "a", "a^-1", "a^2", "a^-2"}) expect1.push_back(f1.parse(s));
  CHECK(ball(f1, 2) == expect1);

  auto f2 = GroupSpec::free(2);
  std::vector<GroupElement> expect2;
  for (const char* s : {"e", "a", "a^-1", "b", "b^-1"}) expect2.push_back(f2.parse(s));
  CHECK(ball(f2, 1) == expect2);

  CHECK(ball(GroupSpec::cyclic(5), 0).size() == 1);
  CHECK(ball(f2, 0).size() == 1);

  for (int rank = 1; rank <= 3; ++rank) {
    for (std::size_t r = 0; r <= 4; ++r) {
      auto got = ball(GroupSpec::free(rank), r);
      auto oracle = bfs_ball(rank, r);
      CHECK(got.size() == oracle.size());
      CHECK(free_ball_size(rank, r) == oracle.size());
      std::set<std::vector<Letter>> words;
      for (const auto& g : got) words.insert(g.word());
      CHECK(words == oracle);
      CHECK(std::is_sorted(got.begin(), got.end()));
    }
  }
}

TEST_CASE("hom_apply") {
  auto f1 = GroupSpec::free(1);
  GroupHom phi(f1, GroupSpec::cyclic(4), {1});
  CHECK(hom_apply(phi, f1.parse("a^3")).index() == 3);
  CHECK(hom_apply(phi, f1.identity()).index() == 0);
  CHECK(phi.apply_index(f1.parse("a^-1")) == 3);

  auto s3 = GroupSpec::symmetric(3);
  auto find = [&](const std::string& label) {
    const auto& labels = s3.labels();
    auto it = std::find(labels.begin(), labels.end(), label);
    REQUIRE(it != labels.end());
    return static_cast<std::size_t>(it - labels.begin());
  };
  std::size_t t12 = find("(12)");
  std::size_t c123 = find("(123)");
  auto f2 = GroupSpec::free(2);
  GroupHom psi(f2, s3, {t12, c123});
  CHECK(psi.apply_index(f2.parse("a b")) == s3.table()[t12][c123]);
  // Table oracle for a longer word.
  std::size_t expect = 0;
  for (std::size_t x : {t12, c123, c123, s3.inverse_index(t12)}) expect = s3.table()[expect][x];
  CHECK(psi.apply_index(f2.parse("a b b a^-1")) == expect);
}

TEST_CASE("finite hom must preserve products") {
  auto z4 = GroupSpec::cyclic(4);
  auto z2 = GroupSpec::cyclic(2);
  CHECK_NOTHROW(GroupHom(z4, z2, {0, 1, 0, 1}));
  CHECK_THROWS_AS(GroupHom(z4, z2, {0, 1, 1, 0}), MalformedInput);
}

TEST_CASE("finite table validation") {
  CHECK_THROWS_AS(GroupSpec::finite({{0, 1}, {1, 1}}), MalformedInput);
  CHECK_THROWS_AS(GroupSpec::finite({{1, 0}, {0, 1}}), MalformedInput);
  auto s3 = GroupSpec::symmetric(3);
  CHECK(s3.order() == 6);
  for (std::size_t i = 0; i < 6; ++i) CHECK(s3.table()[i][s3.inverse_index(i)] == 0);
  auto prod = GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::cyclic(3));
  CHECK(prod.order() == 6);
}

TEST_CASE("parse and format round trip") {
  auto f2 = GroupSpec::free(2);
  for (const auto& g : ball(f2, 3)) CHECK(f2.parse(f2.format(g)) == g);
  CHECK_THROWS_AS(f2.parse("c"), MalformedInput);
  CHECK(parse_group_template("cyclic:4").order() == 4);
  CHECK(parse_group_template("free:2").rank() == 2);
  CHECK_THROWS_AS(parse_group_template("nonsense"), MalformedInput);
}
