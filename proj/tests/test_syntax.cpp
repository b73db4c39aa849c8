#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "bi/rewriting.hpp"
#include "bi/syntax.hpp"

using namespace bi;

namespace {

Bunch b(const std::string& s) { return parse_bunch(s); }
Formula f(const std::string& s) { return parse_formula(s); }

}  // namespace

TEST_CASE("parsing basics") {
  Sequent s = parse_sequent("p |- p");
  CHECK(s.context == Bunch::leaf(Formula::atom("p")));
  CHECK(s.goal == Formula::atom("p"));

  // the Example 1 bunch: (p , (q ; o+)) ; (r ; (ox ; r)) flattens at the root
  Bunch ex1 = b("(p , (q ; o+)) ; (r ; (ox ; r))");
  REQUIRE(ex1.kind() == BunchKind::Add);
  CHECK(ex1.arity() == 4);
  CHECK(ex1.children()[0].kind() == BunchKind::Mul);

  Bunch chain = b("p ; q ; r");
  REQUIRE(chain.kind() == BunchKind::Add);
  CHECK(chain.arity() == 3);

  CHECK_THROWS_AS(b("p ; q , r"), ParseError);
  CHECK_THROWS_AS(f("p -> "), ParseError);
  CHECK_THROWS_AS(parse_sequent("p |- q |- r"), ParseError);
}

TEST_CASE("precedence and associativity") {
  CHECK(f("p /\\ q * r") == Formula::conj(Formula::atom("p"),
                                          Formula::star(Formula::atom("q"), Formula::atom("r"))));
  CHECK(f("p -> q -> r") ==
        Formula::imp(Formula::atom("p"), Formula::imp(Formula::atom("q"), Formula::atom("r"))));
  CHECK(f("p \\/ q -> r") ==
        Formula::imp(Formula::disj(Formula::atom("p"), Formula::atom("q")), Formula::atom("r")));
  CHECK(f("(p -> q) -> r") !=
        Formula::imp(Formula::atom("p"), Formula::imp(Formula::atom("q"), Formula::atom("r"))));
  // formula leaves in bunches bind before the formers
  Bunch g = b("p -> q ; r");
  REQUIRE(g.kind() == BunchKind::Add);
  CHECK(g.children()[0].formula() == f("p -> q"));
  // parenthesized formulas still work as leaves
  CHECK(b("(p -> q) ; r") == g);
  CHECK(b("((p -> q) -> r) ; s").children()[0].formula() == f("(p -> q) -> r"));
}

TEST_CASE("render round-trips") {
  CHECK(render(Bunch::leaf(Formula::atom("p"))) == "p");
  CHECK(render(b("p ; (q , r)")) == "p ; (q , r)");
  CHECK(render(Bunch::unit_times()) == "ox");

  std::vector<std::string> cases = {
      "p",
      "p ; q ; r",
      "(p , (q ; o+)) ; (r ; (ox ; r))",
      "p -> q \\/ r",
      "(p -* top) -> q |- p -* top",
      "(p /\\ q) * (p -> (q -* r)) |- top * I",
      "o+ ; (ox , bot)",
  };
  for (const std::string& text : cases) {
    CAPTURE(text);
    if (text.find("|-") != std::string::npos) {
      Sequent s = parse_sequent(text);
      CHECK(parse_sequent(render(s)) == s);
    } else {
      Bunch g = b(text);
      CHECK(parse_bunch(render(g)) == g);
      CHECK(render(parse_bunch(render(g))) == render(g));
    }
  }
}

TEST_CASE("subbunches and groups") {
  CHECK(subbunches(b("p")).size() == 1);
  auto subs = subbunches(b("p ; q"));
  REQUIRE(subs.size() == 3);
  CHECK(subs[0].first.empty());
  CHECK(subs[1].second == Bunch::leaf(Formula::atom("p")));

  // Example 1 bunch contains the occurrence (q ; o+) as a node
  Bunch ex1 = b("(p , (q ; o+)) ; (r ; (ox ; r))");
  bool found = false;
  for (auto& [path, sub] : subs = subbunches(ex1)) {
    (void)path;
    if (sub == b("q ; o+")) found = true;
  }
  CHECK(found);

  // groups: p;q;r has sub-multisets {p,q} {p,r} {q,r} {p,q,r}
  auto groups = subbunch_groups(b("p ; q ; r"));
  CHECK(groups.size() == 4);
}

TEST_CASE("replace") {
  CHECK(replace(b("p ; q"), Loc{{1}, {}}, b("r")) == b("p ; r"));
  CHECK(replace(b("p ; q"), Loc{{1}, {}}, b("r ; s")) == b("p ; r ; s"));

  // unit clause of reduction applied by hand on the Example 1 bunch
  Bunch ex1 = b("(p , (q ; o+)) ; (r ; (ox ; r))");
  Path qo;
  for (auto& [path, sub] : subbunches(ex1))
    if (sub == b("q ; o+")) qo = path;
  Bunch replaced = replace(ex1, Loc{qo, {}}, b("q"));
  CHECK(permutes(replaced, b("(p , q) ; (r ; (ox ; r))")));

  // round-trip: replacing an occurrence by itself is the identity
  for (auto& [path, sub] : subbunches(ex1))
    CHECK(replace(ex1, Loc{path, {}}, sub) == ex1);
}

TEST_CASE("permutation and coherent equivalence") {
  CHECK(permutes(b("p ; q"), b("q ; p")));
  CHECK_FALSE(permutes(b("p ; q"), b("p ; o+ ; q")));
  CHECK(permutes(b("p , (q ; r)"), b("(r ; q) , p")));

  CHECK(coherent_equal(b("p ; o+"), b("p")));
  CHECK_FALSE(coherent_equal(b("p , o+"), b("p")));
  CHECK(coherent_equal(b("p , ox"), b("p")));

  CHECK(canonicalize(b("q ; p")) == canonicalize(b("p ; q")));
}

namespace {

// brute-force ~= decided by recursive multiset matching, independent of
// canonicalize
bool brute_permutes(const Bunch& a, const Bunch& b) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == BunchKind::Leaf) return a.formula() == b.formula();
  if (a.is_basic()) return true;
  if (a.arity() != b.arity()) return false;
  std::vector<bool> used(b.arity(), false);
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == a.arity()) return true;
    for (std::size_t j = 0; j < b.arity(); ++j) {
      if (used[j]) continue;
      if (brute_permutes(a.children()[i], b.children()[j])) {
        used[j] = true;
        if (self(self, i + 1)) return true;
        used[j] = false;
      }
    }
    return false;
  };
  return rec(rec, 0);
}

}  // namespace

TEST_CASE("canonicalize agrees with brute-force permutation on small bunches") {
  std::vector<Bunch> universe = enumerate_bunches({"p", "q"}, 4);
  // enumerate_bunches yields canonical forms; shuffle each into variants
  CHECK(universe.size() > 100);
  for (const Bunch& g : universe) {
    CHECK(canonicalize(canonicalize(g)) == canonicalize(g));
    CHECK(permutes(g, canonicalize(g)));
  }
  // cross-check pairs (sampled by stride to keep the square tractable)
  std::size_t stride = std::max<std::size_t>(1, universe.size() / 120);
  for (std::size_t i = 0; i < universe.size(); i += stride) {
    for (std::size_t j = 0; j < universe.size(); j += stride) {
      bool fast = permutes(universe[i], universe[j]);
      bool slow = brute_permutes(universe[i], universe[j]);
      CAPTURE(render(universe[i]));
      CAPTURE(render(universe[j]));
      CHECK(fast == slow);
    }
  }
}

TEST_CASE("coherent equivalence contains permutation and respects unit laws") {
  std::vector<Bunch> universe = enumerate_bunches({"p"}, 3);
  for (const Bunch& g : universe) {
    CHECK(coherent_equal(g, g));
    CHECK(coherent_equal(g, canonicalize(g)));
    // adding a removable unit anywhere stays coherent-equal
    CHECK(coherent_equal(Bunch::add({g, Bunch::unit_plus()}), g));
    CHECK(coherent_equal(Bunch::mul({g, Bunch::unit_times()}), g));
    CHECK_FALSE(coherent_equal(Bunch::mul({g, Bunch::leaf(Formula::atom("z"))}), g));
  }
}
