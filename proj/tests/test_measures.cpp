#include "doctest.h"

#include <algorithm>
#include <map>

#include "bi/measures.hpp"
#include "bi/rewriting.hpp"
#include "bi/syntax.hpp"

using namespace bi;

namespace {

Bunch b(const std::string& s) { return parse_bunch(s); }

// the Figure 1 bunch with phi=p, chi=q, psi=r
const char* kFig1 = "(p , (q ; o+)) ; (r ; (r ; ox))";

std::vector<std::string> rendered_members(const Bunch& g, const AdditiveSetView& s) {
  std::vector<std::string> out;
  for (const Path& m : s.members) out.push_back(render(canonicalize(sub_at(g, m))));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("additive sets of the Figure 1 bunch") {
  Bunch g = b(kFig1);
  auto sets = additive_sets(g);
  REQUIRE(sets.size() == 3);

  std::vector<std::vector<std::string>> got;
  for (auto& s : sets) got.push_back(rendered_members(g, s));
  std::sort(got.begin(), got.end());

  std::vector<std::vector<std::string>> want = {
      {"p"},
      {"o+", "q"},
      {"ox", "p , (o+ ; q)", "r", "r"},
  };
  std::sort(want.begin(), want.end());
  CHECK(got == want);
}

TEST_CASE("additive sets, small cases") {
  auto one = additive_sets(b("p"));
  REQUIRE(one.size() == 1);
  CHECK(one[0].members.size() == 1);

  auto two = additive_sets(b("p , q"));
  // the root Mul is additive data too, each leaf sits alone in its slot
  REQUIRE(two.size() == 3);
  for (auto& s : two) CHECK(s.members.size() == 1);
}

TEST_CASE("duplicity") {
  Bunch g = b(kFig1);
  // r occurs twice in the big additive set
  Path r_path;
  for (auto& [p, sub] : subbunches(g))
    if (sub == Bunch::leaf(Formula::atom("r"))) { r_path = p; break; }
  CHECK(duplicity(g, r_path) == 1);

  CHECK(duplicity(b("p ; q"), {0}) == 0);
  CHECK(duplicity(b("p ; p ; p"), {0}) == 2);
  CHECK_THROWS(duplicity(b("p"), {3}));
}

TEST_CASE("multiplicity") {
  CHECK(multiplicity(b(kFig1)) == 1);
  CHECK(multiplicity(b("p")) == 0);
  CHECK(multiplicity(b("p , q")) == 0);
  CHECK(multiplicity(b("p ; p ; q ; q")) == 1);
  CHECK(multiplicity(b("(p ; p) , (q ; q)")) == 2);
  CHECK(multiplicity(b("o+ ; o+ ; o+")) == 2);
}

TEST_CASE("multiplicative width") {
  CHECK(mult_width(parse_formula("p * q")) == 1);
  CHECK(mult_width(parse_formula("p /\\ q")) == 0);
  CHECK(mult_width(parse_formula("(p * q) -* r")) == 2);
  CHECK(mult_width(parse_formula("(p * q) \\/ (r * s)")) == 1);
  CHECK(mult_width(b(kFig1)) == 1);
  CHECK(mult_width(b("p , q , r")) == 2);
  CHECK(mult_width(b("ox")) == 0);
}

TEST_CASE("topset") {
  Bunch g = b(kFig1);
  auto ts = topset(g);
  std::vector<std::string> got;
  for (const Bunch& t : ts) got.push_back(render(canonicalize(t)));
  std::sort(got.begin(), got.end());
  std::vector<std::string> want = {"ox", "p , (o+ ; q)", "r", "r"};
  std::sort(want.begin(), want.end());
  CHECK(got == want);
  // (r ; ox) is not a topset member: same former as the root
  CHECK(std::find(got.begin(), got.end(), std::string("ox ; r")) == got.end());

  auto ts2 = topset(b("p , (q ; r)"));
  CHECK(ts2.size() == 2);
  CHECK_THROWS(topset(b("p")));
}

TEST_CASE("depth") {
  CHECK(depth(b(kFig1)) == 1);
  CHECK(depth(Bunch::leaf(Formula::atom("p"))) == 0);
  CHECK(depth(b("p , (q ; (r , s))")) == 2);
  CHECK(depth(parse_formula("p -* top")) == 1);
}

TEST_CASE("sequent measures") {
  CHECK(mu(parse_sequent("p ; p |- q")) == 1);
  // Example 6: delta(A) = 2 and delta(B) = 1
  CHECK(delta(parse_sequent("(p -* top) -> q |- p -* top")) == 2);
  CHECK(delta(parse_sequent("((p -* top) -> q) ; ((p -* top) -> q) |- top")) == 1);
}

TEST_CASE("mu is zero exactly when no contraction redex exists") {
  for (const Bunch& g : enumerate_bunches({"p", "q"}, 4)) {
    bool has_contraction = false;
    for (auto& [step, red] : reducts(g, ReductionMode::Big)) {
      (void)red;
      if (step.kind == StepKind::Contract) has_contraction = true;
    }
    CAPTURE(render(g));
    CHECK((multiplicity(g) == 0) == !has_contraction);
  }
}

TEST_CASE("measures are permutation-invariant") {
  for (const Bunch& g : enumerate_bunches({"p", "q"}, 4)) {
    Bunch rev = g;
    if (g.is_complex()) {
      std::vector<Bunch> kids = g.children();
      std::reverse(kids.begin(), kids.end());
      rev = Bunch::make(g.kind(), kids);
    }
    CHECK(multiplicity(g) == multiplicity(rev));
    CHECK(mult_width(g) == mult_width(rev));
    CHECK(depth(g) == depth(rev));
    CHECK(multiplicity(g) == multiplicity(canonicalize(g)));
    CHECK(mult_width(g) == mult_width(canonicalize(g)));
    CHECK(depth(g) == depth(canonicalize(g)));
  }
}

namespace {

int brute_omega_formula(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Star:
    case FormulaKind::Wand:
      return brute_omega_formula(f.left()) + brute_omega_formula(f.right()) + 1;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imp:
      return std::max(brute_omega_formula(f.left()), brute_omega_formula(f.right()));
    default:
      return 0;
  }
}

// independent omega: any binary re-association of a k-child Mul chain has
// exactly k-1 commas; additive nodes take the widest child
int brute_omega(const Bunch& g) {
  switch (g.kind()) {
    case BunchKind::UnitPlus:
    case BunchKind::UnitTimes:
      return 0;
    case BunchKind::Leaf:
      return brute_omega_formula(g.formula());
    case BunchKind::Add: {
      int best = 0;
      for (const Bunch& c : g.children()) best = std::max(best, brute_omega(c));
      return best;
    }
    case BunchKind::Mul: {
      int total = static_cast<int>(g.arity()) - 1;
      for (const Bunch& c : g.children()) total += brute_omega(c);
      return total;
    }
  }
  return 0;
}

}  // namespace

TEST_CASE("omega equals the worst-additive-selection count of mult slots") {
  for (const Bunch& g : enumerate_bunches({"p", "q"}, 4))
    CHECK(mult_width(g) == brute_omega(g));
}

TEST_CASE("normal halves give mu at most 1") {
  std::vector<Bunch> universe = enumerate_bunches({"p", "q"}, 3);
  std::vector<Bunch> normals;
  for (const Bunch& g : universe)
    if (is_normal(g)) normals.push_back(g);
  for (const Bunch& a : normals) {
    for (const Bunch& c : normals) {
      CHECK(multiplicity(Bunch::add({a, c})) <= 1);
      CHECK(multiplicity(Bunch::mul({a, c})) <= 1);
    }
  }
}

TEST_CASE("substitution into a dup-free context adds at most one to mu") {
  std::vector<Bunch> hosts = enumerate_bunches({"p", "q"}, 3);
  std::vector<Bunch> fillers = enumerate_bunches({"p"}, 3);
  for (const Bunch& host : hosts) {
    if (multiplicity(host) != 0) continue;  // duplicit material only in the hole
    for (auto& [path, sub] : subbunches(host)) {
      (void)sub;
      for (const Bunch& fill : fillers) {
        Bunch result = replace(host, Loc{path, {}}, fill);
        CHECK(multiplicity(result) <= 1 + multiplicity(fill));
      }
    }
  }
}
