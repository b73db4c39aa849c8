#include "doctest.h"

#include <algorithm>
#include <set>

#include "bi/measures.hpp"
#include "bi/rewriting.hpp"
#include "bi/syntax.hpp"

using namespace bi;

namespace {

Bunch b(const std::string& s) { return parse_bunch(s); }
const char* kEx1 = "(p , (q ; o+)) ; (r ; (ox ; r))";

std::set<std::string> reduct_strings(const Bunch& g, ReductionMode m) {
  std::set<std::string> out;
  for (auto& [step, red] : reducts(g, m)) {
    (void)step;
    out.insert(render(red));
  }
  return out;
}

}  // namespace

TEST_CASE("reducts") {
  auto r1 = reduct_strings(b("q ; o+"), ReductionMode::Big);
  CHECK(r1 == std::set<std::string>{"q"});

  // Example 1: the contract-r step and the drop-o+ step are both available
  auto r2 = reduct_strings(b(kEx1), ReductionMode::Small);
  CHECK(r2.count(render(canonicalize(b("(p , (q ; o+)) ; (r ; ox)")))) == 1);
  CHECK(r2.count(render(canonicalize(b("(p , q) ; (r ; (ox ; r))")))) == 1);

  CHECK(reducts(b("p , q"), ReductionMode::Big).empty());

  // small steps are big steps
  for (const Bunch& g : enumerate_bunches({"p"}, 4)) {
    auto small = reduct_strings(g, ReductionMode::Small);
    auto big = reduct_strings(g, ReductionMode::Big);
    for (const std::string& s : small) CHECK(big.count(s) == 1);
  }
}

TEST_CASE("is_normal") {
  CHECK(is_normal(b("p")));
  CHECK_FALSE(is_normal(b("p ; p")));
  CHECK(is_normal(b("r ; ox")));
  CHECK(is_normal(b("r , o+")));
  CHECK_FALSE(is_normal(b("r , ox")));
  CHECK_FALSE(is_normal(b("r ; o+")));
  // group-level duplicates reduce to child-level duplicates
  CHECK_FALSE(is_normal(b("p ; q ; p ; q")));
}

TEST_CASE("normalize") {
  NormalizeResult r = normalize(b(kEx1));
  CHECK(permutes(r.normal_form, b("(p , q) ; (r ; ox)")));
  CHECK(is_normal(r.normal_form));
  CHECK(r.steps.size() == 2);

  NormalizeResult leafr = normalize(b("p"));
  CHECK(leafr.normal_form == b("p"));
  CHECK(leafr.steps.empty());

  NormalizeResult two = normalize(b("p ; p ; o+"));
  CHECK(two.normal_form == b("p"));
  CHECK(two.steps.size() == 2);

  // replaying the recorded steps reproduces the concrete result
  Bunch cur = b(kEx1);
  for (const ReductionStep& s : r.steps) cur = apply_step(cur, s);
  CHECK(cur == r.concrete);
}

TEST_CASE("join") {
  Bunch g = b(kEx1);
  CHECK(join(g, g).has_value());

  // two different contractions of p;p;p join, and p is a common reduct
  Bunch three = b("p ; p ; p");
  auto rs = reducts(three, ReductionMode::Small);
  REQUIRE(rs.size() >= 2);
  auto j = join(rs[0].second, rs[1].second);
  REQUIRE(j.has_value());
  CHECK(quasi_metric(rs[0].second, b("p")).has_value());
  CHECK(quasi_metric(rs[1].second, b("p")).has_value());

  // the two Example 1 reducts join at the normal form
  auto ja = join(b("(p , (q ; o+)) ; (r ; ox)"), b("(p , q) ; (r ; (ox ; r))"));
  REQUIRE(ja.has_value());
  CHECK(permutes(*ja, b("(p , q) ; (r ; ox)")));
}

TEST_CASE("class reduction and the quasi-metric") {
  CHECK(class_reduce(b("p")).empty());
  CHECK(quasi_metric(b("p"), b("p")) == 0);
  CHECK(quasi_metric(b(kEx1), normalize(b(kEx1)).normal_form) == 2);
  CHECK_FALSE(quasi_metric(b("p"), b("q")).has_value());
  CHECK(quasi_metric(b("p ; p"), b("p")) == 1);
}

TEST_CASE("termination bound: maximal sequences are short") {
  // every proper step deletes at least one leaf or unit slot
  for (const Bunch& g : enumerate_bunches({"p"}, 4)) {
    int slots = 0;
    for (auto& [p, sub] : subbunches(g)) {
      (void)p;
      if (sub.is_complex()) slots += static_cast<int>(sub.arity()) - 1;
    }
    CHECK(static_cast<int>(normalize(g).steps.size()) <= slots);
  }
}

TEST_CASE("normal forms are unique up to permutation (small universe)") {
  for (const Bunch& g : enumerate_bunches({"p", "o_unused"}, 3)) {
    // exhaust all maximal small-step sequences by DFS over class reducts
    std::set<std::string> normal_forms;
    std::vector<Bunch> stack{canonicalize(g)};
    std::set<std::string> seen;
    while (!stack.empty()) {
      Bunch cur = stack.back();
      stack.pop_back();
      if (!seen.insert(render(cur)).second) continue;
      auto succ = class_reduce(cur);
      if (succ.empty()) {
        normal_forms.insert(render(cur));
        continue;
      }
      for (const Bunch& next : succ) stack.push_back(next);
    }
    CAPTURE(render(g));
    CHECK(normal_forms.size() == 1);
    CHECK(*normal_forms.begin() == render(normalize(g).normal_form));
  }
}

TEST_CASE("reduct sets are permutation-coherent") {
  for (const Bunch& g : enumerate_bunches({"p", "q"}, 3)) {
    if (g.is_basic()) continue;
    std::vector<Bunch> kids = g.children();
    std::reverse(kids.begin(), kids.end());
    Bunch h = Bunch::make(g.kind(), kids);
    CHECK(reduct_strings(g, ReductionMode::Big) == reduct_strings(h, ReductionMode::Big));
  }
}

TEST_CASE("local confluence on the tiny universe") {
  ConfluenceReport r = check_local_confluence({"p"}, 3);
  CHECK(r.bunches > 0);
  CHECK(r.counterexamples.empty());
}

TEST_CASE("enumerate_bunches structure") {
  // 1-leaf bunches over {p}: p, o+, ox
  auto tiny = enumerate_bunches({"p"}, 1);
  CHECK(tiny.size() == 3);
  // all canonical, all satisfy the node invariants
  for (const Bunch& g : enumerate_bunches({"p", "q"}, 4)) {
    CHECK(g == canonicalize(g));
    for (auto& [path, sub] : subbunches(g)) {
      (void)path;
      if (sub.is_complex()) {
        CHECK(sub.arity() >= 2);
        for (const Bunch& c : sub.children()) CHECK(c.kind() != sub.kind());
      }
    }
  }
}
