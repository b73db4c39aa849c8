#include "doctest.h"

#include <set>

#include "bi/measures.hpp"
#include "bi/rewriting.hpp"
#include "bi/search.hpp"
#include "oracle.hpp"

using namespace bi;

namespace {

std::set<std::string> renders(const std::vector<Bunch>& xs) {
  std::set<std::string> out;
  for (const Bunch& x : xs) out.insert(render(x));
  return out;
}

Verdict verdict_of(const std::string& s) {
  return decide(parse_sequent(s)).verdict;
}

}  // namespace

TEST_CASE("subformula closure") {
  auto c1 = subformula_closure(parse_sequent("p |- p"));
  CHECK(c1.size() == 1);

  auto c2 = subformula_closure(parse_sequent("p * q |- q * p"));
  CHECK(c2.size() == 4);

  auto c3 = subformula_closure(parse_sequent("(p -* top) -> q |- top"));
  CHECK(c3.size() == 5);  // p, top, q, p -* top, (p -* top) -> q
}

TEST_CASE("oplus and otimes") {
  std::vector<Bunch> base{parse_bunch("p")};
  CHECK(renders(oplus(1, base)) == std::set<std::string>{"p"});

  std::vector<Bunch> pq{parse_bunch("p"), parse_bunch("q")};
  CHECK(renders(oplus(2, pq)) ==
        std::set<std::string>{"p", "q", "p ; p", "p ; q", "q ; q"});

  std::vector<Bunch> pu{parse_bunch("p"), Bunch::unit_times()};
  CHECK(renders(otimes(2, pu)) ==
        std::set<std::string>{"p", "ox", "p , p", "ox , p", "ox , ox"});
}

TEST_CASE("generate_space: tiny example") {
  SequentSpace space({Formula::atom("p")}, SearchBounds{0, 0, 0});
  auto bunches = renders(space.enumerate_bunches());
  // basics plus the duplicity-free additive combinations
  std::set<std::string> want{"p",      "o+",      "ox",         "o+ ; p",
                             "ox ; p", "o+ ; ox", "o+ ; ox ; p"};
  CHECK(bunches == want);
  CHECK(space.contains(parse_bunch("o+ ; p")));
  CHECK_FALSE(space.contains(parse_bunch("p ; p")));
  CHECK_FALSE(space.contains(parse_bunch("p , p")));
}

TEST_CASE("generate_space: membership of proof sequents") {
  Sequent goal = parse_sequent("(p -* top) -> q |- top");
  SearchBounds b = default_bounds(normalize_goal(goal));
  SequentSpace space = generate_space(goal, b);
  DecideResult res = decide(goal);
  REQUIRE(res.verdict == Verdict::Provable);
  REQUIRE(res.proof.has_value());
  for_each_node(*res.proof, [&](const Derivation& n) {
    CAPTURE(render(n.sequent));
    CHECK(space.contains(n.sequent.context));
    CHECK(space.bounds().admits(n.sequent));
  });
}

TEST_CASE("generate_space: monotone in the bounds") {
  SequentSpace small({Formula::atom("p")}, SearchBounds{0, 0, 0});
  SequentSpace big({Formula::atom("p")}, SearchBounds{1, 1, 1});
  for (const Bunch& g : small.enumerate_bunches()) CHECK(big.contains(g));
}

TEST_CASE("decide: basic verdicts") {
  CHECK(verdict_of("p |- p") == Verdict::Provable);
  CHECK(verdict_of("p * q |- q * p") == Verdict::Provable);
  CHECK(verdict_of("p |- p * p") == Verdict::Unprovable);
  CHECK(verdict_of("(p -* top) -> q |- top") == Verdict::Provable);
  CHECK(verdict_of("p , (p -* q) |- q") == Verdict::Provable);
  CHECK(verdict_of("ox |- I") == Verdict::Provable);
  CHECK(verdict_of("I , p |- p") == Verdict::Provable);
  CHECK(verdict_of("p |- p /\\ p") == Verdict::Provable);
  CHECK(verdict_of("top |- I") == Verdict::Unprovable);
}

TEST_CASE("decide: returned proofs check and respect the bounds") {
  for (const char* text : {"p |- p", "p * q |- q * p", "p , (p -* q) |- q",
                           "(p -* top) -> q |- top",
                           "p * (q \\/ r) |- (p * q) \\/ (p * r)"}) {
    CAPTURE(text);
    DecideResult res = decide(parse_sequent(text));
    REQUIRE(res.verdict == Verdict::Provable);
    REQUIRE(res.proof.has_value());
    CHECK(check_derivation(System::DLBI, *res.proof).ok);
    CHECK(permutes(res.proof->sequent, res.normal_goal));
    CHECK(measure_derivation(*res.proof, Measure::Mu) <= 3);
    CHECK(measure_derivation(*res.proof, Measure::Omega) <= omega(res.normal_goal));
    CHECK(measure_derivation(*res.proof, Measure::Delta) <=
          std::max(2 * delta(res.normal_goal), 1));
    CHECK(is_regimented(System::DLBI, *res.proof));
  }
}

TEST_CASE("decide: stability under coherent rewriting of the goal") {
  struct Pair {
    const char* a;
    const char* b;
  };
  for (const Pair& v : {Pair{"p |- p", "p ; o+ |- p"},
                        Pair{"p * q |- q * p", "(q , p) , ox |- q * p"},
                        Pair{"p |- p * p", "o+ ; p |- p * p"},
                        Pair{"p , (p -* q) |- q", "(p -* q) , p , ox |- q"}}) {
    CAPTURE(v.a);
    CHECK(decide(parse_sequent(v.a)).verdict == decide(parse_sequent(v.b)).verdict);
  }
}

TEST_CASE("decide: parallel mode agrees with sequential") {
  for (const char* text : {"p |- p", "p * q |- q * p", "p |- p * p",
                           "(p -* top) -> q |- top", "top |- I"}) {
    CAPTURE(text);
    DecideOptions par;
    par.parallel = true;
    DecideResult a = decide(parse_sequent(text));
    DecideResult b = decide(parse_sequent(text), par);
    CHECK(a.verdict == b.verdict);
    if (b.proof) CHECK(check_derivation(System::DLBI, *b.proof).ok);
  }
}

TEST_CASE("decide: resource limit aborts distinctly") {
  DecideOptions opts;
  opts.max_nodes = 1;
  DecideResult res = decide(parse_sequent("p * (q \\/ r) |- (p * q) \\/ (p * r)"), opts);
  CHECK(res.verdict == Verdict::ResourceLimit);
}

TEST_CASE("decide agrees with the naive LBI oracle on a small exhaustive family") {
  // all sequents f1 |- f2 with f1, f2 of connective depth <= 1 over {p, q, I}
  std::vector<Formula> atoms{Formula::atom("p"), Formula::atom("q")};
  std::vector<Formula> formulas = atoms;
  std::vector<Formula> leaves = atoms;
  leaves.push_back(Formula::one());
  for (const Formula& a : leaves) {
    for (const Formula& b : leaves) {
      formulas.push_back(Formula::conj(a, b));
      formulas.push_back(Formula::disj(a, b));
      formulas.push_back(Formula::imp(a, b));
      formulas.push_back(Formula::star(a, b));
      formulas.push_back(Formula::wand(a, b));
    }
  }
  formulas.push_back(Formula::one());
  formulas.push_back(Formula::top());

  long checked = 0, provable = 0;
  for (const Formula& f1 : formulas) {
    for (const Formula& f2 : formulas) {
      Sequent s{Bunch::leaf(f1), f2};
      DecideResult res = decide(s);
      REQUIRE(res.verdict != Verdict::ResourceLimit);
      oracle::Options opts;
      opts.max_depth = 8;
      oracle::Answer ans = oracle::lbi_provable(s, opts);
      REQUIRE(ans != oracle::Answer::Aborted);
      CAPTURE(render(s));
      CHECK((res.verdict == Verdict::Provable) == (ans == oracle::Answer::Proved));
      ++checked;
      if (res.verdict == Verdict::Provable) ++provable;
    }
  }
  CHECK(checked > 1000);
  CHECK(provable > 100);
}
