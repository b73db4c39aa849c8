#ifndef BI_TESTS_FIXTURES_HPP
#define BI_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "bi/calculus.hpp"
#include "bi/syntax.hpp"

namespace bi::fixtures {

inline Derivation node(const std::string& sequent, RuleId rule,
                       std::vector<Derivation> children = {}, const std::string& sigma = "") {
  Derivation d;
  d.sequent = parse_sequent(sequent);
  d.inst.rule = rule;
  if (!sigma.empty()) d.inst.sigma = parse_bunch(sigma);
  d.children = std::move(children);
  return d;
}

inline Derivation hyp(const std::string& sequent) {
  return node(sequent, RuleId::Hypothesis);
}

// The worked proof of (p -* top) -> q |- top, five inferences: the right
// branch loads q onto o+ by W' so the resolution fires as ImpL1.
inline Derivation example6_proof() {
  Derivation n1 = node("o+ |- top", RuleId::TopR);
  Derivation n2 = node("((p -* top) -> q) , p |- top", RuleId::Inst, {std::move(n1)},
                       "((p -* top) -> q) , p");
  Derivation n3 = node("(p -* top) -> q |- p -* top", RuleId::WandR, {std::move(n2)});
  Derivation n4 = node("o+ |- top", RuleId::TopR);
  Derivation n5 = node("o+ ; q |- top", RuleId::WPrime, {std::move(n4)}, "q");
  Derivation n6 = node("((p -* top) -> q) ; ((p -* top) -> q) |- top", RuleId::ImpL1,
                       {std::move(n3), std::move(n5)});
  return node("(p -* top) -> q |- top", RuleId::CPrime, {std::move(n6)});
}

// Example 2, both resolution instances (phi = p, psi = q, chi = r).
inline Derivation example2_first() {
  return node("p ; p ; q ; (p -> q) |- r", RuleId::ImpL,
              {hyp("p ; p |- p"), hyp("q ; q |- r")});
}

inline Derivation example2_second() {
  return node("p ; q ; (p -> q) |- r", RuleId::ImpL, {hyp("p |- p"), hyp("q ; q |- r")});
}

}  // namespace bi::fixtures

#endif
