#ifndef BI_CALCULUS_HPP
#define BI_CALCULUS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bi/measures.hpp"
#include "bi/syntax.hpp"

namespace bi {

// ---------------------------------------------------------------------------
// Rule catalogue. LBI is the standard bunched sequent calculus (cut-free);
// sLBI replaces E/W/C by small-step forms; dLBI additionally embeds the unit
// laws into indexed variants of the resolution and right rules plus inst.

enum class RuleId {
  // axioms
  Id, BotL, BotLPrime, TopR, OneR,
  // logical, single premise
  OneL, TopL, AndL, OrR1, OrR2, ImpR, WandR, StarL,
  // logical, two premises
  AndR, OrL, ImpL, StarR, WandL,
  // LBI structural
  E, W, C,
  // small-step structural
  EPrime, WPrime, WUnitPlus, WUnitTimes, CPrime, CUnitTimes, CUnitPlus,
  // unit-law embeddings
  WandL1, WandL2, WandL3, StarR1, StarR2, ImpL1, ImpL2, ImpL3, AndR1, AndR2, Inst,
  // restricted radical removal
  Rad,
  // leaf from a declared hypothesis set
  Hypothesis,
};

enum class System {
  LBI,
  SLBI,
  DLBI,
  DLBIRad,
  SLBIPlus,  // sLBI plus the dLBI variants and Rad; transform intermediate
};

int rule_arity(RuleId r);
bool is_axiom(RuleId r);
bool is_logical(RuleId r);
bool is_structural(RuleId r);
bool system_has(System sys, RuleId r);
std::string rule_name(RuleId r);
std::optional<RuleId> rule_from_name(const std::string& name);
std::optional<System> system_from_name(const std::string& name);
std::string system_name(System sys);

// ---------------------------------------------------------------------------
// Instances and derivations.

struct RuleInstance {
  RuleId rule = RuleId::Hypothesis;
  std::optional<Bunch> sigma;  // W' / Inst parameter, normal
  std::vector<Loc> active;     // conclusion-side active locations (optional hints)
};

struct Derivation {
  Sequent sequent;
  RuleInstance inst;
  std::vector<Derivation> children;

  bool is_hypothesis() const { return inst.rule == RuleId::Hypothesis; }
};

std::size_t derivation_size(const Derivation& d);
int measure_derivation(const Derivation& d, Measure m);
void for_each_node(const Derivation& d, const std::function<void(const Derivation&)>& f);

// ---------------------------------------------------------------------------
// Backward reading of the rules: every instance whose conclusion is the given
// sequent, with concrete premises and both-side active locations.

struct BackwardInstance {
  RuleInstance inst;
  std::vector<Sequent> premises;
  std::vector<std::vector<Loc>> premise_active;
};

std::vector<BackwardInstance> backward_instances(System sys, const Sequent& goal);
std::vector<BackwardInstance> backward_instances(RuleId rule, const Sequent& goal);

struct SearchBounds {
  int a = 3;  // multiplicity cap
  int m = 0;  // multiplicative width cap
  int d = 0;  // depth cap

  bool admits(const Sequent& s) const;
};

// Backward instances whose premises all stay within bounds.
std::vector<BackwardInstance> expand(System sys, const Sequent& goal, const SearchBounds& b);

// Is the occurrence additively combined with a ~=-copy of itself?
bool occurrence_duplicit(const Bunch& host, const Loc& loc);

// How a backward step behaves in the regimented phase discipline: weakenings
// load, contractions normalize, everything else (including W'/Inst when the
// introduced bunch is fresh) acts.
enum class StepClass { Action, Weakening, Contraction };

StepClass classify_instance(const Sequent& goal, const BackwardInstance& inst);

// ---------------------------------------------------------------------------
// Checking.

// True iff the claimed instance is a correct application: contexts are
// matched up to permutation, sigma (when given) up to permutation.
bool check_inference(System sys, const RuleInstance& inst,
                     const std::vector<Sequent>& premises, const Sequent& conclusion);

struct CheckResult {
  bool ok = true;
  std::string error;

  explicit operator bool() const { return ok; }
};

CheckResult check_derivation(System sys, const Derivation& d,
                             const std::vector<Sequent>& hypotheses = {});

// ---------------------------------------------------------------------------
// Actions and the regimented-proof discipline.

bool is_action(System sys, const Derivation& node);
// Action whose premises have every duplicit sub-bunch at an active location.
bool is_regimented_action(System sys, const Derivation& node);

enum class Phase { Action, Loading, Normalizing, Exchange };

Phase classify_inference(System sys, const Derivation& node);

struct PhasedNode {
  const Derivation* node;
  Phase phase;
};

std::vector<PhasedNode> classify_phases(System sys, const Derivation& d);
// Actions regimented and each branch, leaf to root, matches A (N* L* A)* N*
// with exchanges transparent.
bool is_regimented(System sys, const Derivation& d);

// Hatted forms of a regimented action: premises and conclusion with all
// non-active material reduced away; normalize(C-hat) permutes with
// normalize(C).
struct HatForms {
  std::vector<Sequent> premises;
  Sequent conclusion;
};

std::optional<HatForms> hat_forms(System sys, const Derivation& node);

// Reduce a sequent context, never touching the subtrees rooted at the given
// locations; returns the reduced sequent and the steps taken.
struct FrozenReduceResult {
  Sequent sequent;
  std::vector<Loc> active;  // the frozen locations, re-addressed
};

FrozenReduceResult frozen_reduce(const Sequent& s, const std::vector<Loc>& frozen);

// ---------------------------------------------------------------------------
// Interchange format (JSON).

std::string derivation_to_json(const Derivation& d);
Derivation derivation_from_json(const std::string& text);

}  // namespace bi

#endif
