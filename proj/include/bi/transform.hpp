#ifndef BI_TRANSFORM_HPP
#define BI_TRANSFORM_HPP

#include <map>
#include <stdexcept>
#include <vector>

#include "bi/calculus.hpp"
#include "bi/syntax.hpp"

namespace bi {

struct TransformError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// LBI proof -> sLBI proof of the same end-sequent: E/W/C and the general
// bot-left axiom are replaced by small-step strategy blocks.
Derivation lbi_to_slbi(const Derivation& d);

// Proof of a normal sequent -> regimented proof of the same end-sequent,
// rebuilt by the action-tree expansion. Strategies use the small-step
// structural rules, so the output lives in sLBI plus whatever variants the
// input used (System::SLBIPlus at the widest).
Derivation regiment(const Derivation& d);

// Remove all Cox / Co+ instances from a regimented proof, introducing the
// indexed rule variants, Inst, and Rad. Output checks under dLBI+rad.
Derivation eliminate_unit_contractions(const Derivation& d);

// Remove all Rad instances from a regimented dLBI+rad proof.
Derivation eliminate_rad(const Derivation& d);

// ---------------------------------------------------------------------------
// Appendix-E labelling: every multiplicative connective occurrence and every
// multiplicative context-former node carries an integer label. Labels are
// assigned uniquely in the end-sequent and transported upward; contraction is
// the only rule that copies them.

// formula-position (child-index path) -> label of the * / -* there
using FormulaLabels = std::map<std::vector<int>, int>;

struct LabelledBunch {
  Bunch shape;
  std::map<Path, int> mul_labels;             // one label per Mul node
  std::map<Path, FormulaLabels> leaf_labels;  // per Leaf formula
};

struct LabelledSequent {
  LabelledBunch context;
  Formula goal;
  FormulaLabels goal_labels;
};

struct LabelledDerivation {
  LabelledSequent sequent;
  RuleId rule = RuleId::Hypothesis;
  std::vector<LabelledDerivation> children;
};

LabelledDerivation well_label(const Derivation& d);

using LabelMultiset = std::vector<int>;  // sorted

// Label multisets of all lines of the bunch.
std::vector<LabelMultiset> label_sets(const LabelledBunch& g);
// The label multiset of a critical (maximal-depth) line.
LabelMultiset critical_label_set(const LabelledBunch& g);
// omega-critical labels of a formula (the multiset realizing its width).
LabelMultiset critical_label_set(const Formula& f, const FormulaLabels& labels);

// Appendix-E bound: across the label sets of any ~-related pair (and the
// context/goal pair) every label occurs at most twice.
bool labels_within_bound(const LabelledSequent& s);

}  // namespace bi

#endif
