#ifndef BI_REWRITING_HPP
#define BI_REWRITING_HPP

#include <optional>
#include <string>
#include <vector>

#include "bi/syntax.hpp"

namespace bi {

// One proper reduction step. Permutation is never materialized as a step;
// reducts are compared and stored canonically instead (class reduction).
enum class StepKind { DropUnitTimes, DropUnitPlus, Contract };

struct ReductionStep {
  StepKind kind;
  Path at;                // the Mul/Add node the step fires at
  int unit_index = -1;    // drops: index of the removed unit child
  std::vector<int> keep;  // contract: kept sibling group
  std::vector<int> drop;  // contract: removed sibling group (~=-equal to keep)
};

std::string render(const ReductionStep& s);

enum class ReductionMode { Big, Small };

// Apply a step to the concrete (non-canonicalized) bunch.
Bunch apply_step(const Bunch& g, const ReductionStep& s);

// All proper one-step reducts; each reduct is returned canonicalized. In
// small mode only steps whose removed bunch is normal are listed. Symmetric
// contraction pairs are enumerated once.
std::vector<std::pair<ReductionStep, Bunch>> reducts(const Bunch& g, ReductionMode mode);

bool is_normal(const Bunch& g);
bool is_normal(const Sequent& s);

struct NormalizeResult {
  Bunch normal_form;  // canonical
  Bunch concrete;     // the literal end of the recorded step sequence
  std::vector<ReductionStep> steps;
};

// Leftmost-innermost small-step normalization; the normal form's ~=-class is
// strategy-independent by confluence.
NormalizeResult normalize(const Bunch& g);
Sequent normalize_goal(const Sequent& s);

// Common reduct of g1 and g2 by breadth-first closure of small-step
// reduction; nullopt never happens for genuine co-reducts of one bunch.
std::optional<Bunch> join(const Bunch& g1, const Bunch& g2);

// Canonical representatives of all one-step class-reduction successors.
std::vector<Bunch> class_reduce(const Bunch& g);

// Least number of proper small steps from g1's class to g2's class.
std::optional<int> quasi_metric(const Bunch& g1, const Bunch& g2);

// All canonical bunches with at most max_leaves leaf positions (units count)
// over the given atom alphabet plus o+ and ox.
std::vector<Bunch> enumerate_bunches(const std::vector<std::string>& atoms, int max_leaves,
                                     bool include_units = true);

struct ConfluenceReport {
  long bunches = 0;
  long pairs = 0;
  // (bunch, reduct1, reduct2) with no common reduct — expected empty
  std::vector<std::array<Bunch, 3>> counterexamples;
};

ConfluenceReport check_local_confluence(const std::vector<std::string>& atoms, int max_leaves);

}  // namespace bi

#endif
