#ifndef BI_SEARCH_HPP
#define BI_SEARCH_HPP

#include <optional>
#include <set>
#include <vector>

#include "bi/calculus.hpp"
#include "bi/syntax.hpp"

namespace bi {

// All subformulas of all formulas in the sequent, closed under the subformula
// relation.
std::vector<Formula> subformula_closure(const Sequent& s);

// Additive / multiplicative combinations of up to n elements of B (multisets;
// singletons included, so B itself is contained). Canonical representatives.
std::vector<Bunch> oplus(int n, const std::vector<Bunch>& b);
std::vector<Bunch> otimes(int n, const std::vector<Bunch>& b);

SearchBounds default_bounds(const Sequent& normal_goal);

// The bounded sequent space: vocabulary = subformula closure of the goal plus
// the two units. Membership is decided directly from the bounds; enumeration
// materializes the bunch universe and is intended for small inputs.
class SequentSpace {
 public:
  SequentSpace(std::vector<Formula> vocabulary, SearchBounds bounds);

  const std::vector<Formula>& vocabulary() const { return vocab_; }
  const SearchBounds& bounds() const { return bounds_; }

  bool contains(const Bunch& g) const;
  bool contains(const Sequent& s) const;

  // every canonical bunch over the vocabulary within the bounds
  std::vector<Bunch> enumerate_bunches(std::size_t limit = 1'000'000) const;
  std::vector<Sequent> enumerate_sequents(std::size_t limit = 1'000'000) const;

 private:
  std::vector<Formula> vocab_;
  SearchBounds bounds_;
};

SequentSpace generate_space(const Sequent& s, const SearchBounds& b);

// ---------------------------------------------------------------------------
// Decision procedure

enum class Verdict { Provable, Unprovable, ResourceLimit };

struct SearchStats {
  long nodes_expanded = 0;
  long memo_hits = 0;
  long max_mu = 0, max_omega = 0, max_delta = 0;  // over returned proof
  long frontier = 0;                              // open goals at abort
};

struct DecideOptions {
  std::optional<SearchBounds> bounds;  // default: from the normalized goal
  System system = System::DLBI;
  long max_nodes = 2'000'000;
  bool parallel = false;
  bool regiment_result = true;
};

struct DecideResult {
  Verdict verdict = Verdict::Unprovable;
  std::optional<Derivation> proof;  // of the normalized goal
  Sequent normal_goal;
  SearchBounds bounds;
  SearchStats stats;
};

DecideResult decide(const Sequent& goal, const DecideOptions& opts = {});

}  // namespace bi

#endif
