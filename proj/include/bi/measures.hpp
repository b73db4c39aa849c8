#ifndef BI_MEASURES_HPP
#define BI_MEASURES_HPP

#include <vector>

#include "bi/syntax.hpp"

namespace bi {

// A ~-equivalence class of additive data occurrences in a host bunch, together
// with the least sub-bunch containing all members. Additive data: basic, or
// complex with multiplicative principal context-former.
struct AdditiveSetView {
  std::vector<Path> members;
  Path component;
};

bool is_additive_data(const Bunch& b);

std::vector<AdditiveSetView> additive_sets(const Bunch& g);

// |dDelta| - 1: extra ~=-copies of the member within its additive set.
int duplicity(const Bunch& g, const Path& member);

// mu: sum over additive sets of the maximal member duplicity.
int multiplicity(const Bunch& g);

// omega: multiplicative connective/former slots along worst additive choices.
int mult_width(const Formula& f);
int mult_width(const Bunch& g);

// Maximal proper sub-bunches reachable without a context-former alternation;
// with flattened variadic nodes these are exactly the root's children.
std::vector<Bunch> topset(const Bunch& g);

// delta: omega on formulas/units, max over topset for additive nodes, +1 for
// multiplicative nodes.
int depth(const Formula& f);
int depth(const Bunch& g);

enum class Measure { Mu, Omega, Delta };

int measure(const Bunch& g, Measure m);
int measure(const Formula& f, Measure m);
// f(ctx |- goal) = f(ctx) + f(goal)
int measure(const Sequent& s, Measure m);

int mu(const Sequent& s);
int omega(const Sequent& s);
int delta(const Sequent& s);

}  // namespace bi

#endif
