#include "bi/measures.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace bi {

bool is_additive_data(const Bunch& b) {
  return b.is_basic() || b.kind() == BunchKind::Mul;
}

// Two additive-data occurrences are ~-related iff the tree path between them
// crosses only additive formers. With flattened nodes that happens exactly
// when both are children of the same Add node; everything else (children of
// Mul slots, the root occurrence) sits alone in its class.
std::vector<AdditiveSetView> additive_sets(const Bunch& g) {
  std::vector<AdditiveSetView> out;
  Path p;
  auto walk = [&](auto&& self, const Bunch& b) -> void {
    if (is_additive_data(b)) {
      bool at_root = p.empty();
      bool under_add = false;
      if (!at_root) {
        Path parent(p.begin(), p.end() - 1);
        under_add = sub_at(g, parent).kind() == BunchKind::Add;
      }
      if (at_root || !under_add) {
        // singleton class
        out.push_back(AdditiveSetView{{p}, p});
      }
      // children of Add nodes are collected when visiting the Add node below
    }
    if (b.kind() == BunchKind::Add) {
      AdditiveSetView set;
      set.component = p;
      for (std::size_t i = 0; i < b.arity(); ++i) {
        Path m = p;
        m.push_back(static_cast<int>(i));
        set.members.push_back(std::move(m));
      }
      out.push_back(std::move(set));
    }
    if (b.is_complex()) {
      for (std::size_t i = 0; i < b.arity(); ++i) {
        p.push_back(static_cast<int>(i));
        self(self, b.children()[i]);
        p.pop_back();
      }
    }
  };
  walk(walk, g);
  return out;
}

static int set_duplicity_of(const Bunch& g, const AdditiveSetView& set, const Path& member) {
  Bunch target = canonicalize(sub_at(g, member));
  int copies = 0;
  for (const Path& m : set.members) {
    if (canonicalize(sub_at(g, m)) == target) ++copies;
  }
  return copies - 1;
}

int duplicity(const Bunch& g, const Path& member) {
  if (!valid_path(g, member)) throw std::out_of_range("invalid path");
  if (!is_additive_data(sub_at(g, member)))
    throw std::invalid_argument("member is not additive data");
  for (const AdditiveSetView& set : additive_sets(g)) {
    if (std::find(set.members.begin(), set.members.end(), member) != set.members.end())
      return set_duplicity_of(g, set, member);
  }
  throw std::invalid_argument("member not found in any additive set");
}

int multiplicity(const Bunch& g) {
  int total = 0;
  for (const AdditiveSetView& set : additive_sets(g)) {
    if (set.members.size() < 2) continue;
    // dA = sup over members of (copies - 1)
    std::vector<Bunch> canon;
    canon.reserve(set.members.size());
    for (const Path& m : set.members) canon.push_back(canonicalize(sub_at(g, m)));
    std::sort(canon.begin(), canon.end(),
              [](const Bunch& a, const Bunch& b) { return compare(a, b) < 0; });
    int best = 0, run = 1;
    for (std::size_t i = 1; i < canon.size(); ++i) {
      run = canon[i] == canon[i - 1] ? run + 1 : 1;
      best = std::max(best, run - 1);
    }
    total += best;
  }
  return total;
}

int mult_width(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Top:
    case FormulaKind::Bot:
    case FormulaKind::One:
      return 0;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imp:
      return std::max(mult_width(f.left()), mult_width(f.right()));
    case FormulaKind::Star:
    case FormulaKind::Wand:
      return mult_width(f.left()) + mult_width(f.right()) + 1;
  }
  return 0;
}

int mult_width(const Bunch& g) {
  switch (g.kind()) {
    case BunchKind::UnitPlus:
    case BunchKind::UnitTimes:
      return 0;
    case BunchKind::Leaf:
      return mult_width(g.formula());
    case BunchKind::Add: {
      int w = 0;
      for (const Bunch& c : g.children()) w = std::max(w, mult_width(c));
      return w;
    }
    case BunchKind::Mul: {
      // k children of a flattened chain carry k-1 formers
      int w = static_cast<int>(g.arity()) - 1;
      for (const Bunch& c : g.children()) w += mult_width(c);
      return w;
    }
  }
  return 0;
}

std::vector<Bunch> topset(const Bunch& g) {
  if (g.is_basic()) throw std::invalid_argument("topset of a basic bunch");
  return g.children();
}

int depth(const Formula& f) { return mult_width(f); }

int depth(const Bunch& g) {
  switch (g.kind()) {
    case BunchKind::UnitPlus:
    case BunchKind::UnitTimes:
      return 0;
    case BunchKind::Leaf:
      return mult_width(g.formula());
    case BunchKind::Add: {
      int d = 0;
      for (const Bunch& c : g.children()) d = std::max(d, depth(c));
      return d;
    }
    case BunchKind::Mul: {
      int d = 0;
      for (const Bunch& c : g.children()) d = std::max(d, depth(c));
      return d + 1;
    }
  }
  return 0;
}

int measure(const Bunch& g, Measure m) {
  switch (m) {
    case Measure::Mu: return multiplicity(g);
    case Measure::Omega: return mult_width(g);
    case Measure::Delta: return depth(g);
  }
  return 0;
}

int measure(const Formula& f, Measure m) {
  switch (m) {
    case Measure::Mu: return 0;  // a lone formula has one trivial additive set
    case Measure::Omega: return mult_width(f);
    case Measure::Delta: return depth(f);
  }
  return 0;
}

int measure(const Sequent& s, Measure m) {
  return measure(s.context, m) + measure(s.goal, m);
}

int mu(const Sequent& s) { return measure(s, Measure::Mu); }
int omega(const Sequent& s) { return measure(s, Measure::Omega); }
int delta(const Sequent& s) { return measure(s, Measure::Delta); }

}  // namespace bi
