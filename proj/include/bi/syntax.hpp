#ifndef BI_SYNTAX_HPP
#define BI_SYNTAX_HPP

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bi {

// ---------------------------------------------------------------------------
// Formulas: atoms, additive connectives /\ \/ -> top bot, multiplicative * -* I.
// Immutable shared trees with precomputed hashes.

enum class FormulaKind { Atom, Top, Bot, One, And, Or, Imp, Star, Wand };

class Formula {
 public:
  Formula() = default;  // empty handle; only for containers

  static Formula atom(std::string name);
  static Formula top();
  static Formula bot();
  static Formula one();
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula imp(Formula l, Formula r);
  static Formula star(Formula l, Formula r);
  static Formula wand(Formula l, Formula r);

  bool empty() const { return !node_; }
  FormulaKind kind() const;
  const std::string& atom_name() const;
  const Formula& left() const;
  const Formula& right() const;
  bool is_binary() const;
  // * and -* count toward multiplicative width; /\ \/ -> do not.
  bool is_mult_binary() const;

  std::size_t hash() const;
  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

  struct Node;  // implementation detail, public for the factory functions
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

// Total structural order: kind tag, then atom name / children.
int compare(const Formula& a, const Formula& b);

// ---------------------------------------------------------------------------
// Bunches: formula leaves and units under additive (;) and multiplicative (,)
// context-formers. Add/Mul nodes are variadic with >= 2 children and never
// nest a node of the same kind (maximal chains are flattened).

enum class BunchKind { UnitPlus, UnitTimes, Leaf, Add, Mul };

class Bunch {
 public:
  Bunch() = default;

  static Bunch leaf(Formula f);
  static Bunch unit_plus();
  static Bunch unit_times();
  // Flatten same-kind children; a single child collapses to that child.
  static Bunch add(std::vector<Bunch> children);
  static Bunch mul(std::vector<Bunch> children);
  static Bunch make(BunchKind former, std::vector<Bunch> children);

  bool empty() const { return !node_; }
  BunchKind kind() const;
  bool is_basic() const;    // leaf or unit
  bool is_complex() const { return !is_basic(); }
  bool is_unit() const;
  const Formula& formula() const;                 // Leaf only
  const std::vector<Bunch>& children() const;     // Add/Mul only
  std::size_t arity() const;

  std::size_t hash() const;
  bool operator==(const Bunch& o) const;
  bool operator!=(const Bunch& o) const { return !(*this == o); }

  struct Node;  // implementation detail, public for the factory functions
  explicit Bunch(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

// Tag order UnitPlus < UnitTimes < Leaf < Add < Mul, leaves by formula order,
// nodes lexicographically by children. Fixed so canonical forms are bit-stable.
int compare(const Bunch& a, const Bunch& b);

// ---------------------------------------------------------------------------
// Addressing sub-bunch occurrences. A Path is a sequence of child indices; a
// Loc optionally selects a sub-multiset of >= 1 children at the addressed node
// (empty `members` means the node itself). Groups realize the fact that any
// sub-multiset of a flattened chain is a sub-bunch of the binary original.

using Path = std::vector<int>;

struct Loc {
  Path node;
  std::vector<int> members;  // sorted, empty = whole node

  bool is_group() const { return !members.empty(); }
  bool operator==(const Loc& o) const = default;
};

struct Sequent {
  Bunch context;
  Formula goal;

  bool operator==(const Sequent& o) const {
    return context == o.context && goal == o.goal;
  }
  bool operator!=(const Sequent& o) const { return !(*this == o); }
};

// ---------------------------------------------------------------------------
// Parsing / printing (ASCII grammar; see README).

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        position(pos) {}
  std::size_t position;
};

Formula parse_formula(const std::string& text);
Bunch parse_bunch(const std::string& text);
Sequent parse_sequent(const std::string& text);

std::string render(const Formula& f);
std::string render(const Bunch& g);
std::string render(const Sequent& s);

// ---------------------------------------------------------------------------
// Navigation and surgery.

bool valid_path(const Bunch& g, const Path& p);
Bunch sub_at(const Bunch& g, const Path& p);
Bunch sub_at(const Bunch& g, const Loc& loc);

// All single-node occurrences, preorder, including (empty path, g) itself.
std::vector<std::pair<Path, Bunch>> subbunches(const Bunch& g);
// Group occurrences: for each complex node, every sub-multiset of >= 2
// children (including the full child set, which denotes the node itself).
std::vector<std::pair<Loc, Bunch>> subbunch_groups(const Bunch& g);

// Replace the occurrence at `loc` by `with`, re-flattening as needed; a node
// left with a single child collapses to it.
Bunch replace(const Bunch& g, const Loc& loc, const Bunch& with);
// Remove a group of children (node must keep >= 0; collapses as needed).
// Removing the whole node is not allowed here.
Bunch remove_children(const Bunch& g, const Path& node, const std::vector<int>& members);

// ---------------------------------------------------------------------------
// Permutation (~=) and coherent equivalence (==).

// Sort every variadic node's children under the structural order; idempotent,
// and g ~= canonicalize(g).
Bunch canonicalize(const Bunch& g);
bool permutes(const Bunch& a, const Bunch& b);

// Erase all removable units (o+ under ';', ox under ',') to a fixpoint.
Bunch erase_units(const Bunch& g);
bool coherent_equal(const Bunch& a, const Bunch& b);

Sequent canonicalize(const Sequent& s);
bool permutes(const Sequent& a, const Sequent& b);
bool coherent_equal(const Sequent& a, const Sequent& b);

std::size_t hash_value(const Sequent& s);

struct SequentHash {
  std::size_t operator()(const Sequent& s) const { return hash_value(s); }
};

}  // namespace bi

#endif
