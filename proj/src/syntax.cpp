#include "bi/syntax.hpp"

#include <algorithm>
#include <cassert>

namespace bi {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  // boost::hash_combine flavor
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  FormulaKind kind;
  std::string name;  // Atom
  Formula l, r;
  std::size_t hash;
};

static std::shared_ptr<const Formula::Node> formula_node(FormulaKind k, std::string name,
                                                         Formula l, Formula r) {
  std::size_t h = mix(0x5bf0, static_cast<std::size_t>(k));
  for (char c : name) h = mix(h, static_cast<std::size_t>(c));
  if (!l.empty()) h = mix(h, l.hash());
  if (!r.empty()) h = mix(h, r.hash());
  auto n = std::make_shared<Formula::Node>();
  n->kind = k;
  n->name = std::move(name);
  n->l = std::move(l);
  n->r = std::move(r);
  n->hash = h;
  return n;
}

Formula Formula::atom(std::string name) {
  assert(!name.empty());
  return Formula(formula_node(FormulaKind::Atom, std::move(name), {}, {}));
}
Formula Formula::top() { return Formula(formula_node(FormulaKind::Top, "", {}, {})); }
Formula Formula::bot() { return Formula(formula_node(FormulaKind::Bot, "", {}, {})); }
Formula Formula::one() { return Formula(formula_node(FormulaKind::One, "", {}, {})); }
Formula Formula::conj(Formula l, Formula r) {
  return Formula(formula_node(FormulaKind::And, "", std::move(l), std::move(r)));
}
Formula Formula::disj(Formula l, Formula r) {
  return Formula(formula_node(FormulaKind::Or, "", std::move(l), std::move(r)));
}
Formula Formula::imp(Formula l, Formula r) {
  return Formula(formula_node(FormulaKind::Imp, "", std::move(l), std::move(r)));
}
Formula Formula::star(Formula l, Formula r) {
  return Formula(formula_node(FormulaKind::Star, "", std::move(l), std::move(r)));
}
Formula Formula::wand(Formula l, Formula r) {
  return Formula(formula_node(FormulaKind::Wand, "", std::move(l), std::move(r)));
}

FormulaKind Formula::kind() const { return node_->kind; }
const std::string& Formula::atom_name() const { return node_->name; }
const Formula& Formula::left() const { return node_->l; }
const Formula& Formula::right() const { return node_->r; }
bool Formula::is_binary() const {
  switch (node_->kind) {
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imp:
    case FormulaKind::Star:
    case FormulaKind::Wand:
      return true;
    default:
      return false;
  }
}
bool Formula::is_mult_binary() const {
  return node_->kind == FormulaKind::Star || node_->kind == FormulaKind::Wand;
}
std::size_t Formula::hash() const { return node_->hash; }

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  return compare(*this, o) == 0;
}

int compare(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case FormulaKind::Atom:
      return a.atom_name().compare(b.atom_name());
    case FormulaKind::Top:
    case FormulaKind::Bot:
    case FormulaKind::One:
      return 0;
    default: {
      int c = compare(a.left(), b.left());
      if (c != 0) return c;
      return compare(a.right(), b.right());
    }
  }
}

// ---------------------------------------------------------------------------
// Bunch

struct Bunch::Node {
  BunchKind kind;
  Formula formula;  // Leaf
  std::vector<Bunch> children;
  std::size_t hash;
};

static std::shared_ptr<const Bunch::Node> bunch_node(BunchKind k, Formula f,
                                                     std::vector<Bunch> children) {
  std::size_t h = mix(0xb0c4, static_cast<std::size_t>(k));
  if (!f.empty()) h = mix(h, f.hash());
  for (const Bunch& c : children) h = mix(h, c.hash());
  auto n = std::make_shared<Bunch::Node>();
  n->kind = k;
  n->formula = std::move(f);
  n->children = std::move(children);
  n->hash = h;
  return n;
}

Bunch Bunch::leaf(Formula f) {
  assert(!f.empty());
  return Bunch(bunch_node(BunchKind::Leaf, std::move(f), {}));
}
Bunch Bunch::unit_plus() { return Bunch(bunch_node(BunchKind::UnitPlus, {}, {})); }
Bunch Bunch::unit_times() { return Bunch(bunch_node(BunchKind::UnitTimes, {}, {})); }

static Bunch make_node(BunchKind k, std::vector<Bunch> children) {
  assert(k == BunchKind::Add || k == BunchKind::Mul);
  std::vector<Bunch> flat;
  flat.reserve(children.size());
  for (Bunch& c : children) {
    assert(!c.empty());
    if (c.kind() == k) {
      for (const Bunch& gc : c.children()) flat.push_back(gc);
    } else {
      flat.push_back(std::move(c));
    }
  }
  assert(!flat.empty());
  if (flat.size() == 1) return flat[0];
  return Bunch(bunch_node(k, {}, std::move(flat)));
}

Bunch Bunch::add(std::vector<Bunch> children) { return make_node(BunchKind::Add, std::move(children)); }
Bunch Bunch::mul(std::vector<Bunch> children) { return make_node(BunchKind::Mul, std::move(children)); }
Bunch Bunch::make(BunchKind former, std::vector<Bunch> children) {
  return make_node(former, std::move(children));
}

BunchKind Bunch::kind() const { return node_->kind; }
bool Bunch::is_basic() const {
  return node_->kind == BunchKind::Leaf || node_->kind == BunchKind::UnitPlus ||
         node_->kind == BunchKind::UnitTimes;
}
bool Bunch::is_unit() const {
  return node_->kind == BunchKind::UnitPlus || node_->kind == BunchKind::UnitTimes;
}
const Formula& Bunch::formula() const {
  assert(node_->kind == BunchKind::Leaf);
  return node_->formula;
}
const std::vector<Bunch>& Bunch::children() const {
  static const std::vector<Bunch> none;
  return is_basic() ? none : node_->children;
}
std::size_t Bunch::arity() const { return children().size(); }
std::size_t Bunch::hash() const { return node_->hash; }

bool Bunch::operator==(const Bunch& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  if (node_->hash != o.node_->hash) return false;
  return compare(*this, o) == 0;
}

int compare(const Bunch& a, const Bunch& b) {
  if (a.kind() != b.kind())
    return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case BunchKind::UnitPlus:
    case BunchKind::UnitTimes:
      return 0;
    case BunchKind::Leaf:
      return compare(a.formula(), b.formula());
    default: {
      const auto& ca = a.children();
      const auto& cb = b.children();
      for (std::size_t i = 0; i < ca.size() && i < cb.size(); ++i) {
        int c = compare(ca[i], cb[i]);
        if (c != 0) return c;
      }
      if (ca.size() != cb.size()) return ca.size() < cb.size() ? -1 : 1;
      return 0;
    }
  }
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok {
  Atom, Top, Bot, One, UnitPlus, UnitTimes,
  LParen, RParen, And, Or, Imp, Star, Wand, Semi, Comma, Turnstile, End
};

struct Token {
  Tok tok;
  std::string text;
  std::size_t pos;
};

struct Lexer {
  const std::string& s;
  std::size_t i = 0;
  std::vector<Token> out;

  explicit Lexer(const std::string& str) : s(str) {}

  [[noreturn]] void fail(const std::string& msg, std::size_t pos) {
    throw ParseError(msg, pos);
  }

  void run() {
    while (i < s.size()) {
      char c = s[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') { ++i; continue; }
      std::size_t at = i;
      if (c == '(') { out.push_back({Tok::LParen, "(", at}); ++i; continue; }
      if (c == ')') { out.push_back({Tok::RParen, ")", at}); ++i; continue; }
      if (c == ';') { out.push_back({Tok::Semi, ";", at}); ++i; continue; }
      if (c == ',') { out.push_back({Tok::Comma, ",", at}); ++i; continue; }
      if (c == '*') { out.push_back({Tok::Star, "*", at}); ++i; continue; }
      if (c == '/') {
        if (i + 1 < s.size() && s[i + 1] == '\\') { out.push_back({Tok::And, "/\\", at}); i += 2; continue; }
        fail("expected '/\\'", at);
      }
      if (c == '\\') {
        if (i + 1 < s.size() && s[i + 1] == '/') { out.push_back({Tok::Or, "\\/", at}); i += 2; continue; }
        fail("expected '\\/'", at);
      }
      if (c == '-') {
        if (i + 1 < s.size() && s[i + 1] == '>') { out.push_back({Tok::Imp, "->", at}); i += 2; continue; }
        if (i + 1 < s.size() && s[i + 1] == '*') { out.push_back({Tok::Wand, "-*", at}); i += 2; continue; }
        fail("expected '->' or '-*'", at);
      }
      if (c == '|') {
        if (i + 1 < s.size() && s[i + 1] == '-') { out.push_back({Tok::Turnstile, "|-", at}); i += 2; continue; }
        fail("expected '|-'", at);
      }
      if (c == 'I') { out.push_back({Tok::One, "I", at}); ++i; continue; }
      if (c >= 'a' && c <= 'z') {
        std::size_t j = i + 1;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
        std::string word = s.substr(i, j - i);
        if (word == "o" && j < s.size() && s[j] == '+') {
          out.push_back({Tok::UnitPlus, "o+", at});
          i = j + 1;
          continue;
        }
        i = j;
        if (word == "top") { out.push_back({Tok::Top, word, at}); continue; }
        if (word == "bot") { out.push_back({Tok::Bot, word, at}); continue; }
        if (word == "ox") { out.push_back({Tok::UnitTimes, word, at}); continue; }
        out.push_back({Tok::Atom, word, at});
        continue;
      }
      fail("unexpected character '" + std::string(1, c) + "'", at);
    }
    out.push_back({Tok::End, "", s.size()});
  }
};

// Recursive-descent parser with backtracking for the leaf-vs-parenthesized-bunch
// ambiguity. Precedence: { /\ , * } > { \/ } > { -> , -* }, all right-associative.
struct Parser {
  std::vector<Token> toks;
  std::size_t p = 0;

  const Token& cur() const { return toks[p]; }
  bool at(Tok t) const { return cur().tok == t; }
  Token eat() { return toks[p++]; }
  void expect(Tok t, const char* what) {
    if (!at(t)) throw ParseError(std::string("expected ") + what, cur().pos);
    ++p;
  }

  Formula formula() {
    Formula l = f_or();
    if (at(Tok::Imp)) { eat(); return Formula::imp(std::move(l), formula()); }
    if (at(Tok::Wand)) { eat(); return Formula::wand(std::move(l), formula()); }
    return l;
  }
  Formula f_or() {
    Formula l = f_and();
    if (at(Tok::Or)) { eat(); return Formula::disj(std::move(l), f_or()); }
    return l;
  }
  Formula f_and() {
    Formula l = f_unit();
    if (at(Tok::And)) { eat(); return Formula::conj(std::move(l), f_and()); }
    if (at(Tok::Star)) { eat(); return Formula::star(std::move(l), f_and()); }
    return l;
  }
  Formula f_unit() {
    switch (cur().tok) {
      case Tok::Atom: return Formula::atom(eat().text);
      case Tok::Top: eat(); return Formula::top();
      case Tok::Bot: eat(); return Formula::bot();
      case Tok::One: eat(); return Formula::one();
      case Tok::LParen: {
        eat();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      default:
        throw ParseError("expected formula", cur().pos);
    }
  }

  // element := o+ | ox | formula | '(' bunch ')'
  Bunch element() {
    if (at(Tok::UnitPlus)) { eat(); return Bunch::unit_plus(); }
    if (at(Tok::UnitTimes)) { eat(); return Bunch::unit_times(); }
    std::size_t save = p;
    try {
      return Bunch::leaf(formula());
    } catch (const ParseError&) {
      p = save;
    }
    expect(Tok::LParen, "'('");
    Bunch b = bunch();
    expect(Tok::RParen, "')'");
    return b;
  }

  Bunch bunch() {
    Bunch first = element();
    if (!at(Tok::Semi) && !at(Tok::Comma)) return first;
    Tok former = cur().tok;
    std::vector<Bunch> children{std::move(first)};
    while (at(former)) {
      eat();
      children.push_back(element());
    }
    if (at(Tok::Semi) || at(Tok::Comma))
      throw ParseError("mixed ';' and ',' need parentheses", cur().pos);
    return former == Tok::Semi ? Bunch::add(std::move(children))
                               : Bunch::mul(std::move(children));
  }

  Sequent sequent() {
    Bunch ctx = bunch();
    expect(Tok::Turnstile, "'|-'");
    Formula g = formula();
    return Sequent{std::move(ctx), std::move(g)};
  }

  void done() {
    if (!at(Tok::End)) throw ParseError("trailing input", cur().pos);
  }
};

Parser make_parser(const std::string& text) {
  Lexer lex(text);
  lex.run();
  Parser p;
  p.toks = std::move(lex.out);
  return p;
}

}  // namespace

Formula parse_formula(const std::string& text) {
  Parser p = make_parser(text);
  Formula f = p.formula();
  p.done();
  return f;
}

Bunch parse_bunch(const std::string& text) {
  Parser p = make_parser(text);
  Bunch b = p.bunch();
  p.done();
  return b;
}

Sequent parse_sequent(const std::string& text) {
  Parser p = make_parser(text);
  Sequent s = p.sequent();
  p.done();
  return s;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

int prec(FormulaKind k) {
  switch (k) {
    case FormulaKind::And:
    case FormulaKind::Star:
      return 3;
    case FormulaKind::Or:
      return 2;
    case FormulaKind::Imp:
    case FormulaKind::Wand:
      return 1;
    default:
      return 4;
  }
}

void render_formula(const Formula& f, int parent_prec, bool left_child, std::string& out) {
  int pr = prec(f.kind());
  bool parens = f.is_binary() && (pr < parent_prec || (pr == parent_prec && left_child));
  if (parens) out += '(';
  switch (f.kind()) {
    case FormulaKind::Atom: out += f.atom_name(); break;
    case FormulaKind::Top: out += "top"; break;
    case FormulaKind::Bot: out += "bot"; break;
    case FormulaKind::One: out += "I"; break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imp:
    case FormulaKind::Star:
    case FormulaKind::Wand: {
      const char* op = f.kind() == FormulaKind::And    ? " /\\ "
                       : f.kind() == FormulaKind::Or   ? " \\/ "
                       : f.kind() == FormulaKind::Imp  ? " -> "
                       : f.kind() == FormulaKind::Star ? " * "
                                                       : " -* ";
      render_formula(f.left(), pr, true, out);
      out += op;
      render_formula(f.right(), pr, false, out);
      break;
    }
  }
  if (parens) out += ')';
}

void render_bunch(const Bunch& g, std::string& out) {
  switch (g.kind()) {
    case BunchKind::UnitPlus: out += "o+"; break;
    case BunchKind::UnitTimes: out += "ox"; break;
    case BunchKind::Leaf: render_formula(g.formula(), 0, false, out); break;
    case BunchKind::Add:
    case BunchKind::Mul: {
      const char* sep = g.kind() == BunchKind::Add ? " ; " : " , ";
      bool first = true;
      for (const Bunch& c : g.children()) {
        if (!first) out += sep;
        first = false;
        if (c.is_complex()) {
          out += '(';
          render_bunch(c, out);
          out += ')';
        } else {
          render_bunch(c, out);
        }
      }
      break;
    }
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_formula(f, 0, false, out);
  return out;
}

std::string render(const Bunch& g) {
  std::string out;
  render_bunch(g, out);
  return out;
}

std::string render(const Sequent& s) {
  return render(s.context) + " |- " + render(s.goal);
}

// ---------------------------------------------------------------------------
// Navigation and surgery

bool valid_path(const Bunch& g, const Path& p) {
  const Bunch* cur = &g;
  for (int idx : p) {
    if (cur->is_basic()) return false;
    if (idx < 0 || static_cast<std::size_t>(idx) >= cur->arity()) return false;
    cur = &cur->children()[idx];
  }
  return true;
}

Bunch sub_at(const Bunch& g, const Path& p) {
  const Bunch* cur = &g;
  for (int idx : p) {
    if (cur->is_basic() || idx < 0 || static_cast<std::size_t>(idx) >= cur->arity())
      throw std::out_of_range("invalid path");
    cur = &cur->children()[idx];
  }
  return *cur;
}

Bunch sub_at(const Bunch& g, const Loc& loc) {
  Bunch node = sub_at(g, loc.node);
  if (!loc.is_group()) return node;
  if (node.is_basic()) throw std::out_of_range("group at basic node");
  std::vector<Bunch> picked;
  for (int i : loc.members) {
    if (i < 0 || static_cast<std::size_t>(i) >= node.arity())
      throw std::out_of_range("invalid group member");
    picked.push_back(node.children()[i]);
  }
  if (picked.size() == 1) return picked[0];
  return Bunch::make(node.kind(), std::move(picked));
}

std::vector<std::pair<Path, Bunch>> subbunches(const Bunch& g) {
  std::vector<std::pair<Path, Bunch>> out;
  Path p;
  auto walk = [&](auto&& self, const Bunch& b) -> void {
    out.emplace_back(p, b);
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

std::vector<std::pair<Loc, Bunch>> subbunch_groups(const Bunch& g) {
  std::vector<std::pair<Loc, Bunch>> out;
  for (auto& [path, node] : subbunches(g)) {
    if (node.is_basic()) continue;
    std::size_t k = node.arity();
    // all subsets of size >= 2 (full set included: it denotes the node itself)
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      if (std::popcount(mask) < 2) continue;
      std::vector<int> members;
      std::vector<Bunch> picked;
      for (std::size_t i = 0; i < k; ++i) {
        if (mask & (1u << i)) {
          members.push_back(static_cast<int>(i));
          picked.push_back(node.children()[i]);
        }
      }
      out.push_back({Loc{path, std::move(members)}, Bunch::make(node.kind(), std::move(picked))});
    }
  }
  return out;
}

static Bunch replace_at_path(const Bunch& g, const Path& p, std::size_t depth, const Bunch& with) {
  if (depth == p.size()) return with;
  if (g.is_basic()) throw std::out_of_range("invalid path");
  int idx = p[depth];
  if (idx < 0 || static_cast<std::size_t>(idx) >= g.arity())
    throw std::out_of_range("invalid path");
  std::vector<Bunch> kids = g.children();
  kids[idx] = replace_at_path(kids[idx], p, depth + 1, with);
  return Bunch::make(g.kind(), std::move(kids));
}

static Bunch rebuild_group(const Bunch& node, const std::vector<int>& members, const Bunch& with) {
  std::vector<Bunch> kids;
  for (std::size_t i = 0; i < node.arity(); ++i) {
    if (std::find(members.begin(), members.end(), static_cast<int>(i)) == members.end())
      kids.push_back(node.children()[i]);
  }
  kids.push_back(with);
  if (kids.size() == 1) return kids[0];
  return Bunch::make(node.kind(), std::move(kids));
}

Bunch replace(const Bunch& g, const Loc& loc, const Bunch& with) {
  if (!loc.is_group()) return replace_at_path(g, loc.node, 0, with);
  Bunch node = sub_at(g, loc.node);
  if (node.is_basic()) throw std::out_of_range("group at basic node");
  Bunch rebuilt = rebuild_group(node, loc.members, with);
  return replace_at_path(g, loc.node, 0, rebuilt);
}

Bunch remove_children(const Bunch& g, const Path& node_path, const std::vector<int>& members) {
  Bunch node = sub_at(g, node_path);
  if (node.is_basic()) throw std::out_of_range("remove at basic node");
  if (members.size() >= node.arity()) throw std::out_of_range("cannot remove all children");
  std::vector<Bunch> kids;
  for (std::size_t i = 0; i < node.arity(); ++i) {
    if (std::find(members.begin(), members.end(), static_cast<int>(i)) == members.end())
      kids.push_back(node.children()[i]);
  }
  Bunch rebuilt = kids.size() == 1 ? kids[0] : Bunch::make(node.kind(), std::move(kids));
  return replace_at_path(g, node_path, 0, rebuilt);
}

// ---------------------------------------------------------------------------
// Canonical forms and equivalences

Bunch canonicalize(const Bunch& g) {
  if (g.is_basic()) return g;
  std::vector<Bunch> kids;
  kids.reserve(g.arity());
  for (const Bunch& c : g.children()) kids.push_back(canonicalize(c));
  std::sort(kids.begin(), kids.end(),
            [](const Bunch& a, const Bunch& b) { return compare(a, b) < 0; });
  return Bunch::make(g.kind(), std::move(kids));
}

bool permutes(const Bunch& a, const Bunch& b) {
  return canonicalize(a) == canonicalize(b);
}

Bunch erase_units(const Bunch& g) {
  if (g.is_basic()) return g;
  BunchKind removable =
      g.kind() == BunchKind::Add ? BunchKind::UnitPlus : BunchKind::UnitTimes;
  std::vector<Bunch> kids;
  for (const Bunch& c : g.children()) {
    Bunch e = erase_units(c);
    if (e.kind() == removable) continue;
    kids.push_back(std::move(e));
  }
  if (kids.empty())
    return removable == BunchKind::UnitPlus ? Bunch::unit_plus() : Bunch::unit_times();
  if (kids.size() == 1) return kids[0];
  return Bunch::make(g.kind(), std::move(kids));
}

bool coherent_equal(const Bunch& a, const Bunch& b) {
  return canonicalize(erase_units(a)) == canonicalize(erase_units(b));
}

Sequent canonicalize(const Sequent& s) { return Sequent{canonicalize(s.context), s.goal}; }
bool permutes(const Sequent& a, const Sequent& b) {
  return a.goal == b.goal && permutes(a.context, b.context);
}
bool coherent_equal(const Sequent& a, const Sequent& b) {
  return a.goal == b.goal && coherent_equal(a.context, b.context);
}

std::size_t hash_value(const Sequent& s) {
  return mix(s.context.hash(), s.goal.hash());
}

}  // namespace bi
