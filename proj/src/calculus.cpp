#include "bi/calculus.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <memory>

#include "bi/rewriting.hpp"
#include "json.hpp"

namespace bi {

// ---------------------------------------------------------------------------
// Rule tables

int rule_arity(RuleId r) {
  switch (r) {
    case RuleId::Id:
    case RuleId::BotL:
    case RuleId::BotLPrime:
    case RuleId::TopR:
    case RuleId::OneR:
    case RuleId::Hypothesis:
      return 0;
    case RuleId::OneL:
    case RuleId::TopL:
    case RuleId::AndL:
    case RuleId::OrR1:
    case RuleId::OrR2:
    case RuleId::ImpR:
    case RuleId::WandR:
    case RuleId::StarL:
    case RuleId::E:
    case RuleId::W:
    case RuleId::C:
    case RuleId::EPrime:
    case RuleId::WPrime:
    case RuleId::WUnitPlus:
    case RuleId::WUnitTimes:
    case RuleId::CPrime:
    case RuleId::CUnitTimes:
    case RuleId::CUnitPlus:
    case RuleId::Inst:
    case RuleId::Rad:
      return 1;
    default:
      return 2;
  }
}

bool is_axiom(RuleId r) {
  return r == RuleId::Id || r == RuleId::BotL || r == RuleId::BotLPrime ||
         r == RuleId::TopR || r == RuleId::OneR;
}

bool is_structural(RuleId r) {
  switch (r) {
    case RuleId::E:
    case RuleId::W:
    case RuleId::C:
    case RuleId::EPrime:
    case RuleId::WPrime:
    case RuleId::WUnitPlus:
    case RuleId::WUnitTimes:
    case RuleId::CPrime:
    case RuleId::CUnitTimes:
    case RuleId::CUnitPlus:
    case RuleId::Inst:
    case RuleId::Rad:
      return true;
    default:
      return false;
  }
}

bool is_logical(RuleId r) {
  return !is_axiom(r) && !is_structural(r) && r != RuleId::Hypothesis;
}

bool system_has(System sys, RuleId r) {
  if (r == RuleId::Hypothesis) return true;
  const bool logical_core = is_logical(r) || r == RuleId::Id || r == RuleId::TopR || r == RuleId::OneR;
  switch (r) {
    // shared operational rules and the id/unit axioms; variants handled below
    case RuleId::WandL1: case RuleId::WandL2: case RuleId::WandL3:
    case RuleId::StarR1: case RuleId::StarR2:
    case RuleId::ImpL1: case RuleId::ImpL2: case RuleId::ImpL3:
    case RuleId::AndR1: case RuleId::AndR2:
    case RuleId::Inst:
      return sys == System::DLBI || sys == System::DLBIRad || sys == System::SLBIPlus;
    case RuleId::Rad:
      return sys == System::DLBIRad || sys == System::SLBIPlus;
    case RuleId::BotL:
      return sys == System::LBI;
    case RuleId::BotLPrime:
      return sys != System::LBI;
    case RuleId::E:
    case RuleId::W:
    case RuleId::C:
      return sys == System::LBI;
    case RuleId::EPrime:
    case RuleId::WPrime:
    case RuleId::CPrime:
    case RuleId::WUnitPlus:
    case RuleId::WUnitTimes:
      // dLBI keeps the unit weakenings: they only shrink sequents in the
      // reductive reading, and the Appendix C rad tables rely on Wox
      return sys != System::LBI;
    case RuleId::CUnitTimes:
    case RuleId::CUnitPlus:
      return sys == System::SLBI || sys == System::SLBIPlus;
    default:
      return logical_core;
  }
}

std::string rule_name(RuleId r) {
  switch (r) {
    case RuleId::Id: return "Id";
    case RuleId::BotL: return "BotL";
    case RuleId::BotLPrime: return "BotL'";
    case RuleId::TopR: return "TopR";
    case RuleId::OneR: return "OneR";
    case RuleId::OneL: return "OneL";
    case RuleId::TopL: return "TopL";
    case RuleId::AndL: return "AndL";
    case RuleId::OrR1: return "OrR1";
    case RuleId::OrR2: return "OrR2";
    case RuleId::ImpR: return "ImpR";
    case RuleId::WandR: return "WandR";
    case RuleId::StarL: return "StarL";
    case RuleId::AndR: return "AndR";
    case RuleId::OrL: return "OrL";
    case RuleId::ImpL: return "ImpL";
    case RuleId::StarR: return "StarR";
    case RuleId::WandL: return "WandL";
    case RuleId::E: return "E";
    case RuleId::W: return "W";
    case RuleId::C: return "C";
    case RuleId::EPrime: return "E'";
    case RuleId::WPrime: return "W'";
    case RuleId::WUnitPlus: return "Wo+";
    case RuleId::WUnitTimes: return "Wox";
    case RuleId::CPrime: return "C'";
    case RuleId::CUnitTimes: return "Cox";
    case RuleId::CUnitPlus: return "Co+";
    case RuleId::WandL1: return "WandL1";
    case RuleId::WandL2: return "WandL2";
    case RuleId::WandL3: return "WandL3";
    case RuleId::StarR1: return "StarR1";
    case RuleId::StarR2: return "StarR2";
    case RuleId::ImpL1: return "ImpL1";
    case RuleId::ImpL2: return "ImpL2";
    case RuleId::ImpL3: return "ImpL3";
    case RuleId::AndR1: return "AndR1";
    case RuleId::AndR2: return "AndR2";
    case RuleId::Inst: return "Inst";
    case RuleId::Rad: return "Rad";
    case RuleId::Hypothesis: return "Hyp";
  }
  return "?";
}

std::optional<RuleId> rule_from_name(const std::string& name) {
  static const std::map<std::string, RuleId> table = [] {
    std::map<std::string, RuleId> t;
    for (int i = 0; i <= static_cast<int>(RuleId::Hypothesis); ++i) {
      RuleId r = static_cast<RuleId>(i);
      t[rule_name(r)] = r;
    }
    return t;
  }();
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::optional<System> system_from_name(const std::string& name) {
  if (name == "lbi") return System::LBI;
  if (name == "slbi") return System::SLBI;
  if (name == "dlbi") return System::DLBI;
  if (name == "dlbi-rad") return System::DLBIRad;
  if (name == "slbi+") return System::SLBIPlus;
  return std::nullopt;
}

std::string system_name(System sys) {
  switch (sys) {
    case System::LBI: return "lbi";
    case System::SLBI: return "slbi";
    case System::DLBI: return "dlbi";
    case System::DLBIRad: return "dlbi-rad";
    case System::SLBIPlus: return "slbi+";
  }
  return "?";
}

std::size_t derivation_size(const Derivation& d) {
  std::size_t n = 1;
  for (const Derivation& c : d.children) n += derivation_size(c);
  return n;
}

int measure_derivation(const Derivation& d, Measure m) {
  int v = measure(d.sequent, m);
  for (const Derivation& c : d.children) v = std::max(v, measure_derivation(c, m));
  return v;
}

void for_each_node(const Derivation& d, const std::function<void(const Derivation&)>& f) {
  f(d);
  for (const Derivation& c : d.children) for_each_node(c, f);
}

// ---------------------------------------------------------------------------
// Backward reading

namespace {

Bunch group_bunch(const Bunch& node, const std::vector<int>& members) {
  if (members.size() == 1) return node.children()[members[0]];
  std::vector<Bunch> picked;
  for (int i : members) picked.push_back(node.children()[i]);
  return Bunch::make(node.kind(), std::move(picked));
}

// Attach `extra` as a sibling of the occurrence at `p` under `former`:
// Gamma(X) becomes Gamma(X former extra), flattened.
struct Attached {
  Bunch result;
  Loc occurrence;
  Path extra;
};

Attached attach_sibling(const Bunch& g, const Path& p, BunchKind former, const Bunch& extra) {
  Bunch x = sub_at(g, p);
  Attached out;
  if (x.kind() == former) {
    int k = static_cast<int>(x.arity());
    out.result = replace(g, Loc{p, {}}, Bunch::make(former, {x, extra}));
    std::vector<int> members(k);
    for (int i = 0; i < k; ++i) members[i] = i;
    out.occurrence = Loc{p, members};
    Path e = p;
    e.push_back(k);
    out.extra = e;
    return out;
  }
  if (!p.empty()) {
    Path pp(p.begin(), p.end() - 1);
    Bunch parent = sub_at(g, pp);
    if (parent.kind() == former) {
      out.result = replace(g, Loc{p, {}}, Bunch::make(former, {x, extra}));
      out.occurrence = Loc{p, {}};
      Path e = pp;
      e.push_back(p.back() + 1);
      out.extra = e;
      return out;
    }
  }
  out.result = replace(g, Loc{p, {}}, Bunch::make(former, {x, extra}));
  Path a = p, e = p;
  a.push_back(0);
  e.push_back(1);
  out.occurrence = Loc{a, {}};
  out.extra = e;
  return out;
}

// Replace the leaf at `p` by the pair `former[a, b]`, tracking both positions.
struct PairPos {
  Bunch result;
  Path first, second;
};

PairPos replace_by_pair(const Bunch& g, const Path& p, BunchKind former, const Bunch& a,
                        const Bunch& b) {
  PairPos out;
  out.result = replace(g, Loc{p, {}}, Bunch::make(former, {a, b}));
  if (!p.empty()) {
    Path pp(p.begin(), p.end() - 1);
    if (sub_at(g, pp).kind() == former) {
      out.first = p;
      out.second = pp;
      out.second.push_back(p.back() + 1);
      return out;
    }
  }
  out.first = p;
  out.first.push_back(0);
  out.second = p;
  out.second.push_back(1);
  return out;
}

using Out = std::vector<BackwardInstance>;

void emit(Out& out, RuleId r, std::vector<Loc> active, std::vector<Sequent> premises,
          std::vector<std::vector<Loc>> premise_active, std::optional<Bunch> sigma = {}) {
  BackwardInstance bi;
  bi.inst.rule = r;
  bi.inst.sigma = std::move(sigma);
  bi.inst.active = std::move(active);
  bi.premises = std::move(premises);
  bi.premise_active = std::move(premise_active);
  out.push_back(std::move(bi));
}

std::vector<Path> leaf_occurrences(const Bunch& g, FormulaKind k) {
  std::vector<Path> out;
  for (auto& [p, b] : subbunches(g))
    if (b.kind() == BunchKind::Leaf && b.formula().kind() == k) out.push_back(p);
  return out;
}

void gen_axioms(RuleId r, const Sequent& s, Out& out) {
  const Bunch& g = s.context;
  switch (r) {
    case RuleId::Id:
      if (g.kind() == BunchKind::Leaf && g.formula() == s.goal)
        emit(out, r, {}, {}, {});
      break;
    case RuleId::TopR:
      if (g.kind() == BunchKind::UnitPlus && s.goal.kind() == FormulaKind::Top)
        emit(out, r, {}, {}, {});
      break;
    case RuleId::OneR:
      if (g.kind() == BunchKind::UnitTimes && s.goal.kind() == FormulaKind::One)
        emit(out, r, {}, {}, {});
      break;
    case RuleId::BotL:
      for (const Path& p : leaf_occurrences(g, FormulaKind::Bot))
        emit(out, r, {Loc{p, {}}}, {}, {});
      break;
    case RuleId::BotLPrime:
      if (is_normal(g))
        for (const Path& p : leaf_occurrences(g, FormulaKind::Bot))
          emit(out, r, {Loc{p, {}}}, {}, {});
      break;
    default:
      break;
  }
}

void gen_unit_left(RuleId r, FormulaKind conn, const Bunch& unit, const Sequent& s, Out& out) {
  for (const Path& p : leaf_occurrences(s.context, conn)) {
    Sequent prem{replace(s.context, Loc{p, {}}, unit), s.goal};
    emit(out, r, {Loc{p, {}}}, {prem}, {{Loc{p, {}}}});
  }
}

void gen_split_left(RuleId r, FormulaKind conn, BunchKind former, const Sequent& s, Out& out) {
  for (const Path& p : leaf_occurrences(s.context, conn)) {
    Formula f = sub_at(s.context, p).formula();
    PairPos pos = replace_by_pair(s.context, p, former, Bunch::leaf(f.left()),
                                  Bunch::leaf(f.right()));
    Sequent prem{pos.result, s.goal};
    emit(out, r, {Loc{p, {}}}, {prem}, {{Loc{pos.first, {}}, Loc{pos.second, {}}}});
  }
}

void gen_or_right(RuleId r, const Sequent& s, Out& out) {
  if (s.goal.kind() != FormulaKind::Or) return;
  Formula side = r == RuleId::OrR1 ? s.goal.left() : s.goal.right();
  emit(out, r, {}, {Sequent{s.context, side}}, {{}});
}

void gen_arrow_right(RuleId r, FormulaKind conn, BunchKind former, const Sequent& s, Out& out) {
  if (s.goal.kind() != conn) return;
  Bunch added = Bunch::leaf(s.goal.left());
  Bunch ctx = Bunch::make(former, {s.context, added});
  Path loc;
  loc.push_back(static_cast<int>(ctx.arity()) - 1);
  emit(out, r, {}, {Sequent{ctx, s.goal.right()}}, {{Loc{loc, {}}}});
}

void gen_or_left(const Sequent& s, Out& out) {
  for (const Path& p : leaf_occurrences(s.context, FormulaKind::Or)) {
    Formula f = sub_at(s.context, p).formula();
    Sequent p1{replace(s.context, Loc{p, {}}, Bunch::leaf(f.left())), s.goal};
    Sequent p2{replace(s.context, Loc{p, {}}, Bunch::leaf(f.right())), s.goal};
    emit(out, RuleId::OrL, {Loc{p, {}}}, {p1, p2}, {{Loc{p, {}}}, {Loc{p, {}}}});
  }
}

constexpr std::size_t kMaxSplitChildren = 14;

// AndR / StarR and their unit variants.
void gen_right_binary(RuleId plain, RuleId v1, RuleId v2, FormulaKind conn, BunchKind former,
                      const Bunch& unit, RuleId which, const Sequent& s, Out& out) {
  if (s.goal.kind() != conn) return;
  Formula phi = s.goal.left(), psi = s.goal.right();
  const Bunch& g = s.context;
  if (which == plain && g.kind() == former && g.arity() <= kMaxSplitChildren) {
    std::size_t k = g.arity();
    for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
      std::vector<int> left, right;
      for (std::size_t i = 0; i < k; ++i)
        (mask & (1u << i) ? left : right).push_back(static_cast<int>(i));
      Sequent p1{group_bunch(g, left), phi};
      Sequent p2{group_bunch(g, right), psi};
      emit(out, plain, {Loc{{}, left}, Loc{{}, right}}, {p1, p2}, {{Loc{{}, {}}}, {Loc{{}, {}}}});
    }
  }
  if (which == v1)
    emit(out, v1, {Loc{{}, {}}}, {Sequent{unit, phi}, Sequent{g, psi}},
         {{Loc{{}, {}}}, {Loc{{}, {}}}});
  if (which == v2)
    emit(out, v2, {Loc{{}, {}}}, {Sequent{g, phi}, Sequent{unit, psi}},
         {{Loc{{}, {}}}, {Loc{{}, {}}}});
}

// ImpL / WandL and their unit variants. The resolved formula occurrence must
// sit under `former` for the plain rule and v1/v2.
void gen_left_binary(RuleId plain, RuleId v1, RuleId v2, RuleId v3, FormulaKind conn,
                     BunchKind former, const Bunch& unit, RuleId which, const Sequent& s,
                     Out& out) {
  const Bunch& g = s.context;
  for (const Path& p : leaf_occurrences(g, conn)) {
    Formula f = sub_at(g, p).formula();
    Formula phi = f.left(), psi = f.right();
    bool has_parent = !p.empty();
    Path pp;
    if (has_parent) pp.assign(p.begin(), p.end() - 1);
    Bunch parent = has_parent ? sub_at(g, pp) : Bunch();
    bool in_former = has_parent && parent.kind() == former;

    if (in_former && parent.arity() <= kMaxSplitChildren) {
      int i = p.back();
      std::vector<int> siblings;
      for (std::size_t j = 0; j < parent.arity(); ++j)
        if (static_cast<int>(j) != i) siblings.push_back(static_cast<int>(j));
      std::size_t ns = siblings.size();

      auto rebuild = [&](const std::vector<int>& dropped, bool with_unit) {
        // children of `parent` except dropped, the resolved leaf replaced by
        // psi (prefixed by the unit for the v1 form); returns premise context
        // plus premise-side locations of the kept siblings, psi, and the unit
        std::vector<Bunch> kids;
        std::vector<Loc> locs;
        Path psi_loc, unit_loc;
        std::vector<int> kept;
        for (std::size_t j = 0; j < parent.arity(); ++j) {
          int jj = static_cast<int>(j);
          if (std::find(dropped.begin(), dropped.end(), jj) != dropped.end()) continue;
          if (jj == i) {
            if (with_unit) {
              unit_loc = pp;
              unit_loc.push_back(static_cast<int>(kids.size()));
              kids.push_back(unit);
            }
            psi_loc = pp;
            psi_loc.push_back(static_cast<int>(kids.size()));
            kids.push_back(Bunch::leaf(psi));
          } else {
            kept.push_back(static_cast<int>(kids.size()));
            kids.push_back(parent.children()[j]);
          }
        }
        Bunch new_parent = kids.size() == 1 ? kids[0] : Bunch::make(former, kids);
        Bunch ctx = replace(g, Loc{pp, {}}, new_parent);
        // locations only meaningful when the node survives
        if (kids.size() >= 2) {
          for (int idx : kept) {
            Path q = pp;
            q.push_back(idx);
            locs.push_back(Loc{q, {}});
          }
          locs.push_back(Loc{psi_loc, {}});
          if (with_unit) locs.push_back(Loc{unit_loc, {}});
        } else {
          locs.push_back(Loc{pp, {}});
        }
        return std::make_pair(Sequent{ctx, s.goal}, locs);
      };

      auto kept_of = [&](const std::vector<int>& d) {
        std::vector<int> kept;
        for (int s2 : siblings)
          if (std::find(d.begin(), d.end(), s2) == d.end()) kept.push_back(s2);
        return kept;
      };

      // plain: premise1 = D |- phi, premise2 keeps the rest (Delta') by psi;
      // Delta, Delta', and the resolved formula are all active on both sides
      if (which == plain) {
        for (unsigned mask = 1; mask < (1u << ns); ++mask) {
          if (mask == (1u << ns) - 1) continue;  // Delta' must remain
          std::vector<int> d;
          for (std::size_t t = 0; t < ns; ++t)
            if (mask & (1u << t)) d.push_back(siblings[t]);
          auto [prem2, locs2] = rebuild(d, false);
          Sequent prem1{group_bunch(parent, d), phi};
          std::vector<Loc> concl_active{Loc{p, {}}, Loc{pp, d}, Loc{pp, kept_of(d)}};
          emit(out, plain, std::move(concl_active), {prem1, prem2},
               {{Loc{{}, {}}}, locs2});
        }
      }
      // v1: premise1 = D |- phi with D possibly the whole sibling set;
      // premise2 carries the unit next to psi
      if (which == v1) {
        for (unsigned mask = 1; mask < (1u << ns); ++mask) {
          std::vector<int> d;
          for (std::size_t t = 0; t < ns; ++t)
            if (mask & (1u << t)) d.push_back(siblings[t]);
          auto [prem2, locs2] = rebuild(d, true);
          Sequent prem1{group_bunch(parent, d), phi};
          emit(out, v1, {Loc{p, {}}, Loc{pp, d}}, {prem1, prem2}, {{Loc{{}, {}}}, locs2});
        }
      }
      // v2: premise1 = unit |- phi, everything stays next to psi
      if (which == v2 && ns >= 1) {
        auto [prem2, locs2] = rebuild({}, false);
        Sequent prem1{unit, phi};
        emit(out, v2, {Loc{p, {}}, Loc{pp, siblings}}, {prem1, prem2},
             {{Loc{{}, {}}}, locs2});
      }
    }

    // v3: any occurrence; both sides take the unit
    if (which == v3) {
      PairPos pos = replace_by_pair(g, p, former, unit, Bunch::leaf(psi));
      Sequent prem2{pos.result, s.goal};
      Sequent prem1{unit, phi};
      emit(out, v3, {Loc{p, {}}}, {prem1, prem2},
           {{Loc{{}, {}}}, {Loc{pos.first, {}}, Loc{pos.second, {}}}});
    }
  }
}

std::vector<Loc> all_single_and_group_locs(const Bunch& g) {
  std::vector<Loc> locs;
  for (auto& [p, b] : subbunches(g)) {
    (void)b;
    locs.push_back(Loc{p, {}});
  }
  for (auto& [loc, b] : subbunch_groups(g)) {
    (void)b;
    if (loc.members.size() == sub_at(g, loc.node).arity()) continue;  // node itself
    locs.push_back(loc);
  }
  return locs;
}

// Premise-side locations of the two copies produced by duplicating `loc`.
struct Duplicated {
  Bunch result;
  Loc first, second;
};

std::vector<int> index_range(int from, int count) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = from + i;
  return v;
}

Duplicated duplicate_additively(const Bunch& g, const Loc& loc) {
  Bunch x = sub_at(g, loc);
  Duplicated out;
  out.result = replace(g, loc, Bunch::make(BunchKind::Add, {x, x}));
  if (loc.is_group()) {
    Bunch node = sub_at(g, loc.node);
    int kept = static_cast<int>(node.arity() - loc.members.size());
    int span = static_cast<int>(loc.members.size());
    if (node.kind() == BunchKind::Add) {
      // copies flatten into the node after the kept children
      out.first = Loc{loc.node, index_range(kept, span)};
      out.second = Loc{loc.node, index_range(kept + span, span)};
    } else {
      // the Add pair sits as one new child of the Mul node
      Path pair = loc.node;
      pair.push_back(kept);
      Path a = pair, b = pair;
      a.push_back(0);
      b.push_back(1);
      out.first = Loc{a, {}};
      out.second = Loc{b, {}};
    }
    return out;
  }
  const Path& p = loc.node;
  if (!p.empty()) {
    Path pp(p.begin(), p.end() - 1);
    if (sub_at(g, pp).kind() == BunchKind::Add) {
      // x is a non-Add child; the pair flattens next to it
      Path a = p, b = pp;
      b.push_back(p.back() + 1);
      out.first = Loc{a, {}};
      out.second = Loc{b, {}};
      return out;
    }
  }
  if (x.kind() == BunchKind::Add) {
    int k = static_cast<int>(x.arity());
    out.first = Loc{p, index_range(0, k)};
    out.second = Loc{p, index_range(k, k)};
  } else {
    Path a = p, b = p;
    a.push_back(0);
    b.push_back(1);
    out.first = Loc{a, {}};
    out.second = Loc{b, {}};
  }
  return out;
}

// Where the remainder lives in Gamma(Delta) after removing children from the
// node at `p` (the node may collapse and re-flatten into its parent).
Loc remainder_loc(const Bunch& g, const Path& p, const std::vector<int>& removed) {
  Bunch node = sub_at(g, p);
  std::size_t kept = node.arity() - removed.size();
  if (kept >= 2) return Loc{p, {}};
  Bunch survivor;
  for (std::size_t i = 0; i < node.arity(); ++i)
    if (std::find(removed.begin(), removed.end(), static_cast<int>(i)) == removed.end())
      survivor = node.children()[i];
  if (!p.empty()) {
    Path pp(p.begin(), p.end() - 1);
    Bunch parent = sub_at(g, pp);
    if (survivor.kind() == parent.kind())
      return Loc{pp, index_range(p.back(), static_cast<int>(survivor.arity()))};
  }
  return Loc{p, {}};
}

void gen_structural(RuleId r, const Sequent& s, Out& out) {
  const Bunch& g = s.context;
  switch (r) {
    case RuleId::W:
    case RuleId::WPrime: {
      for (auto& [p, node] : subbunches(g)) {
        if (node.kind() != BunchKind::Add) continue;
        std::size_t k = node.arity();
        if (k > kMaxSplitChildren) continue;
        for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
          std::vector<int> removed;
          for (std::size_t i = 0; i < k; ++i)
            if (mask & (1u << i)) removed.push_back(static_cast<int>(i));
          Bunch sigma = group_bunch(node, removed);
          if (r == RuleId::WPrime && !is_normal(sigma)) continue;
          Sequent prem{remove_children(g, p, removed), s.goal};
          std::vector<int> kept;
          for (std::size_t i = 0; i < k; ++i)
            if (!(mask & (1u << i))) kept.push_back(static_cast<int>(i));
          emit(out, r, {Loc{p, removed}, Loc{p, kept}}, {prem},
               {{remainder_loc(g, p, removed)}},
               r == RuleId::WPrime ? std::optional<Bunch>(sigma) : std::nullopt);
        }
      }
      break;
    }
    case RuleId::WUnitPlus:
    case RuleId::WUnitTimes: {
      BunchKind former = r == RuleId::WUnitPlus ? BunchKind::Add : BunchKind::Mul;
      BunchKind unit = r == RuleId::WUnitPlus ? BunchKind::UnitPlus : BunchKind::UnitTimes;
      for (auto& [p, node] : subbunches(g)) {
        if (node.kind() != former) continue;
        for (std::size_t i = 0; i < node.arity(); ++i) {
          if (node.children()[i].kind() != unit) continue;
          Path at = p;
          at.push_back(static_cast<int>(i));
          Sequent prem{remove_children(g, p, {static_cast<int>(i)}), s.goal};
          std::vector<int> kept;
          for (std::size_t j = 0; j < node.arity(); ++j)
            if (j != i) kept.push_back(static_cast<int>(j));
          emit(out, r, {Loc{at, {}}, Loc{p, kept}}, {prem},
               {{remainder_loc(g, p, {static_cast<int>(i)})}});
        }
      }
      break;
    }
    case RuleId::C:
    case RuleId::CPrime: {
      for (const Loc& loc : all_single_and_group_locs(g)) {
        Bunch x = sub_at(g, loc);
        if (r == RuleId::CPrime && !is_normal(x)) continue;
        // duplicating a bare unit serves no rule: the unit-aware variants
        // introduce their own units
        if (r == RuleId::CPrime && x.is_unit()) continue;
        Duplicated dup = duplicate_additively(g, loc);
        Sequent prem{dup.result, s.goal};
        emit(out, r, {loc}, {prem}, {{dup.first, dup.second}});
      }
      break;
    }
    case RuleId::CUnitTimes:
    case RuleId::CUnitPlus:
    case RuleId::Rad: {
      BunchKind former = r == RuleId::CUnitTimes ? BunchKind::Mul
                         : r == RuleId::CUnitPlus ? BunchKind::Add
                                                  : BunchKind::Mul;
      Bunch unit = r == RuleId::CUnitTimes ? Bunch::unit_times() : Bunch::unit_plus();
      for (auto& [p, b] : subbunches(g)) {
        (void)b;
        Attached a = attach_sibling(g, p, former, unit);
        Sequent prem{a.result, s.goal};
        emit(out, r, {Loc{p, {}}}, {prem}, {{a.occurrence, Loc{a.extra, {}}}});
      }
      break;
    }
    case RuleId::Inst: {
      for (const Loc& loc : all_single_and_group_locs(g)) {
        Bunch x = sub_at(g, loc);
        if (x.kind() == BunchKind::UnitPlus) continue;
        if (!is_normal(x)) continue;
        Bunch ctx = replace(g, loc, Bunch::unit_plus());
        // where the o+ lands: groups collapse to a single child appended after
        // the kept ones
        Loc prem_loc = loc;
        if (loc.is_group()) {
          Path q = loc.node;
          q.push_back(static_cast<int>(sub_at(g, loc.node).arity() - loc.members.size()));
          prem_loc = Loc{q, {}};
        }
        Sequent prem{ctx, s.goal};
        emit(out, RuleId::Inst, {loc}, {prem}, {{prem_loc}}, x);
      }
      break;
    }
    default:
      break;
  }
}

}  // namespace

std::vector<BackwardInstance> backward_instances(RuleId rule, const Sequent& goal) {
  Out out;
  switch (rule) {
    case RuleId::Id:
    case RuleId::TopR:
    case RuleId::OneR:
    case RuleId::BotL:
    case RuleId::BotLPrime:
      gen_axioms(rule, goal, out);
      break;
    case RuleId::OneL:
      gen_unit_left(rule, FormulaKind::One, Bunch::unit_times(), goal, out);
      break;
    case RuleId::TopL:
      gen_unit_left(rule, FormulaKind::Top, Bunch::unit_plus(), goal, out);
      break;
    case RuleId::AndL:
      gen_split_left(rule, FormulaKind::And, BunchKind::Add, goal, out);
      break;
    case RuleId::StarL:
      gen_split_left(rule, FormulaKind::Star, BunchKind::Mul, goal, out);
      break;
    case RuleId::OrR1:
    case RuleId::OrR2:
      gen_or_right(rule, goal, out);
      break;
    case RuleId::ImpR:
      gen_arrow_right(rule, FormulaKind::Imp, BunchKind::Add, goal, out);
      break;
    case RuleId::WandR:
      gen_arrow_right(rule, FormulaKind::Wand, BunchKind::Mul, goal, out);
      break;
    case RuleId::OrL:
      gen_or_left(goal, out);
      break;
    case RuleId::AndR:
    case RuleId::AndR1:
    case RuleId::AndR2:
      gen_right_binary(RuleId::AndR, RuleId::AndR1, RuleId::AndR2, FormulaKind::And,
                       BunchKind::Add, Bunch::unit_plus(), rule, goal, out);
      break;
    case RuleId::StarR:
    case RuleId::StarR1:
    case RuleId::StarR2:
      gen_right_binary(RuleId::StarR, RuleId::StarR1, RuleId::StarR2, FormulaKind::Star,
                       BunchKind::Mul, Bunch::unit_times(), rule, goal, out);
      break;
    case RuleId::ImpL:
    case RuleId::ImpL1:
    case RuleId::ImpL2:
    case RuleId::ImpL3:
      gen_left_binary(RuleId::ImpL, RuleId::ImpL1, RuleId::ImpL2, RuleId::ImpL3,
                      FormulaKind::Imp, BunchKind::Add, Bunch::unit_plus(), rule, goal, out);
      break;
    case RuleId::WandL:
    case RuleId::WandL1:
    case RuleId::WandL2:
    case RuleId::WandL3:
      gen_left_binary(RuleId::WandL, RuleId::WandL1, RuleId::WandL2, RuleId::WandL3,
                      FormulaKind::Wand, BunchKind::Mul, Bunch::unit_times(), rule, goal, out);
      break;
    default:
      gen_structural(rule, goal, out);
      break;
  }
  return out;
}

namespace {

const std::vector<RuleId>& all_rules() {
  static const std::vector<RuleId> rules = [] {
    std::vector<RuleId> v;
    for (int i = 0; i < static_cast<int>(RuleId::Hypothesis); ++i)
      v.push_back(static_cast<RuleId>(i));
    return v;
  }();
  return rules;
}

}  // namespace

std::vector<BackwardInstance> backward_instances(System sys, const Sequent& goal) {
  Out out;
  for (RuleId r : all_rules()) {
    if (!system_has(sys, r)) continue;
    if (r == RuleId::E || r == RuleId::EPrime) continue;  // folded into matching
    Out one = backward_instances(r, goal);
    for (auto& b : one) out.push_back(std::move(b));
  }
  return out;
}

bool SearchBounds::admits(const Sequent& s) const {
  return mu(s) <= a && omega(s) <= m && delta(s) <= d;
}

std::vector<BackwardInstance> expand(System sys, const Sequent& goal, const SearchBounds& b) {
  Out out;
  for (BackwardInstance& bi : backward_instances(sys, goal)) {
    bool ok = true;
    for (const Sequent& p : bi.premises)
      if (!b.admits(p)) { ok = false; break; }
    if (ok) out.push_back(std::move(bi));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checking

bool check_inference(System sys, const RuleInstance& inst, const std::vector<Sequent>& premises,
                     const Sequent& conclusion) {
  if (inst.rule == RuleId::Hypothesis) return false;
  if (!system_has(sys, inst.rule)) return false;
  if (static_cast<int>(premises.size()) != rule_arity(inst.rule)) return false;

  if (inst.rule == RuleId::E)
    return premises[0].goal == conclusion.goal &&
           coherent_equal(premises[0].context, conclusion.context);
  if (inst.rule == RuleId::EPrime)
    return premises[0].goal == conclusion.goal &&
           permutes(premises[0].context, conclusion.context);

  for (const BackwardInstance& cand : backward_instances(inst.rule, conclusion)) {
    if (cand.premises.size() != premises.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < premises.size(); ++i) {
      if (premises[i].goal != cand.premises[i].goal ||
          !permutes(premises[i].context, cand.premises[i].context)) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    if (inst.sigma && cand.inst.sigma && !permutes(*inst.sigma, *cand.inst.sigma)) continue;
    return true;
  }
  return false;
}

namespace {

CheckResult fail_at(const Derivation& d, const std::string& why) {
  CheckResult r;
  r.ok = false;
  r.error = why + " at [" + render(d.sequent) + "] (" + rule_name(d.inst.rule) + ")";
  return r;
}

}  // namespace

CheckResult check_derivation(System sys, const Derivation& d,
                             const std::vector<Sequent>& hypotheses) {
  if (d.is_hypothesis()) {
    for (const Sequent& h : hypotheses)
      if (h.goal == d.sequent.goal && permutes(h.context, d.sequent.context)) return {};
    return fail_at(d, "unknown hypothesis");
  }
  if (static_cast<int>(d.children.size()) != rule_arity(d.inst.rule))
    return fail_at(d, "wrong number of premises");
  std::vector<Sequent> premises;
  for (const Derivation& c : d.children) premises.push_back(c.sequent);
  if (!check_inference(sys, d.inst, premises, d.sequent))
    return fail_at(d, "invalid inference");
  for (const Derivation& c : d.children) {
    CheckResult r = check_derivation(sys, c, hypotheses);
    if (!r.ok) return r;
  }
  return {};
}

// ---------------------------------------------------------------------------
// Actions, phases, regimentation

// Is the occurrence additively combined with a ~=-copy of itself?
bool occurrence_duplicit(const Bunch& host, const Loc& loc) {
  Bunch x = canonicalize(sub_at(host, loc));
  Path node_path;
  std::vector<int> members;
  if (loc.is_group()) {
    node_path = loc.node;
    members = loc.members;
  } else {
    if (loc.node.empty()) return false;  // the root has no additive siblings
    node_path.assign(loc.node.begin(), loc.node.end() - 1);
    members = {loc.node.back()};
  }
  Bunch node = sub_at(host, node_path);
  if (node.kind() != BunchKind::Add) return false;
  std::vector<int> rest;
  for (std::size_t i = 0; i < node.arity(); ++i)
    if (std::find(members.begin(), members.end(), static_cast<int>(i)) == members.end())
      rest.push_back(static_cast<int>(i));
  if (members.size() == 1) {
    for (int j : rest)
      if (canonicalize(node.children()[j]) == x) return true;
    return false;
  }
  // group: look for a disjoint equal sub-multiset among the rest
  std::vector<Bunch> want;
  for (int i : members) want.push_back(canonicalize(node.children()[i]));
  std::sort(want.begin(), want.end(), [](const Bunch& a, const Bunch& b) { return compare(a, b) < 0; });
  if (rest.size() < want.size()) return false;
  // greedy multiset containment
  std::vector<Bunch> pool;
  for (int j : rest) pool.push_back(canonicalize(node.children()[j]));
  std::sort(pool.begin(), pool.end(), [](const Bunch& a, const Bunch& b) { return compare(a, b) < 0; });
  std::size_t pi = 0;
  for (const Bunch& w : want) {
    while (pi < pool.size() && compare(pool[pi], w) < 0) ++pi;
    if (pi >= pool.size() || !(pool[pi] == w)) return false;
    ++pi;
  }
  return true;
}

StepClass classify_instance(const Sequent& goal, const BackwardInstance& inst) {
  RuleId r = inst.inst.rule;
  if (is_axiom(r) || is_logical(r) || r == RuleId::Rad) return StepClass::Action;
  switch (r) {
    case RuleId::WPrime:
    case RuleId::Inst:
      if (!inst.inst.active.empty() &&
          occurrence_duplicit(goal.context, inst.inst.active.front()))
        return StepClass::Weakening;
      return StepClass::Action;
    case RuleId::W:
    case RuleId::WUnitPlus:
    case RuleId::WUnitTimes:
      return StepClass::Weakening;
    default:
      return StepClass::Contraction;
  }
}

namespace {

// Locate the matching backward instance for a checked node.
std::optional<BackwardInstance> match_instance(const Derivation& node) {
  for (BackwardInstance& cand : backward_instances(node.inst.rule, node.sequent)) {
    if (cand.premises.size() != node.children.size()) continue;
    bool match = true;
    for (std::size_t i = 0; i < cand.premises.size(); ++i) {
      if (cand.premises[i].goal != node.children[i].sequent.goal ||
          !permutes(cand.premises[i].context, node.children[i].sequent.context)) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    if (node.inst.sigma && cand.inst.sigma && !permutes(*node.inst.sigma, *cand.inst.sigma))
      continue;
    return cand;
  }
  return std::nullopt;
}

}  // namespace

bool is_action(System sys, const Derivation& node) {
  (void)sys;
  RuleId r = node.inst.rule;
  if (r == RuleId::Hypothesis) return false;
  if (is_axiom(r) || is_logical(r) || r == RuleId::Rad) return true;
  if (r == RuleId::WPrime || r == RuleId::Inst) {
    // action iff the introduced bunch is not duplicit in the conclusion
    auto cand = match_instance(node);
    if (!cand || cand->inst.active.empty()) return false;
    return !occurrence_duplicit(node.sequent.context, cand->inst.active.front());
  }
  return false;
}

namespace {

// All duplicit single-node occurrences of additive data in a bunch.
std::vector<Path> duplicit_occurrences(const Bunch& g) {
  std::vector<Path> out;
  for (const AdditiveSetView& set : additive_sets(g)) {
    if (set.members.size() < 2) continue;
    std::map<std::string, std::vector<const Path*>> classes;
    for (const Path& m : set.members)
      classes[render(canonicalize(sub_at(g, m)))].push_back(&m);
    for (auto& [key, paths] : classes) {
      (void)key;
      if (paths.size() >= 2)
        for (const Path* p : paths) out.push_back(*p);
    }
  }
  return out;
}

bool loc_covers(const Loc& active, const Path& occ) {
  if (active.is_group()) {
    if (occ.size() != active.node.size() + 1) return false;
    if (!std::equal(active.node.begin(), active.node.end(), occ.begin())) return false;
    return std::find(active.members.begin(), active.members.end(), occ.back()) !=
           active.members.end();
  }
  return active.node == occ;
}

}  // namespace

bool is_regimented_action(System sys, const Derivation& node) {
  if (!is_action(sys, node)) return false;
  auto cand = match_instance(node);
  if (!cand) return false;
  // the matched instance carries premises structurally equal to the generated
  // ones; duplicit occurrences are computed there
  for (std::size_t i = 0; i < cand->premises.size(); ++i) {
    const Bunch& ctx = cand->premises[i].context;
    const std::vector<Loc>& active = cand->premise_active[i];
    for (const Path& occ : duplicit_occurrences(ctx)) {
      bool covered = false;
      for (const Loc& a : active)
        if (loc_covers(a, occ)) { covered = true; break; }
      if (!covered) return false;
    }
  }
  return true;
}

Phase classify_inference(System sys, const Derivation& node) {
  RuleId r = node.inst.rule;
  if (r == RuleId::E || r == RuleId::EPrime) return Phase::Exchange;
  if (is_action(sys, node)) return Phase::Action;
  switch (r) {
    case RuleId::W:
    case RuleId::WPrime:
    case RuleId::WUnitPlus:
    case RuleId::WUnitTimes:
    case RuleId::Inst:
      return Phase::Loading;
    default:
      return Phase::Normalizing;
  }
}

std::vector<PhasedNode> classify_phases(System sys, const Derivation& d) {
  std::vector<PhasedNode> out;
  for_each_node(d, [&](const Derivation& n) {
    out.push_back(PhasedNode{&n, classify_inference(sys, n)});
  });
  return out;
}

namespace {

// leaf-to-root phase word must match A (N* L* A)* N*
bool branch_pattern_ok(const std::vector<Phase>& word) {
  std::size_t i = 0;
  auto skip = [&](Phase p) {
    std::size_t n = 0;
    while (i < word.size() && word[i] == p) { ++i; ++n; }
    return n;
  };
  if (word.empty()) return false;
  if (word[0] != Phase::Action) return false;
  i = 1;
  while (true) {
    skip(Phase::Normalizing);
    std::size_t loads = skip(Phase::Loading);
    if (i == word.size()) return loads == 0;
    if (word[i] != Phase::Action) return false;
    ++i;
  }
}

void collect_branches(System sys, const Derivation& d, std::vector<Phase>& acc,
                      bool& ok) {
  Phase p = d.is_hypothesis() ? Phase::Action : classify_inference(sys, d);
  if (d.children.empty()) {
    std::vector<Phase> word;
    word.push_back(p);
    for (auto it = acc.rbegin(); it != acc.rend(); ++it)
      if (*it != Phase::Exchange) word.push_back(*it);
    if (!branch_pattern_ok(word)) ok = false;
    return;
  }
  acc.push_back(p);
  for (const Derivation& c : d.children) {
    collect_branches(sys, c, acc, ok);
    if (!ok) break;
  }
  acc.pop_back();
}

}  // namespace

bool is_regimented(System sys, const Derivation& d) {
  bool ok = true;
  for_each_node(d, [&](const Derivation& n) {
    if (!ok) return;
    if (n.is_hypothesis()) return;
    if (is_action(sys, n) && !is_regimented_action(sys, n)) ok = false;
  });
  if (!ok) return false;
  std::vector<Phase> acc;
  collect_branches(sys, d, acc, ok);
  return ok;
}

// ---------------------------------------------------------------------------
// Frozen reduction and hat forms

namespace {

struct MutNode {
  BunchKind kind = BunchKind::UnitPlus;
  Formula formula;
  std::vector<std::unique_ptr<MutNode>> kids;
  bool frozen = false;

  bool subtree_frozen() const {
    if (frozen) return true;
    for (const auto& k : kids)
      if (k->subtree_frozen()) return true;
    return false;
  }
};

std::unique_ptr<MutNode> to_mut(const Bunch& b) {
  auto n = std::make_unique<MutNode>();
  n->kind = b.kind();
  if (b.kind() == BunchKind::Leaf) n->formula = b.formula();
  for (const Bunch& c : b.children()) n->kids.push_back(to_mut(c));
  return n;
}

Bunch from_mut(const MutNode& n) {
  switch (n.kind) {
    case BunchKind::UnitPlus: return Bunch::unit_plus();
    case BunchKind::UnitTimes: return Bunch::unit_times();
    case BunchKind::Leaf: return Bunch::leaf(n.formula);
    default: {
      std::vector<Bunch> kids;
      for (const auto& k : n.kids) kids.push_back(from_mut(*k));
      return Bunch::make(n.kind, std::move(kids));
    }
  }
}

MutNode* mut_at(MutNode* root, const Path& p) {
  MutNode* cur = root;
  for (int i : p) cur = cur->kids.at(i).get();
  return cur;
}

// restore the flattening invariant after removals
void repair(MutNode* n) {
  for (auto& k : n->kids) repair(k.get());
  if (n->kind != BunchKind::Add && n->kind != BunchKind::Mul) return;
  std::vector<std::unique_ptr<MutNode>> flat;
  for (auto& k : n->kids) {
    if (k->kind == n->kind && !k->frozen) {
      for (auto& gk : k->kids) flat.push_back(std::move(gk));
    } else {
      flat.push_back(std::move(k));
    }
  }
  n->kids = std::move(flat);
  if (n->kids.size() == 1) {
    std::unique_ptr<MutNode> only = std::move(n->kids[0]);
    bool was_frozen = n->frozen || only->frozen;
    n->kind = only->kind;
    n->formula = only->formula;
    n->kids = std::move(only->kids);
    n->frozen = was_frozen;
  }
}

bool one_frozen_step(MutNode* n) {
  if (n->frozen) return false;  // active material is kept verbatim
  for (auto& k : n->kids)
    if (one_frozen_step(k.get())) return true;
  if (n->kind == BunchKind::Mul) {
    for (std::size_t i = 0; i < n->kids.size(); ++i) {
      if (n->kids[i]->kind == BunchKind::UnitTimes && !n->kids[i]->frozen) {
        n->kids.erase(n->kids.begin() + i);
        return true;
      }
    }
  }
  if (n->kind == BunchKind::Add) {
    for (std::size_t i = 0; i < n->kids.size(); ++i) {
      if (n->kids[i]->kind == BunchKind::UnitPlus && !n->kids[i]->frozen) {
        n->kids.erase(n->kids.begin() + i);
        return true;
      }
    }
    for (std::size_t i = 0; i < n->kids.size(); ++i) {
      for (std::size_t j = 0; j < n->kids.size(); ++j) {
        if (i == j) continue;
        if (n->kids[j]->subtree_frozen()) continue;
        Bunch a = from_mut(*n->kids[i]);
        Bunch b = from_mut(*n->kids[j]);
        if (!permutes(a, b)) continue;
        if (!is_normal(b)) continue;  // small step only
        n->kids.erase(n->kids.begin() + j);
        return true;
      }
    }
  }
  return false;
}

void collect_frozen(const MutNode& n, Path& p, std::vector<Loc>& out) {
  if (n.frozen) out.push_back(Loc{p, {}});
  for (std::size_t i = 0; i < n.kids.size(); ++i) {
    p.push_back(static_cast<int>(i));
    collect_frozen(*n.kids[i], p, out);
    p.pop_back();
  }
}

}  // namespace

FrozenReduceResult frozen_reduce(const Sequent& s, const std::vector<Loc>& frozen) {
  std::unique_ptr<MutNode> root = to_mut(s.context);
  for (const Loc& loc : frozen) {
    MutNode* n = mut_at(root.get(), loc.node);
    if (loc.is_group()) {
      for (int i : loc.members) n->kids.at(i)->frozen = true;
    } else {
      n->frozen = true;
    }
  }
  while (true) {
    if (!one_frozen_step(root.get())) break;
    repair(root.get());
  }
  FrozenReduceResult r;
  r.sequent = Sequent{from_mut(*root), s.goal};
  Path p;
  collect_frozen(*root, p, r.active);
  return r;
}

std::optional<HatForms> hat_forms(System sys, const Derivation& node) {
  if (!is_regimented_action(sys, node)) return std::nullopt;
  auto cand = match_instance(node);
  if (!cand) return std::nullopt;
  HatForms h;
  for (std::size_t i = 0; i < cand->premises.size(); ++i)
    h.premises.push_back(frozen_reduce(cand->premises[i], cand->premise_active[i]).sequent);
  h.conclusion = frozen_reduce(node.sequent, cand->inst.active).sequent;
  return h;
}

// ---------------------------------------------------------------------------
// Interchange JSON

namespace {

using nlohmann::json;

json loc_to_json(const Loc& loc) {
  if (!loc.is_group()) return json(loc.node);
  return json{{"node", loc.node}, {"members", loc.members}};
}

Loc loc_from_json(const json& j) {
  if (j.is_array()) return Loc{j.get<std::vector<int>>(), {}};
  return Loc{j.at("node").get<std::vector<int>>(), j.at("members").get<std::vector<int>>()};
}

json derivation_to_json_impl(const Derivation& d) {
  json node;
  node["sequent"] = render(d.sequent);
  node["rule"] = rule_name(d.inst.rule);
  json params = json::object();
  if (d.inst.sigma) params["sigma"] = render(*d.inst.sigma);
  if (!d.inst.active.empty()) {
    json locs = json::array();
    for (const Loc& l : d.inst.active) locs.push_back(loc_to_json(l));
    params["active"] = locs;
  }
  node["params"] = params;
  json children = json::array();
  for (const Derivation& c : d.children) children.push_back(derivation_to_json_impl(c));
  node["children"] = children;
  return node;
}

Derivation derivation_from_json_impl(const json& j) {
  Derivation d;
  d.sequent = parse_sequent(j.at("sequent").get<std::string>());
  auto rule = rule_from_name(j.at("rule").get<std::string>());
  if (!rule) throw std::runtime_error("unknown rule: " + j.at("rule").get<std::string>());
  d.inst.rule = *rule;
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (p.contains("sigma")) d.inst.sigma = parse_bunch(p.at("sigma").get<std::string>());
    if (p.contains("active"))
      for (const json& l : p.at("active")) d.inst.active.push_back(loc_from_json(l));
  }
  if (j.contains("children"))
    for (const json& c : j.at("children")) d.children.push_back(derivation_from_json_impl(c));
  return d;
}

}  // namespace

std::string derivation_to_json(const Derivation& d) {
  return derivation_to_json_impl(d).dump(2);
}

Derivation derivation_from_json(const std::string& text) {
  return derivation_from_json_impl(json::parse(text));
}

}  // namespace bi
