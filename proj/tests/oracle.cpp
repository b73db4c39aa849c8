#include "oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace bi::oracle {

namespace {

struct AbortOracle {};

Sequent canon(const Sequent& s) {
  return Sequent{canonicalize(erase_units(s.context)), s.goal};
}

std::string key(const Sequent& s) { return render(s); }

Bunch group_or_unit(const Bunch& node, const std::vector<int>& members, BunchKind unit) {
  if (members.empty())
    return unit == BunchKind::UnitPlus ? Bunch::unit_plus() : Bunch::unit_times();
  if (members.size() == 1) return node.children()[members[0]];
  std::vector<Bunch> picked;
  for (int i : members) picked.push_back(node.children()[i]);
  return Bunch::make(node.kind(), picked);
}

// two-way splits of the context under a former, empty side = the unit
std::vector<std::pair<Bunch, Bunch>> splits(const Bunch& ctx, BunchKind former) {
  BunchKind unit = former == BunchKind::Add ? BunchKind::UnitPlus : BunchKind::UnitTimes;
  Bunch unit_b = unit == BunchKind::UnitPlus ? Bunch::unit_plus() : Bunch::unit_times();
  std::vector<std::pair<Bunch, Bunch>> out;
  if (ctx.kind() == former && ctx.arity() <= 12) {
    std::size_t k = ctx.arity();
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      std::vector<int> a, b;
      for (std::size_t i = 0; i < k; ++i)
        (mask & (1u << i) ? a : b).push_back(static_cast<int>(i));
      out.push_back({group_or_unit(ctx, a, unit), group_or_unit(ctx, b, unit)});
    }
  } else {
    out.push_back({ctx, unit_b});
    out.push_back({unit_b, ctx});
  }
  return out;
}

struct Prover {
  long nodes = 0;
  long max_nodes;
  std::set<std::string> proved;
  std::map<std::pair<std::string, int>, bool> attempted;  // failed at budget

  explicit Prover(long mx) : max_nodes(mx) {}

  std::vector<Sequent> goals1(Sequent a) { return {canon(a)}; }
  std::vector<Sequent> goals2(Sequent a, Sequent b) { return {canon(a), canon(b)}; }

  bool prove_all(const std::vector<Sequent>& subgoals, int budget,
                 std::vector<std::string>& branch) {
    for (const Sequent& g : subgoals)
      if (!prove(g, budget, branch)) return false;
    return true;
  }

  bool prove(const Sequent& goal, int budget, std::vector<std::string>& branch) {
    std::string k = key(goal);
    if (proved.count(k)) return true;
    if (budget <= 0) return false;
    if (std::find(branch.begin(), branch.end(), k) != branch.end()) return false;
    auto att = attempted.find({k, budget});
    if (att != attempted.end()) return att->second;
    if (++nodes > max_nodes) throw AbortOracle{};

    branch.push_back(k);
    bool ok = attempt(goal, budget, branch);
    branch.pop_back();
    if (ok)
      proved.insert(k);
    else
      attempted[{k, budget}] = false;
    return ok;
  }

  bool attempt(const Sequent& goal, int budget, std::vector<std::string>& branch) {
    const Bunch& ctx = goal.context;
    const Formula& phi = goal.goal;
    int b = budget - 1;

    // axioms
    if (ctx.kind() == BunchKind::Leaf && ctx.formula() == phi) return true;
    if (ctx.kind() == BunchKind::UnitPlus && phi.kind() == FormulaKind::Top) return true;
    if (ctx.kind() == BunchKind::UnitTimes && phi.kind() == FormulaKind::One) return true;
    for (auto& [p, sub] : subbunches(ctx)) {
      (void)p;
      if (sub.kind() == BunchKind::Leaf && sub.formula().kind() == FormulaKind::Bot)
        return true;
    }

    // right rules
    switch (phi.kind()) {
      case FormulaKind::Or:
        if (prove_all(goals1({ctx, phi.left()}), b, branch)) return true;
        if (prove_all(goals1({ctx, phi.right()}), b, branch)) return true;
        break;
      case FormulaKind::Imp:
        if (prove_all(goals1({Bunch::add({ctx, Bunch::leaf(phi.left())}), phi.right()}), b,
                      branch))
          return true;
        break;
      case FormulaKind::Wand:
        if (prove_all(goals1({Bunch::mul({ctx, Bunch::leaf(phi.left())}), phi.right()}), b,
                      branch))
          return true;
        break;
      case FormulaKind::And:
        for (auto& [l, r] : splits(ctx, BunchKind::Add))
          if (prove_all(goals2({l, phi.left()}, {r, phi.right()}), b, branch)) return true;
        break;
      case FormulaKind::Star:
        for (auto& [l, r] : splits(ctx, BunchKind::Mul))
          if (prove_all(goals2({l, phi.left()}, {r, phi.right()}), b, branch)) return true;
        break;
      default:
        break;
    }

    // left rules on every leaf occurrence
    for (auto& [p, sub] : subbunches(ctx)) {
      if (sub.kind() != BunchKind::Leaf) continue;
      const Formula& f = sub.formula();
      Loc at{p, {}};
      switch (f.kind()) {
        case FormulaKind::One:
          if (prove_all(goals1({replace(ctx, at, Bunch::unit_times()), phi}), b, branch))
            return true;
          break;
        case FormulaKind::Top:
          if (prove_all(goals1({replace(ctx, at, Bunch::unit_plus()), phi}), b, branch))
            return true;
          break;
        case FormulaKind::And:
          if (prove_all(
                  goals1({replace(ctx, at,
                                  Bunch::add({Bunch::leaf(f.left()), Bunch::leaf(f.right())})),
                          phi}),
                  b, branch))
            return true;
          break;
        case FormulaKind::Star:
          if (prove_all(
                  goals1({replace(ctx, at,
                                  Bunch::mul({Bunch::leaf(f.left()), Bunch::leaf(f.right())})),
                          phi}),
                  b, branch))
            return true;
          break;
        case FormulaKind::Or:
          if (prove_all(goals2({replace(ctx, at, Bunch::leaf(f.left())), phi},
                               {replace(ctx, at, Bunch::leaf(f.right())), phi}),
                        b, branch))
            return true;
          break;
        case FormulaKind::Imp:
        case FormulaKind::Wand: {
          BunchKind former = f.kind() == FormulaKind::Imp ? BunchKind::Add : BunchKind::Mul;
          BunchKind unit = f.kind() == FormulaKind::Imp ? BunchKind::UnitPlus
                                                        : BunchKind::UnitTimes;
          Bunch unit_b =
              unit == BunchKind::UnitPlus ? Bunch::unit_plus() : Bunch::unit_times();
          // D = subset of siblings moved to the minor premise (empty = unit)
          std::vector<std::vector<int>> dchoices{{}};
          Path pp;
          if (!p.empty()) {
            pp.assign(p.begin(), p.end() - 1);
            Bunch parent = sub_at(ctx, pp);
            if (parent.kind() == former && parent.arity() <= 12) {
              std::vector<int> sibs;
              for (std::size_t j = 0; j < parent.arity(); ++j)
                if (static_cast<int>(j) != p.back()) sibs.push_back(static_cast<int>(j));
              for (unsigned mask = 1; mask < (1u << sibs.size()); ++mask) {
                std::vector<int> d;
                for (std::size_t t = 0; t < sibs.size(); ++t)
                  if (mask & (1u << t)) d.push_back(sibs[t]);
                dchoices.push_back(d);
              }
            }
          }
          for (const std::vector<int>& d : dchoices) {
            Bunch minor_ctx, major_ctx;
            if (d.empty()) {
              minor_ctx = unit_b;
              major_ctx = replace(ctx, at, Bunch::leaf(f.right()));
            } else {
              Bunch parent = sub_at(ctx, pp);
              minor_ctx = group_or_unit(parent, d, unit);
              // drop D and resolve the implication in place
              std::vector<Bunch> kids;
              for (std::size_t j = 0; j < parent.arity(); ++j) {
                if (std::find(d.begin(), d.end(), static_cast<int>(j)) != d.end()) continue;
                if (static_cast<int>(j) == p.back())
                  kids.push_back(Bunch::leaf(f.right()));
                else
                  kids.push_back(parent.children()[j]);
              }
              Bunch np = kids.size() == 1 ? kids[0] : Bunch::make(former, kids);
              major_ctx = replace(ctx, Loc{pp, {}}, np);
            }
            if (prove_all(goals2({minor_ctx, f.left()}, {major_ctx, phi}), b, branch))
              return true;
          }
          break;
        }
        default:
          break;
      }
    }

    // W: drop an additive group, or blank any occurrence to o+ (unit law)
    for (auto& [p, node] : subbunches(ctx)) {
      if (node.kind() == BunchKind::Add && node.arity() <= 12) {
        std::size_t kk = node.arity();
        for (unsigned mask = 1; mask + 1 < (1u << kk); ++mask) {
          std::vector<int> removed;
          for (std::size_t i = 0; i < kk; ++i)
            if (mask & (1u << i)) removed.push_back(static_cast<int>(i));
          if (prove_all(goals1({remove_children(ctx, p, removed), phi}), b, branch))
            return true;
        }
      }
      if (node.kind() != BunchKind::UnitPlus)
        if (prove_all(goals1({replace(ctx, Loc{p, {}}, Bunch::unit_plus()), phi}), b, branch))
          return true;
    }

    // C: duplicate any occurrence additively
    for (auto& [p, node] : subbunches(ctx)) {
      (void)node;
      Bunch x = sub_at(ctx, p);
      if (prove_all(goals1({replace(ctx, Loc{p, {}}, Bunch::add({x, x})), phi}), b, branch))
        return true;
    }
    for (auto& [loc, x] : subbunch_groups(ctx)) {
      if (loc.members.size() == sub_at(ctx, loc.node).arity()) continue;
      if (prove_all(goals1({replace(ctx, loc, Bunch::add({x, x})), phi}), b, branch))
        return true;
    }

    return false;
  }
};

}  // namespace

Answer lbi_provable(const Sequent& s, const Options& opts) {
  Prover prover(opts.max_nodes);
  Sequent goal = canon(s);
  try {
    for (int cap = 1; cap <= opts.max_depth; ++cap) {
      std::vector<std::string> branch;
      if (prover.prove(goal, cap, branch)) return Answer::Proved;
    }
  } catch (const AbortOracle&) {
    return Answer::Aborted;
  }
  return Answer::NotProved;
}

}  // namespace bi::oracle
