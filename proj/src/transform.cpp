#include "bi/transform.hpp"

#include <algorithm>
#include <cassert>
#include <set>

#include "bi/rewriting.hpp"

namespace bi {

// ---------------------------------------------------------------------------
// Strategy chains. Chain nodes carry only rule and sigma; the checker
// re-derives the match, so no step paths need to survive transformation.

namespace {

struct ChainStep {
  StepKind kind;
  Bunch removed;        // the dropped unit / contracted copy
  Bunch context_after;  // whole context after the step
};

std::vector<ChainStep> trace_normalize(const Bunch& start) {
  std::vector<ChainStep> out;
  Bunch cur = start;
  for (const ReductionStep& s : normalize(start).steps) {
    Bunch removed;
    switch (s.kind) {
      case StepKind::DropUnitPlus: removed = Bunch::unit_plus(); break;
      case StepKind::DropUnitTimes: removed = Bunch::unit_times(); break;
      case StepKind::Contract: {
        Bunch node = sub_at(cur, s.at);
        std::vector<Bunch> picked;
        for (int i : s.drop) picked.push_back(node.children()[i]);
        removed = picked.size() == 1 ? picked[0] : Bunch::make(node.kind(), picked);
        break;
      }
    }
    cur = apply_step(cur, s);
    out.push_back({s.kind, removed, cur});
  }
  return out;
}

// Reduce only inside the occurrence at loc, re-substituting the evolving
// region into the fixed surroundings.
std::vector<ChainStep> trace_normalize_at(const Bunch& ctx, const Loc& loc) {
  Bunch region = sub_at(ctx, loc);
  std::vector<ChainStep> out;
  for (const ChainStep& s : trace_normalize(region))
    out.push_back({s.kind, s.removed, replace(ctx, loc, s.context_after)});
  return out;
}

RuleId positive_rule(StepKind k) {
  switch (k) {
    case StepKind::Contract: return RuleId::CPrime;
    case StepKind::DropUnitPlus: return RuleId::CUnitPlus;
    case StepKind::DropUnitTimes: return RuleId::CUnitTimes;
  }
  return RuleId::CPrime;
}

RuleId negative_rule(StepKind k) {
  switch (k) {
    case StepKind::Contract: return RuleId::WPrime;
    case StepKind::DropUnitPlus: return RuleId::WUnitPlus;
    case StepKind::DropUnitTimes: return RuleId::WUnitTimes;
  }
  return RuleId::WPrime;
}

// top proves (start |- goal); append contraction-side nodes downward.
Derivation chain_normalizing(Derivation top, const Formula& goal,
                             const std::vector<ChainStep>& steps) {
  Derivation cur = std::move(top);
  for (const ChainStep& s : steps) {
    Derivation node;
    node.sequent = Sequent{s.context_after, goal};
    node.inst.rule = positive_rule(s.kind);
    node.children.push_back(std::move(cur));
    cur = std::move(node);
  }
  return cur;
}

// top proves the fully reduced end; wrap weakening nodes back down to start.
Derivation chain_loading(Derivation top, const Bunch& start, const Formula& goal,
                         const std::vector<ChainStep>& steps) {
  Derivation cur = std::move(top);
  for (std::size_t i = steps.size(); i-- > 0;) {
    Bunch ctx = i == 0 ? start : steps[i - 1].context_after;
    Derivation node;
    node.sequent = Sequent{ctx, goal};
    node.inst.rule = negative_rule(steps[i].kind);
    if (node.inst.rule == RuleId::WPrime) node.inst.sigma = steps[i].removed;
    node.children.push_back(std::move(cur));
    cur = std::move(node);
  }
  return cur;
}

// Proof of target from a proof of target-with-the-junk-region-removed: the
// region is first reduced in place, removed by W', and re-expanded.
Derivation weaken_in(Derivation base, const Sequent& target, const Loc& junk) {
  std::vector<ChainStep> steps = trace_normalize_at(target.context, junk);
  Bunch reduced_ctx = steps.empty() ? target.context : steps.back().context_after;
  Bunch sigma = normalize(sub_at(target.context, junk)).concrete;
  Derivation wnode;
  wnode.sequent = Sequent{reduced_ctx, target.goal};
  wnode.inst.rule = RuleId::WPrime;
  wnode.inst.sigma = sigma;
  wnode.children.push_back(std::move(base));
  return chain_loading(std::move(wnode), target.context, target.goal, steps);
}

// BotL' at the normal form, weakened back out to the target.
Derivation bot_sim(const Sequent& target) {
  std::vector<ChainStep> steps = trace_normalize(target.context);
  Bunch reduced = steps.empty() ? target.context : steps.back().context_after;
  Derivation ax;
  ax.sequent = Sequent{reduced, target.goal};
  ax.inst.rule = RuleId::BotLPrime;
  return chain_loading(std::move(ax), target.context, target.goal, steps);
}

std::optional<BackwardInstance> match_node(const Derivation& node) {
  for (BackwardInstance& cand : backward_instances(node.inst.rule, node.sequent)) {
    if (cand.premises.size() != node.children.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < cand.premises.size(); ++i) {
      if (cand.premises[i].goal != node.children[i].sequent.goal ||
          !permutes(cand.premises[i].context, node.children[i].sequent.context)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (node.inst.sigma && cand.inst.sigma && !permutes(*node.inst.sigma, *cand.inst.sigma))
      continue;
    return cand;
  }
  return std::nullopt;
}

std::optional<Bunch> find_sigma(RuleId rule, const std::vector<Sequent>& premises,
                                const Sequent& conclusion) {
  for (const BackwardInstance& cand : backward_instances(rule, conclusion)) {
    if (cand.premises.size() != premises.size()) continue;
    bool ok = true;
    for (std::size_t i = 0; i < premises.size(); ++i) {
      if (premises[i].goal != cand.premises[i].goal ||
          !permutes(premises[i].context, cand.premises[i].context)) {
        ok = false;
        break;
      }
    }
    if (ok) return cand.inst.sigma;
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// LBI -> sLBI

namespace {

Derivation lbi_to_slbi_rec(const Derivation& d) {
  std::vector<Derivation> kids;
  for (const Derivation& c : d.children) kids.push_back(lbi_to_slbi_rec(c));

  switch (d.inst.rule) {
    case RuleId::BotL:
      return bot_sim(d.sequent);
    case RuleId::W: {
      // find the weakened-in group and re-derive it small-step
      for (auto& [p, node] : subbunches(d.sequent.context)) {
        if (node.kind() != BunchKind::Add) continue;
        std::size_t k = node.arity();
        if (k > 14) continue;
        for (unsigned mask = 1; mask + 1 < (1u << k); ++mask) {
          std::vector<int> removed;
          for (std::size_t i = 0; i < k; ++i)
            if (mask & (1u << i)) removed.push_back(static_cast<int>(i));
          Bunch stripped = remove_children(d.sequent.context, p, removed);
          if (permutes(stripped, d.children[0].sequent.context))
            return weaken_in(std::move(kids[0]), d.sequent, Loc{p, removed});
        }
      }
      throw TransformError("W instance does not match its premise: " + render(d.sequent));
    }
    case RuleId::C:
    case RuleId::E: {
      // premise and conclusion share a normal form; go down and come back up
      Derivation down = chain_normalizing(std::move(kids[0]), d.sequent.goal,
                                          trace_normalize(d.children[0].sequent.context));
      std::vector<ChainStep> up = trace_normalize(d.sequent.context);
      return chain_loading(std::move(down), d.sequent.context, d.sequent.goal, up);
    }
    default: {
      Derivation out;
      out.sequent = d.sequent;
      out.inst = d.inst;
      out.children = std::move(kids);
      return out;
    }
  }
}

}  // namespace

Derivation lbi_to_slbi(const Derivation& d) { return lbi_to_slbi_rec(d); }

// ---------------------------------------------------------------------------
// Regimentation by action-tree expansion

namespace {

bool nf_equal(const Sequent& a, const Sequent& b) {
  return a.goal == b.goal &&
         normalize(a.context).normal_form == normalize(b.context).normal_form;
}

Derivation regiment_rec(const Derivation& d) {
  if (d.is_hypothesis()) return d;

  RuleId r = d.inst.rule;
  bool action = is_action(System::SLBIPlus, d);

  if (!action) {
    if (r == RuleId::W)
      throw TransformError("raw W in regiment input; run lbi_to_slbi first");
    // structural non-actions preserve the normal form; elide them
    if (d.children.size() != 1)
      throw TransformError("non-action with unexpected arity");
    return regiment_rec(d.children[0]);
  }

  if (d.children.empty()) {
    // axioms conclude normal sequents already
    Derivation out = d;
    return out;
  }

  auto cand = match_node(d);
  if (!cand) throw TransformError("unmatched inference: " + render(d.sequent));

  // hatted premises and conclusion: non-active material reduced away
  std::vector<Sequent> hatted;
  for (std::size_t i = 0; i < cand->premises.size(); ++i)
    hatted.push_back(frozen_reduce(cand->premises[i], cand->premise_active[i]).sequent);
  Sequent hat_c = frozen_reduce(d.sequent, cand->inst.active).sequent;

  RuleInstance inst;
  inst.rule = r;
  inst.sigma = cand->inst.sigma;
  if (!check_inference(System::SLBIPlus, inst, hatted, hat_c)) {
    // conservative fallback: keep the instance as found
    hatted = cand->premises;
    hat_c = d.sequent;
  }

  std::vector<Derivation> action_children;
  for (std::size_t i = 0; i < hatted.size(); ++i) {
    Derivation sub = regiment_rec(d.children[i]);  // proves the premise's normal form
    std::vector<ChainStep> load = trace_normalize(hatted[i].context);
    if (!load.empty() && !nf_equal(sub.sequent, hatted[i]))
      throw TransformError("loading target mismatch at " + render(hatted[i]));
    action_children.push_back(
        chain_loading(std::move(sub), hatted[i].context, hatted[i].goal, load));
  }

  Derivation act;
  act.sequent = hat_c;
  act.inst = inst;
  act.children = std::move(action_children);

  return chain_normalizing(std::move(act), hat_c.goal, trace_normalize(hat_c.context));
}

}  // namespace

Derivation regiment(const Derivation& d) {
  if (!is_normal(d.sequent.context))
    throw TransformError("regiment requires a normal end-sequent");
  Derivation out = regiment_rec(d);
  if (out.sequent == d.sequent) return out;
  if (!permutes(out.sequent.context, d.sequent.context) || out.sequent.goal != d.sequent.goal)
    throw TransformError("regimented proof drifted to a different end-sequent");
  Derivation fix;
  fix.sequent = d.sequent;
  fix.inst.rule = RuleId::EPrime;
  fix.children.push_back(std::move(out));
  return fix;
}

// ---------------------------------------------------------------------------
// Unit-contraction elimination

namespace {

const std::vector<RuleId>& replacement_rules() {
  static const std::vector<RuleId> rules = {
      RuleId::Inst,   RuleId::Rad,    RuleId::WandL1, RuleId::WandL2, RuleId::WandL3,
      RuleId::StarR1, RuleId::StarR2, RuleId::ImpL1,  RuleId::ImpL2,  RuleId::ImpL3,
      RuleId::AndR1,  RuleId::AndR2};
  return rules;
}

// one rewrite; returns true if a Cox/Co+ whose child is not itself one was
// found and replaced
bool eliminate_one_unit_contraction(Derivation& d) {
  for (Derivation& c : d.children)
    if (eliminate_one_unit_contraction(c)) return true;

  if (d.inst.rule != RuleId::CUnitTimes && d.inst.rule != RuleId::CUnitPlus) return false;
  Derivation& j = d.children[0];
  if (j.inst.rule == RuleId::CUnitTimes || j.inst.rule == RuleId::CUnitPlus)
    return false;  // handle the inner one first (recursion above finds it)

  // inverse weakening cancels outright
  if ((j.inst.rule == RuleId::WUnitTimes && d.inst.rule == RuleId::CUnitTimes) ||
      (j.inst.rule == RuleId::WUnitPlus && d.inst.rule == RuleId::CUnitPlus)) {
    if (permutes(j.children[0].sequent.context, d.sequent.context) &&
        j.children[0].sequent.goal == d.sequent.goal) {
      Derivation sub = std::move(j.children[0]);
      d = std::move(sub);
      return true;
    }
  }

  std::vector<Sequent> premises;
  for (const Derivation& c : j.children) premises.push_back(c.sequent);
  for (RuleId v : replacement_rules()) {
    RuleInstance inst;
    inst.rule = v;
    if (!check_inference(System::SLBIPlus, inst, premises, d.sequent)) continue;
    Derivation out;
    out.sequent = d.sequent;
    out.inst.rule = v;
    out.inst.sigma = find_sigma(v, premises, d.sequent);
    out.children = std::move(j.children);
    d = std::move(out);
    return true;
  }
  throw TransformError("unit contraction not covered by the rewrite tables at " +
                       render(d.sequent) + " below " + rule_name(j.inst.rule));
}

}  // namespace

Derivation eliminate_unit_contractions(const Derivation& d) {
  Derivation out = d;
  int guard = 0;
  while (eliminate_one_unit_contraction(out)) {
    if (++guard > 100000) throw TransformError("unit-contraction elimination diverged");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rad elimination

namespace {

std::vector<Loc> radical_occurrences(const Bunch& g) {
  std::vector<Loc> out;
  for (auto& [p, b] : subbunches(g)) {
    if (b.kind() != BunchKind::UnitPlus || p.empty()) continue;
    Path pp(p.begin(), p.end() - 1);
    if (sub_at(g, pp).kind() == BunchKind::Mul) out.push_back(Loc{p, {}});
  }
  return out;
}

Bunch remove_at(const Bunch& g, const Loc& loc) {
  Path pp(loc.node.begin(), loc.node.end() - 1);
  return remove_children(g, pp, {loc.node.back()});
}

std::vector<Loc> unit_plus_occurrences(const Bunch& g) {
  std::vector<Loc> out;
  for (auto& [p, b] : subbunches(g))
    if (b.kind() == BunchKind::UnitPlus) out.push_back(Loc{p, {}});
  return out;
}

Derivation push_rad(const Derivation& node, const Loc& radical);

// candidate ways to adjust one premise while a rad passes the inference
struct PremiseOption {
  Sequent sequent;
  int kind;  // 0 unchanged, 1 one rad, 2 two rads, 3 inst-wrap
  Loc a, b;
};

std::vector<PremiseOption> premise_options(const Sequent& prem) {
  std::vector<PremiseOption> out;
  out.push_back({prem, 0, {}, {}});
  std::vector<Loc> rads = radical_occurrences(prem.context);
  for (const Loc& r : rads)
    out.push_back({Sequent{remove_at(prem.context, r), prem.goal}, 1, r, {}});
  for (std::size_t i = 0; i < rads.size(); ++i) {
    for (std::size_t j = 0; j < rads.size(); ++j) {
      if (i == j) continue;
      Bunch once = remove_at(prem.context, rads[i]);
      for (const Loc& r2 : radical_occurrences(once))
        out.push_back({Sequent{remove_at(once, r2), prem.goal}, 2, rads[i], r2});
    }
  }
  for (const Loc& u : unit_plus_occurrences(prem.context))
    out.push_back(
        {Sequent{replace(prem.context, u, Bunch::unit_times()), prem.goal}, 3, u, {}});
  return out;
}

Derivation materialize(const Derivation& child, const PremiseOption& opt) {
  switch (opt.kind) {
    case 0:
      return child;
    case 1:
      return push_rad(child, opt.a);
    case 2: {
      Derivation once = push_rad(child, opt.a);
      // re-locate the second radical in the pushed proof's root
      for (const Loc& r : radical_occurrences(once.sequent.context)) {
        if (permutes(remove_at(once.sequent.context, r), opt.sequent.context))
          return push_rad(once, r);
      }
      throw TransformError("lost track of the second radical");
    }
    default: {  // inst-wrap: Gamma(o+) |- chi  =>  Gamma(ox) |- chi
      Derivation w;
      w.sequent = opt.sequent;
      w.inst.rule = RuleId::Inst;
      w.inst.sigma = Bunch::unit_times();
      w.children.push_back(child);
      return w;
    }
  }
}

Derivation push_rad(const Derivation& node, const Loc& radical) {
  Sequent target{remove_at(node.sequent.context, radical), node.sequent.goal};

  if (node.is_hypothesis())
    throw TransformError("cannot push rad into a hypothesis leaf");

  if (node.children.empty()) {
    if (node.inst.rule == RuleId::BotL || node.inst.rule == RuleId::BotLPrime) {
      bool has_bot = false;
      for (auto& [p, b] : subbunches(target.context)) {
        (void)p;
        if (b.kind() == BunchKind::Leaf && b.formula().kind() == FormulaKind::Bot)
          has_bot = true;
      }
      if (has_bot) return bot_sim(target);
    }
    throw TransformError("rad reached an axiom that cannot absorb it: " +
                         render(node.sequent));
  }

  std::vector<std::vector<PremiseOption>> options;
  for (const Derivation& c : node.children) options.push_back(premise_options(c.sequent));

  std::vector<RuleId> rules{node.inst.rule};
  for (RuleId v : replacement_rules())
    if (v != node.inst.rule && v != RuleId::Rad) rules.push_back(v);
  rules.push_back(RuleId::WPrime);
  rules.push_back(RuleId::CPrime);
  rules.push_back(RuleId::WUnitTimes);
  rules.push_back(RuleId::WUnitPlus);

  // try cheap adjustments first: fewer changed premises, no inst-wraps
  auto cost = [](const PremiseOption& o) { return o.kind == 0 ? 0 : o.kind == 3 ? 1 : o.kind; };

  for (RuleId v : rules) {
    if (rule_arity(v) != static_cast<int>(node.children.size())) continue;
    std::vector<std::size_t> pick(options.size(), 0);
    // enumerate the small cartesian product in cost order
    std::vector<std::vector<std::size_t>> order;
    {
      std::vector<std::size_t> idx(options.size(), 0);
      std::vector<std::vector<std::size_t>> all;
      auto rec = [&](auto&& self, std::size_t at) -> void {
        if (at == options.size()) {
          all.push_back(idx);
          return;
        }
        for (std::size_t k = 0; k < options[at].size(); ++k) {
          idx[at] = k;
          self(self, at + 1);
        }
      };
      rec(rec, 0);
      std::stable_sort(all.begin(), all.end(), [&](const auto& x, const auto& y) {
        int cx = 0, cy = 0;
        for (std::size_t i = 0; i < x.size(); ++i) cx += cost(options[i][x[i]]);
        for (std::size_t i = 0; i < y.size(); ++i) cy += cost(options[i][y[i]]);
        return cx < cy;
      });
      order = std::move(all);
    }
    for (const auto& idx : order) {
      // at least one premise must change unless the rule itself changes
      std::vector<Sequent> prem;
      for (std::size_t i = 0; i < idx.size(); ++i) prem.push_back(options[i][idx[i]].sequent);
      RuleInstance inst;
      inst.rule = v;
      if (!check_inference(System::SLBIPlus, inst, prem, target)) continue;
      Derivation out;
      out.sequent = target;
      out.inst.rule = v;
      out.inst.sigma = find_sigma(v, prem, target);
      bool good = true;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        try {
          out.children.push_back(materialize(node.children[i], options[i][idx[i]]));
        } catch (const TransformError&) {
          good = false;
          break;
        }
      }
      if (good) return out;
    }
  }
  throw TransformError("rad instance matching no rewrite at " + render(node.sequent) +
                       " (" + rule_name(node.inst.rule) + ")");
}

// depth of the highest Rad node; -1 if none
int topmost_rad(const Derivation& d, int depth, int& best_depth, const Derivation** where) {
  if (d.inst.rule == RuleId::Rad && depth > best_depth) {
    best_depth = depth;
    *where = &d;
  }
  for (const Derivation& c : d.children) topmost_rad(c, depth + 1, best_depth, where);
  return best_depth;
}

bool rewrite_topmost_rad(Derivation& d) {
  // find the deepest Rad and splice its replacement in place
  int best = -1;
  const Derivation* where = nullptr;
  topmost_rad(d, 0, best, &where);
  if (!where) return false;

  std::function<bool(Derivation&)> walk = [&](Derivation& n) -> bool {
    if (&n == where) {
      const Derivation& child = n.children[0];
      Loc radical;
      bool found = false;
      for (const Loc& r : radical_occurrences(child.sequent.context)) {
        if (permutes(remove_at(child.sequent.context, r), n.sequent.context)) {
          radical = r;
          found = true;
          break;
        }
      }
      if (!found) throw TransformError("Rad instance without a matching radical");
      Derivation replacement = push_rad(child, radical);
      n = std::move(replacement);
      return true;
    }
    for (Derivation& c : n.children)
      if (walk(c)) return true;
    return false;
  };
  return walk(d);
}

}  // namespace

Derivation eliminate_rad(const Derivation& d) {
  Derivation out = d;
  int guard = 0;
  while (rewrite_topmost_rad(out)) {
    if (++guard > 100000) throw TransformError("rad elimination diverged");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Appendix-E labelling

namespace {

// recursive labelled bunch mirroring Bunch::make semantics
struct LNode {
  BunchKind kind = BunchKind::UnitPlus;
  Formula formula;
  FormulaLabels flabels;
  int label = -1;  // Mul node label
  std::vector<LNode> kids;
};

LNode lnode_unit(BunchKind k) {
  LNode n;
  n.kind = k;
  return n;
}

LNode lnode_leaf(Formula f, FormulaLabels labels) {
  LNode n;
  n.kind = BunchKind::Leaf;
  n.formula = std::move(f);
  n.flabels = std::move(labels);
  return n;
}

LNode lnode_make(BunchKind former, std::vector<LNode> kids, int label) {
  std::vector<LNode> flat;
  for (LNode& k : kids) {
    if (k.kind == former) {
      for (LNode& gk : k.kids) flat.push_back(std::move(gk));  // inner label dropped
    } else {
      flat.push_back(std::move(k));
    }
  }
  if (flat.size() == 1) return flat[0];
  LNode n;
  n.kind = former;
  n.label = former == BunchKind::Mul ? label : -1;
  n.kids = std::move(flat);
  return n;
}

Bunch lnode_shape(const LNode& n) {
  switch (n.kind) {
    case BunchKind::UnitPlus: return Bunch::unit_plus();
    case BunchKind::UnitTimes: return Bunch::unit_times();
    case BunchKind::Leaf: return Bunch::leaf(n.formula);
    default: {
      std::vector<Bunch> kids;
      for (const LNode& k : n.kids) kids.push_back(lnode_shape(k));
      return Bunch::make(n.kind, std::move(kids));
    }
  }
}

const LNode& lnode_at(const LNode& n, const Path& p) {
  const LNode* cur = &n;
  for (int i : p) cur = &cur->kids.at(i);
  return *cur;
}

LNode lnode_group(const LNode& node, const std::vector<int>& members, int label) {
  if (members.size() == 1) return node.kids[members[0]];
  std::vector<LNode> picked;
  for (int i : members) picked.push_back(node.kids[i]);
  return lnode_make(node.kind, std::move(picked), node.kind == BunchKind::Mul ? label : -1);
}

LNode lnode_sub(const LNode& n, const Loc& loc) {
  const LNode& at = lnode_at(n, loc.node);
  if (!loc.is_group()) return at;
  return lnode_group(at, loc.members, at.label);
}

LNode lnode_replace(const LNode& g, const Loc& loc, LNode with) {
  if (loc.node.empty() && !loc.is_group()) return with;
  if (!loc.is_group()) {
    Path pp(loc.node.begin(), loc.node.end() - 1);
    int i = loc.node.back();
    // rebuild along the spine
    std::function<LNode(const LNode&, std::size_t)> rb = [&](const LNode& n,
                                                             std::size_t depth) -> LNode {
      LNode out = n;
      if (depth == pp.size()) {
        std::vector<LNode> kids = n.kids;
        kids[i] = std::move(with);
        return lnode_make(n.kind, std::move(kids), n.label);
      }
      out.kids[loc.node[depth]] = rb(n.kids[loc.node[depth]], depth + 1);
      // re-flatten in case the child changed kind
      return lnode_make(out.kind, std::move(out.kids), out.label);
    };
    if (pp.empty()) {
      LNode out = g;
      std::vector<LNode> kids = g.kids;
      kids[i] = std::move(with);
      return lnode_make(g.kind, std::move(kids), g.label);
    }
    return rb(g, 0);
  }
  // group: drop members, append `with`
  const LNode& node = lnode_at(g, loc.node);
  std::vector<LNode> kids;
  for (std::size_t j = 0; j < node.kids.size(); ++j)
    if (std::find(loc.members.begin(), loc.members.end(), static_cast<int>(j)) ==
        loc.members.end())
      kids.push_back(node.kids[j]);
  kids.push_back(std::move(with));
  LNode rebuilt = lnode_make(node.kind, std::move(kids), node.label);
  return lnode_replace(g, Loc{loc.node, {}}, std::move(rebuilt));
}

LNode lnode_remove(const LNode& g, const Path& node_path, const std::vector<int>& members) {
  const LNode& node = lnode_at(g, node_path);
  std::vector<LNode> kids;
  for (std::size_t j = 0; j < node.kids.size(); ++j)
    if (std::find(members.begin(), members.end(), static_cast<int>(j)) == members.end())
      kids.push_back(node.kids[j]);
  LNode rebuilt = kids.size() == 1 ? kids[0] : lnode_make(node.kind, std::move(kids), node.label);
  return lnode_replace(g, Loc{node_path, {}}, std::move(rebuilt));
}

FormulaLabels restrict_labels(const FormulaLabels& in, int side) {
  FormulaLabels out;
  for (const auto& [pos, label] : in) {
    if (pos.empty() || pos[0] != side) continue;
    out[std::vector<int>(pos.begin() + 1, pos.end())] = label;
  }
  return out;
}

void formula_mult_positions(const Formula& f, std::vector<int>& prefix,
                            std::vector<std::vector<int>>& out) {
  if (f.is_mult_binary()) out.push_back(prefix);
  if (f.is_binary()) {
    prefix.push_back(0);
    formula_mult_positions(f.left(), prefix, out);
    prefix.back() = 1;
    formula_mult_positions(f.right(), prefix, out);
    prefix.pop_back();
  }
}

FormulaLabels fresh_formula_labels(const Formula& f, int& counter) {
  FormulaLabels out;
  std::vector<int> prefix;
  std::vector<std::vector<int>> positions;
  formula_mult_positions(f, prefix, positions);
  for (auto& p : positions) out[p] = counter++;
  return out;
}

LNode label_fresh(const Bunch& g, int& counter) {
  switch (g.kind()) {
    case BunchKind::UnitPlus: return lnode_unit(BunchKind::UnitPlus);
    case BunchKind::UnitTimes: return lnode_unit(BunchKind::UnitTimes);
    case BunchKind::Leaf: return lnode_leaf(g.formula(), fresh_formula_labels(g.formula(), counter));
    default: {
      std::vector<LNode> kids;
      for (const Bunch& c : g.children()) kids.push_back(label_fresh(c, counter));
      int label = g.kind() == BunchKind::Mul ? counter++ : -1;
      LNode n;
      n.kind = g.kind();
      n.label = label;
      n.kids = std::move(kids);
      return n;
    }
  }
}

// remap labels onto a ~=-equal target shape (stable within ~=-equal classes)
LNode remap_to(const LNode& src, const Bunch& target) {
  assert(src.kind == target.kind());
  LNode out;
  out.kind = src.kind;
  out.label = src.label;
  if (src.kind == BunchKind::Leaf) {
    out.formula = src.formula;
    out.flabels = src.flabels;
    return out;
  }
  if (src.kids.empty()) return out;
  std::vector<bool> used(src.kids.size(), false);
  for (const Bunch& tc : target.children()) {
    Bunch want = canonicalize(tc);
    bool found = false;
    for (std::size_t i = 0; i < src.kids.size(); ++i) {
      if (used[i]) continue;
      if (canonicalize(lnode_shape(src.kids[i])) == want) {
        used[i] = true;
        out.kids.push_back(remap_to(src.kids[i], tc));
        found = true;
        break;
      }
    }
    if (!found) throw TransformError("label remap across non-permutation");
  }
  return out;
}

struct LSequent {
  LNode context;
  Formula goal;
  FormulaLabels goal_labels;
};

// per-rule transport of labels from a labelled conclusion to the premises
std::vector<LSequent> transport(const Derivation& node, const BackwardInstance& cand,
                                const LSequent& concl, int& counter) {
  const LNode& ctx = concl.context;
  RuleId r = node.inst.rule;
  auto leaf_labels_at = [&](const Path& p) { return lnode_at(ctx, p).flabels; };

  std::vector<LSequent> out;
  switch (r) {
    case RuleId::OneL:
    case RuleId::TopL: {
      const Loc& at = cand.inst.active[0];
      Bunch unit = r == RuleId::OneL ? Bunch::unit_times() : Bunch::unit_plus();
      out.push_back({lnode_replace(ctx, at,
                                   lnode_unit(unit.kind())),
                     concl.goal, concl.goal_labels});
      break;
    }
    case RuleId::AndL:
    case RuleId::StarL: {
      const Loc& at = cand.inst.active[0];
      FormulaLabels f = leaf_labels_at(at.node);
      const Formula& phi = lnode_at(ctx, at.node).formula;
      LNode l = lnode_leaf(phi.left(), restrict_labels(f, 0));
      LNode rr = lnode_leaf(phi.right(), restrict_labels(f, 1));
      BunchKind former = r == RuleId::AndL ? BunchKind::Add : BunchKind::Mul;
      int label = -1;
      if (r == RuleId::StarL) {
        auto it = f.find({});
        label = it == f.end() ? counter++ : it->second;
      }
      std::vector<LNode> pair;
      pair.push_back(std::move(l));
      pair.push_back(std::move(rr));
      out.push_back({lnode_replace(ctx, at, lnode_make(former, std::move(pair), label)),
                     concl.goal, concl.goal_labels});
      break;
    }
    case RuleId::OrL: {
      const Loc& at = cand.inst.active[0];
      FormulaLabels f = leaf_labels_at(at.node);
      const Formula& phi = lnode_at(ctx, at.node).formula;
      out.push_back({lnode_replace(ctx, at, lnode_leaf(phi.left(), restrict_labels(f, 0))),
                     concl.goal, concl.goal_labels});
      out.push_back({lnode_replace(ctx, at, lnode_leaf(phi.right(), restrict_labels(f, 1))),
                     concl.goal, concl.goal_labels});
      break;
    }
    case RuleId::OrR1:
      out.push_back({ctx, concl.goal.left(), restrict_labels(concl.goal_labels, 0)});
      break;
    case RuleId::OrR2:
      out.push_back({ctx, concl.goal.right(), restrict_labels(concl.goal_labels, 1)});
      break;
    case RuleId::ImpR:
    case RuleId::WandR: {
      BunchKind former = r == RuleId::ImpR ? BunchKind::Add : BunchKind::Mul;
      LNode added = lnode_leaf(concl.goal.left(), restrict_labels(concl.goal_labels, 0));
      int label = -1;
      if (r == RuleId::WandR) {
        auto it = concl.goal_labels.find({});
        label = it == concl.goal_labels.end() ? counter++ : it->second;
      }
      std::vector<LNode> pair;
      pair.push_back(ctx);
      pair.push_back(std::move(added));
      LNode nctx = lnode_make(former, std::move(pair), label);
      out.push_back({std::move(nctx), concl.goal.right(),
                     restrict_labels(concl.goal_labels, 1)});
      break;
    }
    case RuleId::AndR:
    case RuleId::StarR: {
      const Loc& a = cand.inst.active[0];
      const Loc& b = cand.inst.active[1];
      out.push_back({lnode_sub(ctx, a), concl.goal.left(), restrict_labels(concl.goal_labels, 0)});
      out.push_back({lnode_sub(ctx, b), concl.goal.right(), restrict_labels(concl.goal_labels, 1)});
      break;
    }
    case RuleId::AndR1:
    case RuleId::StarR1: {
      LNode unit = lnode_unit(r == RuleId::AndR1 ? BunchKind::UnitPlus : BunchKind::UnitTimes);
      out.push_back({std::move(unit), concl.goal.left(), restrict_labels(concl.goal_labels, 0)});
      out.push_back({ctx, concl.goal.right(), restrict_labels(concl.goal_labels, 1)});
      break;
    }
    case RuleId::AndR2:
    case RuleId::StarR2: {
      LNode unit = lnode_unit(r == RuleId::AndR2 ? BunchKind::UnitPlus : BunchKind::UnitTimes);
      out.push_back({ctx, concl.goal.left(), restrict_labels(concl.goal_labels, 0)});
      out.push_back({std::move(unit), concl.goal.right(), restrict_labels(concl.goal_labels, 1)});
      break;
    }
    case RuleId::ImpL:
    case RuleId::ImpL1:
    case RuleId::ImpL2:
    case RuleId::ImpL3:
    case RuleId::WandL:
    case RuleId::WandL1:
    case RuleId::WandL2:
    case RuleId::WandL3: {
      bool is_wand = r == RuleId::WandL || r == RuleId::WandL1 || r == RuleId::WandL2 ||
                     r == RuleId::WandL3;
      BunchKind former = is_wand ? BunchKind::Mul : BunchKind::Add;
      BunchKind unit_kind = is_wand ? BunchKind::UnitTimes : BunchKind::UnitPlus;
      const Loc& at = cand.inst.active[0];  // the resolved formula leaf
      FormulaLabels f = leaf_labels_at(at.node);
      const Formula& phi = lnode_at(ctx, at.node).formula;
      LNode psi = lnode_leaf(phi.right(), restrict_labels(f, 1));
      bool unit_prem1 = r == RuleId::ImpL2 || r == RuleId::ImpL3 || r == RuleId::WandL2 ||
                        r == RuleId::WandL3;
      bool unit_in_prem2 = r == RuleId::ImpL1 || r == RuleId::ImpL3 || r == RuleId::WandL1 ||
                           r == RuleId::WandL3;
      bool has_drop = (r == RuleId::ImpL || r == RuleId::WandL || r == RuleId::ImpL1 ||
                       r == RuleId::WandL1);

      // premise 1
      if (unit_prem1) {
        out.push_back({lnode_unit(unit_kind), phi.left(), restrict_labels(f, 0)});
      } else {
        const Loc& d = cand.inst.active[1];
        const LNode& parent = lnode_at(ctx, d.node);
        out.push_back({lnode_group(parent, d.members.empty()
                                               ? std::vector<int>{d.node.back()}
                                               : d.members,
                                   parent.label),
                       phi.left(), restrict_labels(f, 0)});
      }

      // premise 2: drop D (if any), swap the leaf for psi (plus the unit)
      LNode prem2 = ctx;
      if (unit_in_prem2) {
        std::vector<LNode> pair;
        pair.push_back(lnode_unit(unit_kind));
        pair.push_back(std::move(psi));
        const LNode& host = lnode_at(ctx, at.node);
        prem2 = lnode_replace(ctx, at, lnode_make(former, std::move(pair), -1));
        (void)host;
      } else {
        prem2 = lnode_replace(ctx, at, std::move(psi));
      }
      if (has_drop && cand.inst.active.size() >= 2 && !unit_prem1) {
        const Loc& d = cand.inst.active[1];
        std::vector<int> members =
            d.members.empty() ? std::vector<int>{d.node.back()} : d.members;
        Path host = d.members.empty() ? Path(d.node.begin(), d.node.end() - 1) : d.node;
        prem2 = lnode_remove(prem2, host, members);
      }
      out.push_back({std::move(prem2), concl.goal, concl.goal_labels});
      // premise order: (Delta |- phi, Gamma... ) -- generators emit 1 then 2
      break;
    }
    case RuleId::WPrime:
    case RuleId::WUnitPlus:
    case RuleId::WUnitTimes: {
      const Loc& at = cand.inst.active[0];
      std::vector<int> members = at.members.empty() ? std::vector<int>{at.node.back()} : at.members;
      Path host = at.members.empty() ? Path(at.node.begin(), at.node.end() - 1) : at.node;
      out.push_back({lnode_remove(ctx, host, members), concl.goal, concl.goal_labels});
      break;
    }
    case RuleId::CPrime:
    case RuleId::C: {
      const Loc& at = cand.inst.active[0];
      LNode copy = lnode_sub(ctx, at);
      std::vector<LNode> pair;
      pair.push_back(copy);
      pair.push_back(copy);  // labels copied: the one duplicating rule
      out.push_back({lnode_replace(ctx, at, lnode_make(BunchKind::Add, std::move(pair), -1)),
                     concl.goal, concl.goal_labels});
      break;
    }
    case RuleId::Inst: {
      const Loc& at = cand.inst.active[0];
      out.push_back({lnode_replace(ctx, at, lnode_unit(BunchKind::UnitPlus)), concl.goal,
                     concl.goal_labels});
      break;
    }
    case RuleId::Rad: {
      const Loc& at = cand.inst.active[0];
      const LNode& x = lnode_at(ctx, at.node);
      std::vector<LNode> pair;
      pair.push_back(x);
      pair.push_back(lnode_unit(BunchKind::UnitPlus));
      int label = counter++;
      out.push_back({lnode_replace(ctx, at, lnode_make(BunchKind::Mul, std::move(pair), label)),
                     concl.goal, concl.goal_labels});
      break;
    }
    case RuleId::EPrime:
    case RuleId::E:
      out.push_back({ctx, concl.goal, concl.goal_labels});
      break;
    default:
      throw TransformError("labelling does not support rule " + rule_name(r));
  }
  return out;
}

void lnode_to_maps(const LNode& n, Path& p, LabelledBunch& out) {
  if (n.kind == BunchKind::Mul && n.label >= 0) out.mul_labels[p] = n.label;
  if (n.kind == BunchKind::Leaf && !n.flabels.empty()) out.leaf_labels[p] = n.flabels;
  for (std::size_t i = 0; i < n.kids.size(); ++i) {
    p.push_back(static_cast<int>(i));
    lnode_to_maps(n.kids[i], p, out);
    p.pop_back();
  }
}

LabelledBunch lnode_to_labelled(const LNode& n) {
  LabelledBunch out;
  out.shape = lnode_shape(n);
  Path p;
  lnode_to_maps(n, p, out);
  return out;
}

LNode labelled_to_lnode(const LabelledBunch& lb) {
  std::function<LNode(const Bunch&, Path&)> rec = [&](const Bunch& b, Path& p) -> LNode {
    LNode n;
    n.kind = b.kind();
    if (b.kind() == BunchKind::Leaf) {
      n.formula = b.formula();
      auto it = lb.leaf_labels.find(p);
      if (it != lb.leaf_labels.end()) n.flabels = it->second;
    }
    if (b.kind() == BunchKind::Mul) {
      auto it = lb.mul_labels.find(p);
      if (it != lb.mul_labels.end()) n.label = it->second;
    }
    for (std::size_t i = 0; i < b.children().size(); ++i) {
      p.push_back(static_cast<int>(i));
      n.kids.push_back(rec(b.children()[i], p));
      p.pop_back();
    }
    return n;
  };
  Path p;
  return rec(lb.shape, p);
}

LabelledDerivation well_label_rec(const Derivation& node, LSequent ls, int& counter) {
  LabelledDerivation out;
  out.rule = node.inst.rule;
  out.sequent.context = lnode_to_labelled(ls.context);
  out.sequent.goal = ls.goal;
  out.sequent.goal_labels = ls.goal_labels;
  if (node.children.empty()) return out;

  auto cand = match_node(node);
  if (!cand) throw TransformError("labelling: unmatched inference at " + render(node.sequent));
  std::vector<LSequent> prem = transport(node, *cand, ls, counter);
  if (prem.size() != node.children.size())
    throw TransformError("labelling: premise arity mismatch");
  for (std::size_t i = 0; i < prem.size(); ++i) {
    // align the transported labels with the actual child sequent
    LNode remapped = remap_to(prem[i].context, node.children[i].sequent.context);
    LSequent child{std::move(remapped), node.children[i].sequent.goal, prem[i].goal_labels};
    out.children.push_back(well_label_rec(node.children[i], std::move(child), counter));
  }
  return out;
}

}  // namespace

LabelledDerivation well_label(const Derivation& d) {
  int counter = 0;
  LSequent root;
  root.context = label_fresh(d.sequent.context, counter);
  root.goal = d.sequent.goal;
  root.goal_labels = fresh_formula_labels(d.sequent.goal, counter);
  return well_label_rec(d, std::move(root), counter);
}

// ---------------------------------------------------------------------------
// Label sets

namespace {

LabelMultiset merge(LabelMultiset a, const LabelMultiset& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

// labels realizing the multiplicative width of a formula; ties resolved left
LabelMultiset omega_labels(const Formula& f, const FormulaLabels& labels,
                           std::vector<int>& pos) {
  switch (f.kind()) {
    case FormulaKind::Atom:
    case FormulaKind::Top:
    case FormulaKind::Bot:
    case FormulaKind::One:
      return {};
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Imp: {
      int wl = mult_width(f.left()), wr = mult_width(f.right());
      pos.push_back(wl >= wr ? 0 : 1);
      LabelMultiset out = omega_labels(wl >= wr ? f.left() : f.right(), labels, pos);
      pos.pop_back();
      return out;
    }
    default: {
      LabelMultiset out;
      auto it = labels.find(pos);
      if (it != labels.end()) out.push_back(it->second);
      pos.push_back(0);
      out = merge(std::move(out), omega_labels(f.left(), labels, pos));
      pos.back() = 1;
      out = merge(std::move(out), omega_labels(f.right(), labels, pos));
      pos.pop_back();
      return out;
    }
  }
}

LabelMultiset lambda_of(const LNode& n) {
  switch (n.kind) {
    case BunchKind::UnitPlus:
    case BunchKind::UnitTimes:
      return {};
    case BunchKind::Leaf: {
      std::vector<int> pos;
      return omega_labels(n.formula, n.flabels, pos);
    }
    case BunchKind::Add:
      return {};
    case BunchKind::Mul:
      return n.label >= 0 ? LabelMultiset{n.label} : LabelMultiset{};
  }
  return {};
}

void all_sets_rec(const LNode& n, const LabelMultiset& acc, std::vector<LabelMultiset>& out) {
  LabelMultiset here = merge(acc, lambda_of(n));
  if (n.kids.empty()) {
    out.push_back(here);
    return;
  }
  for (const LNode& k : n.kids) all_sets_rec(k, here, out);
}

}  // namespace

std::vector<LabelMultiset> label_sets(const LabelledBunch& g) {
  LNode root = labelled_to_lnode(g);
  std::vector<LabelMultiset> out;
  all_sets_rec(root, {}, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

LabelMultiset critical_label_set(const LabelledBunch& g) {
  LNode root = labelled_to_lnode(g);
  LabelMultiset out;
  const LNode* cur = &root;
  while (true) {
    out = merge(std::move(out), lambda_of(*cur));
    if (cur->kids.empty()) break;
    const LNode* best = nullptr;
    int best_depth = -1;
    for (const LNode& k : cur->kids) {
      int dk = depth(lnode_shape(k));
      if (dk > best_depth) {
        best_depth = dk;
        best = &k;
      }
    }
    cur = best;
  }
  return out;
}

LabelMultiset critical_label_set(const Formula& f, const FormulaLabels& labels) {
  std::vector<int> pos;
  return omega_labels(f, labels, pos);
}

bool labels_within_bound(const LabelledSequent& s) {
  LNode root = labelled_to_lnode(s.context);
  auto count_ok = [](const LabelMultiset& a, const LabelMultiset& b) {
    std::map<int, int> counts;
    for (int x : a) ++counts[x];
    for (int x : b) ++counts[x];
    for (auto& [label, c] : counts) {
      (void)label;
      if (c > 2) return false;
    }
    return true;
  };

  // context paired with the goal
  std::vector<LabelMultiset> ctx_sets = label_sets(s.context);
  std::vector<int> pos;
  LabelMultiset goal_set = omega_labels(s.goal, s.goal_labels, pos);
  for (const LabelMultiset& l : ctx_sets)
    if (!count_ok(l, goal_set)) return false;

  // ~-related additive data: members of one additive set, one being a leaf
  for (const AdditiveSetView& set : additive_sets(s.context.shape)) {
    for (const Path& a : set.members) {
      for (const Path& b : set.members) {
        if (a == b) continue;
        const LNode& nb = lnode_at(root, b);
        if (nb.kind != BunchKind::Leaf) continue;
        std::vector<LabelMultiset> la;
        all_sets_rec(lnode_at(root, a), {}, la);
        std::vector<int> p2;
        LabelMultiset lb = omega_labels(nb.formula, nb.flabels, p2);
        for (const LabelMultiset& l : la)
          if (!count_ok(l, lb)) return false;
      }
    }
  }
  return true;
}

}  // namespace bi
