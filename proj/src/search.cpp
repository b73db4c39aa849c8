#include "bi/search.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <future>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "bi/rewriting.hpp"
#include "bi/transform.hpp"

namespace bi {

namespace {

void collect_subformulas(const Formula& f, std::vector<Formula>& out) {
  for (const Formula& g : out)
    if (g == f) return;
  out.push_back(f);
  if (f.is_binary()) {
    collect_subformulas(f.left(), out);
    collect_subformulas(f.right(), out);
  }
}

}  // namespace

std::vector<Formula> subformula_closure(const Sequent& s) {
  std::vector<Formula> out;
  for (auto& [p, b] : subbunches(s.context)) {
    (void)p;
    if (b.kind() == BunchKind::Leaf) collect_subformulas(b.formula(), out);
  }
  collect_subformulas(s.goal, out);
  return out;
}

namespace {

std::vector<Bunch> combinations(BunchKind former, int n, const std::vector<Bunch>& b) {
  std::vector<Bunch> out;
  std::set<std::string> seen;
  std::vector<Bunch> stack;
  auto push = [&](const Bunch& g) {
    Bunch c = canonicalize(g);
    if (seen.insert(render(c)).second) out.push_back(c);
  };
  auto rec = [&](auto&& self, std::size_t from) -> void {
    if (!stack.empty()) {
      if (stack.size() == 1)
        push(stack[0]);
      else
        push(Bunch::make(former, stack));
    }
    if (static_cast<int>(stack.size()) >= n) return;
    for (std::size_t i = from; i < b.size(); ++i) {
      stack.push_back(b[i]);
      self(self, i);  // multisets: repetition allowed
      stack.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace

std::vector<Bunch> oplus(int n, const std::vector<Bunch>& b) {
  return combinations(BunchKind::Add, n, b);
}

std::vector<Bunch> otimes(int n, const std::vector<Bunch>& b) {
  return combinations(BunchKind::Mul, n, b);
}

SearchBounds default_bounds(const Sequent& normal_goal) {
  SearchBounds b;
  b.a = 3;
  b.m = omega(normal_goal);
  // a zero depth bound would exclude the ox leaves that I / -* rules need
  b.d = std::max(2 * delta(normal_goal), 1);
  return b;
}

SequentSpace::SequentSpace(std::vector<Formula> vocabulary, SearchBounds bounds)
    : vocab_(std::move(vocabulary)), bounds_(bounds) {}

bool SequentSpace::contains(const Bunch& g) const {
  for (auto& [p, b] : subbunches(g)) {
    (void)p;
    if (b.kind() != BunchKind::Leaf) continue;
    bool known = false;
    for (const Formula& f : vocab_)
      if (f == b.formula()) { known = true; break; }
    if (!known) return false;
  }
  return multiplicity(g) <= bounds_.a && mult_width(g) <= bounds_.m && depth(g) <= bounds_.d;
}

bool SequentSpace::contains(const Sequent& s) const {
  bool goal_known = false;
  for (const Formula& f : vocab_)
    if (f == s.goal) { goal_known = true; break; }
  return goal_known && contains(s.context) && bounds_.admits(s);
}

std::vector<Bunch> SequentSpace::enumerate_bunches(std::size_t limit) const {
  std::vector<Bunch> pool;
  std::set<std::string> seen;
  auto admit = [&](const Bunch& g) {
    if (multiplicity(g) > bounds_.a || mult_width(g) > bounds_.m || depth(g) > bounds_.d)
      return;
    Bunch c = canonicalize(g);
    if (seen.insert(render(c)).second) {
      pool.push_back(c);
      if (pool.size() > limit)
        throw std::runtime_error("sequent space enumeration exceeds limit");
    }
  };
  for (const Formula& f : vocab_) admit(Bunch::leaf(f));
  admit(Bunch::unit_plus());
  admit(Bunch::unit_times());
  // pairwise closure: flattening makes wider nodes reachable from pairs
  std::size_t frontier_start = 0;
  while (frontier_start < pool.size()) {
    std::size_t frontier_end = pool.size();
    for (std::size_t i = 0; i < frontier_end; ++i) {
      for (std::size_t j = std::max(i, frontier_start); j < frontier_end; ++j) {
        admit(Bunch::make(BunchKind::Add, {pool[i], pool[j]}));
        admit(Bunch::make(BunchKind::Mul, {pool[i], pool[j]}));
        if (i != j) {
          admit(Bunch::make(BunchKind::Add, {pool[j], pool[i]}));
          admit(Bunch::make(BunchKind::Mul, {pool[j], pool[i]}));
        }
      }
    }
    frontier_start = frontier_end;
  }
  return pool;
}

std::vector<Sequent> SequentSpace::enumerate_sequents(std::size_t limit) const {
  std::vector<Sequent> out;
  for (const Bunch& g : enumerate_bunches(limit)) {
    for (const Formula& f : vocab_) {
      Sequent s{g, f};
      if (bounds_.admits(s)) {
        out.push_back(s);
        if (out.size() > limit)
          throw std::runtime_error("sequent space enumeration exceeds limit");
      }
    }
  }
  return out;
}

SequentSpace generate_space(const Sequent& s, const SearchBounds& b) {
  return SequentSpace(subformula_closure(s), b);
}

// ---------------------------------------------------------------------------
// Tabled backward search

namespace {

struct AbortSearch {};

// Per branch the proof is explored in the regimented phase pattern read
// upward: a weakening run, then a contraction run, then the next action.
// Once a contraction is taken no weakening may follow until an action resets
// the phase. The root starts contraction-side: proofs end in a normalizing
// phase. Strategy runs of a regimented action are short (they undo only the
// action's own active-side redexes), so run lengths are capped.
constexpr int kMaxRun = 4;

struct SearchState {
  bool contract_only = true;
  int run = 0;

  int encode() const { return (contract_only ? kMaxRun : 0) + run; }
  static constexpr int kStates = 2 * kMaxRun;
};

std::optional<SearchState> transition(SearchState s, StepClass cls) {
  switch (cls) {
    case StepClass::Action:
      return SearchState{false, 0};
    case StepClass::Contraction: {
      int crun = s.contract_only ? s.run : 0;
      if (crun + 1 > kMaxRun - 1) return std::nullopt;
      return SearchState{true, crun + 1};
    }
    case StepClass::Weakening:
      if (s.contract_only) return std::nullopt;
      if (s.run + 1 > kMaxRun - 1) return std::nullopt;
      return SearchState{false, s.run + 1};
  }
  return std::nullopt;
}

bool hatted_action(const Sequent& goal, const BackwardInstance& opt) {
  return frozen_reduce(goal, opt.inst.active).sequent.context == goal.context;
}

int rule_priority(RuleId r) {
  if (is_axiom(r)) return 0;
  switch (r) {
    case RuleId::OneL:
    case RuleId::TopL:
    case RuleId::AndL:
    case RuleId::StarL:
    case RuleId::ImpR:
    case RuleId::WandR:
      return 1;
    case RuleId::OrR1:
    case RuleId::OrR2:
    case RuleId::OrL:
      return 2;
    case RuleId::AndR:
    case RuleId::StarR:
    case RuleId::ImpL:
    case RuleId::WandL:
    case RuleId::AndR1:
    case RuleId::AndR2:
    case RuleId::StarR1:
    case RuleId::StarR2:
    case RuleId::ImpL1:
    case RuleId::ImpL2:
    case RuleId::ImpL3:
    case RuleId::WandL1:
    case RuleId::WandL2:
    case RuleId::WandL3:
      return 3;
    case RuleId::WUnitPlus:
    case RuleId::WUnitTimes:
    case RuleId::WPrime:
    case RuleId::Inst:
      return 4;
    case RuleId::CPrime:
      return 5;
    default:
      return 6;
  }
}

// Deduplicated, filtered backward instances with interned premises.
struct Edge {
  RuleInstance inst;
  StepClass cls;
  std::vector<int> premises;  // sequent ids
};

// Tier 1: the backward-reachable closure of the goal is built in full, then
// provability is the least fixpoint of the rules over it. Exact Provable and
// Unprovable verdicts when the closure fits in the node budget.
struct Exhauster {
  System system;
  SearchBounds bounds;
  long cap;
  std::atomic<long>& nodes;

  std::vector<Sequent> seqs;
  std::unordered_map<Sequent, int, SequentHash> ids;
  std::vector<std::vector<Edge>> edges;

  std::vector<unsigned> reached;  // state bitmask per sequent
  std::vector<bool> expanded;

  int intern(const Sequent& s) {
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(seqs.size());
    ids.emplace(s, id);
    seqs.push_back(s);
    edges.emplace_back();
    reached.push_back(0);
    expanded.push_back(false);
    return id;
  }

  void expand_node(int id) {
    if (expanded[id]) return;
    expanded[id] = true;
    Sequent goal = seqs[id];  // copy: seqs may reallocate below
    ++nodes;
    std::vector<Edge> es;
    std::set<std::string> tried;
    std::vector<BackwardInstance> options = expand(system, goal, bounds);
    std::stable_sort(options.begin(), options.end(),
                     [](const BackwardInstance& a, const BackwardInstance& b) {
                       return rule_priority(a.inst.rule) < rule_priority(b.inst.rule);
                     });
    for (BackwardInstance& opt : options) {
      StepClass cls = classify_instance(goal, opt);
      if (cls == StepClass::Action && !hatted_action(goal, opt)) continue;
      std::string sig = rule_name(opt.inst.rule) + "|";
      std::vector<Sequent> canon;
      for (const Sequent& p : opt.premises) {
        canon.push_back(canonicalize(p));
        sig += render(canon.back()) + "|";
      }
      if (!tried.insert(sig).second) continue;
      Edge e;
      e.inst = std::move(opt.inst);
      e.cls = cls;
      for (Sequent& p : canon) e.premises.push_back(intern(p));
      es.push_back(std::move(e));
    }
    edges[id] = std::move(es);
  }

  // closure over (sequent, state) pairs; returns false on budget overflow
  bool build(const Sequent& root) {
    std::deque<std::pair<int, int>> frontier;
    int rid = intern(root);
    int rst = SearchState{}.encode();
    reached[rid] |= 1u << rst;
    frontier.push_back({rid, rst});
    long pairs = 1;
    while (!frontier.empty()) {
      auto [id, st] = frontier.front();
      frontier.pop_front();
      expand_node(id);
      SearchState state{st >= kMaxRun, st % kMaxRun};
      for (const Edge& e : edges[id]) {
        std::optional<SearchState> next = transition(state, e.cls);
        if (!next) continue;
        unsigned bit = 1u << next->encode();
        for (int pid : e.premises) {
          if (reached[pid] & bit) continue;
          reached[pid] |= bit;
          frontier.push_back({pid, next->encode()});
          ++pairs;
        }
      }
      if (pairs > cap || nodes.load() > cap) return false;
    }
    return true;
  }

  // proved bitmask per sequent, witness edge per (sequent, state)
  std::vector<unsigned> proved;
  std::vector<std::array<int, SearchState::kStates>> witness;

  void saturate() {
    proved.assign(seqs.size(), 0);
    witness.resize(seqs.size());
    for (auto& w : witness) w.fill(-1);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t id = 0; id < seqs.size(); ++id) {
        unsigned todo = reached[id] & ~proved[id];
        if (!todo) continue;
        for (int st = 0; st < SearchState::kStates; ++st) {
          if (!(todo & (1u << st))) continue;
          SearchState state{st >= kMaxRun, st % kMaxRun};
          for (std::size_t ei = 0; ei < edges[id].size(); ++ei) {
            const Edge& e = edges[id][ei];
            std::optional<SearchState> next = transition(state, e.cls);
            if (!next) continue;
            bool all = true;
            for (int pid : e.premises)
              if (!(proved[pid] & (1u << next->encode()))) { all = false; break; }
            if (!all) continue;
            proved[id] |= 1u << st;
            witness[id][st] = static_cast<int>(ei);
            changed = true;
            break;
          }
        }
      }
    }
  }

  Derivation extract(int id, int st) const {
    const Edge& e = edges[id][witness[id][st]];
    SearchState state{st >= kMaxRun, st % kMaxRun};
    SearchState next = *transition(state, e.cls);
    Derivation d;
    d.sequent = seqs[id];
    d.inst = e.inst;
    for (int pid : e.premises) d.children.push_back(extract(pid, next.encode()));
    return d;
  }
};

// Tier 2 when the closure does not fit: iterative deepening on the action
// count finds proofs without exhausting the space; no Unprovable verdicts.
// Failures independent of the open branch are cached per budget; a concise
// proof repeats no sequent on a branch, so the caching never hides one.
struct Deepening {
  System system;
  SearchBounds bounds;
  long max_nodes;
  std::atomic<long>& nodes;
  std::unordered_map<Sequent, Derivation, SequentHash> proven;

  struct FailKey {
    Sequent seq;
    int state;
    bool operator==(const FailKey& o) const { return state == o.state && seq == o.seq; }
  };
  struct FailKeyHash {
    std::size_t operator()(const FailKey& k) const {
      return hash_value(k.seq) * 31 + static_cast<std::size_t>(k.state);
    }
  };
  std::unordered_map<FailKey, int, FailKeyHash> failed_at;  // max budget that failed

  struct Outcome {
    std::optional<Derivation> proof;
    bool dependent = false;
  };

  Outcome prove(const Sequent& goal, SearchState state, int budget,
                std::vector<Sequent>& branch) {
    auto known = proven.find(goal);
    if (known != proven.end()) return {known->second, false};
    // running out of budget is branch-independent: cacheable per budget
    if (budget <= 0) return {std::nullopt, false};
    auto failed = failed_at.find(FailKey{goal, state.encode()});
    if (failed != failed_at.end() && failed->second >= budget) return {std::nullopt, false};
    for (const Sequent& anc : branch)
      if (anc == goal) return {std::nullopt, true};
    if (++nodes >= max_nodes) throw AbortSearch{};

    branch.push_back(goal);
    std::set<std::string> tried;
    std::vector<BackwardInstance> options = expand(system, goal, bounds);
    std::stable_sort(options.begin(), options.end(),
                     [](const BackwardInstance& a, const BackwardInstance& b) {
                       return rule_priority(a.inst.rule) < rule_priority(b.inst.rule);
                     });
    std::optional<Derivation> result;
    bool dependent_any = false;
    for (BackwardInstance& opt : options) {
      StepClass cls = classify_instance(goal, opt);
      std::optional<SearchState> next = transition(state, cls);
      if (!next) continue;
      if (cls == StepClass::Action && !hatted_action(goal, opt)) continue;
      std::string sig = rule_name(opt.inst.rule) + "|";
      for (const Sequent& p : opt.premises) sig += render(canonicalize(p)) + "|";
      if (!tried.insert(sig).second) continue;

      int sub_budget = cls == StepClass::Action ? budget - 1 : budget;
      std::vector<Derivation> children;
      bool ok = true;
      for (const Sequent& prem : opt.premises) {
        Outcome sub = prove(canonicalize(prem), *next, sub_budget, branch);
        if (!sub.proof) {
          ok = false;
          dependent_any |= sub.dependent;
          break;
        }
        children.push_back(std::move(*sub.proof));
      }
      if (!ok) continue;
      Derivation d;
      d.sequent = goal;
      d.inst = opt.inst;
      d.children = std::move(children);
      proven.emplace(goal, d);
      result = std::move(d);
      break;
    }
    branch.pop_back();
    if (!result && !dependent_any) {
      int& worst = failed_at[FailKey{goal, state.encode()}];
      worst = std::max(worst, budget);
    }
    return {std::move(result), dependent_any};
  }
};

}  // namespace

namespace {

// Parallel mode precomputes edge lists for frontier levels with worker
// threads; reachability and saturation stay deterministic, so the verdict is
// schedule-independent.
bool build_parallel(Exhauster& ex, const Sequent& root, int workers) {
  int rid = ex.intern(root);
  int rst = SearchState{}.encode();
  ex.reached[rid] |= 1u << rst;
  std::vector<std::pair<int, int>> frontier{{rid, rst}};
  long pairs = 1;
  while (!frontier.empty()) {
    // expand the distinct sequents of this level concurrently
    std::vector<int> todo;
    for (auto& [id, st] : frontier) {
      (void)st;
      if (!ex.expanded[id]) todo.push_back(id);
    }
    std::sort(todo.begin(), todo.end());
    todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
    struct Prepared {
      int id;
      std::vector<std::pair<BackwardInstance, StepClass>> kept;
    };
    std::vector<Prepared> prepared(todo.size());
    std::atomic<std::size_t> cursor{0};
    auto work = [&]() {
      while (true) {
        std::size_t i = cursor.fetch_add(1);
        if (i >= todo.size()) return;
        prepared[i].id = todo[i];
        Sequent goal = ex.seqs[todo[i]];
        std::vector<BackwardInstance> options = expand(ex.system, goal, ex.bounds);
        std::stable_sort(options.begin(), options.end(),
                         [](const BackwardInstance& a, const BackwardInstance& b) {
                           return rule_priority(a.inst.rule) < rule_priority(b.inst.rule);
                         });
        for (BackwardInstance& opt : options) {
          StepClass cls = classify_instance(goal, opt);
          if (cls == StepClass::Action && !hatted_action(goal, opt)) continue;
          prepared[i].kept.push_back({std::move(opt), cls});
        }
        ++ex.nodes;
      }
    };
    std::vector<std::future<void>> futures;
    for (int w = 0; w < workers; ++w)
      futures.push_back(std::async(std::launch::async, work));
    for (auto& f : futures) f.get();

    for (Prepared& pr : prepared) {
      std::vector<Edge> es;
      std::set<std::string> tried;
      for (auto& [opt, cls] : pr.kept) {
        std::string sig = rule_name(opt.inst.rule) + "|";
        std::vector<Sequent> canon;
        for (const Sequent& p : opt.premises) {
          canon.push_back(canonicalize(p));
          sig += render(canon.back()) + "|";
        }
        if (!tried.insert(sig).second) continue;
        Edge e;
        e.inst = std::move(opt.inst);
        e.cls = cls;
        for (Sequent& p : canon) e.premises.push_back(ex.intern(p));
        es.push_back(std::move(e));
      }
      ex.edges[pr.id] = std::move(es);
      ex.expanded[pr.id] = true;
    }

    std::vector<std::pair<int, int>> next;
    for (auto& [id, st] : frontier) {
      SearchState state{st >= kMaxRun, st % kMaxRun};
      for (const Edge& e : ex.edges[id]) {
        std::optional<SearchState> nxt = transition(state, e.cls);
        if (!nxt) continue;
        unsigned bit = 1u << nxt->encode();
        for (int pid : e.premises) {
          if (ex.reached[pid] & bit) continue;
          ex.reached[pid] |= bit;
          next.push_back({pid, nxt->encode()});
          ++pairs;
        }
      }
    }
    if (pairs > ex.cap || ex.nodes.load() > ex.cap) return false;
    frontier = std::move(next);
  }
  return true;
}

}  // namespace

DecideResult decide(const Sequent& goal, const DecideOptions& opts) {
  DecideResult res;
  res.normal_goal = Sequent{normalize(goal.context).normal_form, goal.goal};
  res.bounds = opts.bounds ? *opts.bounds : default_bounds(res.normal_goal);
  Sequent root = canonicalize(res.normal_goal);

  std::atomic<long> nodes{0};
  std::optional<Derivation> proof;
  bool exhausted = false;

  // quick pass: most provable goals close within a few actions
  {
    Deepening quick{opts.system, res.bounds, 4000, nodes, {}};
    try {
      for (int cap = 1; cap <= 10 && !proof; ++cap) {
        std::vector<Sequent> branch;
        proof = quick.prove(root, SearchState{}, cap, branch).proof;
      }
    } catch (const AbortSearch&) {
    }
  }

  if (!proof) {
    long closure_cap = std::min<long>(opts.max_nodes, 60000);
    Exhauster ex{opts.system, res.bounds, closure_cap, nodes,
                 {},          {},         {},          {},
                 {},          {},         {}};
    bool complete = opts.parallel ? build_parallel(ex, root, 4) : ex.build(root);
    res.stats.frontier = static_cast<long>(ex.seqs.size());
    if (complete) {
      ex.saturate();
      exhausted = true;
      int rid = ex.ids.at(root);
      int st = SearchState{}.encode();
      if (ex.proved[rid] & (1u << st)) proof = ex.extract(rid, st);
    } else {
      // the space is too large to exhaust: iterative deepening on the action
      // count can still find a proof, but absence is not refutation
      Deepening deep{opts.system, res.bounds, opts.max_nodes, nodes, {}};
      try {
        for (int cap = 1; cap <= 24 && !proof; ++cap) {
          std::vector<Sequent> branch;
          proof = deep.prove(root, SearchState{}, cap, branch).proof;
        }
      } catch (const AbortSearch&) {
      }
    }
  }

  res.stats.nodes_expanded = nodes.load();
  if (proof) {
    res.verdict = Verdict::Provable;
    if (opts.regiment_result && !is_regimented(opts.system, *proof)) {
      try {
        Derivation reg = regiment(*proof);
        reg = eliminate_unit_contractions(reg);
        reg = eliminate_rad(reg);
        if (check_derivation(
                opts.system == System::DLBIRad ? System::DLBIRad : System::DLBI, reg)
                .ok &&
            permutes(reg.sequent, proof->sequent))
          proof = std::move(reg);
      } catch (const TransformError&) {
        // keep the raw proof; it still checks
      }
    }
    res.proof = proof;
    res.stats.max_mu = measure_derivation(*proof, Measure::Mu);
    res.stats.max_omega = measure_derivation(*proof, Measure::Omega);
    res.stats.max_delta = measure_derivation(*proof, Measure::Delta);
  } else {
    res.verdict = exhausted ? Verdict::Unprovable : Verdict::ResourceLimit;
  }
  return res;
}

}  // namespace bi
