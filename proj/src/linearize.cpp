#include "pomsem/linearize.hpp"

#include <algorithm>
#include <tuple>

namespace pomsem {

namespace {

// Ready-set computation shared by `next` and the linearizer. The path
// condition is the base formula plus one literal per test processed so far.
class Frontier {
 public:
  Frontier(const Lpof& a, const Formula& psi) : a_(a) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Formula& phi = a.formula_idx(i);
      if (phi.kind() == Formula::Kind::True) {
        checks_.emplace_back(std::nullopt);
        continue;
      }
      CompiledFormula c(psi && !phi);
      std::vector<std::size_t> slots;
      for (NodeId v : c.vars()) slots.push_back(a.contains(v) ? a.index(v) : kNone);
      checks_.emplace_back(Check{std::move(c), std::move(slots)});
    }
  }

  std::vector<std::size_t> ready(const Bitset& done, const Bitset& tested, const Bitset& outcome) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (done.test(i) || !a_.down(i).is_subset_of(done)) continue;
      if (entailed(i, tested, outcome)) out.push_back(i);
    }
    return out;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  struct Check {
    CompiledFormula negated;  // psi && !phi(x)
    std::vector<std::size_t> slots;
  };

  bool entailed(std::size_t i, const Bitset& tested, const Bitset& outcome) const {
    if (!checks_[i]) return true;
    const Check& c = *checks_[i];
    std::vector<Truth> assign(c.slots.size(), Truth::Unknown);
    for (std::size_t k = 0; k < c.slots.size(); ++k) {
      const std::size_t j = c.slots[k];
      if (j != kNone && tested.test(j)) assign[k] = outcome.test(j) ? Truth::True : Truth::False;
    }
    return !c.negated.satisfiable(assign);
  }

  const Lpof& a_;
  std::vector<std::optional<Check>> checks_;
};

Bitset to_bits(const Lpof& a, const std::vector<NodeId>& nodes) {
  Bitset out(a.size());
  for (NodeId x : nodes) out.set(a.index(x));
  return out;
}

template <class D>
class Linearizer {
 public:
  using Value = typename D::Value;

  Linearizer(const Lpof& a, const Formula& psi, const Interp& interp) : a_(a), frontier_(a, psi), interp_(interp) {}

  Value run(const Bitset& done, const Bitset& tested, const Bitset& outcome, const State& s) {
    auto key = std::make_tuple(done, outcome, s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const auto ready = frontier_.ready(done, tested, outcome);
    Value result = D::unit(s);
    bool first = true;
    for (std::size_t i : ready) {
      Value branch = step(i, done, tested, outcome, s);
      result = first ? std::move(branch) : D::nd(result, branch);
      first = false;
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  Value step(std::size_t i, Bitset done, Bitset tested, Bitset outcome, const State& s) {
    done.set(i);
    const Label& l = a_.label_idx(i);
    switch (l.kind()) {
      case Label::Kind::Action:
        return D::bind([&](const State& t) { return run(done, tested, outcome, t); },
                       D::action(l.action_term(), s, interp_));
      case Label::Kind::Test:
        tested.set(i);
        outcome[i] = D::test(l.test_term(), s);
        return run(done, tested, outcome, s);
      case Label::Kind::Bot: return D::bottom();
      case Label::Kind::Fork: return run(done, tested, outcome, s);
    }
    return D::bottom();
  }

  const Lpof& a_;
  Frontier frontier_;
  const Interp& interp_;
  std::map<std::tuple<Bitset, Bitset, State>, Value> memo_;
};

template <class D>
class Sequential {
 public:
  using Value = typename D::Value;

  Sequential(std::size_t n, const Interp& interp) : n_(n), interp_(interp) {}

  Value eval(const CmdPtr& c, const State& s) {
    switch (c->kind()) {
      case Cmd::Kind::Skip: return D::unit(s);
      case Cmd::Kind::Act: return D::action(c->action(), s, interp_);
      case Cmd::Kind::Seq:
        return D::bind([&](const State& t) { return eval(c->second(), t); }, eval(c->first(), s));
      case Cmd::Kind::Par: throw ContainsParallel();
      case Cmd::Kind::If: return D::test(c->test(), s) ? eval(c->first(), s) : eval(c->second(), s);
      case Cmd::Kind::While: return iterate(c, n_, s);
    }
    return D::bottom();
  }

 private:
  // k-th iterate of the loop's characteristic function, applied to s.
  Value iterate(const CmdPtr& loop, std::size_t k, const State& s) {
    if (k == 0) return D::bottom();
    auto key = std::make_tuple(loop.get(), k, s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Value out = D::test(loop->test(), s)
                    ? D::bind([&](const State& t) { return iterate(loop, k - 1, t); }, eval(loop->first(), s))
                    : D::unit(s);
    memo_.emplace(std::move(key), out);
    return out;
  }

  std::size_t n_;
  const Interp& interp_;
  std::map<std::tuple<const Cmd*, std::size_t, State>, Value> memo_;
};

// ---- interleaving oracle ------------------------------------------------------

struct Proc;
using ProcPtr = std::shared_ptr<const Proc>;

struct Proc {
  enum class Kind { Done, Run, Seq, Par, Loop } kind = Kind::Done;
  CmdPtr cmd;  // Run: the command; Loop: the while command
  ProcPtr left, right;
  std::size_t fuel = 0;
  std::string key;
};

ProcPtr done_proc() {
  static const ProcPtr p = [] {
    auto d = std::make_shared<Proc>();
    d->key = "0";
    return d;
  }();
  return p;
}

std::string addr(const Cmd* c) { return std::to_string(reinterpret_cast<std::uintptr_t>(c)); }

ProcPtr run_proc(const CmdPtr& c) {
  auto p = std::make_shared<Proc>();
  p->kind = Proc::Kind::Run;
  p->cmd = c;
  p->key = "R" + addr(c.get());
  return p;
}

ProcPtr loop_proc(const CmdPtr& c, std::size_t fuel) {
  auto p = std::make_shared<Proc>();
  p->kind = Proc::Kind::Loop;
  p->cmd = c;
  p->fuel = fuel;
  p->key = "L" + addr(c.get()) + ":" + std::to_string(fuel);
  return p;
}

ProcPtr seq_proc(ProcPtr l, ProcPtr r) {
  if (l->kind == Proc::Kind::Done) return r;
  auto p = std::make_shared<Proc>();
  p->kind = Proc::Kind::Seq;
  p->key = "S(" + l->key + "," + r->key + ")";
  p->left = std::move(l);
  p->right = std::move(r);
  return p;
}

ProcPtr par_proc(ProcPtr l, ProcPtr r) {
  if (l->kind == Proc::Kind::Done) return r;
  if (r->kind == Proc::Kind::Done) return l;
  auto p = std::make_shared<Proc>();
  p->kind = Proc::Kind::Par;
  p->key = "P(" + l->key + "," + r->key + ")";
  p->left = std::move(l);
  p->right = std::move(r);
  return p;
}

struct Move {
  enum class Kind { Act, Silent, Diverge } kind;
  const ActionTerm* action = nullptr;
  ProcPtr next;
};

template <class D>
class Interleaver {
 public:
  using Value = typename D::Value;

  Interleaver(std::size_t n, const Interp& interp) : n_(n), interp_(interp) {}

  Value explore(const ProcPtr& p, const State& s) {
    if (p->kind == Proc::Kind::Done) return D::unit(s);
    auto key = std::make_pair(p->key, s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Move> ms;
    moves(p, s, ms);
    Value result = D::unit(s);
    bool first = true;
    for (const Move& m : ms) {
      Value branch = D::bottom();
      switch (m.kind) {
        case Move::Kind::Act:
          branch = D::bind([&](const State& t) { return explore(m.next, t); }, D::action(*m.action, s, interp_));
          break;
        case Move::Kind::Silent: branch = explore(m.next, s); break;
        case Move::Kind::Diverge: break;
      }
      result = first ? std::move(branch) : D::nd(result, branch);
      first = false;
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  void moves(const ProcPtr& p, const State& s, std::vector<Move>& out) {
    switch (p->kind) {
      case Proc::Kind::Done: return;
      case Proc::Kind::Run: {
        const CmdPtr& c = p->cmd;
        switch (c->kind()) {
          case Cmd::Kind::Skip: out.push_back({Move::Kind::Silent, nullptr, done_proc()}); return;
          case Cmd::Kind::Act: out.push_back({Move::Kind::Act, &c->action(), done_proc()}); return;
          case Cmd::Kind::Seq: moves(seq_proc(run_proc(c->first()), run_proc(c->second())), s, out); return;
          case Cmd::Kind::Par: moves(par_proc(run_proc(c->first()), run_proc(c->second())), s, out); return;
          case Cmd::Kind::If:
            out.push_back({Move::Kind::Silent, nullptr, run_proc(D::test(c->test(), s) ? c->first() : c->second())});
            return;
          case Cmd::Kind::While: moves(loop_proc(c, n_), s, out); return;
        }
        return;
      }
      case Proc::Kind::Loop: {
        if (p->fuel == 0) {
          out.push_back({Move::Kind::Diverge, nullptr, nullptr});
          return;
        }
        static const CmdPtr skip = Cmd::skip();
        ProcPtr next = D::test(p->cmd->test(), s) ? seq_proc(run_proc(p->cmd->first()), loop_proc(p->cmd, p->fuel - 1))
                                                  : run_proc(skip);
        out.push_back({Move::Kind::Silent, nullptr, next});
        return;
      }
      case Proc::Kind::Seq: {
        std::vector<Move> inner;
        moves(p->left, s, inner);
        for (Move& m : inner) {
          if (m.next) m.next = seq_proc(m.next, p->right);
          out.push_back(std::move(m));
        }
        return;
      }
      case Proc::Kind::Par: {
        std::vector<Move> inner;
        moves(p->left, s, inner);
        for (Move& m : inner) {
          if (m.next) m.next = par_proc(m.next, p->right);
          out.push_back(std::move(m));
        }
        inner.clear();
        moves(p->right, s, inner);
        for (Move& m : inner) {
          if (m.next) m.next = par_proc(p->left, m.next);
          out.push_back(std::move(m));
        }
        return;
      }
    }
  }

  std::size_t n_;
  const Interp& interp_;
  std::map<std::pair<std::string, State>, Value> memo_;
};

}  // namespace

std::vector<NodeId> next(const Lpof& a, const Formula& psi, const std::vector<NodeId>& done) {
  Frontier f(a, psi);
  Bitset none(a.size());
  std::vector<NodeId> out;
  for (std::size_t i : f.ready(to_bits(a, done), none, none)) out.push_back(a.id_at(i));
  return out;
}

template <class D>
typename D::Value lin_lpof(const Lpof& a, const Formula& psi, const std::vector<NodeId>& done, const State& s,
                           const Interp& interp) {
  require_valid(a, "linearize");
  Linearizer<D> l(a, psi, interp);
  Bitset none(a.size());
  return l.run(to_bits(a, done), none, none, s);
}

template <class D>
typename D::Value sequential_semantics(const CmdPtr& c, std::size_t n, const State& s, const Interp& interp) {
  if (contains_par(c)) throw ContainsParallel();
  return Sequential<D>(n, interp).eval(c, s);
}

template <class D>
typename D::Value oracle_interleave(const CmdPtr& c, std::size_t n, const State& s, const Interp& interp) {
  return Interleaver<D>(n, interp).explore(run_proc(c), s);
}

template HoareDomain::Value lin_lpof<HoareDomain>(const Lpof&, const Formula&, const std::vector<NodeId>&,
                                                  const State&, const Interp&);
template ConvexDomain::Value lin_lpof<ConvexDomain>(const Lpof&, const Formula&, const std::vector<NodeId>&,
                                                    const State&, const Interp&);
template HoareDomain::Value sequential_semantics<HoareDomain>(const CmdPtr&, std::size_t, const State&,
                                                              const Interp&);
template ConvexDomain::Value sequential_semantics<ConvexDomain>(const CmdPtr&, std::size_t, const State&,
                                                                const Interp&);
template HoareDomain::Value oracle_interleave<HoareDomain>(const CmdPtr&, std::size_t, const State&, const Interp&);
template ConvexDomain::Value oracle_interleave<ConvexDomain>(const CmdPtr&, std::size_t, const State&,
                                                             const Interp&);

}  // namespace pomsem
