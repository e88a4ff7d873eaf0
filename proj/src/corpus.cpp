#include "pomsem/corpus.hpp"

#include <set>

namespace pomsem {

namespace {

class Generator {
 public:
  Generator(std::mt19937_64& rng, const CorpusOptions& opts) : rng_(rng), opts_(opts) {}

  CmdPtr program() {
    loops_left_ = opts_.loops ? opts_.max_loops : 0;
    return cmd(1 + pick(opts_.max_nodes));
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return pick(2) == 0; }
  const std::string& var() { return opts_.vars[pick(opts_.vars.size())]; }
  int constant() { return static_cast<int>(pick(static_cast<std::size_t>(opts_.max_const) + 1)); }

  ArithExpr aexp() {
    switch (pick(3)) {
      case 0: return ArithExpr::constant(constant());
      case 1: return ArithExpr::add(ArithExpr::variable(var()), ArithExpr::constant(1));
      default: return ArithExpr::variable(var());
    }
  }

  TestTerm test() {
    static const TestTerm::Op ops[] = {TestTerm::Op::Eq, TestTerm::Op::Ne, TestTerm::Op::Lt};
    TestTerm t = TestTerm::compare(ops[pick(3)], ArithExpr::variable(var()), ArithExpr::constant(constant()));
    return pick(4) == 0 ? TestTerm::neg(t) : t;
  }

  CmdPtr leaf() {
    const std::size_t choices = opts_.flip ? 4 : 3;
    switch (pick(choices)) {
      case 0: return Cmd::skip();
      case 3: {
        static const mpq_class probs[] = {mpq_class(1, 2), mpq_class(1, 3), mpq_class(3, 4)};
        return Cmd::act(ActionTerm::flip(var(), probs[pick(3)]));
      }
      default: return Cmd::act(ActionTerm::assign(var(), aexp()));
    }
  }

  // An action that changes the loop guard's variable, so loops can exit.
  CmdPtr progress(const TestTerm& guard) {
    std::vector<std::string> vs;
    guard.collect_vars(vs);
    const std::string& x = vs.front();
    if (opts_.flip && coin()) return Cmd::act(ActionTerm::flip(x, mpq_class(1, 2)));
    return Cmd::act(ActionTerm::assign(x, ArithExpr::add(ArithExpr::variable(x), ArithExpr::constant(1))));
  }

  CmdPtr cmd(std::size_t budget) {
    if (budget <= 1) return leaf();
    std::vector<Cmd::Kind> kinds{Cmd::Kind::Seq};
    if (opts_.par && budget >= 3) kinds.push_back(Cmd::Kind::Par);
    if (opts_.ifs && budget >= 3) kinds.push_back(Cmd::Kind::If);
    if (loops_left_ > 0) kinds.push_back(Cmd::Kind::While);
    if (budget < 3) kinds.erase(kinds.begin());
    if (kinds.empty()) return leaf();
    const Cmd::Kind k = kinds[pick(kinds.size())];
    if (k == Cmd::Kind::While) {
      --loops_left_;
      TestTerm b = test();
      CmdPtr step = progress(b);
      CmdPtr body = budget >= 4 ? Cmd::seq(step, cmd(budget - 3)) : step;
      return Cmd::loop(b, body);
    }
    const std::size_t rest = budget - 1;
    const std::size_t left = 1 + pick(rest - 1);
    if (k == Cmd::Kind::If) return Cmd::ite(test(), cmd(left), cmd(rest - left));
    CmdPtr a = cmd(left);
    CmdPtr b = cmd(rest - left);
    return k == Cmd::Kind::Seq ? Cmd::seq(a, b) : Cmd::par(a, b);
  }

  std::mt19937_64& rng_;
  const CorpusOptions& opts_;
  std::size_t loops_left_ = 0;
};

}  // namespace

CmdPtr random_program(std::mt19937_64& rng, const CorpusOptions& opts) { return Generator(rng, opts).program(); }

std::vector<CmdPtr> generate_corpus(std::uint64_t seed, std::size_t count, const CorpusOptions& opts) {
  std::mt19937_64 rng(seed);
  std::vector<CmdPtr> out;
  std::set<std::string> seen;
  for (std::size_t attempt = 0; out.size() < count && attempt < 1000 * count; ++attempt) {
    CmdPtr c = random_program(rng, opts);
    if (ast_size(c) > opts.max_nodes) continue;
    if (seen.insert(print(c)).second) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace pomsem
