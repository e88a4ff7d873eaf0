// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "pomsem/corpus.hpp"
#include "pomsem/examples.hpp"
#include "pomsem/linearize.hpp"
#include "pomsem/powdom.hpp"
#include "support.hpp"

using namespace pomsem;
using namespace pomsem::testing;

namespace {

struct Result {
  bool ok = true;
  std::string detail;
  std::size_t failures = 0;

  // Records a failed check; keeps the first few messages.
  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (failures++ < 3) detail += (detail.empty() ? "" : "; ") + what;
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;  // 0 = no runtime bound
  std::function<Result()> run;
};

Label assign_label(const std::string& var, int value) {
  return Label::action(ActionTerm::assign(var, ArithExpr::constant(value)));
}

// ---- 1 ----------------------------------------------------------------------

Result stuck_trio() {
  Result r;
  const auto t = examples::stuck_trio();
  using T = examples::StuckTrio;
  const Formula y1 = Formula::var(T::y1), y2 = Formula::var(T::y2);

  r.expect(equiv(stuck(t.alpha1), Formula::tru()), "stuck(alpha1) is not True");
  r.expect(equiv(stuck(t.alpha2), y1), "stuck(alpha2) is not y1");
  r.expect(equiv(stuck(t.alpha3), Formula::fls()), "stuck(alpha3) is not False");

  // The w copies each alpha should get: branch formula and the two maximal
  // nodes the copy hangs from.
  struct Copy {
    Formula psi;
    NodeId left, right;
  };
  const std::vector<Copy> four{{y1 && y2, T::z1, T::z3},
                               {y1 && !y2, T::z1, T::z4},
                               {!y1 && y2, T::z2, T::z3},
                               {!y1 && !y2, T::z2, T::z4}};
  const std::vector<Copy> two{four[2], four[3]};
  const std::vector<std::pair<const Lpof*, std::vector<Copy>>> cases{
      {&t.alpha1, {}}, {&t.alpha2, two}, {&t.alpha3, four}};

  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Lpof& a = *cases[i].first;
    const auto& copies = cases[i].second;
    const std::string tag = "alpha" + std::to_string(i + 1);

    const auto br = branches(a);
    r.expect(br.size() == copies.size(), tag + ": wrong branch count");
    for (const Copy& c : copies) {
      bool found = false;
      for (const Branch& b : br) found = found || equiv(b.formula, c.psi);
      r.expect(found, tag + ": missing branch " + c.psi.to_string());
    }

    std::vector<NodeSpec> specs;
    for (NodeId x : a.nodes()) specs.push_back({x, a.label(x), a.formula(x)});
    std::vector<Edge> edges = a.covers();
    NodeId next = 100;
    for (const Copy& c : copies) {
      specs.push_back({next, t.w, c.psi});
      edges.emplace_back(c.left, next);
      edges.emplace_back(c.right, next);
      ++next;
    }
    const Lpof expected(std::move(specs), edges);
    NodeSupply supply(50);
    const Lpof got = seq(a, Lpof::singleton(40, t.w), supply);
    r.expect(got.size() == a.size() + copies.size(), tag + ": wrong number of w copies");
    r.expect(Pomset(got) == Pomset(expected), tag + ": composition differs from the hand-built LPOF");
  }
  if (r.ok) r.detail = "stuck True/y1/False, branches 0/2/4, w copies 0/2/4";
  return r;
}

// ---- 2 ----------------------------------------------------------------------

Result nested_if() {
  Result r;
  const auto d = examples::nested_if();
  using D = examples::NestedIf;
  const Formula x = Formula::var(D::x), y2 = Formula::var(D::y2);
  const Lpof& a = d.built;
  r.expect(equiv(a.formula(D::x), Formula::tru()), "phi(x)");
  r.expect(equiv(a.formula(D::y1), x), "phi(y1)");
  r.expect(equiv(a.formula(D::y2), !x), "phi(y2)");
  r.expect(equiv(a.formula(D::z1), !x && y2), "phi(z1)");
  r.expect(equiv(a.formula(D::z2), !x && !y2), "phi(z2)");
  r.expect(equal_lpof(d.built, d.by_hand), "guard composition differs from the hand-built LPOF");
  r.expect(validate(a).empty(), "composition is not a valid LPOF");
  if (r.ok) r.detail = "all five formulas match up to equivalence";
  return r;
}

// ---- 3 ----------------------------------------------------------------------

Result coin_race() {
  Result r;
  const auto report = examples::coin_race(1);
  r.expect(report.lin_matches, "lin is not the four-corner set: " + ConvexDomain::to_json(report.lin).dump());
  r.expect(report.expected.generators.size() == 4, "corner set is not irredundant");
  r.expect(report.translated.size() == 2, "expected two translated pomsets");
  r.expect(report.translated_half_bottom, "translated linearizations lack half mass on bot");
  r.expect(report.recombined_differs, "recombined translations coincide with lin");
  if (r.ok) r.detail = "4 corners exact, translated halves on bot, recombination differs";
  return r;
}

// ---- 4 ----------------------------------------------------------------------

Result diagram() {
  Result r;
  CorpusOptions o;
  o.flip = false;
  o.max_loops = 1;
  const auto corpus = generate_corpus(4, 25, o);
  const Interp in{2};
  std::size_t cases = 0;
  for (const auto& c : corpus) {
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const State& s : all_states(o.vars, in)) {
        ++cases;
        const DiagramReport d = check_diagram(c, n, s, in);
        r.expect(d.commutes(), print(c) + " at n=" + std::to_string(n) + ": " + d.to_json().dump());
      }
    }
  }
  r.detail = std::to_string(corpus.size()) + " programs, " + std::to_string(cases) + " cases" +
             (r.ok ? "" : ": " + r.detail);
  return r;
}

// ---- 5 ----------------------------------------------------------------------

Result sequential_agreement() {
  Result r;
  CorpusOptions o;
  o.par = false;
  o.max_loops = 2;
  const auto corpus = generate_corpus(24, 25, o);
  const Interp in{3};
  std::size_t cases = 0;
  for (const auto& c : corpus) {
    for (std::size_t n = 1; n <= 4; ++n) {
      for (const State& s : all_states(o.vars, in)) {
        ++cases;
        const ConvexSet a = lin_program<ConvexDomain>(c, n, s, in);
        const ConvexSet b = convex_semantics(c, n, s, in);
        r.expect(hull_equal(a, b), print(c) + " at n=" + std::to_string(n) + " from " + state_to_string(s));
      }
    }
  }
  r.detail = std::to_string(corpus.size()) + " programs, " + std::to_string(cases) + " cases" +
             (r.ok ? "" : ": " + r.detail);
  return r;
}

// ---- 6 ----------------------------------------------------------------------

template <class D>
void lin_sanity_in(Result& r, const char* dom) {
  const std::vector<std::string> vars{"x", "y"};
  const Interp in{2};
  const auto states = all_states(vars, in);

  // Singletons.
  std::vector<ActionTerm> actions;
  for (const auto& v : vars) {
    for (int k = 0; k <= in.vmax; ++k) actions.push_back(ActionTerm::assign(v, ArithExpr::constant(k)));
    for (const auto& w : vars) {
      actions.push_back(ActionTerm::assign(v, ArithExpr::variable(w)));
      actions.push_back(ActionTerm::assign(v, ArithExpr::add(ArithExpr::variable(w), ArithExpr::constant(1))));
    }
    for (const mpq_class& p : {mpq_class(0), mpq_class(1, 3), mpq_class(1, 2), mpq_class(1)}) {
      actions.push_back(ActionTerm::flip(v, p));
    }
  }
  const CmdPtr skip = Cmd::skip();
  for (const State& s : states) {
    r.expect(D::equal(lin_program<D>(skip, 1, s, in), D::unit(s)), std::string(dom) + ": lin(skip) != unit");
    for (const auto& a : actions) {
      const auto got = lin_lpof<D>(Lpof::singleton(0, Label::action(a)), s, in);
      r.expect(D::equal(got, D::action(a, s, in)), std::string(dom) + ": lin of " + a.to_string());
      r.expect(D::equal(lin_program<D>(Cmd::act(a), 1, s, in), got), std::string(dom) + ": denote of " + a.to_string());
    }
  }

  // Kleisli decomposition on loop-free programs.
  CorpusOptions o;
  o.loops = false;
  o.max_nodes = 8;
  const auto firsts = generate_corpus(20, 25, o), seconds = generate_corpus(21, 25, o);
  for (std::size_t i = 0; i < firsts.size(); ++i) {
    const CmdPtr whole = Cmd::seq(firsts[i], seconds[i]);
    for (const State& s : states) {
      const auto lhs = lin_program<D>(whole, 1, s, in);
      const auto rhs = D::bind([&](const State& t) { return lin_program<D>(seconds[i], 1, t, in); },
                               lin_program<D>(firsts[i], 1, s, in));
      r.expect(D::equal(lhs, rhs), std::string(dom) + ": Kleisli decomposition fails for " + print(whole));
    }
  }

  // Branch selection; branches may contain loops, both sides at depth 2.
  CorpusOptions ob;
  ob.max_nodes = 8;
  const auto thens = generate_corpus(22, 25, ob), elses = generate_corpus(23, 25, ob);
  std::mt19937_64 rng(21);
  const char* ops[] = {"=", "!=", "<"};
  for (std::size_t i = 0; i < thens.size(); ++i) {
    const TestTerm b = parse_test(vars[uniform(rng, 0, 1)] + ops[uniform(rng, 0, 2)] + std::to_string(uniform(rng, 0, 2)));
    const CmdPtr c = Cmd::ite(b, thens[i], elses[i]);
    for (const State& s : states) {
      const auto whole = lin_program<D>(c, 2, s, in);
      const auto taken = lin_program<D>(b.eval(s) ? thens[i] : elses[i], 2, s, in);
      r.expect(D::equal(whole, taken), std::string(dom) + ": branch selection fails for " + print(c));
    }
  }
}

Result lin_sanity() {
  Result r;
  lin_sanity_in<HoareDomain>(r, "hoare");
  lin_sanity_in<ConvexDomain>(r, "convex");
  if (r.ok) r.detail = "unit and action singletons, 25 sequential pairs, 25 conditionals, both domains";
  return r;
}

// ---- 7 ----------------------------------------------------------------------

Result monotonicity() {
  Result r;
  std::mt19937_64 rng(7);
  CorpusOptions o;
  o.max_nodes = 8;
  const Pomset g = denote(parse_program("if y=1 { x:=1 } else { y:=2 }"), 1);
  const TestTerm b = parse_test("x=0");
  const Interp in{2};
  const auto states = all_states(o.vars, in);
  for (int i = 0; i < 200; ++i) {
    const LpofPair p = random_pair(rng, o);
    const std::string tag = "pair " + std::to_string(i) + " (" + print(p.program) + ")";
    r.expect(le_lpof(p.alpha, p.beta), tag + ": generated pair is not ordered");

    const std::size_t m = uniform(rng, 0, static_cast<int>(p.beta.max_level()) + 1);
    r.expect(le_lpof(truncate(p.alpha, m), truncate(p.beta, m)), tag + ": truncate");

    const Pomset pa(p.alpha), pb(p.beta);
    r.expect(le_pom(pa, pb), tag + ": pomset order");
    r.expect(le_pom(guard(b, pa, g), guard(b, pb, g)), tag + ": guard, left");
    r.expect(le_pom(guard(b, g, pa), guard(b, g, pb)), tag + ": guard, right");
    r.expect(le_pom(seq(pa, g), seq(pb, g)), tag + ": seq, left");
    r.expect(le_pom(seq(g, pa), seq(g, pb)), tag + ": seq, right");

    const PomLang ta = tr_fin(p.alpha), tb = tr_fin(p.beta);
    r.expect(std::includes(tb.begin(), tb.end(), ta.begin(), ta.end()), tag + ": tr");

    const State& s = states[uniform(rng, 0, static_cast<int>(states.size()) - 1)];
    r.expect(HoareDomain::leq(lin_lpof<HoareDomain>(p.alpha, s, in), lin_lpof<HoareDomain>(p.beta, s, in)),
             tag + ": hoare lin");
    r.expect(ConvexDomain::leq(lin_lpof<ConvexDomain>(p.alpha, s, in), lin_lpof<ConvexDomain>(p.beta, s, in)),
             tag + ": convex lin");
  }
  r.detail = std::to_string(r.failures) + " violations over 200 pairs" + (r.ok ? "" : ": " + r.detail);
  return r;
}

// ---- 8 ----------------------------------------------------------------------

Result parallel_not_monotone() {
  Result r;
  const auto t = examples::par_counterexample();
  r.expect(le_pom(t.a, t.b), "bot is not below the forked pair");
  r.expect(!le_pom(par(t.a, t.c), par(t.b, t.c)), "parallel composition preserved the order");
  if (r.ok) r.detail = "A <= B and not A||C <= B||C";
  return r;
}

// ---- 9 ----------------------------------------------------------------------

Result loop_chain() {
  Result r;
  const CmdPtr loop = parse_program("while x=0 { x:=1 }");
  std::vector<Pomset> phi;
  for (std::size_t n = 0; n <= 3; ++n) phi.push_back(denote(loop, n));
  for (std::size_t n = 0; n + 1 < phi.size(); ++n) {
    r.expect(le_pom(phi[n], phi[n + 1]), "iterate " + std::to_string(n) + " is not below the next");
    r.expect(!(phi[n] == phi[n + 1]), "iterates " + std::to_string(n) + " and " + std::to_string(n + 1) + " coincide");
  }
  const Label after = assign_label("y", 1);
  auto count_after = [&](const Lpof& a) {
    std::size_t k = 0;
    for (NodeId x : a.nodes()) k += a.label(x) == after;
    return k;
  };
  const Pomset composed = seq(phi[3], singleton(after));
  r.expect(count_after(composed.repr()) == 3, "expected 3 copies of y:=1, got " + std::to_string(count_after(composed.repr())));
  const Pomset program = denote(parse_program(examples::loop_then_action_source), 3);
  r.expect(program == composed, "denotation of the program differs from the composed iterate");
  for (NodeId x : composed.repr().nodes()) {
    if (!(composed.repr().label(x) == after)) continue;
    // Each copy hangs from one loop exit: the skip after a false guard test.
    const Lpof& a = composed.repr();
    const auto preds = a.pred(x);
    const bool exit = preds.size() == 1 && a.label(preds[0]).kind() == Label::Kind::Fork &&
                      a.pred(preds[0]).size() == 1 && a.label(a.pred(preds[0])[0]).is_test();
    r.expect(exit, "a y:=1 copy does not follow a single loop exit");
  }
  r.expect(check_binary_branching(composed), "composition is not binary branching");
  if (r.ok) r.detail = "4 strictly increasing iterates, 3 copies of the trailing action";
  return r;
}

// ---- 10 ---------------------------------------------------------------------

Result oracle() {
  Result r;
  CorpusOptions o;
  o.max_loops = 1;
  const auto corpus = generate_corpus(10, 25, o);
  std::size_t with_par = 0;
  for (const auto& c : corpus) with_par += contains_par(c);
  r.expect(with_par > 0, "corpus has no parallel composition");
  const Interp in{3};
  std::size_t cases = 0;
  for (const auto& c : corpus) {
    for (std::size_t n = 1; n <= 3; ++n) {
      for (const State& s : all_states(o.vars, in)) {
        ++cases;
        const std::string tag = print(c) + " at n=" + std::to_string(n) + " from " + state_to_string(s);
        r.expect(lin_program<HoareDomain>(c, n, s, in) == oracle_interleave<HoareDomain>(c, n, s, in), "hoare: " + tag);
        r.expect(hull_equal(lin_program<ConvexDomain>(c, n, s, in), oracle_interleave<ConvexDomain>(c, n, s, in)),
                 "convex: " + tag);
      }
    }
  }
  r.detail = std::to_string(corpus.size()) + " programs (" + std::to_string(with_par) + " parallel), " +
             std::to_string(cases) + " cases per domain" + (r.ok ? "" : ": " + r.detail);
  return r;
}

// ---- 11 ---------------------------------------------------------------------

// f as a lookup table on every state of the universe.
template <class D>
struct RandomMap {
  std::map<State, typename D::Value> table;
  typename D::Value operator()(const State& s) const { return table.at(s); }
};

// `gen` draws domain values, `image` draws values of the random maps.
template <class D, class Gen, class Image>
void domain_laws_in(Result& r, const char* dom, std::uint64_t seed, Gen&& gen, Image&& image) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 500; ++i) {
    const Universe u = random_universe(rng);
    auto random_map = [&] {
      RandomMap<D> f;
      for (const State& s : u.states) f.table.emplace(s, image(rng, u));
      return f;
    };
    const RandomMap<D> f = random_map(), g = random_map();
    const auto d = gen(rng, u), e = gen(rng, u), h = gen(rng, u);
    const State& s = u.states[uniform(rng, 0, static_cast<int>(u.states.size()) - 1)];
    const std::string tag = std::string(dom) + " case " + std::to_string(i);

    r.expect(D::equal(D::bind(f, D::unit(s)), f(s)), tag + ": left unit");
    r.expect(D::equal(D::bind([](const State& t) { return D::unit(t); }, d), d), tag + ": right unit");
    r.expect(D::equal(D::bind(g, D::bind(f, d)), D::bind([&](const State& t) { return D::bind(g, f(t)); }, d)),
             tag + ": associativity");
    r.expect(D::equal(D::bind(f, D::nd(d, e)), D::nd(D::bind(f, d), D::bind(f, e))), tag + ": additivity");
    r.expect(D::equal(D::bind(f, D::bottom()), D::bottom()), tag + ": strictness");
    r.expect(D::equal(D::nd(d, e), D::nd(e, d)), tag + ": nd commutativity");
    r.expect(D::equal(D::nd(D::nd(d, e), h), D::nd(d, D::nd(e, h))), tag + ": nd associativity");
    if constexpr (std::is_same_v<D, ConvexDomain>) {
      r.expect(sums_to_one(D::bind(f, D::nd(d, e))), tag + ": generator mass is not exactly 1");
    }
  }
}

Result domain_laws() {
  Result r;
  domain_laws_in<HoareDomain>(r, "hoare", 11, random_state_set, random_state_set);
  // Nested binds form Minkowski sums, so the map images stay small.
  domain_laws_in<ConvexDomain>(
      r, "convex", 12, [](std::mt19937_64& rng, const Universe& u) { return random_convex_set(rng, u, 4, 3); },
      [](std::mt19937_64& rng, const Universe& u) { return random_convex_set(rng, u, 2, 3); });
  if (r.ok) r.detail = "unit, associativity, additivity, strictness, nd laws on 500 cases per domain";
  return r;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "stuck, extensible, branches and sequential composition on the stuck trio", 1, stuck_trio},
      {2, "nested guard formulas", 1, nested_if},
      {3, "coin race in the convex domain", 5, coin_race},
      {4, "pomset and language routes agree on a flip-free corpus", 60, diagram},
      {5, "linearization agrees with the sequential convex semantics", 120, sequential_agreement},
      {6, "linearization of skip, actions, sequencing and conditionals", 0, lin_sanity},
      {7, "monotonicity of truncate, guard, seq, tr and lin", 0, monotonicity},
      {8, "parallel composition is not monotone", 0, parallel_not_monotone},
      {9, "loop iterate chain and trailing action copies", 0, loop_chain},
      {10, "linearization agrees with the interleaving oracle", 180, oracle},
      {11, "domain laws", 0, domain_laws},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      r.ok = false;
      r.detail += " (over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget)";
    }
    std::ostringstream time;
    time.precision(3);
    time << std::fixed << secs;
    std::cout << (r.ok ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << r.detail << " (" << time.str()
              << " s)\n"
              << std::flush;
    failed += !r.ok;
  }
  return failed ? 1 : 0;
}
