#include "pomsem/examples.hpp"

#include <nlohmann/json.hpp>

#include "pomsem/linearize.hpp"

namespace pomsem::examples {

namespace {

Label act(const std::string& var, int value) { return Label::action(ActionTerm::assign(var, ArithExpr::constant(value))); }

Label test(const std::string& text) { return Label::test(parse_test(text)); }

Formula v(NodeId x) { return Formula::var(x); }

}  // namespace

StuckTrio stuck_trio() {
  using t = StuckTrio;
  auto build = [&](bool bot1, bool bot2) {
    std::vector<NodeSpec> nodes{
        {t::x, Label::fork(), Formula::tru()},
        {t::y1, test("u=1"), Formula::tru()},
        {t::y2, test("v=1"), Formula::tru()},
        {t::z1, bot1 ? Label::bot() : act("a", 1), v(t::y1)},
        {t::z2, bot2 ? Label::bot() : act("a", 2), !v(t::y1)},
        {t::z3, act("b", 1), v(t::y2)},
        {t::z4, act("b", 2), !v(t::y2)},
    };
    return Lpof(std::move(nodes), {{t::x, t::y1}, {t::x, t::y2}, {t::y1, t::z1}, {t::y1, t::z2}, {t::y2, t::z3}, {t::y2, t::z4}});
  };
  return {build(true, true), build(true, false), build(false, false), act("c", 1)};
}

NestedIf nested_if() {
  using d = NestedIf;
  const Label b1 = test("u=1"), b2 = test("v=1");
  const Label a1 = act("a", 1), a2 = act("a", 2), a3 = act("a", 3);
  const Lpof inner = guard(d::y2, b2.test_term(), Lpof::singleton(d::z1, a2), Lpof::singleton(d::z2, a3));
  return {guard(d::x, b1.test_term(), Lpof::singleton(d::y1, a1), inner),
          Lpof({{d::x, b1, Formula::tru()},
                    {d::y1, a1, v(d::x)},
                    {d::y2, b2, !v(d::x)},
                    {d::z1, a2, !v(d::x) && v(d::y2)},
                    {d::z2, a3, !v(d::x) && !v(d::y2)}},
                   {{d::x, d::y1}, {d::x, d::y2}, {d::y2, d::z1}, {d::y2, d::z2}})};
}

OrderTrio order_trio() {
  const NodeId x = 0, y1 = 1, y2 = 2, z = 3;
  const Label a = act("a", 1), b = act("b", 1), c = act("c", 1);
  OrderTrio t{
      Lpof({{x, Label::fork(), Formula::tru()}, {y1, Label::bot(), Formula::tru()}, {y2, b, Formula::tru()}},
           {{x, y1}, {x, y2}}),
      Lpof({{x, Label::fork(), Formula::tru()},
            {y1, Label::bot(), Formula::tru()},
            {y2, b, Formula::tru()},
            {z, c, Formula::tru()}},
           {{x, y1}, {x, y2}, {y2, z}}),
      Lpof({{x, Label::fork(), Formula::tru()}, {y1, a, Formula::tru()}, {y2, b, Formula::tru()}, {z, c, Formula::tru()}},
           {{x, y1}, {x, y2}, {y1, z}, {y2, z}}),
  };
  return t;
}

ParCounterexample par_counterexample() {
  const Lpof forked({{0, Label::fork(), Formula::tru()}, {1, act("a", 1), Formula::tru()}, {2, act("a", 2), Formula::tru()}},
                    {{0, 1}, {0, 2}});
  return {bottom_pomset(), Pomset(forked), singleton(act("b", 1))};
}

const char* const coin_race_source = "x ~ flip(1/2); (if x=1 { y:=0 } else { y:=1 } || y:=2)";
const char* const loop_then_action_source = "while x=0 { x:=1 }; y:=1";

State coin_race_state() { return {{"x", 0}, {"y", 0}}; }

CoinRaceReport coin_race(std::size_t depth) {
  const CmdPtr c = parse_program(coin_race_source);
  const State s0 = coin_race_state();
  const mpq_class half(1, 2);
  auto st = [](int x, int y) { return State{{"x", x}, {"y", y}}; };

  CoinRaceReport r;
  r.lin = lin_program<ConvexDomain>(c, depth, s0);
  // When x=1 the last write is y:=0 or y:=2; when x=0 it is y:=1 or y:=2.
  std::vector<Dist> corners;
  for (int heads : {0, 2}) {
    for (int tails : {1, 2}) corners.push_back({{st(1, heads), half}, {st(0, tails), half}});
  }
  r.expected = reduce(corners);
  r.lin_matches = hull_equal(r.lin, r.expected);

  NodeSupply supply;
  const PomLang translated = tr_fin(denote_lpof(c, depth, supply));
  r.translated_half_bottom = translated.size() == 2;
  bool first = true;
  for (const Pomset& p : translated) {
    ConvexSet l = lin_lpof<ConvexDomain>(p.repr(), s0);
    for (const Dist& g : l.generators) {
      auto it = g.find(std::nullopt);
      if (it == g.end() || it->second != half) r.translated_half_bottom = false;
    }
    r.recombined = first ? l : ConvexDomain::nd(r.recombined, l);
    first = false;
    r.translated.push_back(std::move(l));
  }
  r.recombined_differs = !hull_equal(r.recombined, r.lin);
  return r;
}

nlohmann::json CoinRaceReport::to_json() const {
  nlohmann::json tr = nlohmann::json::array();
  for (const auto& t : translated) tr.push_back(ConvexDomain::to_json(t));
  return {{"lin", ConvexDomain::to_json(lin)},
          {"expected", ConvexDomain::to_json(expected)},
          {"lin_matches", lin_matches},
          {"translated", tr},
          {"translated_half_bottom", translated_half_bottom},
          {"recombined", ConvexDomain::to_json(recombined)},
          {"recombined_differs", recombined_differs}};
}

}  // namespace pomsem::examples
