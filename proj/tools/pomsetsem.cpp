#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pomsem/corpus.hpp"
#include "pomsem/examples.hpp"
#include "pomsem/linearize.hpp"
#include "pomsem/powdom.hpp"

using namespace pomsem;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kSyntax = 2, kSemantic = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::vector<std::string> inputs;
  std::size_t depth = 2;
  std::string domain = "convex";
  int vmax = 3;
  std::string state;
  bool dot = false;
  bool json = false;
  std::string out;
  std::uint64_t seed = 1;
  std::size_t count = 25;
  bool no_par = false, no_flip = false, no_loops = false;
};

struct Program {
  std::string name;
  CmdPtr cmd;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw UsageError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A path to a file, a directory of *.prog files, or inline program text.
std::vector<Program> load(const std::string& input) {
  std::error_code ec;
  if (fs::is_directory(input, ec)) {
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(input)) {
      if (e.is_regular_file() && e.path().extension() == ".prog") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<Program> out;
    for (const auto& f : files) out.push_back({f.filename().string(), parse_program(read_file(f))});
    return out;
  }
  if (fs::is_regular_file(input, ec)) return {{fs::path(input).filename().string(), parse_program(read_file(input))}};
  return {{"<inline>", parse_program(input)}};
}

std::vector<Program> load_all(const Options& o) {
  if (o.inputs.empty()) throw UsageError("no program given");
  std::vector<Program> out;
  for (const auto& in : o.inputs) {
    auto ps = load(in);
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return out;
}

CmdPtr single(const std::vector<Program>& ps) {
  if (ps.size() != 1) throw UsageError("expected exactly one program");
  return ps.front().cmd;
}

State initial_state(const Options& o, const CmdPtr& c) {
  if (!o.state.empty()) return parse_state(o.state);
  State s;
  for (const auto& v : program_vars(c)) s[v] = 0;
  return s;
}

std::vector<State> states_for(const Options& o, const CmdPtr& c, const Interp& in) {
  if (!o.state.empty()) return {parse_state(o.state)};
  return all_states(program_vars(c), in);
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void write_json(const Options& o, const nlohmann::json& j) {
  Output out(o.out);
  out.stream() << j.dump(2) << "\n";
}

int cmd_denote(const Options& o) {
  const CmdPtr c = single(load_all(o));
  const Pomset p = denote(c, o.depth);
  Output out(o.out);
  if (o.dot) {
    out.stream() << to_dot(p);
  } else {
    out.stream() << to_json(p).dump(2) << "\n";
  }
  return kOk;
}

int cmd_lin(const Options& o) {
  const CmdPtr c = single(load_all(o));
  const Interp in{o.vmax};
  const State s = initial_state(o, c);
  if (o.domain == "hoare") {
    write_json(o, HoareDomain::to_json(lin_program<HoareDomain>(c, o.depth, s, in)));
  } else {
    write_json(o, ConvexDomain::to_json(lin_program<ConvexDomain>(c, o.depth, s, in)));
  }
  return kOk;
}

void write_language(const Options& o, const PomLang& l) {
  Output out(o.out);
  if (!o.dot) {
    out.stream() << to_json(l).dump(2) << "\n";
    return;
  }
  std::size_t k = 0;
  for (const Pomset& p : l) out.stream() << to_dot(p, "member" + std::to_string(k++));
}

int cmd_powdom(const Options& o) {
  write_language(o, denote_powdom(single(load_all(o)), o.depth));
  return kOk;
}

int cmd_tr(const Options& o) {
  NodeSupply supply;
  write_language(o, tr_fin(denote_lpof(single(load_all(o)), o.depth, supply)));
  return kOk;
}

// Runs `check(c, n, s)` for every program, depth 1..n and state; prints one
// line per program and a JSON diff for the first mismatch of each.
template <class Check>
int run_checks(const Options& o, const char* what, Check&& check) {
  const Interp in{o.vmax};
  const auto programs = load_all(o);
  Output out(o.out);
  std::size_t failed = 0, cases = 0;
  for (const auto& prog : programs) {
    std::optional<nlohmann::json> diff;
    for (std::size_t n = 1; n <= o.depth && !diff; ++n) {
      for (const State& s : states_for(o, prog.cmd, in)) {
        ++cases;
        if (auto d = check(prog.cmd, n, s, in)) {
          diff = nlohmann::json{{"program", print(prog.cmd)}, {"depth", n}, {"state", state_to_string(s)}, {"diff", *d}};
          break;
        }
      }
    }
    out.stream() << (diff ? "FAIL " : "ok   ") << prog.name << "  " << print(prog.cmd) << "\n";
    if (diff) {
      ++failed;
      out.stream() << diff->dump(2) << "\n";
    }
  }
  out.stream() << (failed ? "FAIL " : "PASS ") << what << ": " << programs.size() - failed << "/" << programs.size()
               << " programs, " << cases << " cases\n";
  return failed ? kCheckFailed : kOk;
}

int cmd_check_diagram(const Options& o) {
  return run_checks(o, "diagram", [](const CmdPtr& c, std::size_t n, const State& s, const Interp& in) {
    DiagramReport r = check_diagram(c, n, s, in);
    return r.commutes() && r.languages_equal ? std::nullopt : std::optional(r.to_json());
  });
}

int cmd_check_sequential(const Options& o) {
  return run_checks(o, "sequential agreement", [](const CmdPtr& c, std::size_t n, const State& s, const Interp& in) {
    ConvexSet pomset = lin_program<ConvexDomain>(c, n, s, in);
    ConvexSet direct = convex_semantics(c, n, s, in);
    if (hull_equal(pomset, direct)) return std::optional<nlohmann::json>();
    return std::optional<nlohmann::json>(
        {{"lin", ConvexDomain::to_json(pomset)}, {"sequential", ConvexDomain::to_json(direct)}});
  });
}

int cmd_check_oracle(const Options& o) {
  const bool hoare = o.domain == "hoare";
  return run_checks(o, "oracle agreement", [hoare](const CmdPtr& c, std::size_t n, const State& s, const Interp& in) {
    if (hoare) {
      StateSet a = lin_program<HoareDomain>(c, n, s, in), b = oracle_interleave<HoareDomain>(c, n, s, in);
      if (a == b) return std::optional<nlohmann::json>();
      return std::optional<nlohmann::json>({{"lin", HoareDomain::to_json(a)}, {"oracle", HoareDomain::to_json(b)}});
    }
    ConvexSet a = lin_program<ConvexDomain>(c, n, s, in), b = oracle_interleave<ConvexDomain>(c, n, s, in);
    if (hull_equal(a, b)) return std::optional<nlohmann::json>();
    return std::optional<nlohmann::json>({{"lin", ConvexDomain::to_json(a)}, {"oracle", ConvexDomain::to_json(b)}});
  });
}

int cmd_coin_race(const Options& o) {
  const auto r = examples::coin_race(std::max<std::size_t>(o.depth, 1));
  Output out(o.out);
  out.stream() << r.to_json().dump(2) << "\n";
  out.stream() << (r.ok() ? "PASS" : "FAIL") << " coin race: corners " << (r.lin_matches ? "match" : "differ")
               << ", translated halves " << (r.translated_half_bottom ? "ok" : "wrong") << ", recombination "
               << (r.recombined_differs ? "differs" : "coincides") << "\n";
  return r.ok() ? kOk : kCheckFailed;
}

int cmd_gen_corpus(const Options& o) {
  if (o.out.empty()) throw UsageError("gen-corpus needs --out DIR");
  CorpusOptions opts;
  opts.par = !o.no_par;
  opts.flip = !o.no_flip;
  opts.loops = !o.no_loops;
  fs::create_directories(o.out);
  const auto corpus = generate_corpus(o.seed, o.count, opts);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::ostringstream name;
    name << std::setw(3) << std::setfill('0') << i << ".prog";
    std::ofstream(fs::path(o.out) / name.str()) << print(corpus[i]) << "\n";
  }
  std::cout << "wrote " << corpus.size() << " programs to " << o.out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pomset semantics toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool programs) {
    if (programs) sub->add_option("program", o.inputs, "program file, directory of .prog files, or inline text");
    sub->add_option("--depth,-n", o.depth, "loop iterate depth")->capture_default_str();
    sub->add_option("--domain", o.domain, "hoare or convex")
        ->check(CLI::IsMember({"hoare", "convex"}))
        ->capture_default_str();
    sub->add_option("--vmax", o.vmax, "largest variable value")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--state", o.state, "initial state, e.g. x=0,y=0");
    auto* dot = sub->add_flag("--dot", o.dot, "emit Graphviz DOT");
    sub->add_flag("--json", o.json, "emit JSON (default)")->excludes(dot);
    sub->add_option("--out,-o", o.out, "output path");
    return sub;
  };

  struct Entry {
    CLI::App* sub;
    int (*run)(const Options&);
  };
  std::vector<Entry> entries{
      {add_common(app.add_subcommand("denote", "pomset semantics"), true), cmd_denote},
      {add_common(app.add_subcommand("lin", "linearize the pomset semantics"), true), cmd_lin},
      {add_common(app.add_subcommand("powdom", "pomset-language semantics"), true), cmd_powdom},
      {add_common(app.add_subcommand("tr", "translate the pomset semantics to a language"), true), cmd_tr},
      {add_common(app.add_subcommand("check-diagram", "compare the three Hoare routes"), true), cmd_check_diagram},
      {add_common(app.add_subcommand("check-theorem24", "compare with the sequential convex semantics"), true),
       cmd_check_sequential},
      {add_common(app.add_subcommand("check-oracle", "compare with the small-step interleaving oracle"), true),
       cmd_check_oracle},
      {add_common(app.add_subcommand("example18", "the coin race example"), false), cmd_coin_race},
  };
  auto* gen = app.add_subcommand("gen-corpus", "write a random program corpus");
  gen->add_option("--seed", o.seed)->capture_default_str();
  gen->add_option("--count", o.count)->capture_default_str();
  gen->add_option("--out,-o", o.out, "output directory")->required();
  gen->add_flag("--no-par", o.no_par);
  gen->add_flag("--no-flip", o.no_flip);
  gen->add_flag("--no-loops", o.no_loops);
  entries.push_back({gen, cmd_gen_corpus});

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& e : entries) {
      if (e.sub->parsed()) return e.run(o);
    }
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kSyntax;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSemantic;
  }
  return kOk;
}
