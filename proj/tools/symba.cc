// Command-line front end.
//
// Exit status: 0 success (member: true, empty: NONEMPTY), 1 negative answer
// (member: false, empty: EMPTY), 2 disagreement under --check, 64 usage
// error, 65 parse error, 70 internal error (state cap exceeded and the like).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "symba/error.hh"
#include "symba/oracle.hh"
#include "symba/syntax.hh"

using namespace symba;

namespace {

constexpr int kUsage = 64, kParse = 65, kInternal = 70, kDisagree = 2;

struct Options {
  std::string algebra = "prop:";
  std::string format = "text";
  bool check = false;
  bool fusion = false;
  bool from_files = false;
  bool no_reduction = false;
  std::uint64_t seed = 0;
  std::size_t cap = 100000;
  std::string word;
  std::string args[2];
};

struct Session {
  std::shared_ptr<Algebra> alg;
  std::shared_ptr<RegexStore> rs;
  std::unique_ptr<FormulaStore> fs;
  const Options& o;

  explicit Session(const Options& opts) : o(opts) {
    alg = parse_algebra(o.algebra);
    rs = std::make_shared<RegexStore>(alg, RegexStore::Options{.fusion = o.fusion, .dfa_state_cap = o.cap});
    fs = std::make_unique<FormulaStore>(rs);
  }

  Formula formula(const std::string& src) { return parse_formula(src, *fs); }

  static std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  /// Automaton read from a file (--aut) or M[φ] for a formula argument.
  Aba input(const std::string& arg) {
    if (!o.from_files) return build_aba(*fs, formula(arg), o.cap).aba;
    Aba m = parse_automaton(read_file(arg));
    if (m.algebra->spec() != alg->spec()) throw UsageError("automaton algebra differs from --algebra");
    // Rebuild over this session's algebra object.
    Aba out(alg);
    out.labels = m.labels;
    out.accepting = m.accepting;
    out.init = m.init;
    out.top_state = m.top_state;
    out.delta.clear();
    auto remap = [&](const Predicate& p) { return parse_predicate(p.str(), *alg); };
    std::function<StateTerm(StateTerm)> copy = [&](StateTerm t) {
      if (t.is_leaf()) return out.terms->leaf(t.leaf());
      return out.terms->ite(remap(t.cond()), copy(t.then_branch()), copy(t.else_branch()));
    };
    for (auto t : m.delta) out.delta.push_back(copy(t));
    return out;
  }

  Aba nba(const std::string& arg) {
    Aba m = input(arg);
    if (o.from_files && m.is_nondeterministic()) return m;
    return alt_elim(m, {.state_reduction = !o.no_reduction, .state_cap = o.cap}).nba;
  }

  void print(const Aba& m) { std::cout << (o.format == "dot" ? to_dot(m) : to_text(m)); }

  /// One letter per minterm of the given conditions.
  std::vector<Letter> alphabet(std::vector<Predicate> conds) {
    std::vector<Letter> out;
    for (const auto& m : alg->minterms(conds)) out.push_back(alg->sample(m));
    return out;
  }

  /// Words for --check: exhaustive when small, else seeded samples.
  std::vector<UpWord> check_words(const std::vector<Letter>& letters) {
    std::size_t k = letters.size();
    if (k * k * k * k <= 400) {
      return [&] {
        std::vector<UpWord> ws;
        std::vector<std::vector<Letter>> us{{}}, vs;
        for (const auto& a : letters) us.push_back({a});
        for (const auto& a : letters)
          for (const auto& b : letters) us.push_back({a, b});
        for (std::size_t i = 1; i < us.size(); ++i) vs.push_back(us[i]);
        for (const auto& u : us)
          for (const auto& v : vs) ws.push_back({u, v});
        return ws;
      }();
    }
    std::mt19937_64 g(o.seed);
    std::vector<UpWord> ws;
    for (int i = 0; i < 300; ++i) {
      UpWord w;
      std::size_t nu = g() % 3, nv = 1 + g() % 3;
      for (std::size_t j = 0; j < nu; ++j) w.u.push_back(letters[g() % k]);
      for (std::size_t j = 0; j < nv; ++j) w.v.push_back(letters[g() % k]);
      ws.push_back(std::move(w));
    }
    return ws;
  }

  int disagree(const std::string& what, const UpWord* w = nullptr) {
    std::cerr << "check failed: " << what;
    if (w) std::cerr << " on " << word_to_string(*w, *alg);
    std::cerr << "\n";
    return kDisagree;
  }
};

int cmd_derive(Session& s) {
  Formula f = s.formula(s.o.args[0]);
  FormulaTerm d = s.fs->deriv(f);
  std::cout << render(d, [&](Formula x) { return s.fs->to_string(x); }) << "\n";
  if (s.o.check) {
    auto [conds, leaves] = collect(d);
    for (auto l : leaves) {
      auto [c2, l2] = collect(s.fs->deriv(l));
      conds.insert(conds.end(), c2.begin(), c2.end());
    }
    auto letters = s.alphabet(conds);
    Evaluator ev(*s.fs);
    for (const auto& a : letters)
      for (const auto& w : s.check_words(letters)) {
        UpWord aw = w;
        aw.u.insert(aw.u.begin(), a);
        if (ev.eval(f, aw) != ev.eval(leaf_of(d, a), w)) return s.disagree("derivative step", &aw);
      }
  }
  return 0;
}

/// Symbolic membership against the direct semantics on the check words.
int check_language(Session& s, const Aba& n, Formula f) {
  auto letters = s.alphabet(n.conditions());
  Evaluator ev(*s.fs);
  for (const auto& w : s.check_words(letters))
    if (member_up(n, w) != ev.eval(f, w)) return s.disagree("automaton language", &w);
  return 0;
}

int cmd_aba(Session& s) {
  Aba m = s.input(s.o.args[0]);
  s.print(m);
  if (s.o.check) {
    auto cm = mintermize(m);
    auto ref = classical_mh(cm);
    auto n = alt_elim(m).nba;
    for (const auto& w : s.check_words(s.alphabet(m.conditions())))
      if (member_up(n, w) != classical_member(ref, to_symbols(cm, w))) return s.disagree("classical construction", &w);
    if (!s.o.from_files) return check_language(s, n, s.formula(s.o.args[0]));
  }
  return 0;
}

int cmd_nba(Session& s) {
  Aba n = s.nba(s.o.args[0]);
  s.print(n);
  if (s.o.check && !s.o.from_files) return check_language(s, n, s.formula(s.o.args[0]));
  return 0;
}

int cmd_dfa(Session& s) {
  Regex r = parse_regex(s.o.args[0], *s.rs);
  RegexDfa d = s.rs->build_dfa(r);
  Aba m(s.alg);
  for (std::size_t q = 0; q < d.size(); ++q) m.add_state(s.rs->to_string(d.states[q]), d.nullable[q]);
  std::vector<Predicate> conds;
  for (std::size_t q = 0; q < d.size(); ++q) {
    m.delta[q] = lift_unary(*m.terms, d.delta[q], [&](Regex x) {
      auto id = d.find(x);
      return id ? StateDnf::atom(*id) : StateDnf::bottom();
    });
    auto c = collect(d.delta[q]).first;
    conds.insert(conds.end(), c.begin(), c.end());
  }
  m.init = d.size() ? StateDnf::atom(0) : StateDnf::bottom();
  s.print(m);
  if (s.o.check) {
    auto letters = s.alphabet(conds);
    std::mt19937_64 g(s.o.seed);
    for (int i = 0; i < 500; ++i) {
      std::vector<Letter> u;
      for (std::size_t k = g() % 6; k > 0; --k) u.push_back(letters[g() % letters.size()]);
      std::optional<std::uint32_t> q = 0;
      for (const auto& a : u)
        if (q) q = d.step(*q, a);
      bool by_dfa = q && d.nullable[*q];
      if (by_dfa != brute_match(r, u) || by_dfa != s.rs->matches(r, u)) {
        std::cerr << "check failed: regex matching\n";
        return kDisagree;
      }
    }
  }
  return 0;
}

int cmd_product(Session& s) {
  Aba n1 = s.nba(s.o.args[0]), n2 = s.nba(s.o.args[1]);
  auto pr = product(n1, n2);
  s.print(pr.nba);
  if (s.o.check) {
    auto conds = n1.conditions();
    auto c2 = n2.conditions();
    conds.insert(conds.end(), c2.begin(), c2.end());
    for (const auto& w : s.check_words(s.alphabet(conds)))
      if (member_up(pr.nba, w) != (member_up(n1, w) && member_up(n2, w))) return s.disagree("product language", &w);
  }
  return 0;
}

int cmd_empty(Session& s) {
  Aba n = s.nba(s.o.args[0]);
  auto r = is_empty(n);
  if (s.o.check) {
    if (r.empty != classical_is_empty(mintermize(n))) return s.disagree("emptiness");
    if (!r.empty) {
      if (!member_up(n, *r.witness)) return s.disagree("witness membership", &*r.witness);
      if (!s.o.from_files && !eval(*s.fs, s.formula(s.o.args[0]), *r.witness))
        return s.disagree("witness semantics", &*r.witness);
    }
  }
  if (r.empty) {
    std::cout << "EMPTY\n";
    return 1;
  }
  std::cout << "NONEMPTY witness: " << word_to_string(*r.witness, *s.alg) << "\n";
  return 0;
}

int cmd_member(Session& s) {
  Aba n = s.nba(s.o.args[0]);
  UpWord w = parse_word(s.o.word, *s.alg);
  bool res = member_up(n, w);
  if (s.o.check && !s.o.from_files && res != eval(*s.fs, s.formula(s.o.args[0]), w))
    return s.disagree("membership", &w);
  std::cout << (res ? "true" : "false") << "\n";
  return res ? 0 : 1;
}

int cmd_minterms(Session& s) {
  Aba m = s.input(s.o.args[0]);
  auto ms = mintermize(m).symbols;
  for (const auto& p : ms) std::cout << p.str() << "\n";
  if (s.o.check) {
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (!ms[i].is_sat()) return s.disagree("unsatisfiable minterm");
      for (std::size_t j = i + 1; j < ms.size(); ++j)
        if ((ms[i] & ms[j]).is_sat()) return s.disagree("overlapping minterms");
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic automata for LTL and regular LTL over Boolean algebras"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options o;
  app.add_option("--algebra", o.algebra, "prop:a,b | int | anchor(<spec>)");
  app.add_option("--format", o.format, "text or dot")->check(CLI::IsMember({"text", "dot"}));
  app.add_flag("--check", o.check, "Cross-check the result against the reference oracles");
  app.add_option("--seed", o.seed, "Seed for sampled --check words");
  app.add_flag("--fusion", o.fusion, "Allow ':' (fusion) in regexes");
  app.add_option("--cap", o.cap, "State cap for every construction");
  app.add_flag("--aut", o.from_files, "Arguments are automaton text files instead of formulas");

  using Run = int (*)(Session&);
  std::vector<std::pair<CLI::App*, Run>> cmds;
  auto add = [&](const char* name, const char* help, const char* arg, Run run) {
    CLI::App* c = app.add_subcommand(name, help);
    c->add_option(arg, o.args[0])->required();
    cmds.emplace_back(c, run);
    return c;
  };
  add("derive", "Print the derivative of a formula", "formula", cmd_derive);
  add("aba", "Print the alternating automaton of a formula", "formula", cmd_aba);
  add("nba", "Print the alternation-free automaton", "formula", cmd_nba)
      ->add_flag("--no-reduction", o.no_reduction, "Disable state reduction");
  add("dfa", "Print the derivative DFA of a regex (accepting = nullable)", "regex", cmd_dfa);
  add("product", "Print the product of two automata", "first", cmd_product)->add_option("second", o.args[1])->required();
  add("empty", "Decide emptiness", "formula", cmd_empty);
  add("member", "Decide membership of an ultimately periodic word", "formula", cmd_member)
      ->add_option("--word", o.word, "u;v")
      ->required();
  add("minterms", "Print the minterms of an automaton's conditions", "formula", cmd_minterms);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    Session s(o);
    for (auto& [c, run] : cmds)
      if (c->parsed()) return run(s);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const PositiveFragmentError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const StateCapError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
