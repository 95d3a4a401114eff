#include "doctest.h"
#include "gen.hh"
#include "symba/error.hh"
#include "symba/syntax.hh"

using namespace symba;

namespace {

struct Ctx {
  std::shared_ptr<Algebra> alg;
  std::shared_ptr<RegexStore> rs;
  FormulaStore fs;
  explicit Ctx(std::shared_ptr<Algebra> a, RegexStore::Options o = {})
      : alg(a), rs(std::make_shared<RegexStore>(a, o)), fs(rs) {}
};

}  // namespace

TEST_SUITE("syntax") {

TEST_CASE("algebra specs") {
  CHECK(parse_algebra("prop:a,b")->spec() == "prop:a,b");
  CHECK(parse_algebra("prop:")->atoms().empty());
  CHECK(parse_algebra(" int ")->kind() == Algebra::Kind::integer);
  CHECK(parse_algebra("anchor(int)")->spec() == "anchor(int)");
  CHECK(parse_algebra("anchor(prop:a)")->spec() == "anchor(prop:a)");
  CHECK_THROWS_AS(parse_algebra("prop:a,a"), ParseError);
  CHECK_THROWS_AS(parse_algebra("prop:G"), ParseError);
  CHECK_THROWS_AS(parse_algebra("prop:1x"), ParseError);
  CHECK_THROWS_AS(parse_algebra("real"), ParseError);
  CHECK_THROWS_AS(parse_algebra("anchor(anchor(int))"), ParseError);
}

TEST_CASE("predicates") {
  auto p = parse_algebra("prop:a,b");
  CHECK(parse_predicate("a & !b", *p) == (p->atom("a") & !p->atom("b")));
  CHECK(parse_predicate("a | b & false", *p) == p->atom("a"));
  CHECK(parse_predicate("!(a | b)", *p) == !(p->atom("a") | p->atom("b")));
  auto z = Algebra::integer();
  CHECK(parse_predicate("[x>0] & [x % 2 == 1]", *z) == (z->greater_than(0) & z->congruent(2, 1)));
  CHECK(parse_predicate("[x<-3]", *z) == z->less_than(-3));
  CHECK_THROWS_AS(parse_predicate("[x=3]", *z), ParseError);
  CHECK_THROWS_AS(parse_predicate("[x%0==0]", *z), ParseError);
  CHECK_THROWS_AS(parse_predicate("c", *p), ParseError);
  CHECK_THROWS_AS(parse_predicate("a &", *p), ParseError);
  auto an = parse_algebra("anchor(prop:a)");
  Predicate na = parse_predicate("!a", *an);
  CHECK(na.denotes(AnchorMark{}));
  for (auto q : {an->embed(an->base()->atom("a")), an->embed(!an->base()->atom("a")), an->anchor(), !an->anchor(),
                 an->embed(!an->base()->atom("a")) | an->anchor(), an->top(), an->bottom()})
    CHECK(parse_predicate(q.str(), *an) == q);
  try {
    parse_predicate("a & & b", *p);
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("formulas") {
  auto z = Algebra::integer();
  Ctx c(z);
  auto& fs = c.fs;
  Formula phi = parse_formula("G([x>0]) & ([x%2==0] U [x%3==0])", fs);
  CHECK(phi == fs.conj(fs.globally(fs.pred(z->greater_than(0))),
                       fs.until(fs.pred(z->congruent(2, 0)), fs.pred(z->congruent(3, 0)))));
  CHECK(parse_formula("true", fs).is_top());
  Formula ex = parse_formula("{ [x>0] ; [x>0]* } <>-> G [x>0]", fs);
  CHECK(ex.kind() == Formula::Kind::exists_suffix);
  CHECK(parse_formula(fs.to_string(ex), fs) == ex);
  Formula u = parse_formula("[x>0] U [x>1] U [x>2]", fs);
  CHECK(u.child(1).kind() == Formula::Kind::until);
  Formula im = parse_formula("[x>0] -> [x>1] U [x>2]", fs);
  CHECK(im.kind() == Formula::Kind::until);
  CHECK_THROWS_AS(parse_formula("G", fs), ParseError);
  CHECK_THROWS_AS(parse_formula("[x>0] U", fs), ParseError);
  CHECK_THROWS_AS(parse_formula("{[x>0]} [x>0]", fs), ParseError);
  CHECK_THROWS_AS(parse_formula("a", fs), ParseError);
  CHECK_THROWS_AS(parse_formula("cl{[x>0] : [x>1]}", fs), ParseError);

  Ctx p(Algebra::prop({"a"}));
  Formula inf = parse_formula("G(F a & F !a)", p.fs);
  auto a = p.alg->atom("a");
  CHECK(inf == p.fs.globally(p.fs.conj(p.fs.eventually(p.fs.pred(a)), p.fs.eventually(p.fs.pred(!a)))));
}

TEST_CASE("random formulas and regexes round trip") {
  gen::Rng g(1);
  Ctx c(Algebra::prop({"p", "q"}), {.fusion = true});
  for (int i = 0; i < 500; ++i) {
    Formula f = gen::positive(g, c.fs, 4);
    if (gen::coin(g, 0.3)) f = c.fs.neg(f);
    std::string s = c.fs.to_string(f);
    CAPTURE(s);
    CHECK(parse_formula(s, c.fs) == f);
    Regex r = gen::regex(g, *c.rs, 4, true);
    std::string rt = c.rs->to_string(r);
    CAPTURE(rt);
    CHECK(parse_regex(rt, *c.rs) == r);
  }
  CHECK(parse_regex("()", *c.rs) == c.rs->eps());
  CHECK(parse_regex("~p*", *c.rs) == c.rs->star(c.rs->complement(c.rs->pred(c.alg->atom("p")))));
  CHECK_THROWS_AS(parse_regex("p* & q", *c.rs), ParseError);
  CHECK_THROWS_AS(parse_regex("!(p ; q)", *c.rs), ParseError);
}

TEST_CASE("anchored and int formulas round trip") {
  auto an = parse_algebra("anchor(int)");
  Ctx c(an);
  for (const char* src : {"ncl{[x>0] ; [#]} & G ![#]", "{([x>0] | [#]) ; [x<0]+} []-> X [x%3==2]",
                          "omega{[x>0] ; [x>0]} | cl{~([x<5] && [x>0])}"}) {
    Formula f = parse_formula(src, c.fs);
    CAPTURE(c.fs.to_string(f));
    CHECK(parse_formula(c.fs.to_string(f), c.fs) == f);
  }
}

TEST_CASE("words") {
  auto z = Algebra::integer();
  UpWord w = parse_word("2,4,3;1", *z);
  CHECK(w == UpWord{{std::int64_t(2), std::int64_t(4), std::int64_t(3)}, {std::int64_t(1)}});
  CHECK(word_to_string(w, *z) == "2,4,3;1");
  auto p = Algebra::prop({"p", "q"});
  UpWord e = parse_word(";{p}", *p);
  CHECK(e.u.empty());
  CHECK(e.v == std::vector<Letter>{Valuation{1}});
  UpWord x = parse_word("{p},{};{p q}", *p);
  CHECK(parse_word(word_to_string(x, *p), *p) == x);
  CHECK(word_to_string(x, *p) == "{p},{};{p q}");
  auto an = parse_algebra("anchor(int)");
  CHECK(parse_word("1,#;-2", *an).u[1] == Letter(AnchorMark{}));
  CHECK_THROWS_AS(parse_word("1;", *z), ParseError);
  CHECK_THROWS_AS(parse_word("1,2", *z), ParseError);
  CHECK_THROWS_AS(parse_word(";{r}", *p), ParseError);
  CHECK_THROWS_AS(parse_word(";#", *z), ParseError);
  gen::Rng g(4);
  for (int i = 0; i < 50; ++i) {
    UpWord r = gen::word(g, p->letters(), 3, 3);
    CHECK(parse_word(word_to_string(r, *p), *p) == r);
  }
}

TEST_CASE("automaton text round trip") {
  Ctx c(Algebra::prop({"a"}));
  auto m = build_aba(c.fs, parse_formula("G(F a & F !a)", c.fs)).aba;
  std::string text = to_text(m);
  Aba back = parse_automaton(text);
  CHECK(to_text(back) == text);
  CHECK(back.top_state == m.top_state);
  CHECK(back.labels == m.labels);

  gen::Rng g(2);
  auto alg = Algebra::prop({"p", "q"});
  for (int i = 0; i < 50; ++i) {
    Aba x = gen::automaton(g, alg, 4, false);
    x.labels[0] = "we\"ird, label=1";
    std::string t = to_text(x);
    CHECK(to_text(parse_automaton(t)) == t);
  }
  Ctx z(Algebra::integer());
  auto n = alt_elim(build_aba(z.fs, parse_formula("[x>0] U ([x%2==0] & [x<10])", z.fs)).aba).nba;
  CHECK(to_text(parse_automaton(to_text(n))) == to_text(n));
  CHECK_THROWS_AS(parse_automaton("algebra: int\nstates: 0=\"a\"\ninit: {{1}}\naccepting:\ndelta 0: (leaf {})\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_automaton("algebra: int\nstates: 0=\"a\"\ninit: {{0}}\naccepting:\n"), ParseError);
  CHECK_THROWS_AS(parse_automaton("algebra: int\nstates: 0=\"a\"\ninit: {{0}}\naccepting: 0\ndelta 0: (if p (leaf {}) (leaf {}))\n"),
                  ParseError);
}

}  // TEST_SUITE
