#include "doctest.h"
#include "gen.hh"
#include "symba/error.hh"
#include "symba/oracle.hh"

using namespace symba;

namespace {

struct Ctx {
  std::shared_ptr<Algebra> alg;
  std::shared_ptr<RegexStore> rs;
  FormulaStore fs;
  explicit Ctx(std::shared_ptr<Algebra> a, RegexStore::Options o = {})
      : alg(a), rs(std::make_shared<RegexStore>(a, o)), fs(rs) {}
};

Letter z(std::int64_t x) { return Letter(x); }

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("evaluation examples") {
  auto in = Algebra::integer();
  Ctx c(in);
  auto& fs = c.fs;
  Formula phi = fs.conj(fs.globally(fs.pred(in->greater_than(0))),
                        fs.until(fs.pred(in->congruent(2, 0)), fs.pred(in->congruent(3, 0))));
  UpWord w{{z(2), z(4), z(3)}, {z(1)}};
  CHECK(eval(fs, phi, w));
  CHECK(eval_unrolled(phi, w));
  CHECK_FALSE(eval(fs, phi, UpWord{{z(2), z(5)}, {z(3)}}));

  auto al = in->greater_than(0) & in->less_than(2), be = in->greater_than(1) & in->less_than(3);
  auto& rs = *c.rs;
  Regex r = rs.concat(rs.star(rs.concat(rs.pred(al), rs.any())), rs.pred(be));
  CHECK(eval(fs, fs.cl(r), UpWord{{}, {z(1)}}));
  CHECK_FALSE(eval(fs, fs.cl(r), UpWord{{z(0)}, {z(1)}}));
  CHECK(eval(fs, fs.ncl(r), UpWord{{z(0)}, {z(1)}}));

  Ctx p(Algebra::prop({"a", "b"}));
  Valuation a{1}, b{2};
  Regex ab = p.rs->concat(p.rs->pred(p.alg->atom("a")), p.rs->pred(p.alg->atom("b")));
  CHECK(eval(p.fs, p.fs.omega(ab), UpWord{{}, {a, b}}));
  CHECK_FALSE(eval(p.fs, p.fs.omega(ab), UpWord{{}, {a}}));
  CHECK_FALSE(eval(p.fs, p.fs.omega(ab), UpWord{{a, b}, {b}}));
  CHECK_THROWS_AS(eval(p.fs, p.fs.omega(ab), UpWord{{}, {z(1)}}), UsageError);
  CHECK_THROWS_AS(eval(p.fs, p.fs.omega(ab), UpWord{{}, {}}), UsageError);
  CHECK_THROWS_AS(eval_unrolled(p.fs.omega(ab), UpWord{{}, {a}}), UsageError);
}

TEST_CASE("suffix implications overlap the last letter") {
  Ctx c(Algebra::prop({"a", "b", "c"}));
  auto& fs = c.fs;
  auto& rs = *c.rs;
  auto a = c.alg->atom("a"), b = c.alg->atom("b"), g = c.alg->atom("c");
  Regex r = rs.concat(rs.pred(a), rs.pred(b));
  Formula ex = fs.exists_suffix(r, fs.pred(g));
  Formula all = fs.forall_suffix(r, fs.pred(g));
  Valuation A{1}, B{2}, BC{6}, N{0};
  CHECK(eval(fs, ex, UpWord{{A, BC}, {N}}));
  CHECK_FALSE(eval(fs, ex, UpWord{{A, B}, {Valuation{4}}}));
  CHECK(eval(fs, all, UpWord{{A, BC}, {N}}));
  CHECK_FALSE(eval(fs, all, UpWord{{A, B}, {N}}));
  CHECK(eval(fs, all, UpWord{{B}, {N}}));
}

TEST_CASE("unfolding laws and period shifts") {
  gen::Rng g(5);
  auto alg = Algebra::prop({"p", "q"});
  Ctx c(alg);
  auto& fs = c.fs;
  Evaluator ev(fs);
  for (int i = 0; i < 150; ++i) {
    Formula f1 = gen::positive(g, fs, 2), f2 = gen::positive(g, fs, 2);
    UpWord w = gen::word(g, alg->letters(), 3, 3);
    std::size_t n = w.u.size() + w.v.size();
    auto succ = [&](std::size_t k) { return k + 1 < n ? k + 1 : w.u.size(); };
    auto a = ev.table(f1, w), b = ev.table(f2, w);
    auto u = ev.table(fs.until(f1, f2), w), r = ev.table(fs.release(f1, f2), w);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(u[k] == (b[k] || (a[k] && u[succ(k)])));
      CHECK(r[k] == (b[k] && (a[k] || r[succ(k)])));
    }
    // u·v^ω = u·v·v^ω = (u·v[0])·(v[1..]·v[0])^ω
    UpWord w2{w.u, w.v};
    w2.u.insert(w2.u.end(), w.v.begin(), w.v.end());
    UpWord w3{w.u, {}};
    w3.u.push_back(w.v[0]);
    w3.v.assign(w.v.begin() + 1, w.v.end());
    w3.v.push_back(w.v[0]);
    UpWord w4{w.u, w.v};
    w4.v.insert(w4.v.end(), w.v.begin(), w.v.end());
    Formula f = gen::positive(g, fs, 3);
    bool expect = ev.eval(f, w);
    CHECK(ev.eval(f, w2) == expect);
    CHECK(ev.eval(f, w3) == expect);
    CHECK(ev.eval(f, w4) == expect);
    CHECK(ev.eval(fs.neg(f), w) == !expect);
    Formula nf;
    try {
      nf = fs.to_positive(fs.neg(f));
    } catch (const PositiveFragmentError&) {
    }
    if (nf.valid()) CHECK(ev.eval(nf, w) == !expect);
  }
}

TEST_CASE("fixpoint and unrolled evaluation agree on LTL") {
  gen::Rng g(9);
  auto alg = Algebra::prop({"p", "q"});
  Ctx c(alg);
  Evaluator ev(c.fs);
  for (int i = 0; i < 300; ++i) {
    Formula f = gen::positive(g, c.fs, 4, false);
    if (gen::coin(g, 0.3)) f = c.fs.neg(f);
    UpWord w = gen::word(g, alg->letters(), 3, 3);
    CHECK(ev.eval(f, w) == eval_unrolled(f, w));
  }
}

TEST_CASE("one step of the derivative") {
  gen::Rng g(13);
  auto alg = Algebra::prop({"p", "q"});
  Ctx c(alg);
  Evaluator ev(c.fs);
  auto letters = alg->letters();
  for (int i = 0; i < 200; ++i) {
    Formula f = c.fs.to_positive(gen::positive(g, c.fs, 3));
    UpWord w = gen::word(g, letters, 2, 3);
    Letter a = letters[gen::pick(g, letters.size())];
    UpWord aw = w;
    aw.u.insert(aw.u.begin(), a);
    CHECK(ev.eval(f, aw) == ev.eval(leaf_of(c.fs.deriv(f), a), w));
  }
}

TEST_CASE("brute-force matching") {
  gen::Rng g(17);
  auto alg = Algebra::prop({"p", "q"});
  RegexStore rs(alg, {.fusion = true});
  auto letters = alg->letters();
  for (int i = 0; i < 300; ++i) {
    Regex r = gen::regex(g, rs, 3, true);
    std::vector<Letter> u;
    for (std::size_t k = gen::pick(g, 6); k > 0; --k) u.push_back(letters[gen::pick(g, letters.size())]);
    bool m = brute_match(r, u);
    CHECK(rs.matches(r, u) == m);
    CHECK(brute_match(rs.complement(r), u) == !m);
  }
  std::vector<Letter> nine(9, Letter(Valuation{0}));
  CHECK_THROWS_AS(brute_match(rs.eps(), nine), UsageError);
}

TEST_CASE("classical breakpoint construction") {
  Ctx c(Algebra::prop({"a"}));
  auto a = c.alg->atom("a");
  Formula phi = c.fs.globally(c.fs.conj(c.fs.eventually(c.fs.pred(a)), c.fs.eventually(c.fs.pred(!a))));
  auto m = build_aba(c.fs, phi).aba;
  auto cm = mintermize(m);
  auto nba = classical_mh(cm);
  for (const auto& w : gen::all_words(c.alg->letters(), 2, 3))
    CHECK(classical_member(nba, to_symbols(cm, w)) == eval(c.fs, phi, w));
  CHECK_FALSE(classical_is_empty(nba));

  Aba loop(c.alg);
  loop.add_state("q", true);
  loop.delta[0] = loop.terms->leaf(StateDnf::atom(0));
  loop.init = StateDnf::atom(0);
  auto cl = mintermize(loop);
  auto one = classical_mh(cl);
  CHECK(classical_member(one, to_symbols(cl, UpWord{{}, {Valuation{0}}})));
  CHECK_FALSE(classical_is_empty(one));
  loop.accepting[0] = false;
  CHECK(classical_is_empty(mintermize(loop)));

  gen::Rng g(21);
  auto alg = Algebra::prop({"p", "q"});
  auto words = gen::all_words(alg->letters(), 1, 2);
  for (int i = 0; i < 40; ++i) {
    Aba x = gen::automaton(g, alg, 3, false);
    auto cx = mintermize(x);
    auto sym = alt_elim(from_classical(cx, alg, cx.symbols)).nba;
    auto ref = classical_mh(cx);
    for (const auto& w : words) CHECK(member_up(sym, w) == classical_member(ref, to_symbols(cx, w)));
  }
}

}  // TEST_SUITE
