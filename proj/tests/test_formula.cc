#include "doctest.h"
#include "symba/error.hh"
#include "symba/formula.hh"

using namespace symba;

namespace {

struct Ctx {
  std::shared_ptr<Algebra> alg;
  std::shared_ptr<RegexStore> rs;
  FormulaStore fs;
  explicit Ctx(std::shared_ptr<Algebra> a) : alg(a), rs(std::make_shared<RegexStore>(a)), fs(rs) {}
  TermStore<Formula>& t() { return fs.terms(); }
};

// The successor of state q on the branch picked by letter l.
StateDnf step(const Aba& m, StateId q, const Letter& l) { return leaf_of(m.delta[q], l); }

}  // namespace

TEST_SUITE("formula") {

TEST_CASE("intro derivative and its negation") {
  Ctx c(Algebra::integer());
  auto& fs = c.fs;
  auto z = c.alg;
  auto pos = z->greater_than(0), even = z->congruent(2, 0), three = z->congruent(3, 0);
  Formula phi = fs.globally(fs.pred(pos));
  Formula psi = fs.until(fs.pred(even), fs.pred(three));
  Formula both = fs.conj(phi, psi);
  auto& t = c.t();
  auto expect = t.ite(pos, t.ite(three, t.leaf(phi), t.ite(even, t.leaf(both), t.leaf(fs.bottom()))),
                      t.leaf(fs.bottom()));
  CHECK(fs.deriv(both) == expect);
  auto neg = t.ite(pos, t.ite(three, t.leaf(fs.neg(phi)), t.ite(even, t.leaf(fs.neg(both)), t.leaf(fs.top()))),
                   t.leaf(fs.top()));
  CHECK(fs.deriv(fs.neg(both)) == neg);
  CHECK(leaf_of(fs.deriv(both), Letter(std::int64_t(8))) == both);
  auto [conds, leaves] = collect(fs.deriv(both));
  CHECK(conds.size() == 3);
  CHECK(leaves.size() == 3);
}

TEST_CASE("cleaning removes the infeasible release branch") {
  Ctx c(Algebra::integer());
  auto& fs = c.fs;
  auto z = c.alg;
  Formula f = fs.release(fs.pred(z->less_than(1)), fs.pred(z->greater_than(0)));
  auto& t = c.t();
  CHECK(fs.deriv(f) == t.ite(z->greater_than(0), t.leaf(f), t.leaf(fs.bottom())));
}

TEST_CASE("eventually and unary rules") {
  Ctx c(Algebra::prop({"a", "b"}));
  auto& fs = c.fs;
  auto a = c.alg->atom("a");
  auto& t = c.t();
  Formula fa = fs.eventually(fs.pred(a));
  CHECK(fs.deriv(fa) == t.ite(a, t.leaf(fs.top()), t.leaf(fa)));
  CHECK(fs.deriv(fs.next(fa)) == t.leaf(fa));
  CHECK(fs.deriv(fs.pred(a)) == t.ite(a, t.leaf(fs.top()), t.leaf(fs.bottom())));
  CHECK(fs.neg(fs.pred(a)) == fs.pred(!a));
  CHECK(fs.neg(fs.neg(fa)) == fa);
  CHECK(fs.conj(fs.pred(a), fs.top()) == fs.pred(a));
  CHECK(fs.conj(fa, fs.bottom()).is_bottom());
  CHECK(fs.disj(fa, fs.top()).is_top());
  CHECK(fs.conj(fa, fs.conj(fa, fs.next(fa))) == fs.conj(fs.next(fa), fa));
  CHECK(fs.conj(fs.pred(a), fs.pred(c.alg->atom("b"))) == fs.pred(a & c.alg->atom("b")));
}

TEST_CASE("positive form") {
  Ctx c(Algebra::prop({"p", "q"}));
  auto& fs = c.fs;
  auto& rs = *c.rs;
  auto p = c.alg->atom("p"), q = c.alg->atom("q");
  Formula u = fs.until(fs.pred(p), fs.pred(q));
  CHECK(fs.to_positive(fs.neg(u)) == fs.release(fs.pred(!p), fs.pred(!q)));
  CHECK(fs.to_positive(u) == u);
  Regex r = rs.concat(rs.pred(p), rs.pred(q));
  Formula g = fs.globally(fs.pred(q));
  CHECK(fs.to_positive(fs.neg(fs.exists_suffix(r, g))) == fs.forall_suffix(r, fs.eventually(fs.pred(!q))));
  CHECK(fs.to_positive(fs.neg(fs.cl(r))) == fs.ncl(r));
  CHECK(fs.to_positive(fs.neg(fs.ncl(r))) == fs.cl(r));
  CHECK_THROWS_AS(fs.to_positive(fs.neg(fs.omega(r))), PositiveFragmentError);
  Formula mixed = fs.neg(fs.conj(fs.next(fs.neg(u)), g));
  Formula m2 = fs.to_positive(mixed);
  CHECK(fs.is_positive(m2));
  CHECK(fs.modal_size(m2) == fs.modal_size(mixed));
}

TEST_CASE("rltl constructor rewrites") {
  Ctx c(Algebra::prop({"p"}));
  auto& fs = c.fs;
  auto& rs = *c.rs;
  Formula x = fs.pred(c.alg->atom("p"));
  CHECK(fs.exists_suffix(rs.bottom(), x).is_bottom());
  CHECK(fs.exists_suffix(rs.eps(), x).is_bottom());
  CHECK(fs.forall_suffix(rs.eps(), x).is_top());
  CHECK(fs.cl(rs.bottom()).is_bottom());
  CHECK(fs.ncl(rs.bottom()).is_top());
  CHECK(fs.cl(rs.top_star()).is_top());
  CHECK(fs.ncl(rs.eps()).is_bottom());
}

TEST_CASE("alternating automaton of the infinitely often formula") {
  Ctx c(Algebra::prop({"a"}));
  auto& fs = c.fs;
  auto a = c.alg->atom("a");
  Formula fa = fs.eventually(fs.pred(a)), fna = fs.eventually(fs.pred(!a));
  Formula q0 = fs.globally(fs.conj(fa, fna));
  auto built = build_aba(fs, q0);
  const Aba& m = built.aba;
  REQUIRE(m.size() == 4);
  auto id = [&](Formula f) { return StateId(std::find(built.states.begin(), built.states.end(), f) - built.states.begin()); };
  StateId s0 = id(q0), s1 = id(fa), s2 = id(fna), top = id(fs.top());
  REQUIRE(top < 4);
  CHECK(m.top_state == top);
  CHECK(m.init == StateDnf::atom(s0));
  auto& t = *m.terms;
  CHECK(m.delta[s0] == t.ite(a, t.leaf(StateDnf::from_clauses({{s2, s0}})), t.leaf(StateDnf::from_clauses({{s1, s0}}))));
  CHECK(m.delta[s1] == t.ite(a, t.leaf(StateDnf::top()), t.leaf(StateDnf::atom(s1))));
  CHECK(m.delta[s2] == t.ite(!a, t.leaf(StateDnf::top()), t.leaf(StateDnf::atom(s2))));
  CHECK(m.delta[top] == t.leaf(StateDnf::top()));
  CHECK(m.accepting == std::vector<bool>{s0 == 0 || top == 0, s0 == 1 || top == 1, s0 == 2 || top == 2,
                                         s0 == 3 || top == 3});
  for (auto& d : m.delta) CHECK(is_clean(d));
  CHECK_FALSE(m.is_nondeterministic());
}

TEST_CASE("suffix implication automaton") {
  Ctx c(Algebra::prop({"a", "b", "c"}));
  auto& fs = c.fs;
  auto& rs = *c.rs;
  auto al = c.alg->atom("a"), be = c.alg->atom("b"), ga = c.alg->atom("c");
  Regex r = rs.plus(rs.concat(rs.pred(al), rs.pred(be)));
  Formula gg = fs.globally(fs.pred(ga));
  Formula phi = fs.exists_suffix(r, gg);
  auto built = build_aba(fs, phi);
  const Aba& m = built.aba;
  REQUIRE(m.size() == 4);
  CHECK(m.is_nondeterministic());
  // q0 -α-> q1; q1 -β∧γ-> {q3 or q2}; q1 -β∧¬γ-> q2
  StateDnf d0 = step(m, 0, Valuation{1});
  REQUIRE(d0.size() == 1);
  StateId q1 = d0.clauses()[0][0];
  auto guarded = guarded_leaves(m.delta[q1], *c.alg);
  std::erase_if(guarded, [](auto& x) { return x.first.is_bottom(); });
  REQUIRE(guarded.size() == 2);
  Predicate to_q2 = c.alg->bottom(), to_q3 = c.alg->bottom();
  StateId q3 = StateId(std::find(built.states.begin(), built.states.end(), gg) - built.states.begin());
  for (auto& [leaf, g] : guarded)
    for (auto& cl : leaf.clauses()) {
      if (cl[0] == q3)
        to_q3 = to_q3 | g;
      else
        to_q2 = to_q2 | g;
    }
  CHECK(to_q2 == be);
  CHECK(to_q3 == (be & ga));
  CHECK(m.accepting[q3]);
}

TEST_CASE("weak closure and omega closure automata") {
  auto z = Algebra::integer();
  Ctx c(z);
  auto& fs = c.fs;
  auto& rs = *c.rs;
  auto al = z->greater_than(0) & z->less_than(2), be = z->greater_than(1) & z->less_than(3);
  Regex r = rs.concat(rs.star(rs.concat(rs.pred(al), rs.any())), rs.pred(be));
  auto built = build_aba(fs, fs.cl(r));
  CHECK(built.aba.size() == 3);
  CHECK(built.aba.is_deterministic());
  CHECK(std::all_of(built.aba.accepting.begin(), built.aba.accepting.end(), [](bool x) { return x; }));

  Ctx p(Algebra::prop({"a", "b"}));
  auto a = p.alg->atom("a"), b = p.alg->atom("b");
  Formula om = p.fs.omega(p.rs->concat(p.rs->pred(a), p.rs->pred(b)));
  auto m = build_aba(p.fs, om).aba;
  REQUIRE(m.size() == 2);
  CHECK(m.is_deterministic());
  CHECK(m.accepting == std::vector<bool>{true, false});
  auto& t = *m.terms;
  CHECK(m.delta[0] == t.ite(a, t.leaf(StateDnf::atom(1)), t.leaf(StateDnf())));
  CHECK(m.delta[1] == t.ite(b, t.leaf(StateDnf::atom(0)), t.leaf(StateDnf())));
}

TEST_CASE("anchored negative closure") {
  auto base = Algebra::prop({"a"});
  auto an = Algebra::with_anchor(base);
  Ctx c(an);
  auto& fs = c.fs;
  auto& rs = *c.rs;
  auto al = an->embed(base->atom("a")), hash = an->anchor();
  Regex aa = rs.concat(rs.pred(al), rs.pred(al));
  Regex s = rs.concat(rs.star(aa), rs.pred(hash));
  Formula s0 = fs.ncl(s);
  auto& t = c.t();
  Regex s1r = rs.concat(rs.pred(al), s);
  CHECK(fs.deriv(s0) == t.ite(al, t.leaf(fs.ncl(s1r)), t.ite(hash, t.leaf(fs.bottom()), t.leaf(fs.top()))));
  CHECK(fs.deriv(fs.ncl(s1r)) == t.ite(al, t.leaf(s0), t.leaf(fs.top())));
  CHECK_FALSE(fs.is_accepting(s0));
  auto phi = fs.conj(fs.globally(fs.pred(!hash)), s0);
  auto built = build_aba(fs, phi);
  CHECK(built.aba.size() == 4);
}

TEST_CASE("printing") {
  Ctx c(Algebra::prop({"p", "q"}));
  auto& fs = c.fs;
  auto& rs = *c.rs;
  auto p = fs.pred(c.alg->atom("p")), q = fs.pred(c.alg->atom("q"));
  CHECK(fs.to_string(fs.until(p, fs.until(q, p))) == "p U q U p");
  CHECK(fs.to_string(fs.until(fs.until(p, q), p)) == "(p U q) U p");
  CHECK(fs.to_string(fs.globally(fs.eventually(p))) == "G F p");
  Formula xp = fs.next(p), xq = fs.next(q), fp = fs.eventually(p);
  CHECK(fs.to_string(fs.disj(xp, fs.conj(xq, fp))) == "X p | F p & X q");
  CHECK(fs.to_string(fs.exists_suffix(rs.plus(rs.pred(c.alg->atom("p"))), q)) == "{p+} <>-> q");
  CHECK(fs.to_string(fs.pred(c.alg->atom("p") & c.alg->atom("q"))) == "(p & q)");
  CHECK(fs.to_string(fs.top()) == "true");
}

}
