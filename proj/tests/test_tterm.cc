#include <random>

#include "doctest.h"
#include "symba/dnf.hh"
#include "symba/tterm.hh"

using namespace symba;

namespace {

using IntTerm = Term<int>;
using D = Dnf<int>;

IntTerm random_term(TermStore<int>& s, const std::vector<Predicate>& conds, std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> leaf(0, 4);
  if (depth == 0 || rng() % 3 == 0) return s.leaf(leaf(rng));
  const auto& c = conds[rng() % conds.size()];
  return s.ite_raw(c, random_term(s, conds, rng, depth - 1), random_term(s, conds, rng, depth - 1));
}

}  // namespace

TEST_SUITE("tterm") {

TEST_CASE("leaf_of and the worked cleaning example") {
  auto a = Algebra::prop({"p", "q"});
  auto p = a->atom("p"), q = a->atom("q");
  TermStore<int> s(a);
  auto f = s.ite(p, s.leaf(1), s.leaf(2));
  CHECK(leaf_of(f, Valuation{0}) == 2);
  CHECK(leaf_of(f, Valuation{1}) == 1);
  CHECK(leaf_of(s.leaf(7), Valuation{3}) == 7);

  // beta = p, alpha = p∧q; leaves 1..4 combined as 10*x + y
  auto beta = p, alpha = p & q;
  auto l = s.ite(beta, s.leaf(1), s.leaf(2));
  auto r = s.ite(alpha, s.leaf(3), s.leaf(4));
  auto prod = lift_binary(s, l, r, [](int x, int y) { return 10 * x + y; });
  auto expect = s.ite(beta, s.ite(alpha, s.leaf(13), s.leaf(14)), s.leaf(24));
  CHECK(prod == expect);
  CHECK(is_clean(prod));
}

TEST_CASE("lifting law on random terms") {
  auto a = Algebra::prop({"p", "q"});
  auto p = a->atom("p"), q = a->atom("q");
  std::vector<Predicate> conds{p, q, p & q, p | !q, !p};
  TermStore<int> s(a);
  std::mt19937 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto f = random_term(s, conds, rng, 4), g = random_term(s, conds, rng, 4);
    auto op = [](int x, int y) { return 7 * x + y; };
    auto h = lift_binary(s, f, g, op);
    auto n = lift_unary(s, f, [](int x) { return -x; });
    CHECK(is_clean(h));
    auto c = restrict(s, f, a->top());
    CHECK(is_clean(c));
    for (auto& l : a->letters()) {
      CHECK(leaf_of(h, l) == op(leaf_of(f, l), leaf_of(g, l)));
      CHECK(leaf_of(n, l) == -leaf_of(f, l));
      CHECK(leaf_of(c, l) == leaf_of(f, l));
    }
    CHECK(func_equiv(c, f, *a, std::equal_to<int>()));
    auto nn = lift_unary(s, n, [](int x) { return -x; });
    CHECK(func_equiv(nn, f, *a, std::equal_to<int>()));
  }
}

TEST_CASE("restrict cases") {
  auto a = Algebra::prop({"p", "q"});
  auto p = a->atom("p"), q = a->atom("q");
  TermStore<int> s(a);
  CHECK(restrict(s, s.leaf(5), p) == s.leaf(5));
  auto g = s.ite(q, s.leaf(1), s.leaf(2));
  // beta ∧ alpha unsat: result is g restricted to beta
  CHECK(restrict(s, s.ite_raw(p, s.leaf(9), g), !p) == g);
  // beta ∧ ¬alpha unsat
  CHECK(restrict(s, s.ite_raw(p, g, s.leaf(9)), p) == g);
  // nested redundant test is removed
  auto f = s.ite_raw(p, s.ite_raw(p, s.leaf(1), s.leaf(2)), s.leaf(3));
  CHECK(restrict(s, f, a->top()) == s.ite(p, s.leaf(1), s.leaf(3)));
  CHECK_FALSE(is_clean(f));
}

TEST_CASE("if_then laws") {
  auto a = Algebra::prop({"p", "q"});
  auto p = a->atom("p"), q = a->atom("q");
  TermStore<D> s(a);
  auto top = s.leaf(D::top());
  CHECK(if_then(s, a->top(), top, D()) == top);
  CHECK(if_then(s, a->bottom(), top, D()) == s.leaf(D()));
  auto conj = lift_binary(s, if_then(s, p, top, D()), if_then(s, q, top, D()),
                          [](const D& x, const D& y) { return x & y; });
  CHECK(conj == if_then(s, p & q, top, D()));
  auto f = s.leaf(D::atom(4));
  auto disj = lift_binary(s, if_then(s, p, f, D()), if_then(s, q, f, D()),
                          [](const D& x, const D& y) { return x | y; });
  CHECK(disj == if_then(s, p | q, f, D()));
}

TEST_CASE("collect") {
  auto a = Algebra::prop({"p"});
  auto p = a->atom("p");
  TermStore<int> s(a);
  auto [c0, l0] = collect(s.leaf(3));
  CHECK(c0.empty());
  CHECK(l0 == std::vector<int>{3});
  auto [c1, l1] = collect(s.ite_raw(p, s.leaf(1), s.ite_raw(p, s.leaf(1), s.leaf(2))));
  CHECK(c1 == std::vector<Predicate>{p});
  CHECK(l1 == std::vector<int>{1, 2});
}

TEST_CASE("func_equiv") {
  auto a = Algebra::prop({"p", "q"});
  auto p = a->atom("p"), q = a->atom("q");
  TermStore<int> s(a);
  auto eq = std::equal_to<int>();
  auto f = s.leaf(1), g = s.leaf(2);
  CHECK(func_equiv(s.ite_raw(p, f, f), f, *a, eq));
  CHECK(func_equiv(s.ite_raw(p, s.ite_raw(q, f, g), g), s.ite_raw(p & q, f, g), *a, eq));
  CHECK(func_equiv(s.ite(p, f, g), s.ite(!p, g, f), *a, eq));
  CHECK_FALSE(func_equiv(s.ite(p, f, g), s.ite(q, f, g), *a, eq));
}

TEST_CASE("dnf operations") {
  CHECK((D::atom(1) & (D::atom(2) | D::atom(3))) == D::from_clauses({{1, 2}, {1, 3}}));
  CHECK((D::bottom() & D::atom(1)).is_bottom());
  CHECK((D::bottom() | D::atom(1)) == D::atom(1));
  CHECK((D::top() & D::atom(1)) == D::atom(1));
  auto s1 = D::atom(1), s2 = D::atom(2), s3 = D::atom(3);
  CHECK(((s1 | s2) & s3) == D::from_clauses({{1, 3}, {2, 3}}));
  CHECK(D::from_clauses({{1, 3}, {2, 3}, {1}}).min_models() == D::from_clauses({{1}, {2, 3}}));
  CHECK(D::bottom().min_models() == D::bottom());
  CHECK(D::top().min_models() == D::top());
  auto anti = D::from_clauses({{1, 2}, {3}});
  CHECK(anti.min_models() == anti);
  CHECK(D::from_clauses({{2, 1, 1}}) == D::from_clauses({{1, 2}}));
  CHECK(D::from_clauses({{1, 3}, {2}}).str([](int x) { return std::to_string(x); }) == "{{1,3},{2}}");
  CHECK(D::bottom().str([](int x) { return std::to_string(x); }) == "{}");
}

TEST_CASE("min_models properties") {
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    std::vector<D::Clause> cs;
    int n = int(rng() % 5);
    for (int k = 0; k < n; ++k) {
      D::Clause c;
      for (int x = 0; x < 4; ++x)
        if (rng() % 2) c.push_back(x);
      cs.push_back(c);
    }
    auto d = D::from_clauses(cs);
    auto m = d.min_models();
    for (auto& z : m.clauses()) CHECK(std::find(d.clauses().begin(), d.clauses().end(), z) != d.clauses().end());
    for (auto& x : d.clauses())
      CHECK(std::any_of(m.clauses().begin(), m.clauses().end(),
                        [&](auto& z) { return std::includes(x.begin(), x.end(), z.begin(), z.end()); }));
    for (auto& x : m.clauses())
      for (auto& y : m.clauses())
        if (x != y) CHECK_FALSE(std::includes(x.begin(), x.end(), y.begin(), y.end()));
  }
}

}
