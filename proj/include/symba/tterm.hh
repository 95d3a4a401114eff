#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "symba/algebra.hh"
#include "symba/error.hh"

namespace symba {

template <class L>
struct TermNode {
  Predicate cond;  // invalid for leaves
  const TermNode* then_ = nullptr;
  const TermNode* else_ = nullptr;
  L leaf{};
  std::uint32_t id = 0;
};

/// Handle to a hash-consed transition term: either a leaf or
/// `if cond then t else e`. Two handles from one store are equal iff the
/// terms are structurally equal.
template <class L>
class Term {
 public:
  Term() = default;
  explicit Term(const TermNode<L>* n) : node_(n) {}

  bool valid() const { return node_ != nullptr; }
  bool is_leaf() const { return !node_->cond.valid(); }
  const L& leaf() const { return node_->leaf; }
  const Predicate& cond() const { return node_->cond; }
  Term then_branch() const { return Term(node_->then_); }
  Term else_branch() const { return Term(node_->else_); }
  std::uint32_t id() const { return node_->id; }
  const void* key() const { return node_; }

  bool operator==(const Term&) const = default;

 private:
  const TermNode<L>* node_ = nullptr;
};

/// Hash-consing context for terms with leaves of type L.
///
/// `ite` applies the local laws that keep terms small: ite(⊤,f,g)=f,
/// ite(⊥,f,g)=g, ite(α,f,f)=f, and the two flattening laws
/// ite(α,ite(β,f,g),g)=ite(α∧β,f,g) and ite(α,f,ite(β,f,g))=ite(α∨β,f,g).
/// `ite_raw` builds the node as given.
template <class L, class Hash = std::hash<L>>
class TermStore {
 public:
  using T = Term<L>;

  explicit TermStore(std::shared_ptr<const Algebra> alg) : alg_(std::move(alg)) {}
  TermStore(const TermStore&) = delete;
  TermStore& operator=(const TermStore&) = delete;

  const Algebra& algebra() const { return *alg_; }
  std::shared_ptr<const Algebra> algebra_ptr() const { return alg_; }
  std::size_t size() const { return nodes_.size(); }

  T leaf(const L& v) {
    auto it = leaves_.find(v);
    if (it != leaves_.end()) return T(it->second);
    auto& n = nodes_.emplace_back();
    n.leaf = v;
    n.id = std::uint32_t(nodes_.size() - 1);
    leaves_.emplace(v, &n);
    return T(&n);
  }

  T ite(const Predicate& c, T t, T e) {
    check(c);
    if (c.is_top() || t == e) return t;
    if (c.is_bottom()) return e;
    if (!t.is_leaf() && t.else_branch() == e) return ite(c & t.cond(), t.then_branch(), e);
    if (!e.is_leaf() && e.then_branch() == t) return ite(c | e.cond(), t, e.else_branch());
    return ite_raw(c, t, e);
  }

  T ite_raw(const Predicate& c, T t, T e) {
    check(c);
    IteKey k{c.id(), t.key(), e.key()};
    auto it = ites_.find(k);
    if (it != ites_.end()) return T(it->second);
    auto& n = nodes_.emplace_back();
    n.cond = c;
    n.then_ = static_cast<const TermNode<L>*>(t.key());
    n.else_ = static_cast<const TermNode<L>*>(e.key());
    n.id = std::uint32_t(nodes_.size() - 1);
    ites_.emplace(k, &n);
    return T(&n);
  }

 private:
  struct IteKey {
    std::uint32_t cond;
    const void* t;
    const void* e;
    bool operator==(const IteKey&) const = default;
  };
  struct IteKeyHash {
    std::size_t operator()(const IteKey& k) const noexcept {
      std::size_t h = std::hash<const void*>()(k.t);
      h ^= std::hash<const void*>()(k.e) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return h ^ (std::size_t(k.cond) * 0x100000001b3ull);
    }
  };

  void check(const Predicate& c) const {
    if (c.algebra_ptr() != alg_.get()) throw UsageError("condition from a different algebra");
  }

  std::shared_ptr<const Algebra> alg_;
  std::deque<TermNode<L>> nodes_;
  std::unordered_map<L, const TermNode<L>*, Hash> leaves_;
  std::unordered_map<IteKey, const TermNode<L>*, IteKeyHash> ites_;
};

/// `if α then f else ⊥`.
template <class L, class H>
Term<L> if_then(TermStore<L, H>& s, const Predicate& a, Term<L> f, const L& bottom) {
  return s.ite(a, f, s.leaf(bottom));
}

/// The leaf selected by letter a.
template <class L>
const L& leaf_of(Term<L> f, const Letter& a) {
  while (!f.is_leaf()) f = f.cond().denotes(a) ? f.then_branch() : f.else_branch();
  return f.leaf();
}

/// Applies op to every leaf, keeping the tree shape (up to the local laws of
/// TermStore::ite).
template <class LOut, class HOut, class LIn, class Op>
Term<LOut> lift_unary(TermStore<LOut, HOut>& dst, Term<LIn> f, Op&& op) {
  std::unordered_map<const void*, Term<LOut>> memo;
  std::function<Term<LOut>(Term<LIn>)> go = [&](Term<LIn> t) -> Term<LOut> {
    auto it = memo.find(t.key());
    if (it != memo.end()) return it->second;
    Term<LOut> r = t.is_leaf() ? dst.leaf(op(t.leaf())) : dst.ite(t.cond(), go(t.then_branch()), go(t.else_branch()));
    memo.emplace(t.key(), r);
    return r;
  };
  return go(f);
}

/// Pointwise combination of two terms. When both operands branch, the left
/// one is split first. The accumulated path condition is threaded through the
/// recursion and infeasible branches are dropped on the way, so the result is
/// clean. `absorb(x)` may return a result that holds for every right operand
/// (e.g. ⊥ for conjunction); the right term is then not explored.
template <class LOut, class HOut, class LA, class LB, class Op, class Absorb>
Term<LOut> lift_binary(TermStore<LOut, HOut>& dst, Term<LA> f, Term<LB> g, Op&& op, Absorb&& absorb) {
  struct Key {
    const void* f;
    const void* g;
    std::uint32_t path;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = std::hash<const void*>()(k.f);
      h ^= std::hash<const void*>()(k.g) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      return h ^ (std::size_t(k.path) * 0x100000001b3ull);
    }
  };
  std::unordered_map<Key, Term<LOut>, KeyHash> memo;
  std::function<Term<LOut>(Term<LA>, Term<LB>, const Predicate&)> go = [&](Term<LA> x, Term<LB> y,
                                                                        const Predicate& path) -> Term<LOut> {
    Key k{x.key(), y.key(), path.id()};
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    Term<LOut> r;
    auto split = [&](const Predicate& c, auto on_then, auto on_else) {
      Predicate pt = path & c;
      if (!pt.is_sat()) return on_else(path);
      Predicate pe = path & !c;
      if (!pe.is_sat()) return on_then(path);
      return dst.ite(c, on_then(pt), on_else(pe));
    };
    if (!x.is_leaf()) {
      r = split(
          x.cond(), [&](const Predicate& p) { return go(x.then_branch(), y, p); },
          [&](const Predicate& p) { return go(x.else_branch(), y, p); });
    } else if (std::optional<LOut> a = absorb(x.leaf())) {
      r = dst.leaf(*a);
    } else if (!y.is_leaf()) {
      r = split(
          y.cond(), [&](const Predicate& p) { return go(x, y.then_branch(), p); },
          [&](const Predicate& p) { return go(x, y.else_branch(), p); });
    } else {
      r = dst.leaf(op(x.leaf(), y.leaf()));
    }
    memo.emplace(k, r);
    return r;
  };
  return go(f, g, dst.algebra().top());
}

template <class LOut, class HOut, class LA, class LB, class Op>
Term<LOut> lift_binary(TermStore<LOut, HOut>& dst, Term<LA> f, Term<LB> g, Op&& op) {
  return lift_binary(dst, f, g, std::forward<Op>(op), [](const LA&) { return std::optional<LOut>(); });
}

/// f restricted to ⟦β⟧ by the three-case recursion: drop the then-branch when
/// β∧α is unsatisfiable, drop the else-branch when β∧¬α is, split otherwise.
template <class L, class H>
Term<L> restrict(TermStore<L, H>& s, Term<L> f, const Predicate& beta) {
  std::unordered_map<std::uint64_t, Term<L>> memo;
  std::function<Term<L>(Term<L>, const Predicate&)> go = [&](Term<L> t, const Predicate& b) -> Term<L> {
    if (t.is_leaf()) return t;
    std::uint64_t k = (std::uint64_t(t.id()) << 32) | b.id();
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    const Predicate& a = t.cond();
    Term<L> r;
    Predicate ba = b & a;
    if (!ba.is_sat()) {
      r = go(t.else_branch(), b);
    } else {
      Predicate bn = b & !a;
      if (!bn.is_sat())
        r = go(t.then_branch(), b);
      else
        r = s.ite(a, go(t.then_branch(), ba), go(t.else_branch(), bn));
    }
    memo.emplace(k, r);
    return r;
  };
  return go(f, beta);
}

/// Conditions and leaves of f, each in order of first occurrence.
template <class L>
std::pair<std::vector<Predicate>, std::vector<L>> collect(Term<L> f) {
  std::pair<std::vector<Predicate>, std::vector<L>> out;
  std::unordered_set<const void*> seen;
  std::unordered_set<std::uint32_t> conds;
  std::function<void(Term<L>)> go = [&](Term<L> t) {
    if (!seen.insert(t.key()).second) return;
    if (t.is_leaf()) {
      out.second.push_back(t.leaf());
      return;
    }
    if (conds.insert(t.cond().id()).second) out.first.push_back(t.cond());
    go(t.then_branch());
    go(t.else_branch());
  };
  go(f);
  return out;
}

/// Calls fn(path, leaf) for every root-to-leaf path, including paths whose
/// accumulated condition is unsatisfiable.
template <class L, class Fn>
void for_each_path(Term<L> f, const Predicate& start, Fn&& fn) {
  std::function<void(Term<L>, const Predicate&)> go = [&](Term<L> t, const Predicate& p) {
    if (t.is_leaf()) {
      fn(p, t.leaf());
      return;
    }
    go(t.then_branch(), p & t.cond());
    go(t.else_branch(), p & !t.cond());
  };
  go(f, start);
}

/// True iff every branch of f is reachable, i.e. no path condition is unsatisfiable.
template <class L>
bool is_clean(Term<L> f) {
  if (f.is_leaf()) return true;
  bool clean = true;
  std::function<void(Term<L>, const Predicate&)> go = [&](Term<L> t, const Predicate& p) {
    if (!clean || t.is_leaf()) return;
    Predicate pt = p & t.cond(), pe = p & !t.cond();
    if (!pt.is_sat() || !pe.is_sat()) {
      clean = false;
      return;
    }
    go(t.then_branch(), pt);
    go(t.else_branch(), pe);
  };
  go(f, f.cond().algebra().top());
  return clean;
}

/// Distinct leaves reachable under a satisfiable path, each with the
/// disjunction of its path conditions (first-occurrence order).
template <class L>
std::vector<std::pair<L, Predicate>> guarded_leaves(Term<L> f, const Algebra& alg) {
  std::vector<std::pair<L, Predicate>> out;
  for_each_path(f, alg.top(), [&](const Predicate& p, const L& l) {
    if (!p.is_sat()) return;
    for (auto& [leaf, guard] : out)
      if (leaf == l) {
        guard = guard | p;
        return;
      }
    out.emplace_back(l, p);
  });
  return out;
}

/// Decides f ≐ g: every satisfiable joint path reaches leaf_eq-equal leaves.
template <class L, class LeafEq>
bool func_equiv(Term<L> f, Term<L> g, const Algebra& alg, LeafEq&& leaf_eq) {
  std::function<bool(Term<L>, Term<L>, const Predicate&)> go = [&](Term<L> x, Term<L> y, const Predicate& p) {
    auto split = [&](const Predicate& c, auto on_then, auto on_else) {
      Predicate pt = p & c, pe = p & !c;
      return (!pt.is_sat() || on_then(pt)) && (!pe.is_sat() || on_else(pe));
    };
    if (!x.is_leaf())
      return split(
          x.cond(), [&](const Predicate& q) { return go(x.then_branch(), y, q); },
          [&](const Predicate& q) { return go(x.else_branch(), y, q); });
    if (!y.is_leaf())
      return split(
          y.cond(), [&](const Predicate& q) { return go(x, y.then_branch(), q); },
          [&](const Predicate& q) { return go(x, y.else_branch(), q); });
    return bool(leaf_eq(x.leaf(), y.leaf()));
  };
  return go(f, g, alg.top());
}

/// `if <pred> then <t> else <t>` with leaves as `(<leaf>)`.
template <class L, class ShowLeaf>
std::string render(Term<L> f, ShowLeaf&& show) {
  if (f.is_leaf()) return "(" + show(f.leaf()) + ")";
  std::string c = f.cond().str();
  if (c.find(' ') != std::string::npos) c = "(" + c + ")";
  return "if " + c + " then " + render(f.then_branch(), show) + " else " + render(f.else_branch(), show);
}

}  // namespace symba
