#include "symba/formula.hh"

#include <algorithm>
#include <deque>
#include <functional>

#include "symba/error.hh"

namespace symba {

using K = Formula::Kind;

Formula::Kind Formula::kind() const { return node_->kind; }
const Predicate& Formula::pred() const { return node_->pred; }
std::size_t Formula::arity() const { return node_->kids.size(); }
Formula Formula::child(std::size_t i) const { return node_->kids.at(i); }
Regex Formula::regex() const { return node_->regex; }
std::uint32_t Formula::id() const { return node_->id; }
FormulaStore& Formula::store() const { return *node_->owner; }

std::size_t FormulaStore::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = (std::size_t(k.kind) * 31 + k.pred) * 0x9e3779b97f4a7c15ull + k.regex;
  for (auto c : k.kids) h = h * 0x100000001b3ull ^ c;
  return h;
}

FormulaStore::FormulaStore(std::shared_ptr<RegexStore> regexes, Options opts)
    : regexes_(std::move(regexes)), opts_(opts), terms_(regexes_->algebra_ptr()) {}

Formula FormulaStore::intern(K k, Predicate p, std::vector<Formula> kids, Regex r) {
  Key key{k, p.valid() ? p.id() : 0, r.valid() ? r.id() + 1 : 0, {}};
  for (auto& c : kids) key.kids.push_back(c.id());
  auto it = index_.find(key);
  if (it != index_.end()) return Formula(it->second);
  auto& n = nodes_.emplace_back();
  n.kind = k;
  n.pred = p;
  n.kids = std::move(kids);
  n.regex = r;
  n.id = std::uint32_t(nodes_.size() - 1);
  n.owner = this;
  index_.emplace(std::move(key), &n);
  return Formula(&n);
}

Formula FormulaStore::pred(const Predicate& a) {
  if (a.algebra_ptr() != &algebra()) throw UsageError("predicate from a different algebra");
  return intern(K::pred, a, {}, {});
}

Formula FormulaStore::neg(Formula f) {
  if (f.kind() == K::pred) return pred(!f.pred());
  if (f.kind() == K::neg) return f.child(0);
  return intern(K::neg, {}, {f}, {});
}

Formula FormulaStore::nary(K k, std::vector<Formula> fs) {
  bool is_conj = k == K::conj;
  Predicate unit = is_conj ? algebra().top() : algebra().bottom();
  Predicate merged = unit;
  std::vector<Formula> flat;
  std::function<void(Formula)> add = [&](Formula f) {
    if (f.kind() == k) {
      for (std::size_t i = 0; i < f.arity(); ++i) add(f.child(i));
    } else if (f.kind() == K::pred) {
      merged = is_conj ? (merged & f.pred()) : (merged | f.pred());
    } else {
      flat.push_back(f);
    }
  };
  for (auto f : fs) add(f);
  if (merged == (is_conj ? algebra().bottom() : algebra().top())) return pred(merged);
  if (merged != unit) flat.push_back(pred(merged));
  std::sort(flat.begin(), flat.end(), [](Formula a, Formula b) { return a.id() < b.id(); });
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.empty()) return pred(unit);
  if (flat.size() == 1) return flat[0];
  return intern(k, {}, std::move(flat), {});
}

Formula FormulaStore::conj(std::vector<Formula> fs) { return nary(K::conj, std::move(fs)); }
Formula FormulaStore::disj(std::vector<Formula> fs) { return nary(K::disj, std::move(fs)); }
Formula FormulaStore::next(Formula f) { return intern(K::next, {}, {f}, {}); }
Formula FormulaStore::until(Formula a, Formula b) { return intern(K::until, {}, {a, b}, {}); }
Formula FormulaStore::release(Formula a, Formula b) { return intern(K::release, {}, {a, b}, {}); }

Formula FormulaStore::exists_suffix(Regex r, Formula f) {
  if (r.is_bottom() || r.is_eps()) return bottom();
  return intern(K::exists_suffix, {}, {f}, r);
}

Formula FormulaStore::forall_suffix(Regex r, Formula f) {
  if (r.is_bottom() || r.is_eps()) return top();
  return intern(K::forall_suffix, {}, {f}, r);
}

Formula FormulaStore::cl(Regex r) {
  if (r.is_bottom()) return bottom();
  if (r.nullable()) return top();
  return intern(K::cl, {}, {}, r);
}

Formula FormulaStore::ncl(Regex r) {
  if (r.is_bottom()) return top();
  if (r.nullable()) return bottom();
  return intern(K::ncl, {}, {}, r);
}

Formula FormulaStore::omega(Regex r) { return intern(K::omega, {}, {}, r); }

FormulaTerm FormulaStore::deriv(Formula f) {
  auto it = deriv_memo_.find(f.id());
  if (it != deriv_memo_.end()) return it->second;
  auto& ts = terms_;
  auto and_t = [&](FormulaTerm a, FormulaTerm b) {
    return lift_binary(
        ts, a, b, [this](Formula x, Formula y) { return conj(x, y); },
        [](Formula x) { return x.is_bottom() ? std::optional<Formula>(x) : std::nullopt; });
  };
  auto or_t = [&](FormulaTerm a, FormulaTerm b) {
    return lift_binary(
        ts, a, b, [this](Formula x, Formula y) { return disj(x, y); },
        [](Formula x) { return x.is_top() ? std::optional<Formula>(x) : std::nullopt; });
  };
  RegexStore& rs = *regexes_;
  FormulaTerm d;
  switch (f.kind()) {
    case K::pred:
      d = if_then(ts, f.pred(), ts.leaf(top()), bottom());
      break;
    case K::neg:
      d = lift_unary(ts, deriv(f.child(0)), [this](Formula x) { return neg(x); });
      break;
    case K::conj: {
      std::vector<Formula> ops;
      for (std::size_t i = 0; i < f.arity(); ++i) ops.push_back(f.child(i));
      if (opts_.subsumption) {
        // φ is implied by a sibling G(φ ∧ ...) and can be dropped.
        auto covered = [&](Formula x) {
          for (auto g : ops) {
            if (g.kind() != K::release || !g.child(0).is_bottom()) continue;
            Formula body = g.child(1);
            if (body == x) return true;
            if (body.kind() == K::conj)
              for (std::size_t i = 0; i < body.arity(); ++i)
                if (body.child(i) == x) return true;
          }
          return false;
        };
        std::vector<Formula> kept;
        for (auto x : ops)
          if (!covered(x)) kept.push_back(x);
        ops = kept;
      }
      d = deriv(ops[0]);
      for (std::size_t i = 1; i < ops.size(); ++i) d = and_t(d, deriv(ops[i]));
      break;
    }
    case K::disj:
      d = deriv(f.child(0));
      for (std::size_t i = 1; i < f.arity(); ++i) d = or_t(d, deriv(f.child(i)));
      break;
    case K::next:
      d = ts.leaf(f.child(0));
      break;
    case K::until:
      d = or_t(deriv(f.child(1)), and_t(deriv(f.child(0)), ts.leaf(f)));
      break;
    case K::release:
      d = and_t(deriv(f.child(1)), or_t(deriv(f.child(0)), ts.leaf(f)));
      break;
    case K::exists_suffix: {
      Regex r = f.regex();
      Formula body = f.child(0);
      auto step = lift_unary(ts, rs.der(r), [&](Regex x) { return exists_suffix(x, body); });
      d = or_t(deriv(conj(pred(rs.one(r)), body)), step);
      break;
    }
    case K::forall_suffix: {
      Regex r = f.regex();
      Formula body = f.child(0);
      auto step = lift_unary(ts, rs.der(r), [&](Regex x) { return forall_suffix(x, body); });
      d = and_t(deriv(disj(pred(!rs.one(r)), body)), step);
      break;
    }
    case K::cl:
      d = lift_unary(ts, rs.der(f.regex()), [this](Regex x) { return cl(x); });
      break;
    case K::ncl:
      d = lift_unary(ts, rs.der(f.regex()), [this](Regex x) { return ncl(x); });
      break;
    case K::omega:
      d = deriv(exists_suffix(f.regex(), next(f)));
      break;
  }
  deriv_memo_.emplace(f.id(), d);
  return d;
}

Formula FormulaStore::to_positive(Formula f) {
  auto it = pos_memo_.find(f.id());
  if (it != pos_memo_.end()) return it->second;
  Formula r = f;
  switch (f.kind()) {
    case K::pred:
    case K::cl:
    case K::ncl:
    case K::omega:
      break;
    case K::neg:
      r = push_neg(f.child(0));
      break;
    case K::conj:
    case K::disj: {
      std::vector<Formula> ops;
      for (std::size_t i = 0; i < f.arity(); ++i) ops.push_back(to_positive(f.child(i)));
      r = f.kind() == K::conj ? conj(ops) : disj(ops);
      break;
    }
    case K::next:
      r = next(to_positive(f.child(0)));
      break;
    case K::until:
      r = until(to_positive(f.child(0)), to_positive(f.child(1)));
      break;
    case K::release:
      r = release(to_positive(f.child(0)), to_positive(f.child(1)));
      break;
    case K::exists_suffix:
      r = exists_suffix(f.regex(), to_positive(f.child(0)));
      break;
    case K::forall_suffix:
      r = forall_suffix(f.regex(), to_positive(f.child(0)));
      break;
  }
  pos_memo_.emplace(f.id(), r);
  return r;
}

Formula FormulaStore::push_neg(Formula f) {
  auto it = neg_memo_.find(f.id());
  if (it != neg_memo_.end()) return it->second;
  Formula r;
  switch (f.kind()) {
    case K::pred:
      r = pred(!f.pred());
      break;
    case K::neg:
      r = to_positive(f.child(0));
      break;
    case K::conj:
    case K::disj: {
      std::vector<Formula> ops;
      for (std::size_t i = 0; i < f.arity(); ++i) ops.push_back(push_neg(f.child(i)));
      r = f.kind() == K::conj ? disj(ops) : conj(ops);
      break;
    }
    case K::next:
      r = next(push_neg(f.child(0)));
      break;
    case K::until:
      r = release(push_neg(f.child(0)), push_neg(f.child(1)));
      break;
    case K::release:
      r = until(push_neg(f.child(0)), push_neg(f.child(1)));
      break;
    case K::exists_suffix:
      r = forall_suffix(f.regex(), push_neg(f.child(0)));
      break;
    case K::forall_suffix:
      r = exists_suffix(f.regex(), push_neg(f.child(0)));
      break;
    case K::cl:
      r = ncl(f.regex());
      break;
    case K::ncl:
      r = cl(f.regex());
      break;
    case K::omega:
      throw PositiveFragmentError("negated omega-closure has no positive form");
  }
  neg_memo_.emplace(f.id(), r);
  return r;
}

bool FormulaStore::is_positive(Formula f) const {
  if (f.kind() == K::neg) return false;
  for (std::size_t i = 0; i < f.arity(); ++i)
    if (!is_positive(f.child(i))) return false;
  return true;
}

bool FormulaStore::is_accepting(Formula f) {
  switch (f.kind()) {
    case K::pred:
      return f.is_top();
    case K::release:
    case K::forall_suffix:
    case K::omega:
      return true;
    case K::cl:
      return regexes_->alive(f.regex());
    case K::ncl:
      return !regexes_->alive(f.regex());
    default:
      return false;
  }
}

std::size_t FormulaStore::modal_size(Formula f) const {
  std::size_t n = 0;
  switch (f.kind()) {
    case K::pred:
    case K::neg:
    case K::conj:
    case K::disj:
      break;
    default:
      n = 1;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) n += modal_size(f.child(i));
  return n;
}

// Binding strengths: U/R 1 (right associative), | 3, & 4, prefix 5, atoms 6.
std::string FormulaStore::show(Formula f, int min_prec) const {
  std::string s;
  int prec = 6;
  auto rx = [this](Regex r) { return regexes_->to_string(r); };
  switch (f.kind()) {
    case K::pred:
      s = f.pred().str();
      if (s.find(' ') != std::string::npos) s = "(" + s + ")";
      break;
    case K::neg:
      prec = 5;
      s = "!" + show(f.child(0), 5);
      break;
    case K::conj:
    case K::disj:
      prec = f.kind() == K::conj ? 4 : 3;
      for (std::size_t i = 0; i < f.arity(); ++i)
        s += (i ? (f.kind() == K::conj ? " & " : " | ") : "") + show(f.child(i), prec + 1);
      break;
    case K::next:
      prec = 5;
      s = "X " + show(f.child(0), 5);
      break;
    case K::until:
      if (f.child(0).is_top()) {
        prec = 5;
        s = "F " + show(f.child(1), 5);
      } else {
        prec = 1;
        s = show(f.child(0), 2) + " U " + show(f.child(1), 1);
      }
      break;
    case K::release:
      if (f.child(0).is_bottom()) {
        prec = 5;
        s = "G " + show(f.child(1), 5);
      } else {
        prec = 1;
        s = show(f.child(0), 2) + " R " + show(f.child(1), 1);
      }
      break;
    case K::exists_suffix:
      prec = 5;
      s = "{" + rx(f.regex()) + "} <>-> " + show(f.child(0), 5);
      break;
    case K::forall_suffix:
      prec = 5;
      s = "{" + rx(f.regex()) + "} []-> " + show(f.child(0), 5);
      break;
    case K::cl:
      s = "cl{" + rx(f.regex()) + "}";
      break;
    case K::ncl:
      s = "ncl{" + rx(f.regex()) + "}";
      break;
    case K::omega:
      s = "omega{" + rx(f.regex()) + "}";
      break;
  }
  return prec < min_prec ? "(" + s + ")" : s;
}

std::string FormulaStore::to_string(Formula f) const { return show(f, 0); }

BuiltAba build_aba(FormulaStore& fs, Formula phi, std::size_t state_cap) {
  Formula p = fs.to_positive(phi);
  BuiltAba out{Aba(fs.algebra_ptr()), {}};
  Aba& m = out.aba;
  std::unordered_map<Formula, StateId> index;
  std::deque<StateId> work;
  auto state_of = [&](Formula f) -> StateId {
    auto it = index.find(f);
    if (it != index.end()) return it->second;
    if (out.states.size() >= state_cap) throw StateCapError("automaton construction exceeded the state cap");
    StateId id = m.add_state(fs.to_string(f), fs.is_accepting(f));
    if (f.is_top()) m.top_state = id;
    index.emplace(f, id);
    out.states.push_back(f);
    work.push_back(id);
    return id;
  };
  std::function<StateDnf(Formula)> to_dnf = [&](Formula f) -> StateDnf {
    if (f.is_top()) return StateDnf::top();
    if (f.is_bottom()) return StateDnf::bottom();
    if (f.kind() == K::conj || f.kind() == K::disj) {
      StateDnf acc = f.kind() == K::conj ? StateDnf::top() : StateDnf::bottom();
      for (std::size_t i = 0; i < f.arity(); ++i)
        acc = f.kind() == K::conj ? (acc & to_dnf(f.child(i))) : (acc | to_dnf(f.child(i)));
      return acc;
    }
    return StateDnf::atom(state_of(f));
  };
  auto leaf_dnf = [&](Formula f) {
    if (f.is_top()) state_of(f);
    return to_dnf(f);
  };
  m.init = leaf_dnf(p);
  while (!work.empty()) {
    StateId q = work.front();
    work.pop_front();
    m.delta[q] = lift_unary(*m.terms, fs.deriv(out.states[q]), leaf_dnf);
  }
  return out;
}

}  // namespace symba
