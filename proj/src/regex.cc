#include "symba/regex.hh"

#include <algorithm>
#include <queue>

#include "symba/error.hh"

namespace symba {

Regex::Kind Regex::kind() const { return node_->kind; }
const Predicate& Regex::pred() const { return node_->pred; }
std::size_t Regex::arity() const { return node_->kids.size(); }
Regex Regex::child(std::size_t i) const { return node_->kids.at(i); }
bool Regex::nullable() const { return node_->nullable; }
std::uint32_t Regex::id() const { return node_->id; }
RegexStore& Regex::store() const { return *node_->owner; }

std::size_t RegexStore::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = std::size_t(k.kind) * 31 + k.pred;
  for (auto c : k.kids) h = h * 0x100000001b3ull ^ c;
  return h;
}

RegexStore::RegexStore(std::shared_ptr<const Algebra> alg, Options opts)
    : alg_(std::move(alg)), opts_(opts), terms_(alg_) {}

Regex RegexStore::intern(Regex::Kind k, Predicate p, std::vector<Regex> kids, bool nullable) {
  Key key{k, p.valid() ? p.id() : 0, {}};
  for (auto& c : kids) key.kids.push_back(c.id());
  auto it = index_.find(key);
  if (it != index_.end()) return Regex(it->second);
  auto& n = nodes_.emplace_back();
  n.kind = k;
  n.pred = p;
  n.kids = std::move(kids);
  n.nullable = nullable;
  n.id = std::uint32_t(nodes_.size() - 1);
  n.owner = this;
  index_.emplace(std::move(key), &n);
  return Regex(&n);
}

Regex RegexStore::pred(const Predicate& a) {
  if (a.algebra_ptr() != alg_.get()) throw UsageError("predicate from a different algebra");
  return intern(Regex::Kind::pred, a, {}, false);
}

Regex RegexStore::eps() { return intern(Regex::Kind::eps, {}, {}, true); }

Regex RegexStore::alt(std::vector<Regex> rs) {
  std::vector<Regex> flat;
  Predicate merged = alg_->bottom();
  for (auto& r : rs) {
    if (r.kind() == Regex::Kind::alt)
      for (std::size_t i = 0; i < r.arity(); ++i) flat.push_back(r.child(i));
    else
      flat.push_back(r);
  }
  std::vector<Regex> ops;
  Regex ts = top_star();
  for (auto& r : flat) {
    if (r == ts) return ts;
    if (r.kind() == Regex::Kind::pred)
      merged = merged | r.pred();
    else
      ops.push_back(r);
  }
  if (!merged.is_bottom()) ops.push_back(pred(merged));
  std::sort(ops.begin(), ops.end(), [](Regex a, Regex b) { return a.id() < b.id(); });
  ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
  if (ops.empty()) return bottom();
  if (ops.size() == 1) return ops[0];
  bool null = std::any_of(ops.begin(), ops.end(), [](Regex r) { return r.nullable(); });
  return intern(Regex::Kind::alt, {}, std::move(ops), null);
}

Regex RegexStore::inter(std::vector<Regex> rs) {
  std::vector<Regex> flat;
  for (auto& r : rs) {
    if (r.kind() == Regex::Kind::inter)
      for (std::size_t i = 0; i < r.arity(); ++i) flat.push_back(r.child(i));
    else
      flat.push_back(r);
  }
  std::vector<Regex> ops;
  Regex ts = top_star();
  Predicate merged = alg_->top();
  bool have_pred = false;
  for (auto& r : flat) {
    if (r.is_bottom()) return r;
    if (r == ts) continue;
    if (r.kind() == Regex::Kind::pred) {
      merged = merged & r.pred();
      have_pred = true;
    } else {
      ops.push_back(r);
    }
  }
  if (have_pred) {
    if (merged.is_bottom()) return bottom();
    ops.push_back(pred(merged));
  }
  std::sort(ops.begin(), ops.end(), [](Regex a, Regex b) { return a.id() < b.id(); });
  ops.erase(std::unique(ops.begin(), ops.end()), ops.end());
  if (ops.empty()) return ts;
  if (ops.size() == 1) return ops[0];
  bool null = std::all_of(ops.begin(), ops.end(), [](Regex r) { return r.nullable(); });
  return intern(Regex::Kind::inter, {}, std::move(ops), null);
}

Regex RegexStore::concat(Regex a, Regex b) {
  if (a.is_bottom()) return a;
  if (b.is_bottom()) return b;
  if (a.is_eps()) return b;
  if (b.is_eps()) return a;
  if (a.kind() == Regex::Kind::concat) return concat(a.child(0), concat(a.child(1), b));
  return intern(Regex::Kind::concat, {}, {a, b}, a.nullable() && b.nullable());
}

Regex RegexStore::star(Regex a) {
  if (a.kind() == Regex::Kind::star) return a;
  if (a.is_eps() || a.is_bottom()) return eps();
  return intern(Regex::Kind::star, {}, {a}, true);
}

Regex RegexStore::complement(Regex a) {
  if (a.kind() == Regex::Kind::complement) return a.child(0);
  if (a.is_bottom()) return top_star();
  if (a == top_star()) return bottom();
  if (a.is_eps()) return top_plus();
  if (a == top_plus()) return eps();
  return intern(Regex::Kind::complement, {}, {a}, !a.nullable());
}

Regex RegexStore::fuse(Regex a, Regex b) {
  if (!opts_.fusion) throw UsageError("fusion is disabled for this regex store");
  if (a.is_eps() || a.is_bottom() || b.is_bottom()) return bottom();
  return intern(Regex::Kind::fusion, {}, {a, b}, false);
}

RegexTerm RegexStore::der(Regex r) {
  auto it = der_memo_.find(r.id());
  if (it != der_memo_.end()) return it->second;
  auto& ts = terms_;
  Regex bot = bottom();
  auto alt_op = [this](Regex x, Regex y) { return alt(x, y); };
  RegexTerm d;
  switch (r.kind()) {
    case Regex::Kind::pred:
      d = if_then(ts, r.pred(), ts.leaf(eps()), bot);
      break;
    case Regex::Kind::eps:
      d = ts.leaf(bot);
      break;
    case Regex::Kind::alt:
      d = der(r.child(0));
      for (std::size_t i = 1; i < r.arity(); ++i) d = lift_binary(ts, d, der(r.child(i)), alt_op);
      break;
    case Regex::Kind::inter:
      d = der(r.child(0));
      for (std::size_t i = 1; i < r.arity(); ++i)
        d = lift_binary(
            ts, d, der(r.child(i)), [this](Regex x, Regex y) { return inter(x, y); },
            [&](Regex x) { return x.is_bottom() ? std::optional<Regex>(x) : std::nullopt; });
      break;
    case Regex::Kind::concat: {
      Regex tail = r.child(1);
      d = lift_unary(ts, der(r.child(0)), [&](Regex x) { return concat(x, tail); });
      if (r.child(0).nullable()) d = lift_binary(ts, d, der(tail), alt_op);
      break;
    }
    case Regex::Kind::star:
      d = lift_unary(ts, der(r.child(0)), [&](Regex x) { return concat(x, r); });
      break;
    case Regex::Kind::complement:
      d = lift_unary(ts, der(r.child(0)), [this](Regex x) { return complement(x); });
      break;
    case Regex::Kind::fusion: {
      Regex rhs = r.child(1);
      RegexTerm head = if_then(ts, one(r.child(0)), der(rhs), bot);
      RegexTerm rest = lift_unary(ts, der(r.child(0)), [&](Regex x) { return fuse(x, rhs); });
      d = lift_binary(ts, head, rest, alt_op);
      break;
    }
  }
  der_memo_.emplace(r.id(), d);
  return d;
}

Predicate RegexStore::one_rec(RegexTerm t, const Predicate& path) {
  if (t.is_leaf()) return t.leaf().nullable() ? path : alg_->bottom();
  return one_rec(t.then_branch(), path & t.cond()) | one_rec(t.else_branch(), path & !t.cond());
}

Predicate RegexStore::one(Regex r) {
  auto it = one_memo_.find(r.id());
  if (it != one_memo_.end()) return it->second;
  Predicate p = one_rec(der(r), alg_->top());
  one_memo_.emplace(r.id(), p);
  return p;
}

bool RegexStore::matches(Regex r, std::span<const Letter> word) {
  for (const auto& a : word) {
    if (!alg_->owns(a)) throw UsageError("letter outside the algebra's domain");
    r = leaf_of(der(r), a);
    if (r.is_bottom()) return false;
  }
  return r.nullable();
}

RegexDfa RegexStore::build_dfa(Regex r) {
  RegexDfa dfa;
  std::queue<Regex> work;
  auto add = [&](Regex q) {
    if (dfa.index.count(q)) return;
    if (dfa.states.size() >= opts_.dfa_state_cap) throw StateCapError("regex DFA exceeded the state cap");
    dfa.index.emplace(q, std::uint32_t(dfa.states.size()));
    dfa.states.push_back(q);
    work.push(q);
  };
  add(r);
  while (!work.empty()) {
    Regex q = work.front();
    work.pop();
    RegexTerm d = der(q);
    dfa.delta.push_back(d);
    for (const Regex& leaf : collect(d).second)
      if (!leaf.is_bottom()) add(leaf);
  }
  std::size_t n = dfa.states.size();
  dfa.nullable.resize(n);
  dfa.alive.assign(n, false);
  std::vector<std::vector<std::uint32_t>> preds(n);
  for (std::uint32_t q = 0; q < n; ++q) {
    dfa.nullable[q] = dfa.states[q].nullable();
    for (const Regex& leaf : collect(dfa.delta[q]).second)
      if (auto t = dfa.find(leaf)) preds[*t].push_back(q);
  }
  std::vector<std::uint32_t> stack;
  for (std::uint32_t q = 0; q < n; ++q)
    if (dfa.nullable[q]) {
      dfa.alive[q] = true;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    auto q = stack.back();
    stack.pop_back();
    for (auto p : preds[q])
      if (!dfa.alive[p]) {
        dfa.alive[p] = true;
        stack.push_back(p);
      }
  }
  return dfa;
}

const RegexDfa& RegexStore::dfa(Regex r) {
  auto it = dfa_memo_.find(r.id());
  if (it != dfa_memo_.end()) return *it->second;
  auto d = std::make_unique<RegexDfa>(build_dfa(r));
  return *dfa_memo_.emplace(r.id(), std::move(d)).first->second;
}

bool RegexStore::alive(Regex r) {
  auto it = alive_memo_.find(r.id());
  if (it != alive_memo_.end()) return it->second;
  // Every state of the closure gets its verdict from the same build.
  RegexDfa d = build_dfa(r);
  for (std::size_t q = 0; q < d.size(); ++q) alive_memo_.emplace(d.states[q].id(), d.alive[q]);
  return d.alive[0];
}

// Binding strengths: | 1, && 2, ; and : 3, postfix 4, ~ 5, atoms 6.
std::string RegexStore::show(Regex r, int min_prec) const {
  std::string s;
  int prec = 6;
  switch (r.kind()) {
    case Regex::Kind::pred:
      s = r.pred().str();
      if (s.find(' ') != std::string::npos) s = "(" + s + ")";
      break;
    case Regex::Kind::eps:
      s = "()";
      break;
    case Regex::Kind::alt:
      prec = 1;
      for (std::size_t i = 0; i < r.arity(); ++i) s += (i ? " | " : "") + show(r.child(i), 2);
      break;
    case Regex::Kind::inter:
      prec = 2;
      for (std::size_t i = 0; i < r.arity(); ++i) s += (i ? " && " : "") + show(r.child(i), 3);
      break;
    case Regex::Kind::concat: {
      Regex a = r.child(0), b = r.child(1);
      if (b.kind() == Regex::Kind::star && b.child(0) == a) {
        prec = 4;
        s = show(a, 5) + "+";
      } else {
        prec = 3;
        s = show(a, 4) + " ; " + show(b, b.kind() == Regex::Kind::fusion ? 4 : 3);
      }
      break;
    }
    case Regex::Kind::star:
      prec = 4;
      s = show(r.child(0), 5) + "*";
      break;
    case Regex::Kind::complement:
      prec = 5;
      s = "~" + show(r.child(0), 5);
      break;
    case Regex::Kind::fusion:
      prec = 3;
      s = show(r.child(0), 4) + " : " + show(r.child(1), 4);
      break;
  }
  return prec < min_prec ? "(" + s + ")" : s;
}

std::string RegexStore::to_string(Regex r) const { return show(r, 0); }

}  // namespace symba
