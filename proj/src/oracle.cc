#include "symba/oracle.hh"

#include <deque>
#include <functional>
#include <map>
#include <set>

#include "graph.hh"
#include "symba/error.hh"

namespace symba {

SymbolWord to_symbols(const ClassicalAba& c, const UpWord& w) {
  SymbolWord s;
  for (const auto& a : w.u) s.u.push_back(c.symbol_of(a));
  for (const auto& a : w.v) s.v.push_back(c.symbol_of(a));
  return s;
}

ClassicalAba classical_mh(const ClassicalAba& c, std::size_t state_cap) {
  if (c.size() > 64) throw UsageError("classical construction limited to 64 states");
  using Mask = std::uint64_t;
  Mask fin = 0;
  for (std::size_t q = 0; q < c.size(); ++q)
    if (c.accepting[q]) fin |= Mask(1) << q;
  auto mask_of = [](const StateDnf::Clause& x) {
    Mask m = 0;
    for (auto q : x) m |= Mask(1) << q;
    return m;
  };
  auto show = [&](Mask m) {
    std::string s = "{";
    bool first = true;
    for (std::size_t q = 0; q < c.size(); ++q)
      if (m >> q & 1) {
        s += (first ? "" : ",") + c.labels[q];
        first = false;
      }
    return s + "}";
  };

  ClassicalAba out;
  out.symbols = c.symbols;
  std::map<std::pair<Mask, Mask>, StateId> index;
  std::vector<std::pair<Mask, Mask>> pairs;
  std::deque<StateId> work;
  auto intern = [&](Mask s, Mask o) {
    auto key = std::make_pair(s, o);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (pairs.size() >= state_cap) throw StateCapError("classical construction exceeded the state cap");
    StateId id = StateId(pairs.size());
    index.emplace(key, id);
    pairs.push_back(key);
    out.labels.push_back("(" + show(s) + "," + show(o) + ")");
    out.accepting.push_back(o == 0);
    out.delta.emplace_back();
    work.push_back(id);
    return id;
  };

  std::vector<StateDnf::Clause> init;
  for (const auto& x : c.init.clauses()) {
    Mask s = mask_of(x);
    init.push_back({intern(s, s & ~fin)});
  }
  out.init = StateDnf::from_clauses(std::move(init));

  while (!work.empty()) {
    StateId id = work.front();
    work.pop_front();
    auto [s, o] = pairs[id];
    std::vector<std::size_t> members;
    for (std::size_t q = 0; q < c.size(); ++q)
      if (s >> q & 1) members.push_back(q);
    std::vector<StateDnf> row;
    for (std::size_t a = 0; a < c.symbols.size(); ++a) {
      std::set<std::pair<Mask, Mask>> succ;
      // One clause per member of S; the clauses picked for O form the new O.
      std::function<void(std::size_t, Mask, Mask)> choose = [&](std::size_t k, Mask s2, Mask o2) {
        if (k == members.size()) {
          succ.emplace(s2, o == 0 ? (s2 & ~fin) : (o2 & ~fin));
          return;
        }
        std::size_t q = members[k];
        for (const auto& x : c.delta[q][a].clauses()) {
          Mask m = mask_of(x);
          choose(k + 1, s2 | m, (o >> q & 1) ? (o2 | m) : o2);
        }
      };
      choose(0, 0, 0);
      std::vector<StateDnf::Clause> cs;
      for (auto [s2, o2] : succ) cs.push_back({intern(s2, o2)});
      row.push_back(StateDnf::from_clauses(std::move(cs)));
    }
    out.delta[id] = std::move(row);
  }
  return out;
}

namespace {

void require_nondeterministic(const ClassicalAba& c) {
  for (const auto& x : c.init.clauses())
    if (x.size() > 1) throw UsageError("classical automaton is alternating");
  for (const auto& row : c.delta)
    for (const auto& d : row)
      for (const auto& x : d.clauses())
        if (x.size() > 1) throw UsageError("classical automaton is alternating");
}

}  // namespace

bool classical_is_empty(const ClassicalAba& c) {
  require_nondeterministic(c);
  std::uint32_t top = std::uint32_t(c.size());
  std::vector<std::uint32_t> roots;
  for (const auto& x : c.init.clauses()) roots.push_back(x.empty() ? top : x[0]);
  auto r = detail::scc(c.size() + 1, roots, [&](std::uint32_t q, std::vector<std::uint32_t>& out) {
    if (q == top) {
      out.push_back(top);
      return;
    }
    for (const auto& d : c.delta[q])
      for (const auto& x : d.clauses()) out.push_back(x.empty() ? top : x[0]);
  });
  for (std::uint32_t q = 0; q <= top; ++q)
    if (r.comp[q] >= 0 && r.cyclic[std::size_t(r.comp[q])] && (q == top || c.accepting[q])) return false;
  return true;
}

bool classical_member(const ClassicalAba& c, const SymbolWord& w) {
  require_nondeterministic(c);
  if (w.v.empty()) throw UsageError("the periodic part of a word must be nonempty");
  std::uint32_t top = std::uint32_t(c.size());
  auto step = [&](std::uint32_t q, std::size_t a, std::vector<std::uint32_t>& out) {
    if (q == top) {
      out.push_back(top);
      return;
    }
    for (const auto& x : c.delta[q][a].clauses()) out.push_back(x.empty() ? top : x[0]);
  };
  std::set<std::uint32_t> cur;
  for (const auto& x : c.init.clauses()) cur.insert(x.empty() ? top : x[0]);
  for (auto a : w.u) {
    std::vector<std::uint32_t> buf;
    for (auto q : cur) step(q, a, buf);
    cur = std::set<std::uint32_t>(buf.begin(), buf.end());
  }
  std::uint32_t p = std::uint32_t(w.v.size());
  std::vector<std::uint32_t> roots;
  for (auto q : cur) roots.push_back(q * p);
  auto r = detail::scc((c.size() + 1) * p, roots, [&](std::uint32_t node, std::vector<std::uint32_t>& out) {
    std::uint32_t q = node / p, i = node % p;
    std::vector<std::uint32_t> buf;
    step(q, w.v[i], buf);
    for (auto t : buf) out.push_back(t * p + (i + 1) % p);
  });
  for (std::uint32_t node = 0; node < r.comp.size(); ++node) {
    if (r.comp[node] < 0 || !r.cyclic[std::size_t(r.comp[node])]) continue;
    std::uint32_t q = node / p;
    if (q == top || c.accepting[q]) return true;
  }
  return false;
}

bool brute_match(Regex r, std::span<const Letter> u) {
  if (u.size() > 8) throw UsageError("brute-force matching is limited to words of length 8");
  std::map<std::tuple<std::uint32_t, std::size_t, std::size_t>, bool> memo;
  std::function<bool(Regex, std::size_t, std::size_t)> m = [&](Regex x, std::size_t i, std::size_t j) -> bool {
    auto key = std::make_tuple(x.id(), i, j);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool res = false;
    switch (x.kind()) {
      case Regex::Kind::pred:
        res = j == i + 1 && x.pred().denotes(u[i]);
        break;
      case Regex::Kind::eps:
        res = i == j;
        break;
      case Regex::Kind::alt:
        for (std::size_t k = 0; k < x.arity() && !res; ++k) res = m(x.child(k), i, j);
        break;
      case Regex::Kind::inter:
        res = true;
        for (std::size_t k = 0; k < x.arity() && res; ++k) res = m(x.child(k), i, j);
        break;
      case Regex::Kind::concat:
        for (std::size_t k = i; k <= j && !res; ++k) res = m(x.child(0), i, k) && m(x.child(1), k, j);
        break;
      case Regex::Kind::star:
        res = i == j;
        for (std::size_t k = i + 1; k <= j && !res; ++k) res = m(x.child(0), i, k) && m(x, k, j);
        break;
      case Regex::Kind::complement:
        res = !m(x.child(0), i, j);
        break;
      case Regex::Kind::fusion:
        // x·a ∈ L(R) and a·y ∈ L(S) share the letter a.
        for (std::size_t k = i + 1; k <= j && !res; ++k) res = m(x.child(0), i, k) && m(x.child(1), k - 1, j);
        break;
    }
    memo.emplace(key, res);
    return res;
  };
  return m(r, 0, u.size());
}

std::vector<bool> Evaluator::table(Formula f, const UpWord& w) {
  if (w.v.empty()) throw UsageError("the periodic part of a word must be nonempty");
  for (auto* part : {&w.u, &w.v})
    for (const auto& a : *part)
      if (!fs_.algebra().owns(a)) throw UsageError("letter outside the algebra's domain");
  rows_.clear();
  w_ = &w;
  n_ = w.u.size() + w.v.size();
  auto r = row(f);
  w_ = nullptr;
  return r;
}

bool Evaluator::eval(Formula f, const UpWord& w) { return table(f, w)[0]; }

const std::vector<bool>& Evaluator::row(Formula f) {
  auto it = rows_.find(f.id());
  if (it != rows_.end()) return it->second;
  using K = Formula::Kind;
  const std::size_t n = n_;
  std::vector<bool> out(n, false);
  RegexStore& rs = fs_.regexes();

  // Runs the DFA of r from position i. `visit(k, q)` sees the state q reached
  // after reading positions i..k (k as an index into the lasso) and returns
  // false to stop. Returns true when the run falls into the dead sink. A
  // (position, state) configuration fixes the rest of the run, so the scan
  // stops at the first repeat: at most n·|Q| steps.
  auto scan = [&](Regex r, std::size_t i, auto&& visit) {
    const RegexDfa& d = rs.dfa(r);
    std::set<std::pair<std::size_t, std::uint32_t>> seen;
    std::optional<std::uint32_t> q = 0;
    std::size_t k = i;
    while (true) {
      q = d.step(*q, w_->at(k));
      if (!q) return true;
      if (!visit(k, *q, d)) return false;
      std::size_t nk = succ(k);
      if (!seen.emplace(nk, *q).second) return false;
      k = nk;
    }
  };

  switch (f.kind()) {
    case K::pred:
      for (std::size_t i = 0; i < n; ++i) out[i] = f.pred().denotes(w_->at(i));
      break;
    case K::neg: {
      const auto& a = row(f.child(0));
      for (std::size_t i = 0; i < n; ++i) out[i] = !a[i];
      break;
    }
    case K::conj:
    case K::disj: {
      bool is_conj = f.kind() == K::conj;
      out.assign(n, is_conj);
      for (std::size_t c = 0; c < f.arity(); ++c) {
        const auto& a = row(f.child(c));
        for (std::size_t i = 0; i < n; ++i) out[i] = is_conj ? (out[i] && a[i]) : (out[i] || a[i]);
      }
      break;
    }
    case K::next: {
      const auto& a = row(f.child(0));
      for (std::size_t i = 0; i < n; ++i) out[i] = a[succ(i)];
      break;
    }
    case K::until:
    case K::release: {
      bool is_until = f.kind() == K::until;
      std::vector<bool> a = row(f.child(0)), b = row(f.child(1));
      // Least fixpoint of x = b ∨ (a ∧ X x) for U, greatest of x = b ∧ (a ∨ X x) for R.
      out.assign(n, !is_until);
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t k = n; k-- > 0;) {
          bool v = is_until ? (b[k] || (a[k] && out[succ(k)])) : (b[k] && (a[k] || out[succ(k)]));
          if (v != out[k]) {
            out[k] = v;
            changed = true;
          }
        }
      }
      break;
    }
    case K::exists_suffix:
    case K::forall_suffix: {
      bool exists = f.kind() == K::exists_suffix;
      std::vector<bool> body = row(f.child(0));
      for (std::size_t i = 0; i < n; ++i) {
        bool res = !exists;
        scan(f.regex(), i, [&](std::size_t k, std::uint32_t q, const RegexDfa& d) {
          if (d.nullable[q] && body[k] == exists) {
            res = exists;
            return false;
          }
          return true;
        });
        out[i] = res;
      }
      break;
    }
    case K::cl:
    case K::ncl: {
      // Some prefix lies in L(R), or the run never leaves the alive states.
      const RegexDfa& d = rs.dfa(f.regex());
      for (std::size_t i = 0; i < n; ++i) {
        bool res = d.nullable[0];
        if (!res && d.alive[0]) {
          res = true;
          bool sink = scan(f.regex(), i, [&](std::size_t, std::uint32_t q, const RegexDfa&) {
            if (d.nullable[q]) return false;
            if (!d.alive[q]) res = false;
            return res;
          });
          if (sink) res = false;
        }
        out[i] = f.kind() == K::cl ? res : !res;
      }
      break;
    }
    case K::omega: {
      // Factor graph over positions: p → q when a nonempty factor starting
      // at p and ending just before q lies in L(R). ω{R} holds at i iff some
      // cycle is reachable from i.
      std::vector<std::vector<std::uint32_t>> edges(n);
      for (std::size_t p = 0; p < n; ++p) {
        std::set<std::uint32_t> targets;
        scan(f.regex(), p, [&](std::size_t k, std::uint32_t q, const RegexDfa& d) {
          if (d.nullable[q]) targets.insert(std::uint32_t(succ(k)));
          return true;
        });
        edges[p].assign(targets.begin(), targets.end());
      }
      for (std::size_t i = 0; i < n; ++i) {
        auto r = detail::scc(n, {std::uint32_t(i)},
                             [&](std::uint32_t v, std::vector<std::uint32_t>& o) { o = edges[v]; });
        for (std::size_t v = 0; v < n; ++v)
          if (r.comp[v] >= 0 && r.cyclic[std::size_t(r.comp[v])]) out[i] = true;
      }
      break;
    }
  }
  return rows_.emplace(f.id(), std::move(out)).first->second;
}

bool eval(FormulaStore& fs, Formula f, const UpWord& w) { return Evaluator(fs).eval(f, w); }

bool eval_unrolled(Formula f, const UpWord& w) {
  if (w.v.empty()) throw UsageError("the periodic part of a word must be nonempty");
  const std::size_t nu = w.u.size(), nv = w.v.size();
  std::map<std::pair<std::uint32_t, std::size_t>, bool> memo;
  // Every row is periodic with period |v| from |u| on, so the first witness
  // of an Until at k lies before max(k, |u|) + |v|.
  std::function<bool(Formula, std::size_t)> at = [&](Formula g, std::size_t k) -> bool {
    auto key = std::make_pair(g.id(), k);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    using K = Formula::Kind;
    bool res = false;
    switch (g.kind()) {
      case K::pred:
        res = g.pred().denotes(w.at(k));
        break;
      case K::neg:
        res = !at(g.child(0), k);
        break;
      case K::conj:
        res = true;
        for (std::size_t c = 0; c < g.arity() && res; ++c) res = at(g.child(c), k);
        break;
      case K::disj:
        for (std::size_t c = 0; c < g.arity() && !res; ++c) res = at(g.child(c), k);
        break;
      case K::next:
        res = at(g.child(0), k + 1);
        break;
      case K::until:
      case K::release: {
        bool is_until = g.kind() == K::until;
        std::size_t end = std::max(k, nu) + nv;
        bool found = false;
        for (std::size_t j = k; j < end; ++j) {
          bool b = at(g.child(1), j);
          if (is_until ? b : !b) {
            found = true;
            break;
          }
          bool a = at(g.child(0), j);
          if (is_until ? !a : a) break;
        }
        res = is_until ? found : !found;
        break;
      }
      default:
        throw UsageError("unrolled evaluation covers the LTL fragment only");
    }
    memo.emplace(key, res);
    return res;
  };
  return at(f, 0);
}

}  // namespace symba
