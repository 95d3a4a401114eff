#include "symba/automata.hh"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "graph.hh"
#include "symba/error.hh"

namespace symba {

namespace {

std::optional<StateDnf> absorb_bottom(const StateDnf& d) {
  if (d.is_bottom()) return d;
  return std::nullopt;
}

std::vector<StateId> minus_accepting(const std::vector<StateId>& x, const std::vector<bool>& acc, bool keep) {
  std::vector<StateId> out;
  for (auto q : x)
    if (acc[q] == keep) out.push_back(q);
  return out;
}

std::vector<StateId> set_union(const std::vector<StateId>& a, const std::vector<StateId>& b) {
  std::vector<StateId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string join_labels(const std::vector<StateId>& xs, const std::vector<std::string>& labels) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + labels[xs[i]];
  return s + "}";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string pred_text(const Predicate& p) {
  std::string s = p.str();
  return s.find(' ') != std::string::npos ? "(" + s + ")" : s;
}

void require_nondeterministic(const Aba& n, const char* what) {
  if (!n.is_nondeterministic()) throw UsageError(std::string(what) + " needs a nondeterministic automaton");
}

struct Combined {
  Aba aba;
  std::vector<StateId> second_ids;
};

Combined combine_impl(const Aba& m, const Aba& n, BoolOp op) {
  if (m.algebra != n.algebra) throw UsageError("automata over different algebras");
  Combined c{Aba(m.algebra), {}};
  Aba& r = c.aba;
  for (std::size_t q = 0; q < m.size(); ++q) r.add_state(m.labels[q], m.accepting[q]);
  r.top_state = m.top_state;
  for (std::size_t q = 0; q < n.size(); ++q) {
    if (n.top_state && *n.top_state == q && m.top_state) {
      c.second_ids.push_back(*m.top_state);
      continue;
    }
    StateId id = r.add_state(n.labels[q], n.accepting[q]);
    c.second_ids.push_back(id);
    if (n.top_state && *n.top_state == q) r.top_state = id;
  }
  auto ident = [](const StateDnf& d) { return d; };
  auto remap = [&](const StateDnf& d) { return d.map([&](StateId q) { return c.second_ids[q]; }); };
  for (std::size_t q = 0; q < m.size(); ++q) r.delta[q] = lift_unary(*r.terms, m.delta[q], ident);
  for (std::size_t q = 0; q < n.size(); ++q)
    if (!(n.top_state && *n.top_state == q && m.top_state))
      r.delta[c.second_ids[q]] = lift_unary(*r.terms, n.delta[q], remap);
  StateDnf ni = remap(n.init);
  r.init = op == BoolOp::conj ? (m.init & ni) : (m.init | ni);
  return c;
}

}  // namespace

Aba::Aba(std::shared_ptr<const Algebra> alg) : Aba(alg, std::make_shared<StateTermStore>(alg)) {}

Aba::Aba(std::shared_ptr<const Algebra> alg, std::shared_ptr<StateTermStore> store)
    : algebra(std::move(alg)), terms(std::move(store)) {}

StateId Aba::add_state(std::string label, bool acc) {
  labels.push_back(std::move(label));
  accepting.push_back(acc);
  delta.push_back(terms->leaf(StateDnf::bottom()));
  return StateId(labels.size() - 1);
}

StateId Aba::ensure_top() {
  if (top_state) return *top_state;
  StateId t = add_state("true", true);
  delta[t] = terms->leaf(StateDnf::top());
  top_state = t;
  return t;
}

bool Aba::is_nondeterministic() const {
  for (const auto& c : init.clauses())
    if (c.size() > 1) return false;
  for (const auto& d : delta) {
    bool ok = true;
    for_each_path(d, algebra->top(), [&](const Predicate& p, const StateDnf& l) {
      if (!p.is_sat()) return;
      for (const auto& c : l.clauses())
        if (c.size() > 1) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

bool Aba::is_deterministic() const {
  if (!is_nondeterministic() || init.size() > 1) return false;
  for (const auto& d : delta) {
    bool ok = true;
    for_each_path(d, algebra->top(), [&](const Predicate& p, const StateDnf& l) {
      if (p.is_sat() && l.size() > 1) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

std::vector<Predicate> Aba::conditions() const {
  std::vector<Predicate> out;
  for (const auto& d : delta)
    for (const auto& c : collect(d).first)
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  return out;
}

Aba combine(const Aba& m, const Aba& n, BoolOp op) { return combine_impl(m, n, op).aba; }

Aba clean(const Aba& m) {
  Aba r = m;
  for (auto& d : r.delta) d = restrict(*r.terms, d, r.algebra->top());
  return r;
}

MhTerm aprod(MhTermStore& dst, StateTerm f, StateTerm g, const std::vector<bool>& accepting) {
  return lift_binary(
      dst, f, g,
      [&](const StateDnf& phi, const StateDnf& psi) {
        std::vector<MhDnf::Clause> cs;
        for (const auto& x : phi.clauses())
          for (const auto& y : psi.clauses())
            cs.push_back({MhState{minus_accepting(x, accepting, false),
                                  set_union(y, minus_accepting(x, accepting, true))}});
        return MhDnf::from_clauses(std::move(cs));
      },
      [](const StateDnf& d) { return d.is_bottom() ? std::optional<MhDnf>(MhDnf()) : std::nullopt; });
}

MhTerm fin(MhTermStore& dst, StateTerm f, const std::vector<bool>& accepting) {
  return lift_unary(dst, f, [&](const StateDnf& phi) {
    std::vector<MhDnf::Clause> cs;
    for (const auto& x : phi.clauses())
      cs.push_back({MhState{minus_accepting(x, accepting, false), minus_accepting(x, accepting, true)}});
    return MhDnf::from_clauses(std::move(cs));
  });
}

AltElimResult alt_elim(const Aba& m, AltElimOptions opts) {
  StateTermStore& src = *m.terms;
  MhTermStore mh(m.algebra);
  AltElimResult res{Aba(m.algebra), {}};
  Aba& out = res.nba;

  std::map<std::vector<StateId>, StateTerm> dinf_memo;
  auto dinf = [&](const std::vector<StateId>& x) -> StateTerm {
    auto it = dinf_memo.find(x);
    if (it != dinf_memo.end()) return it->second;
    StateTerm t = src.leaf(StateDnf::top());
    if (!x.empty()) {
      t = m.delta[x[0]];
      for (std::size_t i = 1; i < x.size(); ++i)
        t = lift_binary(
            src, t, m.delta[x[i]], [](const StateDnf& a, const StateDnf& b) { return a & b; }, absorb_bottom);
    }
    dinf_memo.emplace(x, t);
    return t;
  };

  auto shrink = [&](std::vector<StateId>& x, bool keep_nonempty) {
    StateTerm target = dinf(x);
    for (std::size_t i = 0; i < x.size();) {
      if (keep_nonempty && x.size() == 1) break;
      std::vector<StateId> y = x;
      y.erase(y.begin() + std::ptrdiff_t(i));
      if (dinf(y) == target)
        x = std::move(y);
      else
        ++i;
    }
  };

  std::unordered_map<MhState, StateId> index;
  std::deque<StateId> work;
  auto intern = [&](MhState s) -> StateId {
    if (opts.state_reduction) {
      shrink(s.V, false);
      shrink(s.U, !s.U.empty());
    }
    auto it = index.find(s);
    if (it != index.end()) return it->second;
    if (res.pairs.size() >= opts.state_cap) throw StateCapError("alternation elimination exceeded the state cap");
    StateId id = out.add_state("<" + join_labels(s.U, m.labels) + "," + join_labels(s.V, m.labels) + ">", s.U.empty());
    index.emplace(s, id);
    res.pairs.push_back(std::move(s));
    work.push_back(id);
    return id;
  };
  auto to_ids = [&](const MhDnf& d) { return d.map([&](const MhState& s) { return intern(s); }); };

  std::vector<StateDnf::Clause> init;
  for (const auto& x : m.init.clauses())
    init.push_back({intern(MhState{minus_accepting(x, m.accepting, false), minus_accepting(x, m.accepting, true)})});
  out.init = StateDnf::from_clauses(std::move(init));

  while (!work.empty()) {
    StateId id = work.front();
    work.pop_front();
    MhState s = res.pairs[id];
    MhTerm f = s.U.empty() ? fin(mh, dinf(s.V), m.accepting) : aprod(mh, dinf(s.U), dinf(s.V), m.accepting);
    out.delta[id] = lift_unary(*out.terms, f, to_ids);
  }
  return res;
}

ProductResult product(const Aba& n1, const Aba& n2) {
  require_nondeterministic(n1, "product");
  require_nondeterministic(n2, "product");
  Combined c = combine_impl(n1, n2, BoolOp::conj);
  AltElimResult r = alt_elim(c.aba, {.state_reduction = false});
  return {std::move(r.nba), std::move(r.pairs), std::move(c.second_ids)};
}

namespace {

struct Edge {
  StateId to;
  Predicate guard;
};

// Successor graph of an NBA over its states plus a virtual ⊤ sink (id n).
std::vector<std::vector<Edge>> symbolic_edges(const Aba& n) {
  StateId top = StateId(n.size());
  std::vector<std::vector<Edge>> g(n.size() + 1);
  for (std::size_t q = 0; q < n.size(); ++q)
    for (auto& [leaf, guard] : guarded_leaves(n.delta[q], *n.algebra))
      for (const auto& c : leaf.clauses()) {
        StateId to = c.empty() ? top : c[0];
        auto it = std::find_if(g[q].begin(), g[q].end(), [&](const Edge& e) { return e.to == to; });
        if (it == g[q].end())
          g[q].push_back({to, guard});
        else
          it->guard = it->guard | guard;
      }
  g[top].push_back({top, n.algebra->top()});
  return g;
}

}  // namespace

EmptinessResult is_empty(const Aba& n) {
  require_nondeterministic(n, "emptiness check");
  auto g = symbolic_edges(n);
  StateId top = StateId(n.size());
  auto accepting = [&](StateId q) { return q == top || n.accepting[q]; };
  std::vector<bool> seen1(g.size(), false), seen2(g.size(), false);
  struct Frame {
    StateId v;
    std::size_t next;
  };

  for (const auto& c : n.init.clauses()) {
    StateId root = c.empty() ? top : c[0];
    if (seen1[root]) continue;
    std::vector<Frame> outer{{root, 0}};
    seen1[root] = true;
    while (!outer.empty()) {
      auto& f = outer.back();
      if (f.next < g[f.v].size()) {
        StateId w = g[f.v][f.next++].to;
        if (!seen1[w]) {
          seen1[w] = true;
          outer.push_back({w, 0});
        }
        continue;
      }
      StateId seed = f.v;
      if (accepting(seed)) {
        std::vector<Frame> inner{{seed, 0}};
        seen2[seed] = true;
        bool found = false;
        while (!inner.empty() && !found) {
          auto& h = inner.back();
          if (h.next < g[h.v].size()) {
            StateId w = g[h.v][h.next++].to;
            if (w == seed)
              found = true;
            else if (!seen2[w]) {
              seen2[w] = true;
              inner.push_back({w, 0});
            }
            continue;
          }
          inner.pop_back();
        }
        if (found) {
          UpWord w;
          for (std::size_t i = 0; i + 1 < outer.size(); ++i)
            w.u.push_back(n.algebra->sample(g[outer[i].v][outer[i].next - 1].guard));
          for (auto& h : inner) w.v.push_back(n.algebra->sample(g[h.v][h.next - 1].guard));
          return {false, std::move(w)};
        }
      }
      outer.pop_back();
    }
  }
  return {true, std::nullopt};
}

bool member_up(const Aba& n, const UpWord& w) {
  require_nondeterministic(n, "membership");
  if (w.v.empty()) throw UsageError("the periodic part of a word must be nonempty");
  for (auto* part : {&w.u, &w.v})
    for (const auto& a : *part)
      if (!n.algebra->owns(a)) throw UsageError("letter outside the algebra's domain");
  StateId top = StateId(n.size());
  auto succ = [&](StateId q, const Letter& a, std::vector<StateId>& out) {
    if (q == top) {
      out.push_back(top);
      return;
    }
    for (const auto& c : leaf_of(n.delta[q], a).clauses()) out.push_back(c.empty() ? top : c[0]);
  };
  std::vector<bool> cur(n.size() + 1, false);
  for (const auto& c : n.init.clauses()) cur[c.empty() ? top : c[0]] = true;
  for (const auto& a : w.u) {
    std::vector<bool> next(cur.size(), false);
    std::vector<StateId> buf;
    for (StateId q = 0; q < cur.size(); ++q)
      if (cur[q]) succ(q, a, buf);
    for (auto q : buf) next[q] = true;
    cur = std::move(next);
  }
  std::size_t p = w.v.size();
  std::vector<std::uint32_t> roots;
  for (StateId q = 0; q < cur.size(); ++q)
    if (cur[q]) roots.push_back(std::uint32_t(q * p));
  auto r = detail::scc((n.size() + 1) * p, roots, [&](std::uint32_t node, std::vector<std::uint32_t>& out) {
    StateId q = StateId(node / p);
    std::size_t i = node % p;
    std::vector<StateId> buf;
    succ(q, w.v[i], buf);
    for (auto t : buf) out.push_back(std::uint32_t(t * p + (i + 1) % p));
  });
  for (std::size_t node = 0; node < r.comp.size(); ++node) {
    if (r.comp[node] < 0 || !r.cyclic[std::size_t(r.comp[node])]) continue;
    StateId q = StateId(node / p);
    if (q == top || n.accepting[q]) return true;
  }
  return false;
}

std::size_t ClassicalAba::symbol_of(const Letter& l) const {
  for (std::size_t a = 0; a < symbols.size(); ++a)
    if (symbols[a].denotes(l)) return a;
  throw UsageError("letter outside the algebra's domain");
}

ClassicalAba mintermize(const Aba& m) {
  ClassicalAba c;
  auto conds = m.conditions();
  c.symbols = m.algebra->minterms(conds);
  c.labels = m.labels;
  c.accepting = m.accepting;
  c.init = m.init;
  std::vector<Letter> reps;
  for (const auto& s : c.symbols) reps.push_back(m.algebra->sample(s));
  for (std::size_t q = 0; q < m.size(); ++q) {
    auto& row = c.delta.emplace_back();
    for (const auto& a : reps) row.push_back(leaf_of(m.delta[q], a));
  }
  return c;
}

Aba from_classical(const ClassicalAba& c, std::shared_ptr<const Algebra> alg, const std::vector<Predicate>& embed) {
  if (embed.size() != c.symbols.size()) throw UsageError("embedding size differs from the alphabet");
  for (std::size_t a = 0; a < embed.size(); ++a) {
    if (embed[a].algebra_ptr() != alg.get()) throw UsageError("embedding predicate from a different algebra");
    if (!embed[a].is_sat()) throw UsageError("embedding predicate is unsatisfiable");
    for (std::size_t b = a + 1; b < embed.size(); ++b)
      if ((embed[a] & embed[b]).is_sat()) throw UsageError("embedding predicates overlap");
  }
  Aba r(alg);
  for (std::size_t q = 0; q < c.size(); ++q) r.add_state(c.labels[q], c.accepting[q]);
  r.init = c.init;
  auto& ts = *r.terms;
  for (std::size_t q = 0; q < c.size(); ++q) {
    std::vector<std::pair<StateDnf, Predicate>> groups;
    for (std::size_t a = 0; a < embed.size(); ++a) {
      auto it = std::find_if(groups.begin(), groups.end(), [&](auto& g) { return g.first == c.delta[q][a]; });
      if (it == groups.end())
        groups.emplace_back(c.delta[q][a], embed[a]);
      else
        it->second = it->second | embed[a];
    }
    StateTerm t = ts.leaf(StateDnf::bottom());
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) t = ts.ite(it->second, ts.leaf(it->first), t);
    r.delta[q] = restrict(ts, t, alg->top());
  }
  return r;
}

std::string dnf_string(const StateDnf& d) {
  return d.str([](StateId q) { return std::to_string(q); });
}

namespace {

std::string term_text(StateTerm t) {
  if (t.is_leaf()) return "(leaf " + dnf_string(t.leaf()) + ")";
  return "(if " + pred_text(t.cond()) + " " + term_text(t.then_branch()) + " " + term_text(t.else_branch()) + ")";
}

}  // namespace

std::string to_text(const Aba& m) {
  std::ostringstream os;
  os << "algebra: " << m.algebra->spec() << "\n";
  os << "states: ";
  for (std::size_t q = 0; q < m.size(); ++q) os << (q ? "," : "") << q << "=" << quote(m.labels[q]);
  os << "\ninit: " << dnf_string(m.init) << "\naccepting: ";
  bool first = true;
  for (std::size_t q = 0; q < m.size(); ++q)
    if (m.accepting[q]) {
      os << (first ? "" : ",") << q;
      first = false;
    }
  os << "\n";
  if (m.top_state) os << "top: " << *m.top_state << "\n";
  for (std::size_t q = 0; q < m.size(); ++q) os << "delta " << q << ": " << term_text(m.delta[q]) << "\n";
  return os.str();
}

std::string to_dot(const Aba& m) {
  std::ostringstream os;
  os << "digraph aba {\n  rankdir=LR;\n  node [shape=circle];\n  init [shape=point];\n";
  for (std::size_t q = 0; q < m.size(); ++q)
    os << "  q" << q << " [label=" << quote(m.labels[q]) << (m.accepting[q] ? ", shape=doublecircle" : "") << "];\n";
  bool need_top = false;
  int junctions = 0;
  auto target = [&](StateId q) { return "q" + std::to_string(q); };
  auto emit = [&](const std::string& from, const StateDnf::Clause& c, const std::string& label) {
    if (c.empty()) {
      if (m.top_state) {
        os << "  " << from << " -> " << target(*m.top_state) << label << ";\n";
      } else {
        need_top = true;
        os << "  " << from << " -> top" << label << ";\n";
      }
    } else if (c.size() == 1) {
      os << "  " << from << " -> " << target(c[0]) << label << ";\n";
    } else {
      std::string j = "j" + std::to_string(junctions++);
      os << "  " << j << " [shape=circle, label=\"∧\", width=0.2, fixedsize=true];\n";
      os << "  " << from << " -> " << j << label << " [arrowhead=none];\n";
      for (auto x : c) os << "  " << j << " -> " << target(x) << ";\n";
    }
  };
  for (const auto& c : m.init.clauses()) emit("init", c, "");
  for (std::size_t q = 0; q < m.size(); ++q) {
    if (m.top_state && *m.top_state == q) {
      os << "  q" << q << " -> q" << q << " [label=\"true\"];\n";
      continue;
    }
    for (auto& [leaf, guard] : guarded_leaves(m.delta[q], *m.algebra))
      for (const auto& c : leaf.clauses()) emit("q" + std::to_string(q), c, " [label=" + quote(guard.str()) + "]");
  }
  if (need_top) os << "  top [label=\"true\", shape=doublecircle];\n  top -> top [label=\"true\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace symba
