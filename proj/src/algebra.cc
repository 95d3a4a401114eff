#include "symba/algebra.hh"

#include <algorithm>
#include <bit>
#include <cassert>
#include <limits>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "symba/error.hh"

namespace symba {

namespace {

constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();
// Keeps interval arithmetic far away from the sentinels.
constexpr std::int64_t kMaxConstant = std::int64_t(1) << 40;
constexpr std::int64_t kMaxModulus = std::int64_t(1) << 16;

std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Rendered predicate with the binding strength of its top connective
// (3: atom or negation, 2: conjunction, 1: disjunction).
struct Display {
  std::string text;
  int prec = 3;
};

std::string wrap(const Display& d, int min_prec) {
  return d.prec < min_prec ? "(" + d.text + ")" : d.text;
}

Display show_and(const Display& a, const Display& b) { return {wrap(a, 2) + " & " + wrap(b, 2), 2}; }
Display show_or(const Display& a, const Display& b) { return {wrap(a, 1) + " | " + wrap(b, 1), 1}; }
Display show_not(const Display& a) { return {"!" + wrap(a, 3), 3}; }

}  // namespace

struct Algebra::Backend {
  virtual ~Backend() = default;
  virtual Kind kind() const = 0;
  virtual std::uint32_t conj(std::uint32_t a, std::uint32_t b) = 0;
  virtual std::uint32_t disj(std::uint32_t a, std::uint32_t b) = 0;
  virtual std::uint32_t neg(std::uint32_t a) = 0;
  virtual bool denotes(std::uint32_t a, const Letter& l) const = 0;
  virtual bool owns(const Letter& l) const = 0;
  virtual Letter sample(std::uint32_t a) const = 0;
  virtual std::string to_string(std::uint32_t a) const = 0;
  virtual std::string letter_to_string(const Letter& l) const = 0;
  virtual std::size_t size() const = 0;
};

namespace {

// ---------------------------------------------------------------------------
// Propositional algebra: truth tables over at most 16 atoms.

using Table = std::vector<std::uint64_t>;

struct TableHash {
  std::size_t operator()(const Table& t) const noexcept {
    std::size_t h = t.size();
    for (auto w : t) h = hash_combine(h, std::hash<std::uint64_t>()(w));
    return h;
  }
};

class PropBackend final : public Algebra::Backend {
 public:
  explicit PropBackend(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
    std::size_t nval = std::size_t(1) << atoms_.size();
    words_ = std::max<std::size_t>(1, nval / 64);
    last_mask_ = nval >= 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << nval) - 1);
    intern(Table(words_, 0), {"false", 3});
    Table full(words_, ~std::uint64_t(0));
    full.back() &= last_mask_;
    intern(full, {"true", 3});
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      Table t(words_, 0);
      for (std::size_t v = 0; v < nval; ++v)
        if ((v >> i) & 1) t[v / 64] |= std::uint64_t(1) << (v % 64);
      atom_ids_.push_back(intern(t, {atoms_[i], 3}));
    }
  }

  Algebra::Kind kind() const override { return Algebra::Kind::prop; }
  const std::vector<std::string>& atoms() const { return atoms_; }
  std::uint32_t atom(std::size_t i) const { return atom_ids_[i]; }

  std::uint32_t conj(std::uint32_t a, std::uint32_t b) override {
    Table t = tables_[a];
    for (std::size_t i = 0; i < words_; ++i) t[i] &= tables_[b][i];
    return intern(std::move(t), show_and(display_[a], display_[b]));
  }
  std::uint32_t disj(std::uint32_t a, std::uint32_t b) override {
    Table t = tables_[a];
    for (std::size_t i = 0; i < words_; ++i) t[i] |= tables_[b][i];
    return intern(std::move(t), show_or(display_[a], display_[b]));
  }
  std::uint32_t neg(std::uint32_t a) override {
    Table t = tables_[a];
    for (auto& w : t) w = ~w;
    t.back() &= last_mask_;
    return intern(std::move(t), show_not(display_[a]));
  }

  bool denotes(std::uint32_t a, const Letter& l) const override {
    auto v = std::get<Valuation>(l).bits;
    return (tables_[a][v / 64] >> (v % 64)) & 1;
  }
  bool owns(const Letter& l) const override {
    auto* v = std::get_if<Valuation>(&l);
    return v && (std::uint64_t(v->bits) >> atoms_.size()) == 0;
  }
  Letter sample(std::uint32_t a) const override {
    const Table& t = tables_[a];
    for (std::size_t i = 0; i < words_; ++i)
      if (t[i]) return Valuation{std::uint32_t(i * 64 + std::size_t(std::countr_zero(t[i])))};
    throw UsageError("sample of an unsatisfiable predicate");
  }
  std::string to_string(std::uint32_t a) const override { return display_[a].text; }
  std::string letter_to_string(const Letter& l) const override {
    auto v = std::get<Valuation>(l).bits;
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (!((v >> i) & 1)) continue;
      if (!first) out += ' ';
      out += atoms_[i];
      first = false;
    }
    return out + "}";
  }
  std::size_t size() const override { return tables_.size(); }

 private:
  std::uint32_t intern(Table t, Display d) {
    auto [it, fresh] = index_.try_emplace(std::move(t), std::uint32_t(tables_.size()));
    if (fresh) {
      tables_.push_back(it->first);
      display_.push_back(std::move(d));
    }
    return it->second;
  }

  std::vector<std::string> atoms_;
  std::vector<std::uint32_t> atom_ids_;
  std::size_t words_ = 1;
  std::uint64_t last_mask_ = 0;
  std::vector<Table> tables_;
  std::vector<Display> display_;
  std::unordered_map<Table, std::uint32_t, TableHash> index_;
};

// ---------------------------------------------------------------------------
// Integer algebra. A predicate is a modulus M and, for every residue r < M,
// the set {x ≡ r (mod M)} ∩ (union of intervals). Intervals are tightened so
// both finite endpoints lie in the residue class, and merged whenever the gap
// between them holds no element of the class. M is reduced to the least
// common multiple of the periods of the two infinite tails, which makes the
// form canonical.

struct Interval {
  std::int64_t lo, hi;
  bool operator==(const Interval&) const = default;
};

using Runs = std::vector<Interval>;

struct IntRepr {
  std::int64_t mod = 1;
  std::vector<Runs> cls;
  bool operator==(const IntRepr&) const = default;
};

struct IntReprHash {
  std::size_t operator()(const IntRepr& r) const noexcept {
    std::size_t h = std::hash<std::int64_t>()(r.mod);
    for (const auto& c : r.cls) {
      h = hash_combine(h, c.size());
      for (const auto& iv : c) {
        h = hash_combine(h, std::hash<std::int64_t>()(iv.lo));
        h = hash_combine(h, std::hash<std::int64_t>()(iv.hi));
      }
    }
    return h;
  }
};

bool tighten(Interval& iv, std::int64_t r, std::int64_t m) {
  if (iv.lo != kNegInf) iv.lo += floor_mod(r - iv.lo, m);
  if (iv.hi != kPosInf) iv.hi -= floor_mod(iv.hi - r, m);
  return iv.lo == kNegInf || iv.hi == kPosInf || iv.lo <= iv.hi;
}

Runs normalize_runs(Runs in, std::int64_t r, std::int64_t m) {
  Runs kept;
  for (auto iv : in)
    if (tighten(iv, r, m)) kept.push_back(iv);
  std::sort(kept.begin(), kept.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  Runs out;
  for (const auto& iv : kept) {
    if (!out.empty()) {
      auto& last = out.back();
      if (last.hi == kPosInf || iv.lo <= last.hi + m) {
        if (last.hi != kPosInf && (iv.hi == kPosInf || iv.hi > last.hi)) last.hi = iv.hi;
        continue;
      }
    }
    out.push_back(iv);
  }
  return out;
}

Runs intersect_runs(const Runs& a, const Runs& b) {
  Runs out;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    std::int64_t lo = std::max(a[i].lo, b[j].lo);
    std::int64_t hi = std::min(a[i].hi, b[j].hi);
    if (lo <= hi) out.push_back({lo, hi});
    if (a[i].hi < b[j].hi)
      ++i;
    else
      ++j;
  }
  return out;
}

Runs complement_runs(const Runs& a, std::int64_t m) {
  Runs out;
  std::int64_t from = kNegInf;
  bool open = true;
  for (const auto& iv : a) {
    if (iv.lo != kNegInf) {
      std::int64_t to = iv.lo - m;
      if (from == kNegInf || from <= to) out.push_back({from, to});
    }
    if (iv.hi == kPosInf) {
      open = false;
      break;
    }
    from = iv.hi + m;
  }
  if (open) out.push_back({from, kPosInf});
  return out;
}

bool runs_contain(const Runs& runs, std::int64_t x) {
  for (const auto& iv : runs)
    if (iv.lo <= x && x <= iv.hi) return true;
  return false;
}

IntRepr refine(const IntRepr& p, std::int64_t m) {
  IntRepr out{m, std::vector<Runs>(std::size_t(m))};
  for (std::int64_t r = 0; r < m; ++r) out.cls[std::size_t(r)] = normalize_runs(p.cls[std::size_t(r % p.mod)], r, m);
  return out;
}

std::int64_t least_period(const std::vector<bool>& mask) {
  std::int64_t m = std::int64_t(mask.size());
  for (std::int64_t d = 1; d < m; ++d) {
    if (m % d) continue;
    bool ok = true;
    for (std::int64_t i = 0; ok && i < m; ++i) ok = mask[std::size_t(i)] == mask[std::size_t((i + d) % m)];
    if (ok) return d;
  }
  return m;
}

// Rewrites p over the smaller modulus m (which must divide p.mod and be a
// multiple of both tail periods). Returns false when a mixed finite segment
// is too long to enumerate; p is then left as is.
bool reduce_modulus(IntRepr& p, std::int64_t m) {
  constexpr std::int64_t kEnumCap = std::int64_t(1) << 16;
  IntRepr out{m, std::vector<Runs>(std::size_t(m))};
  std::int64_t fan = p.mod / m;
  for (std::int64_t c = 0; c < m; ++c) {
    std::vector<std::int64_t> cuts;
    for (std::int64_t j = 0; j < fan; ++j)
      for (const auto& iv : p.cls[std::size_t(c + j * m)]) {
        if (iv.lo != kNegInf) cuts.push_back(iv.lo);
        if (iv.hi != kPosInf) cuts.push_back(iv.hi + 1);
      }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Runs runs;
    auto left_in = [&](std::int64_t j) {
      const auto& rs = p.cls[std::size_t(c + j * m)];
      return !rs.empty() && rs.front().lo == kNegInf;
    };
    // Segment (-inf, first cut): the tails agree by choice of m.
    if (left_in(0)) runs.push_back({kNegInf, cuts.empty() ? kPosInf : cuts.front() - 1});
    for (std::size_t s = 0; s < cuts.size(); ++s) {
      std::int64_t lo = cuts[s];
      std::int64_t hi = s + 1 < cuts.size() ? cuts[s + 1] - 1 : kPosInf;
      std::int64_t members = 0;
      for (std::int64_t j = 0; j < fan; ++j) members += runs_contain(p.cls[std::size_t(c + j * m)], lo);
      if (members == fan) {
        runs.push_back({lo, hi});
      } else if (members > 0) {
        if (hi == kPosInf || (hi - lo) / m > kEnumCap) return false;
        for (std::int64_t x = lo + floor_mod(c - lo, m); x <= hi; x += m)
          if (runs_contain(p.cls[std::size_t(floor_mod(x, p.mod))], x)) runs.push_back({x, x});
      }
    }
    out.cls[std::size_t(c)] = normalize_runs(std::move(runs), c, m);
  }
  p = std::move(out);
  return true;
}

void canonicalize(IntRepr& p) {
  std::size_t m = std::size_t(p.mod);
  std::vector<bool> left(m), right(m);
  for (std::size_t r = 0; r < m; ++r) {
    left[r] = !p.cls[r].empty() && p.cls[r].front().lo == kNegInf;
    right[r] = !p.cls[r].empty() && p.cls[r].back().hi == kPosInf;
  }
  std::int64_t target = std::lcm(least_period(left), least_period(right));
  if (target < p.mod) reduce_modulus(p, target);
}

class IntBackend final : public Algebra::Backend {
 public:
  IntBackend() {
    intern({1, {Runs{}}});
    intern({1, {Runs{{kNegInf, kPosInf}}}});
  }

  Algebra::Kind kind() const override { return Algebra::Kind::integer; }

  std::uint32_t make(IntRepr p) {
    for (std::int64_t r = 0; r < p.mod; ++r)
      p.cls[std::size_t(r)] = normalize_runs(std::move(p.cls[std::size_t(r)]), r, p.mod);
    canonicalize(p);
    return intern(std::move(p));
  }

  std::uint32_t conj(std::uint32_t a, std::uint32_t b) override {
    return combine(a, b, [](const Runs& x, const Runs& y, std::int64_t, std::int64_t) { return intersect_runs(x, y); });
  }
  std::uint32_t disj(std::uint32_t a, std::uint32_t b) override {
    return combine(a, b, [](const Runs& x, const Runs& y, std::int64_t r, std::int64_t m) {
      Runs u = x;
      u.insert(u.end(), y.begin(), y.end());
      return normalize_runs(std::move(u), r, m);
    });
  }
  std::uint32_t neg(std::uint32_t a) override {
    IntRepr p = reprs_[a];
    for (auto& c : p.cls) c = complement_runs(c, p.mod);
    return make(std::move(p));
  }

  bool denotes(std::uint32_t a, const Letter& l) const override {
    std::int64_t x = std::get<std::int64_t>(l);
    const IntRepr& p = reprs_[a];
    return runs_contain(p.cls[std::size_t(floor_mod(x, p.mod))], x);
  }
  bool owns(const Letter& l) const override { return std::holds_alternative<std::int64_t>(l); }

  Letter sample(std::uint32_t a) const override {
    const IntRepr& p = reprs_[a];
    bool found = false;
    std::int64_t best = 0;
    auto offer = [&](std::int64_t x) {
      auto key = [](std::int64_t v) { return std::pair(v < 0 ? -v : v, v < 0); };
      if (!found || key(x) < key(best)) best = x;
      found = true;
    };
    for (std::int64_t r = 0; r < p.mod; ++r)
      for (const auto& iv : p.cls[std::size_t(r)]) {
        if (iv.lo != kNegInf && iv.lo > 0) {
          offer(iv.lo);
        } else if (iv.hi != kPosInf && iv.hi < 0) {
          offer(iv.hi);
        } else {
          std::int64_t up = floor_mod(r, p.mod);
          std::int64_t down = up - p.mod;
          if (up <= iv.hi) offer(up);
          if (down >= iv.lo) offer(down);
        }
      }
    if (!found) throw UsageError("sample of an unsatisfiable predicate");
    return best;
  }

  std::string to_string(std::uint32_t a) const override {
    if (a == 0) return "false";
    if (a == 1) return "true";
    const IntRepr& p = reprs_[a];
    Display whole;
    bool any = false;
    for (std::int64_t r = 0; r < p.mod; ++r) {
      const Runs& runs = p.cls[std::size_t(r)];
      if (runs.empty()) continue;
      Display cls_d;
      bool cls_any = false;
      for (const auto& iv : runs) {
        Display d;
        bool have = false;
        if (iv.lo != kNegInf) {
          d = {"[x>" + std::to_string(iv.lo - 1) + "]", 3};
          have = true;
        }
        if (iv.hi != kPosInf) {
          Display up{"[x<" + std::to_string(iv.hi + 1) + "]", 3};
          d = have ? show_and(d, up) : up;
          have = true;
        }
        if (!have) d = {"true", 3};
        cls_d = cls_any ? show_or(cls_d, d) : d;
        cls_any = true;
      }
      if (p.mod > 1) {
        Display res{"[x%" + std::to_string(p.mod) + "==" + std::to_string(r) + "]", 3};
        cls_d = cls_d.text == "true" ? res : show_and(res, cls_d);
      }
      whole = any ? show_or(whole, cls_d) : cls_d;
      any = true;
    }
    return whole.text;
  }

  std::string letter_to_string(const Letter& l) const override { return std::to_string(std::get<std::int64_t>(l)); }
  std::size_t size() const override { return reprs_.size(); }

 private:
  template <class Op>
  std::uint32_t combine(std::uint32_t a, std::uint32_t b, Op op) {
    const IntRepr& x = reprs_[a];
    const IntRepr& y = reprs_[b];
    std::int64_t m = std::lcm(x.mod, y.mod);
    if (m > kMaxModulus) throw UsageError("combined modulus too large");
    IntRepr rx = refine(x, m), ry = refine(y, m);
    IntRepr out{m, std::vector<Runs>(std::size_t(m))};
    for (std::int64_t r = 0; r < m; ++r) out.cls[std::size_t(r)] = op(rx.cls[std::size_t(r)], ry.cls[std::size_t(r)], r, m);
    return make(std::move(out));
  }

  std::uint32_t intern(IntRepr p) {
    auto [it, fresh] = index_.try_emplace(p, std::uint32_t(reprs_.size()));
    if (fresh) reprs_.push_back(std::move(p));
    return it->second;
  }

  std::vector<IntRepr> reprs_;
  std::unordered_map<IntRepr, std::uint32_t, IntReprHash> index_;
};

// ---------------------------------------------------------------------------
// Anchor extension: (base predicate, contains-#) pairs.

class AnchorBackend final : public Algebra::Backend {
 public:
  explicit AnchorBackend(std::shared_ptr<const Algebra> base) : base_(std::move(base)) {
    intern(base_->bottom(), false);
    intern(base_->top(), true);
  }

  Algebra::Kind kind() const override { return Algebra::Kind::anchor; }
  const Algebra& base() const { return *base_; }

  std::uint32_t intern(const Predicate& b, bool hash) {
    std::uint64_t key = (std::uint64_t(b.id()) << 1) | std::uint64_t(hash);
    auto [it, fresh] = index_.try_emplace(key, std::uint32_t(pairs_.size()));
    if (fresh) pairs_.push_back({b, hash});
    return it->second;
  }

  std::uint32_t conj(std::uint32_t a, std::uint32_t b) override {
    return intern(pairs_[a].first & pairs_[b].first, pairs_[a].second && pairs_[b].second);
  }
  std::uint32_t disj(std::uint32_t a, std::uint32_t b) override {
    return intern(pairs_[a].first | pairs_[b].first, pairs_[a].second || pairs_[b].second);
  }
  std::uint32_t neg(std::uint32_t a) override { return intern(!pairs_[a].first, !pairs_[a].second); }

  bool denotes(std::uint32_t a, const Letter& l) const override {
    if (std::holds_alternative<AnchorMark>(l)) return pairs_[a].second;
    return pairs_[a].first.denotes(l);
  }
  bool owns(const Letter& l) const override { return std::holds_alternative<AnchorMark>(l) || base_->owns(l); }
  Letter sample(std::uint32_t a) const override {
    if (pairs_[a].first.is_sat()) return base_->sample(pairs_[a].first);
    if (pairs_[a].second) return AnchorMark{};
    throw UsageError("sample of an unsatisfiable predicate");
  }
  std::string to_string(std::uint32_t a) const override {
    const auto& [b, hash] = pairs_[a];
    if (b.is_bottom()) return hash ? "[#]" : "false";
    if (b.is_top()) return hash ? "true" : "![#]";
    std::string s = b.str();
    // Negation in this algebra admits #, so negated base text needs a guard.
    if (!hash) return s.find('!') == std::string::npos ? s : "(" + s + ") & ![#]";
    return "(" + s + ") | [#]";
  }
  std::string letter_to_string(const Letter& l) const override {
    return std::holds_alternative<AnchorMark>(l) ? "#" : base_->letter_to_string(l);
  }
  std::size_t size() const override { return pairs_.size(); }

 private:
  std::shared_ptr<const Algebra> base_;
  std::vector<std::pair<Predicate, bool>> pairs_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
};

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (std::uint64_t(a) << 32) | b;
}

}  // namespace

struct Algebra::Impl {
  std::unique_ptr<Backend> backend;
  std::vector<std::string> atoms;
  std::shared_ptr<const Algebra> base;
  mutable std::mutex mu;
  std::unordered_map<std::uint64_t, std::uint32_t> conj_memo, disj_memo;
  std::unordered_map<std::uint32_t, std::uint32_t> neg_memo;
};

Algebra::Algebra(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Algebra::~Algebra() = default;

std::shared_ptr<Algebra> Algebra::prop(std::vector<std::string> atoms) {
  if (atoms.size() > max_atoms) throw UsageError("prop algebra supports at most 16 atoms");
  auto sorted = atoms;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw UsageError("duplicate atom");
  auto impl = std::make_unique<Impl>();
  impl->atoms = atoms;
  impl->backend = std::make_unique<PropBackend>(std::move(atoms));
  return std::shared_ptr<Algebra>(new Algebra(std::move(impl)));
}

std::shared_ptr<Algebra> Algebra::integer() {
  auto impl = std::make_unique<Impl>();
  impl->backend = std::make_unique<IntBackend>();
  return std::shared_ptr<Algebra>(new Algebra(std::move(impl)));
}

std::shared_ptr<Algebra> Algebra::with_anchor(std::shared_ptr<const Algebra> base) {
  if (!base) throw UsageError("null base algebra");
  if (base->kind() == Kind::anchor) throw UsageError("algebra is already anchor-extended");
  auto impl = std::make_unique<Impl>();
  impl->atoms = base->atoms();
  impl->base = base;
  impl->backend = std::make_unique<AnchorBackend>(std::move(base));
  return std::shared_ptr<Algebra>(new Algebra(std::move(impl)));
}

Algebra::Kind Algebra::kind() const { return impl_->backend->kind(); }
const std::vector<std::string>& Algebra::atoms() const { return impl_->atoms; }
const Algebra* Algebra::base() const { return impl_->base.get(); }

std::string Algebra::spec() const {
  switch (kind()) {
    case Kind::prop: {
      std::string s = "prop:";
      for (std::size_t i = 0; i < impl_->atoms.size(); ++i) s += (i ? "," : "") + impl_->atoms[i];
      return s;
    }
    case Kind::integer:
      return "int";
    case Kind::anchor:
      return "anchor(" + impl_->base->spec() + ")";
  }
  return {};
}

void Algebra::check_own(const Predicate& p) const {
  if (p.algebra_ptr() != this) throw UsageError("predicate from a different algebra");
}

Predicate Algebra::atom(std::string_view name) const {
  if (kind() != Kind::prop) throw UsageError("atom() needs a prop algebra");
  auto& atoms = impl_->atoms;
  auto it = std::find(atoms.begin(), atoms.end(), name);
  if (it == atoms.end()) throw UsageError("unknown atom '" + std::string(name) + "'");
  std::lock_guard lock(impl_->mu);
  auto& be = static_cast<PropBackend&>(*impl_->backend);
  return Predicate(this, be.atom(std::size_t(it - atoms.begin())));
}

Predicate Algebra::less_than(std::int64_t c) const {
  if (kind() != Kind::integer) throw UsageError("less_than() needs the int algebra");
  if (c > kMaxConstant || c < -kMaxConstant) throw UsageError("integer constant out of range");
  std::lock_guard lock(impl_->mu);
  auto& be = static_cast<IntBackend&>(*impl_->backend);
  return Predicate(this, be.make({1, {Runs{{kNegInf, c - 1}}}}));
}

Predicate Algebra::greater_than(std::int64_t c) const {
  if (kind() != Kind::integer) throw UsageError("greater_than() needs the int algebra");
  if (c > kMaxConstant || c < -kMaxConstant) throw UsageError("integer constant out of range");
  std::lock_guard lock(impl_->mu);
  auto& be = static_cast<IntBackend&>(*impl_->backend);
  return Predicate(this, be.make({1, {Runs{{c + 1, kPosInf}}}}));
}

Predicate Algebra::congruent(std::int64_t modulus, std::int64_t residue) const {
  if (kind() != Kind::integer) throw UsageError("congruent() needs the int algebra");
  if (modulus < 1 || modulus > kMaxModulus) throw UsageError("modulus out of range");
  residue = floor_mod(residue, modulus);
  IntRepr p{modulus, std::vector<Runs>(std::size_t(modulus))};
  p.cls[std::size_t(residue)] = {{kNegInf, kPosInf}};
  std::lock_guard lock(impl_->mu);
  auto& be = static_cast<IntBackend&>(*impl_->backend);
  return Predicate(this, be.make(std::move(p)));
}

Predicate Algebra::anchor() const {
  if (kind() != Kind::anchor) throw UsageError("[#] needs an anchor algebra");
  std::lock_guard lock(impl_->mu);
  auto& be = static_cast<AnchorBackend&>(*impl_->backend);
  return Predicate(this, be.intern(be.base().bottom(), true));
}

Predicate Algebra::embed(const Predicate& base_pred) const {
  if (kind() != Kind::anchor) throw UsageError("embed() needs an anchor algebra");
  if (base_pred.algebra_ptr() != impl_->base.get()) throw UsageError("predicate is not from the base algebra");
  std::lock_guard lock(impl_->mu);
  auto& be = static_cast<AnchorBackend&>(*impl_->backend);
  return Predicate(this, be.intern(base_pred, false));
}

Predicate Algebra::conj(const Predicate& a, const Predicate& b) const {
  check_own(a);
  check_own(b);
  if (a.is_bottom() || b.is_top() || a == b) return a;
  if (b.is_bottom() || a.is_top()) return b;
  std::lock_guard lock(impl_->mu);
  auto key = pair_key(a.id(), b.id());
  auto it = impl_->conj_memo.find(key);
  if (it != impl_->conj_memo.end()) return Predicate(this, it->second);
  auto id = impl_->backend->conj(a.id(), b.id());
  impl_->conj_memo.emplace(key, id);
  return Predicate(this, id);
}

Predicate Algebra::disj(const Predicate& a, const Predicate& b) const {
  check_own(a);
  check_own(b);
  if (a.is_top() || b.is_bottom() || a == b) return a;
  if (b.is_top() || a.is_bottom()) return b;
  std::lock_guard lock(impl_->mu);
  auto key = pair_key(a.id(), b.id());
  auto it = impl_->disj_memo.find(key);
  if (it != impl_->disj_memo.end()) return Predicate(this, it->second);
  auto id = impl_->backend->disj(a.id(), b.id());
  impl_->disj_memo.emplace(key, id);
  return Predicate(this, id);
}

Predicate Algebra::neg(const Predicate& a) const {
  check_own(a);
  if (a.is_top()) return bottom();
  if (a.is_bottom()) return top();
  std::lock_guard lock(impl_->mu);
  auto it = impl_->neg_memo.find(a.id());
  if (it != impl_->neg_memo.end()) return Predicate(this, it->second);
  auto id = impl_->backend->neg(a.id());
  impl_->neg_memo.emplace(a.id(), id);
  impl_->neg_memo.emplace(id, a.id());
  return Predicate(this, id);
}

bool Algebra::is_sat(const Predicate& a) const {
  check_own(a);
  return !a.is_bottom();
}

bool Algebra::equiv(const Predicate& a, const Predicate& b) const {
  return !is_sat(disj(conj(a, neg(b)), conj(neg(a), b)));
}

bool Algebra::denotes(const Predicate& a, const Letter& l) const {
  check_own(a);
  if (!owns(l)) throw UsageError("letter outside the algebra's domain");
  std::lock_guard lock(impl_->mu);
  return impl_->backend->denotes(a.id(), l);
}

bool Algebra::owns(const Letter& l) const { return impl_->backend->owns(l); }

Letter Algebra::sample(const Predicate& a) const {
  check_own(a);
  std::lock_guard lock(impl_->mu);
  return impl_->backend->sample(a.id());
}

std::vector<Predicate> Algebra::minterms(std::span<const Predicate> gamma) const {
  // Refine {⊤} one predicate at a time, remembering which predicates each
  // cell satisfies; the final sort realises the binary-counter order.
  struct Cell {
    Predicate p;
    std::vector<bool> in;
  };
  std::vector<Cell> cells{{top(), {}}};
  for (const auto& g : gamma) {
    check_own(g);
    std::vector<Cell> next;
    for (auto& c : cells) {
      Predicate with = conj(c.p, g), without = conj(c.p, neg(g));
      if (with.is_sat()) {
        next.push_back({with, c.in});
        next.back().in.push_back(true);
      }
      if (without.is_sat()) {
        next.push_back({without, std::move(c.in)});
        next.back().in.push_back(false);
      }
    }
    cells = std::move(next);
  }
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    for (std::size_t i = a.in.size(); i-- > 0;)
      if (a.in[i] != b.in[i]) return b.in[i];
    return false;
  });
  std::vector<Predicate> out;
  out.reserve(cells.size());
  for (auto& c : cells) out.push_back(c.p);
  return out;
}

std::vector<Letter> Algebra::letters() const {
  const Algebra* prop = kind() == Kind::anchor ? base() : this;
  if (prop->kind() != Kind::prop) throw UsageError("letters() needs a finite domain");
  std::vector<Letter> out;
  std::uint32_t n = std::uint32_t(1) << prop->atoms().size();
  for (std::uint32_t v = 0; v < n; ++v) out.push_back(Valuation{v});
  if (kind() == Kind::anchor) out.push_back(AnchorMark{});
  return out;
}

std::string Algebra::to_string(const Predicate& a) const {
  check_own(a);
  std::lock_guard lock(impl_->mu);
  return impl_->backend->to_string(a.id());
}

std::string Algebra::letter_to_string(const Letter& l) const {
  if (!owns(l)) throw UsageError("letter outside the algebra's domain");
  return impl_->backend->letter_to_string(l);
}

std::size_t Algebra::size() const {
  std::lock_guard lock(impl_->mu);
  return impl_->backend->size();
}

Predicate Predicate::operator&(const Predicate& o) const { return alg_->conj(*this, o); }
Predicate Predicate::operator|(const Predicate& o) const { return alg_->disj(*this, o); }
Predicate Predicate::operator!() const { return alg_->neg(*this); }
bool Predicate::denotes(const Letter& a) const { return alg_->denotes(*this, a); }
std::string Predicate::str() const { return alg_->to_string(*this); }

}  // namespace symba
