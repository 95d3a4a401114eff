#include "symba/syntax.hh"

#include <cctype>
#include <charconv>
#include <set>

#include "symba/error.hh"

namespace symba {

namespace {

const std::set<std::string, std::less<>> kKeywords{"X", "F", "G", "U", "R", "true", "false", "cl", "ncl", "omega", "if", "leaf"};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

struct Tok {
  enum Kind { ident, bracket, number, punct, end } kind;
  std::string text;
  std::size_t pos;
};

std::vector<Tok> lex(std::string_view s, std::size_t base = 0) {
  static const char* multi[] = {"<>->", "[]->", "&&", "->"};
  std::vector<Tok> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    bool matched = false;
    for (const char* m : multi) {
      std::string_view mv(m);
      if (s.substr(i, mv.size()) == mv) {
        out.push_back({Tok::punct, std::string(mv), base + start});
        i += mv.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (is_ident_start(c)) {
      while (i < s.size() && is_ident_char(s[i])) ++i;
      out.push_back({Tok::ident, std::string(s.substr(start, i - start)), base + start});
    } else if (is_digit(c) || (c == '-' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      ++i;
      while (i < s.size() && is_digit(s[i])) ++i;
      out.push_back({Tok::number, std::string(s.substr(start, i - start)), base + start});
    } else if (c == '[') {
      std::size_t close = s.find(']', i);
      if (close == std::string_view::npos) throw ParseError("unterminated '['", base + start);
      std::string body;
      for (char b : s.substr(i + 1, close - i - 1))
        if (!std::isspace(static_cast<unsigned char>(b))) body += b;
      out.push_back({Tok::bracket, body, base + start});
      i = close + 1;
    } else if (std::string_view("(){}!&|;:*+~,#").find(c) != std::string_view::npos) {
      out.push_back({Tok::punct, std::string(1, c), base + start});
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", base + start);
    }
  }
  out.push_back({Tok::end, "", base + s.size()});
  return out;
}

std::int64_t to_int(const std::string& s, std::size_t pos) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("bad integer '" + s + "'", pos);
  return v;
}

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  const Tok& peek() const { return toks_[i_]; }
  bool at(std::string_view p) const { return peek().kind == Tok::punct && peek().text == p; }
  bool at_ident(std::string_view w) const { return peek().kind == Tok::ident && peek().text == w; }
  bool accept(std::string_view p) {
    if (!at(p)) return false;
    ++i_;
    return true;
  }
  void expect(std::string_view p) {
    if (!accept(p)) fail("expected '" + std::string(p) + "'");
  }
  const Tok& next() { return toks_[i_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    const Tok& t = peek();
    throw ParseError(msg + (t.kind == Tok::end ? " at end of input" : " near '" + t.text + "'"), t.pos);
  }
  void finish() {
    if (peek().kind != Tok::end) fail("unexpected trailing input");
  }

  // Predicates.
  Predicate pred_atom(const Algebra& a) {
    const Tok& t = peek();
    const Algebra& base = a.kind() == Algebra::Kind::anchor ? *a.base() : a;
    auto lift = [&](const Predicate& p) { return &base == &a ? p : a.embed(p); };
    if (t.kind == Tok::ident) {
      if (t.text == "true") return ++i_, a.top();
      if (t.text == "false") return ++i_, a.bottom();
      if (base.kind() != Algebra::Kind::prop) fail("unknown atom");
      const auto& atoms = base.atoms();
      if (std::find(atoms.begin(), atoms.end(), t.text) == atoms.end()) fail("unknown atom");
      ++i_;
      return lift(base.atom(t.text));
    }
    if (t.kind == Tok::bracket) {
      if (t.text == "#") {
        if (a.kind() != Algebra::Kind::anchor) fail("'[#]' needs an anchor algebra");
        return ++i_, a.anchor();
      }
      if (base.kind() != Algebra::Kind::integer) fail("bracketed predicate needs the int algebra");
      const std::string& b = t.text;
      try {
        if (b.size() > 2 && b[0] == 'x' && (b[1] == '<' || b[1] == '>')) {
          std::int64_t c = to_int(b.substr(2), t.pos);
          ++i_;
          return lift(b[1] == '<' ? base.less_than(c) : base.greater_than(c));
        }
        auto eq = b.find("==");
        if (b.size() > 2 && b[0] == 'x' && b[1] == '%' && eq != std::string::npos) {
          std::int64_t m = to_int(b.substr(2, eq - 2), t.pos), r = to_int(b.substr(eq + 2), t.pos);
          if (m <= 0) fail("modulus must be positive");
          ++i_;
          return lift(base.congruent(m, r));
        }
      } catch (const UsageError& e) {
        throw ParseError(e.what(), t.pos);
      }
      fail("malformed int predicate");
    }
    fail("expected a predicate");
  }

  Predicate pred_or(const Algebra& a) {
    Predicate p = pred_and(a);
    while (accept("|")) p = p | pred_and(a);
    return p;
  }
  Predicate pred_and(const Algebra& a) {
    Predicate p = pred_not(a);
    while (accept("&")) p = p & pred_not(a);
    return p;
  }
  Predicate pred_not(const Algebra& a) {
    if (accept("!")) return !pred_not(a);
    if (accept("(")) {
      Predicate p = pred_or(a);
      expect(")");
      return p;
    }
    return pred_atom(a);
  }

  // Regexes.
  Regex re_alt(RegexStore& rs) {
    std::vector<Regex> xs{re_inter(rs)};
    while (accept("|")) xs.push_back(re_inter(rs));
    return xs.size() == 1 ? xs[0] : rs.alt(std::move(xs));
  }
  Regex re_inter(RegexStore& rs) {
    Regex x = re_seq(rs);
    while (true) {
      if (accept("&&")) {
        x = rs.inter(x, re_seq(rs));
      } else if (at("&")) {
        std::size_t pos = peek().pos;
        ++i_;
        Regex y = re_seq(rs);
        if (x.kind() != Regex::Kind::pred || y.kind() != Regex::Kind::pred)
          throw ParseError("'&' joins predicates; use '&&' for intersection", pos);
        x = rs.inter(x, y);
      } else {
        return x;
      }
    }
  }
  Regex re_seq(RegexStore& rs) {
    Regex x = re_post(rs);
    if (accept(";")) return rs.concat(x, re_seq(rs));
    if (at(":")) {
      std::size_t pos = peek().pos;
      ++i_;
      Regex y = re_seq(rs);
      if (!rs.options().fusion) throw ParseError("fusion ':' is disabled (use --fusion)", pos);
      return rs.fuse(x, y);
    }
    return x;
  }
  Regex re_post(RegexStore& rs) {
    Regex x = re_prefix(rs);
    while (true) {
      if (accept("*"))
        x = rs.star(x);
      else if (accept("+"))
        x = rs.plus(x);
      else
        return x;
    }
  }
  Regex re_prefix(RegexStore& rs) {
    if (accept("~")) return rs.complement(re_prefix(rs));
    if (at("!")) {
      std::size_t pos = peek().pos;
      ++i_;
      Regex x = re_prefix(rs);
      if (x.kind() != Regex::Kind::pred) throw ParseError("'!' applies to predicates; use '~' for complement", pos);
      return rs.pred(!x.pred());
    }
    if (accept("(")) {
      if (accept(")")) return rs.eps();
      Regex x = re_alt(rs);
      expect(")");
      return x;
    }
    return rs.pred(pred_atom(rs.algebra()));
  }
  Regex braced_regex(RegexStore& rs) {
    expect("{");
    Regex r = re_alt(rs);
    expect("}");
    return r;
  }

  // Formulas.
  Formula f_temporal(FormulaStore& fs) {
    Formula a = f_impl(fs);
    if (at_ident("U")) return ++i_, fs.until(a, f_temporal(fs));
    if (at_ident("R")) return ++i_, fs.release(a, f_temporal(fs));
    return a;
  }
  Formula f_impl(FormulaStore& fs) {
    Formula a = f_or(fs);
    if (accept("->")) return fs.implies(a, f_impl(fs));
    return a;
  }
  Formula f_or(FormulaStore& fs) {
    std::vector<Formula> xs{f_and(fs)};
    while (accept("|")) xs.push_back(f_and(fs));
    return xs.size() == 1 ? xs[0] : fs.disj(std::move(xs));
  }
  Formula f_and(FormulaStore& fs) {
    std::vector<Formula> xs{f_unary(fs)};
    while (accept("&")) xs.push_back(f_unary(fs));
    return xs.size() == 1 ? xs[0] : fs.conj(std::move(xs));
  }
  Formula f_unary(FormulaStore& fs) {
    if (accept("!")) return fs.neg(f_unary(fs));
    if (at_ident("X")) return ++i_, fs.next(f_unary(fs));
    if (at_ident("F")) return ++i_, fs.eventually(f_unary(fs));
    if (at_ident("G")) return ++i_, fs.globally(f_unary(fs));
    if (at("{")) {
      Regex r = braced_regex(fs.regexes());
      if (accept("<>->")) return fs.exists_suffix(r, f_unary(fs));
      if (accept("[]->")) return fs.forall_suffix(r, f_unary(fs));
      fail("expected '<>->' or '[]->'");
    }
    return f_atom(fs);
  }
  Formula f_atom(FormulaStore& fs) {
    if (accept("(")) {
      Formula f = f_temporal(fs);
      expect(")");
      return f;
    }
    if (at_ident("cl")) return ++i_, fs.cl(braced_regex(fs.regexes()));
    if (at_ident("ncl")) return ++i_, fs.ncl(braced_regex(fs.regexes()));
    if (at_ident("omega")) return ++i_, fs.omega(braced_regex(fs.regexes()));
    if (peek().kind == Tok::ident && kKeywords.count(peek().text) && peek().text != "true" && peek().text != "false")
      fail("misplaced keyword");
    return fs.pred(pred_atom(fs.algebra()));
  }

  // Words.
  Letter letter(const Algebra& a) {
    const Algebra& base = a.kind() == Algebra::Kind::anchor ? *a.base() : a;
    if (accept("#")) {
      if (a.kind() != Algebra::Kind::anchor) fail("'#' needs an anchor algebra");
      return AnchorMark{};
    }
    if (base.kind() == Algebra::Kind::integer) {
      if (peek().kind != Tok::number) fail("expected an integer letter");
      const Tok& t = next();
      return Letter(to_int(t.text, t.pos));
    }
    expect("{");
    std::uint32_t bits = 0;
    const auto& atoms = base.atoms();
    while (peek().kind == Tok::ident) {
      auto it = std::find(atoms.begin(), atoms.end(), peek().text);
      if (it == atoms.end()) fail("unknown atom");
      bits |= std::uint32_t(1) << (it - atoms.begin());
      ++i_;
    }
    expect("}");
    return Valuation{bits};
  }
  std::vector<Letter> letters(const Algebra& a) {
    std::vector<Letter> out;
    if (at(";") || peek().kind == Tok::end) return out;
    out.push_back(letter(a));
    while (accept(",")) out.push_back(letter(a));
    return out;
  }

  // Automaton text.
  StateDnf dnf() {
    expect("{");
    std::vector<StateDnf::Clause> cs;
    if (!at("}")) do {
        expect("{");
        StateDnf::Clause c;
        if (!at("}")) do
            c.push_back(state_id());
          while (accept(","));
        expect("}");
        cs.push_back(std::move(c));
      } while (accept(","));
    expect("}");
    return StateDnf::from_clauses(std::move(cs));
  }
  StateId state_id() {
    if (peek().kind != Tok::number) fail("expected a state id");
    const Tok& t = next();
    std::int64_t v = to_int(t.text, t.pos);
    if (v < 0 || v > std::int64_t(UINT32_MAX)) throw ParseError("state id out of range", t.pos);
    return StateId(v);
  }
  StateTerm term(StateTermStore& ts, const Algebra& a) {
    expect("(");
    if (at_ident("leaf")) {
      ++i_;
      StateDnf d = dnf();
      expect(")");
      return ts.leaf(std::move(d));
    }
    if (!at_ident("if")) fail("expected 'if' or 'leaf'");
    ++i_;
    Predicate c = pred_not(a);
    StateTerm t = term(ts, a);
    StateTerm e = term(ts, a);
    expect(")");
    return ts.ite(c, t, e);
  }

 private:
  std::vector<Tok> toks_;
  std::size_t i_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::shared_ptr<Algebra> parse_algebra(std::string_view spec) {
  std::string_view s = trim(spec);
  if (s == "int") return Algebra::integer();
  if (s.starts_with("anchor(") && s.ends_with(")")) {
    auto base = parse_algebra(s.substr(7, s.size() - 8));
    if (base->kind() == Algebra::Kind::anchor) throw ParseError("nested anchor algebra", 0);
    return Algebra::with_anchor(std::move(base));
  }
  if (s.starts_with("prop:")) {
    std::vector<std::string> atoms;
    std::string_view rest = s.substr(5);
    std::size_t off = 5;
    while (!rest.empty()) {
      std::size_t comma = rest.find(',');
      std::string_view name = trim(rest.substr(0, comma));
      if (name.empty() || !is_ident_start(name[0]) || !std::all_of(name.begin(), name.end(), is_ident_char))
        throw ParseError("bad atom name '" + std::string(name) + "'", off);
      if (kKeywords.count(name)) throw ParseError("atom name '" + std::string(name) + "' is a keyword", off);
      atoms.emplace_back(name);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
      off += comma + 1;
    }
    try {
      return Algebra::prop(std::move(atoms));
    } catch (const UsageError& e) {
      throw ParseError(e.what(), 0);
    }
  }
  throw ParseError("unknown algebra '" + std::string(s) + "'", 0);
}

Predicate parse_predicate(std::string_view src, const Algebra& a) {
  Parser p(lex(src));
  Predicate r = p.pred_or(a);
  p.finish();
  return r;
}

Regex parse_regex(std::string_view src, RegexStore& rs) {
  Parser p(lex(src));
  Regex r = p.re_alt(rs);
  p.finish();
  return r;
}

Formula parse_formula(std::string_view src, FormulaStore& fs) {
  Parser p(lex(src));
  Formula f = p.f_temporal(fs);
  p.finish();
  return f;
}

UpWord parse_word(std::string_view src, const Algebra& a) {
  Parser p(lex(src));
  UpWord w;
  w.u = p.letters(a);
  p.expect(";");
  w.v = p.letters(a);
  p.finish();
  if (w.v.empty()) throw ParseError("the periodic part of a word must be nonempty", src.size());
  return w;
}

std::string word_to_string(const UpWord& w, const Algebra& a) {
  std::string s;
  for (std::size_t i = 0; i < w.u.size(); ++i) s += (i ? "," : "") + a.letter_to_string(w.u[i]);
  s += ";";
  for (std::size_t i = 0; i < w.v.size(); ++i) s += (i ? "," : "") + a.letter_to_string(w.v[i]);
  return s;
}

Aba parse_automaton(std::string_view text) {
  std::shared_ptr<Algebra> alg;
  std::optional<Aba> m;
  bool have_init = false, have_acc = false;
  std::vector<bool> seen_delta;
  std::size_t line_start = 0;
  while (line_start < text.size()) {
    std::size_t end = text.find('\n', line_start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(line_start, end - line_start);
    std::size_t base = line_start;
    line_start = end + 1;
    if (trim(line).empty()) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value'", base);
    std::string_view key = trim(line.substr(0, colon));
    std::string_view val = line.substr(colon + 1);
    std::size_t vbase = base + colon + 1;
    auto need = [&](bool ok, const char* what) {
      if (!ok) throw ParseError(what, base);
    };
    if (key == "algebra") {
      need(!alg, "duplicate algebra line");
      alg = parse_algebra(val);
    } else if (key == "states") {
      need(alg && !m, "states line must follow the algebra line once");
      m.emplace(alg);
      std::size_t i = 0;
      auto skip = [&] {
        while (i < val.size() && std::isspace(static_cast<unsigned char>(val[i]))) ++i;
      };
      skip();
      while (i < val.size()) {
        std::size_t j = i;
        while (j < val.size() && is_digit(val[j])) ++j;
        if (j == i || j >= val.size() || val[j] != '=') throw ParseError("expected '<id>='", vbase + i);
        if (to_int(std::string(val.substr(i, j - i)), vbase + i) != std::int64_t(m->size()))
          throw ParseError("state ids must be 0,1,2,... in order", vbase + i);
        i = j + 1;
        if (i >= val.size() || val[i] != '"') throw ParseError("expected a quoted label", vbase + i);
        std::string label;
        for (++i; i < val.size() && val[i] != '"'; ++i) {
          if (val[i] == '\\' && i + 1 < val.size()) ++i;
          label += val[i];
        }
        if (i >= val.size()) throw ParseError("unterminated label", vbase + i);
        ++i;
        m->add_state(std::move(label), false);
        skip();
        if (i < val.size()) {
          if (val[i] != ',') throw ParseError("expected ','", vbase + i);
          ++i;
          skip();
        }
      }
      seen_delta.assign(m->size(), false);
    } else if (key == "init") {
      need(m && !have_init, "init line must follow the states line once");
      Parser p(lex(val, vbase));
      m->init = p.dnf();
      p.finish();
      have_init = true;
    } else if (key == "accepting") {
      need(m && !have_acc, "accepting line must follow the states line once");
      Parser p(lex(val, vbase));
      if (p.peek().kind != Tok::end) do {
          StateId q = p.state_id();
          if (q >= m->size()) throw ParseError("state id out of range", vbase);
          m->accepting[q] = true;
        } while (p.accept(","));
      p.finish();
      have_acc = true;
    } else if (key == "top") {
      need(m && !m->top_state, "top line must follow the states line once");
      Parser p(lex(val, vbase));
      m->top_state = p.state_id();
      p.finish();
    } else if (key.starts_with("delta ")) {
      need(m.has_value(), "delta line before the states line");
      std::string id(trim(key.substr(6)));
      std::int64_t q = to_int(id, base);
      if (q < 0 || std::size_t(q) >= m->size() || seen_delta[std::size_t(q)])
        throw ParseError("bad or repeated delta id", base);
      Parser p(lex(val, vbase));
      m->delta[std::size_t(q)] = p.term(*m->terms, *alg);
      p.finish();
      seen_delta[std::size_t(q)] = true;
    } else {
      throw ParseError("unknown key '" + std::string(key) + "'", base);
    }
  }
  if (!m || !have_init || !have_acc) throw ParseError("incomplete automaton", text.size());
  for (std::size_t q = 0; q < m->size(); ++q) {
    if (!seen_delta[q]) throw ParseError("missing delta for state " + std::to_string(q), text.size());
    for (const auto& d : m->init.clauses())
      for (auto x : d)
        if (x >= m->size()) throw ParseError("state id out of range", text.size());
  }
  for (const auto& t : m->delta)
    for (const auto& leaf : collect(t).second)
      for (const auto& c : leaf.clauses())
        for (auto x : c)
          if (x >= m->size()) throw ParseError("state id out of range", text.size());
  if (m->top_state && *m->top_state >= m->size()) throw ParseError("top state out of range", text.size());
  return std::move(*m);
}

}  // namespace symba
