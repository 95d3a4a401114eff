#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "symba/algebra.hh"
#include "symba/tterm.hh"

namespace symba {

class RegexStore;
struct RegexNode;

/// Handle to a hash-consed extended regular expression.
class Regex {
 public:
  enum class Kind { pred, eps, alt, inter, concat, star, complement, fusion };

  Regex() = default;

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  /// Predicate of a `pred` node.
  const Predicate& pred() const;
  std::size_t arity() const;
  Regex child(std::size_t i) const;
  bool nullable() const;
  std::uint32_t id() const;
  RegexStore& store() const;

  bool is_bottom() const { return kind() == Kind::pred && pred().is_bottom(); }
  bool is_eps() const { return kind() == Kind::eps; }

  bool operator==(const Regex&) const = default;

 private:
  friend class RegexStore;
  explicit Regex(const RegexNode* n) : node_(n) {}
  const RegexNode* node_ = nullptr;
};

}  // namespace symba

template <>
struct std::hash<symba::Regex> {
  std::size_t operator()(const symba::Regex& r) const noexcept { return std::size_t(r.id()) * 0x9e3779b97f4a7c15ull; }
};

namespace symba {

struct RegexNode {
  Regex::Kind kind;
  Predicate pred;
  std::vector<Regex> kids;
  bool nullable = false;
  std::uint32_t id = 0;
  RegexStore* owner = nullptr;
};

using RegexTerm = Term<Regex>;

/// Derivative automaton of a regex. State 0 is the initial regex. The ⊥
/// regex is not a state unless it is the initial one; a ⊥ leaf in a
/// transition term means "no successor".
struct RegexDfa {
  std::vector<Regex> states;
  std::vector<RegexTerm> delta;
  std::vector<bool> nullable;
  std::vector<bool> alive;
  std::unordered_map<Regex, std::uint32_t> index;

  std::size_t size() const { return states.size(); }
  std::optional<std::uint32_t> find(Regex r) const {
    auto it = index.find(r);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
  /// Successor on letter a, nullopt for the implicit dead sink.
  std::optional<std::uint32_t> step(std::uint32_t q, const Letter& a) const { return find(leaf_of(delta[q], a)); }
};

/// Hash-consing context for regexes over one algebra. Smart constructors
/// keep union and intersection as flattened, sorted, duplicate-free operand
/// sets (sorted by creation id), concatenation right-nested with ε as unit
/// and ⊥ as zero, and apply: ~~R=R, ~⊥=⊤*, ~⊤*=⊥, ~ε=⊤⁺, ~⊤⁺=ε, R**=R*,
/// ε*=⊥*=ε, ⊥ dropped from unions, ⊤* dropped from intersections, a ⊤*
/// operand absorbs a union, predicates inside one union (intersection) are
/// merged into one predicate, ε fuse S=⊥.
class RegexStore {
 public:
  struct Options {
    bool fusion = false;
    std::size_t dfa_state_cap = 20000;
  };

  explicit RegexStore(std::shared_ptr<const Algebra> alg, Options opts);
  explicit RegexStore(std::shared_ptr<const Algebra> alg) : RegexStore(std::move(alg), Options{}) {}
  RegexStore(const RegexStore&) = delete;
  RegexStore& operator=(const RegexStore&) = delete;

  const Algebra& algebra() const { return *alg_; }
  std::shared_ptr<const Algebra> algebra_ptr() const { return alg_; }
  const Options& options() const { return opts_; }
  TermStore<Regex>& terms() { return terms_; }
  std::size_t size() const { return nodes_.size(); }

  Regex pred(const Predicate& a);
  Regex bottom() { return pred(alg_->bottom()); }
  Regex eps();
  Regex any() { return pred(alg_->top()); }
  Regex top_star() { return star(any()); }
  Regex alt(Regex a, Regex b) { return alt(std::vector<Regex>{a, b}); }
  Regex alt(std::vector<Regex> rs);
  Regex inter(Regex a, Regex b) { return inter(std::vector<Regex>{a, b}); }
  Regex inter(std::vector<Regex> rs);
  Regex concat(Regex a, Regex b);
  Regex star(Regex a);
  Regex plus(Regex a) { return concat(a, star(a)); }
  Regex complement(Regex a);
  Regex fuse(Regex a, Regex b);

  /// Transition regex: der(R) with leaf_of(der(R), a) the derivative of R by a.
  RegexTerm der(Regex r);
  /// Predicate for the length-one words of L(R).
  Predicate one(Regex r);
  bool matches(Regex r, std::span<const Letter> word);

  /// Fixpoint of der from r. Throws StateCapError past options().dfa_state_cap.
  RegexDfa build_dfa(Regex r);
  /// Cached build_dfa.
  const RegexDfa& dfa(Regex r);
  /// Some nullable regex is reachable from r.
  bool alive(Regex r);

  std::string to_string(Regex r) const;

 private:
  Regex intern(Regex::Kind k, Predicate p, std::vector<Regex> kids, bool nullable);
  Regex top_plus() { return concat(any(), top_star()); }
  Predicate one_rec(RegexTerm t, const Predicate& path);
  std::string show(Regex r, int min_prec) const;

  struct Key {
    Regex::Kind kind;
    std::uint32_t pred;
    std::vector<std::uint32_t> kids;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  std::shared_ptr<const Algebra> alg_;
  Options opts_;
  std::deque<RegexNode> nodes_;
  std::unordered_map<Key, const RegexNode*, KeyHash> index_;
  TermStore<Regex> terms_;
  std::unordered_map<std::uint32_t, RegexTerm> der_memo_;
  std::unordered_map<std::uint32_t, Predicate> one_memo_;
  std::unordered_map<std::uint32_t, std::unique_ptr<RegexDfa>> dfa_memo_;
  std::unordered_map<std::uint32_t, bool> alive_memo_;
};

}  // namespace symba
