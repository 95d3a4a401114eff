#pragma once

#include <deque>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "symba/automata.hh"
#include "symba/regex.hh"

namespace symba {

class FormulaStore;
struct FormulaNode;

/// Handle to a hash-consed RLTL formula.
class Formula {
 public:
  enum class Kind { pred, neg, conj, disj, next, until, release, exists_suffix, forall_suffix, cl, ncl, omega };

  Formula() = default;

  bool valid() const { return node_ != nullptr; }
  Kind kind() const;
  const Predicate& pred() const;
  std::size_t arity() const;
  Formula child(std::size_t i) const;
  /// Regex operand of suffix implications and closures.
  Regex regex() const;
  std::uint32_t id() const;
  FormulaStore& store() const;

  bool is_top() const { return kind() == Kind::pred && pred().is_top(); }
  bool is_bottom() const { return kind() == Kind::pred && pred().is_bottom(); }

  bool operator==(const Formula&) const = default;

 private:
  friend class FormulaStore;
  explicit Formula(const FormulaNode* n) : node_(n) {}
  const FormulaNode* node_ = nullptr;
};

}  // namespace symba

template <>
struct std::hash<symba::Formula> {
  std::size_t operator()(const symba::Formula& f) const noexcept { return std::size_t(f.id()) * 0x9e3779b97f4a7c15ull; }
};

namespace symba {

struct FormulaNode {
  Formula::Kind kind;
  Predicate pred;
  std::vector<Formula> kids;
  Regex regex;
  std::uint32_t id = 0;
  FormulaStore* owner = nullptr;
};

using FormulaTerm = Term<Formula>;

/// Hash-consing context for formulas. Constructors flatten, sort (by
/// creation id) and deduplicate ∧/∨ operands, apply the ⊤/⊥ unit and zero
/// laws, merge predicate operands into one predicate, and apply
/// ¬α = ¬_A α, ¬¬φ = φ, r◇→φ = ⊥ and r□→φ = ⊤ for r ∈ {⊥, ε},
/// cl ⊥ = ⊥, ncl ⊥ = ⊤, and cl r = ⊤, ncl r = ⊥ for nullable r.
class FormulaStore {
 public:
  struct Options {
    /// δ(φ ∧ G(φ ∧ ψ)) = δ(G(φ ∧ ψ)).
    bool subsumption = false;
  };

  FormulaStore(std::shared_ptr<RegexStore> regexes, Options opts);
  explicit FormulaStore(std::shared_ptr<RegexStore> regexes) : FormulaStore(std::move(regexes), Options{}) {}
  FormulaStore(const FormulaStore&) = delete;
  FormulaStore& operator=(const FormulaStore&) = delete;

  const Algebra& algebra() const { return regexes_->algebra(); }
  std::shared_ptr<const Algebra> algebra_ptr() const { return regexes_->algebra_ptr(); }
  RegexStore& regexes() { return *regexes_; }
  TermStore<Formula>& terms() { return terms_; }

  Formula pred(const Predicate& a);
  Formula top() { return pred(algebra().top()); }
  Formula bottom() { return pred(algebra().bottom()); }
  Formula neg(Formula f);
  Formula conj(Formula a, Formula b) { return conj(std::vector<Formula>{a, b}); }
  Formula conj(std::vector<Formula> fs);
  Formula disj(Formula a, Formula b) { return disj(std::vector<Formula>{a, b}); }
  Formula disj(std::vector<Formula> fs);
  Formula implies(Formula a, Formula b) { return disj(neg(a), b); }
  Formula next(Formula f);
  Formula until(Formula a, Formula b);
  Formula release(Formula a, Formula b);
  Formula eventually(Formula f) { return until(top(), f); }
  Formula globally(Formula f) { return release(bottom(), f); }
  Formula exists_suffix(Regex r, Formula f);
  Formula forall_suffix(Regex r, Formula f);
  Formula cl(Regex r);
  Formula ncl(Regex r);
  Formula omega(Regex r);

  /// Symbolic derivative, memoized per node.
  FormulaTerm deriv(Formula f);
  /// Negation-free equivalent. Throws PositiveFragmentError on ¬ω{R}.
  Formula to_positive(Formula f);
  bool is_positive(Formula f) const;
  /// Membership in the accepting set of M[φ] (φ positive).
  bool is_accepting(Formula f);
  /// Number of modal and suffix operators.
  std::size_t modal_size(Formula f) const;

  std::string to_string(Formula f) const;

 private:
  Formula intern(Formula::Kind k, Predicate p, std::vector<Formula> kids, Regex r);
  Formula nary(Formula::Kind k, std::vector<Formula> fs);
  Formula push_neg(Formula f);
  std::string show(Formula f, int min_prec) const;

  struct Key {
    Formula::Kind kind;
    std::uint32_t pred;
    std::uint32_t regex;
    std::vector<std::uint32_t> kids;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept;
  };

  std::shared_ptr<RegexStore> regexes_;
  Options opts_;
  std::deque<FormulaNode> nodes_;
  std::unordered_map<Key, const FormulaNode*, KeyHash> index_;
  TermStore<Formula> terms_;
  std::unordered_map<std::uint32_t, FormulaTerm> deriv_memo_;
  std::unordered_map<std::uint32_t, Formula> pos_memo_, neg_memo_;
};

/// Alternating automaton M[φ] over to_positive(φ). States are the
/// non-Boolean subformulas reachable through derivatives; ⊤ is a state when
/// it is the initial formula or a whole transition leaf.
struct BuiltAba {
  Aba aba;
  std::vector<Formula> states;
};

BuiltAba build_aba(FormulaStore& fs, Formula phi, std::size_t state_cap = 100000);

}  // namespace symba
