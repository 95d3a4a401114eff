#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace symba {

class Algebra;

/// Valuation of a propositional algebra: bit i is set iff atom i is true.
struct Valuation {
  std::uint32_t bits = 0;
  bool operator==(const Valuation&) const = default;
  auto operator<=>(const Valuation&) const = default;
};

/// The fresh element `#` of an anchor-extended algebra.
struct AnchorMark {
  bool operator==(const AnchorMark&) const = default;
  auto operator<=>(const AnchorMark&) const = default;
};

/// Element of an algebra's domain.
using Letter = std::variant<Valuation, std::int64_t, AnchorMark>;

/// Handle to an interned predicate. Equality is identity inside one algebra;
/// since representations are canonical, identity coincides with equivalence
/// (see Algebra::equiv for the one documented exception).
class Predicate {
 public:
  Predicate() = default;

  const Algebra& algebra() const { return *alg_; }
  const Algebra* algebra_ptr() const { return alg_; }
  std::uint32_t id() const { return id_; }
  bool valid() const { return alg_ != nullptr; }

  bool is_bottom() const { return id_ == 0; }
  bool is_top() const { return id_ == 1; }
  bool is_sat() const { return id_ != 0; }

  Predicate operator&(const Predicate& o) const;
  Predicate operator|(const Predicate& o) const;
  Predicate operator!() const;

  bool denotes(const Letter& a) const;
  std::string str() const;

  bool operator==(const Predicate& o) const = default;

 private:
  friend class Algebra;
  Predicate(const Algebra* a, std::uint32_t id) : alg_(a), id_(id) {}

  const Algebra* alg_ = nullptr;
  std::uint32_t id_ = 0;
};

/// Effective Boolean algebra. Three kinds are provided: propositional (atoms
/// up to 16, truth-table representation), integer (linear order and
/// congruences over Z) and anchor extension of either.
///
/// Predicates are interned; every operation is guarded by an internal mutex
/// so one algebra can be shared between threads.
class Algebra {
 public:
  enum class Kind { prop, integer, anchor };

  static constexpr std::size_t max_atoms = 16;

  static std::shared_ptr<Algebra> prop(std::vector<std::string> atoms);
  static std::shared_ptr<Algebra> integer();
  static std::shared_ptr<Algebra> with_anchor(std::shared_ptr<const Algebra> base);

  ~Algebra();
  Algebra(const Algebra&) = delete;
  Algebra& operator=(const Algebra&) = delete;

  Kind kind() const;
  /// Declared atoms of a propositional algebra (also of the base of an anchor algebra).
  const std::vector<std::string>& atoms() const;
  /// Base algebra of an anchor extension, nullptr otherwise.
  const Algebra* base() const;
  /// Concrete spec string: `prop:a,b`, `int`, `anchor(int)`.
  std::string spec() const;

  Predicate bottom() const { return Predicate(this, 0); }
  Predicate top() const { return Predicate(this, 1); }

  Predicate atom(std::string_view name) const;
  Predicate less_than(std::int64_t c) const;
  Predicate greater_than(std::int64_t c) const;
  Predicate congruent(std::int64_t modulus, std::int64_t residue) const;
  Predicate anchor() const;
  /// Embeds a base predicate into an anchor algebra; `#` is excluded.
  Predicate embed(const Predicate& base_pred) const;

  Predicate conj(const Predicate& a, const Predicate& b) const;
  Predicate disj(const Predicate& a, const Predicate& b) const;
  Predicate neg(const Predicate& a) const;

  bool is_sat(const Predicate& a) const;
  /// Unsatisfiability of the symmetric difference.
  bool equiv(const Predicate& a, const Predicate& b) const;
  bool denotes(const Predicate& a, const Letter& l) const;
  bool owns(const Letter& l) const;

  /// Canonical witness: prop picks the valuation with the smallest bit
  /// encoding, int the least absolute value (ties to the nonnegative one),
  /// anchor prefers base letters over `#`. Throws UsageError on ⊥.
  Letter sample(const Predicate& a) const;

  /// Satisfiable conjunctions (⋀S) ∧ ¬⋁(Γ∖S), ordered by S read as a binary
  /// number with Γ[0] as least significant bit.
  std::vector<Predicate> minterms(std::span<const Predicate> gamma) const;

  /// All letters when the domain is finite (prop, anchor over prop).
  std::vector<Letter> letters() const;

  std::string to_string(const Predicate& a) const;
  std::string letter_to_string(const Letter& l) const;

  /// Number of interned predicates (diagnostics).
  std::size_t size() const;

  struct Backend;

 private:
  struct Impl;
  explicit Algebra(std::unique_ptr<Impl> impl);
  void check_own(const Predicate& p) const;

  std::unique_ptr<Impl> impl_;
};

}  // namespace symba

template <>
struct std::hash<symba::Predicate> {
  std::size_t operator()(const symba::Predicate& p) const noexcept {
    return std::hash<const void*>()(p.algebra_ptr()) ^ (std::size_t(p.id()) * 0x9e3779b97f4a7c15ull);
  }
};
