#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symba/algebra.hh"
#include "symba/dnf.hh"
#include "symba/tterm.hh"

namespace symba {

using StateId = std::uint32_t;
using StateDnf = Dnf<StateId>;
using StateTerm = Term<StateDnf>;
using StateTermStore = TermStore<StateDnf>;

/// Ultimately periodic word u·v^ω.
struct UpWord {
  std::vector<Letter> u;
  std::vector<Letter> v;

  /// Letter at position i of the infinite word.
  const Letter& at(std::size_t i) const { return i < u.size() ? u[i] : v[(i - u.size()) % v.size()]; }
  bool operator==(const UpWord&) const = default;
};

/// Alternating Büchi automaton modulo an algebra. Transition leaves are
/// positive Boolean combinations of states in DNF; the leaf {∅} is ⊤ and
/// {} is ⊥. `top_state`, when set, names the state standing for ⊤ (its
/// transition is the leaf {∅} and it is accepting); other states refer to
/// ⊤ through {∅} leaves, never through the state id.
struct Aba {
  std::shared_ptr<const Algebra> algebra;
  std::shared_ptr<StateTermStore> terms;
  std::vector<std::string> labels;
  std::vector<bool> accepting;
  std::vector<StateTerm> delta;
  StateDnf init;
  std::optional<StateId> top_state;

  explicit Aba(std::shared_ptr<const Algebra> alg);
  Aba(std::shared_ptr<const Algebra> alg, std::shared_ptr<StateTermStore> store);

  std::size_t size() const { return labels.size(); }
  StateId add_state(std::string label, bool acc);
  /// Adds the ⊤ state if absent.
  StateId ensure_top();

  /// No conjunction in the initial condition or in any satisfiable leaf.
  bool is_nondeterministic() const;
  /// Nondeterministic with at most one initial state and one successor per leaf.
  bool is_deterministic() const;
  /// All conditions occurring in transition terms.
  std::vector<Predicate> conditions() const;
};

/// ⟨U,V⟩: U owes a visit to an accepting state, V has paid.
struct MhState {
  std::vector<StateId> U;
  std::vector<StateId> V;
  bool operator==(const MhState&) const = default;
  auto operator<=>(const MhState&) const = default;
};

}  // namespace symba

template <>
struct std::hash<symba::MhState> {
  std::size_t operator()(const symba::MhState& s) const noexcept {
    std::size_t h = 0x84222325ull;
    for (auto x : s.U) h = (h ^ x) * 0x100000001b3ull;
    h = (h ^ 0xff) * 0x100000001b3ull;
    for (auto x : s.V) h = (h ^ x) * 0x100000001b3ull;
    return h;
  }
};

namespace symba {

using MhDnf = Dnf<MhState>;
using MhTerm = Term<MhDnf>;
using MhTermStore = TermStore<MhDnf>;

enum class BoolOp { conj, disj };

/// Disjoint union of the two automata with initial condition Q0_M op Q0_N.
/// N's states are renumbered after M's; the ⊤ states are merged.
Aba combine(const Aba& m, const Aba& n, BoolOp op);
/// Every transition term restricted to ⊤.
Aba clean(const Aba& m);

/// Leafwise {⟨X∖F, Y∪(X∩F)⟩ | X∈φ̄, Y∈ψ̄}.
MhTerm aprod(MhTermStore& dst, StateTerm f, StateTerm g, const std::vector<bool>& accepting);
/// Leafwise {⟨X∖F, X∩F⟩ | X∈φ̄}.
MhTerm fin(MhTermStore& dst, StateTerm f, const std::vector<bool>& accepting);

struct AltElimOptions {
  bool state_reduction = true;
  std::size_t state_cap = 200000;
};

struct AltElimResult {
  Aba nba;
  /// Pair of each output state.
  std::vector<MhState> pairs;
};

/// Symbolic Miyano–Hayashi construction. Worklist is FIFO in discovery
/// order. With state reduction, each new pair is shrunk greedily (elements
/// of V first, then of U while U stays nonempty) as long as the δINF images
/// stay identical terms.
AltElimResult alt_elim(const Aba& m, AltElimOptions opts = {});

struct ProductResult {
  Aba nba;
  std::vector<MhState> pairs;
  /// Ids of the second operand's states inside the combined automaton.
  std::vector<StateId> second_ids;
};

/// alt_elim(combine(n1, n2, conj)) without state reduction. Throws
/// UsageError unless both inputs are nondeterministic.
ProductResult product(const Aba& n1, const Aba& n2);

struct EmptinessResult {
  bool empty = true;
  std::optional<UpWord> witness;
};

/// Nested depth-first search over the cleaned transition graph. Throws
/// UsageError on alternating input.
EmptinessResult is_empty(const Aba& n);

/// u·v^ω ∈ L(n) for a nondeterministic n.
bool member_up(const Aba& n, const UpWord& w);

/// Classical automaton over the minterm alphabet of an Aba.
struct ClassicalAba {
  std::vector<Predicate> symbols;
  std::vector<std::string> labels;
  std::vector<bool> accepting;
  StateDnf init;
  /// delta[q][a]
  std::vector<std::vector<StateDnf>> delta;

  std::size_t size() const { return labels.size(); }
  /// Index of the symbol whose predicate holds for l.
  std::size_t symbol_of(const Letter& l) const;
};

ClassicalAba mintermize(const Aba& m);
/// δ(q) = ⋁_a if â then δ̂(q,a), symbols with equal targets condensed.
/// Throws UsageError when the embedding is not pairwise disjoint and satisfiable.
Aba from_classical(const ClassicalAba& c, std::shared_ptr<const Algebra> alg, const std::vector<Predicate>& embed);

/// Line-based text format (see README).
std::string to_text(const Aba& m);
/// Graphviz rendering with ∧-junction nodes for conjunctive leaves.
std::string to_dot(const Aba& m);
std::string dnf_string(const StateDnf& d);

}  // namespace symba
