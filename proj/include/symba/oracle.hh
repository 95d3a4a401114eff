#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "symba/automata.hh"
#include "symba/formula.hh"

namespace symba {

/// Ultimately periodic word over symbol indices of a classical alphabet.
struct SymbolWord {
  std::vector<std::size_t> u;
  std::vector<std::size_t> v;
};

SymbolWord to_symbols(const ClassicalAba& c, const UpWord& w);

/// Textbook breakpoint construction on (S, O) pairs with explicit choice of
/// one DNF clause per state and symbol. The result is nondeterministic.
ClassicalAba classical_mh(const ClassicalAba& c, std::size_t state_cap = 100000);
/// No reachable cycle through an accepting state. Needs nondeterministic input.
bool classical_is_empty(const ClassicalAba& c);
/// Lasso membership for a nondeterministic classical automaton.
bool classical_member(const ClassicalAba& c, const SymbolWord& w);

/// Regex match by splitting the word at every point. |u| ≤ 8.
bool brute_match(Regex r, std::span<const Letter> u);

/// Direct semantics of formulas on ultimately periodic words. Positions
/// 0..|u|+|v|-1 stand for the whole word; the successor of the last one is
/// |u|. Regex operators run the regex DFA along the lasso.
class Evaluator {
 public:
  explicit Evaluator(FormulaStore& fs) : fs_(fs) {}
  bool eval(Formula f, const UpWord& w);
  /// Truth value at every position.
  std::vector<bool> table(Formula f, const UpWord& w);

 private:
  const std::vector<bool>& row(Formula f);
  std::size_t succ(std::size_t i) const { return i + 1 < n_ ? i + 1 : w_->u.size(); }

  FormulaStore& fs_;
  const UpWord* w_ = nullptr;
  std::size_t n_ = 0;
  std::unordered_map<std::uint32_t, std::vector<bool>> rows_;
};

bool eval(FormulaStore& fs, Formula f, const UpWord& w);

/// Second reference for the LTL fragment: recursive evaluation at absolute
/// positions with bounded look-ahead, no fixpoints. Throws UsageError on
/// regex operators.
bool eval_unrolled(Formula f, const UpWord& w);

}  // namespace symba
