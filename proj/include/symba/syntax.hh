#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "symba/automata.hh"
#include "symba/formula.hh"

namespace symba {

/// `prop:a,b,c` | `prop:` | `int` | `anchor(<spec>)`. Atom names must be
/// identifiers other than the formula keywords.
std::shared_ptr<Algebra> parse_algebra(std::string_view spec);

/// Prop: atoms, `true`, `false`, `!`, `&`, `|`, parentheses. Int: `[x<c]`,
/// `[x>c]`, `[x%m==r]` with the same connectives. Anchor: base syntax plus `[#]`.
Predicate parse_predicate(std::string_view src, const Algebra& a);

/// `;` concatenation, `:` fusion (only when the store allows it), `|`, `&&`,
/// postfix `*` `+`, prefix `~`, `()` for ε. Predicates as above; `&` and `!`
/// are accepted between predicates.
Regex parse_regex(std::string_view src, RegexStore& rs);

/// Lowest to highest: `U`/`R` (right-assoc), `->` (right-assoc), `|`, `&`,
/// prefix `!` `X` `F` `G` `{R} <>->` `{R} []->`, atoms `cl{R}` `ncl{R}`
/// `omega{R}` `true` `false` and predicates.
Formula parse_formula(std::string_view src, FormulaStore& fs);

/// `u ; v`, letters comma-separated: `{p q}` or `{}` for prop, integers for
/// int, `#` for the anchor. v must be nonempty.
UpWord parse_word(std::string_view src, const Algebra& a);
std::string word_to_string(const UpWord& w, const Algebra& a);

/// Reads the format written by to_text.
Aba parse_automaton(std::string_view text);

}  // namespace symba
