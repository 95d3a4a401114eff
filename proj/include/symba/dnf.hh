#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

namespace symba {

/// Positive Boolean combination in set-of-sets form: a disjunction of
/// conjunctions. `{}` is ⊥ and `{{}}` is ⊤. Clauses are sorted and
/// duplicate-free, and so is the clause list, so `==` is set equality.
template <class S>
class Dnf {
 public:
  using Clause = std::vector<S>;

  Dnf() = default;

  static Dnf bottom() { return {}; }
  static Dnf top() {
    Dnf d;
    d.clauses_.emplace_back();
    return d;
  }
  static Dnf atom(S s) {
    Dnf d;
    d.clauses_.push_back({std::move(s)});
    return d;
  }
  static Dnf from_clauses(std::vector<Clause> cs) {
    for (auto& c : cs) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    Dnf d;
    d.clauses_ = std::move(cs);
    return d;
  }

  bool is_bottom() const { return clauses_.empty(); }
  bool is_top() const { return clauses_.size() == 1 && clauses_[0].empty(); }
  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }

  friend Dnf operator|(const Dnf& a, const Dnf& b) {
    Dnf d;
    std::set_union(a.clauses_.begin(), a.clauses_.end(), b.clauses_.begin(), b.clauses_.end(),
                   std::back_inserter(d.clauses_));
    return d;
  }

  friend Dnf operator&(const Dnf& a, const Dnf& b) {
    if (a.is_top()) return b;
    if (b.is_top()) return a;
    std::vector<Clause> out;
    out.reserve(a.clauses_.size() * b.clauses_.size());
    for (const auto& x : a.clauses_)
      for (const auto& y : b.clauses_) {
        Clause c;
        std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(c));
        out.push_back(std::move(c));
      }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    Dnf d;
    d.clauses_ = std::move(out);
    return d;
  }

  /// ⊆-minimal clauses only.
  Dnf min_models() const {
    Dnf d;
    for (const auto& z : clauses_) {
      bool dominated = std::any_of(clauses_.begin(), clauses_.end(), [&](const Clause& y) {
        return y.size() < z.size() && std::includes(z.begin(), z.end(), y.begin(), y.end());
      });
      if (!dominated) d.clauses_.push_back(z);
    }
    return d;
  }

  /// Renames members; the result is renormalized.
  template <class F>
  auto map(F&& f) const -> Dnf<std::decay_t<decltype(f(std::declval<const S&>()))>> {
    using T = std::decay_t<decltype(f(std::declval<const S&>()))>;
    std::vector<typename Dnf<T>::Clause> cs;
    for (const auto& c : clauses_) {
      typename Dnf<T>::Clause n;
      for (const auto& s : c) n.push_back(f(s));
      cs.push_back(std::move(n));
    }
    return Dnf<T>::from_clauses(std::move(cs));
  }

  bool operator==(const Dnf&) const = default;
  auto operator<=>(const Dnf&) const = default;

  /// `{}` or `{{a,b},{c}}` with members printed by `show`.
  template <class Show>
  std::string str(Show&& show) const {
    std::string out = "{";
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      out += i ? ",{" : "{";
      for (std::size_t j = 0; j < clauses_[i].size(); ++j) out += (j ? "," : "") + show(clauses_[i][j]);
      out += "}";
    }
    return out + "}";
  }

 private:
  std::vector<Clause> clauses_;
};

}  // namespace symba

template <class S>
struct std::hash<symba::Dnf<S>> {
  std::size_t operator()(const symba::Dnf<S>& d) const noexcept {
    std::size_t h = 0xcbf29ce484222325ull;
    for (const auto& c : d.clauses()) {
      h = (h ^ 0x2d) * 0x100000001b3ull;
      for (const auto& s : c) h = (h ^ std::hash<S>()(s)) * 0x100000001b3ull;
    }
    return h;
  }
};
