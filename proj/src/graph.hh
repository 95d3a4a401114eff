#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace symba::detail {

/// Iterative Tarjan over nodes 0..n-1. Returns the component id of every
/// node reachable from `roots` (-1 for unreached nodes) and, per component,
/// whether it contains a cycle (size > 1 or a self-loop).
struct SccResult {
  std::vector<int> comp;
  std::vector<bool> cyclic;
};

inline SccResult scc(std::size_t n, const std::vector<std::uint32_t>& roots,
                     const std::function<void(std::uint32_t, std::vector<std::uint32_t>&)>& succ) {
  SccResult r;
  r.comp.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::vector<std::vector<std::uint32_t>> adj(n);
  std::vector<bool> expanded(n, false);
  int counter = 0;
  struct Frame {
    std::uint32_t v;
    std::size_t next;
  };
  for (auto root : roots) {
    if (index[root] >= 0) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& f = call.back();
      std::uint32_t v = f.v;
      if (!expanded[v]) {
        succ(v, adj[v]);
        expanded[v] = true;
      }
      if (f.next < adj[v].size()) {
        std::uint32_t w = adj[v][f.next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int id = int(r.cyclic.size());
        std::size_t members = 0;
        bool self = false;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          r.comp[w] = id;
          ++members;
        } while (w != v);
        for (auto x : adj[v])
          if (x == v) self = true;
        r.cyclic.push_back(members > 1 || self);
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  return r;
}

}  // namespace symba::detail
