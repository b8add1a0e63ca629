#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace finitude::detail {

/// Iterative Tarjan. Returns a component id per vertex; ids are renumbered
/// so that components are ordered by their least vertex.
inline std::vector<std::uint32_t> strongly_connected_components(
    const std::vector<std::vector<std::uint32_t>>& adj) {
  const std::size_t n = adj.size();
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  std::vector<std::uint32_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<char> on_stack(n, 0);
  std::vector<std::uint32_t> stack;
  std::uint32_t counter = 0, ncomp = 0;

  struct Frame {
    std::uint32_t v;
    std::size_t next;
  };
  std::vector<Frame> call;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < adj[f.v].size()) {
        std::uint32_t w = adj[f.v][f.next++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::uint32_t v = f.v;
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }

  std::vector<std::uint32_t> relabel(ncomp, kUnset);
  std::uint32_t next = 0;
  for (std::uint32_t v = 0; v < n; ++v)
    if (relabel[comp[v]] == kUnset) relabel[comp[v]] = next++;
  for (auto& c : comp) c = relabel[c];
  return comp;
}

}  // namespace finitude::detail
