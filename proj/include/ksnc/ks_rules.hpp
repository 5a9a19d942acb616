#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ksnc/expression.hpp"
#include "ksnc/orthogonality.hpp"
#include "ksnc/ray_set.hpp"

namespace ksnc {

// KS rules: no orthogonal pair may take value 1 twice, and every complete
// orthogonal basis takes value 1 exactly once.

struct KSStatus {
  bool obeys = false;
  // First edge (lexicographic) with both endpoints valued 1.
  std::optional<std::pair<int, int>> edge_witness;
  // First basis (alpha, 1-based) whose number of 1s is x != 1, with that x.
  std::optional<std::pair<int, int>> basis_witness;
};

inline KSStatus check_ks_rules(const Assignment& a, const OrthogonalityGraph& g,
                               const BasisList& bases) {
  if (static_cast<int>(a.size()) != g.vertex_count)
    throw InputError("assignment length does not match ray count");
  KSStatus st;
  for (const auto& [i, j] : g.edges) {
    if (a[i - 1] && a[j - 1]) {
      st.edge_witness = std::make_pair(i, j);
      break;
    }
  }
  for (size_t alpha = 0; alpha < bases.bases.size(); ++alpha) {
    int ones = 0;
    for (int k : bases.bases[alpha]) ones += a[k - 1];
    if (ones != 1) {
      st.basis_witness = std::make_pair(static_cast<int>(alpha) + 1, ones);
      break;
    }
  }
  st.obeys = !st.edge_witness && !st.basis_witness;
  return st;
}

struct KSCertificate {
  bool is_ks = false;
  std::optional<Assignment> obeying;  // present iff !is_ks; lexicographically smallest
  std::uint64_t nodes_explored = 0;   // exhaustion measure of the propagation search
};

namespace detail {

// Backtracking search for a KS-obeying assignment with unit propagation:
// at-most-one per edge, exactly-one per basis. Branches on the lowest
// unassigned index with value 0 first, so the first hit is lex-smallest.
class KSSearch {
 public:
  KSSearch(const OrthogonalityGraph& g, const BasisList& bases)
      : g_(g), bases_(bases), mu_(g.vertex_count) {
    val_.assign(mu_ + 1, -1);
    neighbors_.assign(mu_ + 1, {});
    for (const auto& [i, j] : g.edges) {
      neighbors_[i].push_back(j);
      neighbors_[j].push_back(i);
    }
    member_of_.assign(mu_ + 1, {});
    const int L = bases_.count();
    ones_.assign(L, 0);
    zeros_.assign(L, 0);
    for (int b = 0; b < L; ++b)
      for (int k : bases_.bases[b]) member_of_[k].push_back(b);
  }

  KSCertificate run() {
    KSCertificate cert;
    const bool found = dfs(cert.nodes_explored);
    cert.is_ks = !found;
    if (found) {
      Assignment a(mu_, 0);
      for (int v = 1; v <= mu_; ++v) a[v - 1] = static_cast<std::uint8_t>(val_[v]);
      cert.obeying = std::move(a);
    }
    return cert;
  }

 private:
  bool assign(int v, int x) {
    if (val_[v] != -1) return val_[v] == x;
    val_[v] = static_cast<int8_t>(x);
    trail_.push_back(v);
    // counters first: a trail entry must always be fully counted so undo_to
    // stays exact even when a conflict aborts this call
    for (int b : member_of_[v]) (x == 1 ? ones_[b] : zeros_[b])++;
    if (x == 1) {
      for (int u : neighbors_[v])
        if (val_[u] == 1) return false;
    }
    for (int b : member_of_[v]) {
      if (ones_[b] > 1) return false;
      if (zeros_[b] == static_cast<int>(bases_.bases[b].size())) return false;
    }
    // propagate
    if (x == 1) {
      for (int u : neighbors_[v])
        if (val_[u] == -1 && !assign(u, 0)) return false;
      for (int b : member_of_[v])
        for (int k : bases_.bases[b])
          if (val_[k] == -1 && !assign(k, 0)) return false;
    } else {
      for (int b : member_of_[v]) {
        const int size = static_cast<int>(bases_.bases[b].size());
        if (ones_[b] == 0 && zeros_[b] == size - 1) {
          for (int k : bases_.bases[b])
            if (val_[k] == -1 && !assign(k, 1)) return false;
        }
      }
    }
    return true;
  }

  void undo_to(size_t mark) {
    while (trail_.size() > mark) {
      const int v = trail_.back();
      trail_.pop_back();
      for (int b : member_of_[v]) (val_[v] == 1 ? ones_[b] : zeros_[b])--;
      val_[v] = -1;
    }
  }

  bool dfs(std::uint64_t& nodes) {
    ++nodes;
    int v = 1;
    while (v <= mu_ && val_[v] != -1) ++v;
    if (v > mu_) return true;
    for (int x : {0, 1}) {
      const size_t mark = trail_.size();
      if (assign(v, x) && dfs(nodes)) return true;
      undo_to(mark);
    }
    return false;
  }

  const OrthogonalityGraph& g_;
  const BasisList& bases_;
  int mu_;
  std::vector<int8_t> val_;
  std::vector<int> trail_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<int>> member_of_;
  std::vector<int> ones_, zeros_;
};

}  // namespace detail

/// Decides whether the graph+bases admit any KS-obeying assignment. is_ks is
/// true when none exists; otherwise the lex-smallest obeying assignment is
/// returned as the counterexample.
inline KSCertificate certify_ks_set(const OrthogonalityGraph& g, const BasisList& bases) {
  detail::KSSearch search(g, bases);
  return search.run();
}

inline KSCertificate certify_ks_set(const RaySet& rs) {
  const auto g = build_orthogonality_graph(rs);
  const auto bases = enumerate_bases(g, rs.dim);
  return certify_ks_set(g, bases);
}

inline bool is_ks_set(const RaySet& rs) { return certify_ks_set(rs).is_ks; }

}  // namespace ksnc
