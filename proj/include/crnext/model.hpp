#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crnext/errors.hpp"
#include "crnext/numeric.hpp"

namespace crnext {

struct Species {
  std::size_t index = 0;
  std::string name;
};

// Stoichiometric vector over the species of a network. All zeros is the empty complex.
struct Complex {
  std::vector<int> coeffs;

  bool is_empty() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](int c) { return c == 0; });
  }
  friend auto operator<=>(const Complex&, const Complex&) = default;
};

// Directed edge between complex indices. Used for reactions and, in a dom-CRN, for
// domination edges as well.
struct Reaction {
  std::size_t source = 0;
  std::size_t product = 0;
  friend auto operator<=>(const Reaction&, const Reaction&) = default;
};

using ComplexSet = std::set<std::size_t>;
using EdgeList = std::vector<Reaction>;

// y_j <= y_i componentwise.
inline bool dominated_by(const Complex& lower, const Complex& upper) {
  for (std::size_t s = 0; s < lower.coeffs.size(); ++s)
    if (lower.coeffs[s] > upper.coeffs[s]) return false;
  return true;
}

// An immutable, validated (species, complexes, reactions) triple.
class ReactionNetwork {
 public:
  ReactionNetwork(std::vector<Species> species, std::vector<Complex> complexes,
                  std::vector<Reaction> reactions)
      : species_(std::move(species)), complexes_(std::move(complexes)), reactions_(std::move(reactions)) {
    validate();
  }

  std::size_t num_species() const { return species_.size(); }
  std::size_t num_complexes() const { return complexes_.size(); }
  std::size_t num_reactions() const { return reactions_.size(); }

  const std::vector<Species>& species() const { return species_; }
  const std::vector<Complex>& complexes() const { return complexes_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }

  const Complex& complex(std::size_t i) const { return complexes_.at(i); }
  const Reaction& reaction(std::size_t k) const { return reactions_.at(k); }

  std::optional<std::size_t> species_index(const std::string& name) const {
    for (const auto& s : species_)
      if (s.name == name) return s.index;
    return std::nullopt;
  }

  std::optional<std::size_t> complex_index(const Complex& c) const {
    auto it = std::find(complexes_.begin(), complexes_.end(), c);
    if (it == complexes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - complexes_.begin());
  }

  ComplexSet all_complexes() const {
    ComplexSet all;
    for (std::size_t i = 0; i < complexes_.size(); ++i) all.insert(i);
    return all;
  }

 private:
  void validate() const {
    const std::size_t m = species_.size();
    if (reactions_.empty()) throw ValidationError("network has no reactions");
    std::set<std::string> names;
    for (std::size_t s = 0; s < m; ++s) {
      if (species_[s].index != s) throw ValidationError("species index out of order: " + species_[s].name);
      if (species_[s].name.empty()) throw ValidationError("species with empty name");
      if (!names.insert(species_[s].name).second)
        throw ValidationError("duplicate species name: " + species_[s].name);
    }
    std::set<Complex> seen;
    std::vector<bool> species_used(m, false);
    for (const auto& c : complexes_) {
      if (c.coeffs.size() != m) throw ValidationError("complex has wrong length");
      for (std::size_t s = 0; s < m; ++s) {
        if (c.coeffs[s] < 0) throw ValidationError("negative stoichiometric coefficient");
        if (c.coeffs[s] > 0) species_used[s] = true;
      }
      if (!seen.insert(c).second) throw ValidationError("duplicate complex");
    }
    for (std::size_t s = 0; s < m; ++s)
      if (!species_used[s]) throw ValidationError("species appears in no complex: " + species_[s].name);
    std::vector<bool> complex_used(complexes_.size(), false);
    std::set<Reaction> pairs;
    for (const auto& r : reactions_) {
      if (r.source >= complexes_.size() || r.product >= complexes_.size())
        throw ValidationError("reaction references a missing complex");
      if (r.source == r.product) throw ValidationError("self-loop reaction");
      if (!pairs.insert(r).second) throw ValidationError("duplicate reaction");
      complex_used[r.source] = complex_used[r.product] = true;
    }
    for (bool used : complex_used)
      if (!used) throw ValidationError("complex appears in no reaction");
  }

  std::vector<Species> species_;
  std::vector<Complex> complexes_;
  std::vector<Reaction> reactions_;
};

// Incremental construction by species name. Species and complexes are indexed in
// first-appearance order and complexes are deduplicated.
class NetworkBuilder {
 public:
  using Terms = std::vector<std::pair<std::string, int>>;

  std::size_t add_species(const std::string& name) {
    auto it = species_ids_.find(name);
    if (it != species_ids_.end()) return it->second;
    std::size_t id = names_.size();
    species_ids_.emplace(name, id);
    names_.push_back(name);
    return id;
  }

  std::size_t add_complex(const Terms& terms) {
    std::map<std::size_t, int> sparse;
    for (const auto& [name, coeff] : terms) sparse[add_species(name)] += coeff;
    std::erase_if(sparse, [](const auto& kv) { return kv.second == 0; });
    auto it = std::find(complexes_.begin(), complexes_.end(), sparse);
    if (it != complexes_.end()) return static_cast<std::size_t>(it - complexes_.begin());
    complexes_.push_back(std::move(sparse));
    return complexes_.size() - 1;
  }

  void add_reaction(const Terms& source, const Terms& product) {
    std::size_t s = add_complex(source);
    std::size_t p = add_complex(product);
    reactions_.push_back({s, p});
  }

  std::size_t num_reactions() const { return reactions_.size(); }

  ReactionNetwork build() const {
    std::vector<Species> species;
    for (std::size_t s = 0; s < names_.size(); ++s) species.push_back({s, names_[s]});
    std::vector<Complex> complexes;
    for (const auto& sparse : complexes_) {
      Complex c{std::vector<int>(names_.size(), 0)};
      for (const auto& [s, coeff] : sparse) c.coeffs[s] = coeff;
      complexes.push_back(std::move(c));
    }
    return ReactionNetwork(std::move(species), std::move(complexes), reactions_);
  }

 private:
  std::map<std::string, std::size_t> species_ids_;
  std::vector<std::string> names_;
  std::vector<std::map<std::size_t, int>> complexes_;
  std::vector<Reaction> reactions_;
};

// Y (m x n), I_a (n x e), Gamma (m x e), I_s (e x n), A (n x n) for e edges.
struct StructuralMatrices {
  Matrix<int> complex_matrix;
  Matrix<int> adjacency;
  Matrix<int> stoich;
  Matrix<int> source_matrix;
  Matrix<int> laplacian;
};

inline StructuralMatrices structural_matrices(std::size_t num_species, const std::vector<Complex>& complexes,
                                              std::span<const Reaction> edges) {
  const std::size_t m = num_species, n = complexes.size(), e = edges.size();
  StructuralMatrices out;
  out.complex_matrix = Matrix<int>(m, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t s = 0; s < m; ++s) out.complex_matrix(s, i) = complexes[i].coeffs[s];

  out.adjacency = Matrix<int>(n, e);
  out.source_matrix = Matrix<int>(e, n);
  out.stoich = Matrix<int>(m, e);
  for (std::size_t k = 0; k < e; ++k) {
    out.adjacency(edges[k].source, k) = -1;
    out.adjacency(edges[k].product, k) = 1;
    out.source_matrix(k, edges[k].source) = 1;
    for (std::size_t s = 0; s < m; ++s)
      out.stoich(s, k) = complexes[edges[k].product].coeffs[s] - complexes[edges[k].source].coeffs[s];
  }
  out.laplacian = Matrix<int>(n, n);
  for (const auto& edge : edges) {
    out.laplacian(edge.source, edge.source) -= 1;
    out.laplacian(edge.product, edge.source) += 1;
  }
  return out;
}

inline StructuralMatrices build_structural_matrices(const ReactionNetwork& net) {
  return structural_matrices(net.num_species(), net.complexes(), net.reactions());
}

struct LinkageClass {
  std::vector<std::size_t> members;  // sorted
  bool terminal = false;
};

// Strongly connected components of the complex graph (iterative Tarjan), ordered by
// smallest member. A class is terminal iff no edge leaves it.
inline std::vector<LinkageClass> strong_linkage_classes(std::size_t n, std::span<const Reaction> edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : edges) adj[e.source].push_back(e.product);

  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0, num_comp = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unvisited) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < adj[v].size()) {
        std::size_t w = adj[v][next++];
        if (index[w] == unvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = num_comp;
        } while (w != v);
        ++num_comp;
      }
      std::size_t finished = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
    }
  }

  std::vector<LinkageClass> classes(num_comp);
  for (std::size_t v = 0; v < n; ++v) classes[comp[v]].members.push_back(v);
  for (auto& c : classes) c.terminal = true;
  for (const auto& e : edges)
    if (comp[e.source] != comp[e.product]) classes[comp[e.source]].terminal = false;
  std::sort(classes.begin(), classes.end(),
            [](const LinkageClass& a, const LinkageClass& b) { return a.members.front() < b.members.front(); });
  return classes;
}

inline ComplexSet terminal_complexes(std::size_t n, std::span<const Reaction> edges) {
  ComplexSet out;
  for (const auto& c : strong_linkage_classes(n, edges))
    if (c.terminal) out.insert(c.members.begin(), c.members.end());
  return out;
}

// Contains every terminal complex and no edge leaves it.
inline bool is_absorbing(std::size_t n, std::span<const Reaction> edges, const ComplexSet& candidate) {
  for (auto t : terminal_complexes(n, edges))
    if (!candidate.contains(t)) return false;
  for (const auto& e : edges)
    if (candidate.contains(e.source) && !candidate.contains(e.product)) return false;
  return true;
}

// Everything reachable from `seed` along directed edges, seed included.
inline ComplexSet forward_closure(std::size_t n, std::span<const Reaction> edges, ComplexSet seed) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : edges) adj[e.source].push_back(e.product);
  std::vector<std::size_t> frontier(seed.begin(), seed.end());
  while (!frontier.empty()) {
    std::size_t v = frontier.back();
    frontier.pop_back();
    for (auto w : adj[v])
      if (seed.insert(w).second) frontier.push_back(w);
  }
  return seed;
}

inline std::vector<LinkageClass> strong_linkage_classes(const ReactionNetwork& net) {
  return strong_linkage_classes(net.num_complexes(), net.reactions());
}

inline bool is_absorbing(const ReactionNetwork& net, const ComplexSet& candidate) {
  return is_absorbing(net.num_complexes(), net.reactions(), candidate);
}

}  // namespace crnext
