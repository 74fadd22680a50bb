#pragma once

// Test-only helpers: fixture loading, random networks, and oracles that share no code
// with the library's algorithms.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "crnext/crnext.hpp"

namespace testing_support {

using namespace crnext;

inline std::string fixture_path(const std::string& name) { return std::string(CRNEXT_FIXTURE_DIR) + "/" + name; }

inline ReactionNetwork load_fixture(const std::string& name) {
  return parse_document(read_document(fixture_path(name + ".crn")));
}

inline std::size_t complex_of(const ReactionNetwork& net, const std::string& text) {
  auto scratch = parse_network(text + " -> Zzscratch");
  Complex c{std::vector<int>(net.num_species(), 0)};
  for (std::size_t s = 0; s < scratch.num_species(); ++s) {
    const auto& name = scratch.species()[s].name;
    if (name == "Zzscratch") continue;
    auto idx = net.species_index(name);
    if (!idx) throw std::runtime_error("unknown species " + name);
    c.coeffs[*idx] = scratch.complex(0).coeffs[s];
  }
  auto idx = net.complex_index(c);
  if (!idx) throw std::runtime_error("unknown complex " + text);
  return *idx;
}

inline std::size_t empty_complex(const ReactionNetwork& net) {
  auto idx = net.complex_index(Complex{std::vector<int>(net.num_species(), 0)});
  if (!idx) throw std::runtime_error("no empty complex");
  return *idx;
}

inline ComplexSet complexes_of(const ReactionNetwork& net, const std::vector<std::string>& texts) {
  ComplexSet out;
  for (const auto& t : texts) out.insert(t == "0" ? empty_complex(net) : complex_of(net, t));
  return out;
}

// Random valid network with at most `max_species` species and `max_complexes` complexes.
inline ReactionNetwork random_network(std::mt19937& rng, std::size_t max_species = 4, std::size_t max_complexes = 6,
                                      int max_coeff = 2) {
  while (true) {
    std::size_t m = std::uniform_int_distribution<std::size_t>(1, max_species)(rng);
    std::size_t n = std::uniform_int_distribution<std::size_t>(2, max_complexes)(rng);
    std::set<Complex> pool;
    std::uniform_int_distribution<int> coeff(0, max_coeff);
    for (int tries = 0; pool.size() < n && tries < 100; ++tries) {
      Complex c{std::vector<int>(m)};
      for (auto& x : c.coeffs) x = coeff(rng);
      pool.insert(c);
    }
    std::vector<Complex> complexes(pool.begin(), pool.end());
    std::shuffle(complexes.begin(), complexes.end(), rng);
    n = complexes.size();
    if (n < 2) continue;
    std::set<Reaction> edges;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<bool> used(n, false);
    std::size_t target = std::uniform_int_distribution<std::size_t>(n / 2 + 1, 2 * n)(rng);
    for (int tries = 0; tries < 200; ++tries) {
      std::size_t a = pick(rng), b = pick(rng);
      if (a == b) continue;
      edges.insert({a, b});
      used[a] = used[b] = true;
      if (edges.size() >= target && std::all_of(used.begin(), used.end(), [](bool u) { return u; })) break;
    }
    std::vector<Species> species;
    for (std::size_t s = 0; s < m; ++s) species.push_back({s, "X" + std::to_string(s + 1)});
    std::vector<Reaction> reactions(edges.begin(), edges.end());
    std::shuffle(reactions.begin(), reactions.end(), rng);
    try {
      return ReactionNetwork(species, complexes, reactions);
    } catch (const ValidationError&) {
      continue;
    }
  }
}

// Random network that is subconservative: every reaction has nonpositive change in
// total molecule count.
inline ReactionNetwork random_subconservative_network(std::mt19937& rng, std::size_t max_species = 3,
                                                      std::size_t max_complexes = 5) {
  while (true) {
    auto net = random_network(rng, max_species, max_complexes);
    std::vector<Reaction> keep;
    for (const auto& r : net.reactions()) {
      int before = 0, after = 0;
      for (int c : net.complex(r.source).coeffs) before += c;
      for (int c : net.complex(r.product).coeffs) after += c;
      if (after <= before) keep.push_back(r);
    }
    std::set<std::size_t> used_c;
    for (const auto& r : keep) used_c.insert(r.source), used_c.insert(r.product);
    if (keep.empty()) continue;
    std::vector<std::size_t> map(net.num_complexes(), 0);
    std::vector<Complex> complexes;
    for (auto i : used_c) map[i] = complexes.size(), complexes.push_back(net.complex(i));
    for (auto& r : keep) r = {map[r.source], map[r.product]};
    try {
      return ReactionNetwork(net.species(), complexes, keep);
    } catch (const ValidationError&) {
      continue;
    }
  }
}

// reach[i][j]: j reachable from i (reflexive), by Floyd-Warshall closure.
inline std::vector<std::vector<bool>> reachability(std::size_t n, const EdgeList& edges) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (const auto& e : edges) r[e.source][e.product] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

// Terminal complexes by definition: everything reachable from i reaches back to i.
inline ComplexSet terminal_by_reachability(std::size_t n, const EdgeList& edges) {
  auto r = reachability(n, edges);
  ComplexSet out;
  for (std::size_t i = 0; i < n; ++i) {
    bool terminal = true;
    for (std::size_t j = 0; j < n; ++j)
      if (r[i][j] && !r[j][i]) terminal = false;
    if (terminal) out.insert(i);
  }
  return out;
}

// Exterior forest by definition: following the unique exterior out-edge from any
// exterior complex reaches Y within (number of exterior complexes) steps.
inline bool forest_by_walk(const DomCRN& dom, const ComplexSet& y, const ForestCandidate& cand) {
  const std::size_t n = dom.num_complexes();
  std::vector<std::optional<std::size_t>> next(n);
  for (auto k : cand.edges) {
    const auto& e = dom.edges()[k];
    if (y.contains(e.source)) continue;
    if (next[e.source]) return false;
    next[e.source] = e.product;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (y.contains(i)) continue;
    std::size_t v = i;
    std::size_t steps = 0;
    while (!y.contains(v)) {
      if (!next[v] || ++steps > n) return false;
      v = *next[v];
    }
  }
  return true;
}

// Definition-level balance check, written independently of verify_certificate.
inline bool certificate_ok(const DomCRN& dom, const ComplexSet& y, const ForestCandidate& f,
                           const std::vector<Integer>& alpha) {
  const auto& net = dom.base();
  const std::size_t r = net.num_reactions(), e = dom.num_edges();
  if (alpha.size() != e) return false;
  std::set<std::size_t> in_forest(f.edges.begin(), f.edges.end());
  for (std::size_t k = 0; k < e; ++k)
    if (alpha[k] < 0 || (alpha[k] > 0 && !in_forest.contains(k))) return false;
  // Gamma alpha_R = 0 via Y * (I_a alpha_R).
  std::vector<Integer> flow(net.num_complexes(), 0);
  for (std::size_t k = 0; k < r; ++k) {
    flow[net.reaction(k).product] += alpha[k];
    flow[net.reaction(k).source] -= alpha[k];
  }
  for (std::size_t s = 0; s < net.num_species(); ++s) {
    Integer total = 0;
    for (std::size_t i = 0; i < net.num_complexes(); ++i) total += flow[i] * net.complex(i).coeffs[s];
    if (total != 0) return false;
  }
  // [I_a alpha]_j <= 0 on exterior complexes, over all edges.
  std::vector<Integer> net_in(net.num_complexes(), 0);
  for (std::size_t k = 0; k < e; ++k) {
    net_in[dom.edges()[k].product] += alpha[k];
    net_in[dom.edges()[k].source] -= alpha[k];
  }
  for (std::size_t j = 0; j < net.num_complexes(); ++j)
    if (!y.contains(j) && net_in[j] > 0) return false;
  for (std::size_t k = 0; k < r; ++k)
    if (alpha[k] > 0 && !y.contains(net.reaction(k).source)) return true;
  return false;
}

// Solves the square system M x = b exactly; nullopt if singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> m, std::vector<Rational> b) {
  const std::size_t k = b.size();
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    while (p < k && m[p][c] == 0) ++p;
    if (p == k) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || m[r][c] == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < k; ++j) m[r][j] -= f * m[c][j];
      b[r] -= f * b[c];
    }
  }
  std::vector<Rational> x(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = b[i] / m[i][i];
  return x;
}

// Best vertex of a bounded LP by enumerating every k-subset of tight constraints.
inline std::optional<Rational> vertex_enumeration_optimum(const LinearProgram& lp) {
  const std::size_t k = lp.num_vars();
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (std::size_t i = 0; i < lp.eq_rows.size(); ++i) rows.push_back(lp.eq_rows[i]), rhs.push_back(lp.eq_rhs[i]);
  for (std::size_t i = 0; i < lp.ineq_rows.size(); ++i)
    rows.push_back(lp.ineq_rows[i]), rhs.push_back(lp.ineq_rhs[i]);
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<Rational> e(k);
    e[j] = 1;
    rows.push_back(e), rhs.push_back(lp.lower[j]);
    if (lp.upper[j]) rows.push_back(e), rhs.push_back(*lp.upper[j]);
  }
  std::optional<Rational> best;
  std::vector<std::size_t> pick(k);
  auto feasible_point = [&](const std::vector<Rational>& x) {
    for (std::size_t i = 0; i < lp.eq_rows.size(); ++i) {
      Rational v = 0;
      for (std::size_t j = 0; j < k; ++j) v += lp.eq_rows[i][j] * x[j];
      if (v != lp.eq_rhs[i]) return false;
    }
    for (std::size_t i = 0; i < lp.ineq_rows.size(); ++i) {
      Rational v = 0;
      for (std::size_t j = 0; j < k; ++j) v += lp.ineq_rows[i][j] * x[j];
      if (v > lp.ineq_rhs[i]) return false;
    }
    for (std::size_t j = 0; j < k; ++j)
      if (x[j] < lp.lower[j] || (lp.upper[j] && x[j] > *lp.upper[j])) return false;
    return true;
  };
  auto rec = [&](auto&& self, std::size_t depth, std::size_t start) -> void {
    if (depth == k) {
      std::vector<std::vector<Rational>> m;
      std::vector<Rational> b;
      for (auto i : pick) m.push_back(rows[i]), b.push_back(rhs[i]);
      auto x = solve_square(m, b);
      if (!x || !feasible_point(*x)) return;
      Rational v = 0;
      for (std::size_t j = 0; j < k; ++j) v += lp.objective[j] * (*x)[j];
      if (!best || v < *best) best = v;
      return;
    }
    for (std::size_t i = start; i < rows.size(); ++i) {
      pick[depth] = i;
      self(self, depth + 1, i + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

// Random LP with k variables in boxes [0, u] and a few random halfspaces.
inline LinearProgram random_box_lp(std::mt19937& rng, std::size_t k, bool with_equality) {
  std::uniform_int_distribution<int> small(-4, 4), bound(1, 6), rows(0, 3);
  LinearProgram lp(k);
  for (std::size_t j = 0; j < k; ++j) {
    lp.objective[j] = small(rng);
    lp.lower[j] = std::uniform_int_distribution<int>(-2, 0)(rng);
    lp.upper[j] = Rational(bound(rng));
  }
  int q = rows(rng);
  for (int i = 0; i < q; ++i) {
    std::vector<Rational> row(k);
    for (auto& x : row) {
      x = Rational(small(rng), std::uniform_int_distribution<int>(1, 3)(rng));
      x.canonicalize();
    }
    lp.add_le(row, Rational(small(rng) + 2));
  }
  if (with_equality) {
    std::vector<Rational> row(k);
    for (auto& x : row) x = small(rng);
    lp.add_eq(row, Rational(small(rng)));
  }
  return lp;
}

}  // namespace testing_support
