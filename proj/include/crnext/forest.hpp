#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "crnext/errors.hpp"
#include "crnext/lp.hpp"
#include "crnext/model.hpp"
#include "crnext/structure.hpp"

namespace crnext {

// Edge indices into a dom-CRN (0..r+d-1), sorted. Holds every Y-interior edge plus one
// outgoing edge per Y-exterior complex.
struct ForestCandidate {
  std::vector<std::size_t> edges;
  friend bool operator==(const ForestCandidate&, const ForestCandidate&) = default;
  bool contains(std::size_t e) const { return std::binary_search(edges.begin(), edges.end(), e); }
};

// Nonnegative integer edge weights (alpha_R, alpha_D) of length r+d.
struct BalanceCertificate {
  std::vector<Integer> alpha;

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < alpha.size(); ++k)
      if (sgn(alpha[k]) > 0) s.push_back(k);
    return s;
  }
};

// Exterior complexes with their outgoing dom-CRN edges, and the interior edges.
struct ExteriorLayout {
  std::vector<std::size_t> exterior;                 // ascending complex index
  std::vector<std::vector<std::size_t>> out_edges;   // per exterior complex, ascending edge index
  std::vector<std::size_t> interior_edges;           // edges whose source is in Y

  ExteriorLayout(const DomCRN& dom, const ComplexSet& absorbing) {
    std::vector<std::size_t> slot(dom.num_complexes(), static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < dom.num_complexes(); ++i)
      if (!absorbing.contains(i)) {
        slot[i] = exterior.size();
        exterior.push_back(i);
      }
    out_edges.resize(exterior.size());
    for (std::size_t k = 0; k < dom.num_edges(); ++k) {
      std::size_t src = dom.edges()[k].source;
      if (absorbing.contains(src)) interior_edges.push_back(k);
      else out_edges[slot[src]].push_back(k);
    }
  }

  // Product of out-degrees, saturating at `cap + 1`.
  std::size_t count(std::size_t cap) const {
    std::size_t total = 1;
    for (const auto& o : out_edges) {
      if (o.empty()) return 0;
      if (total > (cap + 1) / o.size()) return cap + 1;
      total *= o.size();
    }
    return std::min(total, cap + 1);
  }
};

// Lazily yields every candidate in lexicographic order of the per-complex choices
// (lowest exterior complex varies slowest). Throws BudgetExceeded when asked for more
// than `budget` candidates.
class CandidateEnumerator {
 public:
  CandidateEnumerator(const DomCRN& dom, const ComplexSet& absorbing, std::size_t budget = 1'000'000)
      : layout_(dom, absorbing), choice_(layout_.exterior.size(), 0), budget_(budget) {
    for (const auto& o : layout_.out_edges)
      if (o.empty()) done_ = true;
  }

  const ExteriorLayout& layout() const { return layout_; }
  std::size_t emitted() const { return emitted_; }

  std::optional<ForestCandidate> next() {
    if (done_) return std::nullopt;
    if (emitted_ >= budget_)
      throw BudgetExceeded("forest candidate budget of " + std::to_string(budget_) + " exceeded");
    ForestCandidate c;
    c.edges = layout_.interior_edges;
    for (std::size_t i = 0; i < choice_.size(); ++i) c.edges.push_back(layout_.out_edges[i][choice_[i]]);
    std::sort(c.edges.begin(), c.edges.end());
    ++emitted_;
    advance();
    return c;
  }

 private:
  void advance() {
    for (std::size_t i = choice_.size(); i-- > 0;) {
      if (++choice_[i] < layout_.out_edges[i].size()) return;
      choice_[i] = 0;
    }
    done_ = true;
  }

  ExteriorLayout layout_;
  std::vector<std::size_t> choice_;
  std::size_t budget_;
  std::size_t emitted_ = 0;
  bool done_ = false;
};

inline std::vector<ForestCandidate> enumerate_candidates(const DomCRN& dom, const ComplexSet& absorbing,
                                                         std::size_t budget = 1'000'000) {
  CandidateEnumerator it(dom, absorbing, budget);
  std::vector<ForestCandidate> out;
  while (auto c = it.next()) out.push_back(std::move(*c));
  return out;
}

// Acyclicity of the exterior portion: follow each exterior complex's unique outgoing edge.
// Returns false if the candidate does not give every exterior complex exactly one edge.
inline bool is_exterior_forest(const DomCRN& dom, const ComplexSet& absorbing, const ForestCandidate& cand) {
  const std::size_t n = dom.num_complexes();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> next(n, none);
  for (auto k : cand.edges) {
    const auto& e = dom.edges()[k];
    if (absorbing.contains(e.source)) continue;
    if (next[e.source] != none) return false;
    next[e.source] = e.product;
  }
  enum : unsigned char { fresh, active, finished };
  std::vector<unsigned char> state(n, fresh);
  for (std::size_t start = 0; start < n; ++start) {
    if (absorbing.contains(start) || state[start] != fresh) continue;
    if (next[start] == none) return false;
    std::vector<std::size_t> path;
    std::size_t v = start;
    while (!absorbing.contains(v) && state[v] == fresh) {
      state[v] = active;
      path.push_back(v);
      v = next[v];
    }
    if (!absorbing.contains(v) && state[v] == active) return false;
    for (auto p : path) state[p] = finished;
  }
  return true;
}

// Linear-programming form of the same test:
//   epsilon F_i <= v_i <= F_i / epsilon,   [I_a v]_j <= -epsilon + Y_j / epsilon.
inline LinearProgram exterior_forest_program(const DomCRN& dom, const ComplexSet& absorbing,
                                             const ForestCandidate& cand, const Rational& epsilon) {
  const std::size_t e = dom.num_edges(), n = dom.num_complexes();
  const Rational big = 1 / epsilon;
  LinearProgram lp(e);
  for (std::size_t k = 0; k < e; ++k) {
    bool in = cand.contains(k);
    lp.lower[k] = in ? epsilon : Rational(0);
    lp.upper[k] = in ? big : Rational(0);
  }
  const auto& ia = dom.matrices().adjacency;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> row(e);
    for (std::size_t k = 0; k < e; ++k) row[k] = ia(j, k);
    lp.add_le(std::move(row), -epsilon + (absorbing.contains(j) ? big : Rational(0)));
  }
  return lp;
}

inline bool is_exterior_forest_lp(const DomCRN& dom, const ComplexSet& absorbing, const ForestCandidate& cand,
                                  const Rational& epsilon, const LpOptions& opts = {}) {
  return feasible(exterior_forest_program(dom, absorbing, cand, epsilon), opts);
}

// The balancing cone restricted to forest edges. Variable v stands for edge edge_of_var[v].
struct BalanceProgram {
  LinearProgram lp;
  std::vector<std::size_t> edge_of_var;
  std::size_t num_edges = 0;

  std::vector<Rational> expand(const std::vector<Rational>& point) const {
    std::vector<Rational> alpha(num_edges, Rational(0));
    for (std::size_t v = 0; v < edge_of_var.size(); ++v) alpha[edge_of_var[v]] = point[v];
    return alpha;
  }
};

// alpha >= 0 on forest edges, Gamma alpha_R = 0, and [I_a alpha]_j <= 0 at every exterior
// complex j. With `exterior_positive`, also sum of alpha over Y-exterior base reactions >= 1.
// Objective: minimize sum(alpha), giving a canonical small certificate.
inline BalanceProgram balance_program(const DomCRN& dom, const ComplexSet& absorbing, const ForestCandidate& forest,
                                      bool exterior_positive) {
  BalanceProgram out;
  out.num_edges = dom.num_edges();
  out.edge_of_var = forest.edges;
  const std::size_t p = forest.edges.size();
  out.lp = LinearProgram(p);
  for (std::size_t v = 0; v < p; ++v) out.lp.objective[v] = 1;

  const auto& gamma = dom.matrices().stoich;
  for (std::size_t s = 0; s < gamma.rows(); ++s) {
    std::vector<Rational> row(p);
    bool any = false;
    for (std::size_t v = 0; v < p; ++v) {
      std::size_t k = forest.edges[v];
      if (dom.is_domination(k) || gamma(s, k) == 0) continue;
      row[v] = gamma(s, k);
      any = true;
    }
    if (any) out.lp.add_eq(std::move(row), 0);
  }
  for (std::size_t j = 0; j < dom.num_complexes(); ++j) {
    if (absorbing.contains(j)) continue;
    std::vector<Rational> row(p);
    bool any = false;
    for (std::size_t v = 0; v < p; ++v) {
      const auto& e = dom.edges()[forest.edges[v]];
      if (e.product == j) row[v] += 1, any = true;
      if (e.source == j) row[v] -= 1, any = true;
    }
    if (any) out.lp.add_le(std::move(row), 0);
  }
  if (exterior_positive) {
    std::vector<Rational> row(p);
    for (std::size_t v = 0; v < p; ++v) {
      std::size_t k = forest.edges[v];
      if (!dom.is_domination(k) && !absorbing.contains(dom.edges()[k].source)) row[v] = 1;
    }
    out.lp.add_ge(std::move(row), 1);
  }
  return out;
}

// A certificate iff the forest is balanced: some alpha supported on the forest with
// Gamma alpha_R = 0, inflow <= outflow at exterior complexes, and positive weight on at
// least one Y-exterior base reaction.
inline std::optional<BalanceCertificate> is_balanced(const DomCRN& dom, const ComplexSet& absorbing,
                                                     const ForestCandidate& forest, const LpOptions& opts = {}) {
  auto prog = balance_program(dom, absorbing, forest, true);
  auto out = solve(prog.lp, opts);
  if (out.status != LpStatus::Optimal) return std::nullopt;
  return BalanceCertificate{primitive_integer_ray(prog.expand(out.point))};
}

// Balancing test with the alternative objective: maximize the total weight on base
// reactions (interior ones included) under big-M support bounds, and call the forest
// balanced iff the optimum is positive. The returned vector need not be positive on an
// exterior reaction.
inline LinearProgram compat_balance_program(const DomCRN& dom, const ComplexSet& absorbing,
                                            const ForestCandidate& forest, const Rational& epsilon) {
  const std::size_t e = dom.num_edges(), n = dom.num_complexes(), r = dom.num_reactions();
  const Rational big = 1 / epsilon;
  LinearProgram lp(e);
  for (std::size_t k = 0; k < e; ++k) {
    if (k < r) lp.objective[k] = -1;
    lp.upper[k] = forest.contains(k) ? big : Rational(0);
  }
  const auto& gamma = dom.matrices().stoich;
  for (std::size_t s = 0; s < gamma.rows(); ++s) {
    std::vector<Rational> row(e);
    bool any = false;
    for (std::size_t k = 0; k < r; ++k)
      if (gamma(s, k) != 0) row[k] = gamma(s, k), any = true;
    if (any) lp.add_eq(std::move(row), 0);
  }
  const auto& ia = dom.matrices().adjacency;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> row(e);
    for (std::size_t k = 0; k < e; ++k) row[k] = ia(j, k);
    lp.add_le(std::move(row), absorbing.contains(j) ? big : Rational(0));
  }
  return lp;
}

inline std::optional<BalanceCertificate> is_balanced_compat(const DomCRN& dom, const ComplexSet& absorbing,
                                                            const ForestCandidate& forest, const Rational& epsilon,
                                                            const LpOptions& opts = {}) {
  auto out = solve(compat_balance_program(dom, absorbing, forest, epsilon), opts);
  if (out.status != LpStatus::Optimal || sgn(out.value) >= 0) return std::nullopt;
  return BalanceCertificate{primitive_integer_ray(out.point)};
}

// Re-checks a certificate against the balancing definition in integer arithmetic,
// independently of any solver: support inside the forest, Gamma alpha_R = 0, each
// exterior forest edge carries at least the total weight entering its source, and some
// Y-exterior base reaction has positive weight.
inline bool verify_certificate(const DomCRN& dom, const ComplexSet& absorbing, const ForestCandidate& forest,
                               const BalanceCertificate& cert) {
  const std::size_t e = dom.num_edges(), r = dom.num_reactions();
  if (cert.alpha.size() != e) return false;
  for (std::size_t k = 0; k < e; ++k) {
    if (sgn(cert.alpha[k]) < 0) return false;
    if (sgn(cert.alpha[k]) > 0 && !forest.contains(k)) return false;
  }
  const auto& net = dom.base();
  for (std::size_t s = 0; s < net.num_species(); ++s) {
    Integer total = 0;
    for (std::size_t k = 0; k < r; ++k) {
      const auto& rx = net.reaction(k);
      int delta = net.complex(rx.product).coeffs[s] - net.complex(rx.source).coeffs[s];
      total += cert.alpha[k] * delta;
    }
    if (total != 0) return false;
  }
  for (auto k : forest.edges) {
    std::size_t src = dom.edges()[k].source;
    if (absorbing.contains(src)) continue;
    Integer inflow = 0;
    for (std::size_t i = 0; i < e; ++i)
      if (dom.edges()[i].product == src) inflow += cert.alpha[i];
    if (cert.alpha[k] < inflow) return false;
  }
  for (std::size_t k = 0; k < r; ++k)
    if (sgn(cert.alpha[k]) > 0 && !absorbing.contains(net.reaction(k).source)) return true;
  return false;
}

// A certificate whose support is the union of the supports of all certificates. Each
// forest edge outside the running support is probed with alpha_e >= 1 on the balancing
// cone; the cone is closed under addition so the witnesses are summed.
inline std::optional<BalanceCertificate> maximal_support_alpha(const DomCRN& dom, const ComplexSet& absorbing,
                                                               const ForestCandidate& forest,
                                                               const LpOptions& opts = {}) {
  auto positive = balance_program(dom, absorbing, forest, true);
  auto first = solve(positive.lp, opts);
  if (first.status != LpStatus::Optimal) return std::nullopt;
  std::vector<Rational> sum = positive.expand(first.point);

  auto cone = balance_program(dom, absorbing, forest, false);
  for (std::size_t v = 0; v < cone.edge_of_var.size(); ++v) {
    if (sgn(sum[cone.edge_of_var[v]]) > 0) continue;
    LinearProgram probe = cone.lp;
    probe.lower[v] = 1;
    auto out = solve(probe, opts);
    if (out.status != LpStatus::Optimal) continue;
    auto alpha = cone.expand(out.point);
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += alpha[k];
  }
  return BalanceCertificate{primitive_integer_ray(sum)};
}

// Source and product complexes of every edge with positive weight; all complexes when
// the certificate has full support on the forest.
inline ComplexSet expand_absorbing_set(const DomCRN& dom, const ForestCandidate& forest,
                                       const BalanceCertificate& cert) {
  bool full = std::all_of(forest.edges.begin(), forest.edges.end(),
                          [&](std::size_t k) { return sgn(cert.alpha[k]) > 0; });
  if (full) return dom.base().all_complexes();
  ComplexSet out;
  for (std::size_t k = 0; k < cert.alpha.size(); ++k)
    if (sgn(cert.alpha[k]) > 0) {
      out.insert(dom.edges()[k].source);
      out.insert(dom.edges()[k].product);
    }
  return out;
}

}  // namespace crnext
