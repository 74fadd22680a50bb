#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "crnext/errors.hpp"
#include "crnext/lp.hpp"
#include "crnext/model.hpp"

namespace crnext {

struct ConservativityResult {
  bool subconservative = false;
  bool conservative = false;
  // Strictly positive c with c^T Gamma <= 0 (== 0 when conservative); empty otherwise.
  std::vector<Rational> witness;
};

namespace detail {

// maximize z  s.t.  z <= c_i,  c^T Gamma (<= | =) 0,  0 <= c_i <= 1,  0 <= z <= 1.
inline LinearProgram conservation_program(const ReactionNetwork& net, bool equality) {
  const std::size_t m = net.num_species();
  const auto gamma = build_structural_matrices(net).stoich;
  LinearProgram lp(m + 1);
  lp.objective[m] = -1;
  for (std::size_t j = 0; j <= m; ++j) lp.upper[j] = Rational(1);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Rational> row(m + 1);
    row[m] = 1;
    row[i] = -1;
    lp.add_le(std::move(row), 0);
  }
  for (std::size_t k = 0; k < gamma.cols(); ++k) {
    std::vector<Rational> row(m + 1);
    for (std::size_t s = 0; s < m; ++s) row[s] = gamma(s, k);
    if (equality) lp.add_eq(std::move(row), 0);
    else lp.add_le(std::move(row), 0);
  }
  return lp;
}

}  // namespace detail

inline ConservativityResult check_conservativity(const ReactionNetwork& net, const LpOptions& opts = {}) {
  const std::size_t m = net.num_species();
  ConservativityResult out;
  auto sub = solve(detail::conservation_program(net, false), opts);
  if (sub.status != LpStatus::Optimal || sgn(sub.value) >= 0) return out;
  out.subconservative = true;
  out.witness.assign(sub.point.begin(), sub.point.begin() + static_cast<std::ptrdiff_t>(m));
  auto cons = solve(detail::conservation_program(net, true), opts);
  if (cons.status == LpStatus::Optimal && sgn(cons.value) < 0) {
    out.conservative = true;
    out.witness.assign(cons.point.begin(), cons.point.begin() + static_cast<std::ptrdiff_t>(m));
  }
  return out;
}

// Domination edge: `dominating` -> `dominated`, where y_dominated <= y_dominating.
struct DomEdge {
  std::size_t dominating = 0;
  std::size_t dominated = 0;
  friend auto operator<=>(const DomEdge&, const DomEdge&) = default;
  Reaction as_edge() const { return {dominating, dominated}; }
};

// All pairs (i, j), i != j, with y_j <= y_i, in lexicographic (i, j) order.
inline std::vector<DomEdge> domination_set(const ReactionNetwork& net) {
  std::vector<DomEdge> out;
  const std::size_t n = net.num_complexes();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && dominated_by(net.complex(j), net.complex(i))) out.push_back({i, j});
  return out;
}

// A network extended with domination edges. Edges 0..r-1 are the base reactions in
// their original order; edges r..r+d-1 are the domination edges in list order.
class DomCRN {
 public:
  DomCRN(ReactionNetwork base, std::vector<DomEdge> dom_edges)
      : base_(std::move(base)), dom_edges_(std::move(dom_edges)) {
    std::set<Reaction> base_pairs(base_.reactions().begin(), base_.reactions().end());
    std::set<DomEdge> seen;
    for (const auto& d : dom_edges_) {
      if (d.dominating >= base_.num_complexes() || d.dominated >= base_.num_complexes())
        throw ValidationError("domination edge references a missing complex");
      if (d.dominating == d.dominated || !dominated_by(base_.complex(d.dominated), base_.complex(d.dominating)))
        throw ValidationError("not a domination pair");
      if (base_pairs.contains(d.as_edge())) throw ValidationError("domination edge duplicates a reaction");
      if (!seen.insert(d).second) throw ValidationError("duplicate domination edge");
    }
    edges_ = base_.reactions();
    for (const auto& d : dom_edges_) edges_.push_back(d.as_edge());
    matrices_ = structural_matrices(base_.num_species(), base_.complexes(), edges_);
  }

  const ReactionNetwork& base() const { return base_; }
  const std::vector<DomEdge>& dom_edges() const { return dom_edges_; }
  const EdgeList& edges() const { return edges_; }
  const StructuralMatrices& matrices() const { return matrices_; }

  std::size_t num_complexes() const { return base_.num_complexes(); }
  std::size_t num_reactions() const { return base_.num_reactions(); }
  std::size_t num_edges() const { return edges_.size(); }
  bool is_domination(std::size_t edge) const { return edge >= base_.num_reactions(); }

 private:
  ReactionNetwork base_;
  std::vector<DomEdge> dom_edges_;
  EdgeList edges_;
  StructuralMatrices matrices_;
};

inline DomCRN build_dom_crn(const ReactionNetwork& net, std::vector<DomEdge> dom_edges) {
  return DomCRN(net, std::move(dom_edges));
}

// Terminal complexes via the kernel of the unweighted Laplacian: the support of the
// maximizer of sum(y) over { A y = 0, 0 <= y <= 1/epsilon }.
inline ComplexSet terminal_complexes_lp(std::size_t n, std::span<const Reaction> edges, const Rational& epsilon,
                                        const LpOptions& opts = {}) {
  Matrix<int> laplacian(n, n);
  for (const auto& e : edges) {
    laplacian(e.source, e.source) -= 1;
    laplacian(e.product, e.source) += 1;
  }
  LinearProgram lp(n);
  const Rational cap = 1 / epsilon;
  for (std::size_t i = 0; i < n; ++i) {
    lp.objective[i] = -1;
    lp.upper[i] = cap;
    std::vector<Rational> row(n);
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      row[j] = laplacian(i, j);
      any = any || laplacian(i, j) != 0;
    }
    if (any) lp.add_eq(std::move(row), 0);
  }
  auto out = solve(lp, opts);
  ComplexSet support;
  if (out.status != LpStatus::Optimal) return support;
  for (std::size_t i = 0; i < n; ++i)
    if (sgn(out.point[i]) > 0) support.insert(i);
  return support;
}

inline ComplexSet terminal_complexes_lp(const DomCRN& dom, const Rational& epsilon, const LpOptions& opts = {}) {
  return terminal_complexes_lp(dom.num_complexes(), dom.edges(), epsilon, opts);
}

// One pass of the admissibility loop, kept for inspection.
struct AdmissibleStep {
  ComplexSet absorbing;
  std::vector<DomEdge> dom_edges;
};

struct AdmissibleDom {
  ComplexSet absorbing;
  std::vector<DomEdge> dom_edges;
  std::vector<AdmissibleStep> steps;
};

// Fixed point of: (a) close Y under directed paths of the base network; (b) add the
// terminal complexes of the dom-CRN on the current D; (c) drop domination edges that
// touch Y (dominated complex in Y, or dominating complex in Y so that Y stays closed).
// Domination pairs that coincide with a base reaction are never used.
inline AdmissibleDom find_admissible_dom(const ReactionNetwork& net, const ComplexSet& seed,
                                         const std::vector<DomEdge>& dstar) {
  std::set<Reaction> base_pairs(net.reactions().begin(), net.reactions().end());
  AdmissibleDom out;
  out.absorbing = seed;
  for (const auto& d : dstar)
    if (!base_pairs.contains(d.as_edge())) out.dom_edges.push_back(d);

  const std::size_t n = net.num_complexes();
  while (true) {
    const ComplexSet before = out.absorbing;
    const std::size_t dom_before = out.dom_edges.size();

    out.absorbing = forward_closure(n, net.reactions(), std::move(out.absorbing));
    EdgeList edges = net.reactions();
    for (const auto& d : out.dom_edges) edges.push_back(d.as_edge());
    for (auto t : terminal_complexes(n, edges)) out.absorbing.insert(t);
    std::erase_if(out.dom_edges, [&](const DomEdge& d) {
      return out.absorbing.contains(d.dominated) || out.absorbing.contains(d.dominating);
    });
    out.steps.push_back({out.absorbing, out.dom_edges});

    if (out.absorbing == before && out.dom_edges.size() == dom_before) break;
  }
  return out;
}

// Definition-level admissibility check: Y absorbing on the dom-CRN, R and D disjoint,
// and no domination edge ends in Y.
inline bool is_admissible(const DomCRN& dom, const ComplexSet& absorbing) {
  if (!is_absorbing(dom.num_complexes(), dom.edges(), absorbing)) return false;
  std::set<Reaction> base_pairs(dom.base().reactions().begin(), dom.base().reactions().end());
  for (const auto& d : dom.dom_edges()) {
    if (base_pairs.contains(d.as_edge())) return false;
    if (absorbing.contains(d.dominated)) return false;
  }
  return true;
}

}  // namespace crnext
