#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "crnext/errors.hpp"
#include "crnext/model.hpp"
#include "crnext/numeric.hpp"
#include "crnext/structure.hpp"

namespace crnext {

struct DiscreteState {
  std::vector<int> counts;
  friend auto operator<=>(const DiscreteState&, const DiscreteState&) = default;
};

struct Transition {
  std::size_t from = 0;
  std::size_t to = 0;
  std::size_t reaction = 0;
};

struct StateGraph {
  std::vector<DiscreteState> states;  // states[0] is the initial state
  std::vector<Transition> transitions;

  std::vector<std::vector<std::size_t>> successors() const {
    std::vector<std::vector<std::size_t>> out(states.size());
    for (const auto& t : transitions) out[t.from].push_back(t.to);
    return out;
  }
};

inline bool charged(const Complex& cplx, const DiscreteState& state) {
  if (cplx.coeffs.size() != state.counts.size()) throw DimensionError("state and complex sizes differ");
  for (std::size_t s = 0; s < cplx.coeffs.size(); ++s)
    if (state.counts[s] < cplx.coeffs[s]) return false;
  return true;
}

namespace detail {

inline std::string state_key(const std::vector<int>& counts) {
  return std::string(reinterpret_cast<const char*>(counts.data()), counts.size() * sizeof(int));
}

// X + y_product - y_source for reaction k, assuming it is charged.
inline std::vector<int> fire(const ReactionNetwork& net, const std::vector<int>& x, std::size_t k) {
  const auto& src = net.complex(net.reaction(k).source).coeffs;
  const auto& dst = net.complex(net.reaction(k).product).coeffs;
  std::vector<int> y = x;
  for (std::size_t s = 0; s < y.size(); ++s) y[s] += dst[s] - src[s];
  return y;
}

inline bool charged_counts(const Complex& c, const std::vector<int>& x) {
  for (std::size_t s = 0; s < x.size(); ++s)
    if (x[s] < c.coeffs[s]) return false;
  return true;
}

}  // namespace detail

// Breadth-first closure of `initial` under the reacts-to relation.
inline StateGraph explore(const ReactionNetwork& net, const DiscreteState& initial,
                          std::size_t max_states = 1'000'000) {
  if (initial.counts.size() != net.num_species()) throw DimensionError("state has wrong length");
  for (int c : initial.counts)
    if (c < 0) throw ValidationError("negative species count");
  StateGraph g;
  std::unordered_map<std::string, std::size_t> index;
  g.states.push_back(initial);
  index.emplace(detail::state_key(initial.counts), 0);
  for (std::size_t head = 0; head < g.states.size(); ++head) {
    for (std::size_t k = 0; k < net.num_reactions(); ++k) {
      if (!detail::charged_counts(net.complex(net.reaction(k).source), g.states[head].counts)) continue;
      auto next = detail::fire(net, g.states[head].counts, k);
      auto [it, fresh] = index.emplace(detail::state_key(next), g.states.size());
      if (fresh) {
        if (g.states.size() >= max_states)
          throw StateBudgetExceeded("state budget of " + std::to_string(max_states) + " exceeded");
        g.states.push_back({std::move(next)});
      }
      g.transitions.push_back({head, it->second, k});
    }
  }
  return g;
}

namespace detail {

// States that can reach some member of `targets`.
inline std::vector<bool> backward_reach(const std::vector<std::vector<std::size_t>>& predecessors,
                                        const std::vector<bool>& targets) {
  std::vector<bool> seen = targets;
  std::vector<std::size_t> frontier;
  for (std::size_t v = 0; v < targets.size(); ++v)
    if (targets[v]) frontier.push_back(v);
  while (!frontier.empty()) {
    std::size_t v = frontier.back();
    frontier.pop_back();
    for (auto u : predecessors[v])
      if (!seen[u]) {
        seen[u] = true;
        frontier.push_back(u);
      }
  }
  return seen;
}

}  // namespace detail

// Complexes transient from `initial`: some reachable state has no path to a state
// where the complex is charged.
inline ComplexSet transient_complexes_from(const ReactionNetwork& net, const DiscreteState& initial,
                                           std::size_t max_states = 1'000'000) {
  const StateGraph g = explore(net, initial, max_states);
  std::vector<std::vector<std::size_t>> pred(g.states.size());
  for (const auto& t : g.transitions) pred[t.to].push_back(t.from);
  ComplexSet out;
  for (std::size_t i = 0; i < net.num_complexes(); ++i) {
    std::vector<bool> target(g.states.size());
    for (std::size_t v = 0; v < g.states.size(); ++v) target[v] = charged(net.complex(i), g.states[v]);
    auto can = detail::backward_reach(pred, target);
    if (std::find(can.begin(), can.end(), false) != can.end()) out.insert(i);
  }
  return out;
}

// Every X in Z^m_{>=0} with w.X <= limit, in lexicographic order.
inline std::vector<DiscreteState> states_within(const std::vector<Integer>& weights, const Integer& limit,
                                                std::size_t max_states = 1'000'000) {
  std::vector<DiscreteState> out;
  std::vector<int> x(weights.size(), 0);
  auto rec = [&](auto&& self, std::size_t s, const Integer& budget) -> void {
    if (s == weights.size()) {
      if (out.size() >= max_states)
        throw StateBudgetExceeded("state budget of " + std::to_string(max_states) + " exceeded");
      out.push_back({x});
      return;
    }
    for (int c = 0;; ++c) {
      Integer used = weights[s] * c;
      if (used > budget) break;
      x[s] = c;
      self(self, s + 1, budget - used);
    }
    x[s] = 0;
  };
  for (const auto& w : weights)
    if (sgn(w) <= 0) throw ValidationError("state weights must be positive");
  rec(rec, 0, limit);
  return out;
}

struct ExtinctionCheck {
  bool holds = true;
  std::size_t states = 0;
  std::vector<DiscreteState> counterexamples;  // sink-component states charging a claimed complex
};

// Checks that every claimed complex is transient from every X with c.X <= bound * min(c),
// where c is the positive subconservation witness. The region is forward-closed, so it
// suffices to look at its terminal strongly connected components: a claimed complex is
// recurrent from some X in the region iff it is charged somewhere in a terminal
// component (every X reaches one, and inside one every state is mutually reachable).
inline ExtinctionCheck check_guaranteed_extinction(const ReactionNetwork& net, const std::vector<Rational>& witness,
                                                   const ComplexSet& claimed, int bound,
                                                   std::size_t max_states = 1'000'000) {
  if (witness.size() != net.num_species()) throw DimensionError("witness has wrong length");
  if (bound < 1) throw ValidationError("bound must be at least 1");
  auto c = primitive_integer_ray(witness);
  Integer limit = *std::min_element(c.begin(), c.end()) * bound;

  ExtinctionCheck out;
  if (claimed.empty()) return out;

  std::vector<DiscreteState> states = states_within(c, limit, max_states);
  out.states = states.size();
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(states.size());
  for (std::size_t v = 0; v < states.size(); ++v) index.emplace(detail::state_key(states[v].counts), v);

  std::vector<std::vector<std::size_t>> adj(states.size());
  for (std::size_t v = 0; v < states.size(); ++v)
    for (std::size_t k = 0; k < net.num_reactions(); ++k) {
      if (!detail::charged_counts(net.complex(net.reaction(k).source), states[v].counts)) continue;
      auto it = index.find(detail::state_key(detail::fire(net, states[v].counts, k)));
      if (it == index.end()) throw ValidationError("oracle region is not closed under the reactions");
      adj[v].push_back(it->second);
    }

  std::vector<Reaction> edges;
  for (std::size_t v = 0; v < adj.size(); ++v)
    for (auto w : adj[v]) edges.push_back({v, w});
  for (const auto& cls : strong_linkage_classes(states.size(), edges)) {
    if (!cls.terminal) continue;
    for (auto v : cls.members) {
      bool hit = std::any_of(claimed.begin(), claimed.end(),
                             [&](std::size_t i) { return charged(net.complex(i), states[v]); });
      if (hit) {
        out.holds = false;
        out.counterexamples.push_back(states[v]);
      }
    }
  }
  return out;
}

inline bool verify_guaranteed_extinction(const ReactionNetwork& net, const std::vector<Rational>& witness,
                                         const ComplexSet& claimed, int bound,
                                         std::size_t max_states = 1'000'000) {
  return check_guaranteed_extinction(net, witness, claimed, bound, max_states).holds;
}

// Uses the network's own subconservation witness.
inline bool verify_guaranteed_extinction(const ReactionNetwork& net, const ComplexSet& claimed, int bound,
                                         std::size_t max_states = 1'000'000) {
  auto cons = check_conservativity(net);
  if (!cons.subconservative) throw ValidationError("network is not subconservative");
  return verify_guaranteed_extinction(net, cons.witness, claimed, bound, max_states);
}

inline std::string format_state(const DiscreteState& x) {
  std::string out = "(";
  for (std::size_t s = 0; s < x.counts.size(); ++s) {
    if (s) out += ",";
    out += std::to_string(x.counts[s]);
  }
  return out + ")";
}

// One line per transition: "(a,b) -> (c,d) [reaction k]", k 1-based.
inline void write_state_graph(const StateGraph& g, std::ostream& os) {
  for (const auto& t : g.transitions)
    os << format_state(g.states[t.from]) << " -> " << format_state(g.states[t.to]) << " [reaction "
       << t.reaction + 1 << "]\n";
}

}  // namespace crnext
