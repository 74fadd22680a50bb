#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "crnext/errors.hpp"
#include "crnext/forest.hpp"
#include "crnext/lp.hpp"
#include "crnext/model.hpp"
#include "crnext/oracle.hpp"
#include "crnext/parser.hpp"
#include "crnext/structure.hpp"

namespace crnext {

struct AnalysisConfig {
  Rational epsilon{1, 1000};
  std::size_t forest_budget = 1'000'000;
  int oracle_bound = 6;
  std::size_t max_reactions = 50;
  bool compatibility_lp_mode = false;
  // Solver cross-checks (LP terminal sets, LP forest test, certificate re-verification)
  // plus the reachability oracle on extinction verdicts.
  bool verify = false;
  std::size_t oracle_max_states = 1'000'000;
  std::ostream* lp_dump = nullptr;
  LpOptions lp;
  std::size_t workers = 0;  // batch mode; 0 means hardware concurrency
};

enum class Verdict { GuaranteedExtinction, NoVerdict, NotSubconservative };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::GuaranteedExtinction: return "guaranteed_extinction";
    case Verdict::NoVerdict: return "no_verdict";
    case Verdict::NotSubconservative: return "not_subconservative";
  }
  return "?";
}

struct IterationRecord {
  ComplexSet absorbing;
  std::vector<DomEdge> dom_edges;
  std::size_t candidates = 0;
  std::size_t forests = 0;
  std::optional<ForestCandidate> unbalanced;
  std::optional<ForestCandidate> balanced;      // first balanced forest
  std::optional<BalanceCertificate> certificate;  // maximal support, on `balanced`
  ComplexSet expansion;
};

struct OracleResult {
  int bound = 0;
  bool holds = false;
  std::size_t states = 0;
};

struct AnalysisReport {
  std::string model;
  std::optional<ReactionNetwork> network;
  Verdict verdict = Verdict::NoVerdict;
  ConservativityResult conservativity;
  ComplexSet absorbing_set;
  std::vector<DomEdge> dom_edges;
  std::optional<ForestCandidate> unbalanced_forest;
  EdgeList forest_edges;  // edges of unbalanced_forest, in the dom-CRN's indexing
  ComplexSet transient_complexes;
  std::vector<std::size_t> source_only;
  std::vector<std::size_t> product_only;
  std::size_t iterations = 0;
  std::vector<IterationRecord> trace;
  std::string diagnostic;
  std::optional<OracleResult> oracle;
  double seconds = 0;
};

// Species that occur on the forest's edges only as reactants (source_only) or only as
// products (product_only).
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> classify_species(const ReactionNetwork& net,
                                                                                      const EdgeList& forest) {
  std::vector<std::size_t> source_only, product_only;
  for (std::size_t s = 0; s < net.num_species(); ++s) {
    bool in_source = false, in_product = false;
    for (const auto& e : forest) {
      in_source = in_source || net.complex(e.source).coeffs[s] > 0;
      in_product = in_product || net.complex(e.product).coeffs[s] > 0;
    }
    if (in_source && !in_product) source_only.push_back(s);
    if (in_product && !in_source) product_only.push_back(s);
  }
  return {source_only, product_only};
}

inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> classify_species(const AnalysisReport& report) {
  if (report.verdict != Verdict::GuaranteedExtinction || !report.network) return {};
  return classify_species(*report.network, report.forest_edges);
}

namespace detail {

inline std::optional<BalanceCertificate> balance(const DomCRN& dom, const ComplexSet& y, const ForestCandidate& f,
                                                 const AnalysisConfig& cfg) {
  if (cfg.lp_dump) {
    *cfg.lp_dump << "# balance program, forest {";
    for (std::size_t i = 0; i < f.edges.size(); ++i) *cfg.lp_dump << (i ? "," : "") << f.edges[i] + 1;
    *cfg.lp_dump << "}\n";
    *cfg.lp_dump << to_text(cfg.compatibility_lp_mode ? compat_balance_program(dom, y, f, cfg.epsilon)
                                                      : balance_program(dom, y, f, true).lp);
  }
  if (cfg.compatibility_lp_mode) return is_balanced_compat(dom, y, f, cfg.epsilon, cfg.lp);
  auto cert = is_balanced(dom, y, f, cfg.lp);
  if (cfg.verify && cert && !verify_certificate(dom, y, f, *cert))
    throw Error("balance certificate failed re-verification");
  return cert;
}

inline void cross_check_dom(const ReactionNetwork& net, const DomCRN& dom, const ComplexSet& y,
                            const AnalysisConfig& cfg) {
  if (terminal_complexes_lp(dom, cfg.epsilon, cfg.lp) != terminal_complexes(dom.num_complexes(), dom.edges()))
    throw Error("terminal complexes: graph and LP disagree");
  if (terminal_complexes_lp(net.num_complexes(), net.reactions(), cfg.epsilon, cfg.lp) !=
      terminal_complexes(net.num_complexes(), net.reactions()))
    throw Error("terminal complexes: graph and LP disagree");
  if (!is_admissible(dom, y)) throw Error("absorbing set is not admissible");
}

}  // namespace detail

inline AnalysisReport analyze(const ReactionNetwork& net, const AnalysisConfig& cfg = {}, std::string model = "") {
  const auto start = std::chrono::steady_clock::now();
  AnalysisReport rep;
  rep.model = std::move(model);
  rep.network = net;
  auto finish = [&]() -> AnalysisReport {
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return std::move(rep);
  };

  rep.conservativity = check_conservativity(net, cfg.lp);
  if (!rep.conservativity.subconservative) {
    rep.verdict = Verdict::NotSubconservative;
    return finish();
  }

  const auto dstar = domination_set(net);
  auto adm = find_admissible_dom(net, {}, dstar);
  const ComplexSet everything = net.all_complexes();
  rep.verdict = Verdict::NoVerdict;

  while (true) {
    rep.absorbing_set = adm.absorbing;
    rep.dom_edges = adm.dom_edges;
    if (adm.absorbing == everything) {
      if (rep.diagnostic.empty()) rep.diagnostic = "absorbing set covers every complex";
      break;
    }
    ++rep.iterations;
    IterationRecord rec{adm.absorbing, adm.dom_edges, 0, 0, {}, {}, {}, {}};
    DomCRN dom(net, adm.dom_edges);
    if (cfg.verify) detail::cross_check_dom(net, dom, adm.absorbing, cfg);

    CandidateEnumerator it(dom, adm.absorbing, cfg.forest_budget);
    try {
      while (auto cand = it.next()) {
        ++rec.candidates;
        bool forest = is_exterior_forest(dom, adm.absorbing, *cand);
        if (cfg.verify && forest != is_exterior_forest_lp(dom, adm.absorbing, *cand, cfg.epsilon, cfg.lp))
          throw Error("exterior forest: graph and LP disagree");
        if (!forest) continue;
        ++rec.forests;
        auto cert = detail::balance(dom, adm.absorbing, *cand, cfg);
        if (!cert) {
          rec.unbalanced = *cand;
          break;
        }
        if (!rec.balanced) rec.balanced = *cand;
      }
    } catch (const BudgetExceeded& e) {
      rep.diagnostic = e.what();
      rep.trace.push_back(std::move(rec));
      break;
    }

    if (rec.unbalanced) {
      rep.verdict = Verdict::GuaranteedExtinction;
      rep.unbalanced_forest = rec.unbalanced;
      for (auto k : rec.unbalanced->edges) rep.forest_edges.push_back(dom.edges()[k]);
      for (std::size_t i = 0; i < net.num_complexes(); ++i)
        if (!adm.absorbing.contains(i)) rep.transient_complexes.insert(i);
      rep.trace.push_back(std::move(rec));
      break;
    }
    if (!rec.balanced) {
      rep.diagnostic = "no exterior forest";
      rep.trace.push_back(std::move(rec));
      break;
    }

    rec.certificate = cfg.compatibility_lp_mode
                          ? is_balanced_compat(dom, adm.absorbing, *rec.balanced, cfg.epsilon, cfg.lp)
                          : maximal_support_alpha(dom, adm.absorbing, *rec.balanced, cfg.lp);
    if (rec.certificate) rec.expansion = expand_absorbing_set(dom, *rec.balanced, *rec.certificate);
    ComplexSet grown = adm.absorbing;
    grown.insert(rec.expansion.begin(), rec.expansion.end());
    const bool stuck = grown == adm.absorbing;
    rep.trace.push_back(std::move(rec));
    if (stuck) {
      rep.diagnostic = "expansion did not grow the absorbing set";
      break;
    }
    adm = find_admissible_dom(net, grown, dstar);
  }

  if (rep.verdict == Verdict::GuaranteedExtinction) {
    std::tie(rep.source_only, rep.product_only) = classify_species(net, rep.forest_edges);
    if (cfg.verify && cfg.oracle_bound > 0) {
      auto chk = check_guaranteed_extinction(net, rep.conservativity.witness, rep.transient_complexes,
                                             cfg.oracle_bound, cfg.oracle_max_states);
      rep.oracle = OracleResult{cfg.oracle_bound, chk.holds, chk.states};
    }
  }
  return finish();
}

namespace detail {

inline std::string join_complexes(const ReactionNetwork& net, const ComplexSet& set) {
  std::string out;
  for (auto i : set) out += (out.empty() ? "" : ", ") + render_complex(net, i);
  return out;
}

inline std::string join_edges(const ReactionNetwork& net, const EdgeList& edges) {
  std::string out;
  for (const auto& e : edges) out += (out.empty() ? "" : "; ") + render_edge(net, e);
  return out;
}

inline std::string join_species(const ReactionNetwork& net, const std::vector<std::size_t>& species) {
  std::string out;
  for (auto s : species) out += (out.empty() ? "" : ", ") + net.species()[s].name;
  return out;
}

inline std::string key(const std::string& k, const std::string& v) { return v.empty() ? k + ":\n" : k + ": " + v + "\n"; }

}  // namespace detail

// Line-oriented "key: value" text. Contains no timings, so identical inputs give
// identical bytes.
inline std::string format_report(const AnalysisReport& rep) {
  if (!rep.network) throw ValidationError("report has no network");
  const auto& net = *rep.network;
  std::string out;
  out += detail::key("model", rep.model);
  out += detail::key("verdict", to_string(rep.verdict));
  out += detail::key("conservative", rep.conservativity.conservative ? "true" : "false");
  out += detail::key("subconservative", rep.conservativity.subconservative ? "true" : "false");
  if (rep.verdict == Verdict::NotSubconservative) return out;
  out += detail::key("absorbing_set", detail::join_complexes(net, rep.absorbing_set));
  EdgeList dom;
  for (const auto& d : rep.dom_edges) dom.push_back(d.as_edge());
  out += detail::key("dom_edges", detail::join_edges(net, dom));
  if (rep.verdict == Verdict::GuaranteedExtinction) {
    out += detail::key("unbalanced_forest", detail::join_edges(net, rep.forest_edges));
    out += detail::key("transient_complexes", detail::join_complexes(net, rep.transient_complexes));
    out += detail::key("transient_complexes_maximal", "false");
    out += detail::key("source_only", detail::join_species(net, rep.source_only));
    out += detail::key("product_only", detail::join_species(net, rep.product_only));
  } else if (!rep.diagnostic.empty()) {
    out += detail::key("diagnostic", rep.diagnostic);
  }
  out += detail::key("iterations", std::to_string(rep.iterations));
  return out;
}

inline void write_report(const AnalysisReport& rep, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write " + path.string());
  os << format_report(rep);
  if (!os.flush()) throw IoError("write failed: " + path.string());
}

struct BatchEntry {
  std::string name;
  std::string origin;
  std::optional<AnalysisReport> report;
  std::string error;  // parse or analysis failure
  bool skipped = false;
};

struct BatchSummary {
  std::vector<BatchEntry> entries;  // file-name order
  std::size_t models = 0;           // analyzed successfully
  std::size_t failures = 0;
  std::size_t skipped = 0;
  std::size_t conservative = 0;
  std::size_t subconservative = 0;
  std::size_t not_subconservative = 0;
  std::size_t extinct = 0;
  std::size_t no_verdict = 0;
  std::size_t with_source_only = 0;
  std::size_t with_product_only = 0;
  std::size_t with_both = 0;
};

// Analyzes every .crn file in `dir` on a bounded pool of worker threads. Models with
// more than cfg.max_reactions irreversible reactions are skipped; failures are recorded
// per model.
inline BatchSummary run_batch(const std::filesystem::path& dir, const AnalysisConfig& cfg = {}) {
  BatchLoad load = load_batch(dir);
  BatchSummary sum;
  for (auto& f : load.failures) {
    std::string name = std::filesystem::path(f.origin).stem().string();
    sum.entries.push_back({name, f.origin, std::nullopt, f.message, false});
  }
  const std::size_t first_doc = sum.entries.size();
  for (const auto& d : load.documents) sum.entries.push_back({d.name, d.origin, std::nullopt, "", false});

  AnalysisConfig local = cfg;
  local.lp_dump = nullptr;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < load.documents.size();) {
      auto& entry = sum.entries[first_doc + i];
      try {
        auto net = parse_document(load.documents[i]);
        if (net.num_reactions() > local.max_reactions) {
          entry.skipped = true;
          continue;
        }
        entry.report = analyze(net, local, entry.name);
      } catch (const std::exception& e) {
        entry.error = e.what();
      }
    }
  };
  std::size_t workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(1, load.documents.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::sort(sum.entries.begin(), sum.entries.end(), [](const BatchEntry& a, const BatchEntry& b) {
    return std::filesystem::path(a.origin).filename() < std::filesystem::path(b.origin).filename();
  });
  for (const auto& e : sum.entries) {
    if (e.skipped) {
      ++sum.skipped;
      continue;
    }
    if (!e.report) {
      ++sum.failures;
      continue;
    }
    const auto& r = *e.report;
    ++sum.models;
    sum.conservative += r.conservativity.conservative;
    sum.subconservative += r.conservativity.subconservative;
    sum.not_subconservative += r.verdict == Verdict::NotSubconservative;
    sum.no_verdict += r.verdict == Verdict::NoVerdict;
    if (r.verdict == Verdict::GuaranteedExtinction) {
      ++sum.extinct;
      sum.with_source_only += !r.source_only.empty();
      sum.with_product_only += !r.product_only.empty();
      sum.with_both += !r.source_only.empty() && !r.product_only.empty();
    }
  }
  return sum;
}

inline std::string format_summary(const BatchSummary& s) {
  std::ostringstream os;
  for (const auto& e : s.entries) {
    os << e.name << ": ";
    if (e.skipped) os << "skipped";
    else if (!e.report) os << "error: " << e.error;
    else os << to_string(e.report->verdict);
    os << "\n";
  }
  os << "models: " << s.models << "\nfailures: " << s.failures << "\nskipped: " << s.skipped
     << "\nconservative: " << s.conservative << "\nsubconservative: " << s.subconservative
     << "\nnot_subconservative: " << s.not_subconservative << "\nextinct: " << s.extinct
     << "\nno_verdict: " << s.no_verdict << "\nsource_only: " << s.with_source_only
     << "\nproduct_only: " << s.with_product_only << "\nboth: " << s.with_both << "\n";
  return os.str();
}

}  // namespace crnext
