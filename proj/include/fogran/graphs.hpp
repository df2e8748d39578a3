#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fogran {

enum class Semantics {
  compatibility,  // edges allow coexistence, solutions are cliques
  conflict,       // edges forbid coexistence, solutions are independent sets
};

using VertexSet = std::vector<std::size_t>;

// Weights and adjacency without payloads. Oracles and checkers work on this part.
class GraphCore {
 public:
  explicit GraphCore(Semantics s) : semantics_(s) {}
  virtual ~GraphCore() = default;

  Semantics semantics() const { return semantics_; }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }
  double weight(std::size_t v) const { return weights_[v]; }
  void set_weight(std::size_t v, double w) {
    check_weight(w);
    weights_[v] = w;
  }

  void add_edge(std::size_t a, std::size_t b) {
    if (a == b) throw std::invalid_argument("graph: self edge");
    if (a >= size() || b >= size()) throw std::out_of_range("graph: vertex id");
    set_bit(a, b);
    set_bit(b, a);
  }
  bool adjacent(std::size_t a, std::size_t b) const {
    return (rows_[a][b / 64] >> (b % 64)) & 1u;
  }
  std::size_t degree(std::size_t v) const {
    std::size_t d = 0;
    for (std::uint64_t w : rows_[v]) d += static_cast<std::size_t>(std::popcount(w));
    return d;
  }
  std::size_t num_edges() const {
    std::size_t e = 0;
    for (std::size_t v = 0; v < size(); ++v) e += degree(v);
    return e / 2;
  }

  template <class Fn>
  void for_each_neighbor(std::size_t v, Fn&& fn) const {
    const auto& row = rows_[v];
    for (std::size_t w = 0; w < row.size(); ++w)
      for (std::uint64_t bits = row[w]; bits; bits &= bits - 1)
        fn(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
  }

 protected:
  std::size_t add_core_vertex(double w) {
    check_weight(w);
    weights_.push_back(w);
    const std::size_t words = (weights_.size() + 63) / 64;
    for (auto& row : rows_) row.resize(words, 0);
    rows_.emplace_back(words, 0);
    return weights_.size() - 1;
  }

 private:
  static void check_weight(double w) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("graph: weight must be finite and >= 0");
  }
  void set_bit(std::size_t a, std::size_t b) { rows_[a][b / 64] |= std::uint64_t{1} << (b % 64); }

  Semantics semantics_;
  std::vector<double> weights_;
  std::vector<std::vector<std::uint64_t>> rows_;
};

template <class Payload>
class WeightedGraph : public GraphCore {
 public:
  explicit WeightedGraph(Semantics s) : GraphCore(s) {}

  std::size_t add_vertex(Payload p, double weight) {
    payloads_.push_back(std::move(p));
    return add_core_vertex(weight);
  }
  const Payload& payload(std::size_t v) const { return payloads_[v]; }
  const std::vector<Payload>& payloads() const { return payloads_; }

 private:
  std::vector<Payload> payloads_;
};

// ---- validity helpers --------------------------------------------------------

inline double total_weight(const GraphCore& g, std::span<const std::size_t> vs) {
  double t = 0.0;
  for (std::size_t v : vs) t += g.weight(v);
  return t;
}

inline bool is_clique(const GraphCore& g, std::span<const std::size_t> vs) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (vs[i] == vs[j] || !g.adjacent(vs[i], vs[j])) return false;
  return true;
}

inline bool is_independent_set(const GraphCore& g, std::span<const std::size_t> vs) {
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j)
      if (vs[i] == vs[j] || g.adjacent(vs[i], vs[j])) return false;
  return true;
}

inline bool is_maximal_clique(const GraphCore& g, std::span<const std::size_t> vs) {
  if (!is_clique(g, vs)) return false;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (std::find(vs.begin(), vs.end(), c) != vs.end()) continue;
    if (std::all_of(vs.begin(), vs.end(), [&](std::size_t v) { return g.adjacent(v, c); })) return false;
  }
  return true;
}

inline bool is_maximal_independent_set(const GraphCore& g, std::span<const std::size_t> vs) {
  if (!is_independent_set(g, vs)) return false;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (std::find(vs.begin(), vs.end(), c) != vs.end()) continue;
    if (std::none_of(vs.begin(), vs.end(), [&](std::size_t v) { return g.adjacent(v, c); })) return false;
  }
  return true;
}

// ---- greedy searches ---------------------------------------------------------

// Score of `candidate` given the vertices picked so far.
using ReweighFn = std::function<double(std::span<const std::size_t> selected, std::size_t candidate)>;

inline VertexSet greedy_max_weight_clique(const GraphCore& g, const ReweighFn& reweigh = {}) {
  if (g.semantics() != Semantics::compatibility)
    throw std::invalid_argument("greedy_max_weight_clique: graph is not a compatibility graph");
  VertexSet selected;
  std::vector<std::size_t> cand(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) cand[v] = v;
  while (!cand.empty()) {
    std::size_t best = cand.front();
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t v : cand) {
      const double s = reweigh ? reweigh(selected, v) : g.weight(v);
      if (s > best_score) {  // candidates are in increasing id order
        best_score = s;
        best = v;
      }
    }
    selected.push_back(best);
    std::erase_if(cand, [&](std::size_t v) { return v == best || !g.adjacent(best, v); });
  }
  return selected;
}

enum class WeightMode { original, modified };

// Picks one vertex among the surviving candidates (ids in increasing order).
using PickFn = std::function<std::size_t(std::span<const std::size_t> candidates)>;

inline VertexSet greedy_independent_set_by(const GraphCore& g, const PickFn& pick) {
  if (g.semantics() != Semantics::conflict)
    throw std::invalid_argument("greedy independent set: graph is not a conflict graph");
  VertexSet selected;
  std::vector<std::size_t> cand(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) cand[v] = v;
  while (!cand.empty()) {
    const std::size_t best = pick(cand);
    selected.push_back(best);
    std::erase_if(cand, [&](std::size_t v) { return v == best || g.adjacent(best, v); });
  }
  return selected;
}

// Modified mode scores v by w(v) * (sum of w over surviving vertices not adjacent to v,
// v included). Ties go to the larger original weight, then the lower id.
inline VertexSet greedy_max_weight_independent_set(const GraphCore& g, WeightMode mode = WeightMode::modified) {
  std::vector<char> alive(g.size(), 1);
  auto pick = [&](std::span<const std::size_t> cand) {
    double alive_total = 0.0;
    if (mode == WeightMode::modified) {
      std::fill(alive.begin(), alive.end(), 0);
      for (std::size_t v : cand) {
        alive[v] = 1;
        alive_total += g.weight(v);
      }
    }
    std::size_t best = cand.front();
    double best_score = -1.0, best_w = -1.0;
    for (std::size_t v : cand) {
      double score = g.weight(v);
      if (mode == WeightMode::modified) {
        double blocked = 0.0;
        g.for_each_neighbor(v, [&](std::size_t u) {
          if (alive[u]) blocked += g.weight(u);
        });
        score = g.weight(v) * (alive_total - blocked);
      }
      if (score > best_score || (score == best_score && g.weight(v) > best_w)) {
        best = v;
        best_score = score;
        best_w = g.weight(v);
      }
    }
    return best;
  };
  return greedy_independent_set_by(g, pick);
}

// ---- exhaustive oracles ------------------------------------------------------

inline constexpr std::size_t kOracleVertexCap = 20;

namespace detail {
// Max-weight subset in which every pair satisfies `ok`. Plain include/exclude recursion.
template <class PairOk>
VertexSet exhaustive_best(const GraphCore& g, PairOk ok, std::size_t cap) {
  const std::size_t n = g.size();
  if (n > cap) throw std::length_error("exhaustive oracle: graph has " + std::to_string(n) + " vertices, cap is " +
                                       std::to_string(cap));
  std::vector<std::uint32_t> compat(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b && ok(a, b)) compat[a] |= std::uint32_t{1} << b;
  std::uint32_t best_set = 0;
  double best_w = 0.0;
  std::function<void(std::size_t, std::uint32_t, std::uint32_t, double)> rec = [&](std::size_t i, std::uint32_t chosen,
                                                                                    std::uint32_t allowed, double w) {
    if (w > best_w) {
      best_w = w;
      best_set = chosen;
    }
    for (std::size_t v = i; v < n; ++v)
      if ((allowed >> v) & 1u) rec(v + 1, chosen | (std::uint32_t{1} << v), allowed & compat[v], w + g.weight(v));
  };
  rec(0, 0, n == 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1), 0.0);
  VertexSet out;
  for (std::size_t v = 0; v < n; ++v)
    if ((best_set >> v) & 1u) out.push_back(v);
  return out;
}
}  // namespace detail

inline VertexSet exhaustive_clique_oracle(const GraphCore& g, std::size_t cap = kOracleVertexCap) {
  return detail::exhaustive_best(g, [&](std::size_t a, std::size_t b) { return g.adjacent(a, b); }, cap);
}

inline VertexSet exhaustive_is_oracle(const GraphCore& g, std::size_t cap = kOracleVertexCap) {
  return detail::exhaustive_best(g, [&](std::size_t a, std::size_t b) { return !g.adjacent(a, b); }, cap);
}

// ---- debug output ------------------------------------------------------------

template <class Payload, class LabelFn>
void write_dot(std::ostream& os, const WeightedGraph<Payload>& g, const std::string& name, LabelFn&& label,
               std::span<const std::size_t> highlight = {}) {
  os << "graph " << name << " {\n";
  os << "  // " << (g.semantics() == Semantics::compatibility ? "compatibility" : "conflict") << " graph, "
     << g.size() << " vertices, " << g.num_edges() << " edges\n";
  for (std::size_t v = 0; v < g.size(); ++v) {
    os << "  v" << v << " [label=\"" << label(g.payload(v)) << "\\nw=" << g.weight(v) << "\"";
    if (std::find(highlight.begin(), highlight.end(), v) != highlight.end()) os << ", color=red";
    os << "];\n";
  }
  for (std::size_t a = 0; a < g.size(); ++a)
    g.for_each_neighbor(a, [&](std::size_t b) {
      if (a < b) os << "  v" << a << " -- v" << b << ";\n";
    });
  os << "}\n";
}

}  // namespace fogran
