// Multigraphs with loops: exponent vectors, canonical isomorphism classes,
// sub-multigraph streams, and class catalogs.
//
// An exponent vector alpha over the entries {i <= j} of a symmetric matrix is
// read as a multigraph on [n]: alpha_ij parallel edges between i and j, and
// alpha_ii loops at i. Everything the r-value machinery needs depends on
// alpha only through its isomorphism class with isolated vertices removed.
#pragma once

#include "lowdeg/exact.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace lowdeg {

inline constexpr int kSubgraphEdgeLimit = 12;
inline constexpr int kCatalogEdgeLimit = 7;
inline constexpr int kComponentVertexLimit = 12;

/// Edge {u, w} with u <= w (loop when u == w) carrying `mult` parallel copies.
struct Edge {
  int u = 0;
  int w = 0;
  int mult = 1;
  auto operator<=>(const Edge&) const = default;
};

class ExponentVector {
 public:
  ExponentVector() = default;
  explicit ExponentVector(int n_vertices) : n_(n_vertices) {}
  ExponentVector(int n_vertices, std::initializer_list<Edge> edges) : n_(n_vertices) {
    for (const auto& e : edges) add(e.u, e.w, e.mult);
  }

  /// Adds `mult` copies of {i, j}; grows the vertex count when needed.
  void add(int i, int j, int mult = 1) {
    if (i < 0 || j < 0 || mult < 0) throw std::invalid_argument("ExponentVector::add: negative argument");
    if (mult == 0) return;
    if (i > j) std::swap(i, j);
    n_ = std::max(n_, j + 1);
    Edge key{i, j, 0};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key, pair_less);
    if (it != edges_.end() && it->u == i && it->w == j)
      it->mult += mult;
    else
      edges_.insert(it, Edge{i, j, mult});
  }

  int multiplicity(int i, int j) const {
    if (i > j) std::swap(i, j);
    Edge key{i, j, 0};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key, pair_less);
    return (it != edges_.end() && it->u == i && it->w == j) ? it->mult : 0;
  }

  int n_vertices() const { return n_; }
  int total_degree() const {
    int d = 0;
    for (const auto& e : edges_) d += e.mult;
    return d;
  }
  bool empty() const { return edges_.empty(); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool operator==(const ExponentVector& o) const { return edges_ == o.edges_; }
  auto operator<=>(const ExponentVector& o) const { return edges_ <=> o.edges_; }

 private:
  static bool pair_less(const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.w < b.w; }

  int n_ = 0;
  std::vector<Edge> edges_;  // sorted by (u, w), mult > 0
};

/// alpha - beta for beta <= alpha componentwise.
inline ExponentVector difference(const ExponentVector& alpha, const ExponentVector& beta) {
  ExponentVector out(alpha.n_vertices());
  for (const auto& e : alpha.edges()) {
    const int rest = e.mult - beta.multiplicity(e.u, e.w);
    if (rest < 0) throw std::invalid_argument("difference: beta is not <= alpha");
    out.add(e.u, e.w, rest);
  }
  for (const auto& e : beta.edges())
    if (alpha.multiplicity(e.u, e.w) == 0) throw std::invalid_argument("difference: beta is not <= alpha");
  return out;
}

/// Vertex range and edge count of one connected component in canonical layout.
struct ComponentInfo {
  int first = 0;
  int size = 0;
  int d = 0;
};

class MultigraphClass;
MultigraphClass canonicalize(const ExponentVector& g);

/// Canonical isomorphism class of a multigraph with loops, isolated vertices
/// removed. Components occupy contiguous vertex ranges in canonical order.
class MultigraphClass {
 public:
  MultigraphClass() = default;

  int v() const { return v_; }
  int d() const { return d_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Integer& aut_count() const { return aut_; }
  const std::vector<ComponentInfo>& component_info() const { return comps_; }
  int component_count() const { return static_cast<int>(comps_.size()); }
  bool empty() const { return d_ == 0; }
  bool is_connected() const { return comps_.size() == 1; }

  /// d == v - (#components): no cycles, where a loop or a double edge counts as one.
  bool is_forest() const { return d_ == v_ - component_count(); }

  /// Every component has at least as many edges as vertices.
  bool all_components_cyclic() const {
    return std::all_of(comps_.begin(), comps_.end(), [](const ComponentInfo& c) { return c.d >= c.size; });
  }

  bool has_loops() const {
    return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.u == e.w; });
  }
  bool has_multi_edges() const {
    return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.mult > 1; });
  }
  bool is_simple() const { return !has_loops() && !has_multi_edges(); }

  std::vector<MultigraphClass> components() const {
    std::vector<MultigraphClass> out;
    if (comps_.size() == 1) {
      out.push_back(*this);
      return out;
    }
    for (const auto& c : comps_) {
      ExponentVector ev(c.size);
      for (const auto& e : edges_)
        if (e.u >= c.first && e.u < c.first + c.size) ev.add(e.u - c.first, e.w - c.first, e.mult);
      out.push_back(canonicalize(ev));
    }
    return out;
  }

  ExponentVector to_exponent_vector() const {
    ExponentVector ev(v_);
    for (const auto& e : edges_) ev.add(e.u, e.w, e.mult);
    return ev;
  }

  /// "u-w:m,..." in canonical order; "-" for the empty class.
  std::string edge_string() const {
    if (edges_.empty()) return "-";
    std::ostringstream os;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (i) os << ',';
      os << edges_[i].u << '-' << edges_[i].w << ':' << edges_[i].mult;
    }
    return os.str();
  }

  bool operator==(const MultigraphClass& o) const { return v_ == o.v_ && edges_ == o.edges_; }
  std::strong_ordering operator<=>(const MultigraphClass& o) const {
    if (auto c = d_ <=> o.d_; c != 0) return c;
    if (auto c = v_ <=> o.v_; c != 0) return c;
    return edges_ <=> o.edges_;
  }

 private:
  friend MultigraphClass canonicalize(const ExponentVector& g);

  int v_ = 0;
  int d_ = 0;
  std::vector<Edge> edges_;
  Integer aut_ = 1;
  std::vector<ComponentInfo> comps_;
};

struct MultigraphClassHash {
  std::size_t operator()(const MultigraphClass& g) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ static_cast<std::uint64_t>(g.v());
    for (const auto& e : g.edges()) {
      h = (h ^ static_cast<std::uint64_t>(e.u)) * 0x100000001b3ULL;
      h = (h ^ static_cast<std::uint64_t>(e.w)) * 0x100000001b3ULL;
      h = (h ^ static_cast<std::uint64_t>(e.mult)) * 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

namespace detail {

using AdjMatrix = std::vector<std::vector<int>>;

// Canonical labeling of one connected component: color refinement to split
// vertices into invariant cells, then branch-and-bound over orderings that
// respect the cells, minimizing the column-major upper-triangle code. The
// number of orderings attaining the minimum is the automorphism count.
struct ComponentCanon {
  std::vector<int> code;  // size k(k+1)/2
  std::vector<int> order;  // canonical position -> local vertex
  Integer aut = 1;
};

inline std::vector<int> refine_colors(const AdjMatrix& a) {
  const int k = static_cast<int>(a.size());
  std::vector<std::vector<long>> sig(k);
  for (int i = 0; i < k; ++i) {
    long deg = 0;
    for (int j = 0; j < k; ++j)
      if (j != i) deg += a[i][j];
    sig[i] = {a[i][i], deg};
  }
  auto rank = [&](const std::vector<std::vector<long>>& s) {
    std::vector<std::vector<long>> uniq = s;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    std::vector<int> col(k);
    for (int i = 0; i < k; ++i)
      col[i] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), s[i]) - uniq.begin());
    return std::make_pair(col, static_cast<int>(uniq.size()));
  };
  auto [color, n_colors] = rank(sig);
  while (true) {
    for (int i = 0; i < k; ++i) {
      std::vector<std::pair<long, long>> nb;
      for (int j = 0; j < k; ++j)
        if (j != i && a[i][j] > 0) nb.emplace_back(color[j], a[i][j]);
      std::sort(nb.begin(), nb.end());
      std::vector<long> s{color[i]};
      for (auto [c, m] : nb) {
        s.push_back(c);
        s.push_back(m);
      }
      sig[i] = std::move(s);
    }
    auto [next, next_n] = rank(sig);
    color = std::move(next);
    if (next_n == n_colors) break;
    n_colors = next_n;
  }
  return color;
}

inline ComponentCanon canonical_component(const AdjMatrix& a) {
  const int k = static_cast<int>(a.size());
  if (k > kComponentVertexLimit)
    throw size_limit_error("canonicalize: component with " + std::to_string(k) + " vertices exceeds limit " +
                           std::to_string(kComponentVertexLimit));
  const std::vector<int> color = refine_colors(a);
  std::vector<int> by_color(k);
  std::iota(by_color.begin(), by_color.end(), 0);
  std::stable_sort(by_color.begin(), by_color.end(), [&](int x, int y) { return color[x] < color[y]; });
  std::vector<int> cell_of_pos(k);
  for (int p = 0; p < k; ++p) cell_of_pos[p] = color[by_color[p]];

  const int code_len = k * (k + 1) / 2;
  ComponentCanon best;
  std::vector<int> cur(code_len), order(k);
  std::vector<char> used(k, 0);
  bool have_best = false;
  long ties = 0;

  auto offset = [](int p) { return p * (p + 1) / 2; };
  std::function<void(int)> search = [&](int p) {
    if (p == k) {
      if (!have_best || cur < best.code) {
        best.code = cur;
        best.order = order;
        have_best = true;
        ties = 1;
      } else if (cur == best.code) {
        ++ties;
      }
      return;
    }
    const int end = offset(p + 1);
    for (int u = 0; u < k; ++u) {
      if (used[u] || color[u] != cell_of_pos[p]) continue;
      order[p] = u;
      for (int i = 0; i <= p; ++i) cur[offset(p) + i] = a[order[i]][u];
      if (have_best &&
          std::lexicographical_compare(best.code.begin(), best.code.begin() + end, cur.begin(), cur.begin() + end))
        continue;
      used[u] = 1;
      search(p + 1);
      used[u] = 0;
    }
  };
  search(0);
  best.aut = Integer(static_cast<unsigned long>(ties));
  return best;
}

}  // namespace detail

inline MultigraphClass canonicalize(const ExponentVector& g) {
  // Compress to non-isolated vertices.
  std::vector<int> touched;
  for (const auto& e : g.edges()) {
    touched.push_back(e.u);
    touched.push_back(e.w);
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  const int k = static_cast<int>(touched.size());
  auto local = [&](int x) { return static_cast<int>(std::lower_bound(touched.begin(), touched.end(), x) - touched.begin()); };

  std::vector<int> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& e : g.edges()) parent[find(local(e.u))] = find(local(e.w));

  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < k; ++i) groups[find(i)].push_back(i);

  struct Comp {
    std::vector<int> verts;  // local ids
    detail::AdjMatrix adj;
    detail::ComponentCanon canon;
    int d = 0;
  };
  std::vector<Comp> comps;
  for (auto& [root, verts] : groups) {
    Comp c;
    c.verts = verts;
    const int s = static_cast<int>(verts.size());
    c.adj.assign(s, std::vector<int>(s, 0));
    comps.push_back(std::move(c));
  }
  std::vector<std::pair<int, int>> where(k);  // local id -> (component, index)
  for (int ci = 0; ci < static_cast<int>(comps.size()); ++ci)
    for (int idx = 0; idx < static_cast<int>(comps[ci].verts.size()); ++idx) where[comps[ci].verts[idx]] = {ci, idx};
  for (const auto& e : g.edges()) {
    auto [cu, iu] = where[local(e.u)];
    auto [cw, iw] = where[local(e.w)];
    (void)cw;
    comps[cu].adj[iu][iw] = e.mult;
    comps[cu].adj[iw][iu] = e.mult;
    comps[cu].d += e.mult;
  }
  for (auto& c : comps) c.canon = detail::canonical_component(c.adj);

  std::sort(comps.begin(), comps.end(), [](const Comp& x, const Comp& y) {
    if (x.verts.size() != y.verts.size()) return x.verts.size() < y.verts.size();
    return x.canon.code < y.canon.code;
  });

  MultigraphClass out;
  out.aut_ = 1;
  int offset = 0;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    const auto& c = comps[ci];
    const int s = static_cast<int>(c.verts.size());
    for (int q = 0; q < s; ++q)
      for (int p = 0; p <= q; ++p) {
        const int m = c.adj[c.canon.order[p]][c.canon.order[q]];
        if (m > 0) out.edges_.push_back(Edge{offset + p, offset + q, m});
      }
    out.comps_.push_back(ComponentInfo{offset, s, c.d});
    out.aut_ *= c.canon.aut;
    offset += s;
    out.d_ += c.d;
  }
  // Interchanging identical components.
  for (std::size_t i = 0; i < comps.size();) {
    std::size_t j = i;
    while (j < comps.size() && comps[j].verts.size() == comps[i].verts.size() && comps[j].canon.code == comps[i].canon.code)
      ++j;
    out.aut_ *= factorial(static_cast<unsigned long>(j - i));
    i = j;
  }
  out.v_ = offset;
  std::sort(out.edges_.begin(), out.edges_.end());
  return out;
}

inline MultigraphClass canonicalize(const MultigraphClass& g) { return canonicalize(g.to_exponent_vector()); }

inline MultigraphClass disjoint_union(const MultigraphClass& g1, const MultigraphClass& g2) {
  ExponentVector ev(g1.v() + g2.v());
  for (const auto& e : g1.edges()) ev.add(e.u, e.w, e.mult);
  for (const auto& e : g2.edges()) ev.add(e.u + g1.v(), e.w + g1.v(), e.mult);
  return canonicalize(ev);
}

/// Visits every beta <= alpha (componentwise) exactly once together with
/// binom(alpha, beta); summing f(beta) * mult reproduces the sum over
/// edge-labeled subgraphs.
template <class Visitor>
void for_each_sub_multigraph(const ExponentVector& alpha, Visitor&& visit, int edge_limit = kSubgraphEdgeLimit) {
  const int d = alpha.total_degree();
  if (d > edge_limit)
    throw size_limit_error("sub_multigraphs: |alpha| = " + std::to_string(d) + " exceeds limit " +
                           std::to_string(edge_limit));
  const auto& edges = alpha.edges();
  const std::size_t m = edges.size();
  std::vector<int> take(m, 0);
  while (true) {
    ExponentVector beta(alpha.n_vertices());
    Integer mult = 1;
    for (std::size_t i = 0; i < m; ++i) {
      beta.add(edges[i].u, edges[i].w, take[i]);
      mult *= binomial(static_cast<unsigned long>(edges[i].mult), static_cast<unsigned long>(take[i]));
    }
    visit(static_cast<const ExponentVector&>(beta), static_cast<const Integer&>(mult));
    std::size_t i = 0;
    while (i < m && take[i] == edges[i].mult) take[i++] = 0;
    if (i == m) break;
    ++take[i];
  }
}

inline std::vector<std::pair<ExponentVector, Integer>> sub_multigraphs(const ExponentVector& alpha,
                                                                      int edge_limit = kSubgraphEdgeLimit) {
  std::vector<std::pair<ExponentVector, Integer>> out;
  for_each_sub_multigraph(
      alpha, [&](const ExponentVector& b, const Integer& m) { out.emplace_back(b, m); }, edge_limit);
  return out;
}

/// Number of distinct labeled copies of g on vertex set [n]: n^(v) / |Aut(g)|.
inline Integer labeled_copy_count(const MultigraphClass& g, const Integer& n) {
  if (n < g.v()) return 0;
  Integer ff = falling_factorial(n, static_cast<unsigned long>(g.v()));
  Integer out;
  mpz_divexact(out.get_mpz_t(), ff.get_mpz_t(), g.aut_count().get_mpz_t());
  return out;
}

/// alpha! = product of factorials of the edge multiplicities.
inline Integer alpha_factorial(const MultigraphClass& g) {
  Integer out = 1;
  for (const auto& e : g.edges()) out *= factorial(static_cast<unsigned long>(e.mult));
  return out;
}

struct CatalogOptions {
  int d_max = 0;
  bool allow_loops = true;
  bool require_cyclic_components = false;
  bool allow_multi_edges = true;
};

/// Complete duplicate-free list of classes with 1 <= d <= d_max satisfying
/// the filters, sorted by (d, v, canonical edges) so each (d, v) group is
/// contiguous.
struct ClassCatalog {
  int d_max = 0;
  bool allow_loops = true;
  bool require_cyclic_components = false;
  bool allow_multi_edges = true;
  std::vector<MultigraphClass> classes;

  CatalogOptions options() const { return {d_max, allow_loops, require_cyclic_components, allow_multi_edges}; }

  std::span<const MultigraphClass> group(int d, int v) const {
    auto lo = std::partition_point(classes.begin(), classes.end(),
                                   [&](const MultigraphClass& g) { return std::pair(g.d(), g.v()) < std::pair(d, v); });
    auto hi = std::partition_point(lo, classes.end(),
                                   [&](const MultigraphClass& g) { return std::pair(g.d(), g.v()) <= std::pair(d, v); });
    return {lo, hi};
  }

  std::span<const MultigraphClass> with_edges(int d) const {
    auto lo = std::partition_point(classes.begin(), classes.end(), [&](const MultigraphClass& g) { return g.d() < d; });
    auto hi = std::partition_point(lo, classes.end(), [&](const MultigraphClass& g) { return g.d() <= d; });
    return {lo, hi};
  }
};

/// Generate-and-canonicalize: every class with d edges arises by adding one
/// edge to a class with d - 1 edges. Filters apply to the output only, since
/// cyclic classes grow out of forests. Parents are split across `threads`
/// workers; the merged set does not depend on the split.
inline ClassCatalog enumerate_classes(const CatalogOptions& opt, unsigned threads = 1) {
  if (opt.d_max > kCatalogEdgeLimit)
    throw size_limit_error("enumerate_classes: d_max = " + std::to_string(opt.d_max) + " exceeds limit " +
                           std::to_string(kCatalogEdgeLimit));
  if (opt.d_max < 0) throw std::invalid_argument("enumerate_classes: negative d_max");
  threads = std::max(1u, threads);

  std::vector<MultigraphClass> level{MultigraphClass{}};
  ClassCatalog cat{opt.d_max, opt.allow_loops, opt.require_cyclic_components, opt.allow_multi_edges, {}};

  auto children = [&](const MultigraphClass& parent, std::set<MultigraphClass>& sink) {
    const int v = parent.v();
    const ExponentVector base = parent.to_exponent_vector();
    auto try_add = [&](int i, int j) {
      if (i == j && !opt.allow_loops) return;
      if (!opt.allow_multi_edges && base.multiplicity(i, j) > 0) return;
      ExponentVector child = base;
      child.add(i, j, 1);
      sink.insert(canonicalize(child));
    };
    for (int i = 0; i <= v; ++i)       // v is a fresh vertex
      for (int j = i; j <= v + 1; ++j)  // v + 1 is a second fresh vertex
        if (!(j == v + 1 && i < v)) try_add(i, j);
  };

  for (int d = 1; d <= opt.d_max; ++d) {
    std::vector<std::set<MultigraphClass>> partial(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < level.size(); i += threads) children(level[i], partial[t]);
      });
    for (auto& th : pool) th.join();
    std::set<MultigraphClass> merged;
    for (auto& p : partial) merged.merge(p);
    level.assign(merged.begin(), merged.end());
    for (const auto& g : level)
      if (!opt.require_cyclic_components || g.all_components_cyclic()) cat.classes.push_back(g);
  }
  std::sort(cat.classes.begin(), cat.classes.end());
  return cat;
}

inline ClassCatalog enumerate_classes(int d_max, bool allow_loops, bool require_cyclic_components) {
  return enumerate_classes(CatalogOptions{d_max, allow_loops, require_cyclic_components, true});
}

}  // namespace lowdeg
