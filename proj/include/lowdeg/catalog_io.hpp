// Line-oriented catalog cache.
//
//   # lowdeg-catalog d_max=<int> allow_loops=<0|1> require_cyclic=<0|1> multi_edges=<0|1>
//   <d> <v> <aut> <u-w:m,u-w:m,...>
//
// One class per line in canonical order. Reading re-canonicalizes every line
// and rejects the file if any stored field disagrees.
#pragma once

#include "lowdeg/graphs.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>

namespace lowdeg {

inline std::string catalog_header(const CatalogOptions& o) {
  return "# lowdeg-catalog d_max=" + std::to_string(o.d_max) + " allow_loops=" + std::to_string(o.allow_loops) +
         " require_cyclic=" + std::to_string(o.require_cyclic_components) +
         " multi_edges=" + std::to_string(o.allow_multi_edges);
}

inline void write_catalog(std::ostream& os, const ClassCatalog& cat) {
  os << catalog_header(cat.options()) << '\n';
  for (const auto& g : cat.classes) os << g.d() << ' ' << g.v() << ' ' << g.aut_count() << ' ' << g.edge_string() << '\n';
}

/// Parses "u-w:m,..." (or "-") into an exponent vector.
inline ExponentVector parse_edge_string(const std::string& text) {
  ExponentVector ev;
  if (text == "-") return ev;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    int u = 0, w = 0, m = 0;
    char dash = 0, colon = 0;
    std::istringstream it(item);
    if (!(it >> u >> dash >> w >> colon >> m) || dash != '-' || colon != ':' || m <= 0)
      throw std::runtime_error("catalog: malformed edge '" + item + "'");
    ev.add(u, w, m);
  }
  return ev;
}

inline ClassCatalog read_catalog(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw std::runtime_error("catalog: empty input");
  ClassCatalog cat;
  int loops = 0, cyclic = 0, multi = 0;
  if (std::sscanf(header.c_str(), "# lowdeg-catalog d_max=%d allow_loops=%d require_cyclic=%d multi_edges=%d",
                  &cat.d_max, &loops, &cyclic, &multi) != 4)
    throw std::runtime_error("catalog: bad header '" + header + "'");
  cat.allow_loops = loops;
  cat.require_cyclic_components = cyclic;
  cat.allow_multi_edges = multi;

  std::string line;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    int d = 0, v = 0;
    std::string aut, edges;
    if (!(in >> d >> v >> aut >> edges)) throw std::runtime_error("catalog: malformed line " + std::to_string(lineno));
    MultigraphClass g = canonicalize(parse_edge_string(edges));
    if (g.d() != d || g.v() != v || g.aut_count() != Integer(aut, 10) || g.edge_string() != edges)
      throw std::runtime_error("catalog: line " + std::to_string(lineno) + " is not a canonical class");
    cat.classes.push_back(std::move(g));
  }
  std::sort(cat.classes.begin(), cat.classes.end());
  return cat;
}

/// File name for a catalog with these options inside a cache directory.
inline std::string catalog_cache_file(const std::string& dir, const CatalogOptions& o) {
  return dir + "/catalog_d" + std::to_string(o.d_max) + "_l" + std::to_string(o.allow_loops) + "_c" +
         std::to_string(o.require_cyclic_components) + "_m" + std::to_string(o.allow_multi_edges) + ".txt";
}

/// Loads `path` when it holds a catalog with exactly these options; otherwise
/// enumerates and (when a path is given) writes the cache.
inline ClassCatalog cached_catalog(const CatalogOptions& opt, const std::optional<std::string>& path,
                                   unsigned threads = 1) {
  if (path) {
    std::ifstream in(*path);
    std::string header;
    if (in && std::getline(in, header) && header == catalog_header(opt)) {
      in.seekg(0);
      try {
        return read_catalog(in);
      } catch (const std::runtime_error&) {
        // corrupt cache: rebuild below
      }
    }
  }
  ClassCatalog cat = enumerate_classes(opt, threads);
  if (path) {
    std::ofstream out(*path);
    if (!out) throw std::runtime_error("cannot write catalog cache '" + *path + "'");
    write_catalog(out, cat);
  }
  return cat;
}

}  // namespace lowdeg
