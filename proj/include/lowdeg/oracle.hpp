// Exact degree-D advantage for tiny instances:
//   Adv = sup_{deg f <= D} E_P[f] / sqrt(E_Q[f^2]) = sqrt(c^T G^+ c),
// with c_a = E_P[Y^a] and G_ab = E_Q[Y^(a+b)] over the monomial basis. Both
// expectations are computed by summing over every label assignment.
#pragma once

#include "lowdeg/advantage.hpp"
#include "lowdeg/models.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <map>
#include <vector>

namespace lowdeg {

inline constexpr int kOracleMaxN = 6;
inline constexpr int kOracleMaxD = 3;

namespace detail {

// Sparse monomial: sorted (entry index, power) pairs.
using Monomial = std::vector<std::pair<int, int>>;

inline Monomial multiply(const Monomial& a, const Monomial& b, bool multilinear) {
  Monomial out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, multilinear ? 1 : a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

inline std::vector<Monomial> monomial_basis(int entries, int D, bool multilinear) {
  std::vector<Monomial> out;
  Monomial cur;
  std::function<void(int, int)> rec = [&](int start, int left) {
    out.push_back(cur);
    if (left == 0) return;
    for (int e = start; e < entries; ++e)
      for (int p = 1; p <= (multilinear ? 1 : left); ++p) {
        cur.emplace_back(e, p);
        rec(e + 1, left - p);
        cur.pop_back();
      }
  };
  rec(0, D);
  return out;
}

struct TinyModel {
  int n = 0;
  double density = 0;
  std::vector<double> x;
  std::vector<double> inside;  // mean entry inside community l
  double outside = 0;
};

// Calls visit(weight, labels) for every label assignment in {*, 0..M-1}^n.
template <class Visit>
void for_each_assignment(const TinyModel& m, Visit&& visit) {
  const int M = static_cast<int>(m.x.size());
  std::vector<int> lab(static_cast<std::size_t>(m.n), -1);
  std::function<void(int, double)> rec = [&](int i, double w) {
    if (w == 0) return;
    if (i == m.n) {
      visit(w, lab);
      return;
    }
    lab[i] = -1;
    rec(i + 1, w * (1 - m.density));
    for (int l = 0; l < M; ++l) {
      lab[i] = l;
      rec(i + 1, w * m.density * m.x[l]);
    }
  };
  rec(0, 1.0);
}

// E[(mu + Z)^j] for Z standard normal.
inline double normal_raw_moment(double mu, int j) {
  double out = 0, dfact = 1;  // (i - 1)!! for even i
  for (int i = 0; i <= j; i += 2) {
    if (i > 0) dfact *= i - 1;
    out += static_cast<double>(binomial(j, i).get_d()) * std::pow(mu, j - i) * dfact;
  }
  return out;
}

// E[Y^g] for every monomial g, averaged over labels. Entries are the pairs
// listed in `pairs`; gaussian entries use normal raw moments, binary entries
// are Bernoulli (powers collapse).
inline std::vector<double> monomial_moments(const TinyModel& m, const std::vector<std::pair<int, int>>& pairs,
                                            const std::vector<Monomial>& monos, bool gaussian, int max_power) {
  std::vector<double> out(monos.size(), 0.0);
  std::vector<std::vector<double>> table(pairs.size(), std::vector<double>(static_cast<std::size_t>(max_power + 1)));
  for_each_assignment(m, [&](double w, const std::vector<int>& lab) {
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      const int a = lab[pairs[e].first], b = lab[pairs[e].second];
      const double mu = (a >= 0 && a == b) ? m.inside[a] : m.outside;
      for (int p = 0; p <= max_power; ++p) table[e][p] = gaussian ? normal_raw_moment(mu, p) : (p == 0 ? 1.0 : mu);
    }
    for (std::size_t g = 0; g < monos.size(); ++g) {
      double prod = w;
      for (const auto& [e, p] : monos[g]) prod *= table[e][p];
      out[g] += prod;
    }
  });
  return out;
}

inline double oracle_value(const TinyModel& mp, const TinyModel& mq, int D, bool gaussian) {
  const int n = mp.n;
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = gaussian ? i : i + 1; j < n; ++j) pairs.emplace_back(i, j);
  const bool multilinear = !gaussian;
  const auto basis = monomial_basis(static_cast<int>(pairs.size()), D, multilinear);
  const auto b = static_cast<Eigen::Index>(basis.size());

  std::map<Monomial, int> index;
  std::vector<Monomial> products;
  std::vector<int> cell(basis.size() * basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      auto [it, fresh] = index.emplace(multiply(basis[i], basis[j], multilinear), static_cast<int>(products.size()));
      if (fresh) products.push_back(it->first);
      cell[i * basis.size() + j] = cell[j * basis.size() + i] = it->second;
    }
  const auto q_mom = monomial_moments(mq, pairs, products, gaussian, 2 * D);
  const auto p_mom = monomial_moments(mp, pairs, basis, gaussian, D);

  Eigen::MatrixXd G(b, b);
  for (Eigen::Index i = 0; i < b; ++i)
    for (Eigen::Index j = 0; j < b; ++j) G(i, j) = q_mom[cell[static_cast<std::size_t>(i * b + j)]];
  Eigen::VectorXd c(b);
  for (Eigen::Index i = 0; i < b; ++i) c(i) = p_mom[static_cast<std::size_t>(i)];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
  const auto& vals = eig.eigenvalues();
  const double cutoff = 1e-10 * vals.cwiseAbs().maxCoeff();
  const Eigen::VectorXd proj = eig.eigenvectors().transpose() * c;
  double quad = 0;
  for (Eigen::Index i = 0; i < b; ++i)
    if (vals(i) > cutoff) quad += proj(i) * proj(i) / vals(i);
  return std::sqrt(quad);
}

inline void check_oracle_size(std::int64_t np, std::int64_t nq, int D) {
  if (np != nq) throw parameter_error("exact_adv_oracle: P and Q must share n");
  if (np > kOracleMaxN || D > kOracleMaxD || D < 0)
    throw size_limit_error("exact_adv_oracle: needs n <= " + std::to_string(kOracleMaxN) + " and 0 <= D <= " +
                           std::to_string(kOracleMaxD) + " (got n = " + std::to_string(np) +
                           ", D = " + std::to_string(D) + ")");
}

template <class Params>
TinyModel tiny_base(const Params& p) {
  TinyModel m;
  m.n = static_cast<int>(p.n);
  m.density = to_double(p.density());
  for (const auto& xl : p.x) m.x.push_back(to_double(xl));
  return m;
}

}  // namespace detail

inline double exact_adv_oracle(const GaussianParams& p, const GaussianParams& q, int D) {
  p.validate("P");
  q.validate("Q");
  detail::check_oracle_size(p.n, q.n, D);
  auto model = [](const GaussianParams& g) {
    auto m = detail::tiny_base(g);
    for (const auto& xl : g.x) m.inside.push_back(to_double(g.lambda / xl));
    return m;
  };
  return detail::oracle_value(model(p), model(q), D, true);
}

/// Multilinear basis on the off-diagonal entries (Y_ij^2 = Y_ij, Y_ii = 0).
inline double exact_adv_oracle(const BinaryParams& p, const BinaryParams& q, int D) {
  p.validate("P");
  q.validate("Q");
  detail::check_oracle_size(p.n, q.n, D);
  auto model = [](const BinaryParams& b) {
    auto m = detail::tiny_base(b);
    for (const auto& xl : b.x) m.inside.push_back(to_double(b.q + b.s / xl));
    m.outside = to_double(b.q);
    return m;
  };
  return detail::oracle_value(model(p), model(q), D, false);
}

}  // namespace lowdeg
