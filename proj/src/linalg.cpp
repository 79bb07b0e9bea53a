#include "ptower/linalg.hpp"

#include <algorithm>
#include <utility>

namespace ptower {

int inv_mod(int a, int p) {
  a %= p;
  if (a < 0) a += p;
  int r = 1, b = a, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  if (a == 0) throw Error("inverse of zero mod p");
  return r;
}

FpMat FpMat::identity(int n) {
  FpMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

FpMat mat_mul(const FpMat& x, const FpMat& y, int p) {
  FpMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      int v = x.at(i, k);
      if (!v) continue;
      for (int j = 0; j < y.cols; ++j) r.at(i, j) = (r.at(i, j) + v * y.at(k, j)) % p;
    }
  return r;
}

FpMat transpose(const FpMat& x) {
  FpMat r(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
  return r;
}

std::vector<int> rref(FpMat& m, int p) {
  std::vector<int> piv;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int s = -1;
    for (int i = r; i < m.rows; ++i)
      if (m.at(i, c)) {
        s = i;
        break;
      }
    if (s < 0) continue;
    if (s != r)
      for (int j = 0; j < m.cols; ++j) std::swap(m.at(s, j), m.at(r, j));
    int iv = inv_mod(m.at(r, c), p);
    for (int j = 0; j < m.cols; ++j) m.at(r, j) = m.at(r, j) * iv % p;
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || !m.at(i, c)) continue;
      int f = m.at(i, c);
      for (int j = 0; j < m.cols; ++j) m.at(i, j) = ((m.at(i, j) - f * m.at(r, j)) % p + p) % p;
    }
    piv.push_back(c);
    ++r;
  }
  m.rows = r;
  m.a.resize(static_cast<size_t>(r) * m.cols);
  return piv;
}

int rank(FpMat m, int p) { return static_cast<int>(rref(m, p).size()); }

FpMat nullspace(const FpMat& m0, int p) {
  FpMat m = m0;
  auto piv = rref(m, p);
  std::vector<bool> is_piv(m.cols, false);
  for (int c : piv) is_piv[c] = true;
  FpMat ns(m.cols - static_cast<int>(piv.size()), m.cols);
  int r = 0;
  for (int f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    ns.at(r, f) = 1;
    for (size_t i = 0; i < piv.size(); ++i) ns.at(r, piv[i]) = (p - m.at(static_cast<int>(i), f)) % p;
    ++r;
  }
  rref(ns, p);
  return ns;
}

FpMat inverse(const FpMat& m, int p) {
  int n = m.rows;
  FpMat aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = 1;
  }
  auto piv = rref(aug, p);
  if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1) throw Error("singular matrix");
  FpMat r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r.at(i, j) = aug.at(i, n + j);
  return r;
}

int det(FpMat m, int p) {
  int n = m.rows;
  long long d = 1;
  for (int c = 0; c < n; ++c) {
    int s = -1;
    for (int i = c; i < n; ++i)
      if (m.at(i, c)) {
        s = i;
        break;
      }
    if (s < 0) return 0;
    if (s != c) {
      for (int j = 0; j < n; ++j) std::swap(m.at(s, j), m.at(c, j));
      d = (p - d) % p;
    }
    d = d * m.at(c, c) % p;
    int iv = inv_mod(m.at(c, c), p);
    for (int i = c + 1; i < n; ++i) {
      int f = m.at(i, c) * iv % p;
      if (!f) continue;
      for (int j = c; j < n; ++j) m.at(i, j) = ((m.at(i, j) - f * m.at(c, j)) % p + p) % p;
    }
  }
  return static_cast<int>(d);
}

std::string subspace_key(const FpMat& m) {
  std::string s;
  s.reserve(m.a.size() + 1);
  s.push_back(static_cast<char>(m.rows));
  for (int v : m.a) s.push_back(static_cast<char>(v));
  return s;
}

namespace {

using i128 = __int128;

std::int64_t md(i128 v, std::int64_t q) {
  v %= q;
  if (v < 0) v += q;
  return static_cast<std::int64_t>(v);
}

int val(std::int64_t v, int p, int e) {
  if (v == 0) return e;
  int k = 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

// inverse of a unit modulo q via extended Euclid
std::int64_t unit_inv(std::int64_t a, std::int64_t q) {
  std::int64_t g = q, x = 0, g1 = md(a, q), x1 = 1;
  while (g1) {
    std::int64_t t = g / g1;
    std::int64_t g2 = g - t * g1, x2 = static_cast<std::int64_t>(x - static_cast<i128>(t) * x1);
    g = g1;
    x = x1;
    g1 = g2;
    x1 = x2;
  }
  return md(x, q);
}

}  // namespace

SmithResult smith_mod(std::vector<std::vector<std::int64_t>> rel, int k, int p, int e) {
  SmithResult res;
  std::int64_t q = 1;
  for (int i = 0; i < e; ++i) q *= p;
  res.modulus = q;
  for (auto& r : rel)
    for (auto& v : r) v = md(v, q);
  res.colT.assign(k, std::vector<std::int64_t>(k, 0));
  for (int i = 0; i < k; ++i) res.colT[i][i] = 1;
  res.valuations.assign(k, e);
  int m = static_cast<int>(rel.size());
  int t = 0;
  for (; t < k && t < m; ++t) {
    int bi = -1, bj = -1, bv = e;
    for (int i = t; i < m; ++i)
      for (int j = t; j < k; ++j) {
        int v = val(rel[i][j], p, e);
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) break;
    std::swap(rel[t], rel[bi]);
    if (bj != t) {
      for (auto& r : rel) std::swap(r[t], r[bj]);
      for (auto& r : res.colT) std::swap(r[t], r[bj]);
    }
    std::int64_t piv = rel[t][t];
    std::int64_t pk = 1;
    for (int i = 0; i < bv; ++i) pk *= p;
    std::int64_t u = unit_inv(piv / pk, q);
    // scale row so the pivot is exactly p^bv
    for (int j = t; j < k; ++j) rel[t][j] = md(static_cast<i128>(rel[t][j]) * u, q);
    for (int i = 0; i < m; ++i) {
      if (i == t || rel[i][t] == 0) continue;
      std::int64_t f = rel[i][t] / pk;
      for (int j = t; j < k; ++j) rel[i][j] = md(rel[i][j] - static_cast<i128>(f) * rel[t][j], q);
    }
    for (int j = t + 1; j < k; ++j) {
      if (rel[t][j] == 0) continue;
      std::int64_t f = rel[t][j] / pk;
      for (int i = 0; i < m; ++i) rel[i][j] = md(rel[i][j] - static_cast<i128>(f) * rel[i][t], q);
      for (int i = 0; i < k; ++i)
        res.colT[i][j] = md(res.colT[i][j] - static_cast<i128>(f) * res.colT[i][t], q);
    }
    res.valuations[t] = bv;
  }
  return res;
}

}  // namespace ptower
