#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace oracle {

Uni uni_mul(const Uni& x, const Uni& y, int p) {
  return {(x.a + y.a) % p, (x.b + y.b) % p, (x.c + y.c + x.a * y.b) % p};
}

Uni uni_inv(const Uni& x, int p) {
  // [[1,a,c],[0,1,b]]^-1 = [[1,-a,ab-c],[0,1,-b]]
  return {(p - x.a) % p, (p - x.b) % p, ((x.a * x.b - x.c) % p + p) % p};
}

Uni uni_pow(const Uni& x, int k, int p) {
  Uni r;
  for (int i = 0; i < k; ++i) r = uni_mul(r, x, p);
  return r;
}

M2 m2_mul(const M2& x, const M2& y, int m) {
  return {(x[0] * y[0] + x[1] * y[2]) % m, (x[0] * y[1] + x[1] * y[3]) % m,
          (x[2] * y[0] + x[3] * y[2]) % m, (x[2] * y[1] + x[3] * y[3]) % m};
}

std::uint64_t count_gl2(int p) {
  std::uint64_t c = 0;
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int cc = 0; cc < p; ++cc)
        for (int d = 0; d < p; ++d)
          if (((a * d - b * cc) % p + p) % p) ++c;
  return c;
}

namespace {

// rank over F_p of a dense matrix given as rows
int rank_rows(std::vector<std::vector<int>> m, int p) {
  int r = 0;
  int cols = m.empty() ? 0 : static_cast<int>(m[0].size());
  for (int c = 0; c < cols && r < static_cast<int>(m.size()); ++c) {
    int s = -1;
    for (int i = r; i < static_cast<int>(m.size()); ++i)
      if (m[i][c]) {
        s = i;
        break;
      }
    if (s < 0) continue;
    std::swap(m[s], m[r]);
    int iv = 1;
    while (m[r][c] * iv % p != 1) ++iv;
    for (auto& v : m[r]) v = v * iv % p;
    for (int i = 0; i < static_cast<int>(m.size()); ++i)
      if (i != r && m[i][c]) {
        int f = m[i][c];
        for (int j = 0; j < cols; ++j) m[i][j] = ((m[i][j] - f * m[r][j]) % p + p) % p;
      }
    ++r;
  }
  return r;
}

}  // namespace

// Cocycles f: G x G -> F_p satisfy f(y,z) - f(xy,z) + f(x,yz) - f(x,y) = 0.
// dim Z^2 = |G|^2 - rank(cocycle conditions); dim B^2 = |G| - 1 (the map
// from 1-cochains has kernel Hom(G,F_p) of dim d).
int h2_dimension_elementary(int p, int d) {
  int g = 1;
  for (int i = 0; i < d; ++i) g *= p;
  if (g > 9) throw std::runtime_error("h2 oracle: group too large");
  auto add = [&](int x, int y) {
    int r = 0, m = 1;
    for (int i = 0; i < d; ++i) {
      r += ((x / m % p + y / m % p) % p) * m;
      m *= p;
    }
    return r;
  };
  int vars = g * g;
  std::vector<std::vector<int>> rows;
  for (int x = 0; x < g; ++x)
    for (int y = 0; y < g; ++y)
      for (int z = 0; z < g; ++z) {
        std::vector<int> row(vars, 0);
        auto put = [&](int a, int b, int s) { row[a * g + b] = ((row[a * g + b] + s) % p + p) % p; };
        put(y, z, 1);
        put(add(x, y), z, -1);
        put(x, add(y, z), 1);
        put(x, y, -1);
        rows.push_back(row);
      }
  int z2 = vars - rank_rows(rows, p);
  int b2 = g - d;
  return z2 - b2;
}

}  // namespace oracle

// --- coset enumeration and small-group census ---------------------------------

namespace oracle {

int Table::order(int x) const {
  int k = 1;
  for (int y = x; y != 0; y = op(y, x)) ++k;
  return k;
}

std::optional<Table> enumerate(int ngens, const std::vector<Word>& relators, int limit, std::vector<int>* gens) {
  const int cols = 2 * ngens;
  auto col = [](int letter) { return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1; };
  auto icol = [](int c) { return c ^ 1; };
  std::vector<std::vector<int>> t(1, std::vector<int>(cols, -1));
  std::vector<int> rep(1, 0);
  bool overflow = false;

  auto find = [&](int k) {
    int l = k;
    while (rep[l] != l) l = rep[l];
    while (rep[k] != l) {
      int n = rep[k];
      rep[k] = l;
      k = n;
    }
    return l;
  };
  auto define = [&](int c, int x) {
    if (static_cast<int>(t.size()) >= limit) {
      overflow = true;
      return;
    }
    int d = static_cast<int>(t.size());
    t.emplace_back(cols, -1);
    rep.push_back(d);
    t[c][x] = d;
    t[d][icol(x)] = c;
  };
  auto coincidence = [&](int a, int b) {
    std::vector<int> q;
    auto merge = [&](int k, int l) {
      int f = find(k), g = find(l);
      if (f == g) return;
      if (f > g) std::swap(f, g);
      rep[g] = f;
      q.push_back(g);
    };
    merge(a, b);
    for (size_t i = 0; i < q.size(); ++i) {
      int g = q[i];
      for (int x = 0; x < cols; ++x) {
        int d = t[g][x];
        if (d < 0) continue;
        t[d][icol(x)] = -1;
        int mu = find(g), nu = find(d);
        if (t[mu][x] >= 0)
          merge(nu, t[mu][x]);
        else if (t[nu][icol(x)] >= 0)
          merge(mu, t[nu][icol(x)]);
        else {
          t[mu][x] = nu;
          t[nu][icol(x)] = mu;
        }
      }
    }
  };
  auto scan_and_fill = [&](int c, const Word& w) {
    int f = c, b = c;
    int i = 0, j = static_cast<int>(w.size()) - 1;
    while (true) {
      while (i <= j && t[f][col(w[i])] >= 0) f = t[f][col(w[i++])];
      if (i > j) {
        if (f != c) coincidence(f, c);
        return;
      }
      while (j >= i && t[b][icol(col(w[j]))] >= 0) b = t[b][icol(col(w[j--]))];
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        t[f][col(w[i])] = b;
        t[b][icol(col(w[i]))] = f;
        return;
      }
      define(f, col(w[i]));
      if (overflow) return;
    }
  };

  for (int c = 0; c < static_cast<int>(t.size()); ++c) {
    for (const auto& w : relators) {
      if (rep[c] != c) break;
      scan_and_fill(c, w);
      if (overflow) return std::nullopt;
    }
    if (rep[c] != c) continue;
    for (int x = 0; x < cols; ++x)
      if (t[c][x] < 0) {
        define(c, x);
        if (overflow) return std::nullopt;
      }
  }

  // live cosets, renumbered in breadth-first order from the trivial coset
  std::vector<int> id(t.size(), -1), order{0}, parent{-1}, via{-1};
  id[0] = 0;
  for (size_t k = 0; k < order.size(); ++k)
    for (int x = 0; x < cols; x += 2) {
      int d = find(t[order[k]][x]);
      if (id[d] < 0) {
        id[d] = static_cast<int>(order.size());
        order.push_back(d);
        parent.push_back(static_cast<int>(k));
        via.push_back(x);
      }
    }
  Table T;
  T.n = static_cast<int>(order.size());
  std::vector<std::vector<int>> right(T.n, std::vector<int>(ngens));
  for (int k = 0; k < T.n; ++k)
    for (int g = 0; g < ngens; ++g) right[k][g] = id[find(t[order[k]][2 * g])];
  // x * y = (x * parent(y)) * gen(y)
  T.mul.assign(static_cast<size_t>(T.n) * T.n, 0);
  for (int x = 0; x < T.n; ++x) {
    T.mul[x * T.n] = x;
    for (int y = 1; y < T.n; ++y) T.mul[x * T.n + y] = right[T.mul[x * T.n + parent[y]]][via[y] / 2];
  }
  T.inv.assign(T.n, 0);
  for (int x = 0; x < T.n; ++x)
    for (int y = 0; y < T.n; ++y)
      if (T.mul[x * T.n + y] == 0) T.inv[x] = y;
  if (gens) {
    gens->clear();
    for (int g = 0; g < ngens; ++g) gens->push_back(right[0][g]);
  }
  return T;
}

namespace {

// Generators a, b, c = [b,a], and for k = 4 d = [c,a]^e1 [c,b]^e2 central.
struct Pres {
  int p = 0, k = 0;
  int s = 0, t = 0;                       // [c,a] = d^s, [c,b] = d^t
  std::array<int, 2> ap{}, bp{}, cp{};    // a^p = c^ap0 d^ap1, ...; c^p = d^cp0
  std::vector<Word> relators() const;
};

Word pw(int letter, int e) { return Word(e, letter); }
Word cat(std::initializer_list<Word> ws) {
  Word w;
  for (const auto& x : ws) w.insert(w.end(), x.begin(), x.end());
  return w;
}
// relator x^-1 y^-1 x y rhs^-1 for [x,y] = rhs
Word comm_rel(int x, int y, const Word& rhs_inv) { return cat({{-x, -y, x, y}, rhs_inv}); }

std::vector<Word> Pres::relators() const {
  const int A = 1, B = 2, C = 3, D = 4;
  std::vector<Word> r;
  r.push_back(comm_rel(B, A, {-C}));
  if (k == 3) {
    r.push_back(comm_rel(C, A, {}));
    r.push_back(comm_rel(C, B, {}));
    r.push_back(cat({pw(A, p), pw(-C, ap[0])}));
    r.push_back(cat({pw(B, p), pw(-C, bp[0])}));
    r.push_back(pw(C, p));
  } else {
    r.push_back(comm_rel(C, A, pw(-D, s)));
    r.push_back(comm_rel(C, B, pw(-D, t)));
    for (int g : {A, B, C}) r.push_back(comm_rel(D, g, {}));
    r.push_back(cat({pw(A, p), pw(-D, ap[1]), pw(-C, ap[0])}));
    r.push_back(cat({pw(B, p), pw(-D, bp[1]), pw(-C, bp[0])}));
    r.push_back(cat({pw(C, p), pw(-D, cp[0])}));
    r.push_back(pw(D, p));
  }
  return r;
}

int inverse_mod(int a, int p) {
  for (int x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  throw std::runtime_error("no inverse");
}

int evaluate(const Table& H, const std::vector<int>& img, const Word& w) {
  int x = 0;
  for (int l : w) x = H.op(x, l > 0 ? img[l - 1] : H.inv[img[-l - 1]]);
  return x;
}

int comm(const Table& H, int x, int y) { return H.op(H.op(H.inv[x], H.inv[y]), H.op(x, y)); }

int power(const Table& H, int x, int e) {
  int r = 0;
  for (int i = 0; i < e; ++i) r = H.op(r, x);
  return r;
}

bool generates(const Table& H, int x, int y) {
  std::vector<char> in(H.n, 0);
  std::vector<int> st{0};
  in[0] = 1;
  int cnt = 1;
  while (!st.empty()) {
    int z = st.back();
    st.pop_back();
    for (int g : {x, y}) {
      int w = H.op(z, g);
      if (!in[w]) {
        in[w] = 1;
        ++cnt;
        st.push_back(w);
      }
    }
  }
  return cnt == H.n;
}

// is there a generating pair of H satisfying the relations of P?
bool maps_onto(const Pres& P, const Table& H) {
  auto rel = P.relators();
  const int d_from = P.s ? 0 : 1;  // d = [c,a]^(1/s) or [c,b]^(1/t)
  const int d_exp = P.k == 4 ? inverse_mod(P.s ? P.s : P.t, P.p) : 0;
  std::vector<int> img(P.k);
  for (int x = 1; x < H.n; ++x)
    for (int y = 1; y < H.n; ++y) {
      img[0] = x;
      img[1] = y;
      img[2] = comm(H, y, x);
      if (P.k == 4) img[3] = power(H, comm(H, img[2], img[d_from]), d_exp);
      bool ok = true;
      for (const auto& w : rel)
        if (evaluate(H, img, w) != 0) {
          ok = false;
          break;
        }
      if (ok && generates(H, x, y)) return true;
    }
  return false;
}

// element orders and centralizer sizes
std::vector<std::pair<int, int>> invariants(const Table& H) {
  std::vector<std::pair<int, int>> v;
  for (int x = 0; x < H.n; ++x) {
    int cz = 0;
    for (int y = 0; y < H.n; ++y) cz += H.op(x, y) == H.op(y, x);
    v.emplace_back(H.order(x), cz);
  }
  std::sort(v.begin(), v.end());
  return v;
}

struct Class {
  Pres pres;
  Table table;
  std::vector<std::pair<int, int>> inv;
};

// index of the class of (P, T) in cls, adding it when new
int classify(std::vector<Class>& cls, const Pres& P, Table T) {
  auto iv = invariants(T);
  for (size_t i = 0; i < cls.size(); ++i)
    if (cls[i].inv == iv && maps_onto(P, cls[i].table)) return static_cast<int>(i);
  cls.push_back({P, std::move(T), std::move(iv)});
  return static_cast<int>(cls.size()) - 1;
}

int order_of(int p, int k) {
  int n = 1;
  for (int i = 0; i < k; ++i) n *= p;
  return n;
}

}  // namespace

std::vector<std::pair<int, int>> descendant_census(int p) {
  std::vector<Class> three, four;
  std::map<std::pair<int, int>, int> q_class;  // (a^p, b^p) exponents of c -> class
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      Pres P;
      P.p = p;
      P.k = 3;
      P.ap = {i, 0};
      P.bp = {j, 0};
      auto T = enumerate(3, P.relators(), 100000, nullptr);
      if (!T || T->n != order_of(p, 3)) continue;
      q_class[{i, j}] = classify(three, P, std::move(*T));
    }
  std::vector<int> kids(three.size(), 0);
  std::vector<int> parent_of;
  for (int s = 0; s < p; ++s)
    for (int t = 0; t < p; ++t) {
      if (!s && !t) continue;
      for (int a0 = 0; a0 < p; ++a0)
        for (int a1 = 0; a1 < p; ++a1)
          for (int b0 = 0; b0 < p; ++b0)
            for (int b1 = 0; b1 < p; ++b1)
              for (int c0 = 0; c0 < p; ++c0) {
                Pres P;
                P.p = p;
                P.k = 4;
                P.s = s;
                P.t = t;
                P.ap = {a0, a1};
                P.bp = {b0, b1};
                P.cp = {c0, 0};
                auto T = enumerate(4, P.relators(), 200000, nullptr);
                if (!T || T->n != order_of(p, 4)) continue;
                const size_t before = four.size();
                classify(four, P, std::move(*T));
                // G/<d> has a^p = c^a0, b^p = c^b0
                if (four.size() > before) parent_of.push_back(q_class.at({a0, b0}));
              }
    }
  for (int q : parent_of) ++kids[q];
  std::vector<std::pair<int, int>> out;
  for (size_t i = 0; i < three.size(); ++i) {
    int e = 1;
    for (int x = 0; x < three[i].table.n; ++x) e = std::max(e, three[i].table.order(x));
    out.emplace_back(e, kids[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace oracle
