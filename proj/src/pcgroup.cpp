#include "ptower/pcgroup.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <cstdio>
#include <sstream>

namespace ptower {

PcPresentation::PcPresentation(int p, int n)
    : p_(p), n_(n), pow_(n), comm_(n * (n - 1) / 2), weight_(n, 1) {
  if (n > kMaxGens) throw Error("presentation longer than " + std::to_string(kMaxGens));
  if (p < 2 || p > 251) throw Error("unsupported prime " + std::to_string(p));
}

void PcPresentation::set_pow(int i, const Elem& r) {
  if (r.depth(n_) <= i) throw Error("pow rhs must involve later generators only");
  pow_[i] = r;
}

void PcPresentation::set_comm(int j, int i, const Elem& r) {
  if (j <= i) throw Error("comm(j,i) needs j > i");
  if (r.depth(n_) <= j) throw Error("comm rhs must involve generators beyond j");
  comm_[idx(j, i)] = r;
}

void PcPresentation::set_relation_rhs(int id, const Elem& r) {
  if (id < n_) {
    set_pow(id, r);
    return;
  }
  auto l = relation_lhs(id);
  set_comm(l.j, l.i, r);
}

PcPresentation::RelLhs PcPresentation::relation_lhs(int id) const {
  if (id < n_) return {true, id, id};
  int c = id - n_;
  int j = 1;
  while ((j + 1) * j / 2 <= c) ++j;
  return {false, j, c - j * (j - 1) / 2};
}

void PcPresentation::conj_by_gen(Elem& t, int g) const {
  Elem f;
  for (int m = g + 1; m < n_; ++m) {
    int e = t[m];
    if (!e) continue;
    const Elem& c = comm_[idx(m, g)];
    if (c.is_identity(n_)) {
      mul_gen(f, m, e);
      continue;
    }
    Elem w = c;
    w[m] = 1;
    for (int k = 0; k < e; ++k) mul_word(f, w);
  }
  t = f;
}

void PcPresentation::mul_gen(Elem& x, int g, int c) const {
  while (c >= p_) {
    mul_gen(x, g, p_ - 1);
    c -= p_ - 1;
  }
  if (c <= 0) return;
  bool tail = false;
  for (int k = g + 1; k < n_; ++k)
    if (x[k]) {
      tail = true;
      break;
    }
  if (!tail) {
    int v = x[g] + c;
    x[g] = static_cast<std::uint8_t>(v % p_);
    if (v >= p_) mul_word(x, pow_[g]);
    return;
  }
  Elem t;
  for (int k = g + 1; k < n_; ++k) {
    t[k] = x[k];
    x[k] = 0;
  }
  // x a_g^c t = x a_g^c (a_g^-c t a_g^c) ... conjugate the tail c times
  for (int r = 0; r < c; ++r) conj_by_gen(t, g);
  mul_gen(x, g, c);
  mul_word(x, t);
}

void PcPresentation::mul_word(Elem& x, const Elem& w) const {
  for (int k = 0; k < n_; ++k)
    if (w[k]) mul_gen(x, k, w[k]);
}

Elem PcPresentation::mul(const Elem& x, const Elem& y) const {
  Elem r = x;
  mul_word(r, y);
  return r;
}

Elem PcPresentation::inv(const Elem& x) const {
  Elem z = x, y;
  for (int k = 0; k < n_; ++k) {
    if (!z[k]) continue;
    int e = p_ - z[k];
    y[k] = static_cast<std::uint8_t>(e);
    mul_gen(z, k, e);
  }
  return y;
}

Elem PcPresentation::pow(const Elem& x, long long k) const {
  Elem r, b = x;
  if (k < 0) {
    b = inv(x);
    k = -k;
  }
  while (k) {
    if (k & 1) mul_word(r, b);
    k >>= 1;
    if (k) b = mul(b, b);
  }
  return r;
}

Elem PcPresentation::comm(const Elem& x, const Elem& y) const {
  Elem r = inv(x);
  mul_word(r, inv(y));
  mul_word(r, x);
  mul_word(r, y);
  return r;
}

Elem PcPresentation::conj(const Elem& x, const Elem& y) const {
  Elem r = inv(y);
  mul_word(r, x);
  mul_word(r, y);
  return r;
}

std::vector<PcPresentation::Overlap> PcPresentation::overlaps(int n) const {
  const int p = p_;
  std::vector<Overlap> out;
  auto lbl = [](std::initializer_list<std::string> parts) {
    std::string s = "overlap";
    for (const auto& x : parts) s += " " + x;
    return s;
  };
  auto S = [](int v) { return std::to_string(v + 1); };
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < j; ++i) {
        Elem a = Elem::gen(k);
        mul_gen(a, j, 1);
        mul_gen(a, i, 1);
        Elem y = Elem::gen(j);
        mul_gen(y, i, 1);
        Elem b = Elem::gen(k);
        mul_word(b, y);
        out.push_back({a, b, lbl({S(k), S(j), S(i)})});
      }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      Elem a = pow_[j];
      mul_gen(a, i, 1);
      Elem y = Elem::gen(j);
      mul_gen(y, i, 1);
      Elem b = Elem::gen(j, p - 1);
      mul_word(b, y);
      out.push_back({a, b, lbl({S(j) + "^p", S(i)})});
      Elem c = Elem::gen(j);
      mul_word(c, pow_[i]);
      Elem d = Elem::gen(j);
      mul_gen(d, i, 1);
      mul_gen(d, i, p - 1);
      out.push_back({c, d, lbl({S(j), S(i) + "^p"})});
    }
  for (int i = 0; i < n; ++i) {
    Elem a = pow_[i];
    mul_gen(a, i, 1);
    Elem b = Elem::gen(i);
    mul_word(b, pow_[i]);
    out.push_back({a, b, lbl({S(i) + "^(p+1)"})});
  }
  return out;
}

std::optional<std::string> PcPresentation::consistency_failure() const {
  for (const auto& o : overlaps(n_))
    if (!(o.lhs == o.rhs)) return o.label;
  return std::nullopt;
}

namespace {

void put_vec(std::ostringstream& os, const Elem& w, int n) {
  for (int k = 0; k < n; ++k) os << (k ? "," : "") << int(w[k]);
}

Elem get_vec(const std::string& s, int n, int p) {
  Elem w;
  std::istringstream is(s);
  std::string tok;
  int k = 0;
  while (std::getline(is, tok, ',')) {
    if (k >= n) throw Error("exponent vector too long: '" + s + "'");
    int v = std::stoi(tok);
    if (v < 0 || v >= p) throw Error("exponent out of range in '" + s + "'");
    w[k++] = static_cast<std::uint8_t>(v);
  }
  if (k != n) throw Error("exponent vector has wrong length: '" + s + "'");
  return w;
}

}  // namespace

// Text form, generators numbered from 1:
//   pcgroup p=<p> n=<n>
//   weights = w1,...,wn
//   pow <i> = e1,...,en
//   comm <j> <i> = e1,...,en
std::string PcPresentation::serialize() const {
  std::ostringstream os;
  os << "pcgroup p=" << p_ << " n=" << n_ << "\n";
  os << "weights =";
  for (int k = 0; k < n_; ++k) os << (k ? "," : " ") << weight_[k];
  os << "\n";
  for (int i = 0; i < n_; ++i)
    if (!pow_[i].is_identity(n_)) {
      os << "pow " << i + 1 << " = ";
      put_vec(os, pow_[i], n_);
      os << "\n";
    }
  for (int j = 1; j < n_; ++j)
    for (int i = 0; i < j; ++i)
      if (!comm_[idx(j, i)].is_identity(n_)) {
        os << "comm " << j + 1 << ' ' << i + 1 << " = ";
        put_vec(os, comm_[idx(j, i)], n_);
        os << "\n";
      }
  return os.str();
}

PcPresentation PcPresentation::deserialize(const std::string& s) {
  std::istringstream in(s);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty presentation text");
  int p = 0, n = -1;
  if (std::sscanf(line.c_str(), "pcgroup p=%d n=%d", &p, &n) != 2)
    throw Error("bad presentation header '" + line + "'");
  PcPresentation G(p, n);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("bad relation line '" + line + "'");
    std::istringstream head(line.substr(0, eq));
    std::string rhs = line.substr(eq + 1);
    while (!rhs.empty() && rhs.front() == ' ') rhs.erase(rhs.begin());
    std::string kind;
    head >> kind;
    if (kind == "weights") {
      std::istringstream ws(rhs);
      std::string tok;
      int k = 0;
      while (std::getline(ws, tok, ',') && k < n) G.weight_[k++] = std::stoi(tok);
    } else if (kind == "pow") {
      int i;
      if (!(head >> i) || i < 1 || i > n) throw Error("bad pow index in '" + line + "'");
      G.set_pow(i - 1, get_vec(rhs, n, p));
    } else if (kind == "comm") {
      int j, i;
      if (!(head >> j >> i) || i < 1 || j > n || j <= i) throw Error("bad comm indices in '" + line + "'");
      G.set_comm(j - 1, i - 1, get_vec(rhs, n, p));
    } else {
      throw Error("bad relation kind '" + kind + "'");
    }
  }
  if (auto f = G.consistency_failure()) throw Error("inconsistent presentation: " + *f);
  return G;
}

Elem collect(const PcPresentation& G, const std::vector<int>& word) {
  Elem x;
  for (int s : word) {
    int g = s > 0 ? s - 1 : -s - 1;
    if (s == 0 || g >= G.n()) throw Error("generator symbol out of range");
    if (s > 0)
      G.mul_gen(x, g, 1);
    else
      G.mul_word(x, G.inv(Elem::gen(g)));
  }
  return x;
}

OrderStats order_stats(const PcPresentation& G) {
  OrderStats st;
  st.lo = G.n();
  st.cl = nilpotency_class(G);
  st.cc = st.lo - st.cl;
  st.dl = derived_length(G);
  st.metabelian = st.dl <= 2;
  return st;
}

std::string Subgroup::key(int n) const {
  std::string s;
  for (const auto& g : gens) {
    for (int k = 0; k < n; ++k) s.push_back(static_cast<char>(g[k]));
    s.push_back('|');
  }
  return s;
}

namespace {

struct Table {
  const PcPresentation& G;
  std::vector<std::optional<Elem>> t;
  explicit Table(const PcPresentation& g) : G(g), t(g.n()) {}

  // returns true and the normalized element if x was new
  std::optional<Elem> insert(Elem x) {
    const int n = G.n(), p = G.p();
    while (true) {
      int d = x.depth(n);
      if (d == n) return std::nullopt;
      if (t[d]) {
        x = G.mul(x, G.pow(*t[d], p - x[d]));
        continue;
      }
      x = G.pow(x, inv_mod(x[d], p));
      t[d] = x;
      return x;
    }
  }
};

Subgroup canonical(const PcPresentation& G, const std::vector<std::optional<Elem>>& t) {
  const int n = G.n(), p = G.p();
  Subgroup S;
  for (int l = 0; l < n; ++l)
    if (t[l]) {
      S.gens.push_back(*t[l]);
      S.leads.push_back(l);
    }
  for (size_t i = 0; i < S.gens.size(); ++i)
    for (size_t j = i + 1; j < S.gens.size(); ++j) {
      int e = S.gens[i][S.leads[j]];
      if (e) S.gens[i] = G.mul(S.gens[i], G.pow(S.gens[j], p - e));
    }
  return S;
}

}  // namespace

Subgroup closure(const PcPresentation& G, const std::vector<Elem>& gens,
                 const std::vector<Elem>& conj_by) {
  Table tab(G);
  std::deque<Elem> q(gens.begin(), gens.end());
  std::vector<Elem> members;
  while (!q.empty()) {
    Elem x = q.front();
    q.pop_front();
    auto nw = tab.insert(x);
    if (!nw) continue;
    q.push_back(G.pow(*nw, G.p()));
    for (const auto& m : members) q.push_back(G.comm(*nw, m));
    for (const auto& c : conj_by) q.push_back(G.comm(*nw, c));
    members.push_back(*nw);
  }
  return canonical(G, tab.t);
}

Subgroup whole_group(const PcPresentation& G) {
  Subgroup S;
  for (int k = 0; k < G.n(); ++k) {
    S.gens.push_back(Elem::gen(k));
    S.leads.push_back(k);
  }
  return S;
}

Subgroup trivial_subgroup() { return {}; }

Elem sift_residue(const PcPresentation& G, const Subgroup& H, Elem x) {
  const int p = G.p();
  for (size_t i = 0; i < H.gens.size(); ++i) {
    int e = x[H.leads[i]];
    if (e) x = G.mul(x, G.pow(H.gens[i], p - e));
  }
  return x;
}

bool contains(const PcPresentation& G, const Subgroup& H, const Elem& x) {
  return sift_residue(G, H, x).is_identity(G.n());
}

bool is_subgroup_of(const PcPresentation& G, const Subgroup& A, const Subgroup& B) {
  for (const auto& g : A.gens)
    if (!contains(G, B, g)) return false;
  return true;
}

std::vector<int> subgroup_exponents(const PcPresentation& G, const Subgroup& H, Elem x) {
  std::vector<int> f(H.gens.size(), 0);
  for (size_t i = 0; i < H.gens.size(); ++i) {
    int e = x[H.leads[i]];
    f[i] = e;
    if (e) x = G.mul(G.pow(G.inv(H.gens[i]), e), x);
  }
  if (!x.is_identity(G.n())) throw Error("element not in subgroup");
  return f;
}

namespace {
std::vector<Elem> all_gens(const PcPresentation& G) {
  std::vector<Elem> v;
  for (int k = 0; k < G.n(); ++k) v.push_back(Elem::gen(k));
  return v;
}
}  // namespace

Subgroup commutator_subgroup(const PcPresentation& G, const Subgroup& A, const Subgroup& B) {
  std::vector<Elem> c;
  for (const auto& a : A.gens)
    for (const auto& b : B.gens) c.push_back(G.comm(a, b));
  return closure(G, c, all_gens(G));
}

Subgroup derived_subgroup(const PcPresentation& G, const Subgroup& H) {
  std::vector<Elem> c;
  for (size_t i = 0; i < H.gens.size(); ++i)
    for (size_t j = i + 1; j < H.gens.size(); ++j) c.push_back(G.comm(H.gens[j], H.gens[i]));
  return closure(G, c, H.gens);
}

Subgroup normal_closure(const PcPresentation& G, const std::vector<Elem>& gens) {
  return closure(G, gens, all_gens(G));
}

Subgroup frattini(const PcPresentation& G, const Subgroup& H) {
  std::vector<Elem> c;
  for (size_t i = 0; i < H.gens.size(); ++i) {
    c.push_back(G.pow(H.gens[i], G.p()));
    for (size_t j = i + 1; j < H.gens.size(); ++j) c.push_back(G.comm(H.gens[j], H.gens[i]));
  }
  return closure(G, c, H.gens);
}

Subgroup join(const PcPresentation& G, const Subgroup& A, const Subgroup& B) {
  std::vector<Elem> v = A.gens;
  v.insert(v.end(), B.gens.begin(), B.gens.end());
  return closure(G, v);
}

Subgroup center(const PcPresentation& G) {
  const int n = G.n(), p = G.p();
  double sz = 1;
  for (int i = 0; i < n; ++i) sz *= p;
  if (sz > 2e7) throw Error("center: group too large for enumeration");
  int d = generator_rank(G);
  std::vector<Elem> z;
  std::uint64_t N = static_cast<std::uint64_t>(sz);
  for (std::uint64_t i = 1; i < N; ++i) {
    Elem x = elem_from_index(i, n, p);
    bool central = true;
    for (int g = 0; g < d && central; ++g) central = G.comm(x, Elem::gen(g)).is_identity(n);
    if (central) z.push_back(x);
  }
  return closure(G, z);
}

std::vector<Subgroup> lower_central_series(const PcPresentation& G) {
  std::vector<Subgroup> s{whole_group(G)};
  Subgroup W = whole_group(G);
  while (!s.back().gens.empty()) s.push_back(commutator_subgroup(G, s.back(), W));
  return s;
}

std::vector<Subgroup> p_central_series(const PcPresentation& G) {
  std::vector<Subgroup> s{whole_group(G)};
  auto gens = all_gens(G);
  while (!s.back().gens.empty()) {
    std::vector<Elem> c;
    for (const auto& x : s.back().gens) {
      c.push_back(G.pow(x, G.p()));
      for (const auto& a : gens) c.push_back(G.comm(x, a));
    }
    s.push_back(closure(G, c, gens));
  }
  return s;
}

std::vector<Subgroup> derived_series(const PcPresentation& G) {
  std::vector<Subgroup> s{whole_group(G)};
  while (!s.back().gens.empty()) s.push_back(derived_subgroup(G, s.back()));
  return s;
}

int nilpotency_class(const PcPresentation& G) {
  return static_cast<int>(lower_central_series(G).size()) - 1;
}

int derived_length(const PcPresentation& G) {
  return static_cast<int>(derived_series(G).size()) - 1;
}

int generator_rank(const PcPresentation& G) {
  return G.n() - frattini(G, whole_group(G)).size_log();
}

namespace {

std::vector<std::vector<std::int64_t>> relation_rows(const PcPresentation& G, const Subgroup& H,
                                                     const Subgroup& N) {
  const int k = H.size_log(), p = G.p();
  std::vector<std::vector<std::int64_t>> rows;
  auto tov = [&](const Elem& x) {
    auto f = subgroup_exponents(G, H, x);
    return std::vector<std::int64_t>(f.begin(), f.end());
  };
  for (int i = 0; i < k; ++i) {
    auto r = tov(G.pow(H.gens[i], p));
    for (auto& v : r) v = -v;
    r[i] += p;
    rows.push_back(r);
    for (int j = i + 1; j < k; ++j) {
      Elem c = G.comm(H.gens[j], H.gens[i]);
      if (!contains(G, N, c)) throw Error("abelian_invariants: quotient is not abelian");
      rows.push_back(tov(c));
    }
  }
  for (const auto& g : N.gens) rows.push_back(tov(g));
  return rows;
}

}  // namespace

AbelianType abelian_invariants(const PcPresentation& G, const Subgroup& H, const Subgroup& N) {
  const int k = H.size_log();
  if (k == 0) return {};
  auto sr = smith_mod(relation_rows(G, H, N), k, G.p(), k + 1);
  AbelianType t;
  for (int v : sr.valuations)
    if (v > 0) t.push_back(v);
  std::sort(t.rbegin(), t.rend());
  return t;
}

AbelianType abelianization(const PcPresentation& G) {
  return abelian_invariants(G, whole_group(G), derived_subgroup(G, whole_group(G)));
}

AbelianCoordinates::AbelianCoordinates(const PcPresentation& G, const Subgroup& H,
                                       const Subgroup& N)
    : G_(&G), H_(H) {
  const int k = H.size_log();
  modulus_ = 1;
  if (k == 0) return;
  auto sr = smith_mod(relation_rows(G, H, N), k, G.p(), k + 1);
  colT_ = sr.colT;
  modulus_ = sr.modulus;
  std::vector<int> idx;
  for (int j = 0; j < k; ++j)
    if (sr.valuations[j] > 0) idx.push_back(j);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return sr.valuations[a] > sr.valuations[b]; });
  for (int j : idx) {
    cols_.push_back(j);
    type_.push_back(sr.valuations[j]);
    std::int64_t m = 1;
    for (int r = 0; r < sr.valuations[j]; ++r) m *= G.p();
    mod_.push_back(m);
  }
}

std::vector<std::int64_t> AbelianCoordinates::coords(const Elem& x) const {
  std::vector<std::int64_t> out(cols_.size(), 0);
  if (cols_.empty()) return out;
  auto f = subgroup_exponents(*G_, H_, x);
  for (size_t c = 0; c < cols_.size(); ++c) {
    __int128 s = 0;
    for (size_t i = 0; i < f.size(); ++i) s += static_cast<__int128>(f[i]) * colT_[i][cols_[c]];
    s %= mod_[c];
    if (s < 0) s += mod_[c];
    out[c] = static_cast<std::int64_t>(s);
  }
  return out;
}

Elem Quotient::project(const PcPresentation& G, const Elem& x) const {
  Elem r = sift_residue(G, kernel, x), q;
  for (size_t k = 0; k < pos.size(); ++k) q[k] = r[pos[k]];
  return q;
}

Elem Quotient::lift(const Elem& q) const {
  Elem x;
  for (size_t k = 0; k < pos.size(); ++k) x[pos[k]] = q[k];
  return x;
}

Quotient quotient(const PcPresentation& G, const Subgroup& N) {
  for (const auto& g : N.gens)
    for (int k = 0; k < G.n(); ++k)
      if (!contains(G, N, G.conj(g, Elem::gen(k)))) throw Error("quotient: subgroup not normal");
  Quotient Q;
  Q.kernel = N;
  std::vector<bool> lead(G.n(), false);
  for (int l : N.leads) lead[l] = true;
  for (int k = 0; k < G.n(); ++k)
    if (!lead[k]) Q.pos.push_back(k);
  const int m = static_cast<int>(Q.pos.size());
  Q.pres = PcPresentation(G.p(), m);
  for (int k = 0; k < m; ++k) {
    Q.pres.set_weight(k, G.weight(Q.pos[k]));
    Q.pres.set_pow(k, Q.project(G, G.pow_rhs(Q.pos[k])));
    for (int i = 0; i < k; ++i)
      Q.pres.set_comm(k, i, Q.project(G, G.comm_rhs(Q.pos[k], Q.pos[i])));
  }
  return Q;
}

PcPresentation induced_presentation(const PcPresentation& G, const Subgroup& H) {
  const int k = H.size_log();
  PcPresentation P(G.p(), k);
  auto tow = [&](const Elem& x) {
    auto f = subgroup_exponents(G, H, x);
    Elem w;
    for (int i = 0; i < k; ++i) w[i] = static_cast<std::uint8_t>(f[i]);
    return w;
  };
  for (int i = 0; i < k; ++i) {
    P.set_weight(i, G.weight(H.leads[i]));
    P.set_pow(i, tow(G.pow(H.gens[i], G.p())));
    for (int j = 0; j < i; ++j) P.set_comm(i, j, tow(G.comm(H.gens[i], H.gens[j])));
  }
  return P;
}

PcPresentation abelian_presentation(int p, const AbelianType& type0) {
  AbelianType type = type0;
  std::sort(type.rbegin(), type.rend());
  // position of generator (factor f, level l), levels outermost
  std::vector<std::vector<int>> pos(type.size());
  int n = 0;
  int maxl = type.empty() ? 0 : type[0];
  for (int l = 0; l < maxl; ++l)
    for (size_t f = 0; f < type.size(); ++f)
      if (type[f] > l) pos[f].push_back(n++);
  PcPresentation G(p, n);
  for (size_t f = 0; f < type.size(); ++f)
    for (int l = 0; l + 1 < type[f]; ++l) G.set_pow(pos[f][l], Elem::gen(pos[f][l + 1]));
  return G;
}

std::uint64_t elem_index(const Elem& x, int n, int p) {
  std::uint64_t r = 0;
  for (int k = n - 1; k >= 0; --k) r = r * p + x[k];
  return r;
}

Elem elem_from_index(std::uint64_t idx, int n, int p) {
  Elem x;
  for (int k = 0; k < n; ++k) {
    x[k] = static_cast<std::uint8_t>(idx % p);
    idx /= p;
  }
  return x;
}

}  // namespace ptower
