#include "ptower/artin.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ptower {

Subgroup Abelianization::lift(const PcPresentation& G, const Subgroup& S) const {
  std::vector<Elem> gens = derived.gens;
  for (const auto& s : S.gens) gens.push_back(q.lift(s));
  return closure(G, gens);
}

Abelianization abelianization_data(const PcPresentation& G) {
  Abelianization ab;
  ab.derived = derived_subgroup(G, whole_group(G));
  ab.q = quotient(G, ab.derived);
  return ab;
}

namespace {

Elem word_product(const PcPresentation& A, const std::vector<Elem>& basis, const std::vector<int>& c) {
  Elem x;
  for (size_t i = 0; i < basis.size(); ++i)
    if (c[i]) x = A.mul(x, A.pow(basis[i], c[i]));
  return x;
}

// maximal subgroups of K (A abelian)
std::vector<Subgroup> maximal_subgroups(const PcPresentation& A, const Subgroup& K) {
  const int p = A.p();
  std::vector<Elem> pw;
  for (const auto& g : K.gens) pw.push_back(A.pow(g, p));
  Subgroup F = closure(A, pw);
  std::set<int> flead(F.leads.begin(), F.leads.end());
  std::vector<Elem> basis;
  for (size_t i = 0; i < K.gens.size(); ++i)
    if (!flead.count(K.leads[i])) basis.push_back(K.gens[i]);
  const int r = static_cast<int>(basis.size());
  std::vector<Subgroup> out;
  if (r == 0) return out;
  // functionals up to scalars: first nonzero entry 1
  std::vector<int> f(r, 0);
  std::function<void(int, bool)> rec = [&](int i, bool started) {
    if (i == r) {
      if (!started) return;
      FpMat m(1, r);
      for (int j = 0; j < r; ++j) m.at(0, j) = f[j];
      FpMat ns = nullspace(m, p);
      std::vector<Elem> gens = F.gens;
      for (int row = 0; row < ns.rows; ++row) {
        std::vector<int> c(r);
        for (int j = 0; j < r; ++j) c[j] = ns.at(row, j);
        gens.push_back(word_product(A, basis, c));
      }
      out.push_back(closure(A, gens));
      return;
    }
    if (!started) {
      f[i] = 0;
      rec(i + 1, false);
      f[i] = 1;
      rec(i + 1, true);
      f[i] = 0;
    } else {
      for (int v = 0; v < p; ++v) {
        f[i] = v;
        rec(i + 1, true);
      }
      f[i] = 0;
    }
  };
  rec(0, false);
  return out;
}

void sort_unique(std::vector<Subgroup>& v, int n) {
  std::sort(v.begin(), v.end(), [n](const Subgroup& a, const Subgroup& b) { return a.key(n) < b.key(n); });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<Subgroup> layer_in_abelianization(const PcPresentation& A, int n) {
  std::vector<Subgroup> cur{whole_group(A)};
  for (int k = 0; k < n; ++k) {
    std::vector<Subgroup> next;
    for (const auto& K : cur) {
      auto ms = maximal_subgroups(A, K);
      next.insert(next.end(), ms.begin(), ms.end());
    }
    sort_unique(next, A.n());
    cur = std::move(next);
  }
  return cur;
}

std::vector<Subgroup> layer(const PcPresentation& G, int n) {
  auto ab = abelianization_data(G);
  std::vector<Subgroup> out;
  for (const auto& S : layer_in_abelianization(ab.q.pres, n)) out.push_back(ab.lift(G, S));
  return out;
}

Transfer artin_transfer(const PcPresentation& G, const Abelianization& ab, const Subgroup& S, bool alt) {
  const int p = G.p(), n = G.n();
  const PcPresentation& A = ab.q.pres;
  Subgroup H = ab.lift(G, S);
  Subgroup Hd = derived_subgroup(G, H);
  AbelianCoordinates coords(G, H, Hd);
  Transfer T;
  T.target = coords.type();
  T.moduli = coords.moduli();

  Elem h0;
  if (alt)
    for (const auto& h : H.gens) h0 = G.mul(h0, h);
  auto rep = [&](const Elem& x) {
    Elem r = sift_residue(G, H, x);
    return alt ? G.mul(r, h0) : r;
  };
  // transversal: free exponents at the non-lead positions of H
  std::vector<bool> lead(n, false);
  for (int l : H.leads) lead[l] = true;
  std::vector<int> free;
  for (int k = 0; k < n; ++k)
    if (!lead[k]) free.push_back(k);
  std::vector<Elem> trans;
  std::uint64_t cnt = 1;
  for (size_t i = 0; i < free.size(); ++i) cnt *= p;
  for (std::uint64_t c = 0; c < cnt; ++c) {
    Elem x;
    std::uint64_t v = c;
    for (int k : free) {
      x[k] = static_cast<std::uint8_t>(v % p);
      v /= p;
    }
    trans.push_back(alt ? G.mul(x, h0) : x);
  }

  const int m = A.n();
  const size_t r = T.moduli.size();
  for (int k = 0; k < m; ++k) {
    Elem g = ab.q.lift(Elem::gen(k));
    std::vector<std::int64_t> acc(r, 0);
    for (const auto& t : trans) {
      Elem x = G.mul(g, t);
      Elem h = G.mul(G.inv(rep(x)), x);
      auto c = coords.coords(h);
      for (size_t j = 0; j < r; ++j) acc[j] = (acc[j] + c[j]) % T.moduli[j];
    }
    T.images.push_back(acc);
  }
  // kernel by enumeration of A
  std::uint64_t asz = 1;
  for (int k = 0; k < m; ++k) asz *= p;
  if (asz > 50000000) throw Error("artin_transfer: abelianization too large");
  std::vector<Elem> ker;
  for (std::uint64_t idx = 1; idx < asz; ++idx) {
    Elem x = elem_from_index(idx, m, p);
    bool zero = true;
    for (size_t j = 0; j < r && zero; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < m; ++k) s = (s + static_cast<std::int64_t>(x[k]) * T.images[k][j]) % T.moduli[j];
      zero = s == 0;
    }
    if (zero) ker.push_back(x);
  }
  T.kernel = closure(A, ker);
  return T;
}

ArtinPattern artin_pattern(const PcPresentation& G, int max_layer) {
  ArtinPattern ap;
  ap.p = G.p();
  auto ab = abelianization_data(G);
  ap.A = ab.q.pres;
  const int v = ap.A.n();
  const int top = max_layer < 0 ? v : std::min(v, max_layer);
  const std::string whole = whole_group(ap.A).key(v);
  for (int n = 0; n <= top; ++n) {
    LayerData L;
    L.index_log = n;
    auto mem = layer_in_abelianization(ap.A, n);
    std::vector<Transfer> tr;
    for (const auto& S : mem) tr.push_back(artin_transfer(G, ab, S));
    std::vector<int> ord(mem.size());
    for (size_t i = 0; i < ord.size(); ++i) ord[i] = static_cast<int>(i);
    // sorted keys already break ties; stable sort by target type descending
    std::stable_sort(ord.begin(), ord.end(),
                     [&](int a, int b) { return type_greater(tr[a].target, tr[b].target); });
    for (int i : ord) {
      L.members.push_back(mem[i]);
      L.ttt.push_back(tr[i].target);
      L.kernels.push_back(tr[i].kernel);
    }
    ap.layers.push_back(std::move(L));
  }
  ap.tau0 = ap.layers[0].ttt[0];
  std::map<std::string, int> pos1;
  if (ap.layers.size() > 1)
    for (size_t i = 0; i < ap.layers[1].members.size(); ++i) pos1[ap.layers[1].members[i].key(v)] = static_cast<int>(i) + 1;
  for (auto& L : ap.layers)
    for (const auto& K : L.kernels) {
      auto key = K.key(v);
      if (key == whole)
        L.digits.push_back(0);
      else if (auto it = pos1.find(key); it != pos1.end())
        L.digits.push_back(it->second);
      else
        L.digits.push_back(-1);
    }
  return ap;
}

namespace {

void sort_types_desc(std::vector<AbelianType>& v) { std::sort(v.begin(), v.end(), type_greater); }

}  // namespace

Ipad ipad(const PcPresentation& G) {
  auto ap = artin_pattern(G, 1);
  Ipad r{ap.tau0, ap.tau1()};
  sort_types_desc(r.tau1);
  return r;
}

std::vector<int> ipod(const PcPresentation& G) { return artin_pattern(G, 1).kappa1(); }

Ipad2 ipad2(const PcPresentation& G) {
  Ipad2 r;
  r.tau0 = abelianization(G);
  for (const auto& H : layer(G, 1)) r.components.push_back(ipad(induced_presentation(G, H)));
  std::sort(r.components.begin(), r.components.end());
  return r;
}

std::string iterated_ipad(const PcPresentation& G, int depth) {
  if (depth <= 1) {
    auto r = ipad(G);
    return "[" + render_type(r.tau0) + ";" + render_type_list(r.tau1) + "]";
  }
  std::vector<std::string> parts;
  for (const auto& H : layer(G, 1)) parts.push_back(iterated_ipad(induced_presentation(G, H), depth - 1));
  std::sort(parts.begin(), parts.end());
  std::string s = "[" + render_type(abelianization(G)) + ";";
  for (size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s + "]";
}

// --- TKT combinatorics -------------------------------------------------------

namespace {

struct TktSearch {
  int m;
  std::vector<int> f;  // target node or -1 for total kernel
  std::vector<int> col;
  std::vector<int> lab, order;
  int nlab = 0;
  std::vector<std::pair<int, int>> cur, best;
  std::vector<int> best_order;

  // key of x under automorphisms fixing all labelled nodes
  std::string pathkey(int x, std::map<int, std::string>& memo) {
    if (auto it = memo.find(x); it != memo.end()) return it->second;
    std::string s;
    if (x < 0)
      s = "S";
    else if (lab[x] >= 0)
      s = "L" + std::to_string(lab[x]);
    else if (on_cycle(x))
      s = "C" + rot(x);
    else
      s = sub(x) + ">" + pathkey(f[x], memo);
    memo[x] = s;
    return s;
  }
  bool on_cycle(int x) {
    // all-unlabelled cycle through x
    int y = x;
    for (int k = 0; k < m; ++k) {
      y = f[y];
      if (y < 0 || lab[y] >= 0) return false;
      if (y == x) return true;
    }
    return false;
  }
  std::string sub(int v, int skip = -2) {
    std::vector<std::string> ch;
    for (int u = 0; u < m; ++u) {
      if (f[u] != v || u == skip) continue;
      if (lab[u] >= 0)
        ch.push_back("L" + std::to_string(lab[u]));
      else if (!on_cycle(u))
        ch.push_back(sub(u));
    }
    std::sort(ch.begin(), ch.end());
    std::string s = "(" + std::to_string(col[v]);
    for (auto& c : ch) s += c;
    return s + ")";
  }
  std::string rot(int c) {
    std::string s;
    int y = c;
    do {
      s += sub(y);
      y = f[y];
    } while (y != c);
    return s;
  }

  // -1, 0, 1: cur[0..pos] against best[0..pos]
  int cmp_prefix(int pos) const {
    if (best.empty()) return -1;
    for (int i = 0; i <= pos; ++i) {
      if (cur[i] < best[i]) return -1;
      if (cur[i] > best[i]) return 1;
    }
    return 0;
  }

  void dfs(int pos) {
    if (pos == m) {
      if (cmp_prefix(m - 1) < 0) {
        best = cur;
        best_order = order;
      }
      return;
    }
    std::vector<int> cand;
    const bool forced = order[pos] >= 0;
    if (forced) {
      cand.push_back(order[pos]);
    } else {
      std::map<int, std::string> memo;
      std::set<std::string> seen;
      for (int x = 0; x < m; ++x)
        if (lab[x] < 0 && seen.insert(pathkey(x, memo)).second) cand.push_back(x);
    }
    for (int x : cand) {
      const int saved_nlab = nlab;
      if (!forced) {
        lab[x] = nlab;
        order[nlab++] = x;
      }
      int extra = -1, digit;
      if (f[x] < 0)
        digit = 0;
      else if (lab[f[x]] >= 0)
        digit = lab[f[x]] + 1;
      else {
        extra = f[x];
        lab[extra] = nlab;
        order[nlab++] = extra;
        digit = nlab;
      }
      cur[pos] = {col[x], digit};
      if (cmp_prefix(pos) <= 0) dfs(pos + 1);
      if (extra >= 0) lab[extra] = -1;
      if (!forced) lab[x] = -1;
      while (nlab > saved_nlab) order[--nlab] = -1;
    }
  }
};

}  // namespace

CanonicalTkt tkt_canonical(const std::vector<int>& digits, const std::vector<int>& colors) {
  TktSearch s;
  s.m = static_cast<int>(digits.size());
  for (int d : digits) {
    if (d < 0 || d > s.m) throw Error("tkt_canonical: digit out of range");
    s.f.push_back(d - 1);
  }
  s.col = colors.empty() ? std::vector<int>(s.m, 0) : colors;
  if (static_cast<int>(s.col.size()) != s.m) throw Error("tkt_canonical: colour count mismatch");
  s.lab.assign(s.m, -1);
  s.order.assign(s.m, -1);
  s.cur.resize(s.m);
  s.dfs(0);
  CanonicalTkt r;
  for (auto& [c, d] : s.best) {
    r.colors.push_back(c);
    r.digits.push_back(d);
  }
  r.order = s.best_order;
  return r;
}

int eta(const std::vector<int>& d) {
  int c = 0;
  for (size_t i = 0; i < d.size(); ++i)
    if (d[i] == 0 || d[i] == static_cast<int>(i) + 1) ++c;
  return c;
}

int eta_fixed_points(const std::vector<int>& d) {
  int c = 0;
  for (size_t i = 0; i < d.size(); ++i)
    if (d[i] == static_cast<int>(i) + 1) ++c;
  return c;
}

int eta_targets(const std::vector<AbelianType>& tau1, const AbelianType& t) {
  return static_cast<int>(std::count(tau1.begin(), tau1.end(), t));
}

bool is_permutation(const std::vector<int>& d) {
  std::vector<bool> seen(d.size() + 1, false);
  for (int x : d) {
    if (x < 1 || x > static_cast<int>(d.size()) || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

std::vector<int> cycle_pattern(const std::vector<int>& d) {
  std::vector<int> out;
  if (!is_permutation(d)) return out;
  std::vector<bool> done(d.size(), false);
  for (size_t i = 0; i < d.size(); ++i) {
    if (done[i]) continue;
    int len = 0;
    for (size_t j = i; !done[j]; j = d[j] - 1) {
      done[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

std::string render_cycles(const std::vector<int>& cyc) {
  std::string s;
  for (int c : cyc) s += "(" + std::to_string(c) + ")";
  return s;
}

// --- rendering ---------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

// split at separators outside (), [], {}
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::string unwrap(const std::string& s, char open, char close) {
  auto t = trim(s);
  if (t.size() < 2 || t.front() != open || t.back() != close) throw Error("expected " + std::string(1, open) + "...: " + s);
  return t.substr(1, t.size() - 2);
}

}  // namespace

std::string render_type_list(const std::vector<AbelianType>& ts) {
  std::string s;
  for (size_t i = 0; i < ts.size();) {
    size_t j = i;
    while (j < ts.size() && ts[j] == ts[i]) ++j;
    if (!s.empty()) s += ",";
    if (j - i == 1)
      s += render_type(ts[i]);
    else
      s += "(" + render_type(ts[i]) + ")^" + std::to_string(j - i);
    i = j;
  }
  return s;
}

std::vector<AbelianType> parse_type_list(const std::string& s0) {
  std::string s = trim(s0);
  if (!s.empty() && s.front() == '[') s = unwrap(s, '[', ']');
  std::vector<AbelianType> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split_top(s, ',')) {
    if (!item.empty() && item.front() == '(') {
      auto close = item.find(')');
      if (close == std::string::npos || close + 1 >= item.size() || item[close + 1] != '^')
        throw Error("bad type list item: " + item);
      AbelianType t = parse_type(item.substr(1, close - 1));
      int k = std::stoi(item.substr(close + 2));
      for (int i = 0; i < k; ++i) out.push_back(t);
    } else {
      out.push_back(parse_type(item));
    }
  }
  return out;
}

std::string render_digits(const std::vector<int>& d) {
  std::string s = "(";
  for (size_t i = 0; i < d.size();) {
    size_t j = i;
    while (j < d.size() && d[j] == d[i]) ++j;
    if (i) s += ",";
    s += d[i] < 0 ? "*" : std::to_string(d[i]);
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s + ")";
}

std::vector<int> parse_digits(const std::string& s0) {
  std::string s = unwrap(s0, '(', ')');
  std::vector<int> out;
  if (s.find(',') == std::string::npos && s.find('^') == std::string::npos) {
    for (char c : s) {
      if (c < '0' || c > '9') throw Error("bad digit string: " + s0);
      out.push_back(c - '0');
    }
    return out;
  }
  for (const auto& item : split_top(s, ',')) {
    auto caret = item.find('^');
    int v = std::stoi(item.substr(0, caret));
    int k = caret == std::string::npos ? 1 : std::stoi(item.substr(caret + 1));
    for (int i = 0; i < k; ++i) out.push_back(v);
  }
  return out;
}

namespace {

std::string render_ipad(const Ipad& c) { return "[" + render_type(c.tau0) + ";" + render_type_list(c.tau1) + "]"; }

Ipad parse_ipad(const std::string& s) {
  auto parts = split_top(unwrap(s, '[', ']'), ';');
  if (parts.size() != 2) throw Error("bad ipad component: " + s);
  Ipad r{parse_type(parts[0]), parse_type_list(parts[1])};
  sort_types_desc(r.tau1);
  return r;
}

}  // namespace

std::string PatternSpec::render() const {
  std::vector<std::string> tok;
  if (tau0) tok.push_back("tau0=" + render_type(*tau0));
  for (const auto& [n, ts] : tau) {
    tok.push_back("tau" + std::to_string(n) + "=[" + render_type_list(ts) + "]");
    if (n == 1 && kappa1) tok.push_back("kappa1=" + render_digits(*kappa1));
  }
  if (kappa1 && !tau.count(1)) tok.push_back("kappa1=" + render_digits(*kappa1));
  if (!ipad2.empty()) {
    std::string s = "ipad2=[";
    for (size_t i = 0; i < ipad2.size(); ++i) s += (i ? "," : "") + render_ipad(ipad2[i]);
    tok.push_back(s + "]");
  }
  std::string out;
  for (size_t i = 0; i < tok.size(); ++i) out += (i ? " " : "") + tok[i];
  return out;
}

PatternSpec parse_pattern_spec(const std::string& s) {
  PatternSpec spec;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error("pattern token without '=': " + tok);
    std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
    if (k == "tau0") {
      spec.tau0 = parse_type(v);
    } else if (k == "kappa1" || k == "kappa") {
      spec.kappa1 = parse_digits(v);
    } else if (k == "ipad2") {
      for (const auto& c : split_top(unwrap(v, '[', ']'), ',')) spec.ipad2.push_back(parse_ipad(c));
      std::sort(spec.ipad2.begin(), spec.ipad2.end());
    } else if (k.rfind("tau", 0) == 0) {
      spec.tau[std::stoi(k.substr(3))] = parse_type_list(v);
    } else {
      throw Error("unknown pattern key: " + k);
    }
  }
  return spec;
}

PatternSpec spec_of(const ArtinPattern& ap, int depth) {
  PatternSpec s;
  s.tau0 = ap.tau0;
  for (int n = 1; n <= depth && n < static_cast<int>(ap.layers.size()); ++n) s.tau[n] = ap.layers[n].ttt;
  if (depth >= 1 && ap.layers.size() > 1) {
    auto d = ap.kappa1();
    if (std::all_of(d.begin(), d.end(), [](int x) { return x >= 0; })) s.kappa1 = d;
  }
  return s;
}

std::string render_pattern(const ArtinPattern& ap) { return spec_of(ap, static_cast<int>(ap.layers.size()) - 1).render(); }

// --- matching ----------------------------------------------------------------

namespace {

bool type_rel(const AbelianType& x, const AbelianType& t, MatchMode mode) {
  return mode == MatchMode::Equal ? x == t : type_leq(x, t);
}

// perfect matching of xs onto ts under type_rel
bool multiset_match(const std::vector<AbelianType>& xs, const std::vector<AbelianType>& ts, MatchMode mode) {
  if (xs.size() != ts.size()) return false;
  if (mode == MatchMode::Equal) {
    auto a = xs, b = ts;
    sort_types_desc(a);
    sort_types_desc(b);
    return a == b;
  }
  const size_t m = xs.size();
  std::vector<int> match_t(m, -1);
  std::function<bool(size_t, std::vector<bool>&)> aug = [&](size_t i, std::vector<bool>& vis) {
    for (size_t j = 0; j < m; ++j) {
      if (vis[j] || !type_rel(xs[i], ts[j], mode)) continue;
      vis[j] = true;
      if (match_t[j] < 0 || aug(match_t[j], vis)) {
        match_t[j] = static_cast<int>(i);
        return true;
      }
    }
    return false;
  };
  for (size_t i = 0; i < m; ++i) {
    std::vector<bool> vis(m, false);
    if (!aug(i, vis)) return false;
  }
  return true;
}

struct LayerOneMatcher {
  const std::vector<AbelianType>& xt;
  const std::vector<int>& xd;
  const std::vector<AbelianType>* tt;  // may be null
  const std::vector<int>& td;
  MatchMode mode;
  int m;
  std::vector<int> sigma;
  std::vector<bool> used;

  bool kernel_ok(int i) const {
    const int dx = xd[i], dt = td[sigma[i]];
    if (dx < 0) return false;
    if (dx == 0) return mode == MatchMode::Leq || dt == 0;
    if (dt == 0) return false;
    const int j = dx - 1;
    if (sigma[j] < 0) return true;  // decided later
    return dt == sigma[j] + 1;
  }
  bool consistent_upto() const {
    for (int i = 0; i < m; ++i)
      if (sigma[i] >= 0 && !kernel_ok(i)) return false;
    return true;
  }
  bool run(int i) {
    if (i == m) return true;
    for (int t = 0; t < m; ++t) {
      if (used[t]) continue;
      if (tt && !type_rel(xt[i], (*tt)[t], mode)) continue;
      sigma[i] = t;
      used[t] = true;
      if (consistent_upto() && run(i + 1)) return true;
      used[t] = false;
      sigma[i] = -1;
    }
    return false;
  }
};

}  // namespace

bool match_spec(const ArtinPattern& ap, const PatternSpec& spec, MatchMode mode, const Ipad2* group_ipad2) {
  if (spec.tau0 && ap.tau0 != *spec.tau0) return false;
  for (const auto& [n, ts] : spec.tau) {
    if (n >= static_cast<int>(ap.layers.size())) return false;
    if (n == 1 && spec.kappa1) continue;
    if (!multiset_match(ap.layers[n].ttt, ts, mode)) return false;
  }
  if (spec.kappa1) {
    if (ap.layers.size() < 2) return false;
    const auto& L = ap.layers[1];
    const int m = static_cast<int>(L.members.size());
    if (static_cast<int>(spec.kappa1->size()) != m) return false;
    const std::vector<AbelianType>* tt = nullptr;
    if (auto it = spec.tau.find(1); it != spec.tau.end()) {
      if (static_cast<int>(it->second.size()) != m) return false;
      tt = &it->second;
    }
    LayerOneMatcher M{L.ttt, L.digits, tt, *spec.kappa1, mode, m, std::vector<int>(m, -1), std::vector<bool>(m, false)};
    if (!M.run(0)) return false;
  }
  if (!spec.ipad2.empty() && mode == MatchMode::Equal) {
    if (!group_ipad2) return false;
    std::vector<bool> used(group_ipad2->components.size(), false);
    for (const auto& c : spec.ipad2) {
      bool found = false;
      for (size_t j = 0; j < used.size() && !found; ++j)
        if (!used[j] && group_ipad2->components[j] == c) used[j] = found = true;
      if (!found) return false;
    }
  }
  return true;
}

bool pattern_leq(const ArtinPattern& a, const ArtinPattern& b) {
  if (a.tau0 != b.tau0 || !(a.A == b.A)) return false;
  const int v = a.A.n();
  const size_t nl = std::min(a.layers.size(), b.layers.size());
  for (size_t n = 0; n < nl; ++n) {
    std::map<std::string, int> posb;
    for (size_t i = 0; i < b.layers[n].members.size(); ++i) posb[b.layers[n].members[i].key(v)] = static_cast<int>(i);
    const auto& La = a.layers[n];
    for (size_t i = 0; i < La.members.size(); ++i) {
      auto it = posb.find(La.members[i].key(v));
      if (it == posb.end()) return false;
      const auto& Lb = b.layers[n];
      if (!type_leq(La.ttt[i], Lb.ttt[it->second])) return false;
      if (!is_subgroup_of(a.A, Lb.kernels[it->second], La.kernels[i])) return false;
    }
  }
  return true;
}

}  // namespace ptower
