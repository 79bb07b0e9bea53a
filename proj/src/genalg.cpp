#include "ptower/genalg.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

namespace ptower {

std::vector<int> find_definitions(const PcPresentation& G, int d) {
  const int n = G.n();
  std::vector<int> defs(n, -1);
  std::vector<bool> used(G.relation_count(), false);
  for (int k = d; k < n; ++k) {
    for (int r = 0; r < G.relation_count(); ++r) {
      if (used[r]) continue;
      const Elem& w = G.relation_rhs(r);
      if (w[k] != 1) continue;
      bool tail = false;
      for (int m = k + 1; m < n && !tail; ++m) tail = w[m] != 0;
      if (tail) continue;
      defs[k] = r;
      used[r] = true;
      break;
    }
    if (defs[k] < 0)
      throw Error("non-minimal generating presentation: generator " + std::to_string(k + 1) +
                  " has no definition");
  }
  return defs;
}

Subgroup PCover::multiplicator() const {
  std::vector<Elem> g;
  for (int f = 0; f < mu; ++f) g.push_back(Elem::gen(n + f));
  return closure(cover, g);
}

namespace {

// tail coordinates of an element that must lie in the tail segment
std::vector<int> tail_part(const Elem& x, int n, int t) {
  for (int k = 0; k < n; ++k)
    if (x[k]) throw Error("element expected in the multiplicator");
  std::vector<int> v(t);
  for (int f = 0; f < t; ++f) v[f] = x[n + f];
  return v;
}

FpMat subgroup_rows(const Subgroup& S, int n, int t, int p) {
  FpMat m(S.size_log(), t);
  for (int i = 0; i < S.size_log(); ++i) {
    auto v = tail_part(S.gens[i], n, t);
    for (int f = 0; f < t; ++f) m.at(i, f) = v[f];
  }
  rref(m, p);
  return m;
}

// relation of G written into a longer presentation
void set_rel(PcPresentation& P, const PcPresentation::RelLhs& l, const Elem& w) {
  if (l.is_pow)
    P.set_pow(l.j, w);
  else
    P.set_comm(l.j, l.i, w);
}

// Tails appended to every relation in `tailed`; returns the extension and the
// tail index per relation (-1 if untailed), plus the rref consistency rows.
struct Tailed {
  PcPresentation E;
  std::vector<int> tail_of;
  int T = 0;
  FpMat rel;
  std::vector<int> piv;
};

Tailed add_tails(const PcPresentation& G, const std::vector<bool>& tailed) {
  const int n = G.n(), p = G.p(), R = G.relation_count();
  Tailed t;
  t.tail_of.assign(R, -1);
  for (int r = 0; r < R; ++r)
    if (tailed[r]) t.tail_of[r] = t.T++;
  if (n + t.T > kMaxGens) throw Error("p-cover exceeds generator capacity");
  t.E = PcPresentation(p, n + t.T);
  for (int k = 0; k < n; ++k) t.E.set_weight(k, G.weight(k));
  for (int r = 0; r < R; ++r) {
    Elem w = G.relation_rhs(r);
    if (t.tail_of[r] >= 0) w[n + t.tail_of[r]] = 1;
    if (!w.is_identity(n + t.T)) set_rel(t.E, G.relation_lhs(r), w);
  }
  auto ov = t.E.overlaps(n);
  FpMat m(static_cast<int>(ov.size()), t.T);
  int row = 0;
  for (const auto& o : ov) {
    for (int k = 0; k < n; ++k)
      if (o.lhs[k] != o.rhs[k]) throw Error("p_cover: input presentation is inconsistent");
    for (int f = 0; f < t.T; ++f) m.at(row, f) = ((o.lhs[n + f] - o.rhs[n + f]) % p + p) % p;
    ++row;
  }
  t.piv = rref(m, p);
  t.rel = m;
  return t;
}

}  // namespace

PCover p_cover(const PcPresentation& G) {
  const int n = G.n(), p = G.p(), R = G.relation_count();
  PCover pc;
  pc.n = n;
  pc.d = generator_rank(G);
  pc.cls = nilpotency_class(G);
  auto defs = find_definitions(G, pc.d);
  std::vector<bool> tailed(R, true);
  for (int k = pc.d; k < n; ++k) tailed[defs[k]] = false;
  Tailed t = add_tails(G, tailed);

  std::vector<int> free_idx(t.T, -1);
  std::vector<bool> is_piv(t.T, false);
  for (int c : t.piv) is_piv[c] = true;
  std::vector<int> frees;
  for (int f = 0; f < t.T; ++f)
    if (!is_piv[f]) {
      free_idx[f] = static_cast<int>(frees.size());
      frees.push_back(f);
    }
  pc.mu = static_cast<int>(frees.size());
  PcPresentation C(p, n + pc.mu);
  for (int k = 0; k < n; ++k) C.set_weight(k, G.weight(k));
  for (int f = 0; f < pc.mu; ++f) C.set_weight(n + f, pc.cls + 1);
  pc.defs.assign(n + pc.mu, -1);
  for (int k = pc.d; k < n; ++k) pc.defs[k] = C.relation_id(G.relation_lhs(defs[k]));
  for (int r = 0; r < R; ++r) {
    Elem w = G.relation_rhs(r);
    int tl = t.tail_of[r];
    if (tl >= 0) {
      if (!is_piv[tl]) {
        w[n + free_idx[tl]] = 1;
        pc.defs[n + free_idx[tl]] = C.relation_id(G.relation_lhs(r));
      } else {
        int row = static_cast<int>(std::find(t.piv.begin(), t.piv.end(), tl) - t.piv.begin());
        for (int f = 0; f < pc.mu; ++f) {
          int c = t.rel.at(row, frees[f]);
          if (c) w[n + f] = static_cast<std::uint8_t>((p - c) % p);
        }
      }
    }
    if (!w.is_identity(n + pc.mu)) set_rel(C, G.relation_lhs(r), w);
  }
  pc.cover = C;
  auto lcs = lower_central_series(C);
  pc.nucleus = static_cast<int>(lcs.size()) > pc.cls
                   ? subgroup_rows(lcs[pc.cls], n, pc.mu, p)
                   : FpMat(0, pc.mu);
  auto pser = p_central_series(G);
  int pcls = static_cast<int>(pser.size()) - 1;
  auto cps = p_central_series(C);
  pc.p_nucleus = static_cast<int>(cps.size()) > pcls ? subgroup_rows(cps[pcls], n, pc.mu, p)
                                                     : FpMat(0, pc.mu);
  return pc;
}

int relation_rank(const PcPresentation& G) {
  const int n = G.n(), R = G.relation_count();
  if (n + R > kMaxGens) return p_cover(G).mu;
  Tailed t = add_tails(G, std::vector<bool>(R, true));
  int d = generator_rank(G);
  return t.T - static_cast<int>(t.piv.size()) - (n - d);
}

Elem apply(const PcPresentation& G, const Automorphism& a, const Elem& x) {
  Elem r;
  for (int k = 0; k < G.n(); ++k)
    if (x[k]) r = G.mul(r, G.pow(a.img[k], x[k]));
  return r;
}

Automorphism compose(const PcPresentation& G, const Automorphism& a, const Automorphism& b) {
  Automorphism c;
  c.img.resize(G.n());
  for (int k = 0; k < G.n(); ++k) c.img[k] = apply(G, b, a.img[k]);
  return c;
}

Automorphism identity_automorphism(const PcPresentation& G) {
  Automorphism a;
  for (int k = 0; k < G.n(); ++k) a.img.push_back(Elem::gen(k));
  return a;
}

namespace {

Elem eval_lhs(const PcPresentation& G, const PcPresentation::RelLhs& l, const std::vector<Elem>& img) {
  if (l.is_pow) return G.pow(img[l.j], G.p());
  return G.comm(img[l.j], img[l.i]);
}

Elem eval_word(const PcPresentation& G, const Elem& w, const std::vector<Elem>& img, int upto) {
  Elem r;
  for (int m = 0; m < upto; ++m)
    if (w[m]) r = G.mul(r, G.pow(img[m], w[m]));
  return r;
}

}  // namespace

Automorphism extend_images(const PcPresentation& G, const std::vector<int>& defs,
                           const std::vector<Elem>& gen_images) {
  Automorphism a;
  a.img = gen_images;
  a.img.resize(G.n());
  for (int k = static_cast<int>(gen_images.size()); k < G.n(); ++k) {
    int r = defs[k];
    Elem L = eval_lhs(G, G.relation_lhs(r), a.img);
    Elem w = eval_word(G, G.relation_rhs(r), a.img, k);
    a.img[k] = G.mul(G.inv(w), L);
  }
  return a;
}

bool is_automorphism(const PcPresentation& G, const Automorphism& a) {
  if (static_cast<int>(a.img.size()) != G.n()) return false;
  for (int r = 0; r < G.relation_count(); ++r) {
    Elem L = eval_lhs(G, G.relation_lhs(r), a.img);
    Elem R = eval_word(G, G.relation_rhs(r), a.img, G.n());
    if (!(L == R)) return false;
  }
  // bijective iff the images generate modulo the Frattini subgroup
  Subgroup img = closure(G, a.img);
  return img.size_log() == G.n();
}

Automorphism power(const PcPresentation& G, const Automorphism& a, std::uint64_t k) {
  Automorphism r = identity_automorphism(G), b = a;
  while (k) {
    if (k & 1) r = compose(G, r, b);
    k >>= 1;
    if (k) b = compose(G, b, b);
  }
  return r;
}

// --- stabiliser chain on group elements ------------------------------------

AutChain::AutChain(const PcPresentation& G, int d) : G_(&G), d_(d) {
  double np = 1;
  for (int k = 0; k < G.n(); ++k) np *= G.p();
  if (np > 6e7) throw Error("automorphism chain: group too large to enumerate points");
  npts_ = static_cast<std::uint64_t>(np);
  levels_.resize(d);
  for (int l = 0; l < d; ++l) {
    auto& L = levels_[l];
    L.base = static_cast<std::uint32_t>(elem_index(Elem::gen(l), G.n(), G.p()));
    L.via.assign(npts_, -1);
    L.prev.assign(npts_, 0);
    L.via[L.base] = -2;
    L.orbit.push_back(L.base);
  }
}

std::pair<Automorphism, int> AutChain::sift(Automorphism a) const {
  const int n = G_->n(), p = G_->p();
  for (int l = 0; l < d_; ++l) {
    const auto& L = levels_[l];
    std::uint32_t x = static_cast<std::uint32_t>(elem_index(a.img[l], n, p));
    if (L.via[x] == -1) return {a, l};
    while (x != L.base) {
      int g = L.via[x];
      a = compose(*G_, a, strong_inv_[g]);
      x = L.prev[x];
    }
  }
  return {a, d_};
}

bool AutChain::contains(const Automorphism& a) const {
  auto [r, l] = sift(a);
  return l == d_;
}

void AutChain::extend_orbit(int level) {
  auto& L = levels_[level];
  const int n = G_->n(), p = G_->p();
  int newg = L.gens.back();
  // new generator on old points, then all generators on new points
  std::vector<std::uint32_t> queue;
  for (std::uint32_t x : L.orbit) {
    Elem y = apply(*G_, strong_[newg], elem_from_index(x, n, p));
    auto yi = static_cast<std::uint32_t>(elem_index(y, n, p));
    if (L.via[yi] == -1) {
      L.via[yi] = newg;
      L.prev[yi] = x;
      queue.push_back(yi);
    }
  }
  for (size_t q = 0; q < queue.size(); ++q) {
    std::uint32_t x = queue[q];
    L.orbit.push_back(x);
    Elem ex = elem_from_index(x, n, p);
    for (int g : L.gens) {
      auto yi = static_cast<std::uint32_t>(elem_index(apply(*G_, strong_[g], ex), n, p));
      if (L.via[yi] == -1) {
        L.via[yi] = g;
        L.prev[yi] = x;
        queue.push_back(yi);
      }
    }
  }
}

bool AutChain::add(const Automorphism& a) {
  auto [r, l] = sift(a);
  if (l == d_) return false;
  strong_.push_back(r);
  // inverse as the last power before the identity
  Automorphism inv = r, nxt = compose(*G_, r, r);
  while (true) {
    bool id = true;
    for (int k = 0; k < d_ && id; ++k) id = nxt.img[k] == Elem::gen(k);
    if (id) break;
    inv = nxt;
    nxt = compose(*G_, nxt, r);
  }
  strong_inv_.push_back(inv);
  int idx = static_cast<int>(strong_.size()) - 1;
  for (int i = 0; i <= l; ++i) {
    levels_[i].gens.push_back(idx);
    extend_orbit(i);
  }
  return true;
}

std::uint64_t AutChain::order() const {
  unsigned __int128 o = 1;
  for (const auto& L : levels_) o *= L.orbit.size();
  if (o > static_cast<unsigned __int128>(~std::uint64_t(0))) throw Error("automorphism group order overflow");
  return static_cast<std::uint64_t>(o);
}

// --- roots -----------------------------------------------------------------

AutGroup root_automorphisms(const PcPresentation& G) {
  const int p = G.p(), n = G.n();
  int d = generator_rank(G);
  if (d != n) return automorphisms_bruteforce(G);
  AutGroup A;
  auto from_matrix = [&](const FpMat& M) {
    Automorphism a;
    for (int i = 0; i < d; ++i) {
      Elem x;
      for (int j = 0; j < d; ++j) x[j] = static_cast<std::uint8_t>(M.at(i, j));
      a.img.push_back(x);
    }
    return a;
  };
  // primitive root for the diagonal generators
  int w = 1;
  for (int c = 2; c < p && w == 1; ++c) {
    int o = 1, x = c;
    while (x != 1) {
      x = x * c % p;
      ++o;
    }
    if (o == p - 1) w = c;
  }
  for (int i = 0; i < d; ++i) {
    if (p > 2) {
      FpMat D = FpMat::identity(d);
      D.at(i, i) = w;
      A.gens.push_back(from_matrix(D));
    }
    for (int j = 0; j < d; ++j)
      if (i != j) {
        FpMat T = FpMat::identity(d);
        T.at(i, j) = 1;
        A.gens.push_back(from_matrix(T));
      }
  }
  unsigned __int128 o = 1, pd = 1;
  for (int i = 0; i < d; ++i) pd *= p;
  unsigned __int128 pi = 1;
  for (int i = 0; i < d; ++i) {
    o *= pd - pi;
    pi *= p;
  }
  A.order = static_cast<std::uint64_t>(o);
  if (A.gens.empty()) A.gens.push_back(identity_automorphism(G));
  return A;
}

AutGroup automorphisms_bruteforce(const PcPresentation& G, std::uint64_t max_candidates) {
  const int n = G.n(), p = G.p();
  int d = generator_rank(G);
  auto defs = find_definitions(G, d);
  std::uint64_t order = 1;
  for (int k = 0; k < n; ++k) order *= p;
  double cand = 1;
  for (int i = 0; i < d; ++i) cand *= static_cast<double>(order);
  if (cand > static_cast<double>(max_candidates))
    throw Error("automorphism search refused: group too large for the fallback");
  Subgroup phi = frattini(G, whole_group(G));
  Quotient F = quotient(G, phi);
  AutChain chain(G, d);
  std::vector<std::uint64_t> idx(d, 0);
  std::vector<Elem> imgs(d);
  while (true) {
    for (int i = 0; i < d; ++i) imgs[i] = elem_from_index(idx[i], n, p);
    FpMat M(d, d);
    for (int i = 0; i < d; ++i) {
      Elem f = F.project(G, imgs[i]);
      for (int j = 0; j < d; ++j) M.at(i, j) = f[j];
    }
    if (det(M, p)) {
      Automorphism a = extend_images(G, defs, imgs);
      if (is_automorphism(G, a)) chain.add(a);
    }
    int i = 0;
    while (i < d && ++idx[i] == order) idx[i++] = 0;
    if (i == d) break;
  }
  AutGroup A;
  A.gens = chain.strong_generators();
  if (A.gens.empty()) A.gens.push_back(identity_automorphism(G));
  A.order = chain.order();
  return A;
}

// --- lifting and descendants -------------------------------------------------

std::shared_ptr<const LiftContext> make_lift_context(const PcPresentation& G, const AutGroup& aut) {
  auto ctx = std::make_shared<LiftContext>();
  ctx->G = G;
  ctx->pc = p_cover(G);
  ctx->aut = aut;
  const auto& pc = ctx->pc;
  for (const auto& a : aut.gens) {
    std::vector<Elem> gi(a.img.begin(), a.img.begin() + pc.d);
    Automorphism L = extend_images(pc.cover, pc.defs, gi);
    FpMat M(pc.mu, pc.mu);
    for (int f = 0; f < pc.mu; ++f) {
      auto v = tail_part(L.img[pc.n + f], pc.n, pc.mu);
      for (int g = 0; g < pc.mu; ++g) M.at(f, g) = v[g];
    }
    ctx->lifted.push_back(std::move(L));
    ctx->mats.push_back(std::move(M));
    ctx->aut_inv.push_back(power(G, a, aut.order - 1));
  }
  return ctx;
}

std::uint64_t allowable_count(int p, int mu, int nu, int s) {
  if (s > nu || s < 0) return 0;
  unsigned __int128 num = 1, den = 1;
  for (int i = 0; i < s; ++i) {
    unsigned __int128 a = 1, b = 1;
    for (int k = 0; k < nu - i; ++k) a *= p;
    for (int k = 0; k < i + 1; ++k) b *= p;
    num *= a - 1;
    den *= b - 1;
  }
  unsigned __int128 r = num / den;
  for (int k = 0; k < s * (mu - nu); ++k) r *= p;
  return static_cast<std::uint64_t>(r);
}

namespace {

FpMat act(const FpMat& U, const FpMat& A, int p) {
  FpMat r = mat_mul(U, A, p);
  rref(r, p);
  return r;
}

// all s-dim W (rows = functionals) with W L^T of full rank s, returned as
// the annihilators U = W^0, dim mu - s
std::vector<FpMat> allowable_subspaces(int p, int mu, const FpMat& L, int s, std::uint64_t cap) {
  std::vector<FpMat> out;
  if (allowable_count(p, mu, L.rows, s) > cap)
    throw Error("too many allowable subgroups for enumeration");
  FpMat LT = transpose(L);
  std::vector<int> piv(s);
  std::iota(piv.begin(), piv.end(), 0);
  while (true) {
    // free entries: row r, column c > piv[r], c not a pivot
    std::vector<std::pair<int, int>> freepos;
    for (int r = 0; r < s; ++r)
      for (int c = piv[r] + 1; c < mu; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) freepos.push_back({r, c});
    std::vector<int> val(freepos.size(), 0);
    while (true) {
      FpMat W(s, mu);
      for (int r = 0; r < s; ++r) W.at(r, piv[r]) = 1;
      for (size_t i = 0; i < freepos.size(); ++i) W.at(freepos[i].first, freepos[i].second) = val[i];
      if (rank(mat_mul(W, LT, p), p) == s) out.push_back(nullspace(W, p));
      size_t i = 0;
      while (i < val.size() && ++val[i] == p) val[i++] = 0;
      if (i == val.size()) break;
    }
    int k = s - 1;
    while (k >= 0 && piv[k] == mu - s + k) --k;
    if (k < 0) break;
    ++piv[k];
    for (int j = k + 1; j < s; ++j) piv[j] = piv[j - 1] + 1;
  }
  return out;
}

Subgroup tail_subgroup(const FpMat& U, int n) {
  Subgroup S;
  for (int r = 0; r < U.rows; ++r) {
    Elem x;
    int lead = -1;
    for (int c = 0; c < U.cols; ++c) {
      x[n + c] = static_cast<std::uint8_t>(U.at(r, c));
      if (lead < 0 && U.at(r, c)) lead = n + c;
    }
    S.gens.push_back(x);
    S.leads.push_back(lead);
  }
  return S;
}

struct Orbit {
  std::vector<FpMat> pts;
  std::vector<int> parent, via;
  std::unordered_map<std::string, int> index;
};

Orbit orbit_of(const LiftContext& ctx, const FpMat& U) {
  Orbit o;
  const int p = ctx.G.p();
  o.pts.push_back(U);
  o.parent.push_back(-1);
  o.via.push_back(-1);
  o.index[subspace_key(U)] = 0;
  for (size_t q = 0; q < o.pts.size(); ++q)
    for (size_t g = 0; g < ctx.mats.size(); ++g) {
      FpMat V = act(o.pts[q], ctx.mats[g], p);
      auto key = subspace_key(V);
      if (o.index.count(key)) continue;
      o.index[key] = static_cast<int>(o.pts.size());
      o.pts.push_back(V);
      o.parent.push_back(static_cast<int>(q));
      o.via.push_back(static_cast<int>(g));
    }
  return o;
}

}  // namespace

std::vector<DescendantRecord> immediate_descendants(std::shared_ptr<const LiftContext> ctx,
                                                    const DescendantOptions& opt) {
  std::vector<DescendantRecord> out;
  const auto& pc = ctx->pc;
  const int p = ctx->G.p();
  int smax = std::min(pc.nu(), opt.max_step);
  for (int s = 1; s <= smax; ++s) {
    if (opt.only_step && s != opt.only_step) continue;
    auto subs = allowable_subspaces(p, pc.mu, pc.nucleus, s, opt.max_subspaces);
    std::vector<std::pair<std::string, int>> keyed;
    keyed.reserve(subs.size());
    for (size_t i = 0; i < subs.size(); ++i) keyed.push_back({subspace_key(subs[i]), static_cast<int>(i)});
    std::sort(keyed.begin(), keyed.end());
    std::unordered_map<std::string, int> where;
    where.reserve(keyed.size() * 2);
    for (size_t i = 0; i < keyed.size(); ++i) where[keyed[i].first] = static_cast<int>(i);
    std::vector<bool> seen(keyed.size(), false);
    int orbit_no = 0;
    for (size_t start = 0; start < keyed.size(); ++start) {
      if (seen[start]) continue;
      std::vector<int> queue{static_cast<int>(start)};
      seen[start] = true;
      for (size_t q = 0; q < queue.size(); ++q) {
        const FpMat& U = subs[keyed[queue[q]].second];
        for (const auto& A : ctx->mats) {
          auto it = where.find(subspace_key(act(U, A, p)));
          if (it == where.end()) throw Error("allowable subgroup mapped outside the allowable set");
          if (!seen[it->second]) {
            seen[it->second] = true;
            queue.push_back(it->second);
          }
        }
      }
      DescendantRecord rec;
      rec.step = s;
      rec.orbit_index = ++orbit_no;
      rec.U = subs[keyed[start].second];
      rec.orbit_size = queue.size();
      rec.ctx = ctx;
      rec.child = quotient(pc.cover, tail_subgroup(rec.U, pc.n)).pres;
      out.push_back(std::move(rec));
    }
  }
  return out;
}

AutGroup descendant_automorphisms(const DescendantRecord& r, std::uint64_t seed) {
  const LiftContext& ctx = *r.ctx;
  const auto& pc = ctx.pc;
  const PcPresentation& G = ctx.G;
  const int p = G.p(), d = pc.d;
  Orbit orb = orbit_of(ctx, r.U);
  std::uint64_t osz = orb.pts.size();
  if (ctx.aut.order % osz) throw Error("orbit size does not divide the automorphism group order");
  std::uint64_t stab_order = ctx.aut.order / osz;

  std::vector<Automorphism> stab;
  if (osz == 1) {
    stab = ctx.aut.gens;
  } else if (stab_order > 1) {
    AutChain chain(G, d);
    std::mt19937_64 rng(seed);
    auto transversal = [&](int x) {
      std::vector<int> path;
      for (int y = x; orb.parent[y] >= 0; y = orb.parent[y]) path.push_back(orb.via[y]);
      Automorphism u = identity_automorphism(G);
      for (auto it = path.rbegin(); it != path.rend(); ++it) u = compose(G, u, ctx.aut.gens[*it]);
      return u;
    };
    auto transversal_inv = [&](int x) {
      Automorphism u = identity_automorphism(G);
      for (int y = x; orb.parent[y] >= 0; y = orb.parent[y]) u = compose(G, u, ctx.aut_inv[orb.via[y]]);
      return u;
    };
    int tries = 0;
    while (chain.order() < stab_order) {
      if (++tries > 200000) throw Error("stabiliser search did not converge");
      int x = static_cast<int>(rng() % osz);
      int g = static_cast<int>(rng() % ctx.mats.size());
      FpMat V = act(orb.pts[x], ctx.mats[g], p);
      int y = orb.index.at(subspace_key(V));
      if (orb.parent[y] == x && orb.via[y] == g) continue;
      Automorphism s = compose(G, compose(G, transversal(x), ctx.aut.gens[g]), transversal_inv(y));
      chain.add(s);
    }
    stab = chain.strong_generators();
  }

  // lift to G*, project to the child
  Quotient Q = quotient(pc.cover, tail_subgroup(r.U, pc.n));
  const PcPresentation& H = Q.pres;
  AutGroup A;
  for (const auto& b : stab) {
    std::vector<Elem> gi(b.img.begin(), b.img.begin() + d);
    Automorphism L = extend_images(pc.cover, pc.defs, gi);
    Automorphism h;
    for (int k = 0; k < H.n(); ++k) h.img.push_back(Q.project(pc.cover, L.img[Q.pos[k]]));
    A.gens.push_back(std::move(h));
  }
  auto defsH = find_definitions(H, d);
  int s = r.step;
  for (int i = 0; i < d; ++i)
    for (int z = 0; z < s; ++z) {
      std::vector<Elem> gi;
      for (int j = 0; j < d; ++j) gi.push_back(Elem::gen(j));
      gi[i][pc.n + z] = 1;
      A.gens.push_back(extend_images(H, defsH, gi));
    }
  unsigned __int128 o = stab_order;
  for (int k = 0; k < d * s; ++k) o *= p;
  if (o > static_cast<unsigned __int128>(~std::uint64_t(0))) throw Error("automorphism group order overflow");
  A.order = static_cast<std::uint64_t>(o);
  if (A.gens.empty()) A.gens.push_back(identity_automorphism(H));
  return A;
}

SigmaInfo sigma_classify(const PcPresentation& G, const AutGroup& A, int d2) {
  SigmaInfo si;
  si.d1 = generator_rank(G);
  si.d2 = d2;
  const int d = si.d1;
  Subgroup D = derived_subgroup(G, whole_group(G));
  Quotient Q = quotient(G, D);
  const PcPresentation& P = Q.pres;
  auto defs = find_definitions(P, d);
  std::vector<Automorphism> gens;
  for (const auto& a : A.gens) {
    std::vector<Elem> gi;
    for (int i = 0; i < d; ++i) gi.push_back(Q.project(G, a.img[i]));
    gens.push_back(extend_images(P, defs, gi));
  }
  std::vector<Elem> target;
  for (int i = 0; i < d; ++i) target.push_back(P.inv(Elem::gen(i)));
  auto key = [&](const Automorphism& a) {
    std::string k;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < P.n(); ++j) k.push_back(static_cast<char>(a.img[i][j]));
    return k;
  };
  std::string tkey;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < P.n(); ++j) tkey.push_back(static_cast<char>(target[i][j]));
  std::unordered_map<std::string, int> seen;
  std::vector<Automorphism> q{identity_automorphism(P)};
  seen[key(q[0])] = 0;
  for (size_t i = 0; i < q.size() && !si.is_sigma; ++i)
    for (const auto& g : gens) {
      Automorphism c = compose(P, q[i], g);
      auto k = key(c);
      if (k == tkey) {
        si.is_sigma = true;
        break;
      }
      if (seen.emplace(k, 0).second) q.push_back(std::move(c));
    }
  if (key(q[0]) == tkey) si.is_sigma = true;
  si.is_schur_sigma = si.is_sigma && si.d2 == si.d1;
  return si;
}

}  // namespace ptower
