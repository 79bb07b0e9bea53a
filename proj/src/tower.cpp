#include "ptower/tower.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace ptower {

// --- roots, bounds, paths -----------------------------------------------------

std::string RootSpec::label() const {
  bool elementary = std::all_of(type.begin(), type.end(), [](int e) { return e == 1; });
  if (elementary) return "ab(" + std::to_string(p) + "," + std::to_string(type.size()) + ")";
  return "ab(" + std::to_string(p) + ",(" + render_type(type) + "))";
}

RootSpec RootSpec::parse(const std::string& s) {
  if (s.rfind("ab(", 0) != 0 || s.back() != ')') throw Error("bad root spec: " + s);
  std::string body = s.substr(3, s.size() - 4);
  auto comma = body.find(',');
  if (comma == std::string::npos) throw Error("bad root spec: " + s);
  RootSpec r;
  std::string t = body.substr(comma + 1);
  try {
    r.p = std::stoi(body.substr(0, comma));
    if (!t.empty() && t.front() == '(') {
      if (t.back() != ')') throw Error("bad root spec: " + s);
      r.type = parse_type(t.substr(1, t.size() - 2));
    } else {
      r.type.assign(std::stoi(t), 1);
    }
  } catch (const std::logic_error&) {
    throw Error("bad root spec: " + s);
  }
  bool prime = r.p >= 2;
  for (int q = 2; q * q <= r.p; ++q) prime = prime && r.p % q != 0;
  if (!prime || r.type.empty()) throw Error("bad root spec: " + s);
  return r;
}

Bounds Bounds::defaults(int p) {
  Bounds b;
  b.max_lo = p <= 3 ? 8 : p == 5 ? 7 : 5;
  b.max_step = 2;
  return b;
}

namespace {

std::string step_str(const PathStep& s) { return "-#" + std::to_string(s.step) + ";" + std::to_string(s.index); }

}  // namespace

std::string render_steps(const Path& path) {
  // runs of an identical block of length 1 or 2 are written (..)^k
  std::string out;
  size_t i = 0;
  while (i < path.size()) {
    bool done = false;
    for (size_t len = 1; len <= 2 && !done; ++len) {
      size_t k = 1;
      while (i + (k + 1) * len <= path.size() &&
             std::equal(path.begin() + i, path.begin() + i + len, path.begin() + i + k * len))
        ++k;
      if (k >= 2 && (len == 1 ? k >= 3 : true)) {
        std::string block;
        for (size_t j = 0; j < len; ++j) block += step_str(path[i + j]);
        out += "(" + block + ")^" + std::to_string(k);
        i += k * len;
        done = true;
      }
    }
    if (!done) out += step_str(path[i++]);
  }
  return out;
}

namespace {

void parse_steps(const std::string& s, size_t& i, Path& out) {
  while (i < s.size()) {
    if (s[i] == '-') {
      if (i + 1 >= s.size() || s[i + 1] != '#') throw Error("bad path near: " + s.substr(i));
      i += 2;
      size_t semi = s.find(';', i);
      if (semi == std::string::npos) throw Error("bad path step: " + s.substr(i));
      PathStep st;
      st.step = std::stoi(s.substr(i, semi - i));
      i = semi + 1;
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i) throw Error("bad path step index: " + s);
      st.index = std::stoi(s.substr(i, j - i));
      i = j;
      out.push_back(st);
    } else if (s[i] == '(') {
      ++i;
      Path inner;
      parse_steps(s, i, inner);
      if (i >= s.size() || s[i] != ')') throw Error("unbalanced path: " + s);
      ++i;
      int k = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        k = std::stoi(s.substr(i, j - i));
        i = j;
      }
      for (int r = 0; r < k; ++r) out.insert(out.end(), inner.begin(), inner.end());
    } else if (s[i] == ')') {
      return;
    } else {
      throw Error("bad path near: " + s.substr(i));
    }
  }
}

}  // namespace

std::pair<RootSpec, Path> parse_path(const std::string& s) {
  // root ends at the ')' closing "ab("
  if (s.rfind("ab(", 0) != 0) throw Error("path must start with a root ab(p,...): " + s);
  int depth = 0;
  size_t end = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) {
      end = i + 1;
      break;
    }
  }
  if (!end) throw Error("bad root in path: " + s);
  RootSpec root = RootSpec::parse(s.substr(0, end));
  Path path;
  size_t i = end;
  parse_steps(s, i, path);
  if (i != s.size()) throw Error("trailing characters in path: " + s);
  return {root, path};
}

int DescendantTree::find(const Path& path) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), path,
                             [](const TreeNode& n, const Path& p) { return n.path < p; });
  if (it == nodes.end() || it->path != path) return -1;
  return static_cast<int>(it - nodes.begin());
}

int DescendantTree::find(const std::string& expr) const {
  auto [r, path] = parse_path(expr);
  if (!(r == root)) return -1;
  return find(path);
}

// --- tree construction --------------------------------------------------------

namespace {

template <class F>
void parallel_for(size_t n, int threads, F&& fn) {
  int t = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  t = static_cast<int>(std::min<size_t>(t, n));
  if (t <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (int k = 0; k < t; ++k)
    pool.emplace_back([&] {
      while (true) {
        size_t i = next++;
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> g(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

void fill_invariants(TreeNode& n) {
  n.stats = order_stats(n.group);
  n.metabelian = n.stats.metabelian;
  n.d1 = generator_rank(n.group);
  auto pc = p_cover(n.group);
  n.mu = pc.mu;
  n.d2 = pc.mu;
  n.nu = pc.nu();
  n.terminal = n.nu == 0;
  auto si = sigma_classify(n.group, n.aut, n.d2);
  n.sigma = si.is_sigma;
  n.schur_sigma = si.is_schur_sigma;
}

TreeNode make_root(const RootSpec& r) {
  TreeNode n;
  n.group = abelian_presentation(r.p, r.type);
  n.aut = root_automorphisms(n.group);
  n.pattern = artin_pattern(n.group);
  fill_invariants(n);
  n.gen_lo = n.stats.lo;
  return n;
}

struct Expansion {
  std::vector<TreeNode> kids;
  std::uint64_t pruned = 0;
  bool beyond = false;  // admissible children exist past the bounds
};

using Admit = std::function<bool(const PcPresentation&)>;

bool admissible(const ArtinPattern& ap, const std::optional<PatternSpec>& prune) {
  return !prune || match_spec(ap, *prune, MatchMode::Leq);
}

bool admissible(const PcPresentation& g, const std::optional<PatternSpec>& prune, const Admit& admit) {
  return admissible(artin_pattern(g), prune) && (!admit || admit(g));
}

// children of steps s with lo+s in (node.gen_lo, limit]; probe past limit when asked
Expansion expand(const TreeNode& node, const Bounds& b, const std::optional<PatternSpec>& prune, const Admit& admit,
                 bool probe) {
  Expansion ex;
  if (node.terminal) return ex;
  const int lo = node.stats.lo;
  const int smax = std::min(node.nu, b.max_step);
  std::vector<int> gen_steps, probe_steps;
  const bool class_ok = b.max_class == 0 || node.stats.cl + 1 <= b.max_class;
  for (int s = 1; s <= smax; ++s) {
    if (lo + s <= b.max_lo && class_ok) {
      if (lo + s > node.gen_lo) gen_steps.push_back(s);
    } else {
      probe_steps.push_back(s);
    }
  }
  if (node.nu > b.max_step) ex.beyond = true;  // steps excluded by the bound itself
  if (gen_steps.empty() && (probe_steps.empty() || !probe)) {
    if (!probe_steps.empty()) ex.beyond = true;
    return ex;
  }
  auto ctx = make_lift_context(node.group, node.aut);
  for (int s : gen_steps) {
    DescendantOptions o;
    o.max_step = s;
    o.only_step = s;
    for (auto& r : immediate_descendants(ctx, o)) {
      TreeNode c;
      c.group = r.child;
      c.pattern = artin_pattern(c.group);
      if (!admissible(c.pattern, prune) || (admit && !admit(c.group))) {
        ++ex.pruned;
        continue;
      }
      c.path = node.path;
      c.path.push_back({r.step, r.orbit_index});
      c.aut = descendant_automorphisms(r);
      fill_invariants(c);
      c.gen_lo = c.stats.lo;
      ex.kids.push_back(std::move(c));
    }
  }
  if (probe)
    for (int s : probe_steps) {
      if (ex.beyond) break;
      if (!prune && !admit) {
        ex.beyond = true;
        break;
      }
      DescendantOptions o;
      o.max_step = s;
      o.only_step = s;
      for (auto& r : immediate_descendants(ctx, o))
        if (admissible(r.child, prune, admit)) {
          ex.beyond = true;
          break;
        }
    }
  return ex;
}

void sort_nodes(DescendantTree& t) {
  std::vector<int> ord(t.nodes.size());
  for (size_t i = 0; i < ord.size(); ++i) ord[i] = static_cast<int>(i);
  std::sort(ord.begin(), ord.end(), [&](int a, int b) { return t.nodes[a].path < t.nodes[b].path; });
  std::vector<TreeNode> nn;
  nn.reserve(ord.size());
  for (int i : ord) nn.push_back(std::move(t.nodes[i]));
  t.nodes = std::move(nn);
  for (auto& n : t.nodes) {
    n.children.clear();
    n.parent = -1;
  }
  for (size_t i = 1; i < t.nodes.size(); ++i) {
    Path pp(t.nodes[i].path.begin(), t.nodes[i].path.end() - 1);
    int par = t.find(pp);
    t.nodes[i].parent = par;
    if (par >= 0) t.nodes[par].children.push_back(static_cast<int>(i));
  }
}

void grow(DescendantTree& t, std::vector<int> wave, int threads, bool probe) {
  bool beyond = false;
  while (!wave.empty()) {
    std::vector<Expansion> res(wave.size());
    parallel_for(wave.size(), threads,
                 [&](size_t i) { res[i] = expand(t.nodes[wave[i]], t.bounds, t.prune, t.admit, probe); });
    std::vector<int> next;
    for (size_t i = 0; i < wave.size(); ++i) {
      auto& node = t.nodes[wave[i]];
      node.gen_lo = std::max(node.gen_lo, std::min(t.bounds.max_lo, node.stats.lo + std::min(node.nu, t.bounds.max_step)));
      t.pruned += res[i].pruned;
      beyond = beyond || res[i].beyond;
      for (auto& k : res[i].kids) {
        next.push_back(static_cast<int>(t.nodes.size()));
        t.nodes.push_back(std::move(k));
      }
    }
    wave = std::move(next);
  }
  sort_nodes(t);
  t.complete = !beyond;
}

}  // namespace

TreeNode make_node(const PcPresentation& g, AutGroup aut, Path path) {
  TreeNode n;
  n.group = g;
  n.aut = std::move(aut);
  n.path = std::move(path);
  n.pattern = artin_pattern(n.group);
  fill_invariants(n);
  n.gen_lo = n.stats.lo;
  return n;
}

void reindex(DescendantTree& t) { sort_nodes(t); }

DescendantTree build_tree(const RootSpec& root, const TreeOptions& opt) {
  DescendantTree t;
  t.root = root;
  t.bounds = opt.bounds;
  t.prune = opt.prune;
  t.admit = opt.admit;
  TreeNode r = make_root(root);
  if (opt.bounds.max_lo < r.stats.lo) throw Error("empty tree: max_lo below the root order");
  if (!admissible(r.pattern, t.prune)) throw Error("root pattern already exceeds the prune target");
  t.nodes.push_back(std::move(r));
  grow(t, {0}, opt.threads, opt.probe_frontier);
  return t;
}

std::vector<int> find_by_pattern(const DescendantTree& t, const PatternSpec& target, bool metabelian_only) {
  std::vector<int> out;
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    if (metabelian_only && !n.metabelian) continue;
    if (match_spec(n.pattern, target, MatchMode::Equal)) out.push_back(static_cast<int>(i));
  }
  return out;
}

void extend_tree(DescendantTree& t, const Bounds& nb, int threads, bool probe) {
  if (nb.max_step != t.bounds.max_step || nb.max_class != t.bounds.max_class)
    throw Error("extend_tree: only max_lo may grow");
  if (nb.max_lo < t.bounds.max_lo) throw Error("extend_tree: bounds may only grow");
  t.bounds = nb;
  std::vector<int> wave;
  for (size_t i = 0; i < t.nodes.size(); ++i) wave.push_back(static_cast<int>(i));
  grow(t, wave, threads, probe);
}

void certify(DescendantTree& t, int threads) {
  // re-probe every node: gen_lo already covers the bounds, so only the probe runs
  std::vector<int> all(t.nodes.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  grow(t, all, threads, true);
}

// --- fingerprints -------------------------------------------------------------

PcPresentation second_derived_quotient(const PcPresentation& G) {
  Subgroup d1 = derived_subgroup(G, whole_group(G));
  Subgroup d2 = derived_subgroup(G, d1);
  if (d2.size_log() == 0) return G;
  return quotient(G, d2).pres;
}

std::string fingerprint(const PcPresentation& G) {
  auto st = order_stats(G);
  auto ap = artin_pattern(G);
  std::ostringstream os;
  os << "p=" << G.p() << " lo=" << st.lo << " cl=" << st.cl << " cc=" << st.cc << " | " << render_pattern(ap);
  // kernels as subgroups of the shared abelianization, in canonical member order
  for (size_t n = 1; n < ap.layers.size(); ++n) {
    const auto& L = ap.layers[n];
    std::vector<std::string> ks;
    for (size_t i = 0; i < L.members.size(); ++i) ks.push_back(render_type(L.ttt[i]) + ":" + std::to_string(L.kernels[i].size_log()));
    std::sort(ks.begin(), ks.end());
    os << " K" << n << "=";
    for (auto& k : ks) os << k << ",";
  }
  auto i2 = ipad2(G);
  os << " | ipad2=";
  for (const auto& c : i2.components) os << "[" << render_type(c.tau0) << ";" << render_type_list(c.tau1) << "]";
  os << " | d2=" << relation_rank(G);
  Subgroup D = derived_subgroup(G, whole_group(G));
  Subgroup DD = derived_subgroup(G, D);
  os << " | Gd=" << render_type(abelian_invariants(G, D, DD));
  Subgroup Z = center(G);
  os << " | Z=" << render_type(abelian_invariants(G, Z, trivial_subgroup()));
  return os.str();
}

std::string fingerprint_digest(const std::string& fp) {
  unsigned char md[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(fp.data()), fp.size(), md);
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (int i = 0; i < 8; ++i) {
    s.push_back(hex[md[i] >> 4]);
    s.push_back(hex[md[i] & 15]);
  }
  return s;
}

bool second_derived_match(const PcPresentation& cand, const std::string& base_fp) {
  return fingerprint(second_derived_quotient(cand)) == base_fp;
}

// --- cover ----------------------------------------------------------------------

std::vector<int> cover_members(const DescendantTree& tree, int base) {
  const auto& B = tree.nodes[base];
  if (!B.metabelian) throw Error("cover: base is not metabelian");
  const std::string fp = fingerprint(B.group);
  // all members share the full pattern of the base
  auto spec = spec_of(B.pattern, static_cast<int>(B.pattern.layers.size()) - 1);
  std::vector<int> out;
  for (size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& n = tree.nodes[i];
    if (n.stats.lo < B.stats.lo || n.stats.cl < B.stats.cl) continue;
    if (!match_spec(n.pattern, spec, MatchMode::Equal)) continue;
    if (static_cast<int>(i) == base || second_derived_match(n.group, fp)) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::function<bool(const PcPresentation&)> cover_admission(const PcPresentation& base) {
  // X = D/gamma_m(D) for a member D gives X/X'' = base/gamma_m(base)
  auto lcs = lower_central_series(base);
  std::vector<std::string> fps;  // fps[c] for class c quotient
  fps.push_back({});
  for (size_t j = 1; j < lcs.size(); ++j) {
    auto q = lcs[j].size_log() == 0 ? base : quotient(base, lcs[j]).pres;
    fps.push_back(fingerprint(q));
  }
  const int cl = static_cast<int>(fps.size()) - 1;
  return [fps, cl](const PcPresentation& X) {
    int c = nilpotency_class(X);
    return fingerprint(second_derived_quotient(X)) == fps[std::min(c, cl)];
  };
}

TreeNode node_at(const RootSpec& root, const Path& path) {
  TreeNode cur = make_root(root);
  for (const auto& st : path) {
    auto ctx = make_lift_context(cur.group, cur.aut);
    DescendantOptions o;
    o.max_step = st.step;
    o.only_step = st.step;
    bool found = false;
    for (auto& r : immediate_descendants(ctx, o))
      if (r.orbit_index == st.index) {
        TreeNode c;
        c.group = r.child;
        c.aut = descendant_automorphisms(r);
        c.pattern = artin_pattern(c.group);
        fill_invariants(c);
        c.path = cur.path;
        c.path.push_back(st);
        cur = std::move(c);
        found = true;
        break;
      }
    if (!found) throw Error("no node " + root.label() + render_steps(path));
  }
  return cur;
}

CoverResult cover(const RootSpec& root, const Path& path, const Bounds& bounds, int threads) {
  TreeNode B = node_at(root, path);
  if (!B.metabelian) throw Error("cover: base is not metabelian");
  TreeOptions opt;
  opt.bounds = bounds;
  opt.threads = threads;
  opt.prune = spec_of(B.pattern, static_cast<int>(B.pattern.layers.size()) - 1);
  opt.admit = cover_admission(B.group);
  CoverResult cr;
  cr.tree = build_tree(root, opt);
  cr.base = cr.tree.find(path);
  if (cr.base < 0) throw Error("cover: base not reached within bounds");
  cr.members = cover_members(cr.tree, cr.base);
  cr.complete_within_bounds = cr.tree.complete;
  return cr;
}

CoverResult cover(const std::string& base_path, const Bounds& bounds, int threads) {
  auto [root, path] = parse_path(base_path);
  return cover(root, path, bounds, threads);
}

std::vector<int> shafarevich_filter(const CoverResult& cov, int rho, int r, int theta) {
  const auto& B = cov.tree.nodes[cov.base];
  if (B.d1 != rho) throw Error("shafarevich_filter: field rank " + std::to_string(rho) + " differs from d1 = " + std::to_string(B.d1));
  std::vector<int> out;
  for (int id : cov.members) {
    int d2 = cov.tree.nodes[id].d2;
    if (rho <= d2 && d2 <= rho + r + theta) out.push_back(id);
  }
  return out;
}

Topology topology(const DescendantTree& t, int a, int b) {
  if (a < 0 || b < 0 || a >= static_cast<int>(t.nodes.size()) || b >= static_cast<int>(t.nodes.size()))
    throw Error("topology: node not in tree");
  return topology(t.nodes[a], t.nodes[b]);
}

Topology topology(const TreeNode& A, const TreeNode& B) {
  Topology T;
  T.delta_lo = B.stats.lo - A.stats.lo;
  T.delta_cl = B.stats.cl - A.stats.cl;
  T.delta_cc = B.stats.cc - A.stats.cc;
  size_t k = 0;
  while (k < A.path.size() && k < B.path.size() && A.path[k] == B.path[k]) ++k;
  T.fork.assign(A.path.begin(), A.path.begin() + k);
  const size_t la = A.path.size(), lb = B.path.size();
  if (k == la && la == lb)
    T.shape = "equal";
  else if (k == la && lb == la + 1)
    T.shape = B.path.back().step == 1 ? "child" : "bastard";
  else if (k == lb && la == lb + 1)
    T.shape = A.path.back().step == 1 ? "child" : "bastard";
  else if (la == lb && la == k + 1)
    T.shape = "sibling";
  else if (k == la || k == lb)
    T.shape = "descent";
  else
    T.shape = "fork";
  return T;
}

// --- Phi6 stem --------------------------------------------------------------------

std::vector<StemEntry> stem_phi6(int p, int probe_depth, int threads) {
  if (p < 3) throw Error("stem_phi6: p must be odd");
  RootSpec root{p, {1, 1}};
  TreeNode r = make_root(root);
  auto ctx = make_lift_context(r.group, r.aut);
  std::vector<StemEntry> out;
  for (auto& c : immediate_descendants(ctx)) {
    TreeNode e;
    e.group = c.child;
    e.aut = descendant_automorphisms(c);
    e.pattern = artin_pattern(e.group);
    fill_invariants(e);
    e.path = {{c.step, c.orbit_index}};
    // the extraspecial group of exponent p is the one with nuclear rank 2
    if (e.nu != 2) continue;
    auto ctx2 = make_lift_context(e.group, e.aut);
    DescendantOptions o;
    o.max_step = 2;
    o.only_step = 2;
    auto recs = immediate_descendants(ctx2, o);
    std::vector<StemEntry> part(recs.size());
    parallel_for(recs.size(), threads, [&](size_t i) {
      auto& s = part[i];
      auto& n = s.node;
      n.group = recs[i].child;
      n.aut = descendant_automorphisms(recs[i]);
      n.pattern = artin_pattern(n.group);
      fill_invariants(n);
      n.path = e.path;
      n.path.push_back({recs[i].step, recs[i].orbit_index});
      s.path = root.label() + render_steps(n.path);
      auto d = n.pattern.kappa1();
      s.eta = eta(d);
      s.tkt_canonical = tkt_canonical(d).digits;
      s.cycles = cycle_pattern(d);
      s.capable = !n.terminal;
      if (!s.capable) return;
      // coclass-preserving probe: a chain of capable step-1 descendants, depth first
      int reached = 0;
      std::function<bool(const PcPresentation&, const AutGroup&, int)> chain = [&](const PcPresentation& g, const AutGroup& a,
                                                                                    int level) {
        reached = std::max(reached, level);
        if (level == probe_depth) return true;
        DescendantOptions o1;
        o1.max_step = 1;
        o1.only_step = 1;
        for (auto& k : immediate_descendants(make_lift_context(g, a), o1)) {
          if (p_cover(k.child).nu() == 0) continue;
          if (level + 1 == probe_depth) {
            reached = probe_depth;
            return true;
          }
          if (chain(k.child, descendant_automorphisms(k), level + 1)) return true;
        }
        return false;
      };
      s.infinitely_capable = chain(n.group, n.aut, 0);
      s.probe_depth = reached;
    });
    for (auto& s : part) out.push_back(std::move(s));
  }
  return out;
}

TwoStage two_stage_decision(const PatternSpec& spec, int p, const std::vector<StemEntry>* stem) {
  if (spec.tau0 && *spec.tau0 != AbelianType{1, 1}) return TwoStage::Unknown;
  auto it = spec.tau.find(1);
  if (it != spec.tau.end()) {
    std::vector<AbelianType> want(p, AbelianType{2, 1});
    want.push_back({1, 1, 1});
    auto got = it->second;
    std::sort(got.begin(), got.end(), type_greater);
    if (got == want) return TwoStage::Length2;
  }
  if (!spec.kappa1 || it == spec.tau.end()) return TwoStage::Unknown;
  std::vector<StemEntry> local;
  if (!stem) {
    local = stem_phi6(p, 0);
    stem = &local;
  }
  PatternSpec s1;
  s1.tau0 = AbelianType{1, 1};
  s1.tau[1] = it->second;
  s1.kappa1 = spec.kappa1;
  for (const auto& e : *stem) {
    if (!e.node.schur_sigma) continue;
    if (match_spec(e.node.pattern, s1, MatchMode::Equal)) return TwoStage::Length2;
  }
  return TwoStage::Unknown;
}

// --- output ----------------------------------------------------------------------

std::string to_dot(const DescendantTree& t, const std::map<int, std::string>& labels) {
  if (t.nodes.empty()) throw Error("to_dot: empty tree");
  std::ostringstream os;
  os << "digraph tree {\n  rankdir=TB;\n  node [shape=circle, fontsize=9];\n";
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    std::string lab = i == 0 ? t.root.label() : render_steps({n.path.back()}).substr(1);
    if (auto it = labels.find(static_cast<int>(i)); it != labels.end()) lab += "\\n" + it->second;
    lab += "\\nlo " + std::to_string(n.stats.lo) + " cl " + std::to_string(n.stats.cl) + " cc " +
           std::to_string(n.stats.cc) + " d2 " + std::to_string(n.d2);
    std::string style;
    if (n.schur_sigma)
      style = ", shape=box, style=filled, fillcolor=gray80";
    else if (n.terminal)
      style = ", shape=box";
    if (!n.metabelian) style += ", color=red";
    os << "  n" << i << " [label=\"" << lab << "\"" << style << "];\n";
  }
  for (size_t i = 1; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    os << "  n" << n.parent << " -> n" << i;
    if (n.path.back().step > 1) os << " [style=dashed]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::vector<Annotation> load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read annotations: " + path);
  std::vector<Annotation> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Annotation a;
    std::string p;
    if (!std::getline(ls, a.name, '\t') || !std::getline(ls, p, '\t') || !std::getline(ls, a.digest, '\t') ||
        !std::getline(ls, a.path, '\t'))
      throw Error("bad annotation line: " + line);
    if (a.path == "-") a.path.clear();
    std::getline(ls, a.note);
    a.p = std::stoi(p);
    out.push_back(a);
  }
  return out;
}

std::string default_annotation_path() { return std::string(PTOWER_DATA_DIR) + "/annotations.tsv"; }

std::string annotate(const PcPresentation& G, const std::vector<Annotation>& ann, const std::string& path) {
  std::string dg;
  for (const auto& a : ann) {
    if (a.p != G.p()) continue;
    if (dg.empty()) dg = fingerprint_digest(fingerprint(G));
    if (a.digest != dg) continue;
    if (!a.path.empty() && !path.empty() && a.path != path) continue;
    return a.name;
  }
  return {};
}

}  // namespace ptower
