#include "ptower/fieldio.hpp"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

namespace ptower {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

// "2 1 1" (logarithmic exponents) or "21^2"
AbelianType parse_type_token(const std::string& tok) {
  std::string t = trim(tok);
  if (t.empty()) throw Error("empty abelian type");
  if (t.find(' ') == std::string::npos) return parse_type(t);
  AbelianType out;
  std::istringstream is(t);
  int e;
  while (is >> e) {
    if (e <= 0) throw Error("exponents must be positive: " + t);
    out.push_back(e);
  }
  if (!is.eof()) throw Error("bad abelian type: " + t);
  std::sort(out.rbegin(), out.rend());
  return out;
}

// comma-separated types, or the bracketed compact form
std::vector<AbelianType> parse_list_value(const std::string& v) {
  std::string t = trim(v);
  if (!t.empty() && t.front() == '[') return parse_type_list(t);
  std::vector<AbelianType> out;
  std::string tok;
  std::istringstream is(t);
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    // compact tokens may carry repetition: (1^2)^5
    if (tok.find('^') != std::string::npos && tok.find(' ') == std::string::npos) {
      for (auto& x : parse_type_list(tok)) out.push_back(x);
    } else {
      out.push_back(parse_type_token(tok));
    }
  }
  return out;
}

bool parse_bool(const std::string& v) {
  std::string t = trim(v);
  if (t == "yes" || t == "true" || t == "1") return true;
  if (t == "no" || t == "false" || t == "0") return false;
  throw Error("expected yes/no, got '" + t + "'");
}

long long layer1_count(int p, int rank) {
  long long n = 1, q = 1;
  for (int i = 1; i < rank; ++i) {
    q *= p;
    n += q;
  }
  return n;
}

void finish(FieldRecord& r, const std::string& where) {
  auto fail = [&](const std::string& m) { throw Error(where + ": " + m); };
  if (!is_prime(r.p)) fail("p must be prime");
  if (r.class_type.empty()) fail("class_type missing");
  if (r.r1 < 0 || r.r2 < 0 || r.r1 + r.r2 == 0) fail("bad signature");
  r.unit_rank = r.r1 + r.r2 - 1;
  r.rho = static_cast<int>(r.class_type.size());
  if (r.p == 2) r.theta = 1;
  if (r.quadratic()) {
    if (r.discriminant != 0 && (r.discriminant > 0) != (r.r1 == 2))
      fail("signature does not match the sign of the discriminant");
  }
  r.ap.tau0 = r.class_type;
  const long long m = layer1_count(r.p, r.rho);
  if (auto it = r.ap.tau.find(1); it != r.ap.tau.end() && static_cast<long long>(it->second.size()) != m)
    fail("tau1 has " + std::to_string(it->second.size()) + " entries, expected " + std::to_string(m));
  if (r.ap.kappa1) {
    if (static_cast<long long>(r.ap.kappa1->size()) != m)
      fail("kappa1 has " + std::to_string(r.ap.kappa1->size()) + " digits, expected " + std::to_string(m));
    for (int d : *r.ap.kappa1)
      if (d < 0 || d > m) fail("kappa1 digit out of range");
  }
  r.infinite_flag = r.r1 == 0 && r.r2 == 1 && r.p % 2 == 1 && r.rho >= 3;
}

}  // namespace

std::vector<FieldRecord> parse_records_text(const std::string& text, const std::string& source) {
  std::vector<FieldRecord> out;
  std::istringstream in(text);
  std::string line;
  int ln = 0;
  bool open = false;
  std::string where;
  bool zeta = false;
  auto close = [&] {
    if (!open) return;
    auto& r = out.back();
    if (zeta) r.theta = 1;
    finish(r, where);
    open = false;
  };
  while (std::getline(in, line)) {
    ++ln;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::string here = source + ":" + std::to_string(ln);
    if (t == "[field]") {
      close();
      out.emplace_back();
      out.back().line = ln;
      open = true;
      zeta = false;
      where = here;
      continue;
    }
    if (!open) throw Error(here + ": key outside a [field] block");
    auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(here + ": expected key = value");
    std::string key = trim(t.substr(0, eq)), val = trim(t.substr(eq + 1));
    auto& r = out.back();
    try {
      if (key == "name") {
        r.name = val;
      } else if (key == "p") {
        r.p = std::stoi(val);
      } else if (key == "discriminant") {
        r.discriminant = std::stoll(val);
      } else if (key == "signature") {
        std::istringstream is(val);
        if (!(is >> r.r1 >> r.r2)) throw Error("signature needs two integers");
      } else if (key == "class_type") {
        r.class_type = parse_type_token(val);
      } else if (key == "zeta_p") {
        zeta = parse_bool(val);
      } else if (key == "kappa1") {
        r.ap.kappa1 = parse_digits(val);
      } else if (key.size() > 3 && key.rfind("tau", 0) == 0 && std::all_of(key.begin() + 3, key.end(), ::isdigit)) {
        int n = std::stoi(key.substr(3));
        if (n < 1) throw Error("layer index must be positive");
        r.ap.tau[n] = parse_list_value(val);
      } else if (key == "ipad2") {
        auto semi = val.find(';');
        if (semi == std::string::npos) throw Error("ipad2 needs 'tau0 ; list'");
        Ipad c;
        c.tau0 = parse_type_token(val.substr(0, semi));
        c.tau1 = parse_list_value(val.substr(semi + 1));
        std::sort(c.tau1.begin(), c.tau1.end(), type_greater);
        r.ap.ipad2.push_back(c);
      } else if (key == "advisory") {
        r.advisory = parse_bool(val);
      } else if (key == "expect") {
        r.expect = val;
      } else {
        throw Error("unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw Error(here + ": " + e.what());
    } catch (const std::exception&) {
      throw Error(here + ": bad value for '" + key + "'");
    }
  }
  close();
  return out;
}

std::vector<FieldRecord> parse_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_records_text(ss.str(), path);
}

std::string default_corpus_path() { return std::string(PTOWER_DATA_DIR) + "/fields.rec"; }

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Length2: return "l=2";
    case Verdict::Length3: return "l=3";
    case Verdict::AtLeast3: return "l>=3";
    case Verdict::Infinite: return "infinite";
    case Verdict::Undecided: return "undecided-within-bounds";
  }
  return "?";
}

int exit_code(Verdict v) { return v == Verdict::Undecided ? 2 : 0; }

// --- identification ---------------------------------------------------------

namespace {

CandidateInfo info(const DescendantTree& t, int id, const std::vector<Annotation>& ann) {
  const auto& n = t.nodes[id];
  CandidateInfo c;
  c.node = id;
  c.path = t.path_string(id);
  c.stats = n.stats;
  c.d2 = n.d2;
  c.sigma = n.sigma;
  c.schur_sigma = n.schur_sigma;
  c.name = annotate(n.group, ann, c.path);
  return c;
}

std::string describe(const CandidateInfo& c) {
  std::ostringstream os;
  os << c.path;
  if (!c.name.empty()) os << " [" << c.name << "]";
  os << "  lo " << c.stats.lo << "  cl " << c.stats.cl << "  cc " << c.stats.cc << "  dl " << c.stats.dl << "  d2 "
     << c.d2;
  if (c.schur_sigma)
    os << "  Schur-sigma";
  else if (c.sigma)
    os << "  sigma";
  return os.str();
}

}  // namespace

IdentifyReport identify(const FieldRecord& rec, const IdentifyOptions& opt) {
  IdentifyReport rep;
  rep.record = rec;
  rep.bounds = opt.bounds.value_or(Bounds::defaults(rec.p));
  if (rec.infinite_flag) {
    rep.verdict = Verdict::Infinite;
    rep.notes.push_back("complex quadratic, odd p, class rank " + std::to_string(rec.rho) +
                        " >= 3: infinite tower (Koch-Venkov), search skipped");
    return rep;
  }
  if (rec.rho < 2 || rec.rho > 3) throw Error("identify: class rank must be 2 or 3");
  if (!rec.ap.tau.count(1)) {
    rep.notes.push_back("record carries no tau1: nothing to match, search skipped");
    return rep;
  }

  std::vector<Annotation> ann;
  std::string apath = opt.annotations.empty() ? default_annotation_path() : opt.annotations;
  if (std::ifstream(apath)) ann = load_annotations(apath);

  const RootSpec root{rec.p, rec.class_type};
  PatternSpec search = rec.ap;
  search.ipad2.clear();
  if (rec.rho == 2 && rec.p % 2 == 1 && rec.class_type == AbelianType{1, 1} && search.tau.count(1))
    rep.two_stage = two_stage_decision(search, rec.p);

  TreeOptions to;
  to.bounds = rep.bounds;
  to.prune = search;
  to.threads = opt.threads;
  auto tree = build_tree(root, to);
  const bool sigma_needed = opt.require_sigma && rec.quadratic();

  for (int id : find_by_pattern(tree, search, true)) {
    if (sigma_needed && !tree.nodes[id].sigma) {
      rep.notes.push_back("dropped " + tree.path_string(id) + ": no generator-inverting automorphism");
      continue;
    }
    rep.metabelian.push_back(info(tree, id, ann));
  }
  if (!tree.complete)
    rep.notes.push_back("pattern search not exhausted at lo " + std::to_string(rep.bounds.max_lo) +
                        ": candidates of larger order are not excluded");

  for (size_t b = 0; b < rep.metabelian.size(); ++b) {
    const auto& base = tree.nodes[rep.metabelian[b].node];
    auto cr = cover(root, base.path, rep.bounds, opt.threads);
    rep.cover_sizes.push_back(static_cast<int>(cr.members.size()));
    rep.cover_complete.push_back(cr.complete_within_bounds);
    for (int id : shafarevich_filter(cr, rec.rho, rec.unit_rank, rec.theta)) {
      const auto& n = cr.tree.nodes[id];
      if (sigma_needed && !n.sigma) continue;
      if (!rec.ap.ipad2.empty()) {
        auto i2 = ipad2(n.group);
        if (!match_spec(n.pattern, rec.ap, MatchMode::Equal, &i2)) continue;
      }
      TowerCandidate tc;
      tc.base = static_cast<int>(b);
      tc.group = info(cr.tree, id, ann);
      tc.topology = topology(cr.tree, cr.base, id);
      rep.tower.push_back(tc);
    }
    const bool none = std::none_of(rep.tower.begin(), rep.tower.end(), [&](const auto& t) { return t.base == int(b); });
    if (none && cr.complete_within_bounds)
      rep.notes.push_back("M" + std::to_string(b + 1) + " excluded: no member of its cover passes the filters");
  }

  // verdict
  const bool complete = std::all_of(rep.cover_complete.begin(), rep.cover_complete.end(), [](bool x) { return x; });
  bool any2 = false, all2 = true, all3 = true;
  for (const auto& t : rep.tower) {
    const int dl = t.group.stats.dl;
    any2 = any2 || dl <= 2;
    all2 = all2 && dl <= 2;
    all3 = all3 && dl == 3;
  }
  if (rep.two_stage == TwoStage::Length2) {
    rep.verdict = Verdict::Length2;
    rep.notes.push_back("pattern of a Schur sigma stem group or eta = 1: length 2");
  } else if (rep.tower.empty()) {
    rep.verdict = Verdict::Undecided;
  } else if (complete) {
    rep.verdict = all2 ? Verdict::Length2 : all3 ? Verdict::Length3 : !any2 ? Verdict::AtLeast3 : Verdict::Undecided;
  } else {
    // the metabelian member of a cover is its base; members beyond the bounds are not metabelian
    rep.verdict = !any2 ? Verdict::AtLeast3 : Verdict::Undecided;
    rep.notes.push_back("cover not exhausted at lo " + std::to_string(rep.bounds.max_lo));
  }
  return rep;
}

std::string IdentifyReport::render() const {
  std::ostringstream os;
  const auto& r = record;
  os << "field " << (r.name.empty() ? std::to_string(r.discriminant) : r.name) << "\n";
  os << "  p " << r.p << "  d " << r.discriminant << "  signature (" << r.r1 << "," << r.r2 << ")  r " << r.unit_rank
     << "  theta " << r.theta << "  class type (" << render_type(r.class_type) << ")  rho " << r.rho << "\n";
  os << "  pattern " << r.ap.render() << "\n";
  os << "  bounds lo <= " << bounds.max_lo << ", step <= " << bounds.max_step << "\n";
  os << "second p-class group candidates: " << metabelian.size() << "\n";
  for (size_t b = 0; b < metabelian.size(); ++b) {
    os << "  M" << b + 1 << "  " << describe(metabelian[b]) << "\n";
    if (b < cover_sizes.size())
      os << "      cover within bounds: " << cover_sizes[b] << (cover_complete[b] ? " (complete)" : " (not exhausted)")
         << "\n";
  }
  os << "tower group candidates: " << tower.size() << "\n";
  for (const auto& t : tower) {
    os << "  over M" << t.base + 1 << "  " << describe(t.group) << "\n";
    os << "      topology " << t.topology.shape << "  dlo " << t.topology.delta_lo << "  dcl " << t.topology.delta_cl
       << "  dcc " << t.topology.delta_cc << "\n";
  }
  for (const auto& n : notes) os << "note: " << n << "\n";
  os << "verdict " << verdict_name(verdict) << "\n";
  return os.str();
}

// --- stem table ---------------------------------------------------------------

std::string stem_table(int p, bool tsv, int threads) {
  auto st = stem_phi6(p, 3, threads);
  std::ostringstream os;
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"path", "eta", "tkt", "cycles", "capability", "sigma", "schur_sigma"});
  int schur = 0;
  for (const auto& e : st) {
    std::string cap = !e.capable ? "terminal" : e.infinitely_capable ? "infinite" : "finite";
    rows.push_back({e.path, std::to_string(e.eta), render_digits(e.tkt_canonical),
                    e.cycles.empty() ? "-" : render_cycles(e.cycles), cap, e.node.sigma ? "yes" : "no",
                    e.node.schur_sigma ? "yes" : "no"});
    schur += e.node.schur_sigma;
  }
  if (tsv) {
    for (const auto& r : rows) {
      for (size_t i = 0; i < r.size(); ++i) os << (i ? "\t" : "") << r[i];
      os << "\n";
    }
  } else {
    std::vector<size_t> w(rows[0].size(), 0);
    for (const auto& r : rows)
      for (size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
    for (const auto& r : rows) {
      for (size_t i = 0; i < r.size(); ++i) os << std::left << std::setw(static_cast<int>(w[i]) + 2) << r[i];
      os << "\n";
    }
  }
  if (p == 3 && schur != p + 1)
    (tsv ? os << "# " : os) << "anomaly: p = 3 gives " << schur << " Schur sigma-groups instead of " << p + 1
                           << " (p = 3 is irregular)\n";
  return os.str();
}

// --- cache -------------------------------------------------------------------

using nlohmann::json;

void cache_store(const DescendantTree& t, const std::string& path) {
  if (t.admit) throw Error("cache: trees with an admission test are not cached");
  json j;
  j["format"] = "ptower-tree";
  j["version"] = kCacheVersion;
  j["root"] = t.root.label();
  j["bounds"] = {{"max_lo", t.bounds.max_lo}, {"max_step", t.bounds.max_step}, {"max_class", t.bounds.max_class}};
  j["prune"] = t.prune ? json(t.prune->render()) : json(nullptr);
  j["complete"] = t.complete;
  j["pruned"] = t.pruned;
  json nodes = json::array();
  for (const auto& n : t.nodes) {
    json jn;
    json p = json::array();
    for (const auto& s : n.path) p.push_back({s.step, s.index});
    jn["path"] = p;
    jn["group"] = n.group.serialize();
    jn["aut_order"] = n.aut.order;
    json gens = json::array();
    for (const auto& a : n.aut.gens) {
      json imgs = json::array();
      for (const auto& x : a.img) imgs.push_back(std::vector<int>(x.e.begin(), x.e.begin() + n.group.n()));
      gens.push_back(imgs);
    }
    jn["aut"] = gens;
    jn["gen_lo"] = n.gen_lo;
    jn["pattern"] = render_pattern(n.pattern);
    nodes.push_back(jn);
  }
  j["nodes"] = nodes;
  // readers never see a partial file
  const std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cache: cannot write " + tmp);
    out << j.dump(1) << "\n";
    if (!out) throw Error("cache: write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cache: cannot move into place: " + path);
  }
}

DescendantTree cache_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cache: cannot read " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error("cache: corrupt file " + path + ": " + e.what());
  }
  if (j.value("format", "") != "ptower-tree") throw Error("cache: not a tree cache: " + path);
  if (j.value("version", -1) != kCacheVersion)
    throw Error("cache: version " + std::to_string(j.value("version", -1)) + " differs from " +
                std::to_string(kCacheVersion));
  try {
    DescendantTree t;
    t.root = RootSpec::parse(j.at("root").get<std::string>());
    const auto& b = j.at("bounds");
    t.bounds.max_lo = b.at("max_lo");
    t.bounds.max_step = b.at("max_step");
    t.bounds.max_class = b.at("max_class");
    if (!j.at("prune").is_null()) t.prune = parse_pattern_spec(j.at("prune").get<std::string>());
    t.complete = j.at("complete");
    t.pruned = j.at("pruned");
    for (const auto& jn : j.at("nodes")) {
      Path p;
      for (const auto& s : jn.at("path")) p.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
      auto g = PcPresentation::deserialize(jn.at("group").get<std::string>());
      AutGroup a;
      a.order = jn.at("aut_order");
      for (const auto& ji : jn.at("aut")) {
        Automorphism m;
        for (const auto& v : ji) {
          Elem x;
          auto e = v.get<std::vector<int>>();
          if (static_cast<int>(e.size()) != g.n()) throw Error("automorphism image length");
          for (int k = 0; k < g.n(); ++k) x[k] = static_cast<std::uint8_t>(e[k]);
          m.img.push_back(x);
        }
        a.gens.push_back(std::move(m));
      }
      TreeNode n = make_node(g, std::move(a), std::move(p));
      n.gen_lo = jn.at("gen_lo");
      if (render_pattern(n.pattern) != jn.at("pattern").get<std::string>())
        throw Error("pattern mismatch at " + t.root.label() + render_steps(n.path));
      t.nodes.push_back(std::move(n));
    }
    reindex(t);
    if (t.nodes.empty() || !t.nodes[0].path.empty()) throw Error("root node missing");
    return t;
  } catch (const Error& e) {
    throw Error("cache: corrupt file " + path + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error("cache: corrupt file " + path + ": " + e.what());
  }
}

}  // namespace ptower
