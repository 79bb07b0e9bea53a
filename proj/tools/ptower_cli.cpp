#include <fstream>
#include <future>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "ptower/fieldio.hpp"

using namespace ptower;

namespace {

Bounds bounds_for(int p, int max_lo, int max_step, int max_class) {
  Bounds b = Bounds::defaults(p);
  if (max_lo > 0) b.max_lo = max_lo;
  if (max_step > 0) b.max_step = max_step;
  if (max_class > 0) b.max_class = max_class;
  return b;
}

void add_bounds(CLI::App* c, int& lo, int& step, int& cls) {
  c->add_option("--max-lo", lo, "largest logarithmic order");
  c->add_option("--max-step", step, "largest step size");
  c->add_option("--max-class", cls, "largest nilpotency class");
}

std::string flags(const TreeNode& n) {
  std::string s;
  if (n.schur_sigma)
    s = "schur-sigma";
  else if (n.sigma)
    s = "sigma";
  if (n.terminal) s += s.empty() ? "terminal" : ",terminal";
  if (!n.metabelian) s += s.empty() ? "dl3+" : ",dl3+";
  return s.empty() ? "-" : s;
}

void print_nodes(std::ostream& os, const DescendantTree& t, const std::vector<int>& ids) {
  os << "path\tlo\tcl\tcc\tdl\td2\tnu\tflags\n";
  for (int id : ids) {
    const auto& n = t.nodes[id];
    os << t.path_string(id) << '\t' << n.stats.lo << '\t' << n.stats.cl << '\t' << n.stats.cc << '\t' << n.stats.dl
       << '\t' << n.d2 << '\t' << n.nu << '\t' << flags(n) << '\n';
  }
}

std::vector<int> all_ids(const DescendantTree& t) {
  std::vector<int> v(t.nodes.size());
  for (size_t i = 0; i < v.size(); ++i) v[i] = static_cast<int>(i);
  return v;
}

void write_dot(const DescendantTree& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << to_dot(t);
  if (!out) throw Error("write failed for " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-group descendant trees, Artin patterns and p-class tower identification"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads, 0 = all cores");

  // identify
  auto* id = app.add_subcommand("identify", "identify the tower groups of field records");
  std::vector<std::string> rec_files;
  std::string only, ann_path;
  int lo = 0, step = 0, cls = 0, jobs = 1;
  bool no_sigma = false;
  id->add_option("records", rec_files, "record files (default: bundled corpus)");
  id->add_option("--name", only, "only the record with this name");
  id->add_option("--annotations", ann_path, "annotation table");
  id->add_option("--jobs", jobs, "records identified in parallel")->check(CLI::PositiveNumber);
  id->add_flag("--no-sigma", no_sigma, "do not require a generator-inverting automorphism for quadratic fields");
  add_bounds(id, lo, step, cls);

  // stem-table
  auto* st = app.add_subcommand("stem-table", "groups of the stem of Phi6");
  int p = 0;
  bool tsv = false;
  st->add_option("--p", p, "odd prime")->required();
  st->add_flag("--tsv", tsv, "tab separated output");

  // tree
  auto* tr = app.add_subcommand("tree", "descendant tree of an abelian root");
  std::string root, prune, dot;
  tr->add_option("--root", root, "root, e.g. ab(3,2) or ab(2,(21))")->required();
  tr->add_option("--prune", prune, "keep nodes whose pattern is <= this one");
  tr->add_option("--dot", dot, "write Graphviz DOT here");
  add_bounds(tr, lo, step, cls);

  // cover
  auto* cv = app.add_subcommand("cover", "cover of a metabelian node");
  std::string node;
  int rho = -1, unit_rank = -1, theta = 0;
  cv->add_option("--node", node, "path expression, e.g. ab(5,2)(-#1;1)^3-#1;19")->required();
  cv->add_option("--rho", rho, "class rank for the Shafarevich filter");
  cv->add_option("--r", unit_rank, "unit rank for the Shafarevich filter");
  cv->add_option("--theta", theta, "1 if the field contains the p-th roots of unity");
  cv->add_option("--dot", dot, "write the searched tree as DOT");
  add_bounds(cv, lo, step, cls);

  // topology
  auto* tp = app.add_subcommand("topology", "mutual location of two nodes");
  std::string pa, pb;
  tp->add_option("--a", pa, "path of the second p-class group")->required();
  tp->add_option("--b", pb, "path of the tower group")->required();

  // cache
  auto* ca = app.add_subcommand("cache", "store, load and extend descendant trees");
  ca->require_subcommand(1);
  auto* cs = ca->add_subcommand("store", "build a tree and store it");
  std::string file, out;
  cs->add_option("--root", root, "root")->required();
  cs->add_option("--prune", prune, "pattern");
  cs->add_option("--out", out, "cache file")->required();
  add_bounds(cs, lo, step, cls);
  auto* cl = ca->add_subcommand("load", "load a tree and list its nodes");
  cl->add_option("--in", file, "cache file")->required();
  cl->add_option("--dot", dot, "write DOT here");
  auto* ce = ca->add_subcommand("extend", "grow a cached tree to larger bounds");
  ce->add_option("--in", file, "cache file")->required();
  ce->add_option("--out", out, "output cache file (default: overwrite)");
  add_bounds(ce, lo, step, cls);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*id) {
      if (rec_files.empty()) rec_files.push_back(default_corpus_path());
      std::vector<FieldRecord> recs;
      for (const auto& f : rec_files)
        for (auto& r : parse_records(f))
          if (only.empty() || r.name == only) recs.push_back(std::move(r));
      if (recs.empty()) throw Error("no records selected");
      auto run = [&](const FieldRecord& r) {
        IdentifyOptions o;
        if (lo || step || cls) o.bounds = bounds_for(r.p, lo, step, cls);
        o.threads = jobs > 1 ? 1 : threads;
        o.require_sigma = !no_sigma;
        o.annotations = ann_path;
        return identify(r, o);
      };
      std::vector<IdentifyReport> reps(recs.size());
      if (jobs > 1) {
        std::vector<std::future<IdentifyReport>> fs;
        size_t next = 0;
        while (next < recs.size() || !fs.empty()) {
          while (next < recs.size() && static_cast<int>(fs.size()) < jobs)
            fs.push_back(std::async(std::launch::async, run, std::cref(recs[next++])));
          // reports come back in record order
          const size_t done = next - fs.size();
          reps[done] = fs.front().get();
          fs.erase(fs.begin());
        }
      } else {
        for (size_t i = 0; i < recs.size(); ++i) reps[i] = run(recs[i]);
      }
      int code = 0;
      for (size_t i = 0; i < reps.size(); ++i) {
        if (i) std::cout << '\n';
        std::cout << reps[i].render();
        code = std::max(code, exit_code(reps[i].verdict));
      }
      return code;
    }
    if (*st) {
      std::cout << stem_table(p, tsv, threads);
      return 0;
    }
    if (*tr) {
      auto r = RootSpec::parse(root);
      TreeOptions o;
      o.bounds = bounds_for(r.p, lo, step, cls);
      o.threads = threads;
      if (!prune.empty()) o.prune = parse_pattern_spec(prune);
      auto t = build_tree(r, o);
      print_nodes(std::cout, t, all_ids(t));
      std::cout << "# nodes " << t.nodes.size() << ", pruned " << t.pruned << ", "
                << (t.complete ? "complete" : "not exhausted") << " at lo " << t.bounds.max_lo << '\n';
      if (!dot.empty()) write_dot(t, dot);
      return 0;
    }
    if (*cv) {
      auto [r, path] = parse_path(node);
      auto c = cover(r, path, bounds_for(r.p, lo, step, cls), threads);
      print_nodes(std::cout, c.tree, c.members);
      std::cout << "# cover size " << c.members.size() << ", "
                << (c.complete_within_bounds ? "complete" : "not exhausted") << " at lo " << c.tree.bounds.max_lo
                << '\n';
      if (rho >= 0 || unit_rank >= 0) {
        if (rho < 0 || unit_rank < 0) throw Error("--rho and --r go together");
        auto f = shafarevich_filter(c, rho, unit_rank, theta);
        std::cout << "# shafarevich filter (" << rho << "," << unit_rank << "," << theta << ") keeps " << f.size()
                  << '\n';
        print_nodes(std::cout, c.tree, f);
      }
      if (!dot.empty()) write_dot(c.tree, dot);
      return 0;
    }
    if (*tp) {
      auto [ra, a] = parse_path(pa);
      auto [rb, b] = parse_path(pb);
      if (!(ra == rb)) throw Error("topology: different roots");
      auto T = topology(node_at(ra, a), node_at(rb, b));
      std::cout << "shape\tdlo\tdcl\tdcc\tfork\n"
                << T.shape << '\t' << T.delta_lo << '\t' << T.delta_cl << '\t' << T.delta_cc << '\t' << ra.label()
                << render_steps(T.fork) << '\n';
      return 0;
    }
    if (*cs) {
      auto r = RootSpec::parse(root);
      TreeOptions o;
      o.bounds = bounds_for(r.p, lo, step, cls);
      o.threads = threads;
      if (!prune.empty()) o.prune = parse_pattern_spec(prune);
      auto t = build_tree(r, o);
      cache_store(t, out);
      std::cout << "stored " << t.nodes.size() << " nodes to " << out << '\n';
      return 0;
    }
    if (*cl) {
      auto t = cache_load(file);
      print_nodes(std::cout, t, all_ids(t));
      if (!dot.empty()) write_dot(t, dot);
      return 0;
    }
    if (*ce) {
      auto t = cache_load(file);
      Bounds nb = t.bounds;
      if (lo > 0) nb.max_lo = lo;
      if (step > 0) nb.max_step = step;
      if (cls > 0) nb.max_class = cls;
      extend_tree(t, nb, threads);
      cache_store(t, out.empty() ? file : out);
      std::cout << "extended to " << t.nodes.size() << " nodes\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
