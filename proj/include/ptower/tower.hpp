#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptower/artin.hpp"
#include "ptower/genalg.hpp"
#include "ptower/pcgroup.hpp"

namespace ptower {

// Abelian tree root: "ab(p,d)" is elementary of rank d, "ab(p,(21))" any type.
struct RootSpec {
  int p = 0;
  AbelianType type;
  std::string label() const;
  static RootSpec parse(const std::string& s);
  bool operator==(const RootSpec&) const = default;
};

struct Bounds {
  int max_lo = 0;
  int max_step = 2;
  int max_class = 0;  // 0: unbounded
  static Bounds defaults(int p);
  bool operator==(const Bounds&) const = default;
};

struct PathStep {
  int step = 0, index = 0;
  auto operator<=>(const PathStep&) const = default;
};
using Path = std::vector<PathStep>;

// "-#2;1-#1;1" with (..)^k compression of repeated runs
std::string render_steps(const Path& path);
// "<root>-#s;n(-#s;n)^k..." -> root and steps
std::pair<RootSpec, Path> parse_path(const std::string& s);

struct TreeNode {
  PcPresentation group;
  Path path;
  int parent = -1;
  std::vector<int> children;
  OrderStats stats;
  int d1 = 0, d2 = 0, nu = 0, mu = 0;
  bool terminal = false, sigma = false, schur_sigma = false, metabelian = true;
  AutGroup aut;
  ArtinPattern pattern;
  int gen_lo = 0;  // children up to this log order have been generated
};

struct TreeOptions {
  Bounds bounds;
  std::optional<PatternSpec> prune;  // keep only nodes with pattern <= target
  int threads = 0;                   // 0: hardware concurrency
  bool probe_frontier = true;        // certify completeness past the bounds
  // extra subtree test on the bare group; false must imply no wanted node below
  std::function<bool(const PcPresentation&)> admit;
};

class DescendantTree {
 public:
  RootSpec root;
  Bounds bounds;
  std::optional<PatternSpec> prune;
  std::function<bool(const PcPresentation&)> admit;
  std::vector<TreeNode> nodes;  // sorted by path, nodes[0] is the root
  bool complete = true;         // nothing admissible lies beyond the bounds
  std::uint64_t pruned = 0;     // children cut by the pattern test

  int find(const Path& path) const;
  int find(const std::string& path_expr) const;
  std::string path_string(int id) const { return root.label() + render_steps(nodes[id].path); }
};

// Node with pattern and invariants filled in; gen_lo = lo.
TreeNode make_node(const PcPresentation& g, AutGroup aut, Path path);
// Restore canonical order and parent/children links after editing nodes.
void reindex(DescendantTree& tree);

// The node reached from the root by following orbit indices.
TreeNode node_at(const RootSpec& root, const Path& path);

DescendantTree build_tree(const RootSpec& root, const TreeOptions& opt);
// Nodes whose pattern equals the target up to renumeration.
std::vector<int> find_by_pattern(const DescendantTree& tree, const PatternSpec& target, bool metabelian_only = false);
// Grow an existing tree to larger bounds; equals a from-scratch build.
void extend_tree(DescendantTree& tree, const Bounds& nb, int threads = 0, bool probe_frontier = true);
// Recompute completeness for the current bounds.
void certify(DescendantTree& tree, int threads = 0);

// --- fingerprints and covers -------------------------------------------------

// lo, class, coclass, full Artin pattern, ipad2, d2, types of G/G'' 's derived
// subgroup and centre, as text.
std::string fingerprint(const PcPresentation& G);
std::string fingerprint_digest(const std::string& fp);
PcPresentation second_derived_quotient(const PcPresentation& G);
bool second_derived_match(const PcPresentation& candidate, const std::string& base_fingerprint);

struct CoverResult {
  DescendantTree tree;
  int base = -1;
  std::vector<int> members;  // node ids, base included
  bool complete_within_bounds = false;
};
// Cover of the metabelian group at node `base_path` within bounds. The tree
// is pruned by AP(base) and by X/X'' ~ base/gamma_{cl(X)+1}(base), which
// every ancestor of a member satisfies.
CoverResult cover(const std::string& base_path, const Bounds& bounds, int threads = 0);
CoverResult cover(const RootSpec& root, const Path& base_path, const Bounds& bounds, int threads = 0);
// members of cov(base) among the nodes of an existing tree
std::vector<int> cover_members(const DescendantTree& tree, int base);
// subtree test used by cover()
std::function<bool(const PcPresentation&)> cover_admission(const PcPresentation& base);

// rho <= d2 <= rho + r + theta
std::vector<int> shafarevich_filter(const CoverResult& cov, int rho, int r, int theta);

struct Topology {
  int delta_lo = 0, delta_cl = 0, delta_cc = 0;
  Path fork;
  std::string shape;  // equal | child | bastard | sibling | descent | fork
};
Topology topology(const DescendantTree& tree, int a, int b);
// nodes of one root; only paths and invariants are used
Topology topology(const TreeNode& a, const TreeNode& b);

// --- Phi6 stem --------------------------------------------------------------

struct StemEntry {
  std::string path;
  TreeNode node;
  int eta = 0;
  std::vector<int> tkt_canonical;
  std::vector<int> cycles;  // empty unless the TKT is a permutation
  bool capable = false;
  bool infinitely_capable = false;  // capable step-1 descendants at every probed depth
  int probe_depth = 0;
};
std::vector<StemEntry> stem_phi6(int p, int probe_depth = 3, int threads = 0);

enum class TwoStage { Length2, Unknown };
TwoStage two_stage_decision(const PatternSpec& spec, int p, const std::vector<StemEntry>* stem = nullptr);

// --- output -----------------------------------------------------------------

std::string to_dot(const DescendantTree& tree, const std::map<int, std::string>& labels = {});

struct Annotation {
  std::string name;
  int p = 0;
  std::string digest;
  std::string path;  // disambiguates fingerprint twins; empty when unique
  std::string note;
};
std::vector<Annotation> load_annotations(const std::string& path);
std::string default_annotation_path();
// name for G from the annotation list, empty if unknown
std::string annotate(const PcPresentation& G, const std::vector<Annotation>& ann, const std::string& path = {});

}  // namespace ptower
