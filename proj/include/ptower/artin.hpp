#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptower/pcgroup.hpp"

namespace ptower {

// Abelianization A = G/G' with a fixed presentation; for groups in one tree
// this presentation is literally the same, which gives the canonical
// identification of abelianizations along tree edges.
struct Abelianization {
  Subgroup derived;  // G' in G
  Quotient q;        // A = G/G'
  Subgroup lift(const PcPresentation& G, const Subgroup& S) const;  // preimage in G
};
Abelianization abelianization_data(const PcPresentation& G);

// Subgroups of A of index p^n, in canonical order (sorted keys).
std::vector<Subgroup> layer_in_abelianization(const PcPresentation& A, int n);
// Layer as subgroups of G containing G'.
std::vector<Subgroup> layer(const PcPresentation& G, int n);

struct Transfer {
  AbelianType target;                              // H/H'
  std::vector<std::int64_t> moduli;
  std::vector<std::vector<std::int64_t>> images;   // image of each generator of A
  Subgroup kernel;                                 // in A
};
// H given as a subgroup of A (index p^n); transversal chooses canonical
// residues, or residues shifted by a fixed element of H when `alt` is set.
Transfer artin_transfer(const PcPresentation& G, const Abelianization& ab, const Subgroup& S,
                        bool alt = false);

struct LayerData {
  int index_log = 0;
  std::vector<Subgroup> members;  // subgroups of A, lockstep order
  std::vector<AbelianType> ttt;
  std::vector<Subgroup> kernels;  // subgroups of A
  std::vector<int> digits;        // 0 total, j layer-1 position, -1 otherwise
};

struct ArtinPattern {
  int p = 0;
  AbelianType tau0;
  PcPresentation A;
  std::vector<LayerData> layers;  // 0..v
  int layer1_size() const { return layers.size() > 1 ? static_cast<int>(layers[1].members.size()) : 0; }
  std::vector<int> kappa1() const { return layers.size() > 1 ? layers[1].digits : std::vector<int>{}; }
  std::vector<AbelianType> tau1() const { return layers.size() > 1 ? layers[1].ttt : std::vector<AbelianType>{}; }
};

// max_layer < 0 means all layers
ArtinPattern artin_pattern(const PcPresentation& G, int max_layer = -1);

struct Ipad {
  AbelianType tau0;
  std::vector<AbelianType> tau1;  // sorted descending
  bool operator==(const Ipad&) const = default;
  auto operator<=>(const Ipad&) const = default;
};
Ipad ipad(const PcPresentation& G);
std::vector<int> ipod(const PcPresentation& G);
struct Ipad2 {
  AbelianType tau0;
  std::vector<Ipad> components;  // one per layer-1 subgroup, sorted
  bool operator==(const Ipad2&) const = default;
};
Ipad2 ipad2(const PcPresentation& G);
// depth-k recursion: depth 1 = ipad, depth 2 = ipad2 ... as a rendered string
std::string iterated_ipad(const PcPresentation& G, int depth);

// --- TKT combinatorics -------------------------------------------------------

// Lexicographically minimal (color, digit) sequence over simultaneous
// renumerations. digits: 0 total, j in 1..m. colors optional.
struct CanonicalTkt {
  std::vector<int> digits;
  std::vector<int> colors;
  std::vector<int> order;  // order[new position] = old position
};
CanonicalTkt tkt_canonical(const std::vector<int>& digits, const std::vector<int>& colors = {});
// #{i : kappa(i) in {0, i}}, i.e. layer-1 subgroups contained in their kernel
int eta(const std::vector<int>& digits);
int eta_fixed_points(const std::vector<int>& digits);
int eta_targets(const std::vector<AbelianType>& tau1, const AbelianType& t);
bool is_permutation(const std::vector<int>& digits);
// cycle lengths, descending; empty unless a permutation
std::vector<int> cycle_pattern(const std::vector<int>& digits);
std::string render_cycles(const std::vector<int>& cyc);

// --- rendering and partial patterns ----------------------------------------

std::string render_type_list(const std::vector<AbelianType>& ts);
std::vector<AbelianType> parse_type_list(const std::string& s);
std::string render_digits(const std::vector<int>& d);
std::vector<int> parse_digits(const std::string& s);
std::string render_pattern(const ArtinPattern& ap);

// Partially specified pattern as measured on a field or used as a target.
struct PatternSpec {
  std::optional<AbelianType> tau0;
  std::map<int, std::vector<AbelianType>> tau;  // layer -> members (unordered)
  std::optional<std::vector<int>> kappa1;       // digits w.r.t. its own numbering
  std::vector<Ipad> ipad2;                      // subset of layer-1 components
  std::string render() const;
};
// "tau0=1^2 tau1=[21,(1^2)^5] kappa1=(1,0^5) tau2=[...] ipad2=<2^21;21,21,21>..."
PatternSpec parse_pattern_spec(const std::string& s);
PatternSpec spec_of(const ArtinPattern& ap, int depth);

enum class MatchMode { Equal, Leq };
// Equal: the group's pattern restricted to the specified data equals the
// spec up to simultaneous renumeration. Leq: some renumeration makes the
// group's pattern <= the spec (targets entrywise <=, kernels containing).
bool match_spec(const ArtinPattern& ap, const PatternSpec& spec, MatchMode mode,
                const Ipad2* group_ipad2 = nullptr);

// Both patterns from the same tree: layer members identified directly.
bool pattern_leq(const ArtinPattern& a, const ArtinPattern& b);

}  // namespace ptower
