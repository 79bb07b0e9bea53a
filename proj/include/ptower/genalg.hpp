#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ptower/linalg.hpp"
#include "ptower/pcgroup.hpp"

namespace ptower {

// defs[k] = relation id whose rhs is w * a_k (w in earlier generators) for
// k >= d, and -1 for the d generators. Throws for presentations that are not
// on a minimal generating set.
std::vector<int> find_definitions(const PcPresentation& G, int d);

struct PCover {
  PcPresentation cover;  // a_0..a_{n-1}, then mu central tails
  int n = 0, d = 0, mu = 0, cls = 0;
  std::vector<int> defs;      // definitions of the cover's generators
  FpMat nucleus;              // gamma_{c+1}(G*) in tail coordinates, rref
  FpMat p_nucleus;            // P_c(G*) in tail coordinates, rref
  int nu() const { return nucleus.rows; }
  int nu_p() const { return p_nucleus.rows; }
  Subgroup multiplicator() const;
};
PCover p_cover(const PcPresentation& G);

// dim H^2(G, F_p) from the tails of all relations; needs no definitions
int relation_rank(const PcPresentation& G);

struct Automorphism {
  std::vector<Elem> img;  // images of all generators
  bool operator==(const Automorphism&) const = default;
};

Elem apply(const PcPresentation& G, const Automorphism& a, const Elem& x);
// a first, then b
Automorphism compose(const PcPresentation& G, const Automorphism& a, const Automorphism& b);
Automorphism identity_automorphism(const PcPresentation& G);
Automorphism extend_images(const PcPresentation& G, const std::vector<int>& defs,
                           const std::vector<Elem>& gen_images);
bool is_automorphism(const PcPresentation& G, const Automorphism& a);
Automorphism power(const PcPresentation& G, const Automorphism& a, std::uint64_t k);

struct AutGroup {
  std::vector<Automorphism> gens;
  std::uint64_t order = 1;
};

// Stabiliser chain of automorphisms acting on group elements, base a_0..a_{d-1}.
class AutChain {
 public:
  AutChain(const PcPresentation& G, int d);
  // true when a was new (not already in the group)
  bool add(const Automorphism& a);
  bool contains(const Automorphism& a) const;
  std::uint64_t order() const;
  const std::vector<Automorphism>& strong_generators() const { return strong_; }

 private:
  struct Level {
    std::uint32_t base;
    std::vector<int> gens;              // indices into strong_
    std::vector<std::int32_t> via;      // generator index reaching the point, -1 unseen, -2 base
    std::vector<std::uint32_t> prev;    // preimage point
    std::vector<std::uint32_t> orbit;
  };
  // residue after sifting and the level where it stopped (d if complete)
  std::pair<Automorphism, int> sift(Automorphism a) const;
  void extend_orbit(int level);

  const PcPresentation* G_;
  int d_;
  std::uint64_t npts_;
  std::vector<Automorphism> strong_, strong_inv_;
  std::vector<Level> levels_;
};

// Aut of an abelian root. Elementary: transvections and diagonal matrices of
// GL(d,p). Otherwise exhaustive search over generator images.
AutGroup root_automorphisms(const PcPresentation& G);
// Exhaustive search over generator images, refused above max_candidates.
AutGroup automorphisms_bruteforce(const PcPresentation& G, std::uint64_t max_candidates = 20000000);

// Everything needed to build children of G and, later, their automorphisms.
struct LiftContext {
  PcPresentation G;
  PCover pc;
  AutGroup aut;
  std::vector<Automorphism> lifted;   // each aut generator on G*
  std::vector<FpMat> mats;            // action on the multiplicator, row vectors
  std::vector<Automorphism> aut_inv;  // inverses of aut.gens on G
};
std::shared_ptr<const LiftContext> make_lift_context(const PcPresentation& G, const AutGroup& aut);

struct DescendantRecord {
  PcPresentation child;
  int step = 0;
  int orbit_index = 0;
  FpMat U;  // allowable subgroup, rref in tail coordinates
  std::uint64_t orbit_size = 0;
  std::shared_ptr<const LiftContext> ctx;
};

struct DescendantOptions {
  int max_step = 2;
  int only_step = 0;  // 0 = all steps up to max_step
  std::uint64_t max_subspaces = 20000000;
};

std::vector<DescendantRecord> immediate_descendants(std::shared_ptr<const LiftContext> ctx,
                                                    const DescendantOptions& opt = {});
// Aut(child) from the stabiliser of its allowable subgroup plus the central
// automorphisms; deterministic for a given seed.
AutGroup descendant_automorphisms(const DescendantRecord& r, std::uint64_t seed = 1);

struct SigmaInfo {
  bool is_sigma = false;
  bool is_schur_sigma = false;
  int d1 = 0, d2 = 0;
};
SigmaInfo sigma_classify(const PcPresentation& G, const AutGroup& A, int d2);

// number of s-dimensional subspaces W of F_p^mu with W cap L0 = 0, dim L0 = mu - nu
std::uint64_t allowable_count(int p, int mu, int nu, int s);

}  // namespace ptower
