#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptower/linalg.hpp"
#include "ptower/types.hpp"

namespace ptower {

// Power-commutator presentation of a finite p-group on generators a_0..a_{n-1}:
//   a_i^p = pow(i),  [a_j, a_i] = comm(j, i) for j > i,
// where pow(i) only involves generators > i and comm(j,i) only generators > j.
// Elements are normal words a_0^{e_0} ... a_{n-1}^{e_{n-1}}, 0 <= e_k < p.
class PcPresentation {
 public:
  PcPresentation() = default;
  PcPresentation(int p, int n);

  int p() const { return p_; }
  int n() const { return n_; }

  const Elem& pow_rhs(int i) const { return pow_[i]; }
  const Elem& comm_rhs(int j, int i) const { return comm_[idx(j, i)]; }
  void set_pow(int i, const Elem& r);
  void set_comm(int j, int i, const Elem& r);

  // weight of a_k in the underlying central series (1 for generators)
  int weight(int k) const { return weight_[k]; }
  void set_weight(int k, int w) { weight_[k] = w; }

  // x <- x * a_g^c
  void mul_gen(Elem& x, int g, int c) const;
  // x <- x * w for a normal word w
  void mul_word(Elem& x, const Elem& w) const;
  Elem mul(const Elem& x, const Elem& y) const;
  Elem inv(const Elem& x) const;
  Elem pow(const Elem& x, long long k) const;
  Elem comm(const Elem& x, const Elem& y) const;  // x^-1 y^-1 x y
  Elem conj(const Elem& x, const Elem& y) const;  // y^-1 x y

  // Checks the standard overlaps; empty when consistent, otherwise a
  // description of the first failing test.
  std::optional<std::string> consistency_failure() const;
  // Both sides of every overlap test among generators below limit.
  struct Overlap {
    Elem lhs, rhs;
    std::string label;
  };
  std::vector<Overlap> overlaps(int limit) const;
  bool consistent() const { return !consistency_failure().has_value(); }

  bool operator==(const PcPresentation&) const = default;

  // Relations are numbered: pow(i) has id i, comm(j,i) has id n + idx(j,i).
  int relation_count() const { return n_ + n_ * (n_ - 1) / 2; }
  const Elem& relation_rhs(int id) const { return id < n_ ? pow_[id] : comm_[id - n_]; }
  void set_relation_rhs(int id, const Elem& r);
  // lhs of relation id evaluated on images of the generators
  struct RelLhs {
    bool is_pow;
    int j, i;  // pow: j=i=index; comm: [a_j,a_i]
  };
  RelLhs relation_lhs(int id) const;
  int relation_id(const RelLhs& l) const { return l.is_pow ? l.j : n_ + idx(l.j, l.i); }

  std::string serialize() const;
  static PcPresentation deserialize(const std::string& s);

 private:
  int idx(int j, int i) const { return j * (j - 1) / 2 + i; }
  void conj_by_gen(Elem& t, int g) const;

  int p_ = 0, n_ = 0;
  std::vector<Elem> pow_;
  std::vector<Elem> comm_;
  std::vector<int> weight_;
};

// Subgroup given by its canonical induced generating sequence: leading
// positions strictly increasing, leading exponent 1, and zero exponent at
// every other member's leading position.
struct Subgroup {
  std::vector<Elem> gens;
  std::vector<int> leads;
  int size_log() const { return static_cast<int>(gens.size()); }
  bool operator==(const Subgroup& o) const { return gens == o.gens; }
  std::string key(int n) const;
};

// Closure of gens under multiplication, and conjugation by conj_by.
Subgroup closure(const PcPresentation& G, const std::vector<Elem>& gens,
                 const std::vector<Elem>& conj_by = {});
Subgroup whole_group(const PcPresentation& G);
Subgroup trivial_subgroup();
// right sifting: x = r * h with h in H and r zero at the leads of H
Elem sift_residue(const PcPresentation& G, const Subgroup& H, Elem x);
bool contains(const PcPresentation& G, const Subgroup& H, const Elem& x);
bool is_subgroup_of(const PcPresentation& G, const Subgroup& A, const Subgroup& B);
// exponents f with x = h_0^{f_0} h_1^{f_1} ... ; x must lie in H
std::vector<int> subgroup_exponents(const PcPresentation& G, const Subgroup& H, Elem x);

Subgroup commutator_subgroup(const PcPresentation& G, const Subgroup& A, const Subgroup& B);
Subgroup derived_subgroup(const PcPresentation& G, const Subgroup& H);
Subgroup normal_closure(const PcPresentation& G, const std::vector<Elem>& gens);
Subgroup frattini(const PcPresentation& G, const Subgroup& H);
Subgroup join(const PcPresentation& G, const Subgroup& A, const Subgroup& B);
Subgroup center(const PcPresentation& G);

std::vector<Subgroup> lower_central_series(const PcPresentation& G);  // gamma_1 .. 1
std::vector<Subgroup> p_central_series(const PcPresentation& G);      // P_0 = G .. 1
std::vector<Subgroup> derived_series(const PcPresentation& G);        // G .. 1

// word of symbols +k (a_k) and -k (a_k^-1), generators numbered from 1
Elem collect(const PcPresentation& G, const std::vector<int>& word);

struct OrderStats {
  int lo = 0, cl = 0, cc = 0, dl = 0;
  bool metabelian = true;
};
OrderStats order_stats(const PcPresentation& G);

int nilpotency_class(const PcPresentation& G);
int derived_length(const PcPresentation& G);
int generator_rank(const PcPresentation& G);  // d(G)

// Abelian type of H/N (N normal in H, H/N abelian).
AbelianType abelian_invariants(const PcPresentation& G, const Subgroup& H, const Subgroup& N);
AbelianType abelianization(const PcPresentation& G);

// Coordinates of H/N: an SNF transform fixed once, then coords(x) maps x in H
// to its vector in prod Z/p^{v_j}.
class AbelianCoordinates {
 public:
  AbelianCoordinates(const PcPresentation& G, const Subgroup& H, const Subgroup& N);
  const AbelianType& type() const { return type_; }
  std::vector<std::int64_t> coords(const Elem& x) const;
  const std::vector<std::int64_t>& moduli() const { return mod_; }

 private:
  const PcPresentation* G_;
  Subgroup H_;
  AbelianType type_;
  std::vector<int> cols_;  // transformed columns with nontrivial valuation
  std::vector<std::int64_t> mod_;
  std::vector<std::vector<std::int64_t>> colT_;
  std::int64_t modulus_;
};

// Presentation of G/N. pos[k] is the G-position of quotient generator k.
struct Quotient {
  PcPresentation pres;
  Subgroup kernel;
  std::vector<int> pos;
  Elem project(const PcPresentation& G, const Elem& x) const;
  Elem lift(const Elem& q) const;
};
Quotient quotient(const PcPresentation& G, const Subgroup& N);

// Induced presentation on the canonical generating sequence of H.
PcPresentation induced_presentation(const PcPresentation& G, const Subgroup& H);

// Abelian group given by type with generators grouped per cyclic factor,
// weight-one generators first.
PcPresentation abelian_presentation(int p, const AbelianType& type);

// Dense element numbering sum e_k p^k, for enumerating small groups.
std::uint64_t elem_index(const Elem& x, int n, int p);
Elem elem_from_index(std::uint64_t idx, int n, int p);

}  // namespace ptower
