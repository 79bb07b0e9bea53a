#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptower {

// Upper bound on the length of a pc presentation. p-covers of the groups we
// walk stay well under this.
constexpr int kMaxGens = 64;

struct Elem {
  std::array<std::uint8_t, kMaxGens> e{};

  std::uint8_t& operator[](int i) { return e[i]; }
  std::uint8_t operator[](int i) const { return e[i]; }
  bool operator==(const Elem&) const = default;
  auto operator<=>(const Elem&) const = default;

  bool is_identity(int n) const {
    for (int i = 0; i < n; ++i)
      if (e[i]) return false;
    return true;
  }
  // first nonzero position, or n
  int depth(int n) const {
    for (int i = 0; i < n; ++i)
      if (e[i]) return i;
    return n;
  }
  static Elem gen(int i, int c = 1) {
    Elem x;
    x.e[i] = static_cast<std::uint8_t>(c);
    return x;
  }
};

std::string elem_to_string(const Elem& x, int n);

// Abelian type as a list of logarithmic exponents, sorted descending:
// {2,1} is C_{p^2} x C_p, written "21"; {1,1,1} is "1^3".
using AbelianType = std::vector<int>;

std::string render_type(const AbelianType& t);
AbelianType parse_type(const std::string& s);
// descending lexicographic order of sorted exponent lists, used to order layers
bool type_greater(const AbelianType& a, const AbelianType& b);
// componentwise comparison of p-ranks/orders: a <= b as abelian groups can
// be a quotient-subgroup pair, i.e. padded exponent lists are entrywise <=
bool type_leq(const AbelianType& a, const AbelianType& b);
int type_log_order(const AbelianType& t);

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ptower
