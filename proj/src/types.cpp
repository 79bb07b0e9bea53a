#include "ptower/types.hpp"

#include <algorithm>
#include <cctype>

namespace ptower {

std::string elem_to_string(const Elem& x, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    if (i) s += ' ';
    s += std::to_string(x[i]);
  }
  return s;
}

namespace {

std::string token(int v) {
  if (v >= 0 && v < 10) return std::string(1, char('0' + v));
  return "{" + std::to_string(v) + "}";
}

int read_token(const std::string& s, size_t& i) {
  if (i >= s.size()) throw Error("truncated type string '" + s + "'");
  if (s[i] == '{') {
    size_t j = s.find('}', i);
    if (j == std::string::npos) throw Error("unbalanced brace in '" + s + "'");
    int v = std::stoi(s.substr(i + 1, j - i - 1));
    i = j + 1;
    return v;
  }
  if (!std::isdigit(static_cast<unsigned char>(s[i])))
    throw Error("bad character in type string '" + s + "'");
  return s[i++] - '0';
}

}  // namespace

// Runs are written d^k; the count after '^' is a single token, so 2^21 is
// {2,2,1}. The trivial group renders as "0".
std::string render_type(const AbelianType& t) {
  if (t.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < t.size();) {
    size_t j = i;
    while (j < t.size() && t[j] == t[i]) ++j;
    s += token(t[i]);
    if (j - i > 1) s += "^" + token(static_cast<int>(j - i));
    i = j;
  }
  return s;
}

AbelianType parse_type(const std::string& s) {
  AbelianType t;
  if (s == "0" || s.empty()) return t;
  size_t i = 0;
  while (i < s.size()) {
    int v = read_token(s, i);
    int k = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      k = read_token(s, i);
    }
    if (v <= 0) throw Error("zero exponent in type '" + s + "'");
    for (int r = 0; r < k; ++r) t.push_back(v);
  }
  std::sort(t.rbegin(), t.rend());
  return t;
}

bool type_greater(const AbelianType& a, const AbelianType& b) {
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

bool type_leq(const AbelianType& a, const AbelianType& b) {
  if (a.size() > b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

int type_log_order(const AbelianType& t) {
  int s = 0;
  for (int v : t) s += v;
  return s;
}

}  // namespace ptower
