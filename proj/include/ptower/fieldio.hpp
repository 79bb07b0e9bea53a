#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptower/tower.hpp"

namespace ptower {

// One [field] block of a record file.
struct FieldRecord {
  std::string name;
  int p = 0;
  long long discriminant = 0;
  int r1 = 0, r2 = 0;
  int unit_rank = 0;  // r1 + r2 - 1
  int theta = 0;
  AbelianType class_type;
  int rho = 0;
  PatternSpec ap;  // tau0 = class_type; ipad2 components when measured
  bool infinite_flag = false;
  bool advisory = false;
  std::string expect;  // verdict the source states, if any
  int line = 0;

  bool quadratic() const { return r1 + 2 * r2 == 2; }
};

std::vector<FieldRecord> parse_records_text(const std::string& text, const std::string& source = "<text>");
std::vector<FieldRecord> parse_records(const std::string& path);
std::string default_corpus_path();

enum class Verdict { Length2, Length3, AtLeast3, Infinite, Undecided };
std::string verdict_name(Verdict v);
int exit_code(Verdict v);

struct CandidateInfo {
  int node = -1;
  std::string path;
  std::string name;  // from the annotation table
  OrderStats stats;
  int d2 = 0;
  bool sigma = false, schur_sigma = false;
};

struct TowerCandidate {
  int base = 0;  // index into IdentifyReport::metabelian
  CandidateInfo group;
  Topology topology;
};

struct IdentifyOptions {
  std::optional<Bounds> bounds;  // default Bounds::defaults(p)
  int threads = 0;
  bool require_sigma = true;  // quadratic base fields only
  std::string annotations;    // empty: bundled table
};

struct IdentifyReport {
  FieldRecord record;
  Bounds bounds;
  std::vector<CandidateInfo> metabelian;  // candidates for the second p-class group
  std::vector<int> cover_sizes;           // per metabelian candidate
  std::vector<bool> cover_complete;
  std::vector<TowerCandidate> tower;      // after the Shafarevich and ipad2 filters
  TwoStage two_stage = TwoStage::Unknown;
  Verdict verdict = Verdict::Undecided;
  std::vector<std::string> notes;
  std::string render() const;
};

IdentifyReport identify(const FieldRecord& rec, const IdentifyOptions& opt = {});

// Rows: path, eta, canonical TKT, cycle pattern, capability, sigma, Schur sigma.
std::string stem_table(int p, bool tsv, int threads = 0);

// --- tree cache -------------------------------------------------------------

constexpr int kCacheVersion = 1;
void cache_store(const DescendantTree& tree, const std::string& path);
DescendantTree cache_load(const std::string& path);

}  // namespace ptower
