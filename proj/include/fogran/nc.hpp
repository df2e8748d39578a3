#pragma once

#include <functional>
#include <vector>

#include "fogran/core.hpp"
#include "fogran/model.hpp"

namespace fogran {

enum class Coding {
  xor_idnc,  // binary XOR, instantly decodable
  rlnc,      // random linear combination over the listed files
};

struct TransmissionPlan {
  FileSet files;
  double rate = 0.0;  // bits/s
  UserSet targets;
  Coding coding = Coding::xor_idnc;

  double duration(double file_size_bits) const { return file_size_bits / rate; }
};

inline bool is_instantly_decodable(FileSet combination, FileSet has, FileSet wants) {
  const FileSet wanted = combination & wants;
  return wanted.size() == 1 && (combination - wanted).subset_of(has);
}

inline bool is_instantly_decodable(FileSet combination, std::size_t user, const SideState& side) {
  return is_instantly_decodable(combination, side.has[user], side.wants[user]);
}

// The file a targeted user recovers from a plan.
inline std::size_t decoded_file(const TransmissionPlan& plan, std::size_t user, const SideState& side) {
  return (plan.files & side.wants[user]).front();
}

// Users among `candidates` that still want files, decode `combination` instantly and
// whose capacity from the source is at least `rate`.
template <class CapacityFn>
UserSet targeted_users(FileSet combination, double rate, CapacityFn&& capacity, const SideState& side,
                       UserSet candidates) {
  UserSet out;
  for (std::size_t u : candidates & side.wanting())
    if (is_instantly_decodable(combination, u, side) && capacity(u) >= rate) out.insert(u);
  return out;
}

// True when every file of `s` is the only wanted file of s for some eligible user.
inline bool serves_every_file(FileSet s, const SideState& side, UserSet eligible) {
  for (std::size_t f : s) {
    bool served = false;
    for (std::size_t u : eligible)
      if ((side.wants[u] & s) == FileSet::single(f)) {
        served = true;
        break;
      }
    if (!served) return false;
  }
  return true;
}

// All XOR combinations of cached files (size <= max_size) whose pairwise IDNC
// association conditions hold. The property is closed under taking subsets, so a
// depth-first search over increasing file indices with pruning finds them all.
// Output is in lexicographic order of the sorted file lists.
inline std::vector<FileSet> enumerate_idnc_combinations(FileSet cache, const SideState& side, UserSet eligible,
                                                        std::size_t max_size) {
  std::vector<FileSet> out;
  eligible &= side.wanting();
  FileSet wanted_somewhere;
  for (std::size_t u : eligible) wanted_somewhere |= side.wants[u];
  const std::vector<std::size_t> files = (cache & wanted_somewhere).to_vector();
  std::function<void(std::size_t, FileSet)> dfs = [&](std::size_t start, FileSet cur) {
    for (std::size_t j = start; j < files.size(); ++j) {
      FileSet next = cur;
      next.insert(files[j]);
      if (!serves_every_file(next, side, eligible)) continue;
      out.push_back(next);
      if (next.size() < max_size) dfs(j + 1, next);
    }
  };
  if (max_size >= 1) dfs(0, FileSet{});
  return out;
}

}  // namespace fogran
