#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"

using namespace fogran;

TEST(InstantDecodability, Cases) {
  // wants f2 only through the combination; the other file is known
  EXPECT_TRUE(is_instantly_decodable(FileSet{1, 3}, FileSet{0, 3}, FileSet{1, 2}));
  // two unknown files
  EXPECT_FALSE(is_instantly_decodable(FileSet{1, 2}, FileSet{0, 3}, FileSet{1, 2}));
  // nothing new
  EXPECT_FALSE(is_instantly_decodable(FileSet{0, 3}, FileSet{0, 3}, FileSet{1, 2}));
  // single wanted file
  EXPECT_TRUE(is_instantly_decodable(FileSet{2}, FileSet{0, 3}, FileSet{1, 2}));
}

TEST(TargetedUsers, RespectsRateAndDecodability) {
  const Scenario sc = fixtures::example1();
  const Matrix& cap = sc.instance.fixed->errh;
  auto from_e2 = [&](std::size_t u) { return cap(u, 1); };
  // {f2, f4} from e2: u2, u3 and u5 decode it; only u2, u3 reach 5 b/s
  EXPECT_EQ(targeted_users(FileSet{1, 3}, 5.0, from_e2, sc.side, sc.instance.all_users()), (UserSet{1, 2}));
  EXPECT_EQ(targeted_users(FileSet{1, 3}, 2.5, from_e2, sc.side, sc.instance.all_users()), (UserSet{1, 2, 4}));
}

namespace {

// Every subset of the cache, filtered by the definition.
std::vector<std::vector<std::size_t>> brute_force(FileSet cache, const SideState& side, UserSet eligible,
                                                  std::size_t cap) {
  eligible &= side.wanting();
  const std::vector<std::size_t> files = cache.to_vector();
  std::vector<std::vector<std::size_t>> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << files.size()); ++mask) {
    FileSet s;
    for (std::size_t j = 0; j < files.size(); ++j)
      if (mask >> j & 1U) s.insert(files[j]);
    if (s.size() > cap) continue;
    bool ok = true;
    for (std::size_t f : s) {
      bool someone = false;
      for (std::size_t u : eligible) someone |= (side.wants[u] & s) == FileSet::single(f);
      ok &= someone;
    }
    if (ok) out.push_back(s.to_vector());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(IdncCombinations, MatchesBruteForceInLexicographicOrder) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t f = 3 + rng() % 8, n = 2 + rng() % 7, cap = 1 + rng() % 4;
    std::vector<FileSet> has;
    for (std::size_t u = 0; u < n; ++u) has.push_back(FileSet::from_bits(rng() & FileSet::first_n(f).bits()));
    const SideState side = SideState::from_has(has, f);
    const FileSet cache = FileSet::from_bits(rng() & FileSet::first_n(f).bits());
    const UserSet eligible = UserSet::from_bits(rng() & UserSet::first_n(n).bits());
    std::vector<std::vector<std::size_t>> got;
    for (FileSet s : enumerate_idnc_combinations(cache, side, eligible, cap)) got.push_back(s.to_vector());
    EXPECT_EQ(got, brute_force(cache, side, eligible, cap)) << "trial " << trial;
  }
}

TEST(IdncCombinations, CapLimitsSize) {
  const Scenario sc = fixtures::example1();
  for (FileSet s : enumerate_idnc_combinations(sc.instance.caches[0], sc.side, sc.instance.all_users(), 1))
    EXPECT_EQ(s.size(), 1u);
  EXPECT_TRUE(enumerate_idnc_combinations(sc.instance.caches[0], sc.side, sc.instance.all_users(), 0).empty());
}

TEST(TransmissionPlan, DecodedFileAndDuration) {
  const Scenario sc = fixtures::example1();
  TransmissionPlan p{FileSet{1, 3}, 5.0, UserSet{1, 2}};
  EXPECT_EQ(decoded_file(p, 1, sc.side), 1u);
  EXPECT_EQ(decoded_file(p, 2, sc.side), 3u);
  EXPECT_DOUBLE_EQ(p.duration(10.0), 2.0);
}
