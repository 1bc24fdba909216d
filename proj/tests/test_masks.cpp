#include <gtest/gtest.h>

#include "oracles.hpp"
#include "seenet/masks.hpp"

using namespace seenet;

TEST(Normalize, DividesByMaximum) {
  const AttentionMap m = normalize_map(AttentionMap(1, 3, std::vector<float>{0.0f, 2.0f, 4.0f}));
  EXPECT_TRUE(m.normalized);
  EXPECT_EQ(m.values, (std::vector<float>{0.0f, 0.5f, 1.0f}));
}

TEST(Normalize, AllZeroStaysZero) {
  const AttentionMap m = normalize_map(AttentionMap(2, 2));
  EXPECT_TRUE(m.normalized);
  for (float v : m.values) EXPECT_EQ(v, 0.0f);
}

TEST(Normalize, NegativeValueIsContractViolation) {
  EXPECT_THROW(normalize_map(AttentionMap(1, 2, std::vector<float>{1.0f, -0.1f})), ContractViolation);
}

TEST(TernaryMask, WorkedExample) {
  const AttentionMap m(1, 5, std::vector<float>{1.0f, 0.71f, 0.69f, 0.06f, 0.04f});
  const TernaryMask t = ternary_mask(m);
  EXPECT_EQ(t.codes(), (std::vector<signed char>{0, 0, 1, 1, -1}));
  const auto c = t.counts();
  EXPECT_EQ(c.attention, 2u);
  EXPECT_EQ(c.potential, 2u);
  EXPECT_EQ(c.background, 1u);
}

TEST(TernaryMask, BoundaryValuesFollowConventions) {
  // Exactly k_h * max is attention; exactly k_l * max is not background.
  const AttentionMap m(1, 4, std::vector<float>{2.0f, 1.5f, 0.5f, 0.4999f});
  EXPECT_EQ(ternary_mask(m, 0.75, 0.25).codes(), (std::vector<signed char>{0, 0, 1, -1}));
}

TEST(TernaryMask, AllZeroMapIsBackground) {
  const TernaryMask t = ternary_mask(AttentionMap(3, 3));
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_EQ(t.zone(i), Zone::background);
  const MaskMap sc = mask_for_sc(AttentionMap(3, 3));
  for (auto v : sc.values) EXPECT_EQ(v, 1);
}

TEST(TernaryMask, InvalidThresholdsAreConfigErrors) {
  const AttentionMap m(1, 1, 1.0f);
  EXPECT_THROW(ternary_mask(m, 0.3, 0.3), ConfigError);
  EXPECT_THROW(ternary_mask(m, 0.3, 0.5), ConfigError);
  EXPECT_THROW(ternary_mask(m, 1.1, 0.5), ConfigError);
  EXPECT_THROW(ternary_mask(m, 0.5, -0.1), ConfigError);
  EXPECT_THROW(mask_for_sc(m, 0.3, 0.4), ConfigError);
}

TEST(TernaryMask, MatchesZoneOracleAndIsScaleInvariant) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const AttentionMap m = oracle::random_map(rng, 5, 7);
    const double kh = rng.uniform(0.2, 1.0);
    const double kl = rng.uniform(0.0, kh - 1e-3);
    const TernaryMask t = ternary_mask(m, kh, kl);
    const float mx = m.max();
    for (std::size_t i = 0; i < m.size(); ++i) ASSERT_EQ(t.codes()[i], oracle::zone_code(m.values[i], mx, kh, kl));
    AttentionMap scaled = m;
    for (auto& v : scaled.values) v *= 4.0f;
    EXPECT_EQ(ternary_mask(scaled, kh, kl), t);
  }
}

TEST(MaskForSb, IsTernaryVerbatim) {
  const TernaryMask t(1, 3, {-1, 0, 1});
  EXPECT_EQ(mask_for_sb(t), t.as_mask());
}

TEST(MaskForSc, UsesMidpointThreshold) {
  // midpoint (0.75 + 0.25) / 2 = 0.5
  const AttentionMap m(1, 4, std::vector<float>{1.0f, 0.5f, 0.49f, 0.0f});
  EXPECT_EQ(mask_for_sc(m, 0.75, 0.25).values, (std::vector<signed char>{0, 0, 1, 1}));
}

TEST(Fusion, PointwiseMaximum) {
  const AttentionMap a(1, 3, std::vector<float>{0.2f, 1.0f, 0.0f}, true);
  const AttentionMap b(1, 3, std::vector<float>{0.5f, 0.1f, 1.0f}, true);
  const AttentionMap f = fuse_attention(a, b);
  EXPECT_EQ(f.values, (std::vector<float>{0.5f, 1.0f, 1.0f}));
  EXPECT_TRUE(f.normalized);
}

TEST(Fusion, RequiresNormalizedSameShapeInputs) {
  const AttentionMap a(1, 2, 0.5f, false);
  const AttentionMap b(1, 2, 0.5f, true);
  EXPECT_THROW(fuse_attention(a, b), ContractViolation);
  EXPECT_THROW(fuse_attention(b, AttentionMap(2, 1, 0.5f, true)), ContractViolation);
  EXPECT_THROW(flip_fuse(b, a), ContractViolation);
}

TEST(Fusion, FlipHorizontalIsInvolution) {
  Rng rng(2);
  const AttentionMap m = oracle::random_map(rng, 4, 5);
  EXPECT_EQ(flip_horizontal(flip_horizontal(m)), m);
  EXPECT_EQ(flip_horizontal(m).at(1, 0), m.at(1, 4));
}
