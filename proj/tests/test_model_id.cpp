#include <gtest/gtest.h>

#include "subharmonic/core/model_id.hpp"

using subharmonic::ErrorCode;
using subharmonic::ModelId;

TEST(ModelId, IndicesAreOneBasedInLabels) {
  const auto m = ModelId::from_indices({4, 1, 3});
  EXPECT_EQ(m.mask(), 0b1101U);
  EXPECT_EQ(m.size(), 3);
  EXPECT_EQ(m.label(), "{1,3,4}");
  EXPECT_EQ(m.indices(), (std::vector<int>{0, 2, 3}));
  EXPECT_TRUE(m.contains(2));
  EXPECT_FALSE(m.contains(1));
}

TEST(ModelId, NullAndFull) {
  EXPECT_TRUE(ModelId::null_model().is_null());
  EXPECT_EQ(ModelId::null_model().label(), "{}");
  EXPECT_EQ(ModelId::full_model(4).mask(), 15U);
  EXPECT_TRUE(ModelId::from_indices({2}).is_subset_of(ModelId::full_model(2)));
  EXPECT_FALSE(ModelId::from_indices({3}).is_subset_of(ModelId::full_model(2)));
}

TEST(ModelId, RejectsBadIndex) {
  try {
    ModelId::from_indices({0});
    FAIL();
  } catch (const subharmonic::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(Enumerate, CountsAndOrder) {
  const auto with_null = subharmonic::enumerate_models(4, true);
  const auto without = subharmonic::enumerate_models(4, false);
  EXPECT_EQ(with_null.size(), 16U);
  EXPECT_EQ(without.size(), 15U);
  EXPECT_TRUE(with_null.front().is_null());
  for (std::size_t i = 1; i < without.size(); ++i) EXPECT_LT(without[i - 1], without[i]);
  EXPECT_EQ(subharmonic::enumerate_models(15, false).size(), 32767U);
}

TEST(Enumerate, CapIsEnforced) {
  try {
    subharmonic::enumerate_models(26, false);
    FAIL();
  } catch (const subharmonic::Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyModels);
  }
  EXPECT_NO_THROW(subharmonic::enumerate_models(3, false, 3));
}
