#include <gtest/gtest.h>

#include "support.hpp"

using namespace testing_support;

TEST(Properties, RandomSystems) {
  auto res = property_sweep(1000, 20240601);
  for (const auto& f : res.failures) ADD_FAILURE() << f;
  EXPECT_EQ(res.systems, 1000u);
  // the sweep must reach the interesting branches
  EXPECT_GT(res.with_k, 100u);
  EXPECT_GT(res.prolonged, 20u);
  std::cout << "systems " << res.systems << ", noninvolutive " << res.with_k << ", with H " << res.with_h
            << ", prolonged " << res.prolonged << ", skipped " << res.skipped << "\n";
}

TEST(Properties, CharacteristicMatchesPointwiseOracle) {
  auto res = characteristic_sweep(50, 5, 777);
  for (const auto& f : res.failures) ADD_FAILURE() << f;
  EXPECT_LT(res.skipped, 5u);
  EXPECT_GT(res.proper, 0u);
  std::cout << "fixtures " << res.systems << ", proper characteristic " << res.proper << "\n";
}
