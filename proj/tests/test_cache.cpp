#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bsp/bsp.hpp"

using namespace bsp;
namespace fs = std::filesystem;

namespace {

class CacheTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("bsp-cache-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
  }
  void TearDown() override {
    std::error_code ec;
    fs::permissions(dir_, fs::perms::owner_all, fs::perm_options::add, ec);
    fs::remove_all(dir_, ec);
  }
  fs::path dir_;
};

}  // namespace

TEST(CacheKey, Format) {
  EXPECT_EQ(cache_key("family", "[1,0]", 1, 6, "K"), "family|[1,0]|1|6|K");
  EXPECT_EQ(cache_key("family", "[1,0]", 1, std::nullopt, "H"), "family|[1,0]|1|-|H");
  EXPECT_EQ(hex_digest("").size(), 16u);
  EXPECT_EQ(hex_digest(""), "cbf29ce484222325");
}

TEST_F(CacheTest, RoundTripAndMiss) {
  Cache c(dir_);
  ASSERT_TRUE(c.enabled());
  EXPECT_FALSE(c.get("a"));
  const nlohmann::json payload{{"x", 1}, {"y", {1, 2, 3}}};
  EXPECT_TRUE(c.put("a", payload));
  EXPECT_TRUE(c.put("a", payload));
  EXPECT_EQ(c.get("a"), payload);
  EXPECT_EQ(c.size(), 1);
  EXPECT_EQ(c.clear(), 1);
  EXPECT_FALSE(c.get("a"));
}

TEST_F(CacheTest, CorruptedEntryIsAMissAndIsRepaired) {
  Cache c(dir_);
  c.put("k", nlohmann::json(42));
  {
    std::ofstream out(c.path_of("k"), std::ios::trunc);
    out << "{\"key\":\"k\",\"digest\":\"0000000000000000\",\"payload\":43}";
  }
  EXPECT_FALSE(c.get("k"));
  EXPECT_FALSE(fs::exists(c.path_of("k")));
  {
    std::ofstream out(c.path_of("k"), std::ios::trunc);
    out << "not json";
  }
  EXPECT_FALSE(c.get("k"));
  c.put("k", nlohmann::json(42));
  EXPECT_EQ(c.get("k"), nlohmann::json(42));
}

TEST_F(CacheTest, ForeignKeyIsAMiss) {
  Cache c(dir_);
  fs::create_directories(dir_);
  std::ofstream(c.path_of("mine")) << Cache::serialize("other", nlohmann::json(1));
  EXPECT_FALSE(c.get("mine"));
}

TEST_F(CacheTest, UnwritableDirectoryWarnsAndContinues) {
  const fs::path blocker = dir_;
  fs::create_directories(blocker.parent_path());
  std::ofstream(blocker) << "a file, not a directory";
  std::ostringstream warn;
  Cache c(blocker / "sub", &warn);
  EXPECT_FALSE(c.enabled());
  EXPECT_NE(warn.str().find("continuing without the cache"), std::string::npos);
  EXPECT_FALSE(c.put("k", nlohmann::json(1)));
  EXPECT_FALSE(c.get("k"));
  fs::remove(blocker);
}

TEST_F(CacheTest, CachedTableEqualsFresh) {
  Cache c(dir_);
  const auto w = Permutation::parse("[2,0,1]");
  const auto fresh = coproduct_coefficients(w, Theory::K, std::nullopt, 4);
  const std::string key = cache_key("coprod", w.str(), fresh.m, 4, "K");
  c.put(key, fresh.to_json());
  Cache again(dir_);
  const auto hit = again.get(key);
  ASSERT_TRUE(hit);
  EXPECT_EQ(CoproductTable::from_json(*hit).entries, fresh.entries);
}
