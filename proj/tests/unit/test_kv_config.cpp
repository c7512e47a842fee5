#include <gtest/gtest.h>

#include <sstream>

#include "fsim/kv_config.hpp"
#include "fsim/types.hpp"

using namespace fsim;

namespace {

KeyValueConfig parse(const std::string& text) {
  std::istringstream in(text);
  return KeyValueConfig::parse(in);
}

}  // namespace

TEST(KeyValueConfig, ParsesTypedValues) {
  const auto kv = parse("# experiment\nbudget = 5000\nname = \"two words\"\nalpha=0.01\nquiet = yes # trailing\n");
  EXPECT_EQ(kv.get_uint("budget"), 5000u);
  EXPECT_EQ(kv.get_string("name"), "two words");
  EXPECT_EQ(kv.get_double("alpha"), 0.01);
  EXPECT_EQ(kv.get_bool("quiet"), true);
  EXPECT_FALSE(kv.get_uint("missing").has_value());
  EXPECT_EQ(kv.get_uint("missing", 7), 7u);
}

TEST(KeyValueConfig, RejectsMalformedDocuments) {
  EXPECT_THROW(parse("[section]\n"), LoadError);
  EXPECT_THROW(parse("novalue\n"), LoadError);
  EXPECT_THROW(parse("= 3\n"), LoadError);
  EXPECT_THROW(parse("a = 1\na = 2\n"), LoadError);
}

TEST(KeyValueConfig, RejectsMalformedValues) {
  const auto kv = parse("n = -3\nx = 1.5y\nb = maybe\nf = nan\n");
  EXPECT_THROW(kv.get_uint("n"), ValidationError);
  EXPECT_THROW(kv.get_double("x"), ValidationError);
  EXPECT_THROW(kv.get_bool("b"), ValidationError);
  EXPECT_THROW(kv.get_double("f"), ValidationError);
}

TEST(KeyValueConfig, TracksUnusedKeys) {
  const auto kv = parse("used = 1\ntypo = 2\n");
  (void)kv.get_uint("used");
  EXPECT_EQ(kv.unused_keys(), (std::set<std::string>{"typo"}));
}

TEST(KeyValueConfig, SetOverridesValue) {
  auto kv = parse("a = 1\n");
  kv.set("a", "2");
  EXPECT_EQ(kv.get_uint("a"), 2u);
}
