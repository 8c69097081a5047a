#include <gtest/gtest.h>

#include "scenegen/action_lang.hpp"
#include "scenegen/rng.hpp"

using namespace scenegen;

TEST(ActionLang, RetrieveMaterialBinding) {
  const auto p = parse_program(R"(m1 = retrieve_material("white ceramic tile"))");
  ASSERT_EQ(p.statements.size(), 1u);
  const auto& st = p.statements[0];
  EXPECT_EQ(st.binding, "m1");
  EXPECT_EQ(st.call.function, "retrieve_material");
  ASSERT_EQ(st.call.args.size(), 1u);
  EXPECT_EQ(std::get<std::string>(st.call.args[0]), "white ceramic tile");
  EXPECT_TRUE(st.call.kwargs.empty());
}

TEST(ActionLang, EmptyTextHasNoStatements) {
  EXPECT_TRUE(parse_program("").statements.empty());
  EXPECT_TRUE(parse_program("\n   \n# only a comment\n").statements.empty());
}

TEST(ActionLang, AddObjectKeywordArguments) {
  const auto p = parse_program(R"(add_object("potted plant", position=(1.0, 2.0, 0.0), rotation=1.57))");
  ASSERT_EQ(p.statements.size(), 1u);
  const auto& call = p.statements[0].call;
  ASSERT_EQ(call.kwargs.size(), 2u);
  EXPECT_EQ(call.kwargs[0].first, "position");
  EXPECT_EQ(std::get<Vec3>(call.kwargs[0].second), (Vec3{1.0, 2.0, 0.0}));
  EXPECT_EQ(call.kwargs[1].first, "rotation");
  EXPECT_DOUBLE_EQ(std::get<double>(call.kwargs[1].second), 1.57);
}

TEST(ActionLang, ValueForms) {
  const auto p = parse_program("f(-1.5e2, 'it\\'s', [1, 2], (0.5, .25, -3), some_name)  # trailing comment");
  const auto& a = p.statements[0].call.args;
  ASSERT_EQ(a.size(), 5u);
  EXPECT_DOUBLE_EQ(std::get<double>(a[0]), -150.0);
  EXPECT_EQ(std::get<std::string>(a[1]), "it's");
  EXPECT_EQ(std::get<Vec2>(a[2]), (Vec2{1, 2}));
  EXPECT_EQ(std::get<Vec3>(a[3]), (Vec3{0.5, 0.25, -3}));
  EXPECT_EQ(std::get<Identifier>(a[4]).name, "some_name");
}

TEST(ActionLang, UnknownFunctionParses) {
  EXPECT_EQ(parse_program("teleport_sofa(1)").statements.size(), 1u);
}

TEST(ActionLang, ParseErrorsCarryLineAndColumn) {
  struct Case {
    const char* text;
    int line;
    const char* fragment;
  };
  const Case cases[] = {
      {"ok()\nadd_object(\"a\", position=(1, 2, 3)", 2, "unbalanced"},
      {"f(1.2.3)", 1, "malformed number"},
      {"f(\"abc)", 1, "unterminated string"},
      {"f(x=1, x=2)", 1, "duplicate keyword"},
      {"f(x=1, 2)", 1, "positional argument after keyword"},
      {"f((1, 2, 3, 4))", 1, "2 or 3"},
      {"f((1, \"a\"))", 1, "tuple elements"},
      {"\n\nf(\"\\q\")", 3, "unknown escape"},
      {"f(1) g(2)", 1, "unexpected text"},
  };
  for (const auto& c : cases) {
    try {
      parse_program(c.text);
      ADD_FAILURE() << "parsed: " << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), c.line) << c.text;
      EXPECT_GT(e.column(), 0);
      EXPECT_NE(std::string(e.what()).find(c.fragment), std::string::npos) << e.what();
    }
  }
}

TEST(ActionLang, ColumnPointsAtOffendingToken) {
  try {
    parse_program("f(1, 2x)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 6);
  }
}

TEST(ActionLang, UnparseRoundTripsRandomPrograms) {
  Rng rng(3);
  const char* names[] = {"add_object", "move_object", "set_light", "foo"};
  for (int trial = 0; trial < 200; ++trial) {
    ActionProgram p;
    const int n = 1 + static_cast<int>(rng.index(5));
    for (int i = 0; i < n; ++i) {
      Statement st;
      if (rng.index(2) == 0) st.binding = "b" + std::to_string(i);
      st.call.function = names[rng.index(4)];
      const int args = static_cast<int>(rng.index(3));
      auto random_value = [&]() -> Value {
        switch (rng.index(5)) {
          case 0: return rng.uniform(-1e3, 1e3);
          case 1: return std::string("text \"quoted\" \\ ") + std::to_string(rng.index(100));
          case 2: return Vec2{rng.uniform(-5, 5), rng.uniform(-5, 5)};
          case 3: return Vec3{rng.uniform(-5, 5), rng.uniform(-5, 5), 1e-7 * rng.uniform()};
          default: return Identifier{"ref_" + std::to_string(rng.index(9))};
        }
      };
      for (int a = 0; a < args; ++a) st.call.args.push_back(random_value());
      const int kw = static_cast<int>(rng.index(3));
      for (int k = 0; k < kw; ++k) st.call.kwargs.emplace_back("k" + std::to_string(k), random_value());
      p.statements.push_back(st);
    }
    const std::string text = unparse(p);
    EXPECT_EQ(parse_program(text), p) << text;
  }
}

TEST(ActionLang, IdentifierRule) {
  EXPECT_TRUE(is_identifier("chair_1"));
  EXPECT_TRUE(is_identifier("_x"));
  EXPECT_FALSE(is_identifier("1chair"));
  EXPECT_FALSE(is_identifier("a-b"));
  EXPECT_FALSE(is_identifier(""));
}
