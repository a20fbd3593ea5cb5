#include <bddstack/parser.hpp>
#include <bddstack/runner.hpp>

#include <support/generators.hpp>

#include <gtest/gtest.h>

#include <filesystem>

using namespace bddstack;

namespace {

const std::string data_dir = BDDSTACK_TEST_DATA;

Story code1_ast(const std::string& file, const std::string& language = "en") {
  Story s;
  s.title = "Adding content";
  s.narrative = {"As a digital library user", "I want to add content to the library",
                 "So that I can help improve the amount of documents"};
  s.language = language;
  s.loc = {file, 1};
  Scenario sc;
  sc.ordinal = 1;
  sc.title = "Guest users can't add content";
  sc.loc = {file, 6};
  sc.steps = {{StepKind::Given, "I am at the digital library portal as a guest user", {file, 7}, false},
              {StepKind::When, "I try to add content", {file, 8}, false},
              {StepKind::Then, "I see \"Access Denied\" error message", {file, 9}, false}};
  s.scenarios.push_back(sc);
  return s;
}

ToolError parse_error(std::string_view text, const KeywordPack& pack = load_keyword_pack("en")) {
  try {
    parse_story(text, pack, "t.story");
  } catch (const ToolError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return ToolError(ErrorKind::ConfigError, "none");
}

}  // namespace

TEST(KeywordPack, English) {
  auto en = load_keyword_pack("en");
  EXPECT_EQ(en.given, std::vector<std::string>{"Given"});
  EXPECT_EQ(en.story.front(), "Story");
  EXPECT_EQ(en.and_.front(), "And");
}

TEST(KeywordPack, Portuguese) {
  auto pt = load_keyword_pack("pt");
  EXPECT_EQ(pt.given, (std::vector<std::string>{"Dado", "Dada"}));
  EXPECT_EQ(pt.story, (std::vector<std::string>{"História", "Historia"}));
  EXPECT_EQ(pt.scenario, (std::vector<std::string>{"Cenário", "Cenario"}));
  EXPECT_EQ(pt.then, (std::vector<std::string>{"Então", "Entao"}));
  EXPECT_EQ(pt.when.front(), "Quando");
  EXPECT_EQ(pt.and_.front(), "E");
}

TEST(KeywordPack, UnknownCode) {
  try {
    load_keyword_pack("xx");
    FAIL();
  } catch (const ToolError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
  }
}

TEST(KeywordPack, ValidationRejectsClashingKeywords) {
  auto pack = load_keyword_pack("en");
  pack.and_ = {"Given"};
  EXPECT_THROW(validate_keyword_pack(pack), ToolError);
  pack.and_ = {"And so"};
  EXPECT_THROW(validate_keyword_pack(pack), ToolError);
  pack.and_ = {""};
  EXPECT_THROW(validate_keyword_pack(pack), ToolError);
}

TEST(ParseStory, CodeOneGolden) {
  auto file = data_dir + "/code1.story";
  auto story = parse_story(read_file(file), load_keyword_pack("en"), file);
  EXPECT_EQ(story, code1_ast(file));
}

TEST(ParseStory, PortugueseTranslationMatchesEnglish) {
  auto en_file = data_dir + "/code1.story";
  auto pt_file = data_dir + "/code1_pt.story";
  auto pt = parse_story(read_file(pt_file), load_keyword_pack("pt"), en_file);
  EXPECT_EQ(pt.language, "pt");
  pt.language = "en";
  EXPECT_EQ(pt, code1_ast(en_file));
}

TEST(ParseStory, DiacriticFreePortuguese) {
  auto story = parse_story("Historia: h\n\nCenario: c\n  Dada x\n  E y\n  Entao z\n",
                           load_keyword_pack("pt"), "f");
  ASSERT_EQ(story.scenarios.size(), 1u);
  const auto& steps = story.scenarios[0].steps;
  ASSERT_EQ(steps.size(), 3u);
  EXPECT_EQ(steps[1].kind, StepKind::Given);
  EXPECT_TRUE(steps[1].continuation);
  EXPECT_EQ(steps[2].kind, StepKind::Then);
}

TEST(ParseStory, AndInheritsPreviousKind) {
  auto story = parse_story("Story: s\nScenario: a\n  Given x\n  And y\n  When z\n  And w\n",
                           load_keyword_pack("en"), "f");
  const auto& steps = story.scenarios[0].steps;
  EXPECT_EQ(steps[1].kind, StepKind::Given);
  EXPECT_TRUE(steps[1].continuation);
  EXPECT_EQ(steps[3].kind, StepKind::When);
  EXPECT_FALSE(steps[2].continuation);
}

TEST(ParseStory, CrlfBomAndComments) {
  auto story = parse_story("\xEF\xBB\xBF# lead\r\nStory: s\r\n  # c\r\n  narr\r\nScenario 7: a\r\n\tGiven  x  y \r\n",
                           load_keyword_pack("en"), "f");
  EXPECT_EQ(story.loc.line, 2u);
  EXPECT_EQ(story.narrative, std::vector<std::string>{"narr"});
  EXPECT_EQ(story.scenarios[0].ordinal, 7u);
  EXPECT_EQ(story.scenarios[0].steps[0].text, "x  y");
  EXPECT_EQ(story.scenarios[0].steps[0].loc.line, 6u);
}

TEST(ParseStory, ZeroScenariosParses) {
  auto story = parse_story("Story: lonely\n  just narrative\n", load_keyword_pack("en"), "f");
  EXPECT_TRUE(story.scenarios.empty());
}

TEST(ParseStory, KeywordNeedsDelimiter) {
  // "Givenx" is not a step keyword, so inside a scenario it is stray text.
  auto err = parse_error("Story: s\nScenario: a\n  Givenx\n");
  EXPECT_EQ(err.loc()->line, 3u);
}

TEST(ParseStory, EmptyInput) {
  auto err = parse_error("");
  EXPECT_EQ(err.kind(), ErrorKind::ParseError);
  EXPECT_EQ(std::string(err.what()), "missing story header");
  ASSERT_TRUE(err.loc());
  EXPECT_EQ(err.loc()->line, 1u);
}

TEST(ParseStory, MalformedCorpusLocations) {
  const std::pair<const char*, std::size_t> corpus[] = {
      {"01_scenario_before_story.story", 1}, {"02_step_before_scenario.story", 2},
      {"03_and_first.story", 4},            {"04_duplicate_story.story", 2},
      {"05_empty_step.story", 5},           {"06_empty_scenario_title.story", 3},
      {"07_no_header.story", 1},            {"08_text_before_header.story", 3},
      {"09_text_in_scenario.story", 5},     {"10_scenario_without_steps.story", 3},
      {"11_zero_ordinal.story", 3},         {"12_bad_ordinal.story", 3},
      {"13_empty_story_title.story", 1},    {"14_invalid_utf8.story", 5},
      {"15_crlf_empty_and.story", 5},
  };
  auto pack = load_keyword_pack("en");
  for (const auto& [name, line] : corpus) {
    auto file = data_dir + "/malformed/" + name;
    try {
      parse_story(read_file(file), pack, file);
      ADD_FAILURE() << name << " parsed";
    } catch (const ToolError& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ParseError) << name;
      ASSERT_TRUE(e.loc()) << name;
      EXPECT_EQ(e.loc()->file, file);
      EXPECT_EQ(e.loc()->line, line) << name << ": " << e.what();
    }
  }
}

TEST(PrettyPrint, CodeOneLayout) {
  auto file = data_dir + "/code1.story";
  auto story = code1_ast(file);
  auto text = pretty_print(story, load_keyword_pack("en"));
  EXPECT_EQ(text, read_file(file));
  EXPECT_EQ(parse_story(text, load_keyword_pack("en"), file), story);
}

TEST(PrettyPrint, EmptyNarrative) {
  Story s;
  s.title = "t";
  s.loc = {"f", 1};
  s.scenarios.push_back({std::nullopt, "sc", {{StepKind::When, "w", {"f", 4}, false}}, {"f", 3}});
  auto text = pretty_print(s, load_keyword_pack("en"));
  EXPECT_EQ(text, "Story: t\n\nScenario: sc\n  When w\n");
  EXPECT_EQ(parse_story(text, load_keyword_pack("en"), "f"), s);
}

TEST(PrettyPrint, PortugueseRoundTrip) {
  auto pt = load_keyword_pack("pt");
  auto story = code1_ast("f", "pt");
  EXPECT_EQ(parse_story(pretty_print(story, pt), pt, "f"), story);
}

TEST(PrettyPrint, RoundTripProperty) {
  proptest::Rng rng(2024);
  for (const char* lang : {"en", "pt"}) {
    auto pack = load_keyword_pack(lang);
    for (int i = 0; i < 150; ++i) {
      auto story = proptest::random_story(rng, pack, "gen.story");
      auto text = pretty_print(story, pack);
      try {
        EXPECT_EQ(parse_story(text, pack, "gen.story"), story) << text;
      } catch (const ToolError& e) {
        ADD_FAILURE() << e.what() << " at " << to_string(*e.loc()) << "\n" << text;
      }
    }
  }
}

TEST(ParseStory, FuzzNeverCrashes) {
  proptest::Rng rng(99);
  auto en = load_keyword_pack("en");
  auto pt = load_keyword_pack("pt");
  for (int i = 0; i < 10000; ++i) {
    auto input = proptest::random_utf8(rng);
    const auto& pack = i % 2 ? pt : en;
    try {
      auto story = parse_story(input, pack, "fuzz");
      EXPECT_FALSE(story.title.empty());
    } catch (const ToolError& e) {
      ASSERT_EQ(e.kind(), ErrorKind::ParseError);
      ASSERT_TRUE(e.loc());
      auto lines = 1 + static_cast<std::size_t>(std::count(input.begin(), input.end(), '\n'));
      EXPECT_GE(e.loc()->line, 1u);
      EXPECT_LE(e.loc()->line, lines);
    }
  }
}
