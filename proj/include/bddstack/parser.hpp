#ifndef BDDSTACK_PARSER_HPP
#define BDDSTACK_PARSER_HPP

#include <bddstack/error.hpp>
#include <bddstack/keywords.hpp>
#include <bddstack/story.hpp>

#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bddstack {

namespace detail {

inline constexpr std::string_view blank_chars = " \t\r\f\v";

inline std::string_view trim(std::string_view s) {
  auto first = s.find_first_not_of(blank_chars);
  if (first == std::string_view::npos)
    return {};
  auto last = s.find_last_not_of(blank_chars);
  return s.substr(first, last - first + 1);
}

inline bool is_blank(char c) { return blank_chars.find(c) != std::string_view::npos; }

/// Offset of the first byte that breaks UTF-8 well-formedness, if any.
/// Rejects overlongs, surrogates and code points above U+10FFFF.
inline std::optional<std::size_t> find_invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    auto b = static_cast<unsigned char>(s[i]);
    std::size_t len;
    unsigned char lo = 0x80, hi = 0xbf;
    if (b < 0x80) {
      ++i;
      continue;
    } else if (b >= 0xc2 && b <= 0xdf) {
      len = 2;
    } else if (b >= 0xe0 && b <= 0xef) {
      len = 3;
      if (b == 0xe0) lo = 0xa0;
      if (b == 0xed) hi = 0x9f;
    } else if (b >= 0xf0 && b <= 0xf4) {
      len = 4;
      if (b == 0xf0) lo = 0x90;
      if (b == 0xf4) hi = 0x8f;
    } else {
      return i;
    }
    if (i + len > s.size())
      return i;
    for (std::size_t k = 1; k < len; ++k) {
      auto c = static_cast<unsigned char>(s[i + k]);
      unsigned char klo = k == 1 ? lo : 0x80, khi = k == 1 ? hi : 0xbf;
      if (c < klo || c > khi)
        return i;
    }
    i += len;
  }
  return std::nullopt;
}

// Matches `keyword` at the start of `line` when followed by `:` (header) or
// by whitespace / end of line (step). Returns the remainder after the keyword.
inline std::optional<std::string_view> match_keyword(std::string_view line,
                                                     const std::vector<std::string>& spellings) {
  for (const auto& kw : spellings)
    if (line.starts_with(kw)) {
      auto rest = line.substr(kw.size());
      if (rest.empty() || rest.front() == ':' || is_blank(rest.front()))
        return rest;
    }
  return std::nullopt;
}

struct LineParser {
  const KeywordPack& pack;
  std::string file;
  Story story;
  bool have_header = false;
  std::optional<Scenario> current;

  SourceLoc at(std::size_t line) const { return {file, line}; }

  void close_scenario() {
    if (!current)
      return;
    if (current->steps.empty())
      fail_parse("scenario '" + current->title + "' has no steps", current->loc);
    story.scenarios.push_back(std::move(*current));
    current.reset();
  }

  void story_header(std::string_view rest, std::size_t line) {
    if (have_header)
      fail_parse("duplicate story header", at(line));
    if (rest.empty() || rest.front() != ':')
      fail_parse("expected ':' after story keyword", at(line));
    auto title = trim(rest.substr(1));
    if (title.empty())
      fail_parse("empty story title", at(line));
    have_header = true;
    story.title = std::string(title);
    story.loc = at(line);
  }

  void scenario_header(std::string_view rest, std::size_t line) {
    if (!have_header)
      fail_parse("scenario before story header", at(line));
    Scenario sc;
    sc.loc = at(line);
    auto tail = trim(rest);
    if (!tail.starts_with(':')) {
      std::size_t n = 0;
      while (n < tail.size() && tail[n] >= '0' && tail[n] <= '9')
        ++n;
      auto after = trim(tail.substr(n));
      if (n == 0 || !after.starts_with(':'))
        fail_parse("malformed scenario header", at(line));
      unsigned ordinal = 0;
      auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + n, ordinal);
      if (ec != std::errc{} || ordinal == 0)
        fail_parse("scenario ordinal must be a positive integer", at(line));
      sc.ordinal = ordinal;
      tail = after;
    }
    auto title = trim(tail.substr(1));
    if (title.empty())
      fail_parse("empty scenario title", at(line));
    sc.title = std::string(title);
    close_scenario();
    current = std::move(sc);
  }

  void step(std::optional<StepKind> kind, std::string_view rest, std::size_t line) {
    if (!have_header)
      fail_parse("step before story header", at(line));
    if (!current)
      fail_parse("step before any scenario", at(line));
    auto text = trim(rest);
    if (text.empty())
      fail_parse("empty step text", at(line));
    Step st;
    st.text = std::string(text);
    st.loc = at(line);
    if (kind) {
      st.kind = *kind;
    } else {
      if (current->steps.empty())
        fail_parse("'" + pack.and_.front() + "' cannot start a scenario", at(line));
      st.kind = current->steps.back().kind;
      st.continuation = true;
    }
    current->steps.push_back(std::move(st));
  }

  void text_line(std::string_view text, std::size_t line) {
    if (!have_header)
      fail_parse("missing story header", at(line));
    if (current)
      fail_parse("unexpected text inside scenario", at(line));
    story.narrative.emplace_back(text);
  }

  void feed(std::string_view raw, std::size_t line) {
    auto text = trim(raw);
    if (text.empty() || text.front() == '#')
      return;
    if (auto rest = match_keyword(text, pack.story); rest && rest->starts_with(':'))
      return story_header(*rest, line);
    if (auto rest = match_keyword(text, pack.scenario))
      return scenario_header(*rest, line);
    if (auto rest = match_keyword(text, pack.and_); rest && !rest->starts_with(':'))
      return step(std::nullopt, *rest, line);
    for (auto kind : {StepKind::Given, StepKind::When, StepKind::Then})
      if (auto rest = match_keyword(text, pack.step_keywords(kind)); rest && !rest->starts_with(':'))
        return step(kind, *rest, line);
    text_line(text, line);
  }
};

}  // namespace detail

/// Parses one narrative story file.
///
/// Accepts LF or CRLF line endings and an optional UTF-8 byte order mark.
/// Every ParseError carries the file and physical line of the offending
/// input. A story without scenarios parses; runners reject it later.
inline Story parse_story(std::string_view text, const KeywordPack& pack, std::string_view file) {
  if (auto bad = detail::find_invalid_utf8(text)) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < *bad; ++i)
      line += text[i] == '\n';
    fail_parse("invalid UTF-8", {std::string(file), line});
  }
  if (text.starts_with("\xEF\xBB\xBF"))
    text.remove_prefix(3);

  detail::LineParser parser{pack, std::string(file), {}, false, std::nullopt};
  parser.story.language = pack.language;
  std::size_t line = 1;
  while (true) {
    auto nl = text.find('\n');
    parser.feed(text.substr(0, nl), line);
    if (nl == std::string_view::npos)
      break;
    text.remove_prefix(nl + 1);
    ++line;
  }
  if (!parser.have_header)
    fail_parse("missing story header", {std::string(file), 1});
  parser.close_scenario();
  return std::move(parser.story);
}

/// Canonical layout: header, narrative indented two spaces, a blank line,
/// then each scenario at column 0 with its steps indented two spaces,
/// scenarios separated by blank lines.
inline std::string pretty_print(const Story& story, const KeywordPack& pack) {
  std::string out = pack.story.front() + ": " + story.title + "\n";
  for (const auto& line : story.narrative)
    out += "  " + line + "\n";
  for (const auto& sc : story.scenarios) {
    out += "\n" + pack.scenario.front();
    if (sc.ordinal)
      out += " " + std::to_string(*sc.ordinal);
    out += ": " + sc.title + "\n";
    for (const auto& st : sc.steps) {
      const auto& kw = st.continuation ? pack.and_.front() : pack.step_keywords(st.kind).front();
      out += "  " + kw + " " + st.text + "\n";
    }
  }
  return out;
}

}  // namespace bddstack

#endif  // BDDSTACK_PARSER_HPP
