#include "vltrack/response_format.hpp"

#include <optional>

#include "vltrack/strings.hpp"

namespace vltrack {

namespace {

struct TagSpan {
  size_t open_begin = 0;   // index of '<' of the opening tag
  size_t content_begin = 0;
  size_t content_end = 0;  // index of '<' of the closing tag
  size_t close_end = 0;    // one past '>' of the closing tag
};

// First occurrence of `open` followed by the first `close` after it.
std::optional<TagSpan> find_span(std::string_view raw, std::string_view open,
                                 std::string_view close) {
  const size_t open_pos = raw.find(open);
  if (open_pos == std::string_view::npos) {
    return std::nullopt;
  }
  const size_t close_pos = raw.find(close, open_pos + open.size());
  if (close_pos == std::string_view::npos) {
    return std::nullopt;
  }
  TagSpan span;
  span.open_begin = open_pos;
  span.content_begin = open_pos + open.size();
  span.content_end = close_pos;
  span.close_end = close_pos + close.size();
  return span;
}

std::string_view span_content(std::string_view raw, const TagSpan& span) {
  return raw.substr(span.content_begin, span.content_end - span.content_begin);
}

}  // namespace

std::string to_string(Decision decision) {
  switch (decision) {
    case Decision::kYes:
      return "yes";
    case Decision::kNo:
      return "no";
    case Decision::kInvalid:
      return "invalid";
  }
  return "invalid";
}

CoTResponse parse(std::string_view raw) {
  CoTResponse resp;
  resp.raw.assign(raw);

  const auto think = find_span(raw, "<think>", "</think>");
  const auto d = find_span(raw, "<d>", "</d>");
  const auto answer = find_span(raw, "<answer>", "</answer>");

  if (think) {
    resp.think.assign(span_content(raw, *think));
  }
  if (answer) {
    resp.answer.assign(span_content(raw, *answer));
  }

  std::string d_text;
  if (d) {
    d_text = to_lower_ascii(trim(span_content(raw, *d)));
  }
  if (d_text == "yes") {
    resp.decision = Decision::kYes;
  } else if (d_text == "no") {
    resp.decision = Decision::kNo;
  } else {
    resp.decision = Decision::kInvalid;
  }

  const bool identifiers_present = raw.find("<think>") != std::string_view::npos &&
                                   raw.find("<d>") != std::string_view::npos &&
                                   raw.find("<answer>") != std::string_view::npos;
  if (!identifiers_present) {
    resp.level = 0;
    return resp;
  }
  resp.level = 1;

  const bool ordered = think && d && answer && think->close_end <= d->open_begin &&
                       d->close_end <= answer->open_begin;
  if (ordered && resp.decision != Decision::kInvalid) {
    resp.level = 2;
  }
  return resp;
}

std::string render(const CoTResponse& resp) {
  std::string decision_text;
  if (resp.decision != Decision::kInvalid) {
    decision_text = to_string(resp.decision);
  }
  return "<think>" + resp.think + "</think><d>" + decision_text + "</d><answer>" + resp.answer +
         "</answer>";
}

FormatRewards format_rewards(const CoTResponse& resp) {
  FormatRewards rewards;
  rewards.format1 = resp.level >= 1 ? 1 : 0;
  rewards.format2 = resp.level == 2 ? 1 : 0;
  return rewards;
}

}  // namespace vltrack
