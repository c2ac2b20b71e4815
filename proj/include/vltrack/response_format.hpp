#pragma once

#include <string>
#include <string_view>

namespace vltrack {

enum class Decision { kYes, kNo, kInvalid };

std::string to_string(Decision decision);

/// Parsed reply in the <think></think><d></d><answer></answer> grammar.
///
/// Well-formedness levels nest strictly:
///   level 0 — anything else;
///   level 1 — the three opening identifiers <think>, <d>, <answer> all occur;
///   level 2 — additionally all three tag pairs are closed, the spans are
///             disjoint and ordered think -> d -> answer, and the <d> content
///             (trimmed, lowercased) is exactly "yes" or "no".
///
/// Field extraction is best-effort and independent of the level: each field is
/// taken from the first occurrence of its opening tag followed by the first
/// matching closing tag. Nested or interleaved first spans cap the level at 1.
struct CoTResponse {
  std::string raw;
  std::string think;
  Decision decision = Decision::kInvalid;
  std::string answer;
  int level = 0;
};

/// Never fails; malformed input yields level 0 with empty extracted fields.
/// Tag matching is case-sensitive.
CoTResponse parse(std::string_view raw);

/// Reassembles the canonical tag order from the parsed fields.
std::string render(const CoTResponse& resp);

struct FormatRewards {
  int format1 = 0;  // 1 iff level >= 1
  int format2 = 0;  // 1 iff level == 2
};

FormatRewards format_rewards(const CoTResponse& resp);

}  // namespace vltrack
