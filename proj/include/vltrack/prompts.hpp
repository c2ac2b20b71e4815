#pragma once

namespace vltrack {

/// Default refiner instruction. The deployed prompt is configuration; this
/// built-in covers the wire contract: reason about the target in the template
/// frame versus the current frame, decide whether the description needs an
/// update, and reply in the three-tag grammar.
inline constexpr const char* kDefaultSystemPrompt =
    "You are assisting a visual tracker. You receive a template image showing the target "
    "object, the current search image, and the target's previous language description. "
    "First compare the target's appearance, position, and surroundings across the two "
    "images, reasoning inside <think></think>. Then decide whether the description should "
    "be updated to match the current image: write yes or no inside <d></d>. Finally write "
    "one sentence describing the target inside <answer></answer>: the updated sentence if "
    "you decided yes, otherwise the original sentence. Reply with exactly the three tags "
    "in the order <think></think><d></d><answer></answer> and nothing else.";

}  // namespace vltrack
