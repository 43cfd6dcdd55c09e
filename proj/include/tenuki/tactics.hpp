#pragma once

#include <vector>

#include "tenuki/goban.hpp"

namespace tenuki {

struct LadderStatus {
    std::vector<bool> in_ladder;           // point belongs to a ladder-capturable string
    std::vector<bool> adjacent_to_ladder;  // point belongs to a string touching one
};

// Marks every string of either color that the opponent, moving first, can
// capture in a ladder. Strings with >= 3 liberties are never in ladder;
// inconclusive reads count as not-in-ladder.
LadderStatus ladder_status(const Position& p);

enum class CaptureVerdict { Captured, Escapes, Unknown };

// Full-width minimax capture oracle: attacker (the opponent of the target's
// owner) moves first and tries to force the capture within `depth` plies.
// The target escapes as soon as it reaches 3 liberties.
CaptureVerdict brute_force_capture(const Position& p, int target_string_id, int depth);

}  // namespace tenuki
