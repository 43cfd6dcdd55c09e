#include "tenuki/tactics.hpp"

#include <algorithm>
#include <array>

namespace tenuki {

namespace {

// Liberties of the string containing `pt`, with the liberty points themselves.
// Returns -1 if the point is empty (string captured).
int target_liberties(const Position& p, int pt, std::vector<int>* lib_points,
                     std::vector<int>* stone_points = nullptr) {
    if (p.at(pt) == Color::Empty) return -1;
    int size = p.size();
    Color c = p.at(pt);
    std::array<int, kMaxBoard * kMaxBoard> stack;
    std::array<bool, kMaxBoard * kMaxBoard> seen{}, lib_seen{};
    int sp = 0, libs = 0;
    stack[sp++] = pt;
    seen[pt] = true;
    if (lib_points) lib_points->clear();
    if (stone_points) stone_points->clear();
    while (sp > 0) {
        int cur = stack[--sp];
        if (stone_points) stone_points->push_back(cur);
        int r = cur / size, col = cur % size;
        const int nbr[4] = {cur - size, cur + size, cur - 1, cur + 1};
        const bool ok[4] = {r > 0, r < size - 1, col > 0, col < size - 1};
        for (int d = 0; d < 4; ++d) {
            if (!ok[d]) continue;
            int n = nbr[d];
            if (p.at(n) == Color::Empty) {
                if (!lib_seen[n]) {
                    lib_seen[n] = true;
                    ++libs;
                    if (lib_points) lib_points->push_back(n);
                }
            } else if (p.at(n) == c && !seen[n]) {
                seen[n] = true;
                stack[sp++] = n;
            }
        }
    }
    return libs;
}

CaptureVerdict ladder_attack(const Position& p, int tpt, int depth);
CaptureVerdict ladder_defend(const Position& p, int tpt, int depth);

// Attacker to move. The target is chased only with atari moves.
CaptureVerdict ladder_attack(const Position& p, int tpt, int depth) {
    std::vector<int> libs;
    int n = target_liberties(p, tpt, &libs);
    if (n < 0) return CaptureVerdict::Captured;
    if (n >= 3) return CaptureVerdict::Escapes;
    if (depth <= 0) return CaptureVerdict::Unknown;
    if (n == 1) {
        // Fill the last liberty; this captures unless the fill is illegal.
        return p.is_legal(Move::at(libs[0])) ? CaptureVerdict::Captured
                                            : CaptureVerdict::Escapes;
    }
    bool unknown = false;
    for (int lib : libs) {
        Move m = Move::at(lib);
        if (!p.is_legal(m)) continue;
        Position q = p.play(m);
        if (target_liberties(q, tpt, nullptr) != 1) continue;  // not an atari
        CaptureVerdict v = ladder_defend(q, tpt, depth - 1);
        if (v == CaptureVerdict::Captured) return CaptureVerdict::Captured;
        if (v == CaptureVerdict::Unknown) unknown = true;
    }
    return unknown ? CaptureVerdict::Unknown : CaptureVerdict::Escapes;
}

// Defender to move with the target in atari: extend at the last liberty or
// capture an adjacent attacker string that is itself in atari.
CaptureVerdict ladder_defend(const Position& p, int tpt, int depth) {
    std::vector<int> libs;
    int n = target_liberties(p, tpt, &libs);
    if (n < 0) return CaptureVerdict::Captured;
    if (n >= 3) return CaptureVerdict::Escapes;
    if (depth <= 0) return CaptureVerdict::Unknown;

    Color owner = p.at(tpt);
    std::vector<int> stones;
    target_liberties(p, tpt, nullptr, &stones);
    std::vector<int> candidates = libs;
    // Attacker strings in atari touching the target.
    std::vector<bool> tried(p.num_points(), false);
    for (int lp : candidates) tried[lp] = true;
    int size = p.size();
    for (int s : stones) {
        int r = s / size, c = s % size;
        const int nbr[4] = {s - size, s + size, s - 1, s + 1};
        const bool ok[4] = {r > 0, r < size - 1, c > 0, c < size - 1};
        for (int d = 0; d < 4; ++d) {
            if (!ok[d]) continue;
            int nb = nbr[d];
            if (p.at(nb) != opponent(owner)) continue;
            std::vector<int> alib;
            if (target_liberties(p, nb, &alib) == 1 && !tried[alib[0]]) {
                tried[alib[0]] = true;
                candidates.push_back(alib[0]);
            }
        }
    }

    bool unknown = false, any = false;
    for (int cand : candidates) {
        Move m = Move::at(cand);
        if (!p.is_legal(m)) continue;
        any = true;
        Position q = p.play(m);
        int nl = target_liberties(q, tpt, nullptr);
        if (nl >= 3) return CaptureVerdict::Escapes;
        CaptureVerdict v = ladder_attack(q, tpt, depth - 1);
        if (v == CaptureVerdict::Escapes) return CaptureVerdict::Escapes;
        if (v == CaptureVerdict::Unknown) unknown = true;
    }
    if (!any) return CaptureVerdict::Captured;
    return unknown ? CaptureVerdict::Unknown : CaptureVerdict::Captured;
}

constexpr int kLadderDepth = 60;

CaptureVerdict bfc_attack(const Position& p, int tpt, int depth);
CaptureVerdict bfc_defend(const Position& p, int tpt, int depth);

// Oracle, attacker to move. Forcing moves are the target's liberty fills;
// any other move lets the defender reach three liberties at will, so a
// position with no forcing capture counts as an escape.
CaptureVerdict bfc_attack(const Position& p, int tpt, int depth) {
    std::vector<int> libs;
    int n = target_liberties(p, tpt, &libs);
    if (n < 0) return CaptureVerdict::Captured;
    if (n >= 3) return CaptureVerdict::Escapes;
    if (depth <= 0) return CaptureVerdict::Unknown;
    bool unknown = false;
    for (int lib : libs) {
        Move m = Move::at(lib);
        if (!p.is_legal(m)) continue;
        Position q = p.play(m);
        int nl = target_liberties(q, tpt, nullptr);
        if (nl < 0) return CaptureVerdict::Captured;
        CaptureVerdict v = bfc_defend(q, tpt, depth - 1);
        if (v == CaptureVerdict::Captured) return CaptureVerdict::Captured;
        if (v == CaptureVerdict::Unknown) unknown = true;
    }
    return unknown ? CaptureVerdict::Unknown : CaptureVerdict::Escapes;
}

// Oracle, defender to move: full width over every legal point move.
CaptureVerdict bfc_defend(const Position& p, int tpt, int depth) {
    int n = target_liberties(p, tpt, nullptr);
    if (n < 0) return CaptureVerdict::Captured;
    if (n >= 3) return CaptureVerdict::Escapes;
    if (depth <= 0) return CaptureVerdict::Unknown;
    bool unknown = false, any = false;
    for (int pt = 0; pt < p.num_points(); ++pt) {
        Move m = Move::at(pt);
        if (!p.is_legal(m)) continue;
        any = true;
        Position q = p.play(m);
        int nl = target_liberties(q, tpt, nullptr);
        if (nl >= 3) return CaptureVerdict::Escapes;
        CaptureVerdict v = bfc_attack(q, tpt, depth - 1);
        if (v == CaptureVerdict::Escapes) return CaptureVerdict::Escapes;
        if (v == CaptureVerdict::Unknown) unknown = true;
    }
    if (!any) return CaptureVerdict::Captured;
    return unknown ? CaptureVerdict::Unknown : CaptureVerdict::Captured;
}

}  // namespace

LadderStatus ladder_status(const Position& p) {
    int n = p.num_points();
    LadderStatus st;
    st.in_ladder.assign(n, false);
    st.adjacent_to_ladder.assign(n, false);

    BoardAnalysis a = analyze(p);
    std::vector<bool> string_in_ladder(a.num_strings(), false);
    for (int id = 0; id < a.num_strings(); ++id) {
        if (a.string_liberties[id] > 2) continue;
        int rep = a.string_points[id][0];
        Color attacker = opponent(a.string_color[id]);
        Position q = p.to_move() == attacker ? p : p.with_to_move(attacker);
        if (ladder_attack(q, rep, kLadderDepth) == CaptureVerdict::Captured)
            string_in_ladder[id] = true;
    }
    for (int id = 0; id < a.num_strings(); ++id)
        if (string_in_ladder[id])
            for (int pt : a.string_points[id]) st.in_ladder[pt] = true;

    // A string is adjacent-to-ladder iff it touches any in-ladder string.
    int size = p.size();
    std::vector<bool> string_adj(a.num_strings(), false);
    for (int id = 0; id < a.num_strings(); ++id) {
        for (int s : a.string_points[id]) {
            int r = s / size, c = s % size;
            const int nbr[4] = {s - size, s + size, s - 1, s + 1};
            const bool ok[4] = {r > 0, r < size - 1, c > 0, c < size - 1};
            for (int d = 0; d < 4; ++d) {
                if (!ok[d]) continue;
                int nid = a.string_id[nbr[d]];
                if (nid >= 0 && nid != id && string_in_ladder[nid]) string_adj[id] = true;
            }
        }
    }
    for (int id = 0; id < a.num_strings(); ++id)
        if (string_adj[id])
            for (int pt : a.string_points[id]) st.adjacent_to_ladder[pt] = true;
    return st;
}

CaptureVerdict brute_force_capture(const Position& p, int target_string_id, int depth) {
    BoardAnalysis a = analyze(p);
    if (target_string_id < 0 || target_string_id >= a.num_strings())
        throw ConfigError("no such string id: " + std::to_string(target_string_id));
    int rep = a.string_points[target_string_id][0];
    if (a.string_liberties[target_string_id] >= 3) return CaptureVerdict::Escapes;
    Color attacker = opponent(a.string_color[target_string_id]);
    Position q = p.to_move() == attacker ? p : p.with_to_move(attacker);
    return bfc_attack(q, rep, depth);
}

}  // namespace tenuki
