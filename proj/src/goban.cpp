#include "tenuki/goban.hpp"

#include <array>
#include <algorithm>

namespace tenuki {

namespace {

constexpr int kMaxPoints = kMaxBoard * kMaxBoard;

std::uint64_t splitmix64(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct ZobristTable {
    std::array<std::array<std::uint64_t, kMaxPoints>, 2> keys;
    std::uint64_t side_key;
    ZobristTable() {
        std::uint64_t s = 0x6f7264696e617279ULL;
        for (auto& color_keys : keys)
            for (auto& k : color_keys) k = splitmix64(s);
        side_key = splitmix64(s);
    }
};

const ZobristTable& zobrist() {
    static const ZobristTable t;
    return t;
}

std::uint64_t stone_key(int idx, Color c) {
    return zobrist().keys[c == Color::Black ? 0 : 1][idx];
}

}  // namespace

const char* rule_check_name(RuleCheck r) {
    switch (r) {
        case RuleCheck::Legal: return "legal";
        case RuleCheck::GameOver: return "game over";
        case RuleCheck::OutOfBoard: return "out of board";
        case RuleCheck::Occupied: return "occupied";
        case RuleCheck::Suicide: return "suicide";
        case RuleCheck::Superko: return "superko";
    }
    return "?";
}

Position::Position(int size) : size_(size) {
    if (size < kMinBoard || size > kMaxBoard)
        throw ConfigError("board size must be in [5,19], got " + std::to_string(size));
    stones_.assign(size * size, Color::Empty);
    ko_history_.insert(stone_hash_);
}

std::uint64_t Position::hash() const {
    return to_move_ == Color::White ? stone_hash_ ^ zobrist().side_key : stone_hash_;
}

std::uint64_t position_hash(const Position& p) { return p.hash(); }

namespace {

// Flood fill the string containing idx; returns liberty count and collects points.
int string_scan(const std::vector<Color>& stones, int size, int idx,
                std::vector<int>* points_out) {
    Color c = stones[idx];
    std::array<int, kMaxPoints> stack;
    std::array<bool, kMaxPoints> seen{};
    std::array<bool, kMaxPoints> lib_seen{};
    int sp = 0, libs = 0;
    stack[sp++] = idx;
    seen[idx] = true;
    while (sp > 0) {
        int cur = stack[--sp];
        if (points_out) points_out->push_back(cur);
        int r = cur / size, col = cur % size;
        const int nbr[4] = {cur - size, cur + size, cur - 1, cur + 1};
        const bool ok[4] = {r > 0, r < size - 1, col > 0, col < size - 1};
        for (int d = 0; d < 4; ++d) {
            if (!ok[d]) continue;
            int n = nbr[d];
            if (stones[n] == Color::Empty) {
                if (!lib_seen[n]) { lib_seen[n] = true; ++libs; }
            } else if (stones[n] == c && !seen[n]) {
                seen[n] = true;
                stack[sp++] = n;
            }
        }
    }
    return libs;
}

}  // namespace

std::optional<Position> Position::apply_point(int idx) const {
    Position next = *this;
    Color me = to_move_;
    Color opp = opponent(me);
    next.stones_[idx] = me;
    next.stone_hash_ ^= stone_key(idx, me);

    // Remove opponent strings left without liberties.
    int r = idx / size_, c = idx % size_;
    const int nbr[4] = {idx - size_, idx + size_, idx - 1, idx + 1};
    const bool ok[4] = {r > 0, r < size_ - 1, c > 0, c < size_ - 1};
    std::vector<int> pts;
    for (int d = 0; d < 4; ++d) {
        if (!ok[d] || next.stones_[nbr[d]] != opp) continue;
        pts.clear();
        if (string_scan(next.stones_, size_, nbr[d], &pts) == 0) {
            for (int p : pts) {
                next.stones_[p] = Color::Empty;
                next.stone_hash_ ^= stone_key(p, opp);
            }
        }
    }
    if (string_scan(next.stones_, size_, idx, nullptr) == 0)
        return std::nullopt;  // suicide

    next.to_move_ = opp;
    next.consecutive_passes_ = 0;
    return next;
}

RuleCheck Position::check(Move m) const {
    if (game_over()) return RuleCheck::GameOver;
    if (m.is_pass()) return RuleCheck::Legal;
    if (m.point < 0 || m.point >= num_points()) return RuleCheck::OutOfBoard;
    if (stones_[m.point] != Color::Empty) return RuleCheck::Occupied;
    auto next = apply_point(m.point);
    if (!next) return RuleCheck::Suicide;
    if (ko_history_.count(next->stone_hash_)) return RuleCheck::Superko;
    return RuleCheck::Legal;
}

Position Position::play(Move m) const {
    if (game_over())
        throw RuleViolation(RuleCheck::GameOver, "game is over (two passes)");
    if (m.is_pass()) {
        Position next = *this;
        next.to_move_ = opponent(to_move_);
        next.consecutive_passes_ = consecutive_passes_ + 1;
        next.move_history_.push_front(stones_);
        if (next.move_history_.size() > kHistoryPlanes) next.move_history_.pop_back();
        return next;
    }
    if (m.point < 0 || m.point >= num_points())
        throw RuleViolation(RuleCheck::OutOfBoard, "point outside the board");
    if (stones_[m.point] != Color::Empty)
        throw RuleViolation(RuleCheck::Occupied, "point " + std::to_string(m.point) + " is occupied");
    auto next = apply_point(m.point);
    if (!next)
        throw RuleViolation(RuleCheck::Suicide, "suicide at point " + std::to_string(m.point));
    if (ko_history_.count(next->stone_hash_))
        throw RuleViolation(RuleCheck::Superko, "superko: position repeats at point " + std::to_string(m.point));
    next->ko_history_.insert(next->stone_hash_);
    next->move_history_.push_front(stones_);
    if (next->move_history_.size() > kHistoryPlanes) next->move_history_.pop_back();
    return *next;
}

std::vector<Move> Position::legal_moves() const {
    std::vector<Move> out;
    if (game_over()) return out;
    out.reserve(num_points() + 1);
    for (int i = 0; i < num_points(); ++i)
        if (check(Move::at(i)) == RuleCheck::Legal) out.push_back(Move::at(i));
    out.push_back(Move::pass());
    return out;
}

Position Position::with_to_move(Color c) const {
    Position next = *this;
    next.to_move_ = c;
    return next;
}

double Position::tromp_taylor_score(double komi) const {
    int black = 0, white = 0;
    std::array<bool, kMaxPoints> seen{};
    std::array<int, kMaxPoints> stack;
    for (int i = 0; i < num_points(); ++i) {
        if (stones_[i] == Color::Black) { ++black; continue; }
        if (stones_[i] == Color::White) { ++white; continue; }
        if (seen[i]) continue;
        // Empty region: owned by a color iff it borders only that color.
        int sp = 0, count = 0;
        bool touches_black = false, touches_white = false;
        stack[sp++] = i;
        seen[i] = true;
        while (sp > 0) {
            int cur = stack[--sp];
            ++count;
            int r = cur / size_, c = cur % size_;
            const int nbr[4] = {cur - size_, cur + size_, cur - 1, cur + 1};
            const bool ok[4] = {r > 0, r < size_ - 1, c > 0, c < size_ - 1};
            for (int d = 0; d < 4; ++d) {
                if (!ok[d]) continue;
                int n = nbr[d];
                if (stones_[n] == Color::Black) touches_black = true;
                else if (stones_[n] == Color::White) touches_white = true;
                else if (!seen[n]) { seen[n] = true; stack[sp++] = n; }
            }
        }
        if (touches_black && !touches_white) black += count;
        else if (touches_white && !touches_black) white += count;
    }
    return static_cast<double>(white) - static_cast<double>(black) + komi;
}

BoardAnalysis analyze(const Position& p) {
    BoardAnalysis a;
    a.size = p.size();
    int n = p.num_points();
    a.string_id.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        if (p.at(i) == Color::Empty || a.string_id[i] >= 0) continue;
        int id = a.num_strings();
        std::vector<int> pts;
        int libs = string_scan(p.stones(), p.size(), i, &pts);
        for (int pt : pts) a.string_id[pt] = id;
        a.string_liberties.push_back(libs);
        a.string_color.push_back(p.at(i));
        a.string_points.push_back(std::move(pts));
    }
    return a;
}

}  // namespace tenuki
