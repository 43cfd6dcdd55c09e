#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace tenuki {

enum class Color : std::uint8_t { Empty = 0, Black = 1, White = 2 };

constexpr Color opponent(Color c) {
    return c == Color::Black ? Color::White
         : c == Color::White ? Color::Black
                             : Color::Empty;
}

struct Move {
    enum class Kind : std::uint8_t { Point, Pass };
    Kind kind = Kind::Pass;
    std::int16_t point = -1;  // flat index row*size + col, row 0 at top

    static Move pass() { return Move{Kind::Pass, -1}; }
    static Move at(int idx) { return Move{Kind::Point, static_cast<std::int16_t>(idx)}; }
    static Move at(int row, int col, int size) { return at(row * size + col); }

    bool is_pass() const { return kind == Kind::Pass; }
    bool operator==(const Move&) const = default;
};

enum class RuleCheck : std::uint8_t { Legal, GameOver, OutOfBoard, Occupied, Suicide, Superko };

const char* rule_check_name(RuleCheck r);

class RuleViolation : public std::runtime_error {
public:
    RuleViolation(RuleCheck reason, const std::string& what)
        : std::runtime_error(what), reason_(reason) {}
    RuleCheck reason() const { return reason_; }

private:
    RuleCheck reason_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr int kMinBoard = 5;
constexpr int kMaxBoard = 19;
constexpr int kHistoryPlanes = 4;  // previous positions kept for the encoder

// Immutable board state. All mutators return a new Position.
class Position {
public:
    explicit Position(int size);

    int size() const { return size_; }
    int num_points() const { return size_ * size_; }
    Color at(int idx) const { return stones_[idx]; }
    Color at(int row, int col) const { return stones_[row * size_ + col]; }
    Color to_move() const { return to_move_; }
    int consecutive_passes() const { return consecutive_passes_; }
    bool game_over() const { return consecutive_passes_ >= 2; }
    const std::vector<Color>& stones() const { return stones_; }

    // Last up-to-4 prior occupancy snapshots, most recent first.
    const std::deque<std::vector<Color>>& history() const { return move_history_; }

    // Stone configuration XOR side-to-move key.
    std::uint64_t hash() const;
    // Stone configuration only; this is what the superko rule compares.
    std::uint64_t stone_hash() const { return stone_hash_; }

    RuleCheck check(Move m) const;
    bool is_legal(Move m) const { return check(m) == RuleCheck::Legal; }

    // Throws RuleViolation on an illegal move.
    Position play(Move m) const;

    std::vector<Move> legal_moves() const;

    // Analysis helper: same board with the given side to move.
    Position with_to_move(Color c) const;

    // Area scoring; positive means White is ahead.
    double tromp_taylor_score(double komi = 7.5) const;

private:
    // Applies a point move assuming occupancy was checked; resolves captures.
    // Returns nullopt for suicide.
    std::optional<Position> apply_point(int idx) const;

    int size_;
    std::vector<Color> stones_;
    Color to_move_ = Color::Black;
    int consecutive_passes_ = 0;
    std::uint64_t stone_hash_ = 0;
    std::unordered_set<std::uint64_t> ko_history_;
    std::deque<std::vector<Color>> move_history_;
};

std::uint64_t position_hash(const Position& p);

// Per-point string decomposition with liberty counts, computed in one scan.
struct BoardAnalysis {
    int size = 0;
    std::vector<int> string_id;        // -1 for empty points
    std::vector<int> string_liberties; // per string id
    std::vector<Color> string_color;   // per string id
    std::vector<std::vector<int>> string_points;

    int num_strings() const { return static_cast<int>(string_liberties.size()); }
};

BoardAnalysis analyze(const Position& p);

struct GameRecord {
    int size = 19;
    int result = 0;  // 0 Black won, 1 White won
    double komi = 7.5;
    std::vector<Move> moves;

    bool operator==(const GameRecord&) const = default;
};

}  // namespace tenuki
