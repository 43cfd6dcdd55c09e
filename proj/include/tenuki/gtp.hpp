#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "tenuki/search.hpp"

namespace tenuki {

// GTP vertex notation: columns A..T skipping I, rows numbered from the bottom.
std::string move_to_vertex(Move m, int size);
std::optional<Move> vertex_to_move(const std::string& vertex, int size);

// One GTP v2 session over text lines.
class EngineSession {
public:
    EngineSession(Evaluator& evaluator, int movetime_ms = 1000, bool randomize = false);

    // Full response including the "= "/"? " prefix and terminating blank line.
    std::string handle(const std::string& line);

    void run(std::istream& in, std::ostream& out);

    const Position& position() const { return pos_; }
    bool quit_requested() const { return quit_; }

private:
    std::string genmove(Color c);

    Evaluator& evaluator_;
    int movetime_ms_;
    bool randomize_;
    Position pos_;
    double komi_ = 7.5;
    int size_ = 19;
    bool quit_ = false;
    std::mt19937_64 rng_{0x9755};
};

}  // namespace tenuki
