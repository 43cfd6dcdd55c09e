#include <sstream>

#include "doctest.h"
#include "tenuki/gtp.hpp"

using namespace tenuki;

namespace {

class UniformEvaluator : public Evaluator {
public:
    Evaluation evaluate(const Position& p) override {
        Evaluation e;
        e.policy.assign(p.num_points(), 1.0f / p.num_points());
        e.value = 0.5f;
        return e;
    }
};

std::string body(const std::string& response) {
    // Strip "= " / "? " prefix and the trailing blank line.
    REQUIRE(response.size() >= 4);
    std::string b = response.substr(2);
    while (!b.empty() && (b.back() == '\n')) b.pop_back();
    return b;
}

}  // namespace

TEST_CASE("vertex conversion") {
    CHECK(move_to_vertex(Move::pass(), 19) == "pass");
    // A1 is the bottom-left corner.
    CHECK(move_to_vertex(Move::at(18, 0, 19), 19) == "A1");
    CHECK(move_to_vertex(Move::at(0, 0, 19), 19) == "A19");
    // Column I is skipped: the 9th column is J.
    CHECK(move_to_vertex(Move::at(0, 8, 19), 19) == "J19");

    CHECK(vertex_to_move("a1", 19) == Move::at(18, 0, 19));
    CHECK(vertex_to_move("J19", 19) == Move::at(0, 8, 19));
    CHECK(vertex_to_move("PASS", 19) == Move::pass());
    CHECK(!vertex_to_move("I5", 19).has_value());
    CHECK(!vertex_to_move("Z3", 19).has_value());
    CHECK(!vertex_to_move("A0", 19).has_value());
    CHECK(!vertex_to_move("A20", 19).has_value());
    CHECK(!vertex_to_move("", 19).has_value());

    // Round trip over a whole 9x9 board.
    for (int i = 0; i < 81; ++i)
        CHECK(vertex_to_move(move_to_vertex(Move::at(i), 9), 9) == Move::at(i));
}

TEST_CASE("administrative commands") {
    UniformEvaluator ev;
    EngineSession s(ev, 10);
    CHECK(s.handle("protocol_version") == "= 2\n\n");
    CHECK(s.handle("name") == "= tenuki\n\n");
    CHECK(s.handle("version") == "= 0.1\n\n");
    CHECK(s.handle("77 protocol_version") == "=77 2\n\n");
    CHECK(s.handle("unknown_cmd")[0] == '?');
    std::string cmds = body(s.handle("list_commands"));
    for (const char* c : {"protocol_version", "boardsize", "play", "genmove", "quit"})
        CHECK(cmds.find(c) != std::string::npos);
}

TEST_CASE("boardsize and play validation") {
    UniformEvaluator ev;
    EngineSession s(ev, 10);
    CHECK(s.handle("boardsize 9") == "= \n\n");
    CHECK(s.handle("boardsize 4")[0] == '?');
    CHECK(s.handle("boardsize 25")[0] == '?');
    CHECK(s.handle("komi 6.5") == "= \n\n");
    CHECK(s.handle("play b E5") == "= \n\n");
    CHECK(s.position().at(4, 4) == Color::Black);
    // Occupied point.
    CHECK(s.handle("play w E5")[0] == '?');
    // Bad vertex and bad color.
    CHECK(s.handle("play b I3")[0] == '?');
    CHECK(s.handle("play purple C3")[0] == '?');
    CHECK(s.handle("clear_board") == "= \n\n");
    CHECK(s.position().at(4, 4) == Color::Empty);
}

TEST_CASE("quit sets the flag and run stops") {
    UniformEvaluator ev;
    EngineSession s(ev, 10);
    std::istringstream in("name\nquit\nname\n");
    std::ostringstream out;
    s.run(in, out);
    CHECK(s.quit_requested());
    // Only two responses: the third command is never read.
    CHECK(out.str() == "= tenuki\n\n= \n\n");
}

TEST_CASE("scripted session stays synchronized with a reference board") {
    UniformEvaluator ev;
    EngineSession s(ev, 5, false);
    REQUIRE(s.handle("boardsize 7") == "= \n\n");
    Position ref(7);

    std::mt19937_64 rng(99);
    int commands = 0;
    for (int turn = 0; turn < 25 && !ref.game_over(); ++turn) {
        Color c = ref.to_move();
        std::string cname = c == Color::Black ? "b" : "w";
        if (turn % 3 == 2) {
            // Engine chooses.
            std::string resp = s.handle("genmove " + cname);
            REQUIRE(resp[0] == '=');
            auto m = vertex_to_move(body(resp), 7);
            REQUIRE(m.has_value());
            ref = ref.play(*m);
        } else {
            // Scripted random legal move.
            auto legal = ref.legal_moves();
            Move m = legal[rng() % legal.size()];
            std::string resp = s.handle("play " + cname + " " + move_to_vertex(m, 7));
            REQUIRE(resp[0] == '=');
            ref = ref.play(m);
        }
        ++commands;
        // Boards agree exactly after every command.
        REQUIRE(s.position().stones() == ref.stones());
        REQUIRE(s.position().to_move() == ref.to_move());
    }
    CHECK(commands >= 10);
}
