#include "tenuki/gtp.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace tenuki {

namespace {

const char kColumns[] = "ABCDEFGHJKLMNOPQRST";  // no I

const char* kCommands[] = {
    "protocol_version", "name", "version", "list_commands", "boardsize",
    "clear_board", "komi", "play", "genmove", "quit",
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::optional<Color> parse_color(const std::string& s) {
    std::string l = lower(s);
    if (l == "b" || l == "black") return Color::Black;
    if (l == "w" || l == "white") return Color::White;
    return std::nullopt;
}

}  // namespace

std::string move_to_vertex(Move m, int size) {
    if (m.is_pass()) return "pass";
    int row = m.point / size, col = m.point % size;
    return std::string(1, kColumns[col]) + std::to_string(size - row);
}

std::optional<Move> vertex_to_move(const std::string& vertex, int size) {
    std::string v = lower(vertex);
    if (v == "pass") return Move::pass();
    if (v.size() < 2) return std::nullopt;
    char c = static_cast<char>(std::toupper(static_cast<unsigned char>(v[0])));
    const char* pos = std::strchr(kColumns, c);
    if (!pos || c == '\0') return std::nullopt;
    int col = static_cast<int>(pos - kColumns);
    int row_num = std::atoi(v.c_str() + 1);
    if (col >= size || row_num < 1 || row_num > size) return std::nullopt;
    return Move::at(size - row_num, col, size);
}

EngineSession::EngineSession(Evaluator& evaluator, int movetime_ms, bool randomize)
    : evaluator_(evaluator), movetime_ms_(movetime_ms), randomize_(randomize), pos_(19) {}

std::string EngineSession::genmove(Color c) {
    if (pos_.game_over()) return "pass";
    if (pos_.to_move() != c) pos_ = pos_.with_to_move(c);
    SearchConfig cfg;
    cfg.max_millis = movetime_ms_;
    SearchResult r = puct_search(pos_, evaluator_, cfg);
    Move m = select_move(r, randomize_, rng_);
    pos_ = pos_.play(m);
    return move_to_vertex(m, size_);
}

std::string EngineSession::handle(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> tok;
    std::string t;
    while (ss >> t) tok.push_back(t);

    std::string id;
    if (!tok.empty() && std::all_of(tok[0].begin(), tok[0].end(),
                                    [](unsigned char c) { return std::isdigit(c); })) {
        id = tok[0];
        tok.erase(tok.begin());
    }
    auto ok = [&](const std::string& body) { return "=" + (id.empty() ? " " : id + " ") + body + "\n\n"; };
    auto fail = [&](const std::string& body) { return "?" + (id.empty() ? " " : id + " ") + body + "\n\n"; };

    if (tok.empty()) return ok("");
    const std::string cmd = lower(tok[0]);

    if (cmd == "protocol_version") return ok("2");
    if (cmd == "name") return ok("tenuki");
    if (cmd == "version") return ok("0.1");
    if (cmd == "list_commands") {
        std::string out;
        for (const char* c : kCommands) {
            if (!out.empty()) out += "\n";
            out += c;
        }
        return ok(out);
    }
    if (cmd == "boardsize") {
        if (tok.size() < 2) return fail("syntax error");
        int n = std::atoi(tok[1].c_str());
        if (n < kMinBoard || n > kMaxBoard) return fail("unacceptable size");
        size_ = n;
        pos_ = Position(size_);
        return ok("");
    }
    if (cmd == "clear_board") {
        pos_ = Position(size_);
        return ok("");
    }
    if (cmd == "komi") {
        if (tok.size() < 2) return fail("syntax error");
        komi_ = std::atof(tok[1].c_str());
        return ok("");
    }
    if (cmd == "play") {
        if (tok.size() < 3) return fail("syntax error");
        auto color = parse_color(tok[1]);
        auto move = vertex_to_move(tok[2], size_);
        if (!color || !move) return fail("syntax error");
        Position p = pos_.to_move() == *color ? pos_ : pos_.with_to_move(*color);
        try {
            pos_ = p.play(*move);
        } catch (const RuleViolation& e) {
            return fail(std::string("illegal move: ") + rule_check_name(e.reason()));
        }
        return ok("");
    }
    if (cmd == "genmove") {
        if (tok.size() < 2) return fail("syntax error");
        auto color = parse_color(tok[1]);
        if (!color) return fail("syntax error");
        try {
            return ok(genmove(*color));
        } catch (const std::exception& e) {
            return fail(std::string("search failed: ") + e.what());
        }
    }
    if (cmd == "quit") {
        quit_ = true;
        return ok("");
    }
    return fail("unknown command");
}

void EngineSession::run(std::istream& in, std::ostream& out) {
    std::string line;
    while (!quit_ && std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        out << handle(line);
        out.flush();
    }
}

}  // namespace tenuki
