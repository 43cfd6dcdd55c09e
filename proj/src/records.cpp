#include "tenuki/records.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>

namespace tenuki {

namespace {

int non_pass_plies(const GameRecord& g) {
    int n = 0;
    for (const auto& m : g.moves)
        if (!m.is_pass()) ++n;
    return n;
}

// --- SGF ---

struct SgfNode {
    std::vector<std::pair<std::string, std::vector<std::string>>> props;
};

struct SgfParser {
    const std::string& text;
    std::size_t pos = 0;

    explicit SgfParser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) { ++pos; return true; }
        return false;
    }

    // Main line only: root sequence plus the first subtree, recursively.
    std::vector<SgfNode> parse_gametree() {
        if (!eat('(')) throw SgfReject("malformed", "expected '('");
        std::vector<SgfNode> nodes;
        while (eat(';')) nodes.push_back(parse_node());
        skip_ws();
        if (pos < text.size() && text[pos] == '(') {
            auto child = parse_gametree();
            nodes.insert(nodes.end(), child.begin(), child.end());
            skip_variations();
        }
        if (!eat(')')) throw SgfReject("malformed", "expected ')'");
        return nodes;
    }

    void skip_variations() {
        skip_ws();
        while (pos < text.size() && text[pos] == '(') {
            int depth = 0;
            while (pos < text.size()) {
                char c = text[pos++];
                if (c == '\\' && pos < text.size()) { ++pos; continue; }
                if (c == '(') ++depth;
                else if (c == ')' && --depth == 0) break;
            }
            skip_ws();
        }
    }

    SgfNode parse_node() {
        SgfNode node;
        for (;;) {
            skip_ws();
            std::string ident;
            while (pos < text.size() && std::isupper(static_cast<unsigned char>(text[pos])))
                ident += text[pos++];
            if (ident.empty()) break;
            std::vector<std::string> values;
            while (eat('[')) {
                std::string v;
                while (pos < text.size() && text[pos] != ']') {
                    if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
                    v += text[pos++];
                }
                if (pos >= text.size()) throw SgfReject("malformed", "unterminated property value");
                ++pos;
                values.push_back(std::move(v));
            }
            node.props.emplace_back(std::move(ident), std::move(values));
        }
        return node;
    }
};

Move sgf_move(const std::string& v, int size) {
    if (v.empty()) return Move::pass();
    if (v == "tt" && size <= 19) return Move::pass();
    if (v.size() != 2) throw SgfReject("malformed coordinates", "bad coordinate '" + v + "'");
    int col = v[0] - 'a', row = v[1] - 'a';
    if (col < 0 || col >= size || row < 0 || row >= size)
        throw SgfReject("malformed coordinates", "coordinate '" + v + "' off board");
    return Move::at(row, col, size);
}

// --- cache I/O ---

void put_u8(std::string& b, std::uint8_t v) { b.push_back(static_cast<char>(v)); }
void put_u16(std::string& b, std::uint16_t v) {
    b.push_back(static_cast<char>(v & 0xff));
    b.push_back(static_cast<char>(v >> 8));
}
void put_i16(std::string& b, std::int16_t v) { put_u16(b, static_cast<std::uint16_t>(v)); }
void put_u32(std::string& b, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct ByteReader {
    const std::string& b;
    std::size_t pos = 0;

    void need(std::size_t n) {
        if (pos + n > b.size()) throw FormatError("truncated cache file", pos);
    }
    std::uint8_t u8() { need(1); return static_cast<std::uint8_t>(b[pos++]); }
    std::uint16_t u16() {
        need(2);
        std::uint16_t v = static_cast<std::uint8_t>(b[pos]) |
                          (static_cast<std::uint16_t>(static_cast<std::uint8_t>(b[pos + 1])) << 8);
        pos += 2;
        return v;
    }
    std::int16_t i16() { return static_cast<std::int16_t>(u16()); }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }
};

}  // namespace

Corpus make_corpus(std::vector<GameRecord> games) {
    Corpus c;
    c.games = std::move(games);
    c.cumulative_state_index.reserve(c.games.size());
    std::int64_t total = 0;
    for (const auto& g : c.games) {
        total += non_pass_plies(g);
        c.cumulative_state_index.push_back(total);
    }
    return c;
}

GameRecord parse_sgf(const std::string& text) {
    SgfParser parser(text);
    auto nodes = parser.parse_gametree();
    if (nodes.empty()) throw SgfReject("malformed", "empty game tree");

    GameRecord rec;
    bool have_result = false;
    for (const auto& [ident, values] : nodes[0].props) {
        if (values.empty()) continue;
        if (ident == "SZ") {
            rec.size = std::atoi(values[0].c_str());
            if (rec.size < kMinBoard || rec.size > kMaxBoard)
                throw SgfReject("bad size", "unsupported SZ " + values[0]);
        } else if (ident == "RE") {
            if (values[0].rfind("B+", 0) == 0) { rec.result = 0; have_result = true; }
            else if (values[0].rfind("W+", 0) == 0) { rec.result = 1; have_result = true; }
        } else if (ident == "KM") {
            rec.komi = std::atof(values[0].c_str());
        } else if (ident == "HA") {
            if (std::atoi(values[0].c_str()) > 1)
                throw SgfReject("handicap", "handicap games are not supported");
        } else if (ident == "AB" || ident == "AW") {
            throw SgfReject("handicap", "setup stones are not supported");
        }
    }
    if (!have_result) throw SgfReject("missing result", "no usable RE property");

    for (const auto& node : nodes) {
        for (const auto& [ident, values] : node.props) {
            if (ident != "B" && ident != "W") continue;
            if (values.empty()) { rec.moves.push_back(Move::pass()); continue; }
            rec.moves.push_back(sgf_move(values[0], rec.size));
        }
    }

    try {
        Position p(rec.size);
        for (const auto& m : rec.moves) p = p.play(m);
    } catch (const RuleViolation& e) {
        throw SgfReject(rule_check_name(e.reason()), std::string("illegal replay: ") + e.what());
    }
    return rec;
}

std::string to_sgf(const GameRecord& rec) {
    std::string out = "(;GM[1]FF[4]SZ[" + std::to_string(rec.size) + "]KM[" +
                      std::to_string(rec.komi) + "]RE[" + (rec.result == 0 ? "B+" : "W+") + "]";
    Color c = Color::Black;
    for (const auto& m : rec.moves) {
        out += c == Color::Black ? ";B[" : ";W[";
        if (!m.is_pass()) {
            out += static_cast<char>('a' + m.point % rec.size);
            out += static_cast<char>('a' + m.point / rec.size);
        }
        out += "]";
        c = opponent(c);
    }
    return out + ")";
}

void write_cache(const Corpus& c, const std::string& path) {
    if (c.games.empty()) throw ConfigError("refusing to write an empty corpus");
    int size = c.games[0].size;
    for (const auto& g : c.games)
        if (g.size != size) throw ConfigError("cache requires a single board size");

    std::string buf;
    buf += "GORC";
    put_u8(buf, 1);
    put_u8(buf, static_cast<std::uint8_t>(size));
    put_u32(buf, static_cast<std::uint32_t>(c.games.size()));
    const std::uint16_t pass_code = static_cast<std::uint16_t>(size * size);
    for (const auto& g : c.games) {
        put_u8(buf, static_cast<std::uint8_t>(g.result));
        put_i16(buf, static_cast<std::int16_t>(g.komi * 2));
        put_u16(buf, static_cast<std::uint16_t>(g.moves.size()));
        for (const auto& m : g.moves)
            put_u16(buf, m.is_pass() ? pass_code : static_cast<std::uint16_t>(m.point));
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

Corpus read_cache(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open " + path, 0);
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    ByteReader r{buf};
    r.need(4);
    if (buf.compare(0, 4, "GORC") != 0) throw FormatError("bad magic", 0);
    r.pos = 4;
    if (r.u8() != 1) throw FormatError("unsupported cache version", 4);
    int size = r.u8();
    if (size < kMinBoard || size > kMaxBoard) throw FormatError("bad board size", 5);
    std::uint32_t count = r.u32();
    const std::uint16_t pass_code = static_cast<std::uint16_t>(size * size);

    std::vector<GameRecord> games;
    games.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        GameRecord g;
        g.size = size;
        g.result = r.u8();
        if (g.result > 1) throw FormatError("bad result byte", r.pos - 1);
        g.komi = r.i16() / 2.0;
        std::uint16_t mc = r.u16();
        g.moves.reserve(mc);
        for (std::uint16_t m = 0; m < mc; ++m) {
            std::uint16_t v = r.u16();
            if (v == pass_code) g.moves.push_back(Move::pass());
            else if (v < pass_code) g.moves.push_back(Move::at(v));
            else throw FormatError("move index out of range", r.pos - 2);
        }
        games.push_back(std::move(g));
    }
    if (r.pos != buf.size()) throw FormatError("trailing bytes", r.pos);
    return make_corpus(std::move(games));
}

StateRef locate_state(const Corpus& c, std::int64_t k) {
    if (k < 0 || k >= c.num_states())
        throw std::out_of_range("state index " + std::to_string(k) + " outside the corpus");
    auto it = std::upper_bound(c.cumulative_state_index.begin(), c.cumulative_state_index.end(), k);
    int game = static_cast<int>(it - c.cumulative_state_index.begin());
    std::int64_t before = game == 0 ? 0 : c.cumulative_state_index[game - 1];
    int want = static_cast<int>(k - before);
    const auto& moves = c.games[game].moves;
    for (int ply = 0, seen = 0; ply < static_cast<int>(moves.size()); ++ply) {
        if (moves[ply].is_pass()) continue;
        if (seen++ == want) return {game, ply};
    }
    throw std::logic_error("corrupt cumulative_state_index");
}

Split split(const Corpus& c, int holdout_games, std::uint64_t seed) {
    if (holdout_games < 0 || holdout_games >= static_cast<int>(c.games.size()))
        throw ConfigError("holdout must be smaller than the corpus");
    std::mt19937_64 rng(seed);
    std::vector<int> ids(c.games.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    std::shuffle(ids.begin(), ids.end(), rng);

    Split s;
    s.holdout_game_ids.assign(ids.begin(), ids.begin() + holdout_games);
    std::sort(s.holdout_game_ids.begin(), s.holdout_game_ids.end());

    std::vector<bool> held(c.games.size(), false);
    for (int id : s.holdout_game_ids) held[id] = true;
    std::vector<GameRecord> train;
    train.reserve(c.games.size() - holdout_games);
    for (std::size_t i = 0; i < c.games.size(); ++i)
        if (!held[i]) train.push_back(c.games[i]);
    s.train = make_corpus(std::move(train));

    for (int id : s.holdout_game_ids) {
        const auto& g = c.games[id];
        std::vector<int> plies;
        for (int ply = 0; ply < static_cast<int>(g.moves.size()); ++ply)
            if (!g.moves[ply].is_pass()) plies.push_back(ply);
        if (plies.empty()) continue;
        int ply = plies[std::uniform_int_distribution<std::size_t>(0, plies.size() - 1)(rng)];
        s.validation.push_back(make_sample(g, ply, Symmetry{0}));
    }
    return s;
}

std::vector<Sample> sample_batch(const Corpus& c, int n, std::mt19937_64& rng) {
    if (c.num_states() == 0) throw ConfigError("corpus has no sampleable states");
    std::vector<Sample> out;
    out.reserve(n);
    std::uniform_int_distribution<std::int64_t> state_dist(0, c.num_states() - 1);
    std::uniform_int_distribution<int> sym_dist(0, kNumSymmetries - 1);
    for (int i = 0; i < n; ++i) {
        StateRef ref = locate_state(c, state_dist(rng));
        out.push_back(make_sample(c.games[ref.game], ref.ply, Symmetry{sym_dist(rng)}));
    }
    return out;
}

namespace {

GameRecord finish_record(int size, double komi, std::vector<Move> moves, const Position& final_pos) {
    GameRecord g;
    g.size = size;
    g.komi = komi;
    g.moves = std::move(moves);
    g.result = final_pos.tromp_taylor_score(komi) > 0 ? 1 : 0;
    return g;
}

}  // namespace

GameRecord random_game(int size, std::mt19937_64& rng, int max_moves, double komi) {
    if (max_moves <= 0) max_moves = 3 * size * size;
    Position p(size);
    std::vector<Move> moves;
    std::uniform_int_distribution<int> pd(0, size * size - 1);
    while (!p.game_over() && static_cast<int>(moves.size()) < max_moves) {
        // Pass only when forced (or near the cap); random play otherwise.
        // Rejection sampling first; a full scan only on crowded boards.
        Move m = Move::pass();
        bool found = false;
        for (int tries = 0; tries < 8 && !found; ++tries) {
            Move cand = Move::at(pd(rng));
            if (p.check(cand) == RuleCheck::Legal) {
                m = cand;
                found = true;
            }
        }
        if (!found) {
            auto legal = p.legal_moves();
            if (legal.size() > 1) {
                std::uniform_int_distribution<std::size_t> d(0, legal.size() - 2);
                m = legal[d(rng)];
            }
        }
        p = p.play(m);
        moves.push_back(m);
    }
    while (!p.game_over()) {  // hit the cap: close out the game
        p = p.play(Move::pass());
        moves.push_back(Move::pass());
    }
    return finish_record(size, komi, std::move(moves), p);
}

GameRecord heuristic_game(int size, std::mt19937_64& rng, int max_moves, double komi) {
    if (max_moves <= 0) max_moves = 2 * size * size;
    Position p(size);
    std::vector<Move> moves;
    int last_point = -1;
    while (!p.game_over() && static_cast<int>(moves.size()) < max_moves) {
        auto legal = p.legal_moves();
        Move chosen = Move::pass();
        if (legal.size() > 1) {
            BoardAnalysis a = analyze(p);
            Color me = p.to_move();
            int best_rank = 100;
            std::vector<int> best;
            for (std::size_t i = 0; i + 1 < legal.size(); ++i) {
                int pt = legal[i].point;
                int rank = 4;
                int r = pt / size, c = pt % size;
                const int nbr[4] = {pt - size, pt + size, pt - 1, pt + 1};
                const bool ok[4] = {r > 0, r < size - 1, c > 0, c < size - 1};
                for (int d = 0; d < 4; ++d) {
                    if (!ok[d]) continue;
                    int id = a.string_id[nbr[d]];
                    if (id < 0) continue;
                    if (a.string_color[id] != me && a.string_liberties[id] == 1)
                        rank = std::min(rank, 0);  // capture
                    else if (a.string_color[id] == me && a.string_liberties[id] == 1)
                        rank = std::min(rank, 1);  // rescue from atari
                }
                if (last_point >= 0 && rank > 1) {
                    int dr = std::abs(r - last_point / size), dc = std::abs(c - last_point % size);
                    if (dr <= 1 && dc <= 1) rank = std::min(rank, 2);  // contact reply
                }
                if (rank < best_rank) { best_rank = rank; best.clear(); }
                if (rank == best_rank) best.push_back(pt);
            }
            // Lowest flat index among the best rank keeps the policy predictable;
            // a little noise keeps games diverse.
            if (std::uniform_real_distribution<>(0, 1)(rng) < 0.15) {
                std::uniform_int_distribution<std::size_t> d(0, legal.size() - 2);
                chosen = legal[d(rng)];
            } else {
                chosen = Move::at(*std::min_element(best.begin(), best.end()));
            }
        }
        last_point = chosen.is_pass() ? -1 : chosen.point;
        p = p.play(chosen);
        moves.push_back(chosen);
    }
    while (!p.game_over()) {
        p = p.play(Move::pass());
        moves.push_back(Move::pass());
    }
    return finish_record(size, komi, std::move(moves), p);
}

}  // namespace tenuki
