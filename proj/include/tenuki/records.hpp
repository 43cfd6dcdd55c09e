#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tenuki/encoder.hpp"
#include "tenuki/goban.hpp"

namespace tenuki {

struct Corpus {
    std::vector<GameRecord> games;
    // Prefix sums of per-game non-pass ply counts.
    std::vector<std::int64_t> cumulative_state_index;

    std::int64_t num_states() const {
        return cumulative_state_index.empty() ? 0 : cumulative_state_index.back();
    }
    bool operator==(const Corpus&) const = default;
};

Corpus make_corpus(std::vector<GameRecord> games);

struct Split {
    Corpus train;
    std::vector<Sample> validation;
    std::vector<int> holdout_game_ids;
};

class SgfReject : public std::runtime_error {
public:
    SgfReject(std::string reason, const std::string& what)
        : std::runtime_error(what), reason_(std::move(reason)) {}
    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
};

class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
          offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Parses one SGF game and validates the move sequence by full replay.
// Throws SgfReject for unusable games (missing result, handicap, illegal moves).
GameRecord parse_sgf(const std::string& text);

std::string to_sgf(const GameRecord& rec);

void write_cache(const Corpus& c, const std::string& path);
Corpus read_cache(const std::string& path);

Split split(const Corpus& c, int holdout_games, std::uint64_t seed);

std::vector<Sample> sample_batch(const Corpus& c, int n, std::mt19937_64& rng);

// Locates the k-th non-pass ply (0-based over the whole corpus).
struct StateRef {
    int game = 0;
    int ply = 0;
};
StateRef locate_state(const Corpus& c, std::int64_t k);

// Self-play generators (test corpora; results from Tromp-Taylor scoring).
GameRecord random_game(int size, std::mt19937_64& rng, int max_moves = 0, double komi = 7.5);
// Plays a deterministic capture/extend/approach heuristic with seeded noise;
// produces predictable moves a policy net can learn.
GameRecord heuristic_game(int size, std::mt19937_64& rng, int max_moves = 0, double komi = 7.5);

}  // namespace tenuki
