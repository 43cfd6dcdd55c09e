#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tenuki/records.hpp"
#include "tenuki/search.hpp"

namespace tenuki {

double winrate_sigma(double winrate, int games);

struct TournamentRow {
    std::string name;
    int games = 0;
    int wins = 0;
    double winrate = 0.0;
    double sigma = 0.0;
};

struct TournamentTable {
    std::vector<TournamentRow> rows;  // sorted by winrate descending
};

struct GameOutcome {
    int winner = 0;  // 0 Black, 1 White
    GameRecord record;
};

// One game, Black = `black`, White = `white`; both sides use the same budget
// and the tournament randomization rule.
GameOutcome play_game(Evaluator& black, Evaluator& white, const SearchConfig& budget,
                      std::uint64_t seed, int size = 19, double komi = 7.5,
                      bool randomize = true);

struct TournamentEntry {
    std::string name;
    Evaluator* evaluator = nullptr;
};

// Round robin: each pair plays games_per_pairing games, colors split evenly.
TournamentTable round_robin(const std::vector<TournamentEntry>& nets, int games_per_pairing,
                            const SearchConfig& budget, std::uint64_t seed, int size = 19,
                            int workers = 1);

struct SpeedRow {
    std::string name;
    int batch = 0;
    std::string device;
    double states_per_sec = 0.0;
    bool ok = true;
};

struct SpeedReport {
    std::vector<SpeedRow> rows;
};

// Repeated infer-mode forwards on synthetic inputs; timing covers the forward
// pass only. Rates are the best of `repeats` timed windows of >= duration_ms.
SpeedReport throughput_bench(const Network& net, const std::vector<int>& batch_sizes,
                             const std::string& device, int duration_ms, int repeats = 3);

void write_tournament_csv(std::ostream& os, const TournamentTable& t);
void write_speed_csv(std::ostream& os, const SpeedReport& r);

}  // namespace tenuki
