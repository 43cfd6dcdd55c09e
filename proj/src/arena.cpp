#include "tenuki/arena.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <ostream>
#include <thread>

namespace tenuki {

double winrate_sigma(double winrate, int games) {
    return std::sqrt(winrate * (1.0 - winrate) / games);
}

GameOutcome play_game(Evaluator& black, Evaluator& white, const SearchConfig& budget,
                      std::uint64_t seed, int size, double komi, bool randomize) {
    std::mt19937_64 rng(seed);
    Position p(size);
    GameOutcome out;
    out.record.size = size;
    out.record.komi = komi;
    const int move_cap = 4 * size * size;
    while (!p.game_over()) {
        Move m = Move::pass();
        if (static_cast<int>(out.record.moves.size()) < move_cap) {
            Evaluator& side = p.to_move() == Color::Black ? black : white;
            SearchResult r = puct_search(p, side, budget);
            m = select_move(r, randomize, rng);
        }
        p = p.play(m);
        out.record.moves.push_back(m);
    }
    out.winner = p.tromp_taylor_score(komi) > 0 ? 1 : 0;
    out.record.result = out.winner;
    return out;
}

TournamentTable round_robin(const std::vector<TournamentEntry>& nets, int games_per_pairing,
                            const SearchConfig& budget, std::uint64_t seed, int size,
                            int workers) {
    if (nets.size() < 2) throw ConfigError("a tournament needs at least two networks");

    struct Pairing {
        int black, white;
        std::uint64_t seed;
    };
    std::vector<Pairing> games;
    std::uint64_t g = 0;
    for (std::size_t i = 0; i < nets.size(); ++i)
        for (std::size_t j = i + 1; j < nets.size(); ++j)
            for (int k = 0; k < games_per_pairing; ++k) {
                // Alternate colors within the pairing.
                bool i_black = k % 2 == 0;
                games.push_back({static_cast<int>(i_black ? i : j),
                                 static_cast<int>(i_black ? j : i), seed + g++});
            }

    std::vector<int> wins(nets.size(), 0), played(nets.size(), 0);
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= games.size()) return;
            const Pairing& pg = games[idx];
            GameOutcome out = play_game(*nets[pg.black].evaluator, *nets[pg.white].evaluator,
                                        budget, pg.seed, size);
            std::lock_guard<std::mutex> lock(mu);
            ++played[pg.black];
            ++played[pg.white];
            if (out.winner == 0) ++wins[pg.black];
            else ++wins[pg.white];
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    TournamentTable table;
    for (std::size_t i = 0; i < nets.size(); ++i) {
        TournamentRow row;
        row.name = nets[i].name;
        row.games = played[i];
        row.wins = wins[i];
        row.winrate = played[i] > 0 ? static_cast<double>(wins[i]) / played[i] : 0.0;
        row.sigma = played[i] > 0 ? winrate_sigma(row.winrate, row.games) : 0.0;
        table.rows.push_back(row);
    }
    std::sort(table.rows.begin(), table.rows.end(),
              [](const TournamentRow& a, const TournamentRow& b) {
                  if (a.winrate != b.winrate) return a.winrate > b.winrate;
                  return a.name < b.name;
              });
    return table;
}

SpeedReport throughput_bench(const Network& net, const std::vector<int>& batch_sizes,
                             const std::string& device, int duration_ms, int repeats) {
    SpeedReport report;
    const int S = net.spec().board;
    const int planes = net.spec().input_planes;
    std::mt19937_64 rng(0xbe9c);
    std::string name = spec_name(net.named());

    for (int batch : batch_sizes) {
        SpeedRow row{name, batch, device, 0.0, true};
        try {
            if (batch < 1) throw ConfigError("batch sizes must be >= 1");
            Tensor input({batch, planes, S, S});
            std::bernoulli_distribution bit(0.1);
            for (auto& v : input.v) v = bit(rng) ? 1.0f : 0.0f;

            net.forward_infer(input);  // warmup
            double best = 0.0;
            for (int rep = 0; rep < repeats; ++rep) {
                auto start = std::chrono::steady_clock::now();
                std::int64_t states = 0;
                double elapsed = 0.0;
                do {
                    net.forward_infer(input);
                    states += batch;
                    elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                                  .count();
                } while (elapsed * 1000.0 < duration_ms);
                best = std::max(best, states / elapsed);
            }
            row.states_per_sec = best;
        } catch (const std::bad_alloc&) {
            row.ok = false;
        }
        report.rows.push_back(row);
    }
    return report;
}

void write_tournament_csv(std::ostream& os, const TournamentTable& t) {
    os << "name,games,winrate,sigma\n";
    for (const auto& r : t.rows)
        os << r.name << ',' << r.games << ',' << r.winrate << ',' << r.sigma << '\n';
}

void write_speed_csv(std::ostream& os, const SpeedReport& r) {
    os << "name,batch,device,states_per_sec\n";
    for (const auto& row : r.rows) {
        os << row.name << ',' << row.batch << ',' << row.device << ',';
        if (row.ok) os << row.states_per_sec;
        else os << "failed";
        os << '\n';
    }
}

}  // namespace tenuki
