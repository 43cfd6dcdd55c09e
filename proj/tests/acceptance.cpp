// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Self-contained against the public headers; oracles that the
// library also implements (scoring, parameter counts) are recomputed here
// independently.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tenuki/arena.hpp"
#include "tenuki/encoder.hpp"
#include "tenuki/goban.hpp"
#include "tenuki/gtp.hpp"
#include "tenuki/netspec.hpp"
#include "tenuki/network.hpp"
#include "tenuki/records.hpp"
#include "tenuki/search.hpp"
#include "tenuki/tactics.hpp"
#include "tenuki/training.hpp"

using namespace tenuki;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int n, const char* what, bool ok, const std::string& detail = "") {
    std::printf("criterion %2d [%s] %s%s%s\n", n, ok ? "PASS" : "FAIL", what,
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

// ---------------------------------------------------------------- helpers

Position from_stones(int size, const std::vector<std::pair<int, Color>>& stones,
                     Color to_move) {
    Position p(size);
    std::vector<int> black, white;
    for (auto [idx, c] : stones) (c == Color::Black ? black : white).push_back(idx);
    std::size_t bi = 0, wi = 0;
    while (bi < black.size() || wi < white.size()) {
        if (p.to_move() == Color::Black) {
            if (bi < black.size()) p = p.play(Move::at(black[bi++]));
            else p = p.with_to_move(Color::White);
        } else {
            if (wi < white.size()) p = p.play(Move::at(white[wi++]));
            else p = p.with_to_move(Color::Black);
        }
    }
    return p.with_to_move(to_move);
}

class UniformEvaluator : public Evaluator {
public:
    Evaluation evaluate(const Position& p) override {
        Evaluation e;
        e.policy.assign(p.num_points(), 1.0f / float(p.num_points()));
        e.value = 0.5f;
        return e;
    }
};

Move random_legal_move(const Position& p, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pd(0, p.num_points() - 1);
    for (int tries = 0; tries < 8; ++tries) {
        Move cand = Move::at(pd(rng));
        if (p.check(cand) == RuleCheck::Legal) return cand;
    }
    auto moves = p.legal_moves();
    std::vector<Move> pts;
    for (Move m : moves)
        if (!m.is_pass()) pts.push_back(m);
    if (pts.empty()) return Move::pass();
    return pts[rng() % pts.size()];
}

// ---------------------------------------------------------------- 1

void criterion_params() {
    auto t0 = Clock::now();
    struct Row { const char* name; std::int64_t want; };
    const Row rows[] = {
        {"a0.small", 986'748},
        {"a0.small.conv", 968'485},
        {"mobile.small", 997'506},
        {"mobile.small.conv", 970'477},
    };
    std::string detail;
    bool ok = true;
    for (const Row& r : rows) {
        std::int64_t got = count_params(parse_spec_name(r.name, 19).spec);
        if (!detail.empty()) detail += ", ";
        detail += std::string(r.name) + "=" + std::to_string(got);
        if (got != r.want) ok = false;
    }
    double el = seconds_since(t0);
    if (el >= 1.0) ok = false;
    report(1, "exact parameter counts", ok, detail);
}

// ---------------------------------------------------------------- 2

void criterion_sigma() {
    struct Row { double w, want, tol; };
    const Row rows[] = {
        {0.754, 0.027, 0.001}, {0.710, 0.029, 0.001}, {0.671, 0.030, 0.001},
        {0.591, 0.031, 0.001}, {0.575, 0.031, 0.001}, {0.377, 0.031, 0.001},
        {0.313, 0.028, 0.002}, {0.008, 0.006, 0.001},
    };
    bool ok = true;
    std::string detail;
    char buf[64];
    for (const Row& r : rows) {
        double got = winrate_sigma(r.w, 252);
        if (std::abs(got - r.want) > r.tol) {
            std::snprintf(buf, sizeof buf, "sigma(%.3f)=%.4f want %.3f", r.w, got, r.want);
            detail = buf;
            ok = false;
        }
    }
    report(2, "winrate sigma table", ok, detail);
}

// ---------------------------------------------------------------- 3

void criterion_lr() {
    TrainConfig cfg;
    bool ok = true;
    for (int e = 0; e < 200; ++e) {
        float want = e < 100 ? 0.005f : e < 150 ? 0.0005f : 0.00005f;
        if (lr_at(cfg, e) != want) ok = false;
    }
    report(3, "learning rate schedule", ok);
}

// ---------------------------------------------------------------- 4

void criterion_equivariance() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(401);
    int positions = 0;
    bool ok = true;
    for (int g = 0; g < 30 && ok; ++g) {
        GameRecord rec = random_game(9, rng, 70);
        for (int plies = 5; plies <= int(rec.moves.size()); plies += 8) {
            ++positions;
            Position p = replay_prefix(rec, plies);
            FeatureTensor base = encode(p);
            for (int id = 0; id < kNumSymmetries; ++id) {
                Symmetry s{id};
                GameRecord sym = transform_record(rec, s);
                if (transform_tensor(base, s) != encode(replay_prefix(sym, plies))) {
                    ok = false;
                    break;
                }
            }
        }
    }
    double el = seconds_since(t0);
    if (positions < 200 || el >= 60.0) ok = false;
    char buf[80];
    std::snprintf(buf, sizeof buf, "%d positions x 8 symmetries, %.1fs", positions, el);
    report(4, "encoder equivariance", ok, buf);
}

// ---------------------------------------------------------------- 5

void criterion_ladders() {
    auto t0 = Clock::now();
    auto at9 = [](int r, int c) { return r * 9 + c; };

    // Crafted suite: four base shapes with known verdicts, each instantiated
    // under board symmetries via transform_policy_index.
    struct Shape {
        std::vector<std::pair<int, Color>> stones;
        int target;
        CaptureVerdict want;
        int copies;  // how many symmetry images to take
    };
    const std::vector<Shape> bases = {
        // Working corner ladder: flanker at 2,0 keeps White at two liberties.
        {{{at9(0, 1), Color::Black}, {at9(1, 0), Color::Black}, {at9(2, 0), Color::Black},
          {at9(1, 1), Color::White}},
         at9(1, 1), CaptureVerdict::Captured, 8},
        // Same shape with a distant breaker on the diagonal: the ladder fails.
        {{{at9(0, 1), Color::Black}, {at9(1, 0), Color::Black}, {at9(2, 0), Color::Black},
          {at9(1, 1), Color::White}, {at9(5, 5), Color::White}},
         at9(1, 1), CaptureVerdict::Escapes, 8},
        // Corner atari: one liberty, captured next move.
        {{{at9(0, 1), Color::Black}, {at9(0, 0), Color::White}},
         at9(0, 0), CaptureVerdict::Captured, 8},
        // Two liberties but no flanker: the stone runs to three liberties.
        {{{at9(0, 1), Color::Black}, {at9(1, 0), Color::Black}, {at9(1, 1), Color::White}},
         at9(1, 1), CaptureVerdict::Escapes, 6},
    };
    int crafted = 0, crafted_ok = 0;
    for (const Shape& sh : bases) {
        for (int id = 0; id < sh.copies; ++id) {
            Symmetry s{id};
            std::vector<std::pair<int, Color>> stones;
            for (auto [idx, c] : sh.stones)
                stones.push_back({transform_policy_index(idx, s, 9), c});
            int target = transform_policy_index(sh.target, s, 9);
            Position p = from_stones(9, stones, Color::Black);
            BoardAnalysis a = analyze(p);
            int sid = a.string_id[target];
            CaptureVerdict v = brute_force_capture(p, sid, 40);
            bool marked = ladder_status(p).in_ladder[target];
            ++crafted;
            if (v == sh.want && marked == (v == CaptureVerdict::Captured)) ++crafted_ok;
        }
    }

    // Random positions: every string at <= 2 liberties, oracle vs scan.
    std::mt19937_64 rng(501);
    int compared = 0, agreed = 0, unknowns = 0, scanned = 0;
    while (scanned < 500) {
        Position p(9);
        int stones = 8 + int(rng() % 16);
        bool dead = false;
        for (int i = 0; i < stones; ++i) {
            Move m = random_legal_move(p, rng);
            if (m.is_pass()) { dead = true; break; }
            p = p.play(m);
        }
        if (dead || p.game_over()) continue;
        ++scanned;
        LadderStatus s = ladder_status(p);
        BoardAnalysis a = analyze(p);
        for (int id = 0; id < a.num_strings(); ++id) {
            if (a.string_liberties[id] > 2) continue;
            Position q = p.with_to_move(opponent(a.string_color[id]));
            CaptureVerdict v = brute_force_capture(q, id, 12);
            if (v == CaptureVerdict::Unknown) { ++unknowns; continue; }
            ++compared;
            bool marked = s.in_ladder[a.string_points[id][0]];
            if (marked == (v == CaptureVerdict::Captured)) ++agreed;
        }
    }
    double el = seconds_since(t0);
    bool ok = crafted == 30 && crafted_ok == 30 && agreed == compared && compared > 100 &&
              el < 300.0;
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "crafted %d/%d, random %d/%d agree (%d unknown), %.1fs",
                  crafted_ok, crafted, agreed, compared, unknowns, el);
    report(5, "ladder oracle agreement", ok, buf);
}

// ---------------------------------------------------------------- 6

std::vector<Sample> heuristic_pool(int want, std::mt19937_64& rng, int min_ply) {
    std::vector<Sample> pool;
    while (int(pool.size()) < want * 3) {
        GameRecord rec = heuristic_game(9, rng);
        for (int ply = min_ply; ply < int(rec.moves.size()); ++ply) {
            if (rec.moves[ply].is_pass()) continue;
            pool.push_back(make_sample(rec, ply, Symmetry{0}));
        }
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(want);
    return pool;
}

void criterion_overfit() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(7);
    std::vector<Sample> pool = heuristic_pool(1024, rng, 8);

    NamedSpec ns = parse_spec_name("mobile.conv.avg.bin.3.48.16", 9);
    Network net(ns, 1);
    TrainConfig cfg;
    cfg.value_loss = ValueLoss::Bce;
    cfg.l2_weight = 0.0f;
    const int B = 32, nb = 1024 / B, passes = 200;
    std::vector<int> order(1024);
    for (int i = 0; i < 1024; ++i) order[i] = i;
    double acc = 0.0, mse = 1.0;
    int used_passes = 0;
    for (int pass = 0; pass < passes; ++pass) {
        float lr = 0.05f * (pass >= passes * 3 / 4 ? 0.1f : 1.0f);
        std::shuffle(order.begin(), order.end(), rng);
        for (int b = 0; b < nb; ++b) {
            std::vector<Sample> batch;
            std::vector<int> pt(B);
            std::vector<float> vt(B);
            for (int i = 0; i < B; ++i) {
                const Sample& s = pool[order[b * B + i]];
                batch.push_back(s);
                pt[i] = s.policy_target;
                vt[i] = s.value_target;
            }
            auto out = net.forward(batch_input(batch), RunMode::Train);
            auto loss = compute_loss(out.policy, out.value, pt, vt, cfg, 0.0);
            net.zero_grads();
            net.backward(loss.dpolicy, loss.dvalue);
            net.sgd_step(lr, 0.9f, 0.0f);
        }
        used_passes = pass + 1;
        if (pass >= 99 && pass % 10 == 9) {
            Metrics m = evaluate(net, pool);
            acc = m.val_accuracy;
            mse = m.val_mse;
            if (acc >= 0.95 && mse <= 0.05) break;
        }
    }
    if (used_passes == passes) {
        Metrics m = evaluate(net, pool);
        acc = m.val_accuracy;
        mse = m.val_mse;
    }
    double el = seconds_since(t0);
    bool ok = acc >= 0.95 && mse <= 0.05 && el < 600.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "acc %.3f mse %.4f after %d passes, %.0fs",
                  acc, mse, used_passes, el);
    report(6, "toy overfit convergence", ok, buf);
}

// ---------------------------------------------------------------- 7

// Fixed-orientation sampling: the heuristic corpus prefers the lowest flat
// index among equally ranked moves, a convention that symmetry augmentation
// erases, stalling both families at the uniform policy.
double short_training_accuracy(const std::string& spec, std::uint64_t seed,
                               const Corpus& train, const std::vector<Sample>& val,
                               int steps) {
    Network net(parse_spec_name(spec, 9), seed);
    TrainConfig cfg;
    cfg.l2_weight = 1e-4f;
    std::mt19937_64 rng(seed * 977 + 13);
    std::uniform_int_distribution<std::int64_t> sd(0, train.num_states() - 1);
    const int B = 32;
    for (int step = 0; step < steps; ++step) {
        float lr = step < steps * 3 / 4 ? 0.05f : 0.005f;
        std::vector<Sample> batch;
        std::vector<int> pt(B);
        std::vector<float> vt(B);
        for (int i = 0; i < B; ++i) {
            StateRef ref = locate_state(train, sd(rng));
            batch.push_back(make_sample(train.games[ref.game], ref.ply, Symmetry{0}));
            pt[i] = batch[i].policy_target;
            vt[i] = batch[i].value_target;
        }
        auto out = net.forward(batch_input(batch), RunMode::Train);
        auto loss = compute_loss(out.policy, out.value, pt, vt, cfg, 0.0);
        net.zero_grads();
        net.backward(loss.dpolicy, loss.dvalue);
        net.sgd_step(lr, 0.9f, cfg.l2_weight);
    }
    return evaluate(net, val).val_accuracy;
}

void criterion_capacity() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(701);
    std::vector<GameRecord> games;
    Corpus all;
    while (all.num_states() < 50'000) {
        for (int i = 0; i < 100; ++i) games.push_back(heuristic_game(9, rng));
        all = make_corpus(games);
    }
    Split sp = split(all, 40, 11);
    // split() keeps one sample per holdout game; accuracy over 40 samples is
    // too coarse for a 1-point comparison, so sample the holdout games densely.
    std::vector<Sample> val;
    for (int id : sp.holdout_game_ids) {
        const GameRecord& g = all.games[id];
        for (int ply = 0; ply < int(g.moves.size()) && val.size() < 1000; ply += 2) {
            if (g.moves[ply].is_pass()) continue;
            val.push_back(make_sample(g, ply, Symmetry{0}));
        }
    }

    // Each family with its usual heads at an equal ~59k budget.
    const std::string az_spec = "a0.3.28", mb_spec = "mobile.conv.avg.3.230.32";
    const std::int64_t az_params = count_params(parse_spec_name(az_spec, 9).spec);
    const std::int64_t mb_params = count_params(parse_spec_name(mb_spec, 9).spec);
    const int steps = 600;
    double az_sum = 0.0, mb_sum = 0.0;
    std::string detail;
    char buf[64];
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        double az = short_training_accuracy(az_spec, seed, sp.train, val, steps);
        double mb = short_training_accuracy(mb_spec, seed, sp.train, val, steps);
        az_sum += az;
        mb_sum += mb;
        std::snprintf(buf, sizeof buf, "seed%llu az %.3f mobile %.3f; ",
                      (unsigned long long)seed, az, mb);
        detail += buf;
    }
    double az_acc = az_sum / 3.0, mb_acc = mb_sum / 3.0;
    double el = seconds_since(t0);
    bool ok = mb_acc >= az_acc - 0.01;
    std::snprintf(buf, sizeof buf, "mean az %.3f mobile %.3f (%lld vs %lld params, %.0fs)",
                  az_acc, mb_acc, (long long)az_params, (long long)mb_params, el);
    report(7, "relative capacity direction", ok, detail + buf);
}

// ---------------------------------------------------------------- 8

void criterion_search() {
    bool ok = true;
    std::string detail;

    UniformEvaluator ev;
    SearchConfig cfg;
    cfg.max_evaluations = 400;
    Position p(9);
    SearchResult r = puct_search(p, ev, cfg);
    std::int64_t child_sum = 0;
    for (const RankedMove& m : r.moves) child_sum += m.visits;
    // Every evaluation lands on exactly one node: root once, children the rest.
    if (r.evaluations != 400 || child_sum != 399) {
        ok = false;
        detail += "visit conservation broken; ";
    }
    for (std::size_t i = 1; i < r.moves.size(); ++i)
        if (r.moves[i - 1].visits < r.moves[i].visits) ok = false;

    // Determinism under a fixed budget.
    SearchResult r2 = puct_search(p, ev, cfg);
    if (r2.evaluations != r.evaluations || r2.moves.size() != r.moves.size()) ok = false;
    else
        for (std::size_t i = 0; i < r.moves.size(); ++i)
            if (!(r.moves[i].move == r2.moves[i].move) ||
                r.moves[i].visits != r2.moves[i].visits)
                ok = false;

    // Randomization rule on synthetic results.
    auto synthetic = [](int n1, int n2) {
        SearchResult s;
        s.moves.push_back({Move::at(0), n1, 0.5f, 0.5});
        s.moves.push_back({Move::at(1), n2, 0.4f, 0.5});
        return s;
    };
    std::mt19937_64 rng(801);
    SearchResult coin = synthetic(100, 60);
    int second = 0;
    for (int i = 0; i < 10'000; ++i)
        if (select_move(coin, true, rng) == Move::at(1)) ++second;
    double freq = second / 10'000.0;
    if (std::abs(freq - 0.5) > 0.015) {
        ok = false;
        detail += "coin flip freq off; ";
    }
    SearchResult fixed = synthetic(100, 50);
    for (int i = 0; i < 1'000; ++i)
        if (!(select_move(fixed, true, rng) == Move::at(0))) ok = false;

    char buf[64];
    std::snprintf(buf, sizeof buf, "children %lld/399, flip freq %.3f",
                  (long long)child_sum, freq);
    report(8, "search invariants", ok, detail + buf);
}

// ---------------------------------------------------------------- 9

// Independent area scorer: stones count for their color; an empty region
// counts for a color iff it borders only that color.
double flood_fill_score(const Position& p, double komi) {
    int n = p.num_points(), size = p.size();
    std::vector<bool> seen(n, false);
    double black = 0, white = 0;
    for (int i = 0; i < n; ++i) {
        if (p.at(i) == Color::Black) black += 1;
        if (p.at(i) == Color::White) white += 1;
    }
    for (int start = 0; start < n; ++start) {
        if (seen[start] || p.at(start) != Color::Empty) continue;
        std::queue<int> q;
        q.push(start);
        seen[start] = true;
        std::vector<int> region;
        bool touches_black = false, touches_white = false;
        while (!q.empty()) {
            int i = q.front();
            q.pop();
            region.push_back(i);
            int r = i / size, c = i % size;
            const int dr[] = {-1, 1, 0, 0}, dc[] = {0, 0, -1, 1};
            for (int d = 0; d < 4; ++d) {
                int rr = r + dr[d], cc = c + dc[d];
                if (rr < 0 || rr >= size || cc < 0 || cc >= size) continue;
                int j = rr * size + cc;
                if (p.at(j) == Color::Black) touches_black = true;
                else if (p.at(j) == Color::White) touches_white = true;
                else if (!seen[j]) {
                    seen[j] = true;
                    q.push(j);
                }
            }
        }
        if (touches_black && !touches_white) black += double(region.size());
        if (touches_white && !touches_black) white += double(region.size());
    }
    return white - black + komi;
}

void criterion_rules() {
    auto t0 = Clock::now();
    std::mt19937_64 rng(901);
    bool ok = true;
    int score_checked = 0;
    long long moves_played = 0;
    for (int g = 0; g < 10'000 && ok; ++g) {
        Position p(9);
        std::set<std::uint64_t> seen{p.stone_hash()};
        int guard = 0, limit = 60 + int(rng() % 190);
        while (!p.game_over() && guard++ < limit) {
            Move m = random_legal_move(p, rng);
            p = p.play(m);
            ++moves_played;
            if (!m.is_pass()) {
                if (seen.count(p.stone_hash())) { ok = false; break; }
                seen.insert(p.stone_hash());
                BoardAnalysis a = analyze(p);
                for (int s = 0; s < a.num_strings(); ++s)
                    if (a.string_liberties[s] <= 0) ok = false;
            }
        }
        // Terminal position: both sides pass out at a random fill level.
        if (ok && score_checked < 200) {
            while (!p.game_over()) p = p.play(Move::pass());
            double want = flood_fill_score(p, 7.5);
            if (std::abs(p.tromp_taylor_score(7.5) - want) > 1e-9) ok = false;
            ++score_checked;
        }
    }
    double el = seconds_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof buf, "10000 games, %lld moves, %d scores checked, %.0fs",
                  moves_played, score_checked, el);
    report(9, "rules suite", ok && score_checked >= 200, buf);
}

// ---------------------------------------------------------------- 10

void criterion_throughput() {
    auto t0 = Clock::now();
    bool ok = true;
    std::string detail;
    for (const char* name : {"a0.2.8", "mobile.conv.avg.bin.2.24.8"}) {
        Network net(parse_spec_name(name, 9), 5);
        // Infer processes at most 512 states per chunk, so the live footprint
        // is the input tensor plus one chunk of layer activations. Cap the
        // batch list where that estimate would exceed 2 GB rather than
        // waiting for the OOM killer.
        std::int64_t per_state = 0;
        for (const LayerDesc& l : net.graph().layers)
            per_state += std::int64_t(std::max(l.out_ch, 1)) * 81 * 4;
        std::vector<int> batches;
        for (int b : {16, 64, 256, 1024, 4096, 16384, 65536}) {
            std::int64_t footprint =
                std::int64_t(b) * 21 * 81 * 4 + per_state * std::min(b, 512);
            if (footprint < std::int64_t(2) << 30) batches.push_back(b);
        }
        // Non-decreasing up to a 7% timing allowance; a steal burst on this
        // shared core can outlast every timing window, so the measurement
        // gets up to three attempts.
        std::map<int, double> rate;
        bool monotone = false;
        for (int attempt = 0; attempt < 3 && !monotone; ++attempt) {
            SpeedReport rep = throughput_bench(net, batches, "cpu", 400, 7);
            if (rep.rows.size() != batches.size()) { ok = false; break; }
            rate.clear();
            for (const SpeedRow& row : rep.rows) {
                if (!row.ok || row.states_per_sec <= 0.0 || row.name.empty()) ok = false;
                rate[row.batch] = row.states_per_sec;
            }
            monotone = true;
            double prev = 0.0;
            for (int b : {16, 64, 256, 1024, 4096}) {
                if (!rate.count(b)) { monotone = false; continue; }
                if (rate[b] < prev * 0.93) monotone = false;
                prev = std::max(prev, rate[b]);
            }
        }
        if (!monotone) ok = false;
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s 16:%.0f 4096:%.0f max_batch:%d; ", name,
                      rate.count(16) ? rate[16] : 0.0, rate.count(4096) ? rate[4096] : 0.0,
                      batches.back());
        detail += buf;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0fs", seconds_since(t0));
    report(10, "throughput protocol", ok, detail + buf);
}

// ---------------------------------------------------------------- 11

void criterion_roundtrip_gtp() {
    std::mt19937_64 rng(1101);
    std::vector<GameRecord> games;
    games.reserve(1000);
    for (int i = 0; i < 1000; ++i) games.push_back(random_game(9, rng, 120));
    Corpus c = make_corpus(std::move(games));
    std::string path = "/tmp/tenuki_acceptance_cache.bin";
    write_cache(c, path);
    Corpus back = read_cache(path);
    std::remove(path.c_str());
    bool cache_ok = back == c;

    // Scripted GTP session, checked against a reference replay each command.
    UniformEvaluator ev;
    EngineSession session(ev, 5, false);
    Position ref(9);
    int commands = 0;
    bool gtp_ok = true;
    auto send = [&](const std::string& line) {
        ++commands;
        std::string resp = session.handle(line);
        if (resp.size() < 2 || resp[0] != '=' || resp.back() != '\n') gtp_ok = false;
        return resp.substr(2, resp.size() - 4);
    };
    auto in_sync = [&]() {
        if (session.position().stones() != ref.stones()) gtp_ok = false;
        if (session.position().to_move() != ref.to_move()) gtp_ok = false;
    };
    send("protocol_version");
    send("name");
    send("version");
    send("boardsize 9");
    send("clear_board");
    send("komi 7.5");
    in_sync();
    std::mt19937_64 grng(1102);
    const char* cols = "ABCDEFGHJ";
    while (commands < 49 && !ref.game_over()) {
        if (grng() % 3 == 0) {
            std::string v = send("genmove " + std::string(ref.to_move() == Color::Black
                                                              ? "black" : "white"));
            if (v == "pass") ref = ref.play(Move::pass());
            else {
                auto m = vertex_to_move(v, 9);
                if (!m || ref.check(*m) != RuleCheck::Legal) { gtp_ok = false; break; }
                ref = ref.play(*m);
            }
        } else {
            Move m = random_legal_move(ref, grng);
            if (m.is_pass()) break;
            std::string v = std::string(1, cols[m.point % 9]) +
                            std::to_string(9 - m.point / 9);
            send(std::string("play ") +
                 (ref.to_move() == Color::Black ? "black " : "white ") + v);
            ref = ref.play(m);
        }
        in_sync();
    }
    send("quit");
    bool ok = cache_ok && gtp_ok && commands >= 50;
    char buf[96];
    std::snprintf(buf, sizeof buf, "cache %s, gtp %s over %d commands",
                  cache_ok ? "ok" : "mismatch", gtp_ok ? "in sync" : "desync", commands);
    report(11, "cache round trip and gtp session", ok, buf);
}

}  // namespace

int main() {
    criterion_params();
    criterion_sigma();
    criterion_lr();
    criterion_equivariance();
    criterion_ladders();
    criterion_overfit();
    criterion_capacity();
    criterion_search();
    criterion_rules();
    criterion_throughput();
    criterion_roundtrip_gtp();
    std::printf("%s (%d/11 criteria)\n", failures == 0 ? "ALL PASS" : "FAILURES",
                11 - failures);
    return failures;
}
