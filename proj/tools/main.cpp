#include <filesystem>
#include <fstream>
#include <map>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tenuki/arena.hpp"
#include "tenuki/gtp.hpp"
#include "tenuki/training.hpp"

namespace fs = std::filesystem;
using namespace tenuki;

namespace {

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(tok);
    return out;
}

int cmd_ingest(const std::string& sgf_dir, const std::string& out) {
    std::cout << "ingest: sgf-dir=" << sgf_dir << " out=" << out << "\n";
    std::vector<GameRecord> games;
    std::size_t rejected = 0;
    std::map<std::string, int> reasons;
    for (const auto& entry : fs::recursive_directory_iterator(sgf_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".sgf") continue;
        std::ifstream f(entry.path());
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        try {
            games.push_back(parse_sgf(text));
        } catch (const SgfReject& e) {
            ++rejected;
            ++reasons[e.reason()];
        }
    }
    if (games.empty()) throw std::runtime_error("no usable games found under " + sgf_dir);
    int size = games[0].size;
    std::erase_if(games, [&](const GameRecord& g) {
        if (g.size != size) { ++rejected; ++reasons["size mismatch"]; return true; }
        return false;
    });
    Corpus c = make_corpus(std::move(games));
    write_cache(c, out);
    std::cout << "accepted " << c.games.size() << " games (" << c.num_states()
              << " states), rejected " << rejected << "\n";
    for (const auto& [reason, count] : reasons)
        std::cout << "  rejected " << count << ": " << reason << "\n";
    return 0;
}

int cmd_split(const std::string& cache, int holdout, std::uint64_t seed,
              const std::string& out_train) {
    std::cout << "split: cache=" << cache << " holdout=" << holdout << " seed=" << seed << "\n";
    Corpus c = read_cache(cache);
    Split s = split(c, holdout, seed);
    std::cout << "train games: " << s.train.games.size()
              << ", validation samples: " << s.validation.size() << "\n";
    if (!out_train.empty()) {
        write_cache(s.train, out_train);
        std::cout << "train cache written to " << out_train << "\n";
    }
    return 0;
}

int cmd_train(const std::string& cache, const std::string& spec_str, const std::string& value_loss,
              double value_weight, int batch, std::int64_t epoch_samples, int epochs,
              int holdout, std::uint64_t seed, double momentum, double lr,
              const std::string& out, const std::string& log, bool vl_given, bool vw_given) {
    NamedSpec named = parse_spec_name(spec_str);
    TrainConfig cfg;
    cfg.value_loss = vl_given ? (value_loss == "bce" ? ValueLoss::Bce : ValueLoss::Mse)
                              : named.value_loss;
    cfg.value_weight = vw_given ? static_cast<float>(value_weight) : named.value_weight;
    cfg.batch_size = batch;
    cfg.epoch_samples = epoch_samples;
    cfg.total_epochs = epochs;
    cfg.seed = seed;
    cfg.momentum = static_cast<float>(momentum);
    if (lr > 0) cfg.schedule = {{0, static_cast<float>(lr)}};
    std::cout << "train: cache=" << cache << " spec=" << spec_name(named)
              << " value-loss=" << value_loss << " value-weight=" << value_weight
              << " batch=" << batch << " epoch-samples=" << epoch_samples
              << " epochs=" << epochs << " holdout=" << holdout << " seed=" << seed
              << " momentum=" << momentum << " out=" << out << " log=" << log << "\n";

    Corpus c = read_cache(cache);
    if (c.games.empty()) throw std::runtime_error("empty cache");
    named.spec.board = c.games[0].size;
    Split s = split(c, holdout, seed);

    std::ofstream csv;
    if (!log.empty()) csv.open(log, std::ios::trunc);
    TrainResult r = tenuki::train(named.spec, s, cfg, out, log.empty() ? nullptr : &csv);
    if (!r.log.empty()) {
        const Metrics& m = r.log.back();
        std::cout << "final: policy_loss=" << m.policy_loss << " val_accuracy=" << m.val_accuracy
                  << " val_mse=" << m.val_mse << "\n";
    }
    return 0;
}

int cmd_eval(const std::string& ckpt, const std::string& cache, int holdout, std::uint64_t seed) {
    std::cout << "eval: ckpt=" << ckpt << " cache=" << cache << " holdout=" << holdout
              << " seed=" << seed << "\n";
    Network net = Network::load(ckpt);
    Corpus c = read_cache(cache);
    Split s = split(c, holdout, seed);
    Metrics m = evaluate(net, s.validation);
    std::cout << "val_accuracy=" << m.val_accuracy << " val_mse=" << m.val_mse << " over "
              << s.validation.size() << " samples\n";
    return 0;
}

int cmd_bench(const std::string& ckpt, const std::string& spec_str, const std::string& batches,
              const std::string& device, int duration_ms) {
    std::vector<int> sizes;
    for (const auto& b : split_commas(batches)) sizes.push_back(std::stoi(b));
    std::cout << "bench: " << (ckpt.empty() ? "spec=" + spec_str : "ckpt=" + ckpt)
              << " batches=" << batches << " device=" << device
              << " duration-ms=" << duration_ms << "\n";
    Network net = ckpt.empty() ? Network(parse_spec_name(spec_str)) : Network::load(ckpt);
    SpeedReport r = throughput_bench(net, sizes, device, duration_ms);
    write_speed_csv(std::cout, r);
    return 0;
}

int cmd_tournament(const std::string& ckpts, int games, int movetime, std::int64_t evals,
                   std::uint64_t seed) {
    auto paths = split_commas(ckpts);
    if (paths.size() < 2) throw CLI::ValidationError("tournament needs at least two checkpoints");
    std::cout << "tournament: ckpts=" << ckpts << " games=" << games << " movetime=" << movetime
              << " evals=" << evals << " seed=" << seed << "\n";
    std::vector<Network> nets;
    nets.reserve(paths.size());
    for (const auto& p : paths) nets.push_back(Network::load(p));
    std::vector<NetEvaluator> evals_v;
    evals_v.reserve(nets.size());
    for (auto& n : nets) evals_v.emplace_back(n);
    std::vector<TournamentEntry> entries;
    for (std::size_t i = 0; i < nets.size(); ++i)
        entries.push_back({spec_name(nets[i].named()) + "#" + std::to_string(i), &evals_v[i]});
    SearchConfig budget;
    budget.max_millis = evals > 0 ? 0 : movetime;
    budget.max_evaluations = evals;
    TournamentTable t = round_robin(entries, games, budget, seed, nets[0].spec().board);
    write_tournament_csv(std::cout, t);
    return 0;
}

int cmd_gtp(const std::string& ckpt, int movetime, bool randomize) {
    Network net = Network::load(ckpt);
    NetEvaluator ev(net);
    EngineSession session(ev, movetime, randomize);
    session.run(std::cin, std::cout);
    return 0;
}

int cmd_encode_dump(const std::string& cache, int game, int ply) {
    std::cout << "encode-dump: cache=" << cache << " game=" << game << " ply=" << ply << "\n";
    Corpus c = read_cache(cache);
    if (game < 0 || game >= static_cast<int>(c.games.size()))
        throw std::runtime_error("game index out of range");
    Sample s = make_sample(c.games[game], ply, Symmetry{0});
    int size = s.input.size;
    for (int pl = 0; pl < kInputPlanes; ++pl) {
        std::cout << "plane " << pl << ":\n";
        for (int r = 0; r < size; ++r) {
            for (int col = 0; col < size; ++col)
                std::cout << (s.input.at(pl, r * size + col) ? '1' : '.');
            std::cout << "\n";
        }
    }
    std::cout << "policy_target=" << s.policy_target << " value_target=" << s.value_target << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"supervised-learning computer Go stack"};
    app.require_subcommand(1);

    std::string sgf_dir, cache, out, log, spec_str, ckpt, ckpts, batches, device = "CPU";
    std::string value_loss = "mse", out_train;
    int holdout = 0, batch = 256, epochs = 200, games = 2, movetime = 1000, duration_ms = 500;
    int game = 0, ply = 0;
    std::int64_t epoch_samples = 1'000'000, evals = 0;
    double value_weight = 1.0, momentum = 0.0, lr = 0.0;
    std::uint64_t seed = 1;
    bool randomize = false;

    auto* ingest = app.add_subcommand("ingest", "parse an SGF directory into a binary cache");
    ingest->add_option("--sgf-dir", sgf_dir)->required();
    ingest->add_option("--out", out)->required();

    auto* sp = app.add_subcommand("split", "train/validation split of a cache");
    sp->add_option("--cache", cache)->required();
    sp->add_option("--holdout", holdout)->required();
    sp->add_option("--seed", seed);
    sp->add_option("--out-train", out_train);

    auto* tr = app.add_subcommand("train", "supervised training");
    tr->add_option("--cache", cache)->required();
    tr->add_option("--spec", spec_str)->required();
    tr->add_option("--value-loss", value_loss)->check(CLI::IsMember({"mse", "bce"}));
    tr->add_option("--value-weight", value_weight);
    tr->add_option("--batch", batch);
    tr->add_option("--epoch-samples", epoch_samples);
    tr->add_option("--epochs", epochs);
    tr->add_option("--holdout", holdout);
    tr->add_option("--seed", seed);
    tr->add_option("--momentum", momentum);
    tr->add_option("--lr", lr, "override the schedule with a constant rate");
    tr->add_option("--out", out)->required();
    tr->add_option("--log", log);

    auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on a held-out split");
    ev->add_option("--ckpt", ckpt)->required();
    ev->add_option("--cache", cache)->required();
    ev->add_option("--holdout", holdout)->default_val(100);
    ev->add_option("--seed", seed);

    auto* cp = app.add_subcommand("count-params", "parameter count for a spec name");
    cp->add_option("--spec", spec_str)->required();

    auto* be = app.add_subcommand("bench", "inference throughput benchmark");
    be->add_option("--ckpt", ckpt);
    be->add_option("--spec", spec_str);
    be->add_option("--batches", batches)->default_val("16,64,256,1024,4096");
    be->add_option("--device", device);
    be->add_option("--duration-ms", duration_ms);

    auto* to = app.add_subcommand("tournament", "round-robin tournament between checkpoints");
    to->add_option("--ckpts", ckpts)->required();
    to->add_option("--games", games);
    to->add_option("--movetime", movetime);
    to->add_option("--evals", evals, "evaluation budget per move instead of time");
    to->add_option("--seed", seed);

    auto* gt = app.add_subcommand("gtp", "GTP v2 engine on stdin/stdout");
    gt->add_option("--ckpt", ckpt)->required();
    gt->add_option("--movetime", movetime);
    gt->add_flag("--randomize", randomize);

    auto* ed = app.add_subcommand("encode-dump", "print the input planes for one state");
    ed->add_option("--cache", cache)->required();
    ed->add_option("--game", game)->required();
    ed->add_option("--ply", ply)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(sgf_dir, out);
        if (sp->parsed()) return cmd_split(cache, holdout, seed, out_train);
        if (tr->parsed())
            return cmd_train(cache, spec_str, value_loss, value_weight, batch, epoch_samples,
                             epochs, holdout, seed, momentum, lr, out, log,
                             tr->count("--value-loss") > 0, tr->count("--value-weight") > 0);
        if (ev->parsed()) return cmd_eval(ckpt, cache, holdout, seed);
        if (cp->parsed()) {
            std::cout << count_params(parse_spec_name(spec_str).spec) << "\n";
            return 0;
        }
        if (be->parsed()) {
            if (ckpt.empty() && spec_str.empty())
                throw CLI::ValidationError("bench needs --ckpt or --spec");
            return cmd_bench(ckpt, spec_str, batches, device, duration_ms);
        }
        if (to->parsed()) return cmd_tournament(ckpts, games, movetime, evals, seed);
        if (gt->parsed()) return cmd_gtp(ckpt, movetime, randomize);
        if (ed->parsed()) return cmd_encode_dump(cache, game, ply);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
