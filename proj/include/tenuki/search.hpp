#pragma once

#include <condition_variable>
#include <future>
#include <mutex>
#include <random>
#include <vector>

#include "tenuki/goban.hpp"
#include "tenuki/network.hpp"

namespace tenuki {

struct Evaluation {
    std::vector<float> policy;  // size*size entries, probabilities
    float value = 0.5f;         // P(White wins)
};

class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual Evaluation evaluate(const Position& p) = 0;
};

// Direct single-state evaluation through a network.
class NetEvaluator : public Evaluator {
public:
    explicit NetEvaluator(const Network& net) : net_(net) {}
    Evaluation evaluate(const Position& p) override;

private:
    const Network& net_;
};

struct SearchConfig {
    double c_puct = 1.25;
    double fpu_q = 0.0;  // Q assigned to unvisited children
    std::int64_t max_evaluations = 0;  // 0 = unlimited
    int max_millis = 0;                // 0 = unlimited
};

struct RankedMove {
    Move move;
    int visits = 0;
    float prior = 0.0f;
    double q = 0.0;  // root-to-move win expectation, 0 when unvisited
};

struct SearchResult {
    std::vector<RankedMove> moves;  // sorted by visits desc, flat index tie-break
    double root_value = 0.5;        // root-to-move perspective
    std::int64_t evaluations = 0;
};

SearchResult puct_search(const Position& p, Evaluator& net, const SearchConfig& cfg);

// Tournament move choice: the second-most-visited move is a candidate when
// its visits exceed half of the best move's, and is then taken with
// probability one half.
Move select_move(const SearchResult& r, bool randomize, std::mt19937_64& rng);

// Multiplexes evaluation requests from concurrently played games into one
// forward pass of up to max_batch states.
class BatchedEvaluator : public Evaluator {
public:
    BatchedEvaluator(const Network& net, int max_batch);
    ~BatchedEvaluator() override;

    void register_client();
    void deregister_client();

    Evaluation evaluate(const Position& p) override;
    void shutdown();

    double mean_batch_size() const;
    std::int64_t states_evaluated() const;

private:
    struct Request {
        Tensor input;  // {1, planes, S, S}
        std::promise<Evaluation> result;
    };

    void flush_locked(std::unique_lock<std::mutex>& lock);

    const Network& net_;
    int max_batch_;
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::vector<Request> pending_;
    int clients_ = 0;
    bool down_ = false;
    std::int64_t total_states_ = 0;
    std::int64_t total_batches_ = 0;
};

}  // namespace tenuki
