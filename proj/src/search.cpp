#include "tenuki/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "tenuki/training.hpp"

namespace tenuki {

namespace {

Tensor encode_one(const Position& p) {
    Sample s;
    s.input = encode(p);
    return batch_input({s});
}

Evaluation output_to_eval(const Network::Output& out, int row, int points) {
    Evaluation e;
    e.policy.assign(out.policy.data() + static_cast<std::int64_t>(row) * points,
                    out.policy.data() + static_cast<std::int64_t>(row + 1) * points);
    e.value = out.value.v[row];
    return e;
}

struct Node {
    explicit Node(Position position) : pos(std::move(position)) {}

    Position pos;
    int n = 0;
    double w = 0.0;  // node-to-move perspective
    bool expanded = false;
    bool terminal = false;
    float terminal_value = 0.5f;  // P(White wins)

    struct Child {
        Move move;
        float prior = 0.0f;
        int n = 0;
        double w = 0.0;  // parent-to-move perspective
        std::unique_ptr<Node> node;
    };
    std::vector<Child> children;
};

int move_order_index(Move m, int size) {
    return m.is_pass() ? size * size : m.point;
}

// Returns P(White wins) at this node; counts net evaluations.
float expand(Node& node, Evaluator& net, std::int64_t& evaluations) {
    node.expanded = true;
    if (node.pos.game_over()) {
        node.terminal = true;
        node.terminal_value = node.pos.tromp_taylor_score() > 0 ? 1.0f : 0.0f;
        return node.terminal_value;
    }
    Evaluation e = net.evaluate(node.pos);
    ++evaluations;

    auto legal = node.pos.legal_moves();
    float min_prior = 1.0f;
    bool any_point = false;
    for (const auto& m : legal) {
        if (m.is_pass()) continue;
        any_point = true;
        min_prior = std::min(min_prior, e.policy[m.point]);
    }
    double total = 0.0;
    node.children.reserve(legal.size());
    for (const auto& m : legal) {
        float prior = m.is_pass() ? (any_point ? min_prior : 1.0f) : e.policy[m.point];
        node.children.push_back({m, prior, 0, 0.0, nullptr});
        total += prior;
    }
    if (total > 0.0)
        for (auto& c : node.children) c.prior = static_cast<float>(c.prior / total);
    else
        for (auto& c : node.children) c.prior = 1.0f / static_cast<float>(node.children.size());
    return e.value;
}

}  // namespace

Evaluation NetEvaluator::evaluate(const Position& p) {
    auto out = net_.forward_infer(encode_one(p));
    return output_to_eval(out, 0, p.num_points());
}

SearchResult puct_search(const Position& p, Evaluator& net, const SearchConfig& cfg) {
    if (p.game_over()) throw ConfigError("cannot search a terminated position");
    if (cfg.max_evaluations <= 0 && cfg.max_millis <= 0)
        throw ConfigError("search needs an evaluation or time budget");

    auto start = std::chrono::steady_clock::now();
    auto out_of_time = [&] {
        if (cfg.max_millis <= 0) return false;
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start).count();
        return ms >= cfg.max_millis;
    };

    Node root(p);
    std::int64_t evaluations = 0;
    // Terminal playouts are free; bound them so the loop always ends.
    std::int64_t max_sims = cfg.max_evaluations > 0 ? cfg.max_evaluations * 100
                                                    : std::numeric_limits<std::int64_t>::max();

    for (std::int64_t sim = 0; sim < max_sims; ++sim) {
        if (cfg.max_evaluations > 0 && evaluations >= cfg.max_evaluations) break;
        if (out_of_time()) break;

        Node* node = &root;
        std::vector<std::pair<Node*, Node::Child*>> path;
        float v;  // P(White wins)
        for (;;) {
            if (!node->expanded) {
                v = expand(*node, net, evaluations);
                break;
            }
            if (node->terminal) {
                v = node->terminal_value;
                break;
            }
            Node::Child* best = nullptr;
            double best_score = -1.0;
            double sqrt_n = std::sqrt(static_cast<double>(std::max(node->n, 1)));
            for (auto& c : node->children) {
                double q = c.n > 0 ? c.w / c.n : cfg.fpu_q;
                double score = q + cfg.c_puct * c.prior * sqrt_n / (1.0 + c.n);
                if (score > best_score) { best_score = score; best = &c; }
            }
            if (!best->node) best->node = std::make_unique<Node>(node->pos.play(best->move));
            path.emplace_back(node, best);
            node = best->node.get();
        }

        node->n += 1;
        node->w += node->pos.to_move() == Color::White ? v : 1.0f - v;
        for (auto& [parent, child] : path) {
            parent->n += 1;
            parent->w += parent->pos.to_move() == Color::White ? v : 1.0f - v;
            child->n += 1;
            child->w += parent->pos.to_move() == Color::White ? v : 1.0f - v;
        }
        // Node counting: a parent's visits exceed its children's total by the
        // one evaluation made when the parent itself was expanded.
    }

    SearchResult r;
    r.evaluations = evaluations;
    if (root.n > 0) r.root_value = root.w / root.n;
    int size = p.size();
    for (const auto& c : root.children) {
        RankedMove rm;
        rm.move = c.move;
        rm.visits = c.n;
        rm.prior = c.prior;
        rm.q = c.n > 0 ? c.w / c.n : 0.0;
        r.moves.push_back(rm);
    }
    std::sort(r.moves.begin(), r.moves.end(), [size](const RankedMove& a, const RankedMove& b) {
        if (a.visits != b.visits) return a.visits > b.visits;
        if (a.prior != b.prior) return a.prior > b.prior;
        return move_order_index(a.move, size) < move_order_index(b.move, size);
    });
    return r;
}

Move select_move(const SearchResult& r, bool randomize, std::mt19937_64& rng) {
    if (r.moves.empty()) throw ConfigError("empty search result");
    if (!randomize || r.moves.size() < 2) return r.moves[0].move;
    // Candidate rule: second best needs more than half the best move's visits.
    if (2 * r.moves[1].visits > r.moves[0].visits) {
        if (std::uniform_real_distribution<double>(0.0, 1.0)(rng) < 0.5) return r.moves[1].move;
    }
    return r.moves[0].move;
}

BatchedEvaluator::BatchedEvaluator(const Network& net, int max_batch)
    : net_(net), max_batch_(max_batch) {
    if (max_batch < 1) throw ConfigError("max_batch must be >= 1");
}

BatchedEvaluator::~BatchedEvaluator() { shutdown(); }

void BatchedEvaluator::register_client() {
    std::lock_guard<std::mutex> lock(mu_);
    ++clients_;
}

void BatchedEvaluator::deregister_client() {
    std::unique_lock<std::mutex> lock(mu_);
    clients_ = std::max(0, clients_ - 1);
    // Remaining requesters may now form a full batch.
    int threshold = std::min(std::max(clients_, 1), max_batch_);
    if (!pending_.empty() && static_cast<int>(pending_.size()) >= threshold) flush_locked(lock);
    cv_.notify_all();
}

void BatchedEvaluator::flush_locked(std::unique_lock<std::mutex>& lock) {
    std::vector<Request> batch;
    int take = std::min<int>(max_batch_, static_cast<int>(pending_.size()));
    batch.reserve(take);
    for (int i = 0; i < take; ++i) batch.push_back(std::move(pending_[i]));
    pending_.erase(pending_.begin(), pending_.begin() + take);
    total_states_ += take;
    total_batches_ += 1;
    lock.unlock();

    const int planes = batch[0].input.shape[1];
    const int S = batch[0].input.shape[2];
    Tensor joined({take, planes, S, S});
    std::int64_t per = static_cast<std::int64_t>(planes) * S * S;
    for (int i = 0; i < take; ++i)
        std::copy(batch[i].input.v.begin(), batch[i].input.v.end(), joined.data() + i * per);
    auto out = net_.forward_infer(joined);
    for (int i = 0; i < take; ++i)
        batch[i].result.set_value(output_to_eval(out, i, S * S));

    lock.lock();
}

Evaluation BatchedEvaluator::evaluate(const Position& p) {
    std::future<Evaluation> fut;
    {
        std::unique_lock<std::mutex> lock(mu_);
        if (down_) throw std::runtime_error("evaluator is shut down");
        Request req;
        req.input = encode_one(p);
        fut = req.result.get_future();
        pending_.push_back(std::move(req));
        int threshold = std::min(std::max(clients_, 1), max_batch_);
        if (static_cast<int>(pending_.size()) >= threshold) {
            flush_locked(lock);
            cv_.notify_all();
        }
    }
    // Fallback flush keeps things live if a peer deregisters mid-wait.
    while (fut.wait_for(std::chrono::milliseconds(50)) != std::future_status::ready) {
        std::unique_lock<std::mutex> lock(mu_);
        if (!pending_.empty()) {
            flush_locked(lock);
            cv_.notify_all();
        }
    }
    return fut.get();
}

void BatchedEvaluator::shutdown() {
    std::unique_lock<std::mutex> lock(mu_);
    if (down_) return;
    down_ = true;
    for (auto& req : pending_) {
        req.result.set_exception(
            std::make_exception_ptr(std::runtime_error("evaluator shut down with request pending")));
    }
    pending_.clear();
    cv_.notify_all();
}

double BatchedEvaluator::mean_batch_size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return total_batches_ == 0 ? 0.0 : static_cast<double>(total_states_) / total_batches_;
}

std::int64_t BatchedEvaluator::states_evaluated() const {
    std::lock_guard<std::mutex> lock(mu_);
    return total_states_;
}

}  // namespace tenuki
