#include <cstdio>
#include <random>

#include "doctest.h"
#include "tenuki/network.hpp"

using namespace tenuki;

namespace {

Tensor random_input(int B, int planes, int S, std::mt19937_64& rng) {
    Tensor t({B, planes, S, S});
    std::bernoulli_distribution bit(0.15);
    for (auto& v : t.v) v = bit(rng) ? 1.0f : 0.0f;
    return t;
}

NamedSpec tiny_mobile(int board) {
    NamedSpec n = parse_spec_name("mobile.conv.avg.bin.2.24.8", board);
    return n;
}

NamedSpec tiny_az(int board) {
    return parse_spec_name("a0.2.8", board);
}

}  // namespace

TEST_CASE("forward output shapes and simplex property") {
    std::mt19937_64 rng(41);
    for (auto named : {tiny_mobile(9), tiny_az(9), parse_spec_name("a0.conv.2.8", 9)}) {
        Network net(named, 7);
        Tensor in = random_input(3, 21, 9, rng);
        auto out = net.forward_infer(in);
        REQUIRE(out.policy.shape == std::vector<int>{3, 81});
        REQUIRE(out.value.shape == std::vector<int>{3, 1});
        for (int b = 0; b < 3; ++b) {
            double sum = 0.0;
            for (int i = 0; i < 81; ++i) {
                float p = out.policy.v[b * 81 + i];
                CHECK(p >= 0.0f);
                CHECK(p <= 1.0f);
                sum += p;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-4));
            CHECK(out.value.v[b] >= 0.0f);
            CHECK(out.value.v[b] <= 1.0f);
        }
    }
}

TEST_CASE("infer forward is deterministic and batch-consistent") {
    std::mt19937_64 rng(42);
    Network net(tiny_mobile(9), 11);
    Tensor a = random_input(1, 21, 9, rng);
    Tensor b = random_input(1, 21, 9, rng);
    Tensor both({2, 21, 9, 9});
    std::copy(a.v.begin(), a.v.end(), both.v.begin());
    std::copy(b.v.begin(), b.v.end(), both.v.begin() + a.numel());

    auto oa = net.forward_infer(a);
    auto oa2 = net.forward_infer(a);
    CHECK(oa.policy.v == oa2.policy.v);
    CHECK(oa.value.v == oa2.value.v);

    auto ob = net.forward_infer(b);
    auto o2 = net.forward_infer(both);
    for (int i = 0; i < 81; ++i) {
        CHECK(o2.policy.v[i] == doctest::Approx(oa.policy.v[i]).epsilon(1e-4).scale(1.0));
        CHECK(o2.policy.v[81 + i] == doctest::Approx(ob.policy.v[i]).epsilon(1e-4).scale(1.0));
    }
    CHECK(o2.value.v[0] == doctest::Approx(oa.value.v[0]).epsilon(1e-4));
    CHECK(o2.value.v[1] == doctest::Approx(ob.value.v[0]).epsilon(1e-4));
}

TEST_CASE("train and infer modes agree after BN statistics converge") {
    // With the same single batch repeated, running stats approach batch stats,
    // so infer outputs drift toward train outputs. Smoke-level check only:
    // both modes produce finite simplex outputs.
    std::mt19937_64 rng(43);
    Network net(tiny_az(9), 13);
    Tensor in = random_input(4, 21, 9, rng);
    for (int i = 0; i < 30; ++i) net.forward(in, RunMode::Train);
    auto tr = net.forward(in, RunMode::Train);
    auto inf = net.forward_infer(in);
    for (int i = 0; i < 4 * 81; ++i) {
        CHECK(std::isfinite(tr.policy.v[i]));
        CHECK(inf.policy.v[i] == doctest::Approx(tr.policy.v[i]).epsilon(0.25).scale(0.05));
    }
}

TEST_CASE("num_params matches the closed-form count") {
    for (auto named : {tiny_mobile(9), tiny_az(9)}) {
        Network net(named);
        CHECK(net.num_params() == count_params(named.spec));
    }
}

TEST_CASE("finite difference gradient check") {
    std::mt19937_64 rng(44);
    const int S = 5;
    for (auto named : {parse_spec_name("mobile.conv.avg.bin.1.12.6", S),
                       parse_spec_name("a0.1.6", S),
                       parse_spec_name("a0.conv.1.6", S)}) {
        CAPTURE(spec_name(named));
        Network net(named, 3);
        Tensor in = random_input(2, 21, S, rng);

        // Scalar loss: fixed random projection of policy and value outputs.
        std::vector<float> wp(2 * S * S), wv(2);
        std::uniform_real_distribution<float> d(-1.0f, 1.0f);
        for (auto& x : wp) x = d(rng);
        for (auto& x : wv) x = d(rng);

        auto loss_of = [&]() {
            auto out = net.forward(in, RunMode::Train);
            double l = 0.0;
            for (std::size_t i = 0; i < wp.size(); ++i) l += double(out.policy.v[i]) * wp[i];
            for (std::size_t i = 0; i < wv.size(); ++i) l += double(out.value.v[i]) * wv[i];
            return l;
        };

        net.zero_grads();
        loss_of();
        Tensor dpolicy({2, S * S}), dvalue({2, 1});
        std::copy(wp.begin(), wp.end(), dpolicy.v.begin());
        std::copy(wv.begin(), wv.end(), dvalue.v.begin());
        net.backward(dpolicy, dvalue);

        // The forward runs in float and ReLU kinks bias individual central
        // differences, so judge the distribution: the bulk must agree tightly
        // and no probe may be wildly off.
        auto& params = net.layer_params();
        std::mt19937_64 pick(45);
        std::vector<double> rel;
        for (std::size_t li = 0; li < params.size() && rel.size() < 60; ++li) {
            for (std::size_t wi = 0; wi < params[li].g.size(); ++wi) {
                auto& w = params[li].w[wi];
                auto& g = params[li].g[wi];
                if (w.numel() == 0) continue;
                for (int rep = 0; rep < 2 && rel.size() < 60; ++rep) {
                    std::size_t j = pick() % w.numel();
                    float keep = w.v[j];
                    float h = std::max(5e-3f, std::abs(keep) * 1e-2f);
                    w.v[j] = keep + h;
                    double lp = loss_of();
                    w.v[j] = keep - h;
                    double lm = loss_of();
                    w.v[j] = keep;
                    double want = (lp - lm) / (2.0 * double(h));
                    double got = g.v[j];
                    double denom = std::max(1e-2, std::abs(want) + std::abs(got));
                    CAPTURE(li);
                    CAPTURE(wi);
                    CAPTURE(j);
                    double r = std::abs(want - got) / denom;
                    CHECK(r < 0.25);
                    rel.push_back(r);
                }
            }
        }
        CHECK(rel.size() >= 25);
        std::sort(rel.begin(), rel.end());
        CHECK(rel[rel.size() / 2] < 0.02);                      // median
        CHECK(rel[rel.size() * 9 / 10] < 0.08);                 // 90th percentile
    }
}

TEST_CASE("sgd step applies l2 only to kernels") {
    Network net(tiny_az(5), 9);
    net.zero_grads();
    double before = net.l2_penalty();
    CHECK(before > 0.0);
    // A pure decay step (zero grads) shrinks the penalty.
    net.sgd_step(0.1f, 0.0f, 1e-2f);
    CHECK(net.l2_penalty() < before);

    // BN gammas start at exactly 1 and must be untouched by decay.
    const auto& graph = net.graph();
    const auto& params = net.layer_params();
    bool saw_bn = false;
    for (std::size_t i = 0; i < graph.layers.size(); ++i) {
        if (graph.layers[i].kind != LayerKind::BatchNorm) continue;
        saw_bn = true;
        for (float v : params[i].w[0].v) CHECK(v == 1.0f);
    }
    CHECK(saw_bn);
}

TEST_CASE("momentum accelerates a constant gradient") {
    Network net(tiny_az(5), 10);
    // Find the first conv kernel.
    auto& params = net.layer_params();
    std::size_t li = 0;
    while (params[li].w.empty() || params[li].w[0].numel() == 0) ++li;
    float w0 = params[li].w[0].v[0];

    auto step = [&](float momentum) {
        net.zero_grads();
        params[li].g[0].v[0] = 1.0f;
        net.sgd_step(0.01f, momentum, 0.0f);
    };
    step(0.9f);
    float after1 = params[li].w[0].v[0];
    step(0.9f);
    float after2 = params[li].w[0].v[0];
    CHECK(w0 - after1 == doctest::Approx(0.01f));
    // Second step moves further than the first thanks to the velocity.
    CHECK(after1 - after2 > (w0 - after1) * 1.5f);
}

TEST_CASE("checkpoint round trip preserves outputs") {
    std::mt19937_64 rng(46);
    Network net(tiny_mobile(9), 21);
    Tensor in = random_input(2, 21, 9, rng);
    net.forward(in, RunMode::Train);  // move BN running stats off their init
    auto want = net.forward_infer(in);

    std::string path = "/tmp/tenuki_test_ckpt.bin";
    net.save(path);
    Network back = Network::load(path);
    CHECK(back.named() == net.named());
    auto got = back.forward_infer(in);
    CHECK(got.policy.v == want.policy.v);
    CHECK(got.value.v == want.value.v);
    std::remove(path.c_str());
}

TEST_CASE("load rejects garbage") {
    std::string path = "/tmp/tenuki_test_ckpt_bad.bin";
    {
        FILE* f = fopen(path.c_str(), "wb");
        fputs("JUNKJUNKJUNK", f);
        fclose(f);
    }
    CHECK_THROWS(Network::load(path));
    std::remove(path.c_str());
}

TEST_CASE("different seeds give different weights") {
    Network a(tiny_az(5), 1), b(tiny_az(5), 2);
    bool differ = false;
    for (std::size_t li = 0; li < a.layer_params().size() && !differ; ++li)
        for (std::size_t wi = 0; wi < a.layer_params()[li].w.size() && !differ; ++wi)
            differ = a.layer_params()[li].w[wi].v != b.layer_params()[li].w[wi].v;
    CHECK(differ);
}
