#include "tenuki/encoder.hpp"

#include "tenuki/tactics.hpp"

namespace tenuki {

int transform_policy_index(int i, Symmetry s, int size) {
    if (i < 0 || i >= size * size)
        throw std::out_of_range("policy index " + std::to_string(i) + " out of range");
    int r = i / size, c = i % size, n = size - 1;
    int tr = r, tc = c;
    switch (s.id) {
        case 0: break;
        case 1: tr = c; tc = n - r; break;
        case 2: tr = n - r; tc = n - c; break;
        case 3: tr = n - c; tc = r; break;
        case 4: tr = r; tc = n - c; break;
        case 5: tr = n - r; tc = c; break;
        case 6: tr = c; tc = r; break;
        case 7: tr = n - c; tc = n - r; break;
        default: throw ConfigError("symmetry id out of range");
    }
    return tr * size + tc;
}

Symmetry inverse_symmetry(Symmetry s) {
    if (s.id == 1) return {3};
    if (s.id == 3) return {1};
    return s;
}

FeatureTensor encode(const Position& p) {
    int size = p.size();
    int n = size * size;
    FeatureTensor t;
    t.size = size;
    t.planes.assign(kInputPlanes * n, 0);
    auto plane = [&](int pl) { return t.planes.data() + pl * n; };

    for (int i = 0; i < n; ++i) {
        if (p.at(i) == Color::Black) plane(0)[i] = 1;
        else if (p.at(i) == Color::White) plane(1)[i] = 1;
    }
    const auto& hist = p.history();
    for (int k = 0; k < kHistoryPlanes && k < static_cast<int>(hist.size()); ++k) {
        for (int i = 0; i < n; ++i) {
            if (hist[k][i] == Color::Black) plane(2 + 2 * k)[i] = 1;
            else if (hist[k][i] == Color::White) plane(3 + 2 * k)[i] = 1;
        }
    }

    BoardAnalysis a = analyze(p);
    for (int id = 0; id < a.num_strings(); ++id) {
        int bin = std::min(a.string_liberties[id], 4) - 1;
        int base = a.string_color[id] == Color::Black ? 10 : 14;
        for (int pt : a.string_points[id]) plane(base + bin)[pt] = 1;
    }

    LadderStatus ls = ladder_status(p);
    for (int i = 0; i < n; ++i) {
        if (ls.in_ladder[i]) plane(18)[i] = 1;
        if (ls.adjacent_to_ladder[i]) plane(19)[i] = 1;
    }

    if (p.to_move() == Color::White)
        for (int i = 0; i < n; ++i) plane(20)[i] = 1;
    return t;
}

FeatureTensor transform_tensor(const FeatureTensor& t, Symmetry s) {
    if (s.id == 0) return t;
    int n = t.size * t.size;
    FeatureTensor out;
    out.size = t.size;
    out.planes.resize(t.planes.size());
    std::vector<int> map(n);
    for (int i = 0; i < n; ++i) map[i] = transform_policy_index(i, s, t.size);
    for (int pl = 0; pl < kInputPlanes; ++pl) {
        const std::uint8_t* src = t.planes.data() + pl * n;
        std::uint8_t* dst = out.planes.data() + pl * n;
        for (int i = 0; i < n; ++i) dst[map[i]] = src[i];
    }
    return out;
}

Position replay_prefix(const GameRecord& rec, int plies) {
    Position p(rec.size);
    for (int i = 0; i < plies; ++i) p = p.play(rec.moves[i]);
    return p;
}

Sample make_sample(const GameRecord& rec, int ply, Symmetry s) {
    if (ply < 0 || ply >= static_cast<int>(rec.moves.size()))
        throw std::out_of_range("ply " + std::to_string(ply) + " out of range");
    if (rec.moves[ply].is_pass())
        throw PassPlyError("pass at ply " + std::to_string(ply));
    Sample out;
    out.input = transform_tensor(encode(replay_prefix(rec, ply)), s);
    out.policy_target = transform_policy_index(rec.moves[ply].point, s, rec.size);
    out.value_target = static_cast<float>(rec.result);
    return out;
}

GameRecord transform_record(const GameRecord& rec, Symmetry s) {
    GameRecord out = rec;
    for (auto& m : out.moves)
        if (!m.is_pass()) m.point = static_cast<std::int16_t>(transform_policy_index(m.point, s, rec.size));
    return out;
}

}  // namespace tenuki
