#pragma once

#include <cstdint>
#include <vector>

#include "tenuki/goban.hpp"

namespace tenuki {

constexpr int kInputPlanes = 21;

// Binary input encoding, plane-major [plane][row][col].
//  0-1   current black / white stones
//  2-9   previous 4 positions, (black, white) per state, most recent first
// 10-13  black strings with exactly 1 / 2 / 3 / >=4 liberties
// 14-17  same for white
// 18-19  in-ladder mask, adjacent-to-ladder mask
// 20     all ones iff White to move
struct FeatureTensor {
    int size = 0;
    std::vector<std::uint8_t> planes;  // kInputPlanes * size * size

    std::uint8_t at(int plane, int idx) const { return planes[plane * size * size + idx]; }
    bool operator==(const FeatureTensor&) const = default;
};

// Dihedral group of the square.
// 0 identity, 1/2/3 rotations by 90/180/270, 4 col flip, 5 row flip,
// 6 transpose, 7 anti-transpose.
struct Symmetry {
    int id = 0;
};

constexpr int kNumSymmetries = 8;

int transform_policy_index(int i, Symmetry s, int size);
Symmetry inverse_symmetry(Symmetry s);

FeatureTensor encode(const Position& p);
FeatureTensor transform_tensor(const FeatureTensor& t, Symmetry s);

struct Sample {
    FeatureTensor input;
    int policy_target = 0;
    float value_target = 0.0f;
};

class PassPlyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Encodes the position before `ply`, under symmetry `s`.
// Throws PassPlyError when the move at `ply` is a pass (caller resamples).
Sample make_sample(const GameRecord& rec, int ply, Symmetry s);

// Same game replayed under transformed coordinates (passes unchanged).
GameRecord transform_record(const GameRecord& rec, Symmetry s);

// Position reached after the first `plies` moves of the record.
Position replay_prefix(const GameRecord& rec, int plies);

}  // namespace tenuki
