#pragma once

// Descent for the 2-D resistance functional over concave heightfields:
// projected gradient steps plus apex insertion moves, multi-start.

#include "resist/height_field.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace resist {

struct Trace2DRow {
    int iter;
    double objective;
    std::string step;
};

struct Solve2DOptions {
    int multistart = 4;
    std::uint64_t seed = 2026;
    int max_gradient_iters = 200;
    int apex_rounds = 30;
    int apex_candidates = 24;  // random proposals per round
    bool gradient_moves = true;
    bool apex_moves = true;
    std::vector<Trace2DRow>* trace = nullptr;
};

// In-place descent on the field's own mesh; the objective never increases
// across accepted steps. Exposed for tests of single-start behavior.
void descend_field(const PressureLaw& law, HeightField& f, const Solve2DOptions& opts,
                   int* iter_counter, std::mt19937_64& rng);

HeightField solve_2d(const PressureLaw& law, const std::vector<Vec2>& omega, double M, double h,
                     const Solve2DOptions& opts = {});

}  // namespace resist
