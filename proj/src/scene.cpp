#include "spcam/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace spcam {

namespace {

double smoothstep(double edge0, double edge1, double x) {
    const double t = std::clamp((x - edge0) / (edge1 - edge0), 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

struct Blob {
    double cy, cx, ry, rx, angle, level;
};

}  // namespace

SceneImage synthetic_scene(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    if (rows == 0 || cols == 0)
        throw Error("scene needs a nonzero geometry");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-0.02, 0.02);
    std::normal_distribution<double> grain(0.0, 1.0);

    Blob blobs[] = {
        {0.46 + jitter(rng), 0.36 + jitter(rng), 0.21, 0.145, 0.5, 0.62},
        {0.30 + jitter(rng), 0.70 + jitter(rng), 0.115, 0.115, 0.0, 0.48},
        {0.63 + jitter(rng), 0.295 + jitter(rng), 0.05, 0.05, 0.0, 0.95},
        {0.74 + jitter(rng), 0.62 + jitter(rng), 0.055, 0.125, -0.3, 0.75},
    };

    // Low-resolution random field, bilinearly upsampled: gentle large-scale
    // irregularity that stays compressible.
    constexpr std::size_t kGrid = 9;
    double field[kGrid][kGrid];
    std::uniform_real_distribution<double> fdist(-0.035, 0.035);
    for (auto& row : field)
        for (double& v : row)
            v = fdist(rng);

    SceneImage img(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const double v = (double(r) + 0.5) / double(rows);
        for (std::size_t c = 0; c < cols; ++c) {
            const double u = (double(c) + 0.5) / double(cols);

            double px = 0.055 + 0.075 * v + 0.045 * u;
            const double rad = std::hypot(u - 0.5, v - 0.5);
            px += 0.05 * smoothstep(0.65, 0.15, rad);

            for (const Blob& b : blobs) {
                const double dy = v - b.cy, dx = u - b.cx;
                const double ca = std::cos(b.angle), sa = std::sin(b.angle);
                const double yy = (ca * dy - sa * dx) / b.ry;
                const double xx = (sa * dy + ca * dx) / b.rx;
                const double d = std::sqrt(yy * yy + xx * xx);
                px += b.level * smoothstep(1.08, 0.92, d);
            }

            // three-bar group, the usual resolution-target motif
            if (v > 0.80 && v < 0.92) {
                for (int bar = 0; bar < 3; ++bar) {
                    const double x0 = 0.12 + 0.045 * bar;
                    px += 0.55 * smoothstep(0.008, 0.004, std::abs(u - x0) - 0.008);
                }
            }

            const double gu = u * double(kGrid - 1), gv = v * double(kGrid - 1);
            const std::size_t gi = std::min<std::size_t>(kGrid - 2, std::size_t(gv));
            const std::size_t gj = std::min<std::size_t>(kGrid - 2, std::size_t(gu));
            const double fu = gu - double(gj), fv = gv - double(gi);
            px += (1 - fv) * ((1 - fu) * field[gi][gj] + fu * field[gi][gj + 1]) +
                  fv * ((1 - fu) * field[gi + 1][gj] + fu * field[gi + 1][gj + 1]);

            px += 0.0105 * grain(rng);
            img.at(r, c) = std::clamp(px, 0.0, 1.0);
        }
    }
    return img;
}

}  // namespace spcam
