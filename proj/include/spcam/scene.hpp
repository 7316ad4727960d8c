#pragma once

#include "spcam/core.hpp"

namespace spcam {

/// Deterministic lab-style test scene: dark background, a handful of soft
/// bright objects and mild texture. Compressible in the Haar basis the way
/// natural photographs are; used by the self test and the demo sweep.
SceneImage synthetic_scene(std::size_t rows, std::size_t cols, std::uint64_t seed = 42);

}  // namespace spcam
