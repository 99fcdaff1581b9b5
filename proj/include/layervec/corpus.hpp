// Deterministic synthetic test corpus: flat-color compositions of discs,
// rounded squares, crescents and multi-component faces at 240x240, with
// ground-truth sidecars.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "layervec/render.hpp"

namespace layervec {

struct CorpusComponent {
    std::array<double, 3> color{};
    long area = 0;  // pixels whose final color matches exactly
};

struct CorpusImage {
    std::string name;
    RasterImage image;
    int component_count = 0;
    std::vector<CorpusComponent> components;
};

inline constexpr int kCorpusSize = 240;
inline constexpr uint64_t kCorpusDefaultSeed = 42;

/// The full 20-image corpus; identical output for identical seeds. Faces
/// with 2..8 components are included (component counts 2, 4 and 8 among
/// them). Edges are anti-aliased by 16x supersampling.
std::vector<CorpusImage> generate_corpus(uint64_t seed = kCorpusDefaultSeed);

/// JSON sidecar text for one corpus image.
std::string corpus_sidecar_json(const CorpusImage& img);

}  // namespace layervec
