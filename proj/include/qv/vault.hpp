#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qv/channels.hpp"
#include "qv/io_util.hpp"
#include "qv/states.hpp"

namespace qv {

// Color indices: 0 cyan, 1 magenta, 2 yellow, 3 black. Each maps to one
// state of the maximally coherent encoding alphabet.
inline constexpr int kVaultColors = 4;

std::array<int, 3> vault_color_rgb(int color);

struct VaultPixel {
    int color = -1;  // 0..3 when indexed, -1 for a mixture
    std::array<double, 4> mix{};
    bool indexed() const { return color >= 0; }
};

struct VaultImage {
    int width = 0;
    int height = 0;
    std::vector<VaultPixel> pixels;  // row-major, y * width + x

    static VaultImage solid(int width, int height, int color);
    int size() const { return width * height; }
    VaultPixel& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const VaultPixel& at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

// One quadrant per color; handy balanced test pattern.
VaultImage four_quadrant_image(int width, int height);

using ClassicalRegister = std::vector<int>;

std::vector<PureState> encode_image(const VaultImage& image);

enum class EvolveMode { ExactAverage, Sampled };

struct EvolvedImage {
    int width = 0;
    int height = 0;
    std::vector<DensityMatrix> states;
    // Sampled mode only: which schedule permutation fired per pixel.
    std::optional<ClassicalRegister> reg;
};

// Per-pixel channel at mixing parameter t. Sampled mode draws one unitary per
// pixel from an independent child stream (stream id = pixel index), so the
// result does not depend on pixel evaluation order.
EvolvedImage evolve_image(const VaultImage& image, const MapSchedule& schedule, double t,
                          EvolveMode mode, Rng& rng);

enum class CompensateTarget { Identity, PairSwap };

// Applies U_target U_applied^{-1} pixel by pixel; needs the register.
EvolvedImage compensate(const EvolvedImage& evolved, const MapSchedule& schedule,
                        CompensateTarget target);

// Color relabeling induced by the compensation target on the alphabet.
std::array<int, 4> relabel_for_target(CompensateTarget target);

struct DecodeReport {
    VaultImage decoded;  // indexed
    double accuracy;
    long long tie_count;
    double mean_fidelity;
};

// Argmax of the per-pixel weights in the encoding basis, lowest index on a
// tie. Accuracy and fidelity are measured against the stored image, remapped
// through relabel when given.
DecodeReport decode_image(const EvolvedImage& evolved, const VaultImage& stored,
                          const std::optional<std::array<int, 4>>& relabel = std::nullopt);

// Encoding-basis weights per pixel, for rendering intermediate stages.
VaultImage mixture_image(const EvolvedImage& evolved);

// ASCII PPM (P3, max value 255). Mixture pixels render as the weight-blended
// palette color, rounded half up.
void write_ppm(std::ostream& os, const VaultImage& image, const MetaBlock* meta = nullptr);
VaultImage read_ppm(std::istream& is);

// x,y,c,m,y,k rows; indexed pixels serialize as one-hot weights.
void write_cmyk_csv(std::ostream& os, const VaultImage& image, const MetaBlock* meta = nullptr);
VaultImage read_cmyk_csv(std::istream& is);

}  // namespace qv
