#include "qv/vault.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace qv {

namespace {

constexpr double kTieTol = 1e-9;

constexpr int kPalette[4][3] = {
    {0, 255, 255},    // cyan
    {255, 0, 255},    // magenta
    {255, 255, 0},    // yellow
    {0, 0, 0},        // black
};

void check_color(int color) {
    if (color < 0 || color >= kVaultColors)
        throw InvalidColorIndexError("color index outside 0..3");
}

std::array<double, 4> encoding_weights(const DensityMatrix& rho) {
    const auto& basis = encoding_basis_d4();
    std::array<double, 4> w{};
    for (int k = 0; k < 4; ++k) w[static_cast<std::size_t>(k)] = fidelity(rho, basis[static_cast<std::size_t>(k)]);
    return w;
}

}  // namespace

std::array<int, 3> vault_color_rgb(int color) {
    check_color(color);
    return {kPalette[color][0], kPalette[color][1], kPalette[color][2]};
}

VaultImage VaultImage::solid(int width, int height, int color) {
    check_color(color);
    if (width < 1 || height < 1) throw InvalidStateError("image dimensions must be positive");
    VaultImage img;
    img.width = width;
    img.height = height;
    img.pixels.assign(static_cast<std::size_t>(width) * height, VaultPixel{color, {}});
    return img;
}

VaultImage four_quadrant_image(int width, int height) {
    if (width < 2 || height < 2) throw InvalidStateError("need at least 2x2 for four quadrants");
    VaultImage img = VaultImage::solid(width, height, 0);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const int qx = x < width / 2 ? 0 : 1;
            const int qy = y < height / 2 ? 0 : 1;
            img.at(x, y).color = qy * 2 + qx;
        }
    return img;
}

std::vector<PureState> encode_image(const VaultImage& image) {
    if (image.width < 1 || image.height < 1 ||
        image.pixels.size() != static_cast<std::size_t>(image.width) * image.height)
        throw InvalidStateError("inconsistent image dimensions");
    const auto& basis = encoding_basis_d4();
    std::vector<PureState> out;
    out.reserve(image.pixels.size());
    for (const VaultPixel& px : image.pixels) {
        if (!px.indexed()) throw InvalidColorIndexError("cannot encode a mixture pixel");
        check_color(px.color);
        out.push_back(basis[static_cast<std::size_t>(px.color)]);
    }
    return out;
}

EvolvedImage evolve_image(const VaultImage& image, const MapSchedule& schedule, double t,
                          EvolveMode mode, Rng& rng) {
    const std::vector<PureState> encoded = encode_image(image);
    const KrausChannel channel = schedule.channel_at(t);

    EvolvedImage out;
    out.width = image.width;
    out.height = image.height;
    out.states.reserve(encoded.size());
    if (mode == EvolveMode::ExactAverage) {
        for (const PureState& psi : encoded)
            out.states.push_back(apply(channel, DensityMatrix::from_pure(psi)));
        return out;
    }

    ClassicalRegister reg(encoded.size(), 0);
    const auto& perms = schedule.permutations();
    for (std::size_t i = 0; i < encoded.size(); ++i) {
        Rng stream = rng.child(i);
        const int idx = sample_unitary(channel, stream);
        reg[i] = idx;
        out.states.push_back(
            DensityMatrix::from_pure(apply_unitary(perms[static_cast<std::size_t>(idx)], encoded[i])));
    }
    out.reg = std::move(reg);
    return out;
}

EvolvedImage compensate(const EvolvedImage& evolved, const MapSchedule& schedule,
                        CompensateTarget target) {
    if (!evolved.reg.has_value())
        throw MissingRegisterError("compensation needs the applied-unitary register");

    const auto& perms = schedule.permutations();
    int target_idx = -1;
    if (target == CompensateTarget::Identity) {
        target_idx = 0;
    } else {
        for (std::size_t k = 0; k < perms.size(); ++k) {
            if (perms[k].perm == std::vector<int>{1, 0, 3, 2}) {
                target_idx = static_cast<int>(k);
                break;
            }
        }
        if (target_idx < 0)
            throw InvalidStateError("pair swap is not in this schedule's permutation set");
    }
    const PermutationUnitary& target_u = perms[static_cast<std::size_t>(target_idx)];

    EvolvedImage out;
    out.width = evolved.width;
    out.height = evolved.height;
    out.states.reserve(evolved.states.size());
    ClassicalRegister reg(evolved.states.size(), target_idx);

    const int d = schedule.n();
    for (std::size_t i = 0; i < evolved.states.size(); ++i) {
        const int applied = (*evolved.reg)[i];
        if (applied < 0 || applied >= static_cast<int>(perms.size()))
            throw MissingRegisterError("register entry outside the permutation set");
        const PermutationUnitary inv = perms[static_cast<std::size_t>(applied)].inverse();
        // net = target o applied^{-1}
        std::vector<int> net(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) net[static_cast<std::size_t>(j)] = target_u.image(inv.image(j));
        const ComplexMatrix& rho = evolved.states[i].matrix();
        ComplexMatrix moved(d, d);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                moved(net[static_cast<std::size_t>(a)], net[static_cast<std::size_t>(b)]) = rho(a, b);
        out.states.push_back(DensityMatrix::unchecked(std::move(moved)));
    }
    out.reg = std::move(reg);
    return out;
}

std::array<int, 4> relabel_for_target(CompensateTarget target) {
    if (target == CompensateTarget::Identity) return {0, 1, 2, 3};
    // The pair swap exchanges alphabet states 0<->3 and 1<->2 up to phase.
    return {3, 2, 1, 0};
}

DecodeReport decode_image(const EvolvedImage& evolved, const VaultImage& stored,
                          const std::optional<std::array<int, 4>>& relabel) {
    if (stored.width != evolved.width || stored.height != evolved.height ||
        stored.pixels.size() != evolved.states.size())
        throw DimensionMismatchError("stored image and evolved states disagree in shape");
    if (relabel.has_value()) {
        std::array<bool, 4> seen{};
        for (int v : *relabel) {
            check_color(v);
            if (seen[static_cast<std::size_t>(v)]) throw InvalidColorIndexError("relabel is not a permutation");
            seen[static_cast<std::size_t>(v)] = true;
        }
    }

    DecodeReport report;
    report.decoded.width = evolved.width;
    report.decoded.height = evolved.height;
    report.decoded.pixels.resize(evolved.states.size());
    report.tie_count = 0;

    long long correct = 0;
    double fid_sum = 0.0;
    const auto& basis = encoding_basis_d4();

    for (std::size_t i = 0; i < evolved.states.size(); ++i) {
        const std::array<double, 4> w = encoding_weights(evolved.states[i]);
        int best = 0;
        for (int k = 1; k < 4; ++k)
            if (w[static_cast<std::size_t>(k)] > w[static_cast<std::size_t>(best)]) best = k;
        int tied = 0;
        int pick = -1;
        for (int k = 0; k < 4; ++k) {
            if (w[static_cast<std::size_t>(best)] - w[static_cast<std::size_t>(k)] <= kTieTol) {
                ++tied;
                if (pick < 0) pick = k;
            }
        }
        if (tied > 1) ++report.tie_count;
        report.decoded.pixels[i] = VaultPixel{pick, {}};

        const VaultPixel& sp = stored.pixels[i];
        if (!sp.indexed()) throw InvalidColorIndexError("stored image must be color indexed");
        check_color(sp.color);
        const int expected = relabel.has_value() ? (*relabel)[static_cast<std::size_t>(sp.color)] : sp.color;
        if (pick == expected) ++correct;
        fid_sum += fidelity(evolved.states[i], basis[static_cast<std::size_t>(expected)]);
    }

    const double n = static_cast<double>(evolved.states.size());
    report.accuracy = static_cast<double>(correct) / n;
    report.mean_fidelity = fid_sum / n;
    return report;
}

VaultImage mixture_image(const EvolvedImage& evolved) {
    VaultImage img;
    img.width = evolved.width;
    img.height = evolved.height;
    img.pixels.resize(evolved.states.size());
    for (std::size_t i = 0; i < evolved.states.size(); ++i) {
        VaultPixel px;
        px.color = -1;
        px.mix = encoding_weights(evolved.states[i]);
        img.pixels[i] = px;
    }
    return img;
}

void write_ppm(std::ostream& os, const VaultImage& image, const MetaBlock* meta) {
    os << "P3\n";
    if (meta != nullptr) os << comment_block(*meta);
    os << image.width << " " << image.height << "\n255\n";
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const VaultPixel& px = image.at(x, y);
            int rgb[3];
            if (px.indexed()) {
                check_color(px.color);
                for (int c = 0; c < 3; ++c) rgb[c] = kPalette[px.color][c];
            } else {
                for (int c = 0; c < 3; ++c) {
                    double v = 0.0;
                    for (int k = 0; k < 4; ++k) v += px.mix[static_cast<std::size_t>(k)] * kPalette[k][c];
                    rgb[c] = static_cast<int>(std::floor(v + 0.5));
                    rgb[c] = std::min(std::max(rgb[c], 0), 255);
                }
            }
            os << rgb[0] << " " << rgb[1] << " " << rgb[2];
            os << (x + 1 == image.width ? "\n" : " ");
        }
    }
}

namespace {

// Pulls whitespace-separated tokens, treating '#' to end of line as a comment.
class PpmTokenizer {
public:
    explicit PpmTokenizer(std::istream& is) : is_(is) {}
    bool next(std::string& tok) {
        tok.clear();
        int c = 0;
        while ((c = is_.get()) != EOF) {
            if (c == '#') {
                while (c != EOF && c != '\n') c = is_.get();
                continue;
            }
            if (std::isspace(c)) {
                if (!tok.empty()) return true;
                continue;
            }
            tok.push_back(static_cast<char>(c));
        }
        return !tok.empty();
    }

private:
    std::istream& is_;
};

int parse_ppm_int(PpmTokenizer& tok, const char* what) {
    std::string t;
    if (!tok.next(t)) throw MalformedFileError(std::string("missing ") + what);
    try {
        std::size_t pos = 0;
        const int v = std::stoi(t, &pos);
        if (pos != t.size()) throw MalformedFileError(std::string("bad ") + what);
        return v;
    } catch (const MalformedFileError&) {
        throw;
    } catch (const std::exception&) {
        throw MalformedFileError(std::string("bad ") + what);
    }
}

}  // namespace

VaultImage read_ppm(std::istream& is) {
    PpmTokenizer tok(is);
    std::string magic;
    if (!tok.next(magic)) throw MalformedFileError("empty pixmap");
    if (magic != "P3") throw UnsupportedMagicError("expected ASCII P3 pixmap, got " + magic);

    const int w = parse_ppm_int(tok, "width");
    const int h = parse_ppm_int(tok, "height");
    const int maxval = parse_ppm_int(tok, "max value");
    if (w < 1 || h < 1) throw MalformedFileError("non-positive pixmap dimensions");
    if (maxval != 255) throw MalformedFileError("only max value 255 is supported");

    VaultImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        int rgb[3];
        for (int c = 0; c < 3; ++c) {
            rgb[c] = parse_ppm_int(tok, "sample");
            if (rgb[c] < 0 || rgb[c] > 255) throw MalformedFileError("sample outside 0..255");
        }
        int color = -1;
        for (int k = 0; k < 4; ++k)
            if (rgb[0] == kPalette[k][0] && rgb[1] == kPalette[k][1] && rgb[2] == kPalette[k][2])
                color = k;
        if (color >= 0) {
            img.pixels[i] = VaultPixel{color, {}};
            continue;
        }
        // Invert the palette blend; exact for anything this code wrote.
        const double r = rgb[0], g = rgb[1], b = rgb[2];
        std::array<double, 4> mix{(g + b - r) / 510.0, (r + b - g) / 510.0, (r + g - b) / 510.0,
                                  1.0 - (r + g + b) / 510.0};
        double sum = 0.0;
        for (double& m : mix) {
            if (m < -0.01 || m > 1.01) throw MalformedFileError("pixel outside the palette gamut");
            m = std::min(std::max(m, 0.0), 1.0);
            sum += m;
        }
        if (sum <= 0.0) throw MalformedFileError("degenerate pixel weights");
        for (double& m : mix) m /= sum;
        VaultPixel px;
        px.color = -1;
        px.mix = mix;
        img.pixels[i] = px;
    }
    std::string extra;
    if (tok.next(extra)) throw MalformedFileError("trailing data after pixel samples");
    return img;
}

void write_cmyk_csv(std::ostream& os, const VaultImage& image, const MetaBlock* meta) {
    if (meta != nullptr) os << comment_block(*meta);
    os << "# width=" << image.width << "\n# height=" << image.height << "\n";
    os << "x,y,c,m,y,k\n";
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const VaultPixel& px = image.at(x, y);
            std::array<double, 4> w{};
            if (px.indexed()) {
                check_color(px.color);
                w[static_cast<std::size_t>(px.color)] = 1.0;
            } else {
                w = px.mix;
            }
            os << x << "," << y;
            for (double v : w) os << "," << format_sig(v);
            os << "\n";
        }
    }
}

VaultImage read_cmyk_csv(std::istream& is) {
    std::string line;
    int width = -1, height = -1;
    struct Row {
        int x, y;
        std::array<double, 4> w;
    };
    std::vector<Row> rows;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (csv_skippable(line)) {
            const std::size_t eq = line.find('=');
            if (eq != std::string::npos) {
                if (line.find("width") != std::string::npos) width = std::stoi(line.substr(eq + 1));
                else if (line.find("height") != std::string::npos)
                    height = std::stoi(line.substr(eq + 1));
            }
            continue;
        }
        const auto f = split_csv(line);
        if (!header_seen && !f.empty() && f[0] == "x") {
            header_seen = true;
            continue;
        }
        if (f.size() != 6) throw MalformedFileError("expected x,y,c,m,y,k");
        Row r{};
        try {
            r.x = std::stoi(f[0]);
            r.y = std::stoi(f[1]);
            for (int k = 0; k < 4; ++k) r.w[static_cast<std::size_t>(k)] = std::stod(f[static_cast<std::size_t>(k) + 2]);
        } catch (const std::exception&) {
            throw MalformedFileError("unparsable pixel row");
        }
        rows.push_back(r);
    }
    if (rows.empty()) throw MalformedFileError("empty pixel file");
    if (width < 1 || height < 1) {
        for (const Row& r : rows) {
            width = std::max(width, r.x + 1);
            height = std::max(height, r.y + 1);
        }
    }

    VaultImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(static_cast<std::size_t>(width) * height);
    std::vector<bool> seen(img.pixels.size(), false);
    for (const Row& r : rows) {
        if (r.x < 0 || r.x >= width || r.y < 0 || r.y >= height)
            throw MalformedFileError("pixel coordinates out of range");
        const std::size_t idx = static_cast<std::size_t>(r.y) * width + r.x;
        if (seen[idx]) throw MalformedFileError("duplicate pixel row");
        seen[idx] = true;
        double sum = 0.0;
        std::array<double, 4> w = r.w;
        int hot = -1;
        int nonzero = 0;
        for (int k = 0; k < 4; ++k) {
            if (w[static_cast<std::size_t>(k)] < -1e-12) throw MalformedFileError("negative pixel weight");
            if (w[static_cast<std::size_t>(k)] < 0.0) w[static_cast<std::size_t>(k)] = 0.0;
            if (w[static_cast<std::size_t>(k)] > 0.0) {
                ++nonzero;
                hot = k;
            }
            sum += w[static_cast<std::size_t>(k)];
        }
        if (std::abs(sum - 1.0) > 1e-9) throw MalformedFileError("pixel weights do not sum to one");
        if (nonzero == 1 && std::abs(w[static_cast<std::size_t>(hot)] - 1.0) <= 1e-12) {
            img.pixels[idx] = VaultPixel{hot, {}};
        } else {
            VaultPixel px;
            px.color = -1;
            px.mix = w;
            img.pixels[idx] = px;
        }
    }
    for (bool s : seen)
        if (!s) throw MalformedFileError("pixel file does not cover every pixel");
    return img;
}

}  // namespace qv
