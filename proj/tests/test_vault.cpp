#include "doctest.h"

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "qv/channels.hpp"
#include "qv/states.hpp"
#include "qv/vault.hpp"

#include "test_support.hpp"

using qv::CompensateTarget;
using qv::DensityMatrix;
using qv::EvolvedImage;
using qv::EvolveMode;
using qv::MapSchedule;
using qv::VaultImage;
using qvtest::max_abs_diff;

namespace {

std::array<long long, 4> color_histogram(const VaultImage& img) {
    std::array<long long, 4> hist{};
    for (const auto& px : img.pixels)
        if (px.indexed()) hist[static_cast<std::size_t>(px.color)]++;
    return hist;
}

}  // namespace

TEST_CASE("image scaffolding") {
    CHECK(qv::vault_color_rgb(0) == std::array<int, 3>{0, 255, 255});
    CHECK(qv::vault_color_rgb(1) == std::array<int, 3>{255, 0, 255});
    CHECK(qv::vault_color_rgb(2) == std::array<int, 3>{255, 255, 0});
    CHECK(qv::vault_color_rgb(3) == std::array<int, 3>{0, 0, 0});
    CHECK_THROWS_AS(qv::vault_color_rgb(4), qv::InvalidColorIndexError);

    VaultImage solid = VaultImage::solid(3, 2, 1);
    CHECK(solid.size() == 6);
    CHECK(solid.at(2, 1).color == 1);
    CHECK_THROWS_AS(VaultImage::solid(0, 2, 1), qv::InvalidStateError);

    VaultImage quad = qv::four_quadrant_image(32, 32);
    CHECK(quad.width == 32);
    std::array<long long, 4> hist = color_histogram(quad);
    for (long long n : hist) CHECK(n == 256);
    CHECK(quad.at(0, 0).color == 0);
    CHECK(quad.at(31, 0).color == 1);
    CHECK(quad.at(0, 31).color == 2);
    CHECK(quad.at(31, 31).color == 3);
    CHECK_THROWS_AS(qv::four_quadrant_image(1, 4), qv::InvalidStateError);
}

TEST_CASE("encoding maps colors onto the alphabet") {
    VaultImage img = VaultImage::solid(2, 1, 2);
    std::vector<qv::PureState> states = qv::encode_image(img);
    REQUIRE(states.size() == 2);
    for (int c = 0; c < 4; ++c)
        CHECK(std::abs(states[0][c] - qv::encoding_basis_d4()[2][c]) == 0.0);

    VaultImage mixed = img;
    mixed.pixels[1].color = -1;
    mixed.pixels[1].mix = {0.5, 0.5, 0.0, 0.0};
    CHECK_THROWS_AS(qv::encode_image(mixed), qv::InvalidColorIndexError);
}

TEST_CASE("exact evolution") {
    MapSchedule simp = MapSchedule::simplified();
    qv::Rng rng(811);

    SUBCASE("identity point keeps every pixel pure and readable") {
        VaultImage quad = qv::four_quadrant_image(8, 8);
        EvolvedImage ev = qv::evolve_image(quad, simp, 0.0, EvolveMode::ExactAverage, rng);
        CHECK_FALSE(ev.reg.has_value());
        qv::DecodeReport rep = qv::decode_image(ev, quad);
        CHECK(rep.accuracy == 1.0);
        CHECK(rep.tie_count == 0);
        CHECK(rep.mean_fidelity == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("midpoint mixes each pixel with its swap partner") {
        VaultImage solid = VaultImage::solid(4, 4, 0);
        EvolvedImage ev = qv::evolve_image(solid, simp, 0.5, EvolveMode::ExactAverage, rng);
        VaultImage mix = qv::mixture_image(ev);
        for (const auto& px : mix.pixels) {
            CHECK_FALSE(px.indexed());
            CHECK(px.mix[0] == doctest::Approx(0.5).epsilon(1e-12));
            CHECK(std::abs(px.mix[1]) < 1e-12);
            CHECK(std::abs(px.mix[2]) < 1e-12);
            CHECK(px.mix[3] == doctest::Approx(0.5).epsilon(1e-12));
        }
    }

    SUBCASE("balanced image at the midpoint decodes at coin-flip accuracy") {
        VaultImage quad = qv::four_quadrant_image(16, 16);
        EvolvedImage ev = qv::evolve_image(quad, simp, 0.5, EvolveMode::ExactAverage, rng);
        qv::DecodeReport rep = qv::decode_image(ev, quad);
        CHECK(rep.accuracy == 0.5);
        CHECK(rep.tie_count == 256);
        CHECK(rep.mean_fidelity == doctest::Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("readability decays monotonically up to the midpoint") {
        VaultImage quad = qv::four_quadrant_image(8, 8);
        double prev = 2.0;
        for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            EvolvedImage ev = qv::evolve_image(quad, simp, t, EvolveMode::ExactAverage, rng);
            qv::DecodeReport rep = qv::decode_image(ev, quad);
            CHECK(rep.accuracy <= prev + 1e-15);
            prev = rep.accuracy;
            if (t < 0.5) CHECK(rep.accuracy == 1.0);
            if (t > 0.5) CHECK(rep.accuracy == 0.0);
        }
    }

    SUBCASE("mixture weights stay normalized") {
        VaultImage quad = qv::four_quadrant_image(6, 6);
        EvolvedImage ev =
            qv::evolve_image(quad, MapSchedule::uniform(4, 2), 0.6, EvolveMode::ExactAverage, rng);
        for (const auto& px : qv::mixture_image(ev).pixels) {
            double sum = 0.0;
            for (double w : px.mix) {
                CHECK(w >= -1e-12);
                sum += w;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("sampled evolution") {
    MapSchedule simp = MapSchedule::simplified();

    SUBCASE("full swap fires deterministically and relabels the image") {
        qv::Rng rng(812);
        VaultImage quad = qv::four_quadrant_image(8, 8);
        EvolvedImage ev = qv::evolve_image(quad, simp, 1.0, EvolveMode::Sampled, rng);
        REQUIRE(ev.reg.has_value());
        for (int k : *ev.reg) CHECK(k == 3);

        qv::DecodeReport raw = qv::decode_image(ev, quad);
        CHECK(raw.accuracy == 0.0);
        qv::DecodeReport swapped = qv::decode_image(ev, quad, std::array<int, 4>{3, 2, 1, 0});
        CHECK(swapped.accuracy == 1.0);
        CHECK(swapped.tie_count == 0);
    }

    SUBCASE("register is reproducible and pixel-order independent") {
        qv::Rng a(813), b(813);
        VaultImage quad = qv::four_quadrant_image(16, 16);
        EvolvedImage ea = qv::evolve_image(quad, simp, 0.5, EvolveMode::Sampled, a);
        EvolvedImage eb = qv::evolve_image(quad, simp, 0.5, EvolveMode::Sampled, b);
        CHECK(*ea.reg == *eb.reg);
        bool mixed = false;
        for (int k : *ea.reg)
            if (k != (*ea.reg)[0]) mixed = true;
        CHECK(mixed);
    }

    SUBCASE("per-pixel states stay pure") {
        qv::Rng rng(814);
        VaultImage quad = qv::four_quadrant_image(4, 4);
        EvolvedImage ev = qv::evolve_image(quad, MapSchedule::uniform(4, 2), 0.7,
                                           EvolveMode::Sampled, rng);
        for (const auto& rho : ev.states) CHECK(rho.purity() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("compensation") {
    MapSchedule simp = MapSchedule::simplified();
    MapSchedule uni = MapSchedule::uniform(4, 2);
    VaultImage quad = qv::four_quadrant_image(8, 8);

    SUBCASE("needs the register") {
        qv::Rng rng(815);
        EvolvedImage exact = qv::evolve_image(quad, simp, 0.5, EvolveMode::ExactAverage, rng);
        CHECK_THROWS_AS(qv::compensate(exact, simp, CompensateTarget::PairSwap),
                        qv::MissingRegisterError);
    }

    SUBCASE("identity target restores the stored image exactly") {
        qv::Rng rng(816);
        for (double t : {0.3, 0.5, 1.0}) {
            EvolvedImage ev = qv::evolve_image(quad, uni, t, EvolveMode::Sampled, rng);
            EvolvedImage fixed = qv::compensate(ev, uni, CompensateTarget::Identity);
            qv::DecodeReport rep =
                qv::decode_image(fixed, quad, qv::relabel_for_target(CompensateTarget::Identity));
            CHECK(rep.accuracy == 1.0);
            CHECK(rep.tie_count == 0);
            CHECK(rep.mean_fidelity == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    SUBCASE("pair-swap target lands every pixel on the relabeled alphabet") {
        qv::Rng rng(817);
        for (const MapSchedule& sched : {simp, uni, MapSchedule::uniform(4, 4)}) {
            for (double t : {0.25, 0.75, 1.0}) {
                EvolvedImage ev = qv::evolve_image(quad, sched, t, EvolveMode::Sampled, rng);
                EvolvedImage fixed = qv::compensate(ev, sched, CompensateTarget::PairSwap);
                qv::DecodeReport rep =
                    qv::decode_image(fixed, quad, qv::relabel_for_target(CompensateTarget::PairSwap));
                CHECK(rep.accuracy == 1.0);
                CHECK(rep.mean_fidelity == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }

    SUBCASE("relabel must be a permutation") {
        qv::Rng rng(818);
        EvolvedImage ev = qv::evolve_image(quad, simp, 0.3, EvolveMode::Sampled, rng);
        CHECK_THROWS_AS(qv::decode_image(ev, quad, std::array<int, 4>{0, 0, 1, 2}),
                        qv::InvalidColorIndexError);
    }

    SUBCASE("relabel tables") {
        CHECK(qv::relabel_for_target(CompensateTarget::Identity) == std::array<int, 4>{0, 1, 2, 3});
        CHECK(qv::relabel_for_target(CompensateTarget::PairSwap) == std::array<int, 4>{3, 2, 1, 0});
    }
}

TEST_CASE("sampled statistics approach the exact average") {
    qv::Rng rng(819);
    MapSchedule simp = MapSchedule::simplified();
    VaultImage solid = VaultImage::solid(64, 64, 0);
    EvolvedImage sampled = qv::evolve_image(solid, simp, 0.3, EvolveMode::Sampled, rng);
    qv::ComplexMatrix acc(4, 4);
    for (const auto& rho : sampled.states) acc += rho.matrix();
    acc *= qv::Complex{1.0 / 4096.0, 0.0};

    qv::Rng rng2(820);
    EvolvedImage exact = qv::evolve_image(solid, simp, 0.3, EvolveMode::ExactAverage, rng2);
    CHECK(max_abs_diff(acc, exact.states[0].matrix()) < 0.04);
}

TEST_CASE("ppm serialization") {
    SUBCASE("indexed round trip") {
        VaultImage quad = qv::four_quadrant_image(2, 2);
        std::ostringstream os;
        qv::MetaBlock meta;
        meta.add("stage", "t0");
        qv::write_ppm(os, quad, &meta);
        const std::string text = os.str();
        CHECK(text.substr(0, 2) == "P3");
        CHECK(text.find("# stage=t0") != std::string::npos);

        std::istringstream is(text);
        VaultImage back = qv::read_ppm(is);
        CHECK(back.width == 2);
        CHECK(back.height == 2);
        for (int i = 0; i < 4; ++i) CHECK(back.pixels[static_cast<std::size_t>(i)].color ==
                                          quad.pixels[static_cast<std::size_t>(i)].color);
    }

    SUBCASE("mixtures blend the palette") {
        VaultImage img = VaultImage::solid(1, 1, 0);
        img.pixels[0].color = -1;
        img.pixels[0].mix = {0.5, 0.0, 0.0, 0.5};
        std::ostringstream os;
        qv::write_ppm(os, img);
        CHECK(os.str().find("0 128 128") != std::string::npos);

        std::istringstream is(os.str());
        VaultImage back = qv::read_ppm(is);
        REQUIRE(back.size() == 1);
        CHECK_FALSE(back.pixels[0].indexed());
        CHECK(back.pixels[0].mix[0] == doctest::Approx(0.5).epsilon(0.01));
        CHECK(back.pixels[0].mix[3] == doctest::Approx(0.5).epsilon(0.01));
        CHECK(std::abs(back.pixels[0].mix[1]) < 0.01);
    }

    SUBCASE("rejects what it cannot parse") {
        std::istringstream p6("P6\n2 2\n255\n");
        CHECK_THROWS_AS(qv::read_ppm(p6), qv::UnsupportedMagicError);
        std::istringstream maxval("P3\n1 1\n65535\n65535 0 0\n");
        CHECK_THROWS_AS(qv::read_ppm(maxval), qv::MalformedFileError);
        std::istringstream truncated("P3\n2 1\n255\n0 255 255\n");
        CHECK_THROWS_AS(qv::read_ppm(truncated), qv::MalformedFileError);
        std::istringstream trailing("P3\n1 1\n255\n0 255 255 9\n");
        CHECK_THROWS_AS(qv::read_ppm(trailing), qv::MalformedFileError);
        std::istringstream range("P3\n1 1\n255\n0 300 0\n");
        CHECK_THROWS_AS(qv::read_ppm(range), qv::MalformedFileError);
        std::istringstream offgamut("P3\n1 1\n255\n255 255 255\n");
        CHECK_THROWS_AS(qv::read_ppm(offgamut), qv::MalformedFileError);
    }

    SUBCASE("comments between tokens are skipped") {
        std::istringstream is("P3 # magic\n# size\n1 1\n255\n# pixel\n0 255 255\n");
        VaultImage img = qv::read_ppm(is);
        CHECK(img.pixels[0].color == 0);
    }
}

TEST_CASE("cmyk csv serialization") {
    SUBCASE("indexed and mixture round trip") {
        VaultImage img = qv::four_quadrant_image(2, 2);
        img.pixels[3].color = -1;
        img.pixels[3].mix = {0.25, 0.25, 0.25, 0.25};
        std::ostringstream os;
        qv::write_cmyk_csv(os, img);
        const std::string text = os.str();
        CHECK(text.find("# width=2") != std::string::npos);
        CHECK(text.find("# height=2") != std::string::npos);
        CHECK(text.find("x,y,c,m,y,k") != std::string::npos);

        std::istringstream is(text);
        VaultImage back = qv::read_cmyk_csv(is);
        CHECK(back.pixels[0].color == img.pixels[0].color);
        CHECK(back.pixels[1].color == img.pixels[1].color);
        CHECK_FALSE(back.pixels[3].indexed());
        CHECK(back.pixels[3].mix[2] == doctest::Approx(0.25).epsilon(1e-12));
    }

    SUBCASE("rejects inconsistent files") {
        std::istringstream missing("# width=2\n# height=1\nx,y,c,m,y,k\n0,0,1,0,0,0\n");
        CHECK_THROWS_AS(qv::read_cmyk_csv(missing), qv::MalformedFileError);
        std::istringstream dup(
            "# width=1\n# height=1\nx,y,c,m,y,k\n0,0,1,0,0,0\n0,0,0,1,0,0\n");
        CHECK_THROWS_AS(qv::read_cmyk_csv(dup), qv::MalformedFileError);
        std::istringstream badsum("# width=1\n# height=1\nx,y,c,m,y,k\n0,0,0.5,0,0,0.2\n");
        CHECK_THROWS_AS(qv::read_cmyk_csv(badsum), qv::MalformedFileError);
        std::istringstream negative("# width=1\n# height=1\nx,y,c,m,y,k\n0,0,1.5,-0.5,0,0\n");
        CHECK_THROWS_AS(qv::read_cmyk_csv(negative), qv::MalformedFileError);
    }
}
