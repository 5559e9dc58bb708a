#include <doctest.h>

#include <random>

#include "mbow/frontend.hpp"
#include "support/oracles.hpp"

using mbow::Frame;
using mbow::Image;
using mbow::Keypoint;
using mbow::Roi;

namespace {

Image constant_image(int w, int h, std::uint8_t value) {
    Image img(w, h);
    for (auto& p : img.pixels) p = value;
    return img;
}

Image noise_image(int w, int h, std::uint64_t seed) {
    Image img(w, h);
    std::mt19937_64 rng(seed);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng() % 256);
    return img;
}

}  // namespace

TEST_CASE("constant image has no keypoints") {
    const Image img = constant_image(100, 100, 128);
    CHECK(mbow::detect_keypoints(img, 35, Roi::full(img)).empty());
}

TEST_CASE("tiny images are rejected") {
    const Image img = constant_image(6, 6, 0);
    CHECK_THROWS_AS(mbow::detect_keypoints(img, 35, Roi::full(img)), std::invalid_argument);
}

TEST_CASE("white square yields its four corners after suppression") {
    Image img = constant_image(120, 120, 0);
    for (int v = 40; v < 80; ++v)
        for (int u = 40; u < 80; ++u) img.at(u, v) = 255;

    const auto keypoints = mbow::detect_keypoints(img, 35, Roi::full(img));
    CHECK(keypoints.size() == 4);
    const int corners[4][2] = {{40, 40}, {79, 40}, {40, 79}, {79, 79}};
    for (const auto& [cu, cv] : corners) {
        bool found = false;
        for (const Keypoint& kp : keypoints)
            if (std::abs(kp.u - cu) <= 2 && std::abs(kp.v - cv) <= 2) found = true;
        CHECK(found);
    }
}

TEST_CASE("raising the detection threshold never adds keypoints") {
    const Image img = noise_image(160, 120, 90);
    std::size_t prev = SIZE_MAX;
    for (int threshold : {10, 20, 35, 50, 80}) {
        const auto n = mbow::detect_keypoints(img, threshold, Roi::full(img)).size();
        CHECK(n <= prev);
        prev = n;
    }
}

TEST_CASE("keypoint ingestion drops border and ROI violations") {
    const Image img = constant_image(200, 200, 0);
    const Roi roi{0, 0, 199, 150};
    const std::vector<Keypoint> raw = {
        {0, 0, 0},      // border violation
        {100, 100, 0},  // fine
        {100, 160, 0},  // outside ROI (v > 150)
        {30, 30, 0},    // fine
    };
    const auto result = mbow::filter_keypoints(raw, img, roi);
    CHECK(result.accepted.size() == 2);
    CHECK(result.dropped == 2);
}

TEST_CASE("patch extraction is the raw crop") {
    Image img(100, 100);
    for (int v = 0; v < 100; ++v)
        for (int u = 0; u < 100; ++u) img.at(u, v) = static_cast<std::uint8_t>((u * 7 + v) % 256);

    SUBCASE("center keypoint indexes rows v-24..v+23, cols u-24..u+23") {
        const mbow::Patch p = mbow::extract_patch(img, {50, 50, 0});
        for (int v = 0; v < 48; ++v)
            for (int u = 0; u < 48; ++u)
                CHECK(p.at(u, v) == img.at(50 - 24 + u, 50 - 24 + v));
    }
    SUBCASE("keypoint at (24,24) crops from the image origin") {
        const mbow::Patch p = mbow::extract_patch(img, {24, 24, 0});
        CHECK(p.at(0, 0) == img.at(0, 0));
        CHECK(p.at(47, 47) == img.at(47, 47));
    }
    SUBCASE("one-pixel keypoint shift shifts the crop by one pixel") {
        const mbow::Patch a = mbow::extract_patch(img, {50, 50, 0});
        const mbow::Patch b = mbow::extract_patch(img, {51, 50, 0});
        for (int v = 0; v < 48; ++v)
            for (int u = 0; u < 47; ++u) CHECK(a.at(u + 1, v) == b.at(u, v));
    }
    SUBCASE("margin violations throw") {
        CHECK_THROWS_AS(mbow::extract_patch(img, {23, 50, 0}), std::invalid_argument);
        CHECK_THROWS_AS(mbow::extract_patch(img, {50, 77, 0}), std::invalid_argument);
    }
}

TEST_CASE("matching: identical frames self-match at distance zero") {
    const mbow::TestPattern pattern = mbow::generate_pattern(42, 512, 48, 48);
    const Image img = noise_image(200, 160, 7);

    Frame prev;
    prev.id = 0;
    prev.image = img;
    prev.keypoints = mbow::detect_keypoints(img, 35, Roi::full(img));
    REQUIRE(prev.keypoints.size() >= 5);
    mbow::compute_descriptors(prev, pattern);

    Frame cur = prev;
    cur.id = 1;

    const auto matches = mbow::match_features(prev, cur, 100000, 128);
    CHECK(matches.size() == prev.keypoints.size());
    for (const auto& m : matches) {
        CHECK(m.distance == 0);
        CHECK(m.kp_prev.u == m.kp_cur.u);
        CHECK(m.kp_prev.v == m.kp_cur.v);
    }
}

TEST_CASE("matching finds a synthetic 10px translation") {
    const mbow::TestPattern pattern = mbow::generate_pattern(42, 512, 48, 48);
    const Image world = noise_image(260, 160, 8);

    // Two crops of the same world, 10 px apart.
    Image a(200, 160), b(200, 160);
    for (int v = 0; v < 160; ++v)
        for (int u = 0; u < 200; ++u) {
            a.at(u, v) = world.at(u, v);
            b.at(u, v) = world.at(u + 10, v);
        }

    Frame prev;
    prev.id = 0;
    prev.image = a;
    prev.keypoints = mbow::detect_keypoints(a, 35, Roi::full(a));
    mbow::compute_descriptors(prev, pattern);

    Frame cur;
    cur.id = 1;
    cur.image = b;
    cur.keypoints = mbow::detect_keypoints(b, 35, Roi::full(b));
    mbow::compute_descriptors(cur, pattern);

    const auto matches = mbow::match_features(prev, cur, 1000, 128);
    REQUIRE(matches.size() >= 3);
    std::size_t translated = 0;
    for (const auto& m : matches)
        if (m.kp_prev.u - m.kp_cur.u == 10 && m.kp_prev.v == m.kp_cur.v) ++translated;
    // The dominant motion must be the planted translation.
    CHECK(translated * 2 > matches.size());
}

TEST_CASE("match list is capped, sorted, and mutual-best") {
    const mbow::TestPattern pattern = mbow::generate_pattern(42, 512, 48, 48);
    const Image img = noise_image(260, 200, 9);

    Frame prev;
    prev.id = 0;
    prev.image = img;
    prev.keypoints = mbow::detect_keypoints(img, 30, Roi::full(img));
    REQUIRE(prev.keypoints.size() > 10);
    mbow::compute_descriptors(prev, pattern);
    Frame cur = prev;
    cur.id = 1;

    const auto capped = mbow::match_features(prev, cur, 3, 128);
    CHECK(capped.size() == 3);

    const auto all = mbow::match_features(prev, cur, 10000, 128);
    for (std::size_t i = 1; i < all.size(); ++i)
        CHECK(all[i - 1].distance <= all[i].distance);

    // Mutual-best: re-run the candidate search backwards by hand.
    for (const auto& m : all) {
        std::uint32_t best = UINT32_MAX;
        std::size_t best_prev = SIZE_MAX;
        for (std::size_t p = 0; p < prev.keypoints.size(); ++p) {
            if (std::abs(prev.keypoints[p].u - m.kp_cur.u) > 50 ||
                std::abs(prev.keypoints[p].v - m.kp_cur.v) > 50)
                continue;
            const auto d = static_cast<std::uint32_t>(
                mbow::hamming(prev.descriptors[p], cur.descriptors[m.cur_index]));
            if (d < best) {
                best = d;
                best_prev = p;
            }
        }
        CHECK(best_prev == m.prev_index);
    }
}
