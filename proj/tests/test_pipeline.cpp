#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "mbow/pipeline.hpp"
#include "mbow/synthetic.hpp"

using mbow::Detection;
using mbow::DetectionParams;
using mbow::Hypothesis;
using mbow::Pipeline;

TEST_CASE("temporal filter") {
    SUBCASE("worked example: the isolated frame 54 is rejected") {
        std::vector<Hypothesis> hyps{{54, 0.74}, {356, 0.16}, {357, 0.10}};
        const auto kept = mbow::temporal_filter(hyps);
        REQUIRE(kept.size() == 2);
        CHECK(kept[0].frame_id == 356);
        CHECK(kept[0].likelihood == doctest::Approx(16.0 / 26.0));
        CHECK(kept[1].frame_id == 357);
        CHECK(kept[1].likelihood == doctest::Approx(10.0 / 26.0));
        // The rounded presentation 0.60 / 0.40.
        CHECK(kept[0].likelihood == doctest::Approx(0.60).epsilon(0.04));
        CHECK(kept[1].likelihood == doctest::Approx(0.40).epsilon(0.05));
    }
    SUBCASE("an isolated hypothesis vanishes") {
        CHECK(mbow::temporal_filter({{100, 1.0}}).empty());
    }
    SUBCASE("mutual neighbors survive unchanged") {
        const auto kept = mbow::temporal_filter({{10, 0.5}, {11, 0.5}});
        REQUIRE(kept.size() == 2);
        CHECK(kept[0].likelihood == doctest::Approx(0.5));
        CHECK(kept[1].likelihood == doctest::Approx(0.5));
    }
    SUBCASE("never grows and renormalizes or empties") {
        std::mt19937_64 rng(121);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<Hypothesis> hyps;
            const std::size_t n = rng() % 12;
            double total = 0;
            for (std::size_t i = 0; i < n; ++i) {
                hyps.push_back({static_cast<std::uint32_t>(rng() % 40),
                                static_cast<double>(1 + rng() % 100)});
                total += hyps.back().likelihood;
            }
            for (auto& h : hyps) h.likelihood /= total;
            const auto kept = mbow::temporal_filter(hyps);
            CHECK(kept.size() <= hyps.size());
            if (!kept.empty()) {
                double sum = 0;
                for (const auto& h : kept) sum += h.likelihood;
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("consistency check") {
    auto det = [](std::uint32_t query, std::uint32_t match) {
        Detection d;
        d.query_frame_id = query;
        d.matched_frame_id = match;
        return d;
    };

    SUBCASE("perfect continuation is accepted") {
        const std::vector<Detection> history{det(98, 354), det(99, 355)};
        CHECK(mbow::consistency_check(history, {356, 0.9}, 100, 2));
    }
    SUBCASE("empty history is rejected") {
        CHECK_FALSE(mbow::consistency_check({}, {356, 0.9}, 100, 2));
    }
    SUBCASE("an inconsistent past frame is rejected") {
        const std::vector<Detection> history{det(98, 10), det(99, 300)};
        CHECK_FALSE(mbow::consistency_check(history, {301, 0.9}, 100, 2));
    }
    SUBCASE("within +-2 of the continuation is enough") {
        const std::vector<Detection> history{det(98, 352), det(99, 356)};
        CHECK(mbow::consistency_check(history, {355, 0.9}, 100, 2));
    }
    SUBCASE("a no-candidate frame breaks the chain") {
        Detection empty;
        empty.query_frame_id = 99;
        const std::vector<Detection> history{det(98, 354), empty};
        CHECK_FALSE(mbow::consistency_check(history, {356, 0.9}, 100, 2));
    }
    SUBCASE("k=0 disables the check") {
        CHECK(mbow::consistency_check({}, {356, 0.9}, 100, 0));
    }
}

namespace {

DetectionParams fast_params() {
    DetectionParams params;
    params.bits = 256;  // keep unit-scale runs quick
    return params;
}

}  // namespace

TEST_CASE("pipeline basics on a planted loop") {
    mbow::SyntheticConfig config;
    config.n_frames = 70;
    config.loop_start = 50;
    config.revisit_len = 20;
    config.warp_magnitude = 0.0;
    config.seed = 5;

    const auto synthetic = mbow::generate_synthetic(config);
    DetectionParams params = fast_params();
    Pipeline pipeline(params,
                      mbow::generate_pattern(params.pattern_seed, params.bits, 48, 48));

    std::size_t accepted = 0;
    for (std::size_t i = 0; i < synthetic.frames.size(); ++i) {
        const Detection d = pipeline.process_frame(static_cast<int>(i), synthetic.frames[i]);
        CHECK(d.query_frame_id == i);
        if (i == 0) CHECK_FALSE(d.matched_frame_id.has_value());
        if (d.matched_frame_id) {
            ++accepted;
            // Exclusion window and query-before-update ordering.
            CHECK(*d.matched_frame_id + params.t_local <= d.query_frame_id);
            // Detections must land inside the planted revisit.
            CHECK(synthetic.gt.valid(d.query_frame_id, *d.matched_frame_id));
        }
    }
    CHECK(accepted >= 10);
}

TEST_CASE("identical scenes inside the exclusion window are never detected") {
    mbow::SyntheticConfig config;
    config.n_frames = 12;
    config.loop_start = 6;
    config.revisit_len = 6;
    config.warp_magnitude = 0.0;
    config.seed = 6;
    const auto synthetic = mbow::generate_synthetic(config);

    DetectionParams params = fast_params();  // t_local = 20 > 12 frames
    Pipeline pipeline(params,
                      mbow::generate_pattern(params.pattern_seed, params.bits, 48, 48));
    for (std::size_t i = 0; i < synthetic.frames.size(); ++i) {
        const Detection d = pipeline.process_frame(static_cast<int>(i), synthetic.frames[i]);
        CHECK_FALSE(d.matched_frame_id.has_value());
    }
}

TEST_CASE("frames with supplied keypoints bypass detection") {
    mbow::SyntheticConfig config;
    config.n_frames = 30;
    config.loop_start = 20;
    config.revisit_len = 8;
    config.warp_magnitude = 0.0;
    config.seed = 8;
    const auto synthetic = mbow::generate_synthetic(config);

    DetectionParams params = fast_params();
    const auto pattern = mbow::generate_pattern(params.pattern_seed, params.bits, 48, 48);

    // Detector-driven run.
    Pipeline detected(params, pattern);
    for (std::size_t i = 0; i < synthetic.frames.size(); ++i)
        detected.process_frame(static_cast<int>(i), synthetic.frames[i]);

    // Same keypoints handed in externally, plus junk that must be dropped.
    Pipeline ingested(params, pattern);
    for (std::size_t i = 0; i < synthetic.frames.size(); ++i) {
        mbow::Frame frame;
        frame.id = static_cast<int>(i);
        frame.image = synthetic.frames[i];
        frame.keypoints = mbow::detect_keypoints(frame.image, params.upsilon,
                                                 mbow::Roi::full(frame.image));
        frame.keypoints.push_back({0, 0, 0});   // border violation
        frame.keypoints.push_back({-5, 40, 0});  // nonsense coordinate
        ingested.process_frame(std::move(frame));
    }

    REQUIRE(detected.detections().size() == ingested.detections().size());
    for (std::size_t i = 0; i < detected.detections().size(); ++i) {
        CHECK(detected.detections()[i].matched_frame_id ==
              ingested.detections()[i].matched_frame_id);
    }
}

TEST_CASE("out-of-order frames are rejected") {
    DetectionParams params = fast_params();
    Pipeline pipeline(params,
                      mbow::generate_pattern(params.pattern_seed, params.bits, 48, 48));
    mbow::Image img(80, 80);
    pipeline.process_frame(0, img);
    pipeline.process_frame(5, img);
    CHECK_THROWS_AS(pipeline.process_frame(5, img), std::invalid_argument);
    CHECK_THROWS_AS(pipeline.process_frame(3, img), std::invalid_argument);
}

TEST_CASE("pipeline runs are deterministic") {
    mbow::SyntheticConfig config;
    config.n_frames = 40;
    config.loop_start = 25;
    config.revisit_len = 12;
    config.warp_magnitude = 1.0;
    config.seed = 7;
    const auto synthetic = mbow::generate_synthetic(config);

    auto run = [&] {
        DetectionParams params = fast_params();
        Pipeline pipeline(params,
                          mbow::generate_pattern(params.pattern_seed, params.bits, 48, 48));
        for (std::size_t i = 0; i < synthetic.frames.size(); ++i)
            pipeline.process_frame(static_cast<int>(i), synthetic.frames[i]);
        return pipeline.detections();
    };

    const auto a = run();
    const auto b = run();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].matched_frame_id == b[i].matched_frame_id);
        CHECK(a[i].likelihood == b[i].likelihood);
    }
}

TEST_CASE("detection log CSV shape") {
    std::vector<Detection> detections;
    Detection none;
    none.query_frame_id = 0;
    detections.push_back(none);
    Detection hit;
    hit.query_frame_id = 40;
    hit.matched_frame_id = 7;
    hit.likelihood = 0.5;
    detections.push_back(hit);

    const auto path = std::filesystem::temp_directory_path() / "mbow_detections.csv";
    mbow::write_detection_csv(path, detections);

    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "query_frame,matched_frame,likelihood");
    std::getline(in, line);
    CHECK(line == "0,,0");
    std::getline(in, line);
    CHECK(line == "40,7,0.5");
}
