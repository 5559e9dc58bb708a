#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "mbow/bench.hpp"
#include "mbow/codeword.hpp"
#include "mbow/eval.hpp"
#include "mbow/pipeline.hpp"
#include "mbow/synthetic.hpp"

namespace {

using namespace mbow;

struct DetectFlags {
    std::string manifest;
    std::string gt;
    std::string keypoints;
    std::string pattern_file;
    std::string roi;
    std::string out;
    DetectionParams params;
};

void add_detect_flags(CLI::App* cmd, DetectFlags& flags) {
    cmd->add_option("--manifest", flags.manifest, "image manifest, one path per line")
        ->required();
    cmd->add_option("--gt", flags.gt, "ground-truth pair file")->required();
    cmd->add_option("--keypoints", flags.keypoints,
                    "keypoint file (frame_id u v per line); bypasses detection");
    cmd->add_option("--psi", flags.params.psi, "masked-Hamming matching threshold");
    cmd->add_option("--upsilon", flags.params.upsilon, "keypoint detection threshold");
    cmd->add_option("--gamma", flags.params.gamma, "max matched pairs per frame");
    cmd->add_option("--tlocal", flags.params.t_local, "recent frames excluded");
    cmd->add_option("--L", flags.params.bits, "descriptor length in bits");
    cmd->add_option("--pattern-seed", flags.params.pattern_seed, "test pattern seed");
    cmd->add_option("--pattern-file", flags.pattern_file, "load the test pattern from a file");
    cmd->add_option("--accept", flags.params.accept_likelihood,
                    "likelihood acceptance threshold");
    cmd->add_option("--k", flags.params.k_consistency, "temporal consistency depth");
    cmd->add_option("--roi", flags.roi, "keypoint region of interest: u0,v0,u1,v1");
}

std::array<int, 4> parse_roi(const std::string& text) {
    std::array<int, 4> roi{};
    std::istringstream in(text);
    char comma;
    if (!(in >> roi[0] >> comma >> roi[1] >> comma >> roi[2] >> comma >> roi[3]))
        throw std::runtime_error("bad --roi, expected u0,v0,u1,v1");
    return roi;
}

TestPattern make_pattern(const DetectFlags& flags) {
    if (!flags.pattern_file.empty()) {
        TestPattern pattern = load_pattern(flags.pattern_file);
        if (pattern.bits() != flags.params.bits)
            throw std::runtime_error("pattern file has " + std::to_string(pattern.bits()) +
                                     " tests but --L is " +
                                     std::to_string(flags.params.bits));
        return pattern;
    }
    return generate_pattern(flags.params.pattern_seed, flags.params.bits, 48, 48);
}

FrameSource make_source(const DetectFlags& flags) {
    FrameSource source = manifest_source(load_manifest(flags.manifest));
    if (!flags.keypoints.empty()) {
        auto by_frame = std::make_shared<std::map<int, std::vector<Keypoint>>>(
            load_keypoint_file(flags.keypoints));
        source.keypoints = [by_frame](std::size_t i) {
            const auto it = by_frame->find(static_cast<int>(i));
            return it == by_frame->end() ? std::vector<Keypoint>{} : it->second;
        };
    }
    return source;
}

std::vector<double> parse_psi_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        values.push_back(std::stod(token));
    }
    if (values.empty()) throw std::runtime_error("empty --psi-list");
    return values;
}

int run_detect(const DetectFlags& flags) {
    DetectFlags f = flags;
    if (!flags.roi.empty()) f.params.roi = parse_roi(flags.roi);
    const TestPattern pattern = make_pattern(f);
    const FrameSource source = make_source(f);
    const GroundTruth gt = load_ground_truth(f.gt);

    const auto detections = run_pipeline(source, f.params, pattern);
    write_detection_csv(f.out, detections);
    const PRPoint point = score(detections, gt);
    std::cout << "frames: " << source.count << "\n"
              << "detections: " << point.tp + point.fp << "\n"
              << "precision: " << point.precision << "\n"
              << "recall: " << point.recall << "\n"
              << "tp: " << point.tp << " fp: " << point.fp << " fn: " << point.fn << "\n"
              << "log: " << f.out << "\n";
    return 0;
}

int run_sweep(const DetectFlags& flags, const std::string& psi_list_text) {
    DetectFlags f = flags;
    if (!flags.roi.empty()) f.params.roi = parse_roi(flags.roi);
    const TestPattern pattern = make_pattern(f);
    const FrameSource source = make_source(f);
    const GroundTruth gt = load_ground_truth(f.gt);
    const std::vector<double> psi_list = parse_psi_list(psi_list_text);

    const auto points = sweep(source, f.params, pattern, psi_list, gt);
    write_pr_csv(f.out, points);
    std::cout << "points: " << points.size() << "\n"
              << "monotone(tp+fp vs psi): " << (sweep_monotone(points) ? "yes" : "no")
              << "\n"
              << "best recall at 100% precision: " << best_recall_at_full_precision(points)
              << "\n"
              << "csv: " << f.out << "\n";
    return 0;
}

int run_synth(std::size_t frames, std::size_t loop_start, std::size_t revisit, double warp,
              std::uint64_t seed, const std::string& out_dir) {
    SyntheticConfig config;
    config.n_frames = frames;
    config.loop_start = loop_start;
    config.revisit_len = revisit;
    config.warp_magnitude = warp;
    config.seed = seed;
    const SyntheticSequence sequence = generate_synthetic(config);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    std::ofstream manifest(dir / "manifest.txt");
    for (std::size_t i = 0; i < sequence.frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%05zu.pgm", i);
        save_pgm(sequence.frames[i], dir / name);
        manifest << name << '\n';
    }
    manifest.close();

    std::ofstream gt(dir / "groundtruth.txt");
    for (const auto& [query, match] : sequence.gt.valid_pairs)
        gt << query << ' ' << match << '\n';
    gt.close();

    std::cout << "frames: " << sequence.frames.size() << "\n"
              << "ground-truth pairs: " << sequence.gt.valid_pairs.size() << "\n"
              << "wrote: " << (dir / "manifest.txt").string() << ", "
              << (dir / "groundtruth.txt").string() << "\n";
    return 0;
}

int run_verify(std::size_t trials, std::uint64_t seed, const std::string& out) {
    std::ofstream csv(out);
    if (!csv) throw std::runtime_error("cannot write report: " + out);
    csv << "trial,card_ym,card_yk,lhs,rhs,lambda,pass\n";

    const std::size_t bits = 512;
    const TestPattern pattern = generate_pattern(seed, bits, 48, 48);
    std::mt19937_64 rng(seed);
    auto random_bits = [&rng](std::size_t n) {
        BitVector v(n);
        for (std::size_t i = 0; i < n; ++i) v.set_bit(i, (rng() & 1) != 0);
        return v;
    };
    auto random_patch = [&rng]() {
        Patch p(48, 48);
        for (auto& value : p.raw) value = static_cast<std::int64_t>(rng() % 256);
        return p;
    };

    std::size_t failures = 0;
    std::size_t trial_id = 0;

    // Topological-centroid trials: lhs is the worse of the two learned-word
    // distances, rhs the source distance, lambda fixed at 1.
    for (std::size_t t = 0; t < trials; ++t) {
        const Patch a = random_patch();
        const Patch b = random_patch();
        const Codeword dm = learn_codeword(a, b, pattern);
        if (dm.mask.cardinality() == 0) continue;
        const Codeword d1{binary_tests(a, pattern), BitVector::ones(bits)};
        const Codeword d2{binary_tests(b, pattern), BitVector::ones(bits)};
        const double lhs = std::max(masked_hamming(dm, d1), masked_hamming(dm, d2));
        const double rhs = masked_hamming(d1, d2);
        const bool pass = lhs <= rhs + 1e-9;
        failures += pass ? 0 : 1;
        csv << trial_id++ << ',' << dm.mask.cardinality() << ',' << bits << ',' << lhs
            << ',' << rhs << ",1," << (pass ? 1 : 0) << '\n';
    }

    // Locality-preservation trials: lhs is the summed distance to the
    // sources, rhs is lambda times the distance to the learned word.
    for (std::size_t t = 0; t < trials; ++t) {
        const Patch a = random_patch();
        const Patch b = random_patch();
        const Codeword dm = learn_codeword(a, b, pattern);
        if (dm.mask.cardinality() == 0) continue;
        const Codeword d1{binary_tests(a, pattern), BitVector::ones(bits)};
        const Codeword d2{binary_tests(b, pattern), BitVector::ones(bits)};
        Codeword dk{random_bits(bits), random_bits(bits)};
        if (dk.mask.cardinality() == 0) dk.mask.set_bit(rng() % bits, true);

        const double lambda = lambda_bound(dm, dk, bits);
        const double lhs = masked_hamming(dk, d1) + masked_hamming(dk, d2);
        const double rhs = lambda * masked_hamming(dk, dm);
        const bool pass = rhs <= lhs + 1e-9 && lambda > 0.0 && lambda <= 1.0 + 1e-12;
        failures += pass ? 0 : 1;
        csv << trial_id++ << ',' << dm.mask.cardinality() << ',' << dk.mask.cardinality()
            << ',' << lhs << ',' << rhs << ',' << lambda << ',' << (pass ? 1 : 0) << '\n';
    }

    // One-bit table oracle: cells with non-zero masks via the masked Hamming
    // distance, zero-mask cells via directed sums.
    auto one_bit = [](int x, int y) {
        Codeword d{BitVector(1), BitVector(1)};
        d.bits.set_bit(0, x != 0);
        d.mask.set_bit(0, y != 0);
        return d;
    };
    std::size_t table_failures = 0;
    auto check_cell = [&](const Codeword& di, const Codeword& dk, double expected) {
        double got;
        if (di.mask.cardinality() > 0 && dk.mask.cardinality() > 0)
            got = masked_hamming(di, dk);
        else
            got = static_cast<double>(directed_masked_distance(di, dk) +
                                      directed_masked_distance(dk, di));
        if (got != expected) ++table_failures;
    };
    {
        const Codeword d1 = one_bit(1, 1), d2s = one_bit(1, 1), dms = one_bit(1, 1);
        const int table1[4][3] = {{0, 0, 0}, {0, 0, 0}, {1, 1, 1}, {1, 1, 1}};
        const int ks[4][2] = {{1, 1}, {1, 0}, {0, 1}, {0, 0}};
        for (int r = 0; r < 4; ++r) {
            const Codeword dk = one_bit(ks[r][0], ks[r][1]);
            check_cell(d1, dk, table1[r][0]);
            check_cell(d2s, dk, table1[r][1]);
            check_cell(dms, dk, table1[r][2]);
        }
        const Codeword d2d = one_bit(0, 1);
        const int table2[4][2] = {{0, 1}, {0, 1}, {1, 0}, {1, 0}};
        for (int r = 0; r < 4; ++r) {
            const Codeword dk = one_bit(ks[r][0], ks[r][1]);
            check_cell(d1, dk, table2[r][0]);
            check_cell(d2d, dk, table2[r][1]);
        }
    }
    failures += table_failures;

    std::cout << "property trials: " << trial_id << " (report: " << out << ")\n"
              << "one-bit table cells: " << (table_failures == 0 ? "pass" : "FAIL") << "\n"
              << "violations: " << failures << "\n";
    return failures == 0 ? 0 : 1;
}

int run_bench(std::size_t trials, const std::string& out) {
    const TestPattern pattern = generate_pattern(42, 512, 48, 48);
    const TimingStats stats = bench_codeword_learning(trials, 42, pattern);
    std::ofstream csv(out);
    if (!csv) throw std::runtime_error("cannot write timing csv: " + out);
    csv << "mean_us,stddev_us,min_us,max_us,samples,max_min_ratio\n";
    csv << stats.mean_us << ',' << stats.stddev_us << ',' << stats.min_us << ','
        << stats.max_us << ',' << stats.samples << ',' << stats.max_us / stats.min_us
        << '\n';
    std::cout << "mean: " << stats.mean_us << " us\nstddev: " << stats.stddev_us
              << " us\nmin: " << stats.min_us << " us\nmax: " << stats.max_us
              << " us\nmax/min: " << stats.max_us / stats.min_us << "\ncsv: " << out
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"online loop-closure detection with masked binary codewords"};
    app.require_subcommand(1);

    DetectFlags detect_flags;
    CLI::App* detect = app.add_subcommand("detect", "run detection over a sequence");
    add_detect_flags(detect, detect_flags);
    detect->add_option("--out", detect_flags.out, "detection log CSV")->required();

    DetectFlags sweep_flags;
    std::string psi_list = "8,10,12,15,18,20,22,25";
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "precision/recall sweep over psi");
    add_detect_flags(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--psi-list", psi_list, "comma-separated psi values");
    sweep_cmd->add_option("--out", sweep_flags.out, "PR CSV")->required();

    std::size_t synth_frames = 200, synth_loop_start = 150, synth_revisit = 30;
    double synth_warp = 0.0;
    std::uint64_t synth_seed = 1;
    std::string synth_out;
    CLI::App* synth = app.add_subcommand("synth", "write a planted-loop PGM sequence");
    synth->add_option("--frames", synth_frames, "total frames")->required();
    synth->add_option("--loop-start", synth_loop_start, "first revisit frame")->required();
    synth->add_option("--revisit", synth_revisit, "revisit length")->required();
    synth->add_option("--warp", synth_warp, "max affine perturbation, px");
    synth->add_option("--seed", synth_seed, "world seed");
    synth->add_option("--out", synth_out, "output directory")->required();

    std::size_t verify_trials = 10000;
    std::uint64_t verify_seed = 1;
    std::string verify_out;
    CLI::App* verify = app.add_subcommand("verify", "geometry property suites");
    verify->add_option("--trials", verify_trials, "trials per property");
    verify->add_option("--seed", verify_seed, "trial seed");
    verify->add_option("--out", verify_out, "report CSV")->required();

    std::size_t bench_trials = 10000;
    std::string bench_out;
    CLI::App* bench = app.add_subcommand("bench", "codeword learning latency");
    bench->add_option("--trials", bench_trials, "timed learnings");
    bench->add_option("--out", bench_out, "timing CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (detect->parsed()) return run_detect(detect_flags);
        if (sweep_cmd->parsed()) return run_sweep(sweep_flags, psi_list);
        if (synth->parsed())
            return run_synth(synth_frames, synth_loop_start, synth_revisit, synth_warp,
                             synth_seed, synth_out);
        if (verify->parsed()) return run_verify(verify_trials, verify_seed, verify_out);
        if (bench->parsed()) return run_bench(bench_trials, bench_out);
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
    return 1;
}
