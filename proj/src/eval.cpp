#include "mbow/eval.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mbow {

std::set<std::uint32_t> GroundTruth::query_frames() const {
    std::set<std::uint32_t> out;
    for (const auto& [query, match] : valid_pairs) out.insert(query);
    return out;
}

PRPoint score(std::span<const Detection> detections, const GroundTruth& gt) {
    PRPoint point;
    std::set<std::uint32_t> detected_queries;
    for (const Detection& d : detections) {
        if (!d.matched_frame_id) continue;
        detected_queries.insert(d.query_frame_id);
        if (gt.valid(d.query_frame_id, *d.matched_frame_id))
            ++point.tp;
        else
            ++point.fp;
    }
    for (const std::uint32_t query : gt.query_frames())
        if (detected_queries.count(query) == 0) ++point.fn;

    point.precision = (point.tp + point.fp) == 0
                          ? 1.0
                          : static_cast<double>(point.tp) /
                                static_cast<double>(point.tp + point.fp);
    point.recall = (point.tp + point.fn) == 0
                       ? 1.0
                       : static_cast<double>(point.tp) /
                             static_cast<double>(point.tp + point.fn);
    return point;
}

FrameSource memory_source(const std::vector<Image>& frames) {
    FrameSource source;
    source.count = frames.size();
    source.image = [&frames](std::size_t i) { return frames[i]; };
    return source;
}

std::vector<Detection> run_pipeline(const FrameSource& source,
                                    const DetectionParams& params,
                                    const TestPattern& pattern) {
    Pipeline pipeline(params, pattern);
    for (std::size_t i = 0; i < source.count; ++i) {
        Frame frame;
        frame.id = static_cast<int>(i);
        frame.image = source.image(i);
        if (source.keypoints) frame.keypoints = source.keypoints(i);
        pipeline.process_frame(std::move(frame));
    }
    return pipeline.detections();
}

std::vector<PRPoint> sweep(const FrameSource& source, const DetectionParams& base,
                           const TestPattern& pattern, std::span<const double> psi_list,
                           const GroundTruth& gt) {
    if (psi_list.empty()) throw std::invalid_argument("sweep: empty psi list");
    std::vector<PRPoint> points;
    points.reserve(psi_list.size());
    for (const double psi : psi_list) {
        DetectionParams params = base;
        params.psi = psi;
        PRPoint point = score(run_pipeline(source, params, pattern), gt);
        point.psi = psi;
        points.push_back(point);
    }
    return points;
}

double best_recall_at_full_precision(std::span<const PRPoint> points) {
    double best = 0.0;
    for (const PRPoint& p : points)
        if (p.precision == 1.0 && p.recall > best) best = p.recall;
    return best;
}

bool sweep_monotone(std::span<const PRPoint> points) {
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].tp + points[i].fp < points[i - 1].tp + points[i - 1].fp) return false;
    return true;
}

void write_pr_csv(const std::filesystem::path& path, std::span<const PRPoint> points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write PR csv: " + path.string());
    out << "psi,precision,recall,tp,fp,fn\n";
    for (const PRPoint& p : points)
        out << p.psi << ',' << p.precision << ',' << p.recall << ',' << p.tp << ','
            << p.fp << ',' << p.fn << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::filesystem::path> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path.string());
    const std::filesystem::path base = path.parent_path();
    std::vector<std::filesystem::path> images;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!seen.insert(line).second)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": duplicate image entry");
        std::filesystem::path p(line);
        if (p.is_relative()) p = base / p;
        images.push_back(std::move(p));
    }
    if (images.empty())
        throw std::runtime_error(path.string() + ": manifest lists no images");
    return images;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ground truth: " + path.string());
    GroundTruth gt;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        long query, match;
        std::string extra;
        if (!(row >> query >> match) || (row >> extra) || query < 0 || match < 0)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected \"query match\"");
        if (match >= query)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": match frame must precede query frame");
        const auto pair = std::make_pair(static_cast<std::uint32_t>(query),
                                         static_cast<std::uint32_t>(match));
        if (!gt.valid_pairs.insert(pair).second)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": duplicate pair");
    }
    return gt;
}

FrameSource manifest_source(const std::vector<std::filesystem::path>& images) {
    FrameSource source;
    source.count = images.size();
    source.image = [images](std::size_t i) { return load_pgm(images[i]); };
    return source;
}

}  // namespace mbow
