#include "speclocal/proposals.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "speclocal/errors.hpp"

namespace speclocal {

namespace {

struct RawRecord {
    BBox box;
    double score;
    std::size_t line_no;
};

std::vector<double> parse_numeric_fields(const std::string& line) {
    std::string cleaned = line;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream in(cleaned);
    std::vector<double> fields;
    double v;
    while (in >> v) fields.push_back(v);
    if (!in.eof()) return {}; // trailing garbage
    return fields;
}

int round_half_up(double v) { return int(std::floor(v + 0.5)); }

// Sort descending by raw score; equal scores keep file order.
void sort_by_raw_score(std::vector<RawRecord>& records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const RawRecord& a, const RawRecord& b) { return a.score > b.score; });
}

} // namespace

ProposalSet ingest_proposals(const std::filesystem::path& path, int image_width,
                             int image_height, int n_max) {
    if (n_max < 1) throw std::invalid_argument("ingest_proposals: n_max must be >= 1");
    if (image_width < 1 || image_height < 1)
        throw std::invalid_argument("ingest_proposals: invalid image dimensions");

    std::ifstream in(path);
    if (!in) throw FormatError("cannot open proposal file: " + path.string());

    std::vector<RawRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;

        const auto fields = parse_numeric_fields(line);
        if (fields.size() != 5)
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": expected 5 fields `x y w h score`");

        const BBox raw{round_half_up(fields[0]), round_half_up(fields[1]),
                       round_half_up(fields[2]), round_half_up(fields[3])};
        if (!valid_box(raw))
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": box width/height below 1");
        const auto clipped = clip_to_image(raw, image_width, image_height);
        if (!clipped)
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": box lies outside the image");
        records.push_back({*clipped, fields[4], line_no});
    }
    if (records.empty()) throw FormatError("proposal file has no records: " + path.string());

    // Min-max normalization runs over every record in the file.
    double lo = records.front().score, hi = records.front().score;
    for (const auto& r : records) {
        lo = std::min(lo, r.score);
        hi = std::max(hi, r.score);
    }
    const bool degenerate = (hi <= lo);

    sort_by_raw_score(records);

    ProposalSet set;
    set.image_id = path.stem().string();
    set.image_width = image_width;
    set.image_height = image_height;
    set.source = ProposalSource::ingested;
    set.uninformative_objectness = degenerate;

    std::set<std::tuple<int, int, int, int>> seen;
    for (const auto& r : records) {
        if (int(set.items.size()) >= n_max) break;
        if (!seen.insert({r.box.x, r.box.y, r.box.w, r.box.h}).second) continue;
        const double s_obj = degenerate ? 1.0 : (r.score - lo) / (hi - lo);
        set.items.push_back({r.box, s_obj, 0.0, 0.0});
    }
    return set;
}

namespace {

// Summed-area table over gradient magnitude; rectangle sums in O(1).
struct IntegralImage {
    int width = 0, height = 0;
    std::vector<double> sums; // (width+1) x (height+1)

    explicit IntegralImage(const GradientField& g) : width(g.width), height(g.height) {
        sums.assign(std::size_t(width + 1) * (height + 1), 0.0);
        for (int y = 0; y < height; ++y) {
            double row = 0.0;
            for (int x = 0; x < width; ++x) {
                row += g.magnitude[g.index(x, y)];
                sums[std::size_t(y + 1) * (width + 1) + (x + 1)] =
                    sums[std::size_t(y) * (width + 1) + (x + 1)] + row;
            }
        }
    }

    [[nodiscard]] double box_sum(const BBox& b) const {
        const std::size_t stride = width + 1;
        return sums[std::size_t(b.y2()) * stride + b.x2()] -
               sums[std::size_t(b.y) * stride + b.x2()] -
               sums[std::size_t(b.y2()) * stride + b.x] + sums[std::size_t(b.y) * stride + b.x];
    }
};

struct Candidate {
    BBox box;
    double raw;
};

} // namespace

ProposalSet generate_proposals(const Image& img, int n_max, std::uint64_t seed) {
    if (n_max < 1) throw std::invalid_argument("generate_proposals: n_max must be >= 1");
    if (img.width < 32 || img.height < 32)
        throw std::invalid_argument("generate_proposals: image must be at least 32x32");
    (void)seed; // lattice and scoring are fully deterministic; kept for interface stability

    const Image gray = to_grayscale(img);
    const GradientField grad = gradients(gray);
    const IntegralImage integral(grad);

    const int min_dim = std::min(img.width, img.height);
    static constexpr double kAspects[] = {0.5, 2.0 / 3.0, 1.0, 1.5, 2.0};
    constexpr int kScaleSteps = 8;

    std::vector<Candidate> candidates;
    std::set<std::tuple<int, int, int, int>> seen;
    for (int t = 0; t < kScaleSteps; ++t) {
        const double side = 0.1 * min_dim * std::pow(9.0, t / double(kScaleSteps - 1));
        for (const double aspect : kAspects) {
            const int w = int(std::lround(side * std::sqrt(aspect)));
            const int h = int(std::lround(side / std::sqrt(aspect)));
            if (w < 3 || h < 3 || w > img.width || h > img.height) continue;

            const int stride_x = std::max(1, int(std::lround(w / 8.0)));
            const int stride_y = std::max(1, int(std::lround(h / 8.0)));
            const int ring = std::clamp(int(std::lround(std::min(w, h) / 8.0)), 1,
                                        (std::min(w, h) - 1) / 2);
            for (int y = 0; y + h <= img.height; y += stride_y) {
                for (int x = 0; x + w <= img.width; x += stride_x) {
                    const BBox box{x, y, w, h};
                    if (!seen.insert({x, y, w, h}).second) continue;
                    const BBox interior{x + ring, y + ring, w - 2 * ring, h - 2 * ring};
                    const double total = integral.box_sum(box);
                    const double inner = integral.box_sum(interior);
                    const double ring_sum = total - inner;
                    const double ring_area = double(box.area() - interior.area());
                    const double raw =
                        inner / double(interior.area()) - ring_sum / ring_area;
                    candidates.push_back({box, raw});
                }
            }
        }
    }

    if (candidates.empty())
        throw NumericError("generate_proposals: window lattice is empty");

    double lo = candidates.front().raw, hi = candidates.front().raw;
    for (const auto& c : candidates) {
        lo = std::min(lo, c.raw);
        hi = std::max(hi, c.raw);
    }
    const bool degenerate = (hi <= lo);

    // Ranking: score descending, then smaller area, then raster order.
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.raw != b.raw) return a.raw > b.raw;
        if (a.box.area() != b.box.area()) return a.box.area() < b.box.area();
        return std::tie(a.box.y, a.box.x, a.box.w, a.box.h) <
               std::tie(b.box.y, b.box.x, b.box.w, b.box.h);
    });

    ProposalSet set;
    set.image_width = img.width;
    set.image_height = img.height;
    set.source = ProposalSource::generated;
    set.uninformative_objectness = degenerate;
    const std::size_t count = std::min<std::size_t>(candidates.size(), std::size_t(n_max));
    set.items.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double s_obj = degenerate ? 1.0 : (candidates[i].raw - lo) / (hi - lo);
        set.items.push_back({candidates[i].box, s_obj, 0.0, 0.0});
    }
    return set;
}

ProposalSet combine_scores(ProposalSet set, const SaliencyMap& map) {
    if (map.width != set.image_width || map.height != set.image_height)
        throw std::invalid_argument("combine_scores: saliency map dimensions do not match");
    for (auto& p : set.items) {
        p.s_sal = box_saliency(map, p.box);
        p.s = p.s_obj * p.s_sal;
    }
    return set;
}

} // namespace speclocal
