#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "speclocal/bbox.hpp"
#include "speclocal/image.hpp"
#include "speclocal/saliency.hpp"

namespace speclocal {

/// Candidate box with objectness, saliency and the combined score
/// s = s_obj * s_sal, all in [0,1].
struct ScoredProposal {
    BBox box;
    double s_obj = 0.0;
    double s_sal = 0.0;
    double s = 0.0;
};

enum class ProposalSource { ingested, generated };

struct ProposalSet {
    std::string image_id;
    int image_width = 0;
    int image_height = 0;
    ProposalSource source = ProposalSource::generated;
    std::vector<ScoredProposal> items;
    /// All raw objectness scores were equal, so the normalized values carry
    /// no ranking information (every s_obj is 1.0).
    bool uninformative_objectness = false;
};

/// Reads a proposal file (`x y w h score` per line, whitespace or comma
/// separated, '#' lines skipped). Boxes are clamped to the image, scores
/// min-max normalized over the whole file, duplicates dropped (best score
/// kept) and the top `n_max` by raw score returned in descending order.
/// Throws FormatError naming the offending line on malformed input.
ProposalSet ingest_proposals(const std::filesystem::path& path, int image_width,
                             int image_height, int n_max);

/// Sliding-window proposal generator: 8 logarithmic scales from 10% to 90%
/// of the min image dimension, aspect ratios {1/2, 2/3, 1, 3/2, 2}, stride
/// 1/8 of the window side. Windows are scored by interior-minus-boundary
/// mean gradient magnitude and min-max normalized. Deterministic for a
/// fixed (image, n_max, seed).
ProposalSet generate_proposals(const Image& img, int n_max, std::uint64_t seed);

/// Fills s_sal from the map and s = s_obj * s_sal for every proposal,
/// preserving order. The map must match the proposal set's image size.
ProposalSet combine_scores(ProposalSet set, const SaliencyMap& map);

} // namespace speclocal
