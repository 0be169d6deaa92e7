#ifndef HILBERTMARK_CODEC_HPP_
#define HILBERTMARK_CODEC_HPP_

#include "hilbertmark/hilbert.hpp"
#include "hilbertmark/types.hpp"

namespace hilbertmark {

/// Host amplitudes below this are treated as zero when dividing during extraction.
inline constexpr double kAmplitudeFloor = 1e-12;

struct EmbedParams {
  double lambda = 0.0018;
  Axis axis = Axis::columns;
  bool quantize = true;
};

/// Non-blind side information: host (a, Theta) and watermark (b, Phi) decompositions.
struct EmbedArtifacts {
  Decomposition host;
  Decomposition watermark;
  EmbedParams params;
};

struct EmbedResult {
  GrayImage marked;
  RealField marked_values;  ///< a .* cos(Theta + lambda b) before quantization
  EmbedArtifacts artifacts;
};

/// Decomposes host and watermark and builds the side information for `params`.
EmbedArtifacts make_artifacts(const GrayImage& host, const GrayImage& watermark,
                              const EmbedParams& params);

/// a .* cos(Theta + lambda * b), unquantized.
RealField embed_values(const EmbedArtifacts& artifacts);

/// Adds the scaled watermark amplitude to the host phase and rebuilds the image.
/// `marked` is always an 8-bit image; `params.quantize` only decides whether
/// `marked_values` is the float field (false) or the rounded one (true).
EmbedResult embed(const GrayImage& host, const GrayImage& watermark, const EmbedParams& params);

struct ExtractResult {
  GrayImage watermark;           ///< rounded/clamped extracted watermark
  RealField watermark_values;    ///< b~ .* cos(Phi) before quantization
  RealField amplitude_estimate;  ///< b~
  Eigen::Index floored_pixels = 0;
};

/// Recovers b~ = (acos(clamp(Zw / a)) - Theta) / lambda and W~ = b~ cos(Phi).
/// `marked` may be any field of marked intensities (e.g. the unquantized
/// embedding output or an attacked image).
ExtractResult extract_values(const RealField& marked, const EmbedArtifacts& artifacts);

/// Non-blind extraction: recomputes the side information from host and watermark.
ExtractResult extract(const GrayImage& marked, const GrayImage& host, const GrayImage& watermark,
                      const EmbedParams& params);

}  // namespace hilbertmark

#endif  // HILBERTMARK_CODEC_HPP_
