#include "hilbertmark/codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hilbertmark {

namespace {

void check_lambda(double lambda, bool extracting) {
  if (!std::isfinite(lambda)) throw ValidationError("lambda must be finite");
  if (extracting && lambda <= 0.0) {
    throw ValidationError("extraction requires lambda > 0 (got " + std::to_string(lambda) + ")");
  }
  if (!extracting && lambda < 0.0) {
    throw ValidationError("embedding requires lambda >= 0 (got " + std::to_string(lambda) + ")");
  }
}

}  // namespace

EmbedArtifacts make_artifacts(const GrayImage& host, const GrayImage& watermark,
                              const EmbedParams& params) {
  if (!host.same_shape(watermark)) {
    throw ValidationError("host and watermark must have identical dimensions");
  }
  return EmbedArtifacts{decompose(host.to_real(), params.axis),
                        decompose(watermark.to_real(), params.axis), params};
}

RealField embed_values(const EmbedArtifacts& artifacts) {
  const auto& h = artifacts.host;
  const auto& w = artifacts.watermark;
  const double lambda = artifacts.params.lambda;
  return (h.amplitude.array() * (h.phase.array() + lambda * w.amplitude.array()).cos()).matrix();
}

EmbedResult embed(const GrayImage& host, const GrayImage& watermark, const EmbedParams& params) {
  check_lambda(params.lambda, false);
  EmbedArtifacts artifacts = make_artifacts(host, watermark, params);
  RealField values = embed_values(artifacts);
  GrayImage marked = quantize(values);
  if (params.quantize) values = marked.to_real();
  return EmbedResult{std::move(marked), std::move(values), std::move(artifacts)};
}

ExtractResult extract_values(const RealField& marked, const EmbedArtifacts& artifacts) {
  check_lambda(artifacts.params.lambda, true);
  const auto& h = artifacts.host;
  const auto& w = artifacts.watermark;
  require_same_shape(marked, h.amplitude, "extract");
  require_same_shape(w.amplitude, h.amplitude, "extract");
  if (!marked.allFinite()) throw ValidationError("extract: non-finite marked value");

  const double lambda = artifacts.params.lambda;
  ExtractResult out{GrayImage(marked.rows(), marked.cols()), RealField(marked.rows(), marked.cols()),
                    RealField(marked.rows(), marked.cols()), 0};

  for (Eigen::Index c = 0; c < marked.cols(); ++c) {
    for (Eigen::Index r = 0; r < marked.rows(); ++r) {
      const double a = h.amplitude(r, c);
      double b_est = 0.0;
      if (std::abs(a) < kAmplitudeFloor) {
        ++out.floored_pixels;
      } else {
        const double ratio = std::clamp(marked(r, c) / a, -1.0, 1.0);
        b_est = (std::acos(ratio) - h.phase(r, c)) / lambda;
      }
      out.amplitude_estimate(r, c) = b_est;
      out.watermark_values(r, c) = b_est * std::cos(w.phase(r, c));
    }
  }
  out.watermark = quantize(out.watermark_values);
  return out;
}

ExtractResult extract(const GrayImage& marked, const GrayImage& host, const GrayImage& watermark,
                      const EmbedParams& params) {
  check_lambda(params.lambda, true);
  if (!marked.same_shape(host) || !host.same_shape(watermark)) {
    throw ValidationError("marked, host and watermark must have identical dimensions");
  }
  return extract_values(marked.to_real(), make_artifacts(host, watermark, params));
}

}  // namespace hilbertmark
