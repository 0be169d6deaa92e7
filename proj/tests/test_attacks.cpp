#include <gtest/gtest.h>

#include <random>

#include "hilbertmark/attacks.hpp"
#include "hilbertmark/metrics.hpp"
#include "oracles.hpp"

namespace hm = hilbertmark;

namespace {

hm::GrayImage sample(std::uint64_t seed = 1, Eigen::Index h = 24, Eigen::Index w = 20) {
  std::mt19937_64 rng(seed);
  return oracle::random_image(rng, h, w);
}

hm::GrayImage run(const hm::GrayImage& img, std::string_view spec) {
  return hm::apply_attack(img, hm::parse_attack_spec(spec));
}

hm::GrayImage invert(const hm::GrayImage& img) {
  return hm::GrayImage(hm::PixelMatrix(img.pixels().unaryExpr([](std::uint8_t v) {
    return static_cast<std::uint8_t>(255 - v);
  })));
}

}  // namespace

TEST(Parse, Examples) {
  const auto jpeg = hm::parse_attack_spec("jpeg:q=40");
  EXPECT_EQ(jpeg.kind, hm::AttackKind::jpeg);
  EXPECT_EQ(jpeg.number("q"), 40.0);

  const auto rot = hm::parse_attack_spec("rotate:deg=1");
  EXPECT_EQ(rot.kind, hm::AttackKind::rotate);
  EXPECT_EQ(rot.number("deg"), 1.0);
  EXPECT_EQ(rot.text("interp"), "bilinear");

  const auto noise = hm::parse_attack_spec("gaussian_noise:var=0.01@42");
  EXPECT_EQ(noise.kind, hm::AttackKind::gaussian_noise);
  EXPECT_EQ(noise.number("var"), 0.01);
  EXPECT_EQ(noise.number("mean"), 0.0);
  EXPECT_EQ(noise.seed, 42u);
  EXPECT_TRUE(noise.seed_explicit);
}

TEST(Parse, AliasesAndDefaults) {
  EXPECT_EQ(hm::parse_attack_spec("jpeg:quality=40"), hm::parse_attack_spec("jpeg:q=40"));
  EXPECT_EQ(hm::parse_attack_spec("gaussian_noise:variance=0.02"), hm::parse_attack_spec("gaussian_noise:var=0.02"));
  EXPECT_EQ(hm::parse_attack_spec("crop").number("fraction"), 0.25);
  EXPECT_EQ(hm::parse_attack_spec("median_filter").number("size"), 3.0);
  EXPECT_FALSE(hm::parse_attack_spec("crop").seed_explicit);
}

TEST(Parse, RoundTripThroughText) {
  for (const char* text : {"jpeg:q=40", "rotate:deg=-2.5,interp=nearest", "gaussian_noise:var=0.01@42",
                           "crop:fraction=0.1,anchor=top_left", "none", "rescale_nonuniform:w=100,h=80"}) {
    const auto spec = hm::parse_attack_spec(text);
    EXPECT_EQ(hm::parse_attack_spec(hm::format_attack_spec(spec)), spec) << text;
  }
  EXPECT_EQ(hm::format_attack_spec(hm::parse_attack_spec("jpeg:q=40.0")), "jpeg:q=40");
  EXPECT_EQ(hm::format_attack_params(hm::parse_attack_spec("rotate")), "deg=1;interp=bilinear");
}

TEST(Parse, Rejections) {
  for (const char* text : {"blur", "jpeg:q=0", "jpeg:q=101", "jpeg:q=50.5", "jpeg:", "jpeg:q", "jpeg:x=1",
                           "jpeg:q=40,q=50", "median_filter:size=4", "median_filter:size=1",
                           "crop:fraction=1", "crop:anchor=middle", "gaussian_noise@", "gaussian_noise@-1",
                           "gamma:g=0", "gamma:g=nan", "jpeg2000:ratio=0.5"}) {
    EXPECT_THROW(hm::parse_attack_spec(text), hm::AttackParseError) << text;
  }
}

TEST(Apply, Identities) {
  const auto img = sample();
  for (const char* text : {"none", "crop:fraction=0", "rotate:deg=0", "gamma:g=1", "contrast_enhance:c=1",
                           "intensity_adjust:lo=0,hi=1", "rescale_nonuniform:w=20,h=24"}) {
    EXPECT_EQ(run(img, text), img) << text;
  }
}

TEST(Apply, ShapePreserved) {
  const auto img = sample(2, 17, 23);
  for (const char* text : {"additive_uniform_noise", "gaussian_noise", "crop", "jpeg", "median_filter", "rotate:deg=7",
                           "gamma:g=0.9", "intensity_adjust", "gaussian_blur", "lowpass_blur", "contrast_enhance:c=1.2",
                           "dilate", "erode", "rescale_uniform:mid=8", "rescale_nonuniform:w=5,h=9"}) {
    const auto out = run(img, text);
    EXPECT_TRUE(out.same_shape(img)) << text;
  }
}

TEST(Apply, ConstantImageFixedUnderFilters) {
  const hm::GrayImage flat(16, 16, 77);
  for (const char* text : {"median_filter:size=5", "dilate", "erode", "gaussian_blur:radius=2", "lowpass_blur:radius=2",
                           "rescale_uniform:mid=5"}) {
    EXPECT_EQ(run(flat, text), flat) << text;
  }
}

TEST(Apply, NoiseIsSeeded) {
  const auto img = sample(3);
  for (const char* kind : {"gaussian_noise", "additive_uniform_noise"}) {
    const auto a = run(img, std::string(kind) + "@5");
    const auto b = run(img, std::string(kind) + "@5");
    const auto c = run(img, std::string(kind) + "@6");
    EXPECT_EQ(a, b) << kind;
    EXPECT_FALSE(a == c) << kind;
    EXPECT_FALSE(a == img) << kind;
  }
}

TEST(Apply, UniformNoiseBounded) {
  const hm::GrayImage flat(32, 32, 128);
  const auto out = run(flat, "additive_uniform_noise:amplitude=10@1");
  EXPECT_LE(out.pixels().maxCoeff(), 138);
  EXPECT_GE(out.pixels().minCoeff(), 118);
}

TEST(Apply, GaussianNoiseMoments) {
  const hm::GrayImage flat(128, 128, 128);
  const auto out = run(flat, "gaussian_noise:mean=0,var=0.01@9").to_real();
  const double mean = out.mean();
  const double sd = std::sqrt((out.array() - mean).square().mean());
  EXPECT_NEAR(mean, 128.0, 1.0);
  EXPECT_NEAR(sd, 25.5, 1.0);
}

TEST(Apply, MorphologicalDuality) {
  const auto img = sample(4);
  EXPECT_EQ(run(img, "dilate:size=3"), invert(run(invert(img), "erode:size=3")));
  const Eigen::ArrayXXi src = img.pixels().cast<int>().array();
  const Eigen::ArrayXXi d = run(img, "dilate:size=5").pixels().cast<int>().array();
  const Eigen::ArrayXXi e = run(img, "erode:size=5").pixels().cast<int>().array();
  EXPECT_TRUE((d >= src).all());
  EXPECT_TRUE((e <= src).all());
}

TEST(Apply, MedianRemovesImpulse) {
  hm::GrayImage img(9, 9, 50);
  img(4, 4) = 255;
  EXPECT_EQ(run(img, "median_filter:size=3"), hm::GrayImage(9, 9, 50));
}

TEST(Apply, MedianPreservesStepEdge) {
  hm::GrayImage img(8, 8, 10);
  img.pixels().rightCols(4).setConstant(200);
  const auto once = run(img, "median_filter:size=3");
  EXPECT_EQ(once, img);
}

TEST(Apply, CropZeroesCentralArea) {
  const hm::GrayImage flat(20, 20, 90);
  const auto out = run(flat, "crop:fraction=0.25");
  EXPECT_EQ(out(10, 10), 0);
  EXPECT_EQ(out(0, 0), 90);
  EXPECT_EQ((out.pixels().array() == 0).count(), 100);
  const auto corner = run(flat, "crop:fraction=0.25,anchor=bottom_right");
  EXPECT_EQ(corner(19, 19), 0);
  EXPECT_EQ(corner(9, 9), 90);
}

TEST(Apply, RotationQuarterTurnNearest) {
  const auto img = sample(5, 9, 9);
  const auto out = run(img, "rotate:deg=90,interp=nearest");
  // anti-clockwise: the top row ends up in the left column, reversed
  for (Eigen::Index k = 0; k < 9; ++k) EXPECT_EQ(out(8 - k, 0), img(0, k));
}

TEST(Apply, PixelMaps) {
  const hm::GrayImage flat(2, 2, 100);
  EXPECT_EQ(run(flat, "contrast_enhance:c=1.25")(0, 0), oracle::round_clamp(128 + 1.25 * (100 - 128)));
  EXPECT_EQ(run(flat, "gamma:g=1.09")(0, 0), oracle::round_clamp(255 * std::pow(100 / 255.0, 1.09)));
  EXPECT_EQ(run(flat, "intensity_adjust:lo=0.1,hi=1")(0, 0), oracle::round_clamp(255 * (0.1 + 0.9 * 100 / 255.0)));
}

TEST(Apply, BlurKernelsNormalized) {
  hm::GrayImage img(11, 11, 0);
  img(5, 5) = 255;
  const auto box = run(img, "lowpass_blur:radius=1");
  EXPECT_EQ(box(5, 5), oracle::round_clamp(255.0 / 9.0));
  EXPECT_EQ(box(4, 6), box(5, 5));
  EXPECT_EQ(box(3, 5), 0);
  const auto g = run(img, "gaussian_blur:radius=1").to_real();
  EXPECT_NEAR(g.sum(), 255.0, 10.0);
  EXPECT_GT(g(5, 5), g(5, 6));
}

TEST(Apply, JpegQualityOrdering) {
  std::mt19937_64 rng(6);
  hm::GrayImage img(64, 64);
  for (Eigen::Index r = 0; r < 64; ++r) {
    for (Eigen::Index c = 0; c < 64; ++c) {
      img(r, c) = static_cast<std::uint8_t>(128 + 60 * std::sin(r / 5.0) * std::cos(c / 7.0) + (rng() % 9));
    }
  }
  const double e20 = hm::rmse(img, run(img, "jpeg:q=20"));
  const double e90 = hm::rmse(img, run(img, "jpeg:q=90"));
  EXPECT_GT(e20, e90);
  EXPECT_LT(e90, 5.0);
  EXPECT_EQ(hm::decode_jpeg(hm::encode_jpeg(img, 75)), hm::jpeg_round_trip(img, 75));
}

TEST(Apply, Jpeg2000WithoutEncoderIsUnsupported) {
  EXPECT_THROW(run(sample(), "jpeg2000:ratio=4"), hm::UnsupportedAttackError);
}

TEST(Apply, Jpeg2000ExternalCommand) {
  const auto img = sample(7);
  hm::AttackContext ctx;
  ctx.jp2_cmd = "cp {in} {out}";
  EXPECT_EQ(hm::apply_attack(img, hm::parse_attack_spec("jpeg2000:ratio=4"), ctx), img);
  ctx.jp2_cmd = "false";
  EXPECT_THROW(hm::apply_attack(img, hm::parse_attack_spec("jpeg2000:ratio=4"), ctx), std::runtime_error);
}
