#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graphreg/errors.hpp"
#include "graphreg/metrics.hpp"
#include "graphreg/rng.hpp"
#include "graphreg/vecops.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

using namespace graphreg;
using graphreg::testing::random_image;

namespace {

// Direct per-window SSIM with an 11 x 11 Gaussian (sigma 1.5).
double ssim_oracle(const Image& x, const Image& y) {
    double w[11][11], sum = 0.0;
    for (int i = 0; i < 11; ++i)
        for (int j = 0; j < 11; ++j) {
            w[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2 * 1.5 * 1.5));
            sum += w[i][j];
        }
    const double c1 = 0.01 * 0.01, c2 = 0.03 * 0.03;
    double total = 0.0;
    std::size_t count = 0;
    for (std::size_t r = 0; r + 11 <= x.height; ++r)
        for (std::size_t c = 0; c + 11 <= x.width; ++c) {
            double mx = 0, my = 0;
            for (int i = 0; i < 11; ++i)
                for (int j = 0; j < 11; ++j) {
                    mx += w[i][j] / sum * x.at(r + i, c + j);
                    my += w[i][j] / sum * y.at(r + i, c + j);
                }
            double vx = 0, vy = 0, cxy = 0;
            for (int i = 0; i < 11; ++i)
                for (int j = 0; j < 11; ++j) {
                    const double a = x.at(r + i, c + j) - mx, b = y.at(r + i, c + j) - my;
                    vx += w[i][j] / sum * a * a;
                    vy += w[i][j] / sum * b * b;
                    cxy += w[i][j] / sum * a * b;
                }
            total += (2 * mx * my + c1) * (2 * cxy + c2) / ((mx * mx + my * my + c1) * (vx + vy + c2));
            ++count;
        }
    return total / static_cast<double>(count);
}

Image add_noise(const Image& u, double sigma, std::uint64_t seed) {
    Rng rng(seed);
    Image out = u;
    for (double& v : out.values) v += sigma * rng.normal();
    return out;
}

}  // namespace

TEST_CASE("relative error") {
    const Image t(2, 2, {1, 0, 0, 0});
    CHECK(rre(t, t) == 0.0);
    CHECK(rre(Image(2, 2), t) == 1.0);
    CHECK(rre(Image(2, 2, {2, 0, 0, 0}), t) == 1.0);
    CHECK(rre(Image(2, 2, {1, 0, 0, 0.5}), t) == doctest::Approx(0.5));
    CHECK_THROWS_AS(rre(t, Image(2, 2)), MetricError);
    CHECK_THROWS_AS(rre(Image(3, 2), Image(2, 3, 1.0)), DimensionError);
}

TEST_CASE("psnr") {
    const Image t(4, 4, 0.5);
    Image e = t;
    e.values[0] += 0.1;
    CHECK(psnr(e, t) == doctest::Approx(20.0));
    e.values[0] = 1.5;
    CHECK(psnr(e, t) == doctest::Approx(0.0).scale(1.0));
    CHECK(psnr(t, t) == std::numeric_limits<double>::infinity());
    CHECK(psnr_rmse(t, t) == std::numeric_limits<double>::infinity());
    // RMSE 0.1 over 16 pixels
    CHECK(psnr_rmse(Image(4, 4, 0.6), t) == doctest::Approx(20.0));
    CHECK(psnr(Image(4, 4, 0.6), t) == doctest::Approx(20.0 - 20.0 * std::log10(4.0)));

    for (std::uint64_t s = 0; s < 20; ++s) {
        const Image a = random_image(9, 7, 40 + s), b = random_image(9, 7, 60 + s);
        const double lhs = psnr(a, b);
        const double rhs = -20.0 * std::log10(rre(a, b) * vec::norm(b.values));
        CHECK(std::abs(lhs - rhs) <= 1e-10);
        CHECK(psnr_rmse(a, b) - lhs == doctest::Approx(10.0 * std::log10(63.0)));
    }
}

TEST_CASE("ssim against a direct window oracle") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const Image a = random_image(20, 17, 70 + s), b = add_noise(a, 0.1, 80 + s);
        CHECK(ssim(b, a) == doctest::Approx(ssim_oracle(b, a)).epsilon(1e-10));
        CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
    }
    const Image a = random_image(16, 16, 3);
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ssim(Image(16, 16, 0.4), Image(16, 16, 0.4)) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ssim(Image(10, 16), Image(10, 16)), MetricError);
}

TEST_CASE("ssim of an inverted binary pattern is low") {
    Image u(11, 11), inv(11, 11);
    for (std::size_t i = 0; i < u.size(); ++i) {
        u.values[i] = ((i / 11) + (i % 11)) % 2;
        inv.values[i] = 1.0 - u.values[i];
    }
    CHECK(ssim(inv, u) < 0.5);
    CHECK(ssim(inv, u) >= -1.0);
}

TEST_CASE("ssim decreases with noise level") {
    const Image t = random_image(32, 32, 9);
    double low = 0.0, high = 0.0;
    const int trials = 100;
    for (int k = 0; k < trials; ++k) {
        const double sl = ssim(add_noise(t, 0.02, 1000 + k), t);
        const double sh = ssim(add_noise(t, 0.2, 2000 + k), t);
        CHECK(sl <= 1.0);
        CHECK(sh >= -1.0);
        low += sl;
        high += sh;
    }
    CHECK(low / trials > high / trials);
    CHECK(low / trials > 0.9);
}

TEST_CASE("pixel-wise metrics ignore a common pixel permutation") {
    const Image t = random_image(8, 8, 11), e = add_noise(t, 0.05, 12);
    std::vector<std::size_t> perm(64);
    std::iota(perm.begin(), perm.end(), 0);
    Rng rng(13);
    for (std::size_t i = 63; i > 0; --i) std::swap(perm[i], perm[rng.next_u64() % (i + 1)]);
    Image tp(8, 8), ep(8, 8);
    for (std::size_t i = 0; i < 64; ++i) {
        tp.values[i] = t.values[perm[i]];
        ep.values[i] = e.values[perm[i]];
    }
    CHECK(rre(ep, tp) == doctest::Approx(rre(e, t)).epsilon(1e-14));
    CHECK(psnr(ep, tp) == doctest::Approx(psnr(e, t)).epsilon(1e-14));
    CHECK(psnr_rmse(ep, tp) == doctest::Approx(psnr_rmse(e, t)).epsilon(1e-14));
}

TEST_CASE("evaluate bundles all metrics") {
    const Image t = random_image(12, 12, 21), e = add_noise(t, 0.1, 22);
    const MetricReport m = evaluate(e, t);
    CHECK(m.rre == rre(e, t));
    CHECK(m.psnr == psnr(e, t));
    CHECK(m.psnr_rmse == psnr_rmse(e, t));
    CHECK(m.ssim == ssim(e, t));
}
