#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graphreg/errors.hpp"
#include "graphreg/forward_model.hpp"
#include "graphreg/radon.hpp"
#include "graphreg/vecops.hpp"
#include "support.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

using namespace graphreg;
using graphreg::testing::random_image;
using graphreg::testing::random_sinogram;

namespace {

// Length of the line {x cos(a) + y sin(a) = s} inside [x0, x1] x [y0, y1],
// by parametric clipping.
double clip_length(double a, double s, double x0, double x1, double y0, double y1) {
    const double c = std::cos(a), sn = std::sin(a);
    const double px = s * c, py = s * sn, dx = -sn, dy = c;
    double t0 = -std::numeric_limits<double>::infinity(), t1 = std::numeric_limits<double>::infinity();
    bool empty = false;
    auto clip = [&](double p, double d, double lo, double hi) {
        if (std::abs(d) < 1e-15) {
            empty = empty || p < lo || p > hi;
            return;
        }
        double ta = (lo - p) / d, tb = (hi - p) / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
    };
    clip(px, dx, x0, x1);
    clip(py, dy, y0, y1);
    return !empty && t1 > t0 ? t1 - t0 : 0.0;
}

}  // namespace

TEST_CASE("geometry") {
    const auto g = RadonGeometry::make(128, 60);
    CHECK(g.n_detectors == 363);
    CHECK(g.angles.size() == 60);
    for (std::size_t i = 1; i < g.angles.size(); ++i) CHECK(g.angles[i] > g.angles[i - 1]);
    CHECK(g.angles.front() >= 0.0);
    CHECK(g.angles.back() < 2.0 * std::numbers::pi);
    CHECK(g.pixel_size() == doctest::Approx(2.0));
    CHECK_THROWS_AS(build_radon(RadonGeometry::make(kMaxRadonImageSize + 1, 4)), ConfigError);
    CHECK_THROWS_AS(RadonGeometry::make(0, 4), ConfigError);
}

TEST_CASE("single pixel entries equal ray-box intersection lengths") {
    const auto g = RadonGeometry::make(12, 17);
    const RadonOperator op = build_radon(g);
    const std::size_t row = 4, col = 7;
    Image u(12, 12);
    u.at(row, col) = 1.0;
    const Sinogram s = op.forward(u);
    const double h = g.pixel_size(), e = g.domain_extent;
    const double x0 = -e / 2 + col * h, y1 = e / 2 - row * h;
    std::size_t hits = 0;
    for (std::size_t a = 0; a < g.n_angles; ++a) {
        for (std::size_t d = 0; d < g.n_detectors; ++d) {
            const double ref = clip_length(g.angles[a], g.detector_offset(d), x0, x0 + h, y1 - h, y1);
            const double got = s.values[a * g.n_detectors + d];
            CHECK(got == doctest::Approx(ref).epsilon(1e-9).scale(h));
            CHECK(got <= std::sqrt(2.0) * h + 1e-12);
            hits += got > 0.0;
        }
    }
    CHECK(hits > 0);
}

TEST_CASE("trace_ray sums to the chord through the whole grid") {
    const auto g = RadonGeometry::make(20, 3);
    const double e = g.domain_extent;
    for (double angle : {0.1, 0.9, 2.3, 4.0}) {
        for (double offset : {0.0, 17.3, -60.0}) {
            double total = 0.0;
            for (const auto& [pix, len] : trace_ray(g, angle, offset)) {
                CHECK(pix < 400u);
                total += len;
            }
            CHECK(total == doctest::Approx(clip_length(angle, offset, -e / 2, e / 2, -e / 2, e / 2)).epsilon(1e-10));
        }
    }
}

TEST_CASE("disc projections approximate chord lengths") {
    const auto g = RadonGeometry::make(128, 60);
    const RadonOperator op = build_radon(g);
    const double r = 80.0, h = g.pixel_size(), e = g.domain_extent;
    Image disc(128, 128);
    // 8x8 supersampled coverage.
    for (std::size_t i = 0; i < 128; ++i)
        for (std::size_t j = 0; j < 128; ++j) {
            int in = 0;
            for (int a = 0; a < 8; ++a)
                for (int b = 0; b < 8; ++b) {
                    const double x = -e / 2 + (j + (b + 0.5) / 8) * h;
                    const double y = e / 2 - (i + (a + 0.5) / 8) * h;
                    in += x * x + y * y <= r * r;
                }
            disc.at(i, j) = in / 64.0;
        }
    const Sinogram s = op.forward(disc);
    double worst = 0.0;
    for (std::size_t a = 0; a < g.n_angles; ++a)
        for (std::size_t d = 0; d < g.n_detectors; ++d) {
            const double off = g.detector_offset(d);
            if (std::abs(off) > 0.9 * r) continue;
            const double chord = 2.0 * std::sqrt(r * r - off * off);
            worst = std::max(worst, std::abs(s.values[a * g.n_detectors + d] - chord) / chord);
        }
    CHECK(worst <= 0.05);
}

TEST_CASE("forward and adjoint are linear and exactly transposed") {
    const auto g = RadonGeometry::make(24, 13);
    const RadonOperator op = build_radon(g);
    CHECK(vec::norm(op.forward(Image(24, 24)).values) == 0.0);
    CHECK(vec::norm(op.adjoint(op.blank_sinogram()).values) == 0.0);

    const Image u = random_image(24, 24, 1, -1, 1), w = random_image(24, 24, 2, -1, 1);
    Image comb(24, 24);
    for (std::size_t i = 0; i < comb.size(); ++i) comb.values[i] = 1.5 * u.values[i] - 2.0 * w.values[i];
    const Sinogram fu = op.forward(u), fw = op.forward(w), fc = op.forward(comb);
    for (std::size_t i = 0; i < fc.size(); ++i) {
        CHECK(fc.values[i] == doctest::Approx(1.5 * fu.values[i] - 2.0 * fw.values[i]).epsilon(1e-12).scale(1.0));
    }

    const CsrMatrix t = op.matrix().transposed().transposed();
    CHECK(t.values == op.matrix().values);
    CHECK(t.col_idx == op.matrix().col_idx);

    CHECK_THROWS_AS(op.forward(Image(23, 24)), DimensionError);
    CHECK_THROWS_AS(op.adjoint(Sinogram(13, 5)), DimensionError);
}

TEST_CASE("adjoint identity on random pairs at N = 64") {
    const auto g = RadonGeometry::make(64, 30);
    const RadonOperator op = build_radon(g);
    for (std::uint64_t k = 0; k < 100; ++k) {
        const Image u = random_image(64, 64, 1000 + k, -1, 1);
        const Sinogram w = random_sinogram(g.n_angles, g.n_detectors, 2000 + k);
        const double lhs = vec::dot(op.forward(u).values, w.values);
        const double rhs = vec::dot(u.values, op.adjoint(w).values);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(std::abs(lhs), std::abs(rhs)));
    }
}

TEST_CASE("back-projection of ones is positive on covered pixels") {
    const auto g = RadonGeometry::make(32, 8);
    const RadonOperator op = build_radon(g);
    const Image b = op.adjoint(Sinogram(g.n_angles, g.n_detectors, 1.0));
    for (double x : b.values) CHECK(x > 0.0);
}

TEST_CASE("operator norm estimate") {
    const auto g = RadonGeometry::make(32, 20);
    const RadonOperator op = build_radon(g);
    const double l = estimate_operator_norm(op);
    for (std::uint64_t k = 0; k < 5; ++k) {
        const Image u = random_image(32, 32, 50 + k, -1, 1);
        CHECK(vec::norm(op.forward(u).values) <= l * vec::norm(u.values) * (1 + 1e-6));
    }
    const RadonOperator half = op.scaled(0.5);
    CHECK(estimate_operator_norm(half) == doctest::Approx(0.5 * l).epsilon(1e-8));
    CHECK(half.scale() == 0.5);
}

TEST_CASE("phase retrieval operator") {
    const auto g = RadonGeometry::make(16, 10);
    auto radon = std::make_shared<const RadonOperator>(build_radon(g));
    const PhaseRetrievalOperator pr(radon);
    const Image u = random_image(16, 16, 5, -1, 1);

    SUBCASE("squares the Radon data") {
        const Sinogram y = radon->forward(u);
        const Sinogram fp = pr_forward(pr, u);
        for (std::size_t i = 0; i < y.size(); ++i) {
            CHECK(fp.values[i] == y.values[i] * y.values[i]);
            CHECK(fp.values[i] >= 0.0);
        }
        Image neg = u;
        vec::scale(-1.0, neg.values);
        CHECK(pr_forward(pr, neg) == fp);
        CHECK(vec::norm(pr_forward(pr, Image(16, 16)).values) == 0.0);
    }

    SUBCASE("derivative adjoint vanishes for w = 0 and u = 0") {
        CHECK(vec::norm(pr_derivative_adjoint_apply(pr, u, pr.radon().blank_sinogram()).values) == 0.0);
        const Sinogram w = random_sinogram(g.n_angles, g.n_detectors, 6);
        CHECK(vec::norm(pr_derivative_adjoint_apply(pr, Image(16, 16), w).values) == 0.0);
    }

    SUBCASE("central differences and adjoint consistency") {
        const std::size_t n = pr.image_pixels(), mm = pr.n_measurements();
        for (std::uint64_t k = 0; k < 10; ++k) {
            const Image uk = random_image(16, 16, 70 + k, -1, 1);
            const Image hk = random_image(16, 16, 80 + k, -1, 1);
            const Sinogram w = random_sinogram(g.n_angles, g.n_detectors, 90 + k);
            const double t = 1e-5;
            std::vector<double> up(n), um(n), fp(mm), fm(mm), jd(mm);
            for (std::size_t i = 0; i < n; ++i) {
                up[i] = uk.values[i] + t * hk.values[i];
                um[i] = uk.values[i] - t * hk.values[i];
            }
            pr.apply(up, fp);
            pr.apply(um, fm);
            pr.derivative(uk.values, hk.values, jd);
            std::vector<double> fd(mm);
            for (std::size_t i = 0; i < mm; ++i) fd[i] = (fp[i] - fm[i]) / (2 * t);
            CHECK(vec::distance(fd, jd) <= 1e-5 * vec::norm(jd));

            const Image adj = pr_derivative_adjoint_apply(pr, uk, w);
            const double lhs = vec::dot(jd, w.values), rhs = vec::dot(hk.values, adj.values);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(lhs), 1.0));

            // 2 A^T((A u) * w)
            const Sinogram y = radon->forward(uk);
            Sinogram yw = y;
            for (std::size_t i = 0; i < mm; ++i) yw.values[i] = 2.0 * y.values[i] * w.values[i];
            const Image ref = radon->adjoint(yw);
            CHECK(vec::distance(ref.values, adj.values) <= 1e-12 * vec::norm(ref.values));
        }
    }

    SUBCASE("linear model wraps the Radon operator") {
        const LinearCtModel ct(radon);
        CHECK(ct.is_linear());
        CHECK_FALSE(pr.is_linear());
        CHECK(ct.apply(u) == radon->forward(u));
        const Sinogram w = random_sinogram(g.n_angles, g.n_detectors, 7);
        CHECK(ct.derivative_adjoint(u, w) == radon->adjoint(w));
    }
}
