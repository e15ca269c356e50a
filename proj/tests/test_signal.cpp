#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "tsd/signal.hpp"

using namespace tsd;

TEST_CASE("dft2 of a constant map has only a DC bin") {
    const double c = 2.5;
    const int n = 4;
    RealMap m(n, n, c);
    SpectrumMap s = dft2(m);
    CHECK(s.at(0, 0, 0).real() == doctest::Approx(c * n * n).epsilon(1e-12));
    for (int r = 0; r < n; ++r)
        for (int col = 0; col < n; ++col)
            if (r != 0 || col != 0) CHECK(std::abs(s.at(0, r, col)) < 1e-10);
}

TEST_CASE("dft2 of an impulse at the origin is all ones") {
    RealMap m(3, 5);
    m.at(0, 0) = 1.0;
    SpectrumMap s = dft2(m);
    for (const auto& v : s.values) {
        CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(v.imag()) < 1e-12);
    }
}

TEST_CASE("dft2 matches the direct O(n^4) oracle and idft2 round-trips") {
    std::mt19937 rng(42);
    RealMap m = oracle::random_map(4, 4, rng);
    SpectrumMap s = dft2(m);
    const auto ref = oracle::dft2_direct(m);
    for (std::size_t i = 0; i < ref.size(); ++i)
        CHECK(std::abs(s.values[i] - ref[i]) < 1e-10);

    const RealMap back = idft2(s)[0];
    for (std::size_t i = 0; i < m.values.size(); ++i)
        CHECK(back.values[i] == doctest::Approx(m.values[i]).epsilon(1e-10));
}

TEST_CASE("idft2 trivial spectra") {
    SpectrumMap zeros(1, 3, 3);
    const RealMap zero_map = idft2(zeros)[0];
    for (double v : zero_map.values) CHECK(v == 0.0);

    SpectrumMap ones(1, 3, 3);
    for (auto& v : ones.values) v = 1.0;
    const RealMap delta = idft2(ones)[0];
    CHECK(delta.at(0, 0) == doctest::Approx(1.0));
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (r != 0 || c != 0) CHECK(std::abs(delta.at(r, c)) < 1e-12);
}

TEST_CASE("crop_pad embeds centered with floor((N-M)/2) leading pad") {
    // 1-D analog [a,b] -> [0,a,b,0]
    RealMap w(1, 2);
    w.at(0, 0) = 3.0;
    w.at(0, 1) = 4.0;
    RealMap padded = crop_pad(w, 1, 4);
    CHECK(padded.values == std::vector<double>{0.0, 3.0, 4.0, 0.0});

    RealMap zeros(2, 2);
    for (double v : crop_pad(zeros, 6, 6).values) CHECK(v == 0.0);

    RealMap ones(3, 3, 1.0);
    RealMap big = crop_pad(ones, 8, 8);
    double sum = 0.0;
    for (double v : big.values) sum += v;
    CHECK(sum == 9.0);
    // centered: leading pad floor((8-3)/2) = 2
    CHECK(big.at(2, 2) == 1.0);
    CHECK(big.at(4, 4) == 1.0);
    CHECK(big.at(1, 2) == 0.0);
    CHECK(big.at(5, 4) == 0.0);
}

TEST_CASE("crop is the exact inverse of crop_pad") {
    std::mt19937 rng(7);
    RealMap w = oracle::random_map(3, 5, rng);
    RealMap back = crop(crop_pad(w, 9, 11), 3, 5);
    CHECK(back.values == w.values); // bit-equal
    CHECK_THROWS(crop_pad(w, 2, 2));
}

TEST_CASE("gaussian_label peak, symmetry, and decay") {
    RealMap y = gaussian_label(8, 8, 1.2);
    CHECK(y.at(0, 0) == 1.0);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            CHECK(y.at(r, c) == doctest::Approx(y.at((8 - r) % 8, (8 - c) % 8)));

    RealMap tight = gaussian_label(8, 8, 1e-3);
    CHECK(tight.at(0, 1) < 1e-12);
    CHECK_THROWS(gaussian_label(8, 8, 0.0));
}

TEST_CASE("hann_window degenerate, boundary, and separable values") {
    CHECK(hann_window(1, 1).at(0, 0) == 1.0);

    RealMap w = hann_window(4, 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(w.at(0, i) == 0.0);
        CHECK(w.at(3, i) == 0.0);
        CHECK(w.at(i, 0) == 0.0);
        CHECK(w.at(i, 3) == 0.0);
    }
    auto hann1 = [](int i, int n) { return 0.5 * (1.0 - std::cos(2.0 * M_PI * i / (n - 1))); };
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(w.at(r, c) == doctest::Approx(hann1(r, 4) * hann1(c, 4)));
}

TEST_CASE("correlate: delta filter on delta sample peaks at zero shift") {
    RealMap d(6, 6);
    d.at(0, 0) = 1.0;
    SpectrumMap ds = dft2(d);
    ResponseMap r = correlate(ds, ds);
    CHECK(r.peak_row == 0);
    CHECK(r.peak_col == 0);
    CHECK(r.peak_value == doctest::Approx(1.0));
}

TEST_CASE("correlate matches the shift theorem") {
    std::mt19937 rng(3);
    RealMap x = oracle::random_map(8, 8, rng);
    // make the zero-shift alignment dominant
    RealMap filt = x;
    SpectrumMap fs = dft2(filt);

    const int sr = 3, sc = 5;
    RealMap shifted(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) shifted.at((r + sr) % 8, (c + sc) % 8) = x.at(r, c);
    ResponseMap resp = correlate(fs, dft2(shifted));
    CHECK(resp.peak_row == sr);
    CHECK(resp.peak_col == sc);

    // and values match the spatial correlation oracle
    const RealMap ref = oracle::correlate_direct(filt, shifted);
    for (std::size_t i = 0; i < ref.values.size(); ++i)
        CHECK(resp.values.values[i] == doctest::Approx(ref.values[i]).epsilon(1e-10));
}

TEST_CASE("correlate is linear in each argument") {
    std::mt19937 rng(11);
    RealMap a = oracle::random_map(8, 8, rng);
    RealMap b = oracle::random_map(8, 8, rng);
    RealMap z = oracle::random_map(8, 8, rng);
    SpectrumMap as = dft2(a), bs = dft2(b), zs = dft2(z);

    SpectrumMap sum = as;
    for (std::size_t i = 0; i < sum.values.size(); ++i)
        sum.values[i] = 2.0 * as.values[i] + 3.0 * bs.values[i];
    ResponseMap lhs = correlate(sum, zs);
    ResponseMap ra = correlate(as, zs), rb = correlate(bs, zs);
    for (std::size_t i = 0; i < lhs.values.values.size(); ++i)
        CHECK(lhs.values.values[i] ==
              doctest::Approx(2.0 * ra.values.values[i] + 3.0 * rb.values.values[i])
                  .epsilon(1e-10));
}

TEST_CASE("Parseval holds on random maps") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const int h = 3 + trial, w = 5 + trial;
        RealMap m = oracle::random_map(h, w, rng);
        SpectrumMap s = dft2(m);
        double spatial = 0.0, spectral = 0.0;
        for (double v : m.values) spatial += v * v;
        for (const auto& v : s.values) spectral += std::norm(v);
        CHECK(spatial * h * w == doctest::Approx(spectral).epsilon(1e-8));
    }
}

TEST_CASE("multi-channel spectra enforce matching dimensions") {
    std::vector<RealMap> chans{RealMap(4, 4), RealMap(4, 5)};
    CHECK_THROWS(dft2(chans));
    SpectrumMap a(1, 4, 4), b(1, 4, 5);
    CHECK_THROWS(correlate(a, b));
    SpectrumMap c(2, 4, 4);
    CHECK_THROWS(correlate(a, c));
}
