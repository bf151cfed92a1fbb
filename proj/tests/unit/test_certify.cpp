#include "doctest.h"
#include "oracles.hpp"

#include "pdolab/certify.hpp"
#include "pdolab/errors.hpp"
#include "pdolab/probes.hpp"

using namespace pdolab;

namespace {

CertifyOptions fast() {
    CertifyOptions o;
    o.l_min = 2;
    o.l_max = 8;
    o.probes = 4;
    o.attach_seminorms = false;
    return o;
}

Symbol power(double m) {
    return Symbol::multiplier(1, [m](std::span<const double> xi) { return Complex(std::pow(japanese_bracket(xi), m)); });
}

} // namespace

TEST_CASE("helpers") {
    CHECK(median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
    std::vector<BandSummary> bands;
    for (int l = 2; l <= 7; ++l) {
        bands.push_back({l, std::pow(2.0, 0.3 * l + 1.0)});
    }
    CHECK(fit_slope(bands) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(to_string(Verdict::suspect_growth) == "SUSPECT-GROWTH");
}

TEST_CASE("identity symbol is bounded with unit ratios") {
    const TorusGrid g(1, 1024);
    const auto r = certify_holder(power(0.0), g, fast(), "one");
    CHECK(r.verdict == Verdict::bounded);
    for (const auto& b : r.bands) {
        CHECK(b.ratio >= 0.9);
        CHECK(b.ratio <= 1.1);
    }
    CHECK(r.probes.size() == 7 * 4);
    for (const auto& p : r.probes) {
        CHECK(p.ratio == doctest::Approx(p.besov_out / p.besov_in));
        CHECK(p.ratio > 0.0);
    }
}

TEST_CASE("decaying symbol and growth control") {
    const TorusGrid g(1, 1024);
    const auto dec = certify_holder(power(-0.25), g, fast());
    CHECK(dec.verdict == Verdict::bounded);
    const auto ctl = certify_holder(negative_control().symbol, g, fast());
    CHECK(ctl.verdict == Verdict::suspect_growth);
    CHECK(ctl.slope == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("property: slope of <xi>^m tracks m on bands 3..8") {
    const TorusGrid g(1, 1024);
    auto opt = fast();
    opt.l_min = 3;
    for (double m : {0.2, 0.5, 0.8}) {
        const auto r = certify_holder(power(m), g, opt);
        CHECK(r.slope >= 0.9 * m);
        CHECK(r.slope <= 1.1 * m);
    }
}

TEST_CASE("multiplier and direct paths give the same ratios") {
    const TorusGrid g(1, 256);
    auto opt = fast();
    opt.l_max = 6;
    opt.probes = 2;
    const auto s = Symbol::multiplier(1, [](std::span<const double> xi) {
        return std::polar(std::pow(japanese_bracket(xi), -0.25), std::sqrt(japanese_bracket(xi)));
    });
    const auto a = certify_holder(s, g, opt);
    opt.path = QuantizePath::direct;
    const auto b = certify_holder(s, g, opt);
    REQUIRE(a.probes.size() == b.probes.size());
    for (std::size_t i = 0; i < a.probes.size(); ++i) {
        CHECK(std::abs(a.probes[i].ratio - b.probes[i].ratio) <= 1e-10);
    }
}

TEST_CASE("preconditions") {
    const TorusGrid g(1, 256);
    auto opt = fast();
    opt.l_max = 5;
    opt.l_min = 2;
    CHECK_THROWS_AS(certify_holder(power(0.0), g, opt), RangeError);
    opt.l_max = 7;
    CHECK_THROWS_AS(certify_holder(power(0.0), g, opt), RangeError);
}

TEST_CASE("determinism") {
    const TorusGrid g(1, 1024);
    const auto a = certify_holder(fefferman_gallery()[1].symbol, g, fast());
    const auto b = certify_holder(fefferman_gallery()[1].symbol, g, fast());
    REQUIRE(a.probes.size() == b.probes.size());
    for (std::size_t i = 0; i < a.probes.size(); ++i) {
        CHECK(a.probes[i].probe_seed == b.probes[i].probe_seed);
        CHECK(a.probes[i].ratio == b.probes[i].ratio);
    }
    CHECK(a.slope == b.slope);
}

TEST_CASE("seminorm constants are attached") {
    const TorusGrid g(1, 1024);
    auto opt = fast();
    opt.attach_seminorms = true;
    const auto gal = gallery_symbol("wave_half");
    const auto r = certify_holder(gal.symbol, g, opt, gal.name, gal.epsilon);
    REQUIRE(r.fefferman.has_value());
    REQUIRE(r.toroidal.has_value());
    CHECK(r.fefferman->epsilon == 0.5);
    CHECK(std::isfinite(r.fefferman->sup_constant));
    CHECK(r.fefferman->entries[0].constant == doctest::Approx(1.0));
}

TEST_CASE("gallery symbols satisfy their envelopes") {
    const auto gallery = fefferman_gallery();
    CHECK(gallery.size() == 6);
    int modulated = 0;
    for (const auto& s : gallery) {
        const ScanPlan p1{TorusGrid(1, 16), 256};
        const ScanPlan p2{TorusGrid(1, 16), 512};
        const auto a = fefferman_seminorm(s.symbol, s.epsilon, 1, p1);
        const auto b = fefferman_seminorm(s.symbol, s.epsilon, 1, p2);
        CHECK(std::isfinite(a.sup_constant));
        CHECK(b.sup_constant <= 1.02 * a.sup_constant);
        modulated += s.symbol.x_independent() ? 0 : 1;
    }
    CHECK(modulated == 3);
    CHECK_THROWS_AS(gallery_symbol("nope"), RangeError);
    CHECK(gallery_symbol("growth_control").formula == negative_control().formula);
}

TEST_CASE("graded certification") {
    const TorusGrid g(1, 1024);
    const GradingExponent kolmogorov{3, 1.0 / 3.0};
    const auto zero_gap = certify_graded(1.0, kolmogorov, g, fast());
    const auto holder = certify_holder(power(0.0), g, fast());
    REQUIRE(zero_gap.probes.size() == holder.probes.size());
    for (std::size_t i = 0; i < holder.probes.size(); ++i) {
        CHECK(zero_gap.probes[i].ratio == doctest::Approx(holder.probes[i].ratio).epsilon(1e-12));
    }
    const auto right = certify_graded(0.8, kolmogorov, g, fast());
    CHECK(right.verdict == Verdict::bounded);
    CHECK(right.s_out == doctest::Approx(0.3));
    const auto wrong = certify_graded(0.8, kolmogorov, g, fast(), true);
    CHECK(wrong.slope == doctest::Approx(0.2).epsilon(0.5));

    const GradingExponent elliptic{2, 0.0};
    CHECK_NOTHROW(certify_graded(0.0, elliptic, g, fast()));
    CHECK_THROWS_AS(certify_graded(0.1, elliptic, g, fast()), RangeError);
    CHECK_THROWS_AS(certify_graded(-0.1, kolmogorov, g, fast()), RangeError);
    CHECK_THROWS_AS(certify_graded(0.0, kolmogorov, g, fast()), RangeError);
}

TEST_CASE("corollary hypothesis and downgrade") {
    CHECK(corollary_hypothesis(0.0, 1.0, 0.0, 0, 1));
    CHECK(corollary_hypothesis(0.25, 0.5, 0.0, 0, 1));
    CHECK(corollary_hypothesis(0.5, 0.5, 0.0, 3, 2));
    CHECK_FALSE(corollary_hypothesis(0.0, 0.5, 0.0, 0, 1));
    CHECK_FALSE(corollary_hypothesis(0.2, 1.0, 0.1, 3, 1));

    const TorusGrid g(1, 1024);
    const auto ok = certify_corollary_m(power(0.0), 0.0, 1.0, 0.0, 0, g, fast());
    CHECK(ok.verdict == Verdict::bounded);
    const auto edge = certify_corollary_m(power(-0.25), 0.25, 0.5, 0.0, 0, g, fast());
    CHECK(edge.verdict == Verdict::bounded);
    const auto fails = certify_corollary_m(power(0.0), 0.0, 0.5, 0.0, 0, g, fast());
    CHECK(fails.verdict == Verdict::info);
    CHECK(fails.notes.size() >= 2);
    const auto grows = certify_corollary_m(power(0.5), 0.0, 0.5, 0.0, 0, g, fast());
    CHECK(grows.verdict == Verdict::suspect_growth);
}

TEST_CASE("frozen envelope") {
    const TorusGrid g(1, 512);
    const auto w = weierstrass(0.5, 7, g);
    for (const auto& s : fefferman_gallery()) {
        const auto r = frozen_envelope(s.symbol, w, 7);
        CHECK(r.bands.size() == 8);
        CHECK(r.pass);
        if (s.symbol.x_independent()) {
            for (const auto& b : r.bands) {
                CHECK(b.operator_sup == doctest::Approx(b.envelope).epsilon(1e-12));
            }
        }
    }
}
