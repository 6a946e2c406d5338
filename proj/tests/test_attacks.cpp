#include <map>
#include <set>

#include "doctest.h"
#include "pretouch/attacks.hpp"
#include "pretouch/decoder.hpp"
#include "pretouch/simulation.hpp"
#include "pretouch/space.hpp"

using namespace pretouch;

namespace {

const Layout kLayout = Layout::defaults();
const RuleSet k3D = RuleSet::canonical(Technique::Pattern3D);
const RuleSet k2D = RuleSet::canonical(Technique::Pattern2D);

std::vector<FingerSample> synth(Technique t, std::vector<int> digits) {
    TrajectorySpec spec;
    spec.target = {t, std::move(digits)};
    return synthesize(spec, {}, kLayout);
}

// Codes of length 4 over 0..9 whose digit set is exactly `support`.
std::uint64_t brute_pin(const std::set<int>& support) {
    std::uint64_t n = 0;
    for (int code = 0; code < 10000; ++code) {
        std::set<int> used;
        for (int c = code, k = 0; k < 4; ++k, c /= 10) used.insert(c % 10);
        n += used == support;
    }
    return n;
}

}  // namespace

TEST_CASE("smudge: 3D leaves nothing") {
    const auto log = touch_log(synth(Technique::Pattern3D, {18, 10, 2, 11}));
    CHECK(log.contacts.empty());
    const auto c = smudge_candidates(log, Technique::Pattern3D, k3D, kLayout);
    CHECK(c.full_space);
    CHECK(c.count == 19192);
    TouchLog bogus{{{10, 10}}};
    CHECK_THROWS_AS(smudge_candidates(bogus, Technique::Pattern3D, k3D, kLayout), AttackError);
}

TEST_CASE("smudge: PIN spot support") {
    const auto rules = RuleSet::canonical(Technique::Pin);
    auto count_for = [&](std::vector<int> pin) {
        return smudge_candidates(touch_log(synth(Technique::Pin, pin)), Technique::Pin, rules, kLayout).count;
    };
    CHECK(count_for({1, 2, 3, 4}) == 24);
    CHECK(count_for({1, 1, 2, 3}) == 36);
    CHECK(count_for({7, 7, 7, 7}) == 1);
    CHECK(count_for({0, 9, 0, 9}) == 14);
    CHECK(brute_pin({1, 2, 3}) == 36);
    const auto c = smudge_candidates(touch_log(synth(Technique::Pin, {5, 0, 5, 8})), Technique::Pin, rules, kLayout);
    CHECK(c.count == brute_pin({0, 5, 8}));
    for (const auto& code : c.codes) CHECK(std::set<int>(code.digits.begin(), code.digits.end()) == std::set<int>{0, 5, 8});
    CHECK(smudge_candidates({}, Technique::Pin, rules, kLayout).count == 10000);
}

TEST_CASE("smudge: 2D trace is nearly fully revealing") {
    std::map<std::uint64_t, int> histogram;
    for (const auto& p : enumerate_patterns(k2D, Technique::Pattern2D)) {
        const Code code = to_code(p);
        const auto c = smudge_candidates(touch_log(synth(Technique::Pattern2D, code.digits)), Technique::Pattern2D, k2D,
                                         kLayout);
        ++histogram[c.count];
        CHECK(c.count <= 2);
        CHECK(c.count == c.codes.size());
        CHECK(std::find(c.codes.begin(), c.codes.end(), code) != c.codes.end());
    }
    CHECK(histogram[2] == 1400);  // the reverse of a valid pattern is valid
}

TEST_CASE("depth confusion matrices") {
    DepthConfusion::identity().check();
    DepthConfusion::uniform().check();
    const auto half = DepthConfusion::blend(0.5);
    half.check();
    CHECK(half.p[0][0] == doctest::Approx(0.5 + 0.5 / 3));
    CHECK(half.p[0][1] == doctest::Approx(0.5 / 3));
    DepthConfusion bad = DepthConfusion::identity();
    bad.p[1][1] = 0.9;
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);
    DepthConfusion negative = DepthConfusion::identity();
    negative.p[2] = {-0.1, 0.1, 1.0};
    CHECK_THROWS_AS(negative.check(), std::invalid_argument);
}

TEST_CASE("observe") {
    const Pattern p = to_pattern({Technique::Pattern3D, {18, 10, 2, 11}});
    const auto exact = observe(p, DepthConfusion::identity(), 5);
    CHECK(exact.cells == std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {2, 0}, {2, 0}});
    CHECK(exact.layers == std::vector<int>{2, 1, 0, 1});
    CHECK(observe(p, DepthConfusion::uniform(), 17) == observe(p, DepthConfusion::uniform(), 17));

    // chi-square on the reported layers under uniform confusion, 2 dof per
    // position; 9.21 is the p = 0.01 critical value
    const int n = 10000;
    std::array<std::array<int, 3>, 4> counts{};
    for (int seed = 0; seed < n; ++seed) {
        const auto obs = observe(p, DepthConfusion::uniform(), derive_seed(1234, seed));
        for (int i = 0; i < 4; ++i) ++counts[i][obs.layers[i]];
    }
    for (const auto& row : counts) {
        double chi = 0;
        for (int c : row) chi += (c - n / 3.0) * (c - n / 3.0) / (n / 3.0);
        CHECK(chi < 9.21);
    }
}

TEST_CASE("ranking with identity confusion") {
    const ShoulderSurfer surfer(Technique::Pattern3D, k3D);
    for (std::size_t i = 0; i < surfer.space().size(); i += 7) {
        const Pattern& p = surfer.space()[i];
        const auto r = surfer.rank(observe(p, DepthConfusion::identity(), i), DepthConfusion::identity(), to_code(p));
        CHECK(r.rank_of_truth == 1u);
        CHECK(r.guesses[0].likelihood == 1.0);
        CHECK(surfer.expected_guesses(p, DepthConfusion::identity(), 3, i) == 1.0);
    }
}

TEST_CASE("ranking order") {
    const ShoulderSurfer surfer(Technique::Pattern3D, k3D);
    const auto confusion = DepthConfusion::blend(0.6);
    for (std::size_t i = 0; i < surfer.space().size(); i += 131) {
        const auto r = surfer.rank(observe(surfer.space()[i], confusion, i), confusion);
        for (std::size_t k = 1; k < r.guesses.size(); ++k) {
            CHECK(r.guesses[k - 1].likelihood >= r.guesses[k].likelihood);
            if (r.guesses[k - 1].likelihood == r.guesses[k].likelihood)
                CHECK(r.guesses[k - 1].code.digits < r.guesses[k].code.digits);
        }
    }
    Observation nonsense{Technique::Pattern3D, {{0, 0}, {0, 0}, {0, 0}, {0, 0}}, {2, 2, 2, 2}};
    CHECK_THROWS_AS(surfer.rank(nonsense, confusion), AttackError);
    // the free function agrees with the cached surfer
    const auto obs = observe(surfer.space()[500], confusion, 3);
    const auto a = surfer.rank(obs, confusion, to_code(surfer.space()[500]));
    const auto b = rank_guesses(obs, confusion, k3D, to_code(surfer.space()[500]));
    CHECK(a.rank_of_truth == b.rank_of_truth);
    REQUIRE(a.guesses.size() == b.guesses.size());
    for (std::size_t k = 0; k < a.guesses.size(); ++k) CHECK(a.guesses[k].code == b.guesses[k].code);
}

TEST_CASE("uniform confusion ties the projection class") {
    const ShoulderSurfer surfer(Technique::Pattern3D, k3D);
    // class members by brute force over the space
    std::map<std::vector<std::pair<int, int>>, std::vector<Code>> classes;
    for (const auto& p : surfer.space()) {
        std::vector<std::pair<int, int>> cells;
        for (const auto& q : p.points) cells.push_back({q.col, q.row});
        classes[cells].push_back(to_code(p));
    }
    std::size_t checked = 0;
    for (const auto& [cells, members] : classes) {
        if (checked++ % 40) continue;
        const double m = static_cast<double>(members.size());
        CHECK(surfer.projection_class_size(to_pattern(members[0])) == members.size());
        double mean = 0;
        for (std::size_t k = 0; k < members.size(); ++k) {
            const Pattern p = to_pattern(members[k]);
            const double e = surfer.expected_guesses(p, DepthConfusion::uniform(), 25, k);
            CHECK(e == static_cast<double>(k + 1));  // ties resolve lexicographically
            mean += e / m;
        }
        CHECK(mean == doctest::Approx((m + 1) / 2));
    }
}

TEST_CASE("2D observations have singleton classes") {
    const ShoulderSurfer surfer(Technique::Pattern2D, k2D);
    std::map<std::size_t, int> histogram;
    for (const auto& p : surfer.space()) {
        ++histogram[surfer.projection_class_size(p)];
        CHECK(surfer.rank(observe(p, DepthConfusion::uniform(), 1), DepthConfusion::uniform(), to_code(p)).rank_of_truth == 1u);
    }
    CHECK(histogram.size() == 1);
    CHECK(histogram[1] == 1400);
}

TEST_CASE("Monte-Carlo expectation matches the exact expectation") {
    const ShoulderSurfer surfer(Technique::Pattern3D, k3D);
    for (std::size_t i : {0u, 4000u, 9000u, 19191u}) {
        const Pattern& p = surfer.space()[i];
        for (double lambda : {0.3, 0.8}) {
            const auto c = DepthConfusion::blend(lambda);
            const double exact = surfer.exact_expected_guesses(p, c);
            const double mc = surfer.expected_guesses(p, c, 4000, 77);
            CHECK(mc == doctest::Approx(exact).epsilon(0.05));
            CHECK(surfer.expected_guesses(p, c, 100, 5) == surfer.expected_guesses(p, c, 100, 5));
        }
        CHECK(surfer.exact_expected_guesses(p, DepthConfusion::identity()) == 1.0);
    }
    CHECK_THROWS(surfer.expected_guesses(surfer.space()[0], DepthConfusion::uniform(), 0, 1));
}

TEST_CASE("derived seeds") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}
