#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "progeny/errors.hpp"
#include "progeny/gw_sim.hpp"
#include "progeny/laws.hpp"
#include "progeny/progeny_map.hpp"
#include "progeny/rng.hpp"
#include "progeny/sibuya.hpp"

using gw::make_rational;
using gw::Rational;
using gw::OffspringLaw;
using namespace gw::sim;

namespace {

Rational complement(const std::vector<Rational>& mass) {
    Rational tail(1);
    for (const Rational& m : mass)
        tail -= m;
    return tail;
}

Histogram tally_draws(const OffspringSampler& sampler, std::uint64_t count, std::uint64_t seed,
                      std::uint64_t cells) {
    Histogram h;
    h.support_start = 0;
    h.counts.assign(cells, 0);
    gw::rng::StreamRng rng(seed, 0);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t x = sampler.draw(rng);
        h.total += 1;
        if (x < cells)
            h.counts[static_cast<std::size_t>(x)] += 1;
        else
            h.tail += 1;
    }
    return h;
}

} // namespace

TEST_CASE("compound sampler matches the critical offspring law exactly in distribution") {
    OffspringLaw p = OffspringLaw::sibuya_offspring(make_rational(3, 2), 12);
    OffspringSampler sampler(p);

    const std::uint64_t n = 200'000;
    Histogram h = tally_draws(sampler, n, 20260818, 7);

    std::vector<Rational> mass(p.pmf().mass.begin(), p.pmf().mass.begin() + 7);
    CHECK(mass[0] == make_rational(2, 3));
    CHECK(mass[6] == make_rational(625, 82944));

    CompareReport rep = compare(h, mass, complement(mass), 0.01);
    CHECK(rep.pass);
    CHECK(rep.samples == n);
}

TEST_CASE("compound sampler is reproducible per stream") {
    OffspringLaw p = OffspringLaw::sibuya_offspring(make_rational(2, 1), 8);
    OffspringSampler sampler(p);

    std::vector<std::uint64_t> first, second;
    {
        gw::rng::StreamRng rng(7, 3);
        for (int i = 0; i < 500; ++i)
            first.push_back(sampler.draw(rng));
    }
    {
        gw::rng::StreamRng rng(7, 3);
        for (int i = 0; i < 500; ++i)
            second.push_back(sampler.draw(rng));
    }
    CHECK(first == second);

    gw::rng::StreamRng other(7, 4);
    std::vector<std::uint64_t> shifted;
    for (int i = 0; i < 500; ++i)
        shifted.push_back(sampler.draw(other));
    CHECK(first != shifted);
}

TEST_CASE("geometric sampler hits the closed-form frequencies") {
    OffspringLaw p = OffspringLaw::geometric(make_rational(2, 5), 10);
    OffspringSampler sampler(p);

    const std::uint64_t n = 100'000;
    Histogram h = tally_draws(sampler, n, 5, 6);

    std::vector<Rational> mass(p.pmf().mass.begin(), p.pmf().mass.begin() + 6);
    CHECK(mass[0] == make_rational(3, 5));
    CompareReport rep = compare(h, mass, complement(mass), 0.01);
    CHECK(rep.pass);
}

TEST_CASE("table sampler covers untagged laws with negligible tail") {
    OffspringLaw p = OffspringLaw::from_pmf(
        {make_rational(1, 4), make_rational(1, 2), make_rational(1, 4)});
    OffspringSampler sampler(p);

    const std::uint64_t n = 100'000;
    Histogram h = tally_draws(sampler, n, 11, 3);
    CHECK(h.tail == 0);
    CompareReport rep = compare(h, p.pmf().mass, Rational(0), 0.01);
    CHECK(rep.pass);
}

TEST_CASE("table sampler rejects an untagged law with real tail mass") {
    OffspringLaw truncated = OffspringLaw::from_pmf(
        {make_rational(1, 2), make_rational(1, 4), make_rational(1, 8)}); // tail 1/8
    CHECK_THROWS_AS(OffspringSampler{truncated}, gw::InvalidParams);

    // dust below the admission threshold is fine
    Rational dust = gw::pow_int(make_rational(1, 2), 60);
    OffspringLaw dusty = OffspringLaw::from_pmf({make_rational(1, 2), Rational(1) / 2 - dust});
    CHECK_NOTHROW(OffspringSampler{dusty});
}

TEST_CASE("compound sampler guards its parameter range") {
    // the factory already rejects b outside (1,2]; a hand-tagged law must too
    OffspringLaw base = OffspringLaw::geometric(make_rational(1, 2), 8);
    OffspringLaw mislabeled(base.pmf(), gw::HbFamily{make_rational(5, 2)});
    CHECK_THROWS_AS(OffspringSampler{mislabeled}, gw::InvalidParams);
}

TEST_CASE("simulate: extinction bookkeeping for the degenerate law") {
    OffspringLaw p = OffspringLaw::delta0();
    GWConfig cfg;
    cfg.seed = 42;
    cfg.replicas = 25;
    std::vector<GWResult> rs = simulate(p, cfg);
    REQUIRE(rs.size() == 25);
    for (const GWResult& r : rs) {
        CHECK(r.total == 1);
        CHECK(!r.censored);
        CHECK(r.trajectory == std::vector<std::uint64_t>{1});
    }
}

TEST_CASE("simulate rejects supercritical offspring") {
    OffspringLaw p = OffspringLaw::geometric(make_rational(3, 5), 10); // mean 3/2
    GWConfig cfg;
    CHECK_THROWS_AS(simulate(p, cfg), gw::SupercriticalOffspring);
    CHECK_THROWS_AS(total_progeny_histogram(p, cfg, 10), gw::SupercriticalOffspring);
}

TEST_CASE("simulate is deterministic in the seed and independent of thread count") {
    OffspringLaw p = OffspringLaw::geometric(make_rational(2, 5), 10);
    GWConfig cfg;
    cfg.seed = 1234;
    cfg.replicas = 2000;
    cfg.threads = 1;
    std::vector<GWResult> solo = simulate(p, cfg);
    cfg.threads = 4;
    std::vector<GWResult> pooled = simulate(p, cfg);

    REQUIRE(solo.size() == pooled.size());
    for (std::size_t i = 0; i < solo.size(); ++i) {
        CHECK(solo[i].total == pooled[i].total);
        CHECK(solo[i].generations == pooled[i].generations);
        CHECK(solo[i].censored == pooled[i].censored);
        CHECK(solo[i].trajectory == pooled[i].trajectory);
    }
}

TEST_CASE("total-progeny histogram agrees with the exact progeny law") {
    OffspringLaw p = OffspringLaw::geometric(make_rational(2, 5), 12);
    GWConfig cfg;
    cfg.seed = 99;
    cfg.replicas = 50'000;
    cfg.max_total = 10'000;
    const std::uint64_t k_max = 10;
    Histogram h = total_progeny_histogram(p, cfg, k_max);
    CHECK(h.total == cfg.replicas);

    std::uint64_t cells = h.tail;
    for (std::uint64_t c : h.counts)
        cells += c;
    CHECK(cells == h.total);

    gw::ProgenyLaw q = gw::progeny_of(p, static_cast<int>(k_max));
    CompareReport rep = compare(h, q.pmf().mass, complement(q.pmf().mass), 0.02);
    CHECK(rep.pass);
}

TEST_CASE("censored replicas land in the exact tail cell") {
    // critical law: heavy totals, so a low cap censors often
    OffspringLaw p = OffspringLaw::geometric(make_rational(1, 2), 12);
    GWConfig cfg;
    cfg.seed = 321;
    cfg.replicas = 20'000;
    cfg.max_total = 30;
    const std::uint64_t k_max = 10;
    Histogram h = total_progeny_histogram(p, cfg, k_max);
    CHECK(h.censored > 0);
    CHECK(h.tail >= h.censored);

    gw::ProgenyLaw q = gw::progeny_of(p, static_cast<int>(k_max));
    CompareReport rep = compare(h, q.pmf().mass, complement(q.pmf().mass), 0.02);
    CHECK(rep.pass);
}

TEST_CASE("histogram guards keep the tail cell provable") {
    OffspringLaw p = OffspringLaw::geometric(make_rational(2, 5), 10);
    GWConfig cfg;
    cfg.max_total = 5;
    CHECK_THROWS_AS(total_progeny_histogram(p, cfg, 10), gw::InvalidParams);
    cfg.max_total = 10'000;
    cfg.max_generations = 5;
    CHECK_THROWS_AS(total_progeny_histogram(p, cfg, 10), gw::InvalidParams);
}

TEST_CASE("direct heavy-tail sampling histogram is reproducible") {
    gw::sibuya::SibuyaParams params;
    params.a = make_rational(1, 2);
    Histogram one = sample_histogram(params, 20'000, 777, 15);
    Histogram two = sample_histogram(params, 20'000, 777, 15);
    CHECK(one.counts == two.counts);
    CHECK(one.tail == two.tail);

    std::vector<Rational> prefix = gw::sibuya::pmf_prefix(params, 15);
    std::vector<Rational> mass(prefix.begin() + 1, prefix.end());
    CompareReport rep = compare(one, mass, complement(mass), 0.02);
    CHECK(rep.pass);
}

TEST_CASE("compare demands enough samples and matching cells") {
    Histogram h;
    h.counts.assign(3, 10);
    h.total = 30;
    std::vector<Rational> mass(3, make_rational(1, 4));
    CHECK_THROWS_AS(compare(h, mass, make_rational(1, 4), 0.05), gw::InsufficientSamples);

    h.counts.assign(3, 4000);
    h.total = 12'000;
    std::vector<Rational> wrong(2, make_rational(1, 2));
    CHECK_THROWS_AS(compare(h, wrong, Rational(0), 0.05), gw::InvalidParams);
}

TEST_CASE("generation sizes follow the power-composed family law") {
    GenerationCheckReport rep = generation_law_check(make_rational(1, 2), 3, 10'000, 2024, 12,
                                                     100'000, 0.05);
    CHECK(rep.composition_exact);
    CHECK(rep.empirical.pass);
    CHECK(rep.empirical.samples == 10'000);
}
