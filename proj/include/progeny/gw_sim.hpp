#pragma once

#include <cstdint>
#include <vector>

#include "progeny/laws.hpp"
#include "progeny/rng.hpp"
#include "progeny/sibuya.hpp"

namespace gw::sim {

// Exact-law offspring sampler chosen from the family tag:
//  - geometric: closed-form inverse CDF;
//  - critical u/(1-(1-u)^b) laws: compound-geometric decomposition read off
//    the factorization b*f*(1 - u*H(u)) = 1 with H_n = (b-1)(2-b)_n/(n+2)!:
//    X = sum_{i<=G} (1 + Y_i), G ~ Geom(1/b), P(Y=n) = b(2-b)_n/(n+2)!,
//    whose survival telescopes to (2-b)_{n+1}/(n+2)! (bulk scan + galloped
//    inversion, like the heavy-tail sampler);
//  - untagged laws: exact CDF table, admitted only when the tail mass is
//    at most 1e-12 (draws past the prefix land one past it).
// Draws above `cap` throw SamplerOverflow.
class OffspringSampler {
  public:
    explicit OffspringSampler(const OffspringLaw& law, std::uint64_t cap = 1'000'000'000);

    std::uint64_t draw(rng::StreamRng& rng) const;

  private:
    enum class Kind { Geometric, Compound, Table };
    Kind kind_ = Kind::Table;
    // geometric / compound parameters
    long double log_alpha_ = 0; // geometric: ln(alpha); compound: ln((b-1)/b)
    long double b_ = 0;
    bool degenerate_ = false; // all mass at 0
    std::uint64_t cap_;
    std::vector<double> cdf_; // table route

    std::uint64_t draw_geometric(rng::StreamRng& rng) const;
    std::uint64_t draw_compound(rng::StreamRng& rng) const;
    std::uint64_t draw_table(rng::StreamRng& rng) const;
};

struct GWConfig {
    std::uint64_t seed = 1;
    std::uint64_t replicas = 1;
    std::uint64_t max_generations = 1'000'000;
    std::uint64_t max_total = 10'000'000;
    bool record_trajectories = true;
    int threads = 0; // 0 = hardware choice; results never depend on it
};

struct GWResult {
    std::vector<std::uint64_t> trajectory; // generation sizes, starting at Z_0 = 1
    std::uint64_t total = 0;               // total population including the root
    std::uint64_t generations = 0;
    bool censored = false; // stopped at max_total or max_generations
};

// Population trajectories of the branching process driven by p, one root per
// replica.  Replica i draws from the stream (seed, i), so results are
// reproducible and independent of the thread count.  Requires a (provable)
// mean <= 1 so extinction is a.s.; censoring is reported, never an error.
std::vector<GWResult> simulate(const OffspringLaw& p, const GWConfig& cfg);

struct Histogram {
    std::uint64_t support_start = 1;
    std::vector<std::uint64_t> counts; // counts[i] = #{value == support_start + i}
    std::uint64_t tail = 0;            // beyond support_start + size - 1 (censored included)
    std::uint64_t censored = 0;
    std::uint64_t total = 0;
};

// Histogram of total population over {1..k_max} + tail.  Population totals
// only grow, so a censored replica provably lands in the tail cell whenever
// max_total >= k_max; the tally is exact.
Histogram total_progeny_histogram(const OffspringLaw& p, const GWConfig& cfg, std::uint64_t k_max);

// Histogram of direct draws from the heavy-tailed sampler; draws above the
// cap land in the tail cell (cap >> k_max keeps that exact).
Histogram sample_histogram(const sibuya::SibuyaParams& params, std::uint64_t count,
                           std::uint64_t seed, std::uint64_t k_max,
                           std::uint64_t cap = 1'000'000'000);

struct CompareReport {
    double tv = 0;         // total variation over {cells} + tail
    double chi_square = 0; // over cells with positive expected count
    std::uint64_t samples = 0;
    double threshold = 0;
    bool pass = false;
};

// Empirical histogram against exact masses for the same cells.
// mass[i] = P(X == support_start + i), i < counts.size(); tail_mass covers
// the rest.  Throws InsufficientSamples below min_samples.
CompareReport compare(const Histogram& hist, const std::vector<Rational>& mass,
                      const Rational& tail_mass, double tv_threshold,
                      std::uint64_t min_samples = 10'000);

struct GenerationCheckReport {
    bool composition_exact = false; // iterated gf == closed form, exactly
    CompareReport empirical;
    std::uint64_t censored = 0;
};

// The n-th generation of the process with heavy-tailed offspring (tail index
// a) again follows the family law with index a^n: checks the generating
// function identity exactly and the empirical generation histogram
// statistically.  Generation sizes only grow (offspring support starts at 1),
// so censored replicas land in the tail cell exactly.
GenerationCheckReport generation_law_check(const Rational& a, int generations,
                                           std::uint64_t replicas, std::uint64_t seed,
                                           std::uint64_t k_max, std::uint64_t max_total,
                                           double tv_threshold);

} // namespace gw::sim
