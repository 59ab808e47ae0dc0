#include "progeny/gw_sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include "progeny/power_series.hpp"

namespace gw::sim {

namespace {

int resolve_threads(int threads) {
    if (threads > 0)
        return threads;
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// smallest n > m with lsurv(n) - lsurv(m) <= target, galloping then bisecting;
// lsurv must be strictly decreasing.  Returns cap+1 if none by cap.
template <typename F>
std::uint64_t invert_log_survival(F&& lsurv, std::uint64_t m, long double target,
                                  std::uint64_t cap) {
    const long double lm = lsurv(m);
    std::uint64_t lo = m;
    std::uint64_t hi = m + 1;
    std::uint64_t step = 1;
    while (lsurv(hi) - lm > target) {
        lo = hi;
        if (hi >= cap)
            return cap + 1;
        step *= 2;
        hi = (cap - hi < step) ? cap : hi + step;
    }
    while (hi - lo > 1) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (lsurv(mid) - lm <= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

} // namespace

OffspringSampler::OffspringSampler(const OffspringLaw& law, std::uint64_t cap) : cap_(cap) {
    if (const auto* geo = std::get_if<GeometricFamily>(&law.family())) {
        kind_ = Kind::Geometric;
        degenerate_ = sgn(geo->alpha) == 0;
        log_alpha_ = degenerate_ ? 0 : logl(static_cast<long double>(to_double(geo->alpha)));
        return;
    }
    if (const auto* hb = std::get_if<HbFamily>(&law.family())) {
        if (!(hb->b > 1) || hb->b > 2)
            throw InvalidParams("compound sampler needs 1 < b <= 2 (the coefficients are not "
                                "a probability law otherwise)");
        kind_ = Kind::Compound;
        b_ = static_cast<long double>(to_double(hb->b));
        degenerate_ = hb->b == 1;
        log_alpha_ = logl((b_ - 1.0L) / b_); // ln P(G >= j) per step
        return;
    }
    if (to_double(law.pmf().tail) > 1e-12)
        throw InvalidParams("untagged offspring law has tail mass " + to_string(law.pmf().tail) +
                            " > 1e-12; sampling would be biased — supply a closed-form family "
                            "or a longer prefix");
    kind_ = Kind::Table;
    cdf_.reserve(law.pmf().mass.size());
    Rational acc(0);
    for (const Rational& m : law.pmf().mass) {
        acc += m;
        double v = to_double(acc);
        if (!cdf_.empty())
            v = std::max(v, cdf_.back());
        cdf_.push_back(v);
    }
}

std::uint64_t OffspringSampler::draw(rng::StreamRng& rng) const {
    switch (kind_) {
    case Kind::Geometric:
        return draw_geometric(rng);
    case Kind::Compound:
        return draw_compound(rng);
    case Kind::Table:
    default:
        return draw_table(rng);
    }
}

std::uint64_t OffspringSampler::draw_geometric(rng::StreamRng& rng) const {
    double u = rng.u01_open();
    if (degenerate_)
        return 0;
    // P(X >= j) = alpha^j
    long double x = floorl(logl(static_cast<long double>(u)) / log_alpha_);
    if (x > static_cast<long double>(cap_))
        throw SamplerOverflow("draw exceeded cap of " + std::to_string(cap_));
    return static_cast<std::uint64_t>(x);
}

std::uint64_t OffspringSampler::draw_compound(rng::StreamRng& rng) const {
    // geometric count of compound summands, success 1/b
    double ug = rng.u01_open();
    std::uint64_t g;
    if (degenerate_) {
        g = 0;
    } else {
        long double x = floorl(logl(static_cast<long double>(ug)) / log_alpha_);
        if (x > static_cast<long double>(cap_))
            throw SamplerOverflow("draw exceeded cap of " + std::to_string(cap_));
        g = static_cast<std::uint64_t>(x);
    }

    const long double b = b_;
    std::uint64_t x = 0;
    for (std::uint64_t i = 0; i < g; ++i) {
        // Y: P(Y=n) = b (2-b)_n / (n+2)!, survival (2-b)_{n+1}/(n+2)!
        double u = rng.u01_open();
        long double t = b / 2.0L; // P(Y=0)
        long double cum = t;
        std::uint64_t n = 0;
        const std::uint64_t bulk = 64;
        bool found = static_cast<long double>(u) < cum;
        while (!found && n < bulk) {
            t *= (2.0L - b + static_cast<long double>(n)) /
                 (static_cast<long double>(n) + 3.0L);
            ++n;
            cum += t;
            found = static_cast<long double>(u) < cum;
        }
        std::uint64_t y;
        if (found) {
            y = n;
        } else {
            // Y > n: one fresh uniform through the conditional survival
            // P(Y > j | Y > n) = exp(lsurv(j) - lsurv(n)); the lgamma(2-b)
            // normalizer cancels in the difference.
            auto lsurv = [b](std::uint64_t j) -> long double {
                long double x2 = static_cast<long double>(j);
                return lgammal(x2 + 3.0L - b) - lgammal(x2 + 3.0L);
            };
            long double lv = logl(static_cast<long double>(rng.u01_open()));
            y = invert_log_survival(lsurv, n, lv, cap_);
            if (y > cap_)
                throw SamplerOverflow("draw exceeded cap of " + std::to_string(cap_));
        }
        x += 1 + y;
        if (x > cap_)
            throw SamplerOverflow("draw exceeded cap of " + std::to_string(cap_));
    }
    return x;
}

std::uint64_t OffspringSampler::draw_table(rng::StreamRng& rng) const {
    double u = rng.u01();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::uint64_t>(it - cdf_.begin()); // == size() past the prefix
}

namespace {

GWResult run_replica(const OffspringSampler& sampler, rng::StreamRng& rng, const GWConfig& cfg) {
    GWResult result;
    std::uint64_t z = 1;
    result.total = 1;
    if (cfg.record_trajectories)
        result.trajectory.push_back(1);
    try {
        for (std::uint64_t gen = 1; gen <= cfg.max_generations && z > 0; ++gen) {
            std::uint64_t next = 0;
            for (std::uint64_t i = 0; i < z; ++i) {
                next += sampler.draw(rng);
                if (result.total + next > cfg.max_total) {
                    result.censored = true;
                    break;
                }
            }
            if (result.censored)
                break;
            z = next;
            result.total += next;
            result.generations = gen;
            if (cfg.record_trajectories && z > 0)
                result.trajectory.push_back(z);
        }
        if (z > 0 && !result.censored)
            result.censored = true; // ran out of generations
    } catch (const SamplerOverflow&) {
        result.censored = true; // a single draw already exceeds any budget
    }
    return result;
}

} // namespace

std::vector<GWResult> simulate(const OffspringLaw& p, const GWConfig& cfg) {
    MeanBound m = p.mean();
    if (m.lower > 1)
        throw SupercriticalOffspring("offspring mean " + std::string(m.exact ? "" : ">= ") +
                                     to_string(m.lower) +
                                     " exceeds 1; extinction is not almost sure");
    OffspringSampler sampler(p, cfg.max_total + 1);

    std::vector<GWResult> results(cfg.replicas);
    auto run_range = [&](std::uint64_t from, std::uint64_t to) {
        for (std::uint64_t i = from; i < to; ++i) {
            rng::StreamRng rng(cfg.seed, i);
            results[i] = run_replica(sampler, rng, cfg);
        }
    };

    int threads = resolve_threads(cfg.threads);
    if (threads <= 1 || cfg.replicas < 2) {
        run_range(0, cfg.replicas);
        return results;
    }
    std::vector<std::future<void>> futs;
    std::uint64_t chunk = (cfg.replicas + threads - 1) / static_cast<std::uint64_t>(threads);
    for (std::uint64_t from = 0; from < cfg.replicas; from += chunk)
        futs.push_back(std::async(std::launch::async, run_range, from,
                                  std::min(from + chunk, cfg.replicas)));
    for (auto& f : futs)
        f.get();
    return results;
}

Histogram total_progeny_histogram(const OffspringLaw& p, const GWConfig& cfg,
                                  std::uint64_t k_max) {
    if (cfg.max_total < k_max)
        throw InvalidParams("max_total below k_max would censor inside the histogram range");
    if (cfg.max_generations < k_max)
        throw InvalidParams("max_generations below k_max would censor inside the histogram range");
    MeanBound m = p.mean();
    if (m.lower > 1)
        throw SupercriticalOffspring("offspring mean " + std::string(m.exact ? "" : ">= ") +
                                     to_string(m.lower) +
                                     " exceeds 1; extinction is not almost sure");
    OffspringSampler sampler(p, cfg.max_total + 1);

    GWConfig quiet = cfg;
    quiet.record_trajectories = false;

    auto tally_range = [&](std::uint64_t from, std::uint64_t to) {
        Histogram h;
        h.counts.assign(k_max, 0);
        for (std::uint64_t i = from; i < to; ++i) {
            rng::StreamRng rng(cfg.seed, i);
            GWResult r = run_replica(sampler, rng, quiet);
            h.total += 1;
            if (r.censored) {
                h.censored += 1;
                h.tail += 1; // totals only grow: censored => total > max_total >= k_max
            } else if (r.total >= 1 && r.total <= k_max) {
                h.counts[static_cast<std::size_t>(r.total - 1)] += 1;
            } else {
                h.tail += 1;
            }
        }
        return h;
    };

    int threads = resolve_threads(cfg.threads);
    std::vector<Histogram> parts;
    if (threads <= 1 || cfg.replicas < 2) {
        parts.push_back(tally_range(0, cfg.replicas));
    } else {
        std::vector<std::future<Histogram>> futs;
        std::uint64_t chunk = (cfg.replicas + threads - 1) / static_cast<std::uint64_t>(threads);
        for (std::uint64_t from = 0; from < cfg.replicas; from += chunk)
            futs.push_back(std::async(std::launch::async, tally_range, from,
                                      std::min(from + chunk, cfg.replicas)));
        for (auto& f : futs)
            parts.push_back(f.get());
    }

    Histogram out;
    out.counts.assign(k_max, 0);
    for (const Histogram& part : parts) {
        out.total += part.total;
        out.tail += part.tail;
        out.censored += part.censored;
        for (std::size_t i = 0; i < part.counts.size(); ++i)
            out.counts[i] += part.counts[i];
    }
    return out;
}

Histogram sample_histogram(const sibuya::SibuyaParams& params, std::uint64_t count,
                           std::uint64_t seed, std::uint64_t k_max, std::uint64_t cap) {
    sibuya::Sampler sampler(params, cap);
    Histogram h;
    h.counts.assign(k_max, 0);
    rng::StreamRng rng(seed, 0);
    for (std::uint64_t i = 0; i < count; ++i) {
        h.total += 1;
        try {
            std::uint64_t s = sampler.draw(rng);
            if (s >= 1 && s <= k_max)
                h.counts[static_cast<std::size_t>(s - 1)] += 1;
            else
                h.tail += 1;
        } catch (const SamplerOverflow&) {
            h.tail += 1; // beyond cap >> k_max: exact tail cell
        }
    }
    return h;
}

CompareReport compare(const Histogram& hist, const std::vector<Rational>& mass,
                      const Rational& tail_mass, double tv_threshold,
                      std::uint64_t min_samples) {
    if (hist.total < min_samples)
        throw InsufficientSamples("need at least " + std::to_string(min_samples) +
                                  " samples, got " + std::to_string(hist.total));
    if (mass.size() != hist.counts.size())
        throw InvalidParams("histogram and exact mass vectors disagree on cell count");

    const double n = static_cast<double>(hist.total);
    CompareReport report;
    report.samples = hist.total;
    report.threshold = tv_threshold;

    double tv = 0;
    double chi = 0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
        double expect = to_double(mass[i]);
        double obs = static_cast<double>(hist.counts[i]) / n;
        tv += std::abs(obs - expect);
        if (expect > 0) {
            double diff = static_cast<double>(hist.counts[i]) - n * expect;
            chi += diff * diff / (n * expect);
        }
    }
    double expect_tail = to_double(tail_mass);
    double obs_tail = static_cast<double>(hist.tail) / n;
    tv += std::abs(obs_tail - expect_tail);
    if (expect_tail > 0) {
        double diff = static_cast<double>(hist.tail) - n * expect_tail;
        chi += diff * diff / (n * expect_tail);
    }

    report.tv = tv / 2.0;
    report.chi_square = chi;
    report.pass = report.tv < tv_threshold;
    return report;
}

GenerationCheckReport generation_law_check(const Rational& a, int generations,
                                           std::uint64_t replicas, std::uint64_t seed,
                                           std::uint64_t k_max, std::uint64_t max_total,
                                           double tv_threshold) {
    if (generations < 1)
        throw InvalidParams("need at least one generation");
    if (max_total < k_max)
        throw InvalidParams("max_total below k_max would censor inside the histogram range");

    // exact half: the n-fold composite of 1-(1-z)^a equals 1-(1-z)^(a^n)
    Rational a_pow = a;
    sibuya::SibuyaParams base;
    base.a = a;
    const int order = static_cast<int>(k_max);
    series::PowerSeries composite = sibuya::gf(base, order);
    for (int g = 2; g <= generations; ++g) {
        composite = series::compose(sibuya::gf(base, order), composite);
        a_pow *= a;
    }
    sibuya::SibuyaParams gen_params;
    gen_params.a = a_pow;
    GenerationCheckReport report;
    report.composition_exact = composite == sibuya::gf(gen_params, order);

    // empirical half
    sibuya::Sampler sampler(base, max_total + 1);
    Histogram h;
    h.counts.assign(k_max, 0);
    for (std::uint64_t rep = 0; rep < replicas; ++rep) {
        rng::StreamRng rng(seed, rep);
        std::uint64_t z = 1;
        bool censored = false;
        try {
            for (int g = 1; g <= generations && !censored; ++g) {
                std::uint64_t next = 0;
                for (std::uint64_t i = 0; i < z && !censored; ++i) {
                    next += sampler.draw(rng);
                    if (next > max_total)
                        censored = true;
                }
                z = next;
            }
        } catch (const SamplerOverflow&) {
            censored = true;
        }
        h.total += 1;
        if (censored) {
            // generation sizes only grow: Z_n > max_total >= k_max
            h.censored += 1;
            h.tail += 1;
        } else if (z >= 1 && z <= k_max) {
            h.counts[static_cast<std::size_t>(z - 1)] += 1;
        } else {
            h.tail += 1;
        }
    }
    report.censored = h.censored;

    auto exact = sibuya::pmf_prefix(gen_params, k_max);
    std::vector<Rational> mass(exact.begin() + 1, exact.end());
    Rational tail(1);
    for (const Rational& m : mass)
        tail -= m;
    report.empirical = compare(h, mass, tail, tv_threshold);
    return report;
}

} // namespace gw::sim
