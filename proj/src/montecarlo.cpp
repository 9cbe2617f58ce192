#include "hpng/montecarlo.hpp"

#include <algorithm>
#include <cmath>

#include "hpng/errors.hpp"

namespace hpng {

Estimate& Estimate::operator+=(const Estimate& o) {
    value += o.value;
    sigma = std::hypot(sigma, o.sigma);
    evaluations += o.evaluations;
    skipped += o.skipped;
    return *this;
}

Estimate operator*(double s, Estimate e) {
    e.value *= s;
    e.sigma *= std::abs(s);
    return e;
}

namespace {

double box_volume(const IntervalBox& box) {
    double v = 1.0;
    for (const auto& [lo, hi] : box) {
        if (!(std::isfinite(lo) && std::isfinite(hi))) throw RangeError("box must be finite");
        v *= hi - lo;
    }
    return v;
}

void check(const McConfig& cfg) {
    if (cfg.samples == 0 || cfg.iterations <= 0 || cfg.gridBins <= 0)
        throw ConfigError("Monte Carlo budget must be positive");
}

}  // namespace

Estimate combine_iterations(const std::vector<Estimate>& its) {
    Estimate r;
    if (its.empty()) return r;
    bool zero_var = false;
    for (const auto& e : its) {
        r.evaluations += e.evaluations;
        r.skipped += e.skipped;
        if (e.sigma <= 0.0) zero_var = true;
    }
    if (zero_var) {
        // Degenerate weights; fall back to equal weighting.
        double s = 0.0, v = 0.0;
        for (const auto& e : its) {
            s += e.value;
            v += e.sigma * e.sigma;
        }
        r.value = s / its.size();
        r.sigma = std::sqrt(v) / its.size();
        return r;
    }
    double w = 0.0, s = 0.0;
    for (const auto& e : its) {
        const double wi = 1.0 / (e.sigma * e.sigma);
        w += wi;
        s += wi * e.value;
    }
    r.value = s / w;
    r.sigma = 1.0 / std::sqrt(w);
    return r;
}

Estimate mc_integrate(const Integrand& f, const IntervalBox& box, const McConfig& cfg,
                      std::uint64_t stream) {
    check(cfg);
    const double vol = box_volume(box);
    if (vol == 0.0) return {};
    const std::size_t n = box.size();
    CounterRng rng(cfg.seed, stream);
    std::vector<double> x(n);
    std::vector<Estimate> its;
    for (int it = 0; it < cfg.iterations; ++it) {
        double sum = 0.0, sum2 = 0.0;
        std::size_t good = 0, bad = 0;
        for (std::size_t i = 0; i < cfg.samples; ++i) {
            for (std::size_t d = 0; d < n; ++d)
                x[d] = box[d].first + rng.uniform() * (box[d].second - box[d].first);
            const double v = f(x);
            if (!std::isfinite(v)) {
                ++bad;
                continue;
            }
            sum += v;
            sum2 += v * v;
            ++good;
        }
        Estimate e;
        e.evaluations = cfg.samples;
        e.skipped = bad;
        if (good > 0) {
            const double mean = sum / good;
            const double var = std::max(0.0, sum2 / good - mean * mean);
            e.value = vol * mean;
            e.sigma = vol * std::sqrt(var / good);
        }
        its.push_back(e);
    }
    return combine_iterations(its);
}

Estimate vegas_integrate(const Integrand& f, const IntervalBox& box, const McConfig& cfg,
                         std::uint64_t stream) {
    check(cfg);
    const double vol = box_volume(box);
    if (vol == 0.0) return {};
    const std::size_t n = box.size();
    const int nb = cfg.gridBins;
    constexpr double alpha = 1.5;
    // edges[d][0..nb] in unit coordinates
    std::vector<std::vector<double>> edges(n, std::vector<double>(nb + 1));
    for (auto& e : edges)
        for (int i = 0; i <= nb; ++i) e[i] = double(i) / nb;
    CounterRng rng(cfg.seed, stream);
    std::vector<double> x(n);
    std::vector<int> bin(n);
    std::vector<std::vector<double>> dacc(n, std::vector<double>(nb));
    std::vector<std::vector<std::size_t>> hits(n, std::vector<std::size_t>(nb));
    std::vector<Estimate> its;
    for (int it = 0; it < cfg.iterations; ++it) {
        for (auto& d : dacc) std::fill(d.begin(), d.end(), 0.0);
        for (auto& h : hits) std::fill(h.begin(), h.end(), 0);
        double sum = 0.0, sum2 = 0.0;
        std::size_t good = 0, bad = 0;
        for (std::size_t i = 0; i < cfg.samples; ++i) {
            double jac = vol;
            for (std::size_t d = 0; d < n; ++d) {
                const double y = rng.uniform() * nb;
                int b = std::min(int(y), nb - 1);
                const double frac = y - b;
                const double w = edges[d][b + 1] - edges[d][b];
                const double u = edges[d][b] + frac * w;
                jac *= w * nb;
                bin[d] = b;
                x[d] = box[d].first + u * (box[d].second - box[d].first);
            }
            const double v = f(x);
            if (!std::isfinite(v)) {
                ++bad;
                continue;
            }
            const double fv = v * jac;
            sum += fv;
            sum2 += fv * fv;
            ++good;
            for (std::size_t d = 0; d < n; ++d) {
                dacc[d][bin[d]] += fv * fv;
                ++hits[d][bin[d]];
            }
        }
        Estimate e;
        e.evaluations = cfg.samples;
        e.skipped = bad;
        if (good > 0) {
            const double mean = sum / good;
            e.value = mean;
            e.sigma = std::sqrt(std::max(0.0, sum2 / good - mean * mean) / good);
        }
        its.push_back(e);
        if (it + 1 == cfg.iterations) break;
        // Grid refinement toward the variance contribution of each bin.
        for (std::size_t d = 0; d < n; ++d) {
            if (nb == 1) continue;
            // Mean per bin rather than the sum: bin counts fluctuate.
            std::vector<double> a(nb), s(nb);
            for (int b = 0; b < nb; ++b) a[b] = hits[d][b] ? dacc[d][b] / double(hits[d][b]) : 0.0;
            s[0] = (a[0] + a[1]) / 2.0;
            s[nb - 1] = (a[nb - 2] + a[nb - 1]) / 2.0;
            for (int b = 1; b < nb - 1; ++b) s[b] = (a[b - 1] + a[b] + a[b + 1]) / 3.0;
            double tot = 0.0;
            for (double v : s) tot += v;
            if (!(tot > 0.0)) continue;
            std::vector<double> r(nb);
            double rtot = 0.0;
            for (int b = 0; b < nb; ++b) {
                const double q = s[b] / tot;
                r[b] = q > 0.0 && q < 1.0 ? std::pow((q - 1.0) / std::log(q), alpha)
                                          : (q >= 1.0 ? 1.0 : 0.0);
                rtot += r[b];
            }
            if (!(rtot > 0.0)) continue;
            // Keep every bin alive so regions unseen so far are still sampled.
            const double floor_r = 0.01 * rtot / nb;
            rtot = 0.0;
            for (double& v : r) {
                v = std::max(v, floor_r);
                rtot += v;
            }
            const double per = rtot / nb;
            std::vector<double> ne(nb + 1);
            ne[0] = 0.0;
            ne[nb] = 1.0;
            double acc = 0.0;
            int j = 0;
            const auto& old = edges[d];
            for (int b = 1; b < nb; ++b) {
                const double target = per * b;
                while (j < nb && acc + r[j] < target) acc += r[j++];
                if (j >= nb) {
                    ne[b] = 1.0;
                    continue;
                }
                const double frac = r[j] > 0 ? (target - acc) / r[j] : 0.0;
                ne[b] = old[j] + frac * (old[j + 1] - old[j]);
            }
            for (int b = 1; b <= nb; ++b) ne[b] = std::max(ne[b], ne[b - 1]);
            edges[d] = ne;
        }
    }
    return combine_iterations(its);
}

Estimate integrate(const Integrand& f, const IntervalBox& box, const McConfig& cfg,
                   std::uint64_t stream) {
    return cfg.adaptive ? vegas_integrate(f, box, cfg, stream) : mc_integrate(f, box, cfg, stream);
}

}  // namespace hpng
