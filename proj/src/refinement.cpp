#include "fraclab/refinement.hpp"

#include <cmath>
#include <limits>

#include "fraclab/errors.hpp"

namespace fraclab {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Converging: return "converging";
        case Verdict::Diverging: return "diverging";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

RefinementVerdict classify_refinement(std::span<const double> levels,
                                      std::span<const double> observables,
                                      const RefinementBands& bands) {
    if (levels.size() != observables.size()) {
        throw InvalidArgument("classify_refinement: levels and observables differ in length");
    }
    const std::size_t n = observables.size();
    RefinementVerdict out;
    out.increment_rate = std::numeric_limits<double>::quiet_NaN();
    if (n < 2) return out;
    for (std::size_t i = 1; i < n; ++i) {
        if (!(levels[i] > levels[i - 1]) || !(levels[i - 1] > 0.0)) {
            throw InvalidArgument("classify_refinement: levels must be positive and increasing");
        }
    }

    const double o_last = observables[n - 1];
    const double o_prev = observables[n - 2];
    if (!std::isfinite(o_last)) {
        out.verdict = Verdict::Diverging;
        out.limit_estimate = std::numeric_limits<double>::infinity();
        return out;
    }
    const double d_last = o_last - o_prev;
    const double scale = std::max(std::abs(o_last), std::abs(o_prev));
    out.limit_estimate = o_last;
    if (scale == 0.0 || d_last == 0.0) {
        out.verdict = Verdict::Converging;
        return out;
    }
    out.last_ratio = o_prev != 0.0 ? o_last / o_prev : std::numeric_limits<double>::infinity();
    const bool stationary = std::abs(d_last) <= bands.stagnation * scale;

    double rho = std::numeric_limits<double>::quiet_NaN();
    if (n >= 3) {
        const double d_prev = o_prev - observables[n - 3];
        if (d_prev != 0.0) {
            rho = d_last / d_prev;
            if (rho > 0.0) {
                out.increment_rate = std::log(rho) / std::log(levels[n - 1] / levels[n - 2]);
            }
        }
    }

    if (stationary) {
        out.verdict = Verdict::Converging;
    } else if (out.last_ratio > bands.diverging_ratio) {
        out.verdict = Verdict::Diverging;
    } else if (d_last > 0.0 && std::isfinite(out.increment_rate) &&
               out.increment_rate >= bands.diverging_rate) {
        // Increments that do not shrink: the sum keeps growing (log or power law).
        out.verdict = Verdict::Diverging;
        out.by_fallback = true;
    } else if (out.last_ratio < bands.converging_ratio) {
        out.verdict = Verdict::Converging;
    } else if (std::isfinite(out.increment_rate) && out.increment_rate <= bands.converging_rate) {
        out.verdict = Verdict::Converging;
        out.by_fallback = true;
    } else if (n >= 3 && std::isfinite(rho) && rho <= 0.0) {
        // Oscillating increments inside the ratio band: nothing to conclude.
        out.verdict = Verdict::Inconclusive;
    }

    if (out.verdict == Verdict::Diverging) {
        out.limit_estimate = std::numeric_limits<double>::infinity();
        out.log_type = std::isfinite(out.increment_rate) && std::abs(out.increment_rate) < 0.05;
    } else if (out.verdict == Verdict::Converging && std::isfinite(rho) && rho > 0.0 && rho < 1.0) {
        out.limit_estimate = o_last + d_last * rho / (1.0 - rho);
    }
    return out;
}

}  // namespace fraclab
