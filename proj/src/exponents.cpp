#include "fraclab/exponents.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fraclab/errors.hpp"

namespace fraclab {

void require_order(double s, const char* where) {
    if (!(s > 0.5 && s < 1.0)) {
        std::ostringstream msg;
        msg << where << ": order s = " << s << " outside the valid interval (1/2, 1)";
        throw InvalidArgument(msg.str());
    }
}

ExponentSet critical_exponents(int N, double s, double m, double beta) {
    require_order(s, "critical_exponents");
    if (N < 1) throw InvalidArgument("critical_exponents: dimension N must be >= 1");
    if (!(m >= 1.0)) throw InvalidArgument("critical_exponents: integrability m must be >= 1");
    if (!(beta >= 0.0 && beta < 2.0 * s - 1.0)) {
        std::ostringstream msg;
        msg << "critical_exponents: weight beta = " << beta << " outside [0, 2s-1) = [0, "
            << 2.0 * s - 1.0 << ")";
        throw InvalidArgument(msg.str());
    }

    const double n = static_cast<double>(N);
    ExponentSet e;
    e.N = N;
    e.s = s;
    e.m = m;
    e.beta = beta;
    e.p_star = n / (n - 2.0 * s + 1.0);
    e.p_star_beta = n / (n - 2.0 * s + 1.0 + beta);
    const double gain_den = n - m * (2.0 * s - 1.0);
    e.sobolev_gain = gain_den > 0.0 ? m * n / gain_den : std::numeric_limits<double>::infinity();
    e.grad_blowup = 1.0 / (1.0 - s);
    e.p_upper = s / (1.0 - s);
    e.nonexist_threshold = (2.0 * s - 1.0) * n / (1.0 - s) + 1.0;
    e.natural_growth = 2.0 * s;
    return e;
}

}  // namespace fraclab
