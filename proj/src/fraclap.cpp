#include "fraclab/fraclap.hpp"

#include <bit>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "fraclab/errors.hpp"
#include "fraclab/exponents.hpp"

namespace fraclab {
namespace {

// Cell integrals in units where h = 1:
//   lower(k) = ∫_k^{k+1} (k+1-t) t^{-1-2s} dt,  upper(k) = ∫_k^{k+1} (t-k) t^{-1-2s} dt.
// Built from the antiderivatives of t^{-1-2s} and t^{-2s}.
struct CellWeights {
    double lower;
    double upper;
};

CellWeights cell_weights(double k, double s) {
    const double two_s = 2.0 * s;
    // k^{-2s} - (k+1)^{-2s} and (k+1)^{1-2s} - k^{1-2s}, written to limit cancellation.
    const double log_ratio = std::log1p(1.0 / k);
    const double inv = -std::pow(k, -two_s) * std::expm1(-two_s * log_ratio);
    const double pos = std::pow(k, 1.0 - two_s) * std::expm1((1.0 - two_s) * log_ratio);
    const double i1 = inv / two_s;             // ∫ t^{-1-2s}
    const double i0 = pos / (1.0 - two_s);     // ∫ t^{-2s}
    const double upper = i0 - k * i1;
    return {i1 - upper, upper};
}

}  // namespace

FracOp assemble(GridPtr grid, double s) {
    require_order(s, "assemble");
    const std::size_t n = grid->size();
    const double h = grid->h();
    const double scale = std::pow(h, -2.0 * s);

    // Offset weights w[k] ≥ 0 for k ≥ 1 (A_ij = -scale·w[|i-j|]).
    std::vector<double> w(n, 0.0);
    std::vector<CellWeights> cells(n + 1);
    for (std::size_t k = 1; k <= n; ++k) cells[k] = cell_weights(static_cast<double>(k), s);
    const double near = 1.0 / (2.0 - 2.0 * s);
    for (std::size_t k = 1; k < n; ++k) {
        w[k] = cells[k].lower + (k >= 2 ? cells[k - 1].upper : near);
    }
    const double diag = 1.0 / s + 2.0 * near;

    auto matrix = std::make_shared<Eigen::MatrixXd>(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t k = i > j ? i - j : j - i;
            (*matrix)(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                k == 0 ? scale * diag : -scale * w[k];
        }
    }

    FracOp op;
    op.grid_ = std::move(grid);
    op.s_ = s;
    op.near_coeff_ = scale * near;
    op.matrix_ = std::move(matrix);
    return op;
}

ScalarField FracOp::apply(const ScalarField& u) const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::Map<const Eigen::VectorXd> x(u.values().data(), n);
    Eigen::VectorXd y = (*matrix_) * x;
    return ScalarField(grid_, std::vector<double>(y.data(), y.data() + n));
}

double FracOp::apply_row(const ScalarField& u, std::size_t i) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < size(); ++j) sum += at(i, j) * u[j];
    return sum;
}

FactoredOp::FactoredOp(FracOp op) : op_(std::move(op)) {
    auto llt = std::make_shared<Eigen::LLT<Eigen::MatrixXd>>(op_.matrix());
    if (llt->info() != Eigen::Success) {
        throw NumericalFailure("FactoredOp: Cholesky factorization failed");
    }
    llt_ = std::move(llt);
}

ScalarField FactoredOp::solve(const ScalarField& f) const {
    const auto n = static_cast<Eigen::Index>(op_.size());
    if (static_cast<Eigen::Index>(f.size()) != n) {
        throw InvalidArgument("FactoredOp::solve: right-hand side has wrong length");
    }
    Eigen::Map<const Eigen::VectorXd> b(f.values().data(), n);
    Eigen::VectorXd x = llt_->solve(b);
    const Eigen::VectorXd r = b - op_.matrix() * x;
    x += llt_->solve(r);
    if (!x.allFinite()) throw NumericalFailure("FactoredOp::solve: non-finite solution");
    return ScalarField(op_.grid(), std::vector<double>(x.data(), x.data() + n));
}

double apply_regularized(const FracOp& op, const ScalarField& u, std::size_t i, double eps) {
    if (!(eps > 0.0)) {
        std::ostringstream msg;
        msg << "apply_regularized: cutoff eps = " << eps << " must be positive";
        throw InvalidArgument(msg.str());
    }
    const auto& grid = *op.grid();
    const std::size_t n = grid.size();
    const double h = grid.h();
    const double s = op.s();
    const double two_s = 2.0 * s;
    auto value = [&](long j) -> double {
        return (j >= 0 && j < static_cast<long>(n)) ? u[static_cast<std::size_t>(j)] : 0.0;
    };
    const long ii = static_cast<long>(i);

    if (eps < h) {
        // Near model: the missing piece of ∫_0^h is -(D2/h²) ∫_0^ε z^{1-2s} dz.
        const double d2 = value(ii + 1) - 2.0 * value(ii) + value(ii - 1);
        const double beta = 2.0 - two_s;
        return op.apply_row(u, i) + d2 / (h * h) * std::pow(eps, beta) / beta;
    }

    // Exact integration of the piecewise-linear interpolant over |z| ≥ ε.
    double total = 2.0 * u[i] * std::pow(eps, -two_s) / two_s;
    const auto k0 = static_cast<long>(std::floor(eps / h));
    for (int side : {1, -1}) {
        for (long k = k0;; ++k) {
            const long j0 = ii + side * k;
            const long j1 = ii + side * (k + 1);
            const double u0 = value(j0);
            const double u1 = value(j1);
            const bool outside0 = j0 < 0 || j0 >= static_cast<long>(n);
            const bool outside1 = j1 < 0 || j1 >= static_cast<long>(n);
            if (outside0 && outside1) break;
            const double a = std::max(eps, static_cast<double>(k) * h);
            const double b = static_cast<double>(k + 1) * h;
            if (b <= a) continue;
            const double j_inv = (std::pow(a, -two_s) - std::pow(b, -two_s)) / two_s;
            const double j_lin = (std::pow(b, 1.0 - two_s) - std::pow(a, 1.0 - two_s)) / (1.0 - two_s);
            const double slope = (u1 - u0) / h;
            total -= u0 * j_inv + slope * (j_lin - static_cast<double>(k) * h * j_inv);
        }
    }
    return total;
}

double reference_operator(const std::function<double(double)>& u, double x, double s) {
    require_order(s, "reference_operator");
    if (!(std::abs(x) < 1.0)) throw InvalidArgument("reference_operator: x must lie in (-1, 1)");
    auto ext = [&u](double y) { return std::abs(y) < 1.0 ? u(y) : 0.0; };
    const double ux = ext(x);
    const double two_s = 2.0 * s;
    const double a = 1.0 - std::abs(x);
    const double b = 1.0 + std::abs(x);

    // c = u''(x) by a five-point difference. Near z = 0 the integrand
    // (2u(x) - u(x+z) - u(x-z) + c z²) z^{-1-2s} = O(z^{3-2s}) is dropped
    // below z_cut, where direct evaluation would lose all digits.
    const double k = 1e-3 * a;
    const double c = (-ext(x + 2 * k) + 16 * ext(x + k) - 30 * ux + 16 * ext(x - k) - ext(x - 2 * k)) / (12 * k * k);
    const double z_cut = 1e-3 * a;
    auto near = [&](double z) {
        if (z < z_cut) return 0.0;
        const double d = 2.0 * ux - ext(x + z) - ext(x - z) + c * z * z;
        return d * std::pow(z, -1.0 - two_s);
    };
    auto far = [&](double z) { return (2.0 * ux - ext(x + z) - ext(x - z)) * std::pow(z, -1.0 - two_s); };
    boost::math::quadrature::tanh_sinh<double> ts;
    double total = ts.integrate(near, 0.0, a) - c * std::pow(a, 2.0 - two_s) / (2.0 - two_s);
    total += ts.integrate(far, a, b);
    // Beyond z = b only 2u(x) remains.
    total += 2.0 * ux * std::pow(b, -two_s) / two_s;
    return total;
}

namespace {

template <class T>
void write_le(std::ostream& out, T value) {
    static_assert(std::endian::native == std::endian::little, "little-endian host required");
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T read_le(std::istream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw InvalidArgument("read_operator_dump: truncated file");
    return value;
}

}  // namespace

void write_operator_dump(const FracOp& op, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("write_operator_dump: cannot open " + path.string());
    const auto n = static_cast<std::int64_t>(op.size());
    write_le<std::int64_t>(out, n);
    write_le<std::int64_t>(out, std::llround(op.s() * 1e6));
    write_le<std::int64_t>(out, kOperatorDumpVersion);
    for (std::size_t i = 0; i < op.size(); ++i) {
        for (std::size_t j = 0; j < op.size(); ++j) write_le<double>(out, op.at(i, j));
    }
}

OperatorDump read_operator_dump(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("read_operator_dump: cannot open " + path.string());
    OperatorDump dump;
    dump.n = read_le<std::int64_t>(in);
    dump.s_micro = read_le<std::int64_t>(in);
    dump.version = read_le<std::int64_t>(in);
    if (dump.n < 0) throw InvalidArgument("read_operator_dump: negative size");
    dump.row_major.resize(static_cast<std::size_t>(dump.n * dump.n));
    for (double& v : dump.row_major) v = read_le<double>(in);
    return dump;
}

}  // namespace fraclab
