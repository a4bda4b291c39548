#include "memsteer/moment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "memsteer/errors.hpp"
#include "memsteer/io.hpp"
#include "memsteer/parallel.hpp"
#include "memsteer/simd/kernels.hpp"

namespace memsteer {

RieszFamily build_family(std::span<const ModeSolution> modes, const TimeGrid& grid, int n_max) {
    if (n_max == 0) n_max = static_cast<int>(modes.size());
    if (n_max < 1) throw Error(Errc::invalid_argument, "moment", "family needs at least one mode");
    for (int n = 1; n <= n_max; ++n) {
        if (static_cast<int>(modes.size()) < n || modes[n - 1].n != n)
            throw Error(Errc::invalid_argument, "moment", "missing mode n=" + std::to_string(n));
        if (modes[n - 1].z.size() != grid.size())
            throw Error(Errc::grid_mismatch, "moment", "mode n=" + std::to_string(n) + " is on another grid");
    }

    RieszFamily family;
    family.n_max = n_max;
    family.elements.resize(2 * static_cast<std::size_t>(n_max) + 1);

    RieszElement& constant = family.elements[n_max];
    constant.index = 0;
    constant.re.assign(grid.size(), 1.0);
    constant.im.assign(grid.size(), 0.0);

    for (int n = 1; n <= n_max; ++n) {
        const ModeSolution& mode = modes[n - 1];
        RieszElement pos;
        pos.index = n;
        pos.re = mode.z;
        pos.im.resize(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) pos.im[k] = mode.dz[k] / n;

        RieszElement neg;
        neg.index = -n;
        neg.re = pos.re;
        neg.im.resize(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) neg.im[k] = -pos.im[k];

        family.elements[n_max + n] = std::move(pos);
        family.elements[n_max - n] = std::move(neg);
    }
    return family;
}

std::complex<double> inner_product(const RieszElement& a, const RieszElement& b, double step) {
    const std::size_t size = a.re.size();
    const std::complex<double> full =
        simd::active().dot_conj(a.re.data(), a.im.data(), b.re.data(), b.im.data(), size);
    const std::complex<double> first{a.re[0], a.im[0]};
    const std::complex<double> last{a.re[size - 1], a.im[size - 1]};
    const std::complex<double> end_correction =
        0.5 * (first * std::conj(std::complex<double>{b.re[0], b.im[0]}) +
               last * std::conj(std::complex<double>{b.re[size - 1], b.im[size - 1]}));
    return step * (full - end_correction);
}

MomentSystem gram(const RieszFamily& family, const TimeGrid& grid, unsigned threads) {
    const auto size = static_cast<Eigen::Index>(family.size());
    MomentSystem system;
    system.n_max = family.n_max;
    system.gram.resize(size, size);
    parallel_for(family.size(), threads, [&](std::size_t p) {
        for (std::size_t q = 0; q < family.size(); ++q)
            system.gram(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
                inner_product(family.elements[p], family.elements[q], grid.step);
    });
    const Eigen::MatrixXcd adjoint = system.gram.adjoint();
    system.gram = 0.5 * (system.gram + adjoint);
    system.rhs = Eigen::VectorXcd::Zero(size);
    return system;
}

Eigen::VectorXcd rhs_from_target(const Target& target, RhsConvention convention) {
    const int n_max = target.n_max;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * n_max + 1);
    for (int n = 1; n <= n_max; ++n) {
        const double xi = target.xi[n - 1];
        const double eta = target.eta[n - 1];
        const std::complex<double> cn = convention == RhsConvention::steering ? std::complex<double>{-xi, -eta}
                                                                              : std::complex<double>{xi, -eta};
        c(n_max + n) = cn;
        c(n_max - n) = std::conj(cn);
    }
    return c;
}

Eigen::VectorXcd moments_of(std::span<const double> g_re, std::span<const double> g_im,
                            const RieszFamily& family, const TimeGrid& grid) {
    // int Z(s) g(T - s) ds = int Z(s) conj(conj(h(s))) ds with h(s) = g(T - s).
    RieszElement h_conj;
    h_conj.re.assign(g_re.rbegin(), g_re.rend());
    h_conj.im.resize(g_im.size());
    for (std::size_t k = 0; k < g_im.size(); ++k) h_conj.im[k] = -g_im[g_im.size() - 1 - k];
    Eigen::VectorXcd out(static_cast<Eigen::Index>(family.size()));
    for (std::size_t p = 0; p < family.size(); ++p)
        out(static_cast<Eigen::Index>(p)) = inner_product(family.elements[p], h_conj, grid.step);
    return out;
}

Density solve_min_norm(MomentSystem& system, const RieszFamily& family, const TimeGrid& grid,
                       const SolveOptions& options) {
    if (options.ridge < 0.0) throw Error(Errc::invalid_argument, "moment", "ridge must be non-negative");
    const auto size = system.gram.rows();
    if (size != static_cast<Eigen::Index>(family.size()) || system.rhs.size() != size)
        throw Error(Errc::invalid_argument, "moment", "Gram matrix, right-hand side and family sizes differ");

    Density density;
    density.ridge = options.ridge;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(system.gram, Eigen::EigenvaluesOnly);
    density.min_eig = eig.eigenvalues().minCoeff();
    density.max_eig = eig.eigenvalues().maxCoeff();

    const bool singular = !(density.min_eig > options.singular_ratio * density.max_eig);
    if (singular && options.ridge == 0.0)
        throw Error(Errc::ill_conditioned, "moment",
                    "Gram matrix is numerically singular (min eigenvalue " + io::format_double(density.min_eig) +
                        ", max " + io::format_double(density.max_eig) +
                        "): {Z_n} is not a Riesz sequence at this horizon; increase T above 2*pi "
                        "or set solve.ridge");

    Eigen::MatrixXcd lhs = system.gram;
    if (options.ridge > 0.0) {
        lhs.diagonal().array() += options.ridge;
        density.warnings.push_back("ridge regularization lambda=" + std::to_string(options.ridge) +
                                   " is active; moments are matched only approximately");
    }
    const Eigen::LLT<Eigen::MatrixXcd> llt(lhs);
    if (llt.info() != Eigen::Success)
        throw Error(Errc::ill_conditioned, "moment",
                    "Cholesky factorization failed (min eigenvalue " + io::format_double(density.min_eig) + ")");
    system.coeffs = llt.solve(system.rhs);

    const double c_norm = system.rhs.norm();
    const double res = (system.gram * system.coeffs - system.rhs).norm();
    density.residual = c_norm > 0.0 ? res / c_norm : res;
    if (options.ridge == 0.0 && res > options.residual_tol * c_norm)
        throw Error(Errc::ill_conditioned, "moment",
                    "Gram solve residual " + io::format_double(density.residual) + " exceeds tolerance (min eigenvalue " +
                        io::format_double(density.min_eig) + ")");

    // h(s) = sum_n beta_n conj(Z_n(s)), g(s) = h(T - s)
    const std::size_t nodes = grid.size();
    std::vector<double> h_re(nodes, 0.0);
    std::vector<double> h_im(nodes, 0.0);
    const auto& axpy_conj = simd::active().axpy_conj;
    for (std::size_t p = 0; p < family.size(); ++p)
        axpy_conj(system.coeffs(static_cast<Eigen::Index>(p)), family.elements[p].re.data(),
                  family.elements[p].im.data(), h_re.data(), h_im.data(), nodes);
    density.re.assign(h_re.rbegin(), h_re.rend());
    density.im.assign(h_im.rbegin(), h_im.rend());

    double max_re = 0.0;
    double max_im = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
        max_re = std::max(max_re, std::abs(density.re[k]));
        max_im = std::max(max_im, std::abs(density.im[k]));
    }
    density.imag_ratio = max_re > 0.0 ? max_im / max_re : (max_im > 0.0 ? INFINITY : 0.0);

    const Eigen::VectorXcd moments = moments_of(density.re, density.im, family, grid);
    for (Eigen::Index p = 0; p < size; ++p)
        density.max_moment_error = std::max(density.max_moment_error,
                                            std::abs(moments(p) - system.rhs(p)) / (1.0 + std::abs(system.rhs(p))));
    if (options.ridge == 0.0 && density.max_moment_error > options.moment_tol)
        throw Error(Errc::internal_consistency, "moment",
                    "reconstructed density misses its moments by " + std::to_string(density.max_moment_error));
    return density;
}

std::vector<double> gram_eigenvalues(const MomentSystem& system) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(system.gram, Eigen::EigenvaluesOnly);
    return {eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size()};
}

RieszSpectrum riesz_diagnostics(const MomentSystem& system, const RieszFamily& family, const TimeGrid& grid) {
    const auto rows = static_cast<Eigen::Index>(grid.size());
    const auto cols = static_cast<Eigen::Index>(family.size());
    if (system.gram.rows() != cols)
        throw Error(Errc::invalid_argument, "moment", "Gram matrix does not belong to this family");
    Eigen::MatrixXcd factor(rows, cols);
    for (Eigen::Index p = 0; p < cols; ++p) {
        const RieszElement& z = family.elements[static_cast<std::size_t>(p)];
        for (Eigen::Index k = 0; k < rows; ++k) {
            const double weight = (k == 0 || k == rows - 1) ? 0.5 * grid.step : grid.step;
            factor(k, p) = std::sqrt(weight) * std::complex<double>{z.re[k], -z.im[k]};
        }
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(factor);
    RieszSpectrum spectrum;
    const auto& sigma = svd.singularValues();  // descending
    for (Eigen::Index i = sigma.size(); i-- > 0;) spectrum.eigenvalues.push_back(sigma(i) * sigma(i));
    spectrum.min_eig = spectrum.eigenvalues.front();
    spectrum.max_eig = spectrum.eigenvalues.back();
    spectrum.cond = spectrum.min_eig > 0.0 ? spectrum.max_eig / spectrum.min_eig : INFINITY;
    for (double v : spectrum.eigenvalues) spectrum.frame_bounds.push_back(v / grid.horizon);

    const std::vector<double> direct = gram_eigenvalues(system);
    spectrum.direct_min_eig = direct.front();
    spectrum.direct_max_eig = direct.back();
    return spectrum;
}

namespace {

ClosenessPairing closeness_for(const RieszFamily& family, const TimeGrid& grid, double gamma, double sign) {
    ClosenessPairing pairing;
    std::vector<double> energy;
    double running = 0.0;
    for (int n = 1; n <= family.n_max; ++n) {
        const RieszElement& z = family.at(n);
        RieszElement diff;
        diff.re.resize(grid.size());
        diff.im.resize(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const double t = grid[k];
            const double amp = std::exp(gamma * t);
            diff.re[k] = z.re[k] - amp * std::cos(n * t);
            diff.im[k] = z.im[k] - amp * sign * std::sin(n * t);
        }
        const double term = inner_product(diff, diff, grid.step).real();
        pairing.terms.push_back(term);
        running += 2.0 * term;
        pairing.partial_sums.push_back(running);
        energy.push_back(2.0 * inner_product(z, z, grid.step).real());
    }
    const int top = family.n_max;
    const int half = top / 2;
    const double tail = pairing.partial_sums[top - 1] - (half > 0 ? pairing.partial_sums[half - 1] : 0.0);
    double tail_energy = 0.0;
    for (int n = half + 1; n <= top; ++n) tail_energy += energy[n - 1];
    pairing.normalized_tail = tail_energy > 0.0 ? tail / tail_energy : 0.0;
    pairing.saturates = pairing.normalized_tail <= saturation_threshold;
    return pairing;
}

} // namespace

Closeness quadratic_closeness(const RieszFamily& family, const KernelSpec& kernel, const TimeGrid& grid) {
    Closeness out;
    out.gamma = kernel.gamma;
    out.literal = closeness_for(family, grid, kernel.gamma, +1.0);
    out.swapped = closeness_for(family, grid, kernel.gamma, -1.0);
    return out;
}

} // namespace memsteer
