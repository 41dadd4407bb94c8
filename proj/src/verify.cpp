#include "agler/verify.hpp"

#include <cmath>

#include "agler/numerics.hpp"

namespace agler::verify {

using numerics::identity;
using numerics::norm;

namespace {

std::vector<Point> halfplane_plan(const SamplePlan& plan, int d) {
    return polyhalfplane_points(d, plan.count, plan.seed, plan.radius);
}

/// Runs residual(z) over the points, skipping singular evaluations.
template <typename Residual>
SampleReport sweep(std::string name, double threshold, const std::vector<Point>& points, Residual residual) {
    ReportBuilder builder(std::move(name), threshold);
    for (const Point& z : points) {
        try {
            builder.record(residual(z), z);
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
            builder.skip();
        }
    }
    return builder.finish();
}

}  // namespace

SampleReport check_cayley_inner(const FunctionHandle& f, const SamplePlan& plan, double threshold) {
    return sweep("cayley_inner", threshold, halfplane_plan(plan, f.d), [&](const Point& z) {
        const Point reflected = -z.conjugate();
        return norm(ComplexMatrix(f(z) + f(reflected).adjoint()));
    });
}

SampleReport check_homogeneous(const FunctionHandle& f, const SamplePlan& plan, double threshold) {
    ReportBuilder builder("homogeneous", threshold);
    for (const Point& z : halfplane_plan(plan, f.d)) {
        for (Complex lambda : scaling_factors()) {
            try {
                const Point scaled = lambda * z;
                builder.record(norm(ComplexMatrix(f(scaled) - lambda * f(z))), scaled);
            } catch (const Error& e) {
                if (!e.is_singular()) throw;
                builder.skip();
            }
        }
    }
    return builder.finish();
}

SampleReport check_real(const FunctionHandle& f, const SamplePlan& plan, double threshold) {
    return sweep("real", threshold, halfplane_plan(plan, f.d), [&](const Point& z) {
        const Point zc = z.conjugate();
        return norm(ComplexMatrix(f(zc) - f(z).conjugate()));
    });
}

SampleReport check_positive_kernel(const KernelFunction& k, const std::vector<Point>& points, const Tolerances& tol) {
    const auto count = static_cast<Eigen::Index>(points.size());
    ComplexMatrix gram;
    Eigen::Index block = -1;
    for (Eigen::Index i = 0; i < count; ++i) {
        for (Eigen::Index j = 0; j < count; ++j) {
            const ComplexMatrix kij = k(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
            if (block < 0) {
                if (kij.rows() != kij.cols()) throw Error(ErrorCode::DimensionMismatch, "kernel must be square-valued");
                block = kij.rows();
                gram.resize(count * block, count * block);
            }
            gram.block(i * block, j * block, block, block) = kij;
        }
    }
    const double scale = std::max(1.0, norm(gram));
    ReportBuilder builder("positive_kernel", tol.psd_atol * scale);
    if (count == 0) return builder.finish(false);
    const auto eig = numerics::hermitian_eig(ComplexMatrix((gram + gram.adjoint()) / 2.0), tol);
    const Eigen::Index worst = 0;
    builder.record(-eig.eigenvalues(worst), std::vector<Complex>{});
    builder.note("min eigenvalue " + std::to_string(eig.eigenvalues(worst)) + " over " + std::to_string(count) + " points");
    return builder.finish();
}

SampleReport check_herglotz_positivity(const FunctionHandle& f, const SamplePlan& plan, double threshold) {
    const auto points = plan.domain == SampleDomain::polydisk ? expand(plan, f.d) : halfplane_plan(plan, f.d);
    const Tolerances tol;
    return sweep("herglotz_positivity", threshold, points, [&](const Point& z) {
        const ComplexMatrix v = f(z);
        return -numerics::hermitian_eig(ComplexMatrix((v + v.adjoint()) / 2.0), tol).eigenvalues(0);
    });
}

SampleReport check_tuple_positivity(const realization::GivoneRoesserRealization& schur, int count, std::uint64_t seed,
                                    int max_size, double threshold) {
    Rng rng(seed);
    const Tolerances tol;
    ReportBuilder builder("tuple_positivity", threshold);
    for (int i = 0; i < count; ++i) {
        const int s = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(max_size));
        const auto contractions = random_commuting_contractions(rng.next(), schur.d(), s);
        const auto accretive = cayley::operator_cayley_tuple(contractions, cayley::TupleDirection::contractive_to_accretive, tol);
        const auto back = cayley::operator_cayley_tuple(accretive, cayley::TupleDirection::accretive_to_contractive, tol);
        try {
            const ComplexMatrix value = realization::eval_transfer_tuple(schur, back);
            const ComplexMatrix fr = cayley::value_cayley(value, cayley::ValueDirection::schur_to_herglotz);
            const double lo = numerics::hermitian_eig(ComplexMatrix((fr + fr.adjoint()) / 2.0), tol).eigenvalues(0);
            builder.record(-2.0 * lo, std::vector<Complex>{});
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
            builder.skip();
        }
    }
    return builder.finish();
}

SampleReport check_halfplane_decomposition(const FunctionHandle& f, const std::vector<FunctionHandle>& phis, int pairs,
                                           std::uint64_t seed, double sign, double threshold) {
    const auto points = polyhalfplane_points(f.d, 2 * pairs, seed);
    ReportBuilder builder(sign > 0 ? "decomposition_plus" : "decomposition_minus", threshold);
    for (int i = 0; i < pairs; ++i) {
        const Point& w = points[static_cast<std::size_t>(2 * i)];
        const Point& z = points[static_cast<std::size_t>(2 * i + 1)];
        try {
            ComplexMatrix defect = f(w).adjoint() + sign * f(z);
            for (std::size_t k = 0; k < phis.size(); ++k) {
                const auto idx = static_cast<Eigen::Index>(k);
                defect -= (std::conj(w[idx]) + sign * z[idx]) * (phis[k](w).adjoint() * phis[k](z));
            }
            std::vector<Complex> witness(w.data(), w.data() + w.size());
            witness.insert(witness.end(), z.data(), z.data() + z.size());
            builder.record(norm(defect), witness);
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
            builder.skip();
        }
    }
    return builder.finish();
}

std::string to_string(InstanceKind kind) {
    switch (kind) {
        case InstanceKind::pencil_nonhomogeneous: return "pencil_nonhomogeneous";
        case InstanceKind::pencil_homogeneous: return "pencil_homogeneous";
        case InstanceKind::pencil_real: return "pencil_real";
        case InstanceKind::herglotz_realization: return "herglotz_realization";
        case InstanceKind::gr_unitary: return "gr_unitary";
        case InstanceKind::commuting_contractions: return "commuting_contractions";
    }
    return "gr_unitary";
}

InstanceKind instance_kind_from_string(const std::string& name) {
    for (InstanceKind k : {InstanceKind::pencil_nonhomogeneous, InstanceKind::pencil_homogeneous, InstanceKind::pencil_real,
                           InstanceKind::herglotz_realization, InstanceKind::gr_unitary,
                           InstanceKind::commuting_contractions}) {
        if (to_string(k) == name) return k;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown instance kind '" + name + "'");
}

ComplexMatrix random_unitary(Rng& rng, Eigen::Index size) {
    if (size == 0) return ComplexMatrix(0, 0);
    const ComplexMatrix g = rng.complex_matrix(size, size);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * identity(size);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the column phases by those of diag(R) so the result does not depend
    // on the QR implementation's sign convention.
    for (Eigen::Index j = 0; j < size; ++j) {
        const Complex rj = r(j, j);
        if (std::abs(rj) > 0.0) q.col(j) *= rj / std::abs(rj);
    }
    // One Newton-Schulz polish keeps ||U^*U - I|| at rounding level.
    q = 0.5 * q * (3.0 * identity(size) - q.adjoint() * q);
    return q;
}

bessmertnyi::LongResolventPencil random_pencil(bessmertnyi::PencilClass tag, std::uint64_t seed, int d, int n, int m) {
    using bessmertnyi::PencilClass;
    if (d < 1 || n < 1 || m < 0) throw Error(ErrorCode::InvalidArgument, "pencils need d >= 1, n >= 1, m >= 0");
    Rng rng(seed);
    const int size = n + m;
    const bool real = tag == PencilClass::real_homogeneous;
    std::vector<ComplexMatrix> coeffs;
    ComplexMatrix a0 = ComplexMatrix::Zero(size, size);
    if (tag == PencilClass::nonhomogeneous) {
        const ComplexMatrix s = rng.complex_matrix(size, size);
        a0 = (s - s.adjoint()) / 2.0;
    }
    coeffs.push_back(a0);
    for (int k = 1; k <= d; ++k) {
        // A_1 has full rank so that A22(z) is invertible on the poly-halfplane.
        const int rank = k == 1 ? size : 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(size));
        const ComplexMatrix g = real ? ComplexMatrix(rng.real_matrix(size, rank).cast<Complex>())
                                     : rng.complex_matrix(size, rank);
        ComplexMatrix a = g * g.adjoint() / static_cast<double>(size);
        coeffs.push_back((a + a.adjoint()) / 2.0);
    }
    return bessmertnyi::LongResolventPencil(n, std::move(coeffs), tag);
}

cayley::TupleOfMatrices random_commuting_contractions(std::uint64_t seed, int d, int s) {
    if (d < 1 || s < 1) throw Error(ErrorCode::InvalidArgument, "tuples need d >= 1 and s >= 1");
    Rng rng(seed);
    const ComplexMatrix base = rng.complex_matrix(s, s) / std::sqrt(static_cast<double>(s));
    const ComplexMatrix base2 = base * base;
    std::vector<ComplexMatrix> items;
    for (int k = 0; k < d; ++k) {
        ComplexMatrix t = rng.complex_normal() * identity(s) + rng.complex_normal() * base + rng.complex_normal() * base2;
        const double target = 0.9 * rng.uniform(0.3, 1.0);
        const double current = norm(t);
        if (current > 0.0) t *= target / current;
        items.push_back(std::move(t));
    }
    return cayley::TupleOfMatrices(std::move(items));
}

artifact::Artifact gen_instance(InstanceKind kind, std::uint64_t seed, const InstanceDims& dims) {
    using bessmertnyi::PencilClass;
    if (dims.d < 1 || dims.n < 1 || dims.m < 0 || dims.s < 1) {
        throw Error(ErrorCode::InvalidArgument, "dimensions must satisfy d, n, s >= 1 and m >= 0");
    }
    auto split_states = [&](int m) {
        std::vector<int> out(static_cast<std::size_t>(dims.d), m / dims.d);
        for (int k = 0; k < m % dims.d; ++k) ++out[static_cast<std::size_t>(k)];
        return out;
    };
    switch (kind) {
        case InstanceKind::pencil_nonhomogeneous:
            return artifact::make(random_pencil(PencilClass::nonhomogeneous, seed, dims.d, dims.n, dims.m));
        case InstanceKind::pencil_homogeneous:
            return artifact::make(random_pencil(PencilClass::homogeneous, seed, dims.d, dims.n, dims.m));
        case InstanceKind::pencil_real:
            return artifact::make(random_pencil(PencilClass::real_homogeneous, seed, dims.d, dims.n, dims.m));
        case InstanceKind::herglotz_realization: {
            Rng rng(seed);
            const ComplexMatrix s = rng.complex_matrix(dims.n, dims.n);
            const ComplexMatrix w = random_unitary(rng, dims.m);
            const ComplexMatrix v = rng.complex_matrix(dims.m, dims.n);
            return artifact::make(herglotz::HerglotzRealization(split_states(dims.m), (s - s.adjoint()) / 2.0, w, v));
        }
        case InstanceKind::gr_unitary: {
            Rng rng(seed);
            const ComplexMatrix u = random_unitary(rng, dims.m + dims.n);
            return artifact::make(realization::GivoneRoesserRealization(dims.n, split_states(dims.m), u, {}));
        }
        case InstanceKind::commuting_contractions:
            return artifact::make(random_commuting_contractions(seed, dims.d, dims.s));
    }
    throw Error(ErrorCode::InvalidArgument, "unknown instance kind");
}

}  // namespace agler::verify
