#include "agler/realization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "agler/numerics.hpp"

namespace agler::realization {

using numerics::identity;
using numerics::norm;

namespace {

std::string sci(double x) {
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << x;
    return out.str();
}

}  // namespace

GivoneRoesserRealization::GivoneRoesserRealization(int n, std::vector<int> state_dims, ComplexMatrix u,
                                                   StructureFlags flags, const Tolerances& tol)
    : n_(n), state_dims_(std::move(state_dims)), u_(std::move(u)), flags_(flags) {
    tol.validate();
    if (n_ < 0) throw Error(ErrorCode::InvalidArgument, "negative I/O dimension");
    for (int mk : state_dims_) {
        if (mk < 0) throw Error(ErrorCode::InvalidArgument, "negative state dimension");
    }
    m_ = std::accumulate(state_dims_.begin(), state_dims_.end(), 0);
    if (u_.rows() != m_ + n_ || u_.cols() != m_ + n_) {
        throw Error(ErrorCode::DimensionMismatch, "colligation must be (m+n) x (m+n)");
    }
    if (!u_.allFinite()) throw Error(ErrorCode::Malformed, "colligation has non-finite entries");
    if (flags_.unitary) {
        const double defect = norm(ComplexMatrix(u_.adjoint() * u_ - identity(m_ + n_)));
        if (defect > tol.identity_atol) throw Error(ErrorCode::NotUnitary, "||U*U - I|| = " + sci(defect));
    }
    if (flags_.hermitian) {
        const double defect = norm(ComplexMatrix(u_ - u_.adjoint()));
        if (defect > tol.identity_atol) throw Error(ErrorCode::HermitianInfeasible, "||U - U*|| = " + sci(defect));
    }
    if (flags_.real && numerics::max_imag(u_) > tol.identity_atol) {
        throw Error(ErrorCode::RealInfeasible, "colligation has imaginary entries");
    }
}

int GivoneRoesserRealization::block_offset(int k) const {
    return std::accumulate(state_dims_.begin(), state_dims_.begin() + k, 0);
}

ComplexMatrix GivoneRoesserRealization::variable_matrix(const Point& zeta) const {
    if (zeta.size() != d()) throw Error(ErrorCode::DimensionMismatch, "point dimension differs from d");
    Eigen::VectorXcd diag(m_);
    int offset = 0;
    for (int k = 0; k < d(); ++k) {
        const int mk = state_dims_[static_cast<std::size_t>(k)];
        diag.segment(offset, mk).setConstant(zeta[k]);
        offset += mk;
    }
    return diag.asDiagonal();
}

ComplexMatrix GivoneRoesserRealization::projector(int k) const {
    ComplexMatrix p = ComplexMatrix::Zero(m_, m_);
    const int mk = state_dims_.at(static_cast<std::size_t>(k));
    p.block(block_offset(k), block_offset(k), mk, mk).setIdentity();
    return p;
}

bool GivoneRoesserRealization::operator==(const GivoneRoesserRealization& other) const {
    return n_ == other.n_ && state_dims_ == other.state_dims_ && flags_ == other.flags_ &&
           numerics::same_matrix(u_, other.u_);
}

ComplexMatrix eval_transfer(const GivoneRoesserRealization& re, const Point& zeta) {
    const ComplexMatrix p = re.variable_matrix(zeta);
    const ComplexMatrix lhs = identity(re.m()) - p * re.a();
    const ComplexMatrix x = numerics::checked_solve(lhs, p * re.b(), ErrorCode::ResolventSingular,
                                                    "I - P(zeta)A at " + format_point(zeta));
    return re.dd() + re.c() * x;
}

FunctionHandle transfer_handle(const GivoneRoesserRealization& re) {
    return FunctionHandle{re.d(), re.n(), re.n(), Domain::polydisk,
                          [re](const Point& zeta) { return eval_transfer(re, zeta); }};
}

ComplexMatrix eval_transfer_tuple(const GivoneRoesserRealization& re, const cayley::TupleOfMatrices& t) {
    if (t.d() != re.d()) throw Error(ErrorCode::DimensionMismatch, "tuple length differs from d");
    const Eigen::Index s = t.size();
    for (int k = 0; k < t.d(); ++k) {
        if (!(norm(t[k]) < 1.0)) {
            throw Error(ErrorCode::NotStrictContraction, "T" + std::to_string(k + 1) + " is not a strict contraction");
        }
    }
    const ComplexMatrix id_s = identity(s);
    ComplexMatrix p = ComplexMatrix::Zero(re.m() * s, re.m() * s);
    for (int k = 0; k < re.d(); ++k) p += numerics::kron(re.projector(k), t[k]);
    const ComplexMatrix a = numerics::kron(re.a(), id_s);
    const ComplexMatrix b = numerics::kron(re.b(), id_s);
    const ComplexMatrix c = numerics::kron(re.c(), id_s);
    const ComplexMatrix dd = numerics::kron(re.dd(), id_s);
    const ComplexMatrix lhs = identity(re.m() * s) - p * a;
    const ComplexMatrix x = numerics::checked_solve(lhs, p * b, ErrorCode::ResolventSingular, "I - P(T)A");
    return dd + c * x;
}

std::vector<FunctionHandle> defect_functions(const GivoneRoesserRealization& re) {
    std::vector<FunctionHandle> out;
    for (int k = 0; k < re.d(); ++k) {
        const int offset = re.block_offset(k);
        const int mk = re.state_dims()[static_cast<std::size_t>(k)];
        out.push_back(FunctionHandle{re.d(), mk, re.n(), Domain::polydisk, [re, offset, mk](const Point& zeta) {
                                         const ComplexMatrix lhs = identity(re.m()) - re.a() * re.variable_matrix(zeta);
                                         const ComplexMatrix x = numerics::checked_solve(
                                             lhs, re.b(), ErrorCode::ResolventSingular,
                                             "I - A P(zeta) at " + format_point(zeta));
                                         return ComplexMatrix(x.middleRows(offset, mk));
                                     }});
    }
    return out;
}

namespace {

struct ColumnData {
    ComplexMatrix l;  // [P(z) theta(z); I] blocks side by side
    ComplexMatrix r;  // [theta(z); F(z)]
    std::vector<Point> points;
};

void append_columns(ColumnData& data, const FunctionHandle& f, const std::vector<FunctionHandle>& thetas,
                    const std::vector<int>& dims, const std::vector<Point>& points) {
    const int n = f.rows;
    const int m = std::accumulate(dims.begin(), dims.end(), 0);
    for (const Point& zeta : points) {
        ComplexMatrix theta(m, n);
        ComplexMatrix ptheta(m, n);
        ComplexMatrix fz;
        try {
            int offset = 0;
            for (std::size_t k = 0; k < thetas.size(); ++k) {
                const ComplexMatrix tk = thetas[k](zeta);
                if (tk.rows() != dims[k] || tk.cols() != n) {
                    throw Error(ErrorCode::DimensionMismatch, "theta_" + std::to_string(k + 1) + " has the wrong shape");
                }
                theta.middleRows(offset, dims[k]) = tk;
                ptheta.middleRows(offset, dims[k]) = zeta[static_cast<Eigen::Index>(k)] * tk;
                offset += dims[k];
            }
            fz = f(zeta);
        } catch (const Error& e) {
            if (e.is_singular()) continue;  // skip poles of the data
            throw;
        }
        const Eigen::Index col = data.l.cols();
        data.l.conservativeResize(m + n, col + n);
        data.r.conservativeResize(m + n, col + n);
        data.l.block(0, col, m, n) = ptheta;
        data.l.block(m, col, n, n) = identity(n);
        data.r.block(0, col, m, n) = theta;
        data.r.block(m, col, n, n) = fz;
        data.points.push_back(zeta);
    }
}

std::vector<Point> with_conjugates(const std::vector<Point>& points) {
    std::vector<Point> out;
    for (const Point& p : points) {
        out.push_back(p);
        if (p.imag().cwiseAbs().maxCoeff() > 0.0) out.push_back(p.conjugate());
    }
    return out;
}

}  // namespace

GivoneRoesserRealization lurking_isometry(const FunctionHandle& f, const std::vector<FunctionHandle>& thetas,
                                          const LurkingOptions& options, const Tolerances& tol) {
    tol.validate();
    const int d = f.d;
    const int n = f.rows;
    if (f.rows != f.cols) throw Error(ErrorCode::DimensionMismatch, "F must be square");
    if (static_cast<int>(thetas.size()) != d) throw Error(ErrorCode::DimensionMismatch, "need one theta per variable");
    std::vector<int> dims;
    for (const auto& th : thetas) {
        if (th.cols != n || th.d != d) throw Error(ErrorCode::DimensionMismatch, "theta shape mismatch");
        dims.push_back(th.rows);
    }
    const int m = std::accumulate(dims.begin(), dims.end(), 0);

    // Origin (pins D = F(0)), coordinate-axis points, then seeded generic points.
    std::vector<Point> base;
    base.push_back(Point::Zero(d));
    for (int k = 0; k < d; ++k) {
        Point axis = Point::Zero(d);
        axis[k] = 0.5;
        base.push_back(axis);
    }
    int random_count = std::max(options.plan.count, m + n + 5);
    auto random_points = [&](int count, std::uint64_t salt) {
        auto pts = polydisk_points(d, count, options.plan.seed * 0x9E3779B97F4A7C15ULL + salt, options.plan.radius,
                                   options.plan.margin);
        return options.real ? with_conjugates(pts) : pts;
    };

    ColumnData data;
    data.l.resize(m + n, 0);
    data.r.resize(m + n, 0);
    append_columns(data, f, thetas, dims, options.real ? with_conjugates(base) : base);
    append_columns(data, f, thetas, dims, random_points(random_count, 1));

    // Rank stabilization: five extra points must not enlarge the span.
    std::uint64_t salt = 2;
    for (int attempt = 0; attempt < 2; ++attempt) {
        const Eigen::Index before = numerics::numerical_rank(data.l, tol.rank_rtol);
        append_columns(data, f, thetas, dims, random_points(5, salt++));
        const Eigen::Index after = numerics::numerical_rank(data.l, tol.rank_rtol);
        if (after <= before) break;
        append_columns(data, f, thetas, dims, random_points(random_count, salt++));
        random_count *= 2;
    }

    const double l_norm = norm(data.l);
    const double scale = std::max(1.0, l_norm * l_norm);
    const double gram = norm(ComplexMatrix(data.l.adjoint() * data.l - data.r.adjoint() * data.r));
    if (gram > tol.identity_atol * scale) {
        std::string msg = "decomposition fails at the samples: ||L*L - R*R|| = " + sci(gram);
        if (gram <= 100.0 * tol.identity_atol * scale) msg += " (marginal; review identity_atol)";
        throw Error(ErrorCode::GramMismatch, msg);
    }

    ComplexMatrix u;
    if (options.real) {
        const Eigen::Index cols = data.l.cols();
        RealMatrix lr(m + n, 2 * cols);
        RealMatrix rr(m + n, 2 * cols);
        lr << data.l.real(), data.l.imag();
        rr << data.r.real(), data.r.imag();
        try {
            u = numerics::orthogonal_completion(lr, rr, options.hermitian, tol).cast<Complex>();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::GramMismatch) {
                throw Error(ErrorCode::RealInfeasible, std::string("sample data is not conjugation symmetric: ") + e.what());
            }
            throw;
        }
    } else {
        u = numerics::unitary_completion(data.l, data.r, options.hermitian, tol);
    }

    StructureFlags flags{true, options.hermitian, options.real};
    GivoneRoesserRealization re(n, dims, std::move(u), flags, tol);

    for (const Point& zeta : data.points) {
        const ComplexMatrix fz = f(zeta);
        const double diff = norm(ComplexMatrix(eval_transfer(re, zeta) - fz));
        if (diff > tol.identity_atol * std::max(1.0, norm(fz)) * std::max(1.0, l_norm)) {
            throw Error(ErrorCode::GramMismatch,
                        "synthesized realization misses F at " + format_point(zeta) + " by " + sci(diff));
        }
    }
    return re;
}

std::vector<SampleReport> verify_realization(const GivoneRoesserRealization& re, const FunctionHandle& f,
                                             const SamplePlan& plan, const Tolerances& tol, double match_threshold) {
    if (f.rows != re.n() || f.cols != re.n() || f.d != re.d()) {
        throw Error(ErrorCode::DimensionMismatch, "function and realization dimensions differ");
    }
    std::vector<SampleReport> out;
    ReportBuilder match("transfer_match", match_threshold);
    for (const Point& zeta : expand(plan, re.d())) {
        try {
            const ComplexMatrix fz = f(zeta);
            const double diff = norm(ComplexMatrix(eval_transfer(re, zeta) - fz)) / std::max(1.0, norm(fz));
            match.record(diff, zeta);
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
            match.skip();
        }
    }
    out.push_back(match.finish(false));

    const Eigen::Index size = re.u().rows();
    auto single = [](std::string name, double residual, double threshold) {
        ReportBuilder b(std::move(name), threshold);
        b.record(residual, std::vector<Complex>{});
        return b.finish();
    };
    constexpr double inf = std::numeric_limits<double>::infinity();
    out.push_back(single("unitarity", norm(ComplexMatrix(re.u().adjoint() * re.u() - identity(size))),
                         tol.identity_atol));
    out.push_back(single("hermitian", norm(ComplexMatrix(re.u() - re.u().adjoint())),
                         re.flags().hermitian ? tol.identity_atol : inf));
    out.push_back(single("real", numerics::max_imag(re.u()), re.flags().real ? tol.identity_atol : inf));
    return out;
}

namespace {

template <typename Residual>
SampleReport pair_check(const GivoneRoesserRealization& re, std::string name, int pairs, std::uint64_t seed,
                        double threshold, Residual residual) {
    const auto pts = polydisk_points(re.d(), 2 * pairs, seed);
    const auto thetas = defect_functions(re);
    ReportBuilder builder(std::move(name), threshold);
    for (int i = 0; i < pairs; ++i) {
        const Point& w = pts[static_cast<std::size_t>(2 * i)];
        const Point& z = pts[static_cast<std::size_t>(2 * i + 1)];
        try {
            ComplexMatrix sum = ComplexMatrix::Zero(re.n(), re.n());
            const ComplexMatrix fw = eval_transfer(re, w);
            const ComplexMatrix fz = eval_transfer(re, z);
            std::vector<ComplexMatrix> tw;
            std::vector<ComplexMatrix> tz;
            for (const auto& th : thetas) {
                tw.push_back(th(w));
                tz.push_back(th(z));
            }
            const double r = residual(w, z, fw, fz, tw, tz);
            std::vector<Complex> witness(w.data(), w.data() + w.size());
            witness.insert(witness.end(), z.data(), z.data() + z.size());
            builder.record(r, witness);
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
            builder.skip();
        }
    }
    return builder.finish();
}

}  // namespace

SampleReport agler_decomposition_check(const GivoneRoesserRealization& re, int pairs, std::uint64_t seed,
                                       double threshold) {
    return pair_check(re, "agler_decomposition", pairs, seed, threshold,
                      [&](const Point& w, const Point& z, const ComplexMatrix& fw, const ComplexMatrix& fz,
                          const std::vector<ComplexMatrix>& tw, const std::vector<ComplexMatrix>& tz) {
                          ComplexMatrix defect = identity(re.n()) - fw.adjoint() * fz;
                          for (int k = 0; k < re.d(); ++k) {
                              defect -= (1.0 - std::conj(w[k]) * z[k]) * (tw[k].adjoint() * tz[k]);
                          }
                          return norm(defect);
                      });
}

SampleReport difference_identity_check(const GivoneRoesserRealization& re, int pairs, std::uint64_t seed,
                                       double threshold) {
    return pair_check(re, "difference_identity", pairs, seed, threshold,
                      [&](const Point& w, const Point& z, const ComplexMatrix& fw, const ComplexMatrix& fz,
                          const std::vector<ComplexMatrix>& tw, const std::vector<ComplexMatrix>& tz) {
                          ComplexMatrix defect = fw.adjoint() - fz;
                          for (int k = 0; k < re.d(); ++k) {
                              defect -= (std::conj(w[k]) - z[k]) * (tw[k].adjoint() * tz[k]);
                          }
                          return norm(defect);
                      });
}

}  // namespace agler::realization
