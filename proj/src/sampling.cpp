#include "agler/sampling.hpp"

#include <cmath>
#include <numbers>

#include "agler/cayley.hpp"

namespace agler {

double Rng::normal() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

ComplexMatrix Rng::complex_matrix(Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_normal();
    }
    return m;
}

RealMatrix Rng::real_matrix(Eigen::Index rows, Eigen::Index cols) {
    RealMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal();
    }
    return m;
}

std::string to_string(SampleDomain domain) {
    switch (domain) {
    case SampleDomain::polydisk: return "polydisk";
    case SampleDomain::polyhalfplane: return "polyhalfplane";
    case SampleDomain::torus: return "torus";
    case SampleDomain::conjugation_pairs: return "conjugation_pairs";
    case SampleDomain::scaling_rays: return "scaling_rays";
    }
    return "unknown";
}

SampleDomain sample_domain_from_string(const std::string& name) {
    for (auto dom : {SampleDomain::polydisk, SampleDomain::polyhalfplane, SampleDomain::torus,
                     SampleDomain::conjugation_pairs, SampleDomain::scaling_rays}) {
        if (to_string(dom) == name) return dom;
    }
    throw Error(ErrorCode::Malformed, "unknown sample domain '" + name + "'");
}

std::vector<Point> polydisk_points(int d, int count, std::uint64_t seed, double radius, double margin) {
    Rng rng(seed);
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) {
        Point p(d);
        for (int k = 0; k < d; ++k) {
            const double r = margin + (radius - margin) * std::sqrt(rng.uniform());
            const double angle = 2.0 * std::numbers::pi * rng.uniform();
            p[k] = std::polar(r, angle);
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Point> polyhalfplane_points(int d, int count, std::uint64_t seed, double radius) {
    auto disk = polydisk_points(d, count, seed, radius);
    for (auto& p : disk) p = cayley::disk_to_halfplane(p);
    return disk;
}

std::vector<Point> torus_grid(int d, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Point> out;
    for (int order : {8, 13}) {
        std::vector<double> phase(static_cast<std::size_t>(d));
        for (auto& ph : phase) ph = 2.0 * std::numbers::pi * rng.uniform();
        long total = 1;
        for (int k = 0; k < d; ++k) total *= order;
        for (long idx = 0; idx < total; ++idx) {
            Point p(d);
            long rest = idx;
            for (int k = 0; k < d; ++k) {
                const long j = rest % order;
                rest /= order;
                p[k] = std::polar(1.0, phase[static_cast<std::size_t>(k)] +
                                           2.0 * std::numbers::pi * static_cast<double>(j) / order);
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

std::vector<Complex> scaling_factors() { return {2.0, -1.0, Complex(0.0, 1.0), Complex(0.5, 0.5)}; }

std::vector<Point> expand(const SamplePlan& plan, int d) {
    switch (plan.domain) {
    case SampleDomain::polydisk:
        return polydisk_points(d, plan.count, plan.seed, plan.radius, plan.margin);
    case SampleDomain::polyhalfplane:
    case SampleDomain::conjugation_pairs:
    case SampleDomain::scaling_rays:
        return polyhalfplane_points(d, plan.count, plan.seed, plan.radius);
    case SampleDomain::torus: {
        auto grid = torus_grid(d, plan.seed);
        if (plan.count > 0 && static_cast<int>(grid.size()) > plan.count) {
            grid.resize(static_cast<std::size_t>(plan.count));
        }
        return grid;
    }
    }
    return {};
}

void ReportBuilder::record(double residual, const std::vector<Complex>& witness) {
    ++report_.sample_count;
    if (!any_ || residual > report_.max_residual || std::isnan(residual)) {
        report_.max_residual = residual;
        report_.witness = witness;
        any_ = true;
    }
}

void ReportBuilder::record(double residual, const Point& witness) {
    record(residual, std::vector<Complex>(witness.data(), witness.data() + witness.size()));
}

SampleReport ReportBuilder::finish(bool require_samples) {
    if (!any_ && require_samples) {
        throw Error(ErrorCode::InsufficientSamples,
                    report_.name + ": no regular samples (" + std::to_string(report_.skipped) + " skipped)");
    }
    report_.verdict = any_ ? (report_.max_residual <= report_.threshold) : true;
    return report_;
}

}  // namespace agler
