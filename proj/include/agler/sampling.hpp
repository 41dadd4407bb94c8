#pragma once

// Deterministic sample plans and the SampleReport record.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "agler/core.hpp"

namespace agler {

/// Seeded generator. Uses std::mt19937_64 for the stream and maps bits to
/// doubles by hand so that sequences are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal (Box-Muller).
    double normal();
    Complex complex_normal() { return {normal(), normal()}; }
    std::uint64_t next() { return engine_(); }

    ComplexMatrix complex_matrix(Eigen::Index rows, Eigen::Index cols);
    RealMatrix real_matrix(Eigen::Index rows, Eigen::Index cols);

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

enum class SampleDomain { polydisk, polyhalfplane, torus, conjugation_pairs, scaling_rays };

std::string to_string(SampleDomain domain);
SampleDomain sample_domain_from_string(const std::string& name);

struct SamplePlan {
    SampleDomain domain = SampleDomain::polydisk;
    std::uint64_t seed = 0;
    int count = 100;
    /// Polydisk radius; poly-halfplane plans are images of the radius-r polydisk.
    double radius = 0.9;
    /// Minimum distance of polydisk samples from the origin along each coordinate.
    double margin = 0.0;
};

/// Expands a plan into points of C^d. Torus plans truncate the product grids
/// (see torus_grid) to `count` points when count > 0.
std::vector<Point> expand(const SamplePlan& plan, int d);

/// Seeded points in the polydisk of the given radius (uniform by area per coordinate).
std::vector<Point> polydisk_points(int d, int count, std::uint64_t seed, double radius = 0.9, double margin = 0.0);

/// Images of polydisk_points under disk_to_halfplane.
std::vector<Point> polyhalfplane_points(int d, int count, std::uint64_t seed, double radius = 0.9);

/// Union of two product grids of roots of unity (orders 8 and 13) each rotated
/// by a seeded random phase per coordinate.
std::vector<Point> torus_grid(int d, std::uint64_t seed);

/// Scale factors used by homogeneity checks.
std::vector<Complex> scaling_factors();

struct SampleReport {
    std::string name;
    int sample_count = 0;
    int skipped = 0;
    double max_residual = 0.0;
    double threshold = 0.0;
    bool verdict = true;
    /// Worst evaluated sample (one point, or two for pair checks, concatenated).
    std::vector<Complex> witness;
    std::string note;

    bool operator==(const SampleReport&) const = default;
};

/// Accumulates per-sample residuals into a SampleReport.
class ReportBuilder {
public:
    ReportBuilder(std::string name, double threshold) {
        report_.name = std::move(name);
        report_.threshold = threshold;
    }

    void record(double residual, const std::vector<Complex>& witness);
    void record(double residual, const Point& witness);
    void skip() { ++report_.skipped; }
    void note(std::string text) { report_.note = std::move(text); }

    /// Finalizes; throws InsufficientSamples when nothing was evaluated and
    /// `require_samples` is set.
    SampleReport finish(bool require_samples = true);

private:
    SampleReport report_;
    bool any_ = false;
};

}  // namespace agler
