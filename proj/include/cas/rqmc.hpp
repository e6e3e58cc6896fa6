#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cas::rqmc {

// Sobol' generator matrices parsed from the published direction-number
// format: one line per dimension holding "d s a m_1 ... m_s" (dimension,
// primitive-polynomial degree, polynomial code, initial direction numbers).
// Dimension 1 is the van der Corput sequence and needs no table entry.
class DirectionNumbers {
  public:
    static constexpr int kBits = 32;

    static DirectionNumbers load(const std::string& path);
    static const DirectionNumbers& builtin();

    int max_dimension() const { return static_cast<int>(v_.size()); }

    // Direction vectors for 1-based dimension dim, kBits entries, each an
    // upper-triangular generator-matrix column with a set diagonal bit.
    const std::uint32_t* vectors(int dim) const { return v_[dim - 1].data(); }

  private:
    std::vector<std::vector<std::uint32_t>> v_;
};

struct LowDiscrepancySet {
    int n = 0;
    int s = 0;
    std::vector<double> values; // n-by-s, row-major, strictly inside (0,1)
    bool scrambled = false;
    std::uint64_t seed = 0;

    double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * s + j]; }
};

struct GaussianMatrix {
    int n = 0;
    int s = 0;
    std::vector<double> values;
    bool from_net = false; // provenance: mapped from a net vs pseudorandom
    std::uint64_t seed = 0;

    double operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * s + j]; }
    const double* row(int i) const { return values.data() + static_cast<std::size_t>(i) * s; }
};

// First n Sobol' points in natural index order. Values carry the half-cell
// interior shift ((x + 1/2) * 2^-32), so the raw lattice is recoverable and
// nothing ever sits on 0 or 1.
LowDiscrepancySet sobol_points(int n, int s,
                               const DirectionNumbers& dn = DirectionNumbers::builtin());

// Nested uniform scrambling down to 53 bits, independent per dimension,
// deterministic in (points, seed). Permutation bits come from a counter-based
// hash keyed by (seed, dimension, trie node), so no permutation tree is stored.
LowDiscrepancySet scramble(const LowDiscrepancySet& points, std::uint64_t seed);

// Componentwise standard-normal inverse CDF; inputs clamped to
// [2^-54, 1 - 2^-54] first.
GaussianMatrix to_gaussian(const LowDiscrepancySet& points);

// Plain-MC baseline sharing the library's counter-based generator.
GaussianMatrix gaussian_pseudorandom(int n, int s, std::uint64_t seed);

} // namespace cas::rqmc
