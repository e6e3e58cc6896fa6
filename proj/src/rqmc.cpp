#include "cas/rqmc.hpp"

#include "cas/normal.hpp"
#include "cas/rng.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cas::rqmc {

namespace {

constexpr double kInv32 = 0x1p-32;
constexpr double kInv53 = 0x1p-53;
constexpr double kClampLo = 0x1p-54;
constexpr double kClampHi = 1.0 - 0x1p-54;

std::vector<std::uint32_t> van_der_corput_vectors() {
    std::vector<std::uint32_t> v(DirectionNumbers::kBits);
    for (int k = 1; k <= DirectionNumbers::kBits; ++k)
        v[k - 1] = 1u << (DirectionNumbers::kBits - k);
    return v;
}

std::vector<std::uint32_t> expand_vectors(int degree, std::uint32_t poly,
                                          const std::vector<std::uint32_t>& m) {
    const int bits = DirectionNumbers::kBits;
    std::vector<std::uint32_t> v(bits);
    for (int k = 1; k <= std::min(degree, bits); ++k)
        v[k - 1] = m[k - 1] << (bits - k);
    for (int k = degree + 1; k <= bits; ++k) {
        std::uint32_t x = v[k - degree - 1];
        x ^= x >> degree;
        for (int i = 1; i <= degree - 1; ++i)
            if ((poly >> (degree - 1 - i)) & 1u) x ^= v[k - i - 1];
        v[k - 1] = x;
    }
    return v;
}

void validate_column(const std::vector<std::uint32_t>& v, int dim) {
    // Upper-triangular with ones on the diagonal: column k has its bit at
    // position kBits-k set and none above it.
    for (int k = 1; k <= DirectionNumbers::kBits; ++k) {
        const std::uint32_t col = v[k - 1];
        const std::uint32_t diag = 1u << (DirectionNumbers::kBits - k);
        if (!(col & diag) || (k > 1 && (col >> (DirectionNumbers::kBits - k + 1)) != 0)) {
            throw std::runtime_error("direction numbers: dimension " + std::to_string(dim) +
                                     " is not upper-triangular with unit diagonal");
        }
    }
}

} // namespace

DirectionNumbers DirectionNumbers::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("direction numbers: cannot open " + path);

    DirectionNumbers dn;
    dn.v_.push_back(van_der_corput_vectors());

    std::string line;
    bool first = true;
    int expected_dim = 2;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.find_first_not_of("dsam_i \t") == std::string::npos) continue; // header
        }
        std::istringstream ls(line);
        int d = 0, degree = 0;
        std::uint32_t poly = 0;
        if (!(ls >> d >> degree >> poly))
            throw std::runtime_error("direction numbers: malformed line: " + line);
        if (d != expected_dim)
            throw std::runtime_error("direction numbers: expected dimension " +
                                     std::to_string(expected_dim) + ", got " + std::to_string(d));
        std::vector<std::uint32_t> m(degree);
        for (int k = 0; k < degree; ++k) {
            if (!(ls >> m[k]) || m[k] % 2u == 0u || m[k] >= (1u << (k + 1)))
                throw std::runtime_error("direction numbers: bad m values at dimension " +
                                         std::to_string(d));
        }
        dn.v_.push_back(expand_vectors(degree, poly, m));
        ++expected_dim;
    }
    for (int d = 1; d <= dn.max_dimension(); ++d) validate_column(dn.v_[d - 1], d);
    return dn;
}

const DirectionNumbers& DirectionNumbers::builtin() {
    static const DirectionNumbers dn = [] {
        const char* env = std::getenv("CASRQMC_DIRECTION_FILE");
        return load(env ? env : CASRQMC_DIRECTION_FILE);
    }();
    return dn;
}

LowDiscrepancySet sobol_points(int n, int s, const DirectionNumbers& dn) {
    if (n < 1) throw std::invalid_argument("sobol_points: n must be >= 1");
    if (s < 1 || s > dn.max_dimension())
        throw std::invalid_argument("sobol_points: dimension " + std::to_string(s) +
                                    " exceeds direction-number table (max " +
                                    std::to_string(dn.max_dimension()) + ")");

    LowDiscrepancySet out;
    out.n = n;
    out.s = s;
    out.values.resize(static_cast<std::size_t>(n) * s);
    for (int j = 0; j < s; ++j) {
        const std::uint32_t* v = dn.vectors(j + 1);
        for (int i = 0; i < n; ++i) {
            std::uint32_t x = 0;
            for (std::uint32_t bits = static_cast<std::uint32_t>(i), k = 0; bits; bits >>= 1, ++k)
                if (bits & 1u) x ^= v[k];
            out.values[static_cast<std::size_t>(i) * s + j] = (x + 0.5) * kInv32;
        }
    }
    return out;
}

LowDiscrepancySet scramble(const LowDiscrepancySet& points, std::uint64_t seed) {
    if (points.scrambled)
        throw std::invalid_argument("scramble: input is already scrambled");

    LowDiscrepancySet out;
    out.n = points.n;
    out.s = points.s;
    out.scrambled = true;
    out.seed = seed;
    out.values.resize(points.values.size());

    for (int j = 0; j < points.s; ++j) {
        const std::uint64_t dimkey = rng::derive(seed, 0x4449u, static_cast<std::uint64_t>(j));
        for (int i = 0; i < points.n; ++i) {
            const double u = points(i, j);
            // Recover the 32 net digits; the interior-shift half bit is
            // dropped (digits below 32 scramble to fresh random bits anyway).
            const auto x32 = static_cast<std::uint32_t>(u * 4294967296.0);
            const std::uint64_t digits = static_cast<std::uint64_t>(x32) << 21; // 53-bit frame
            std::uint64_t y = digits;
            for (int k = 1; k <= 53; ++k) {
                const std::uint64_t prefix = (k == 1) ? 0 : digits >> (54 - k);
                const std::uint64_t node = prefix | (1ULL << (k - 1));
                const std::uint64_t bit =
                    rng::mix64(dimkey ^ (node * 0x9e3779b97f4a7c15ULL)) & 1ULL;
                y ^= bit << (53 - k);
            }
            double value = (static_cast<double>(y) + 0.5) * kInv53;
            out.values[static_cast<std::size_t>(i) * points.s + j] =
                std::clamp(value, kClampLo, kClampHi);
        }
    }
    return out;
}

GaussianMatrix to_gaussian(const LowDiscrepancySet& points) {
    GaussianMatrix out;
    out.n = points.n;
    out.s = points.s;
    out.from_net = true;
    out.seed = points.seed;
    out.values.resize(points.values.size());
    for (std::size_t i = 0; i < points.values.size(); ++i)
        out.values[i] = norm_inv(std::clamp(points.values[i], kClampLo, kClampHi));
    return out;
}

GaussianMatrix gaussian_pseudorandom(int n, int s, std::uint64_t seed) {
    GaussianMatrix out;
    out.n = n;
    out.s = s;
    out.from_net = false;
    out.seed = seed;
    out.values.resize(static_cast<std::size_t>(n) * s);
    rng::CounterRng gen(rng::derive(seed, rng::kPlainMc));
    for (auto& v : out.values) v = norm_inv(gen.next_uniform());
    return out;
}

} // namespace cas::rqmc
