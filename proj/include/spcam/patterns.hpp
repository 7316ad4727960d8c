#pragma once

#include <iosfwd>

#include "spcam/core.hpp"

namespace spcam {

/// Ordered, mirror-paired selection of noiselet rows defining the sensing
/// matrix, plus the 2D geometry of the displayed patterns (rows*cols = n).
///
/// Plan positions are 1-based: position j in 1..m/2 maps to upper_rows[j-1]
/// and position m+1-j to its mirror n+1-upper_rows[j-1], so the row at
/// position j is always the conjugate of the row at position m+1-j.
struct SamplingPlan {
    NoiseletOrder order;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t m = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> upper_rows;  // 1-based indices in 1..n/2

    /// Noiselet row index (1-based) sensed at plan position j in 1..m.
    std::size_t row_at(std::size_t j) const;
};

SamplingPlan make_plan(NoiseletOrder order, std::size_t image_rows, std::size_t image_cols,
                       std::size_t m, std::uint64_t seed);

/// Binary patterns stored one bit per pixel, row-major per pattern.
struct PatternSet {
    SamplingPlan plan;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t words_per_pattern = 0;
    std::vector<std::uint64_t> bits;

    bool get(std::size_t t, std::size_t x) const {
        return (bits[t * words_per_pattern + x / 64] >> (x % 64)) & 1u;
    }
    void set(std::size_t t, std::size_t x, bool v) {
        std::uint64_t& w = bits[t * words_per_pattern + x / 64];
        const std::uint64_t mask = std::uint64_t{1} << (x % 64);
        w = v ? (w | mask) : (w & ~mask);
    }
    std::vector<std::uint8_t> pattern(std::size_t t) const;
    std::size_t ones(std::size_t t) const;
};

/// Definitional pattern construction: for each plan pair j the binary rows
///   odd q:   p_{2j-1} = (sqrt(2n) Re(phi_j) + 1)/2,  p_{2j} = (sqrt(2n) Im(phi_j) + 1)/2
///   even q:  p_{2j-1} = (sqrt(n) [Re+Im](phi_j) + 1)/2,  p_{2j} = (sqrt(n) [Re-Im](phi_j) + 1)/2
/// with phi_j the unitary noiselet row at plan position j, evaluated through
/// the fast float transform.
PatternSet build_patterns(const SamplingPlan& plan);

/// Inverse of the construction above for one pattern pair; recovers the
/// complex sensing row. Inputs must be strictly 0/1.
ComplexField invert_patterns(const std::vector<std::uint8_t>& p1,
                             const std::vector<std::uint8_t>& p2, NoiseletOrder order);

enum class PatternKind : std::uint8_t { a = 0, b = 1 };

/// One bit-plane of a packed bundle: which modified-noiselet half (a = real,
/// b = imaginary) of which noiselet row, optionally complemented.
struct PlaneDescriptor {
    std::uint64_t row = 1;  // 1-based noiselet row
    PatternKind kind = PatternKind::a;
    bool complement = false;
};
using PlaneMap = std::vector<PlaneDescriptor>;

/// a_k = (Re(Ntilde row k)+1)/2 or b_k = (Im(...)+1)/2 through the integer
/// transform of a unit vector.
std::vector<std::uint8_t> gen_pattern_fast(std::size_t k, PatternKind kind,
                                           NoiseletOrder order);

/// Plane map reproducing build_patterns bit-exactly through the fast path:
/// entry 2j-2 describes p_{2j-1} and entry 2j-1 describes p_{2j}. Which of
/// (a_k, b_k) feeds which slot follows the q mod 4 rule; the complement
/// flags come from the phase of the modified-transform scale factor.
PlaneMap resolve_sign_map(const SamplingPlan& plan);

/// Up to width-2 binary patterns packed into the bit-planes of one integer
/// array. Payload plane t (0-based index into plane_map) occupies bit t+1;
/// bit 0 carries the all-ones synchronization plane.
struct PackedBundle {
    NoiseletOrder order;
    std::size_t rows = 0;
    std::size_t cols = 0;
    int width = 64;
    PlaneMap plane_map;
    std::vector<std::uint64_t> planes;
};

PackedBundle gen_bundle(const PlaneMap& map, NoiseletOrder order, std::size_t image_rows,
                        std::size_t image_cols, int width = 64);

/// Extract payload plane t (0-based) as a 0/1 vector.
std::vector<std::uint8_t> unpack_plane(const PackedBundle& bundle, std::size_t t);

/// Bundle stream framing. Little-endian throughout; at most 23 payload
/// planes per frame plus the sync plane, each pixel stored as one 32-bit
/// word with bits 0..23 in use.
void write_bundle_stream(std::ostream& out, const std::vector<PackedBundle>& bundles);
std::vector<PackedBundle> read_bundle_stream(std::istream& in);
void write_bundle_stream_file(const std::string& path, const std::vector<PackedBundle>& bundles);
std::vector<PackedBundle> read_bundle_stream_file(const std::string& path);

/// Plan (de)serialization: JSON document with keys q, rows, cols, m,
/// upper_rows, seed.
std::string plan_to_json(const SamplingPlan& plan);
SamplingPlan plan_from_json(const std::string& text);
void save_plan(const std::string& path, const SamplingPlan& plan);
SamplingPlan load_plan(const std::string& path);

inline constexpr std::size_t kStreamMaxPayloadPlanes = 23;

}  // namespace spcam
