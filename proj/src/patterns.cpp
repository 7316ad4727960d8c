#include "spcam/patterns.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "spcam/noiselet.hpp"

namespace spcam {

namespace {

constexpr char kStreamMagic[4] = {'N', 'B', 'N', 'D'};
constexpr std::uint32_t kStreamVersion = 1;

void check_plan(const SamplingPlan& plan) {
    if (plan.rows * plan.cols != plan.order.n)
        throw Error("plan geometry does not match order");
    if (plan.m % 2 != 0 || plan.m < 2 || plan.m > plan.order.n)
        throw Error("plan measurement count invalid");
    if (plan.upper_rows.size() != plan.m / 2)
        throw Error("plan upper_rows size mismatch");
    for (std::uint64_t k : plan.upper_rows)
        if (k < 1 || k > plan.order.n / 2)
            throw Error("plan row index outside the upper half");
}

std::uint64_t round_binary(double v) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-6 || (r != 0.0 && r != 1.0))
        throw Error("value is not binary: " + std::to_string(v));
    return static_cast<std::uint64_t>(r);
}

// Which (source, complement) feeds p_{2j-1} and p_{2j} for each q mod 8,
// derived by substituting the modified-transform scale factor into the
// definitional pattern formulas. Pinned bit-exactly against build_patterns
// by the test suite for q = 1..8.
struct SignRule {
    PatternKind first;
    bool first_complement;
    PatternKind second;
    bool second_complement;
};

constexpr SignRule kSignRules[8] = {
    {PatternKind::b, false, PatternKind::a, false},  // q % 8 == 0
    {PatternKind::b, false, PatternKind::a, true},   // 1
    {PatternKind::a, true, PatternKind::b, false},   // 2
    {PatternKind::a, true, PatternKind::b, true},    // 3
    {PatternKind::b, true, PatternKind::a, true},    // 4
    {PatternKind::b, true, PatternKind::a, false},   // 5
    {PatternKind::a, false, PatternKind::b, true},   // 6
    {PatternKind::a, false, PatternKind::b, false},  // 7
};

void put_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    put_u32(out, static_cast<std::uint32_t>(v));
    put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in)
        throw Error("bundle stream truncated");
    return std::uint32_t(b[0]) | (std::uint32_t(b[1]) << 8) | (std::uint32_t(b[2]) << 16) |
           (std::uint32_t(b[3]) << 24);
}

std::uint64_t get_u64(std::istream& in) {
    const std::uint64_t lo = get_u32(in);
    const std::uint64_t hi = get_u32(in);
    return lo | (hi << 32);
}

}  // namespace

std::size_t SamplingPlan::row_at(std::size_t j) const {
    if (j < 1 || j > m)
        throw Error("plan position out of range: " + std::to_string(j));
    if (j <= m / 2)
        return upper_rows[j - 1];
    return order.n + 1 - upper_rows[m - j];
}

SamplingPlan make_plan(NoiseletOrder order, std::size_t image_rows, std::size_t image_cols,
                       std::size_t m, std::uint64_t seed) {
    if (image_rows * image_cols != order.n || !is_power_of_two(image_rows) ||
        !is_power_of_two(image_cols))
        throw Error("plan geometry must be power-of-two sides with rows*cols = n");
    if (m % 2 != 0)
        throw Error("measurement count m must be even, got " + std::to_string(m));
    if (m < 2 || m > order.n)
        throw Error("measurement count m out of range 2..n");

    SamplingPlan plan;
    plan.order = order;
    plan.rows = image_rows;
    plan.cols = image_cols;
    plan.m = m;
    plan.seed = seed;

    const std::size_t half = order.n / 2;
    const std::size_t want = m / 2;
    if (want == half) {
        plan.upper_rows.resize(half);
        for (std::size_t i = 0; i < half; ++i)
            plan.upper_rows[i] = i + 1;
        return plan;
    }

    // Floyd's sampling: draw `want` distinct values from 1..half without
    // materializing the population.
    std::mt19937_64 rng(seed);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(want * 2);
    for (std::uint64_t t = half - want + 1; t <= half; ++t) {
        std::uniform_int_distribution<std::uint64_t> dist(1, t);
        const std::uint64_t v = dist(rng);
        seen.insert(seen.count(v) ? t : v);
    }
    plan.upper_rows.assign(seen.begin(), seen.end());
    std::sort(plan.upper_rows.begin(), plan.upper_rows.end());
    return plan;
}

std::vector<std::uint8_t> PatternSet::pattern(std::size_t t) const {
    std::vector<std::uint8_t> out(n);
    for (std::size_t x = 0; x < n; ++x)
        out[x] = get(t, x) ? 1 : 0;
    return out;
}

std::size_t PatternSet::ones(std::size_t t) const {
    std::size_t count = 0;
    const std::uint64_t* w = bits.data() + t * words_per_pattern;
    for (std::size_t i = 0; i < words_per_pattern; ++i)
        count += static_cast<std::size_t>(std::popcount(w[i]));
    return count;
}

PatternSet build_patterns(const SamplingPlan& plan) {
    check_plan(plan);
    const std::size_t n = plan.order.n;

    PatternSet set;
    set.plan = plan;
    set.m = plan.m;
    set.n = n;
    set.words_per_pattern = (n + 63) / 64;
    set.bits.assign(set.m * set.words_per_pattern, 0);

    const bool even = plan.order.even_q();
    const double scale = even ? std::sqrt(static_cast<double>(n))
                              : std::sqrt(2.0 * static_cast<double>(n));

    ComplexField e = ComplexField::vector(n);
    for (std::size_t j = 1; j <= plan.m / 2; ++j) {
        const std::size_t k = plan.row_at(j);
        e.re.assign(n, 0.0);
        e.im.assign(n, 0.0);
        e.re[k - 1] = 1.0;
        // N is symmetric, so the transform of e_k is row k of N.
        const ComplexField phi = fnt(e, plan.order, Direction::forward);
        for (std::size_t x = 0; x < n; ++x) {
            double v1, v2;
            if (even) {
                v1 = (scale * (phi.re[x] + phi.im[x]) + 1.0) / 2.0;
                v2 = (scale * (phi.re[x] - phi.im[x]) + 1.0) / 2.0;
            } else {
                v1 = (scale * phi.re[x] + 1.0) / 2.0;
                v2 = (scale * phi.im[x] + 1.0) / 2.0;
            }
            set.set(2 * j - 2, x, round_binary(v1) != 0);
            set.set(2 * j - 1, x, round_binary(v2) != 0);
        }
    }
    return set;
}

ComplexField invert_patterns(const std::vector<std::uint8_t>& p1,
                             const std::vector<std::uint8_t>& p2, NoiseletOrder order) {
    const std::size_t n = order.n;
    if (p1.size() != n || p2.size() != n)
        throw Error("pattern length mismatch");
    for (std::size_t x = 0; x < n; ++x)
        if ((p1[x] != 0 && p1[x] != 1) || (p2[x] != 0 && p2[x] != 1))
            throw Error("invert_patterns requires strictly binary input");

    ComplexField phi = ComplexField::vector(n);
    if (order.even_q()) {
        const double s = 1.0 / std::sqrt(static_cast<double>(n));
        for (std::size_t x = 0; x < n; ++x) {
            // ((1+i) p1 + (1-i) p2 - 1) / sqrt(n)
            phi.re[x] = s * (double(p1[x]) + double(p2[x]) - 1.0);
            phi.im[x] = s * (double(p1[x]) - double(p2[x]));
        }
    } else {
        const double s = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
        for (std::size_t x = 0; x < n; ++x) {
            // (2 p1 + 2i p2 - (1+i)) / sqrt(2n)
            phi.re[x] = s * (2.0 * double(p1[x]) - 1.0);
            phi.im[x] = s * (2.0 * double(p2[x]) - 1.0);
        }
    }
    return phi;
}

std::vector<std::uint8_t> gen_pattern_fast(std::size_t k, PatternKind kind,
                                           NoiseletOrder order) {
    if (k < 1 || k > order.n)
        throw Error("pattern row out of range: " + std::to_string(k));
    const PackedBundle bundle =
        gen_bundle({PlaneDescriptor{k, kind, false}}, order, 1, order.n);
    return unpack_plane(bundle, 0);
}

PlaneMap resolve_sign_map(const SamplingPlan& plan) {
    check_plan(plan);
    const SignRule& rule = kSignRules[plan.order.q % 8];
    PlaneMap map;
    map.reserve(plan.m);
    for (std::size_t j = 1; j <= plan.m / 2; ++j) {
        const std::uint64_t k = plan.row_at(j);
        map.push_back({k, rule.first, rule.first_complement});
        map.push_back({k, rule.second, rule.second_complement});
    }
    return map;
}

PackedBundle gen_bundle(const PlaneMap& map, NoiseletOrder order, std::size_t image_rows,
                        std::size_t image_cols, int width) {
    if (width < 3 || width > 64)
        throw Error("bundle width must be in 3..64");
    const std::size_t l = map.size();
    if (l == 0)
        throw Error("bundle needs at least one plane");
    if (l > static_cast<std::size_t>(width - 2))
        throw Error("bundle overflow: " + std::to_string(l) + " planes exceed width-2 = " +
                    std::to_string(width - 2));
    if (image_rows * image_cols != order.n)
        throw Error("bundle geometry must satisfy rows*cols = n");

    const std::size_t n = order.n;
    IntComplexField packed(n);
    std::uint64_t mask_a = 0, mask_b = 0, mask_comp = 0;
    for (std::size_t t = 0; t < l; ++t) {
        const PlaneDescriptor& d = map[t];
        if (d.row < 1 || d.row > n)
            throw Error("bundle plane row out of range");
        packed.re[d.row - 1] += std::int64_t{1} << (t + 1);
        const std::uint64_t bit = std::uint64_t{1} << (t + 1);
        (d.kind == PatternKind::a ? mask_a : mask_b) |= bit;
        if (d.complement)
            mask_comp |= bit;
    }

    detail::modified_fnt_unchecked(packed.re.data(), packed.im.data(), n);

    // a_packed = (Re + 2^(l+1) - 1) >> 1; Re is even so the odd excess is
    // truncated away. Intermediates of the unit-packed transform stay below
    // 2^(l+1), which is the width-2 guard-bit budget; verify it.
    const std::int64_t bound = (std::int64_t{1} << (l + 1)) - 2;
    const std::uint64_t offset = (std::uint64_t{1} << (l + 1)) - 1;
    const std::uint64_t payload_mask = (std::uint64_t{1} << (l + 1)) - 2;

    PackedBundle bundle;
    bundle.order = order;
    bundle.rows = image_rows;
    bundle.cols = image_cols;
    bundle.width = width;
    bundle.plane_map = map;
    bundle.planes.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
        if (std::abs(packed.re[x]) > bound || std::abs(packed.im[x]) > bound)
            throw Error("bundle transform exceeded the guard-bit budget");
        const std::uint64_t a = (static_cast<std::uint64_t>(packed.re[x]) + offset) >> 1;
        const std::uint64_t b = (static_cast<std::uint64_t>(packed.im[x]) + offset) >> 1;
        const std::uint64_t sel = ((a & mask_a) | (b & mask_b)) ^ mask_comp;
        bundle.planes[x] = (sel & payload_mask) | 1u;  // bit 0: sync plane
    }
    return bundle;
}

std::vector<std::uint8_t> unpack_plane(const PackedBundle& bundle, std::size_t t) {
    if (t >= bundle.plane_map.size())
        throw Error("bundle plane index out of range");
    std::vector<std::uint8_t> out(bundle.planes.size());
    for (std::size_t x = 0; x < out.size(); ++x)
        out[x] = static_cast<std::uint8_t>((bundle.planes[x] >> (t + 1)) & 1u);
    return out;
}

void write_bundle_stream(std::ostream& out, const std::vector<PackedBundle>& bundles) {
    for (const PackedBundle& b : bundles) {
        const std::size_t l = b.plane_map.size();
        if (l > kStreamMaxPayloadPlanes)
            throw Error("stream frames carry at most 23 payload planes, got " +
                        std::to_string(l));
        out.write(kStreamMagic, 4);
        put_u32(out, kStreamVersion);
        put_u32(out, b.order.q);
        put_u32(out, static_cast<std::uint32_t>(b.rows));
        put_u32(out, static_cast<std::uint32_t>(b.cols));
        put_u32(out, static_cast<std::uint32_t>(l));
        for (const PlaneDescriptor& d : b.plane_map) {
            put_u64(out, d.row);
            const unsigned char kind = d.kind == PatternKind::a ? 0 : 1;
            const unsigned char comp = d.complement ? 1 : 0;
            out.write(reinterpret_cast<const char*>(&kind), 1);
            out.write(reinterpret_cast<const char*>(&comp), 1);
        }
        for (std::uint64_t w : b.planes)
            put_u32(out, static_cast<std::uint32_t>(w));
    }
    if (!out)
        throw Error("bundle stream write failed");
}

std::vector<PackedBundle> read_bundle_stream(std::istream& in) {
    std::vector<PackedBundle> bundles;
    while (true) {
        char magic[4];
        in.read(magic, 4);
        if (in.gcount() == 0 && in.eof())
            break;
        if (in.gcount() != 4 || !std::equal(magic, magic + 4, kStreamMagic))
            throw Error("bad bundle stream magic");
        const std::uint32_t version = get_u32(in);
        if (version != kStreamVersion)
            throw Error("unsupported bundle stream version " + std::to_string(version));
        PackedBundle b;
        const std::uint32_t q = get_u32(in);
        b.order = NoiseletOrder::from_exponent(q);
        b.rows = get_u32(in);
        b.cols = get_u32(in);
        if (b.rows * b.cols != b.order.n)
            throw Error("bundle stream geometry mismatch");
        const std::uint32_t l = get_u32(in);
        if (l == 0 || l > kStreamMaxPayloadPlanes)
            throw Error("bundle stream plane count out of range");
        b.plane_map.resize(l);
        for (std::uint32_t t = 0; t < l; ++t) {
            b.plane_map[t].row = get_u64(in);
            char kind = 0, comp = 0;
            in.read(&kind, 1);
            in.read(&comp, 1);
            if (!in)
                throw Error("bundle stream truncated");
            b.plane_map[t].kind = kind ? PatternKind::b : PatternKind::a;
            b.plane_map[t].complement = comp != 0;
        }
        b.planes.resize(b.order.n);
        for (std::size_t x = 0; x < b.planes.size(); ++x)
            b.planes[x] = get_u32(in);
        bundles.push_back(std::move(b));
    }
    return bundles;
}

void write_bundle_stream_file(const std::string& path, const std::vector<PackedBundle>& bundles) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path);
    write_bundle_stream(out, bundles);
}

std::vector<PackedBundle> read_bundle_stream_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open for reading: " + path);
    return read_bundle_stream(in);
}

std::string plan_to_json(const SamplingPlan& plan) {
    nlohmann::json j;
    j["q"] = plan.order.q;
    j["rows"] = plan.rows;
    j["cols"] = plan.cols;
    j["m"] = plan.m;
    j["seed"] = plan.seed;
    j["upper_rows"] = plan.upper_rows;
    return j.dump(2);
}

SamplingPlan plan_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("plan parse error: ") + e.what());
    }
    SamplingPlan plan;
    try {
        plan.order = NoiseletOrder::from_exponent(j.at("q").get<unsigned>());
        plan.rows = j.at("rows").get<std::size_t>();
        plan.cols = j.at("cols").get<std::size_t>();
        plan.m = j.at("m").get<std::size_t>();
        plan.seed = j.at("seed").get<std::uint64_t>();
        plan.upper_rows = j.at("upper_rows").get<std::vector<std::uint64_t>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("plan field error: ") + e.what());
    }
    check_plan(plan);
    return plan;
}

void save_plan(const std::string& path, const SamplingPlan& plan) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open for writing: " + path);
    out << plan_to_json(plan) << '\n';
}

SamplingPlan load_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open for reading: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return plan_from_json(ss.str());
}

}  // namespace spcam
