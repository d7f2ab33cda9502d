#include "nfsage/channel.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace nfsage {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double ChannelTensor::energy() const {
    double e = 0.0;
    for (const cplx& v : values) e += std::norm(v);
    return e;
}

void ChannelTensor::validate() const {
    freq.validate();
    if (values.size() != size()) throw data_error("channel tensor dimension mismatch");
    for (const cplx& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw data_error("channel tensor contains non-finite values");
}

std::vector<cplx> steering_phase(const std::vector<double>& delays, std::size_t m_count,
                                 std::size_t n_count, const FrequencyGrid& freq) {
    freq.validate();
    if (delays.size() != m_count * n_count) throw data_error("delay matrix dimension mismatch");
    const std::size_t P = freq.count;
    std::vector<cplx> out(m_count * n_count * P);
    for (std::size_t i = 0; i < delays.size(); ++i) {
        const double tau = delays[i];
        if (!(tau >= 0.0) || !std::isfinite(tau))
            throw data_error("delays must be finite and non-negative");
        for (std::size_t p = 0; p < P; ++p)
            out[i * P + p] = std::polar(1.0, -kTwoPi * freq.freq(p) * tau);
    }
    return out;
}

ChannelTensor synthesize_path(const PathTruth& path, const ArrayLayout& arrays,
                              const FrequencyGrid& freq) {
    arrays.validate();
    freq.validate();
    const std::size_t M = arrays.m(), N = arrays.n(), P = freq.count;
    bool any_specular = false;
    for (HopMechanism h : path.mechanisms)
        if (h == HopMechanism::specular) any_specular = true;
    if (any_specular && path.per_element_points.size() != M * N * static_cast<std::size_t>(path.bounce))
        throw data_error("specular path is missing per-element points");

    ChannelTensor t;
    t.m_count = M;
    t.n_count = N;
    t.freq = freq;
    t.arrays = arrays;
    t.values.assign(M * N * P, cplx{0.0, 0.0});

    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = 0; n < N; ++n) {
            if (!path.visible(m, n, N)) continue;
            const double tau = path.element_distance(arrays, m, n) / kSpeedOfLight;
            cplx amp = path.gain;
            if (!path.amp_profile.empty()) amp *= path.amp_profile[m * N + n];
            cplx* row = t.values.data() + t.offset(m, n);
            for (std::size_t p = 0; p < P; ++p)
                row[p] = amp * std::polar(1.0, -kTwoPi * freq.freq(p) * tau);
        }
    return t;
}

double NormalRng::uniform() {
    // splitmix64; (0, 1] so Box-Muller's logarithm stays finite.
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return (static_cast<double>(z >> 11) + 1.0) * 0x1p-53;
}

double NormalRng::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
}

ChannelTensor synthesize_channel(const std::vector<PathTruth>& paths, const ArrayLayout& arrays,
                                 const FrequencyGrid& freq, double snr_db, std::uint64_t seed) {
    arrays.validate();
    freq.validate();
    ChannelTensor sum;
    sum.m_count = arrays.m();
    sum.n_count = arrays.n();
    sum.freq = freq;
    sum.arrays = arrays;
    sum.values.assign(sum.size(), cplx{0.0, 0.0});

    // Deterministic ordered accumulation over paths.
    for (const PathTruth& p : paths) {
        const ChannelTensor zl = synthesize_path(p, arrays, freq);
        for (std::size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += zl.values[i];
    }

    if (std::isinf(snr_db) && snr_db > 0.0) {
        sum.noise_power = 0.0;
        return sum;
    }

    const double signal_power = sum.energy();
    const double sigma2 =
        signal_power / (static_cast<double>(sum.size()) * std::pow(10.0, snr_db / 10.0));
    sum.noise_power = sigma2;
    NormalRng rng(seed);
    const double scale = std::sqrt(sigma2 / 2.0);
    for (cplx& v : sum.values) {
        const double re = rng.next();
        const double im = rng.next();
        v += cplx{scale * re, scale * im};
    }
    return sum;
}

std::vector<double> cpdp(const ChannelTensor& chan, std::size_t tx_index) {
    if (tx_index >= chan.m_count) throw data_error("tx index out of range");
    const std::size_t N = chan.n_count, P = chan.p_count();
    std::vector<double> out(N * P, 0.0);
    // Direct IDFT per Rx element; bin k corresponds to delay k/(P f_s).
    // Normalized by 1/P so that a unit-modulus single path peaks at 1.
    for (std::size_t n = 0; n < N; ++n) {
        const cplx* row = chan.element(tx_index, n);
        for (std::size_t k = 0; k < P; ++k) {
            const cplx w = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(P));
            cplx acc{0.0, 0.0};
            cplx wp{1.0, 0.0};
            for (std::size_t p = 0; p < P; ++p) {
                acc += row[p] * wp;
                wp *= w;
            }
            acc /= static_cast<double>(P);
            out[n * P + k] = std::norm(acc);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// NFCH file format: "NFCH", u32 version, u32 M, u32 N, u32 P, f64 f1, f64 fs,
// f64 sigma0^2 (NaN unknown), then M*N*P (f64 re, f64 im), p fastest.

namespace {

constexpr std::uint32_t kFormatVersion = 1;

template <typename T> void write_le(std::ostream& out, T v) {
    static_assert(sizeof(T) <= 8);
    unsigned char buf[8];
    std::uint64_t bits = 0;
    std::memcpy(&bits, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T> T read_le(std::istream& in, const std::string& origin) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw data_error(origin + ": truncated channel file");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    T v;
    std::memcpy(&v, &bits, sizeof(T));
    return v;
}

} // namespace

void save_channel(const ChannelTensor& chan, std::ostream& out) {
    chan.validate();
    out.write("NFCH", 4);
    write_le<std::uint32_t>(out, kFormatVersion);
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(chan.m_count));
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(chan.n_count));
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(chan.p_count()));
    write_le<double>(out, chan.freq.start_hz);
    write_le<double>(out, chan.freq.step_hz);
    write_le<double>(out, chan.noise_power);
    for (const cplx& v : chan.values) {
        write_le<double>(out, v.real());
        write_le<double>(out, v.imag());
    }
    if (!out) throw data_error("failed to write channel data");
}

void save_channel_file(const ChannelTensor& chan, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open for writing: " + path);
    save_channel(chan, out);
}

ChannelTensor load_channel(std::istream& in, const std::string& origin) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "NFCH", 4) != 0)
        throw data_error(origin + ": not an NFCH channel file");
    const auto version = read_le<std::uint32_t>(in, origin);
    if (version != kFormatVersion)
        throw data_error(origin + ": unsupported format version " + std::to_string(version));
    ChannelTensor t;
    t.m_count = read_le<std::uint32_t>(in, origin);
    t.n_count = read_le<std::uint32_t>(in, origin);
    t.freq.count = read_le<std::uint32_t>(in, origin);
    t.freq.start_hz = read_le<double>(in, origin);
    t.freq.step_hz = read_le<double>(in, origin);
    t.noise_power = read_le<double>(in, origin);
    if (t.m_count == 0 || t.n_count == 0 || t.freq.count == 0)
        throw data_error(origin + ": empty tensor dimensions");
    t.values.resize(t.size());
    for (cplx& v : t.values) {
        const double re = read_le<double>(in, origin);
        const double im = read_le<double>(in, origin);
        v = {re, im};
    }
    return t;
}

ChannelTensor load_channel_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open channel file: " + path);
    return load_channel(in, path);
}

} // namespace nfsage
