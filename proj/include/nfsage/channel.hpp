#pragma once

#include "nfsage/scenario.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

namespace nfsage {

using cplx = std::complex<double>;

/// Uniform sub-band grid: f_p = start_hz + p * step_hz for p = 0..count-1.
struct FrequencyGrid {
    double start_hz = 0.0;
    double step_hz = 10e6;
    std::size_t count = 1;

    double freq(std::size_t p) const { return start_hz + static_cast<double>(p) * step_hz; }
    /// Delay-bin width of the P-point profile.
    double delay_resolution() const { return 1.0 / (static_cast<double>(count) * step_hz); }
    /// Unambiguous delay span.
    double delay_span() const { return 1.0 / step_hz; }
    void validate() const {
        if (!(step_hz > 0.0)) throw data_error("sub-band spacing must be positive");
        if (count < 1) throw data_error("sub-band count must be >= 1");
    }
};

inline FrequencyGrid frequency_grid(const Waveform& w) {
    return {w.start_hz(), w.subband_hz, w.subbands};
}

/// Complex frequency response over (m, n, p); p varies fastest, then n,
/// then m — the same layout the NFCH file uses.
struct ChannelTensor {
    std::size_t m_count = 0;
    std::size_t n_count = 0;
    FrequencyGrid freq;
    std::vector<cplx> values;
    ArrayLayout arrays; // element coordinates; not stored in the NFCH file
    double noise_power = std::numeric_limits<double>::quiet_NaN(); // sigma_0^2, NaN if unknown

    std::size_t p_count() const { return freq.count; }
    std::size_t size() const { return m_count * n_count * p_count(); }
    std::size_t offset(std::size_t m, std::size_t n) const {
        return (m * n_count + n) * p_count();
    }
    cplx& at(std::size_t m, std::size_t n, std::size_t p) { return values[offset(m, n) + p]; }
    const cplx& at(std::size_t m, std::size_t n, std::size_t p) const {
        return values[offset(m, n) + p];
    }
    const cplx* element(std::size_t m, std::size_t n) const { return values.data() + offset(m, n); }

    double energy() const;
    void validate() const;
};

/// Unit-modulus steering entries exp(-j 2 pi f_p tau_mn) for every sub-band.
/// `delays` is an M*N row-major matrix of non-negative delays in seconds.
std::vector<cplx> steering_phase(const std::vector<double>& delays, std::size_t m_count,
                                 std::size_t n_count, const FrequencyGrid& freq);

/// Noiseless contribution of a single path: per-element delays from its
/// geometry (per-element points when specular), amplitude gain * visibility
/// * amplitude profile. Invisible cells are exactly zero.
ChannelTensor synthesize_path(const PathTruth& path, const ArrayLayout& arrays,
                              const FrequencyGrid& freq);

constexpr double kNoiselessSnr = std::numeric_limits<double>::infinity();

/// Superposition of all paths plus circularly symmetric complex Gaussian
/// noise. sigma_0^2 is chosen so that total signal power / noise power
/// equals 10^(snr_db/10); snr_db = +inf generates no noise. The noise
/// stream is reproducible from the seed.
ChannelTensor synthesize_channel(const std::vector<PathTruth>& paths, const ArrayLayout& arrays,
                                 const FrequencyGrid& freq, double snr_db, std::uint64_t seed);

/// Concatenated power delay profile for one Tx element: row n holds
/// |IDFT_P(values[tx, n, :])|^2 over the P delay bins.
std::vector<double> cpdp(const ChannelTensor& chan, std::size_t tx_index);

// NFCH binary tensor file ----------------------------------------------------
void save_channel(const ChannelTensor& chan, std::ostream& out);
void save_channel_file(const ChannelTensor& chan, const std::string& path);
/// Reads an NFCH stream. The file carries no array coordinates; the caller
/// attaches an ArrayLayout before estimation.
ChannelTensor load_channel(std::istream& in, const std::string& origin = "<nfch>");
ChannelTensor load_channel_file(const std::string& path);

/// Deterministic standard-normal generator (Box-Muller over splitmix64),
/// bit-reproducible across platforms for a fixed seed.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : state_(seed) {}
    double next();

private:
    double uniform();
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace nfsage
