// SPDX-License-Identifier: Apache-2.0
//
// msisac: multistatic OFDM sensing simulator for cellular layouts
// Copyright (C) 2026 The msisac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "msisac/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dft.hpp"
#include "msisac/errors.hpp"

namespace msisac {

namespace {

// Resource elements per block; the split planes of one block stay in L1.
constexpr std::size_t kBlock = 256;

double median_of(std::span<const double> v) {
    if (v.empty()) return 0.0;
    std::vector<double> tmp(v.begin(), v.end());
    const std::size_t mid = tmp.size() / 2;
    std::nth_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid), tmp.end());
    const double upper = tmp[mid];
    if (tmp.size() % 2 == 1) return upper;
    const double lower = *std::max_element(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

// Sum over r in [0, len) of |sum_n conj(w_n) y_n[r]|. Single precision: the
// spectrum only ranks angles, and each block sum is folded into a double.
template <std::size_t NA>
float beam_magnitude_sum(const float* yr, const float* yi, std::size_t stride, std::size_t len, const float* wr,
                         const float* wi) {
    float s = 0.0f;
#pragma omp simd reduction(+ : s)
    for (std::size_t r = 0; r < len; ++r) {
        float re = 0.0f, im = 0.0f;
        for (std::size_t n = 0; n < NA; ++n) {
            const float a = yr[n * stride + r];
            const float b = yi[n * stride + r];
            re += wr[n] * a + wi[n] * b;
            im += wr[n] * b - wi[n] * a;
        }
        s += std::sqrt(re * re + im * im);
    }
    return s;
}

// Four angles per pass, so each loaded element feeds four beams.
template <std::size_t NA>
void beam_magnitude_sum4(const float* yr, const float* yi, std::size_t stride, std::size_t len, const float* wr,
                         const float* wi, float* out) {
    float s0 = 0.0f, s1 = 0.0f, s2 = 0.0f, s3 = 0.0f;
#pragma omp simd reduction(+ : s0, s1, s2, s3)
    for (std::size_t r = 0; r < len; ++r) {
        float re[4] = {}, im[4] = {};
#pragma GCC unroll 16
        for (std::size_t n = 0; n < NA; ++n) {
            const float a = yr[n * stride + r];
            const float b = yi[n * stride + r];
#pragma GCC unroll 4
            for (std::size_t m = 0; m < 4; ++m) {
                re[m] += wr[m * NA + n] * a + wi[m * NA + n] * b;
                im[m] += wr[m * NA + n] * b - wi[m * NA + n] * a;
            }
        }
        s0 += std::sqrt(re[0] * re[0] + im[0] * im[0]);
        s1 += std::sqrt(re[1] * re[1] + im[1] * im[1]);
        s2 += std::sqrt(re[2] * re[2] + im[2] * im[2]);
        s3 += std::sqrt(re[3] * re[3] + im[3] * im[3]);
    }
    out[0] = s0;
    out[1] = s1;
    out[2] = s2;
    out[3] = s3;
}

float beam_magnitude_sum_any(const float* yr, const float* yi, std::size_t stride, std::size_t len, std::size_t N,
                             const float* wr, const float* wi) {
    float acc_re[kBlock] = {}, acc_im[kBlock] = {};
    for (std::size_t n = 0; n < N; ++n) {
        const float* a = yr + n * stride;
        const float* b = yi + n * stride;
        const float cr = wr[n], ci = wi[n];
#pragma omp simd
        for (std::size_t r = 0; r < len; ++r) {
            acc_re[r] += cr * a[r] + ci * b[r];
            acc_im[r] += cr * b[r] - ci * a[r];
        }
    }
    float s = 0.0f;
#pragma omp simd reduction(+ : s)
    for (std::size_t r = 0; r < len; ++r) s += std::sqrt(acc_re[r] * acc_re[r] + acc_im[r] * acc_im[r]);
    return s;
}

using KernelFn = float (*)(const float*, const float*, std::size_t, std::size_t, const float*, const float*);
using Kernel4Fn = void (*)(const float*, const float*, std::size_t, std::size_t, const float*, const float*, float*);

KernelFn fixed_kernel(std::size_t N) {
    switch (N) {
        case 1: return &beam_magnitude_sum<1>;
        case 2: return &beam_magnitude_sum<2>;
        case 4: return &beam_magnitude_sum<4>;
        case 8: return &beam_magnitude_sum<8>;
        case 16: return &beam_magnitude_sum<16>;
        default: return nullptr;
    }
}

Kernel4Fn fixed_kernel4(std::size_t N) {
    switch (N) {
        case 1: return &beam_magnitude_sum4<1>;
        case 2: return &beam_magnitude_sum4<2>;
        case 4: return &beam_magnitude_sum4<4>;
        case 8: return &beam_magnitude_sum4<8>;
        default: return nullptr;
    }
}

void check_array(const SymbolGrid& grid, const ArrayConfig& array) {
    if (array.n_elements != grid.N())
        throw ConfigError("array size " + std::to_string(array.n_elements) + " does not match grid N " +
                          std::to_string(grid.N()));
}

double parabolic_offset(double a, double b, double c) {
    const double denom = a - 2.0 * b + c;
    if (!(denom < 0.0)) return 0.0;
    return std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
}

std::size_t wrap_index(std::ptrdiff_t i, std::size_t n) {
    const auto m = static_cast<std::ptrdiff_t>(n);
    return static_cast<std::size_t>(((i % m) + m) % m);
}

// Sub-bin position of a peak of `v` (Ns x Nc, circular) at (p, q0).
std::pair<double, double> refine_peak(std::span<const double> v, std::size_t Ns, std::size_t Nc, std::size_t p,
                                      std::size_t q0) {
    const auto P = static_cast<std::ptrdiff_t>(p), Q = static_cast<std::ptrdiff_t>(q0);
    double dp = 0.0, dq = 0.0;
    if (Ns >= 3)
        dp = parabolic_offset(v[wrap_index(P - 1, Ns) * Nc + q0], v[p * Nc + q0], v[wrap_index(P + 1, Ns) * Nc + q0]);
    if (Nc >= 3)
        dq = parabolic_offset(v[p * Nc + wrap_index(Q - 1, Nc)], v[p * Nc + q0], v[p * Nc + wrap_index(Q + 1, Nc)]);
    return {static_cast<double>(p) + dp, static_cast<double>(q0) + dq};
}

}  // namespace

void DetectorParams::validate() const {
    if (!(aoa_step > 0.0)) throw ConfigError("estimator: aoa_step must be positive");
    if (!(sector_half_width >= 0.0)) throw ConfigError("estimator: sector_half_width must be >= 0");
    if (!(aoa_threshold > 1.0)) throw ConfigError("estimator: aoa_threshold must be > 1");
    if (!(rd_threshold > 1.0)) throw ConfigError("estimator: rd_threshold must be > 1");
    if (!(rd_floor >= 0.0 && rd_floor < 1.0)) throw ConfigError("estimator: rd_floor must be in [0, 1)");
}

std::vector<double> sector_grid(double boresight, double half_width, double step) {
    if (!(step > 0.0)) throw ConfigError("sector_grid: step must be positive");
    const auto m = static_cast<long>(std::floor(half_width / step + 1e-9));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(2 * m + 1));
    for (long i = -m; i <= m; ++i) grid.push_back(boresight + static_cast<double>(i) * step);
    return grid;
}

AoaSpectrum aoa_spectrum(const SymbolGrid& rx, const ArrayConfig& array, std::span<const double> phi_grid) {
    check_array(rx, array);
    if (phi_grid.empty()) throw ConfigError("aoa_spectrum: empty angle grid");

    const std::size_t N = rx.N(), P = rx.plane_size(), M = phi_grid.size();

    std::vector<float> wr(M * N), wi(M * N);
    for (std::size_t m = 0; m < M; ++m) {
        const auto a = steering_vector(array, phi_grid[m], rx.cfg().fc);
        for (std::size_t n = 0; n < N; ++n) {
            wr[m * N + n] = static_cast<float>(a[n].real());
            wi[m * N + n] = static_cast<float>(a[n].imag());
        }
    }

    // Split into real/imaginary floats, one [N][kBlock] tile per block of
    // resource elements. Whole planes would sit a multiple of 4 KiB apart and
    // collide in L1. Zero padding of the last tile adds nothing to the sums.
    // Normalised so single precision cannot underflow on tiny echoes.
    const auto data = rx.data();
    double peak = 0.0;
    for (const cplx& z : data) peak = std::max({peak, std::abs(z.real()), std::abs(z.imag())});
    const double scale = peak > 0.0 ? 1.0 / peak : 1.0;
    const std::size_t n_blocks = (P + kBlock - 1) / kBlock, tile = N * kBlock;
    std::vector<float> yr(n_blocks * tile, 0.0f), yi(n_blocks * tile, 0.0f);
    for (std::size_t n = 0; n < N; ++n) {
        const cplx* plane = data.data() + n * P;
        for (std::size_t r = 0; r < P; ++r) {
            const std::size_t at = (r / kBlock) * tile + n * kBlock + r % kBlock;
            yr[at] = static_cast<float>(plane[r].real() * scale);
            yi[at] = static_cast<float>(plane[r].imag() * scale);
        }
    }

    AoaSpectrum spec;
    spec.phi_grid.assign(phi_grid.begin(), phi_grid.end());
    spec.power.assign(M, 0.0);

    const KernelFn kernel = fixed_kernel(N);
    const Kernel4Fn kernel4 = fixed_kernel4(N);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        const float* br = yr.data() + b * tile;
        const float* bi = yi.data() + b * tile;
        std::size_t m = 0;
        if (kernel4) {
            float quad[4];
            for (; m + 4 <= M; m += 4) {
                kernel4(br, bi, kBlock, kBlock, wr.data() + m * N, wi.data() + m * N, quad);
                for (std::size_t k = 0; k < 4; ++k) spec.power[m + k] += quad[k];
            }
        }
        for (; m < M; ++m) {
            const float* w_r = wr.data() + m * N;
            const float* w_i = wi.data() + m * N;
            spec.power[m] += kernel ? kernel(br, bi, kBlock, kBlock, w_r, w_i)
                                    : beam_magnitude_sum_any(br, bi, kBlock, kBlock, N, w_r, w_i);
        }
    }
    for (double& v : spec.power) v *= peak > 0.0 ? peak : 1.0;
    return spec;
}

std::vector<std::size_t> find_peak_indices_1d(std::span<const double> power, double threshold_factor) {
    std::vector<std::size_t> out;
    if (power.size() < 3) return out;
    const double thr = threshold_factor * median_of(power);
    for (std::size_t i = 1; i + 1 < power.size(); ++i)
        if (power[i] > power[i - 1] && power[i] > power[i + 1] && power[i] > thr) out.push_back(i);
    return out;
}

std::vector<double> find_peaks_1d(const AoaSpectrum& spec, double threshold_factor) {
    if (!(threshold_factor > 1.0)) throw ConfigError("find_peaks_1d: threshold_factor must be > 1");
    const auto idx = find_peak_indices_1d(spec.power, threshold_factor);
    if (idx.empty()) throw NoPeaks("no AoA peak above threshold");
    std::vector<double> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(spec.phi_grid[i]);
    return out;
}

std::vector<cplx> range_doppler_dft(std::span<const cplx> h, std::size_t Ns, std::size_t Nc) {
    if (h.size() != Ns * Nc) throw ConfigError("range_doppler_dft: size mismatch");
    detail::Dft2d dft(Ns, Nc);
    auto in = dft.input();
    // (-1)^ns centres the Doppler axis; reversing nc turns the forward
    // transform into the +j kernel along the delay axis.
    for (std::size_t ns = 0; ns < Ns; ++ns) {
        const double sign = (ns % 2 == 0) ? 1.0 : -1.0;
        const cplx* src = h.data() + ns * Nc;
        cplx* dst = in.data() + ns * Nc;
        dst[0] = sign * src[0];
        for (std::size_t m = 1; m < Nc; ++m) dst[m] = sign * src[Nc - m];
    }
    dft.execute();
    const double scale = 1.0 / static_cast<double>(Ns * Nc);
    const auto out = dft.output();
    std::vector<cplx> G(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) G[i] = out[i] * scale;
    return G;
}

std::vector<cplx> beamform(const SymbolGrid& rx, const ArrayConfig& array, double phi) {
    check_array(rx, array);
    const auto a = steering_vector(array, phi, rx.cfg().fc);
    std::vector<cplx> g(rx.plane_size());
    for (std::size_t n = 0; n < rx.N(); ++n) {
        const cplx w = std::conj(a[n]);
        const auto y = rx.plane(n);
        for (std::size_t r = 0; r < g.size(); ++r) g[r] += w * y[r];
    }
    return g;
}

RangeDopplerMap range_doppler_maps(const SymbolGrid& rx, const SymbolGrid& tx, double phi_hat,
                                   const ArrayConfig& array, bool keep_streams) {
    if (!rx.same_shape(tx)) throw ConfigError("range_doppler_maps: rx and tx grids differ in shape");
    const OfdmConfig& cfg = rx.cfg();
    const std::size_t Ns = cfg.Ns, Nc = cfg.Nc, N = cfg.N, P = Ns * Nc;

    const std::vector<cplx> g = beamform(rx, array, phi_hat);

    RangeDopplerMap map;
    map.Ns = Ns;
    map.Nc = Nc;
    map.values.assign(P, 0.0);
    map.doppler_axis.resize(Ns);
    map.range_axis.resize(Nc);
    for (std::size_t p = 0; p < Ns; ++p)
        map.doppler_axis[p] =
            (static_cast<double>(p) - static_cast<double>(Ns) / 2.0) / (static_cast<double>(Ns) * cfg.Ts);
    for (std::size_t q0 = 0; q0 < Nc; ++q0) map.range_axis[q0] = static_cast<double>(q0) * cfg.range_bin();

    detail::Dft2d dft(Ns, Nc);
    const double scale = 1.0 / static_cast<double>(P);
    const double inv_streams = 1.0 / static_cast<double>(N);
    if (keep_streams) map.stream_values.assign(N, std::vector<double>(P));
    std::vector<double> acc(P, 0.0);

    for (std::size_t i = 0; i < N; ++i) {
        const auto x = tx.plane(i);
        auto in = dft.input();
        for (std::size_t ns = 0; ns < Ns; ++ns) {
            const double sign = (ns % 2 == 0) ? scale : -scale;
            const std::size_t row = ns * Nc;
            in[row] = sign * (g[row] / x[row]);
            for (std::size_t m = 1; m < Nc; ++m) in[row + m] = sign * (g[row + Nc - m] / x[row + Nc - m]);
        }
        // Accumulate in the transform's (Nc x Ns) order; one transpose at the end.
        const auto Gt = dft.execute_transposed();
        for (std::size_t r = 0; r < P; ++r) acc[r] += std::sqrt(std::norm(Gt[r])) * inv_streams;
        if (keep_streams)
            for (std::size_t q0 = 0; q0 < Nc; ++q0)
                for (std::size_t p = 0; p < Ns; ++p) map.stream_values[i][p * Nc + q0] = std::abs(Gt[q0 * Ns + p]);
    }
    for (std::size_t q0 = 0; q0 < Nc; ++q0)
        for (std::size_t p = 0; p < Ns; ++p) map.values[p * Nc + q0] = acc[q0 * Ns + p];
    return map;
}

std::vector<MapPeak> find_peaks_2d(const RangeDopplerMap& map, double threshold, double floor) {
    const std::size_t Ns = map.Ns, Nc = map.Nc;
    std::vector<MapPeak> out;
    if (map.values.empty()) return out;
    const double vmax = *std::max_element(map.values.begin(), map.values.end());
    const double thr = std::max(threshold * median_of(map.values), floor * vmax);

    for (std::size_t p = 0; p < Ns; ++p) {
        for (std::size_t q0 = 0; q0 < Nc; ++q0) {
            const double v = map.values[p * Nc + q0];
            if (!(v > thr)) continue;
            bool is_max = true;
            for (int dp = -1; dp <= 1 && is_max; ++dp) {
                for (int dq = -1; dq <= 1; ++dq) {
                    if (dp == 0 && dq == 0) continue;
                    const std::size_t pp = wrap_index(static_cast<std::ptrdiff_t>(p) + dp, Ns);
                    const std::size_t qq = wrap_index(static_cast<std::ptrdiff_t>(q0) + dq, Nc);
                    if (pp == p && qq == q0) continue;
                    if (!(v > map.values[pp * Nc + qq])) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) out.push_back({static_cast<double>(p), static_cast<double>(q0), v});
        }
    }
    return out;
}

RangeAndRate peak_to_params(double p_hat, double q_hat, const OfdmConfig& cfg) {
    const double Ns = static_cast<double>(cfg.Ns);
    const double Nc = static_cast<double>(cfg.Nc);
    const double f_doppler = (p_hat - Ns / 2.0) / (Ns * cfg.Ts);
    RangeAndRate out;
    out.range_rate = 0.0 - kSpeedOfLight * f_doppler / cfg.fc;   // no -0 for a zero Doppler bin
    out.bistatic_range = (q_hat - 1.0) * kSpeedOfLight / (Nc * cfg.f_delta);
    return out;
}

std::vector<Detection> detect(const SymbolGrid& rx, const SymbolGrid& tx, const ArrayConfig& array,
                              const DetectorParams& params, std::size_t rx_index) {
    params.validate();
    if (!rx.same_shape(tx)) throw ConfigError("detect: rx and tx grids differ in shape");
    check_array(rx, array);
    const OfdmConfig& cfg = rx.cfg();

    const auto grid = sector_grid(array.boresight, params.sector_half_width, params.aoa_step);
    const AoaSpectrum spec = aoa_spectrum(rx, array, grid);
    const auto aoa_peaks = find_peak_indices_1d(spec.power, params.aoa_threshold);

    const bool per_stream = params.aggregation == PeakAggregation::IndexAverage;
    std::vector<Detection> out;
    for (const std::size_t ai : aoa_peaks) {
        const double phi = spec.phi_grid[ai];
        const RangeDopplerMap map = range_doppler_maps(rx, tx, phi, array, per_stream);
        for (const MapPeak& pk : find_peaks_2d(map, params.rd_threshold, params.rd_floor)) {
            const auto p = static_cast<std::size_t>(pk.p);
            const auto q0 = static_cast<std::size_t>(pk.q0);
            double p_hat = pk.p, q0_hat = pk.q0;

            if (per_stream) {
                // Each stream's own maximum in the 3x3 neighbourhood of the
                // averaged peak, then the mean of those indices.
                double sum_p = 0.0, sum_q = 0.0;
                for (const auto& sv : map.stream_values) {
                    int best_dp = 0, best_dq = 0;
                    double best = -1.0;
                    for (int dp = -1; dp <= 1; ++dp)
                        for (int dq = -1; dq <= 1; ++dq) {
                            const std::size_t pp = wrap_index(static_cast<std::ptrdiff_t>(p) + dp, map.Ns);
                            const std::size_t qq = wrap_index(static_cast<std::ptrdiff_t>(q0) + dq, map.Nc);
                            if (sv[pp * map.Nc + qq] > best) {
                                best = sv[pp * map.Nc + qq];
                                best_dp = dp;
                                best_dq = dq;
                            }
                        }
                    double sp = pk.p + best_dp, sq = pk.q0 + best_dq;
                    if (params.interpolate) {
                        const std::size_t bp = wrap_index(static_cast<std::ptrdiff_t>(p) + best_dp, map.Ns);
                        const std::size_t bq = wrap_index(static_cast<std::ptrdiff_t>(q0) + best_dq, map.Nc);
                        const auto [rp, rq] = refine_peak(sv, map.Ns, map.Nc, bp, bq);
                        sp += rp - static_cast<double>(bp);
                        sq += rq - static_cast<double>(bq);
                    }
                    sum_p += sp;
                    sum_q += sq;
                }
                p_hat = sum_p / static_cast<double>(map.stream_values.size());
                q0_hat = sum_q / static_cast<double>(map.stream_values.size());
            } else if (params.interpolate) {
                std::tie(p_hat, q0_hat) = refine_peak(map.values, map.Ns, map.Nc, p, q0);
            }

            const RangeAndRate rr = peak_to_params(p_hat, q0_hat + 1.0, cfg);
            Detection d;
            d.aoa = phi;
            d.bistatic_range = rr.bistatic_range;
            d.range_rate = rr.range_rate;
            d.peak_power = pk.value;
            d.rx_index = rx_index;
            d.p_index = p_hat;
            d.q_index = q0_hat + 1.0;
            out.push_back(d);
        }
    }
    return out;
}

}  // namespace msisac
