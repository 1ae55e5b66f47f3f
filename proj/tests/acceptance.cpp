#include "freqdec/alc.hpp"
#include "freqdec/dtcwt.hpp"
#include "freqdec/dwt.hpp"
#include "freqdec/fdca.hpp"
#include "freqdec/fdd.hpp"
#include "freqdec/io.hpp"
#include "freqdec/loss.hpp"
#include "freqdec/metrics.hpp"
#include "freqdec/nsct.hpp"
#include "metric_oracles.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace freqdec;
using testutil::Gen;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

template <typename... A>
std::string cat(const A&... a) {
    std::ostringstream s;
    s.precision(4);
    (s << ... << a);
    return s.str();
}

const std::vector<NsctConfig> kTableConfigs{{1, 2}, {1, 4}, {2, 2}, {2, 4}};

Plane shell_slice(std::uint64_t seed) {
    return make_phantom({PhantomKind::textured_shell, 0.0, 1}, {16, 32, 32}, seed).volume(0).slice(8);
}

Outcome perfect_reconstruction() {
    const auto t0 = std::chrono::steady_clock::now();
    Gen g(101);
    double dwt = 0, ct = 0, ns = 0;
    for (int t = 0; t < 50; ++t) {
        const Plane x = testutil::random_plane(32, 32, g);
        dwt = std::max(dwt, max_abs_diff(idwt2_level1(dwt2_level1(x)), x));
        ct = std::max(ct, max_abs_diff(idtcwt_level1(dtcwt_level1(x)), x));
        for (const auto& cfg : kTableConfigs) ns = std::max(ns, max_abs_diff(nsct_reconstruct(nsct_decompose(x, cfg), cfg), x));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = dwt < 1e-8 && ct < 1e-8 && ns < 1e-8 && secs < 60.0;
    return {ok, cat("max residual dwt ", dwt, ", dtcwt ", ct, ", nsct ", ns, " (limit 1e-08); ", secs, " s (limit 60)")};
}

Outcome size_contract() {
    const std::vector<NsctConfig> configs{{1, 2}, {1, 4}, {2, 2}, {2, 4}, {1, 8}, {3, 4}, {2, 8}};
    const std::vector<std::pair<std::size_t, std::size_t>> sizes{{32, 32}, {24, 40}, {16, 48}, {64, 16}};
    Gen g(102);
    std::size_t planes = 0, bad = 0;
    for (const auto& cfg : configs)
        for (auto [r, c] : sizes) {
            const Plane x = testutil::random_plane(r, c, g);
            const auto dec = nsct_decompose(x, cfg);
            bad += dec.lowpass.rows != r || dec.lowpass.cols != c;
            ++planes;
            if (dec.bands.size() != cfg.levels) ++bad;
            for (const auto& level : dec.bands) {
                if (level.size() != cfg.directions) ++bad;
                for (const auto& b : level) {
                    bad += b.rows != r || b.cols != c;
                    ++planes;
                }
            }
        }
    return {bad == 0, cat(planes, " planes over ", configs.size(), " configs and ", sizes.size(), " sizes, ", bad, " mismatched")};
}

Outcome shift_invariance() {
    const PlaneMap lf = [](const Plane& p) { return dtcwt_level1(p).lf.magnitude(); };
    const PlaneMap ll = [](const Plane& p) { return dwt2_level1(p).ll; };
    std::vector<double> margins;
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const Plane x = shell_slice(seed);
        const double m = shift_invariance_score(x, 4, lf) - shift_invariance_score(x, 4, ll);
        wins += m > 0;
        margins.push_back(m);
    }
    std::sort(margins.begin(), margins.end());
    const double median = 0.5 * (margins[4] + margins[5]);
    return {wins >= 9 && median >= 0.05, cat("S(dtcwt LF) > S(dwt LL) on ", wins, "/10 phantoms, median margin ", median, " (need 9/10, 0.05)")};
}

Outcome entropy_ordering() {
    int ok = 0;
    double el = 0, eo = 0, ef = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto mm = make_phantom({PhantomKind::textured_shell, 0.0, 1}, {16, 32, 32}, seed);
        const auto out = fdd_decompose(mm, {});
        const double l = freq_entropy(out.x_l.channel(0)), o = freq_entropy(mm.volume(0)), f = freq_entropy(fdd_fuse(out).channel(0));
        ok += l < o && o < f;
        el += l / 10, eo += o / 10, ef += f / 10;
    }
    return {ok >= 9, cat("E(LF) < E(original) < E(fused) on ", ok, "/10 phantoms (need 9); mean E ", el, " < ", eo, " < ", ef)};
}

// Energy outside the central half-Nyquist square of the level-1 pyramid
// band, recomputed with a direct convolution and a direct DFT.
double aliasing_oracle(const Plane& x) {
    const std::vector<double> h{-1.0 / 32, 0.0, 9.0 / 32, 16.0 / 32, 9.0 / 32, 0.0, -1.0 / 32};
    std::vector<double> k(49);
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = 0; j < 7; ++j) k[i * 7 + j] = h[i] * h[j];
    const Plane band = x - testutil::loop_conv(x, k, 7, 7, 3, 3, testutil::Ext::periodic);
    const long R = static_cast<long>(x.rows), C = static_cast<long>(x.cols);
    const auto G = testutil::slow_dft_real(band.data, {x.rows, x.cols});
    double outside = 0;
    for (long u = 0; u < R; ++u)
        for (long v = 0; v < C; ++v) {
            const long cu = u < R / 2 ? u : u - R, cv = v < C / 2 ? v : v - C;
            if (!(cu >= -R / 4 && cu < R / 4 && cv >= -C / 4 && cv < C / 4)) outside += std::norm(G[static_cast<std::size_t>(u * C + v)]);
        }
    return outside / (4.0 * static_cast<double>(R * C));
}

Outcome aliasing_witness() {
    const Plane checker = make_phantom({PhantomKind::checker, 0.0, 1}, {16, 32, 32}, 42).volume(0).slice(8);
    const auto r = aliasing_energy(checker);
    const double oracle = aliasing_oracle(checker);
    const bool agree = std::abs(r.aliased - oracle) <= 1e-9 * std::max(1.0, oracle);
    const bool ok = r.aliased > 10.0 * r.nonsubsampled && r.aliased > 0.0 && agree;
    return {ok, cat("checker aliased energy ", r.aliased, " (direct DFT ", oracle, ") vs nonsubsampled ", r.nonsubsampled, "; band energy ", r.band_energy)};
}

std::size_t nearest_wedge(double theta, const std::vector<double>& centers) {
    std::size_t best = 0;
    double best_d = 1e9;
    for (std::size_t i = 0; i < centers.size(); ++i) {
        double d = std::fmod(std::abs(theta - centers[i]), 180.0);
        d = std::min(d, 180.0 - d);
        if (d < best_d) best_d = d, best = i;
    }
    return best;
}

Outcome directional_selectivity() {
    const auto centers = nsdfb_wedge_centers(4);
    int hits = 0;
    std::ostringstream fr;
    fr.precision(3);
    for (double theta : {0.0, 45.0, 90.0, 135.0}) {
        const Plane x = make_phantom({PhantomKind::oriented_stripes, theta, 1}, {1, 64, 64}, 42).volume(0).slice(0);
        const auto dec = nsct_decompose(x, {1, 4});
        double total = 0;
        for (const auto& b : dec.bands[0]) total += energy(b);
        const double f = energy(dec.bands[0][nearest_wedge(theta, centers)]) / total;
        hits += f >= 0.6;
        fr << " " << theta << ":" << f;
    }
    return {hits == 4, cat("matching-wedge energy fraction", fr.str(), " (need >= 0.6 at 4/4 angles)")};
}

// max |P(w) - mean| / mean with P(w) = |H0|^2 + |H1|^2 from the filters'
// autocorrelations.
double flatness_oracle(const std::vector<double>& a, const std::vector<double>& b) {
    auto autocorr = [](const std::vector<double>& h) {
        std::vector<double> r(h.size(), 0.0);
        for (std::size_t k = 0; k < h.size(); ++k)
            for (std::size_t i = 0; i + k < h.size(); ++i) r[k] += h[i] * h[i + k];
        return r;
    };
    const auto ra = autocorr(a), rb = autocorr(b);
    std::vector<double> p(512);
    double mean = 0;
    for (std::size_t k = 0; k < 512; ++k) {
        const double w = -std::numbers::pi + 2 * std::numbers::pi * static_cast<double>(k) / 512;
        double v = ra[0] + rb[0];
        for (std::size_t j = 1; j < ra.size(); ++j) v += 2 * ra[j] * std::cos(static_cast<double>(j) * w);
        for (std::size_t j = 1; j < rb.size(); ++j) v += 2 * rb[j] * std::cos(static_cast<double>(j) * w);
        p[k] = v;
        mean += v / 512;
    }
    double dev = 0;
    for (double v : p) dev = std::max(dev, std::abs(v - mean));
    return dev / mean;
}

Outcome energy_flatness_criterion() {
    const auto nsb = FilterBank1D::near_sym_b(), haar = FilterBank1D::haar();
    const double d_nsb = energy_flatness(nsb), d_haar = energy_flatness(haar);
    const double o_nsb = flatness_oracle(nsb.analysis_lo.taps, nsb.analysis_hi.taps);
    const double o_haar = flatness_oracle(haar.analysis_lo.taps, haar.analysis_hi.taps);
    const bool agree = std::abs(d_nsb - o_nsb) < 1e-12 && std::abs(d_haar - o_haar) < 1e-12;
    const bool ok = d_nsb < 0.05 && d_haar > 0.2 && agree;
    return {ok, cat("deviation near_sym_b ", d_nsb, " (need < 0.05), Haar ", d_haar, " (need > 0.2); direct autocorrelation ", o_nsb, ", ", o_haar)};
}

Tensor4 demo_input() {
    return Tensor4::from_modalities(make_phantom({PhantomKind::textured_shell, 0.0, 2}, {8, 16, 16}, 42));
}

Outcome fisher_ewc() {
    Gen g(103);
    double fisher_err = 0;
    std::size_t mask_bad = 0;
    for (int t = 0; t < 100; ++t) {
        auto s = init_alc(g.index(1, 3), g.index(1, 3));
        const std::size_t N = g.index(1, 20), P = s.theta.size();
        std::vector<double> sum(P, 0.0);
        for (std::size_t i = 0; i < N; ++i) {
            auto v = testutil::random_vec(P, g);
            for (double& x : v) x *= std::exp(g.normal());
            for (std::size_t p = 0; p < P; ++p) sum[p] += v[p] * v[p];
            accumulate_fisher(s, v);
        }
        for (std::size_t p = 0; p < P; ++p) fisher_err = std::max(fisher_err, std::abs(s.fisher[p] - sum[p] / static_cast<double>(N)));
        const double k = g.uniform(-1.0, 3.0);
        const auto f = s.fisher;
        compute_mask(s, k);
        double mu = 0, ss = 0;
        for (double x : f) mu += x;
        mu /= static_cast<double>(P);
        for (double x : f) ss += (x - mu) * (x - mu);
        const double thr = mu + k * std::sqrt(ss / static_cast<double>(P));
        for (std::size_t p = 0; p < P; ++p) mask_bad += s.mask[p] != (f[p] > thr ? 1 : 0);
    }

    AlcDemoConfig cfg;
    cfg.warmup = 20;
    cfg.steps = 220;
    std::vector<double> at_mask;
    std::size_t checks = 0, breaks = 0, post = 0;
    cfg.on_step = [&](std::size_t step, const AlcState& s) {
        if (step < cfg.warmup) return;
        if (at_mask.empty()) {
            at_mask = s.theta;
            return;
        }
        ++post;
        for (std::size_t p = 0; p < s.theta.size(); ++p)
            if (s.mask[p]) {
                ++checks;
                breaks += std::memcmp(&s.theta[p], &at_mask[p], sizeof(double)) != 0;
            }
    };
    const auto x = demo_input();
    const auto res = alc_demo_train(x, cfg);
    std::size_t frozen = 0;
    for (auto m : res.state.mask) frozen += m;

    std::vector<double> dists;
    for (double l2 : {5e-6, 5e-3, 5.0}) {
        AlcDemoConfig c;
        c.lambda2 = l2;
        dists.push_back(std::sqrt(ewc_loss(alc_demo_train(x, c).state)));
    }
    const bool mono = dists[1] <= dists[0] && dists[2] <= dists[1];
    const bool ok = fisher_err < 1e-12 && mask_bad == 0 && frozen > 0 && post >= 199 && checks > 0 && breaks == 0 && mono;
    return {ok, cat("fisher max error ", fisher_err, ", mask mismatches ", mask_bad, ", ", frozen, " frozen weights unchanged across ", post + 1,
                    " post-mask steps (", breaks, " changes), |theta - D| ", dists[0], " >= ", dists[1], " >= ", dists[2])};
}

// Component-wise relative error with a 1e-8 floor on the denominator.
double grad_rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-8}); }

Outcome gradient_checks() {
    Gen g(104);
    double alc_worst = 0;
    for (double l2 : {0.0, 5e-6, 0.5}) {
        Tensor4 x(2, 4, 4, 4), t(2, 4, 4, 4);
        for (double& v : x.data) v = g.normal();
        for (double& v : t.data) v = g.normal();
        auto s = init_alc(2, 2);
        for (double& v : s.theta) v += 0.3 * g.normal();
        const auto lg = alc_loss_and_grad(x, t, s, l2);
        for (std::size_t p = 0; p < s.theta.size(); ++p) {
            const double h = 1e-4, th = s.theta[p];
            s.theta[p] = th + h;
            const double up = alc_loss_and_grad(x, t, s, l2).loss;
            s.theta[p] = th - h;
            const double dn = alc_loss_and_grad(x, t, s, l2).loss;
            s.theta[p] = th;
            alc_worst = std::max(alc_worst, grad_rel((up - dn) / (2 * h), lg.grad[p]));
        }
    }
    double dfl_worst = 0;
    for (double alpha : {0.0, 1.0, 2.0}) {
        std::vector<double> a(2 * 64), b(2 * 64);
        for (double& v : a) v = g.normal();
        for (double& v : b) v = g.normal();
        Prediction pa(2, {4, 4, 4}, a, false);
        const Prediction pb(2, {4, 4, 4}, b, false);
        const auto grad = dfl_grad(pa, pb, alpha);
        for (std::size_t p = 0; p < a.size(); ++p) {
            const double h = 1e-5, v = pa.prob[p];
            pa.prob[p] = v + h;
            const double up = dfl(pa, pb, alpha);
            pa.prob[p] = v - h;
            const double dn = dfl(pa, pb, alpha);
            pa.prob[p] = v;
            dfl_worst = std::max(dfl_worst, grad_rel((up - dn) / (2 * h), grad[p]));
        }
    }
    return {alc_worst < 1e-4 && dfl_worst < 1e-4, cat("max relative error ALC ", alc_worst, ", DFL (alpha 0,1,2) ", dfl_worst, " (limit 1e-04)")};
}

Prediction random_probs(std::size_t C, Dims d, Gen& g) {
    const std::size_t n = d.count();
    std::vector<double> p(C * n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0;
        for (std::size_t c = 0; c < C; ++c) s += p[c * n + i] = std::exp(g.normal());
        for (std::size_t c = 0; c < C; ++c) p[c * n + i] /= s;
    }
    return Prediction(C, d, std::move(p));
}

Outcome dfl_properties() {
    Gen g(105);
    double self = 0, asym = 0, scale = 0, parseval = 0;
    for (int t = 0; t < 10; ++t)
        for (double alpha : {0.0, 1.0, 2.0}) {
            const auto a = random_probs(3, {4, 4, 4}, g), b = random_probs(3, {4, 4, 4}, g);
            self = std::max(self, std::abs(dfl(a, a, alpha)));
            asym = std::max(asym, testutil::rel_err(dfl(a, b, alpha), dfl(b, a, alpha)));
            Prediction d = b;
            for (std::size_t i = 0; i < d.prob.size(); ++i) d.prob[i] = b.prob[i] - a.prob[i];
            const double base = dfl(a, b, alpha);
            for (double s : {0.5, 2.0, 3.0}) {
                Prediction y = a;
                for (std::size_t i = 0; i < y.prob.size(); ++i) y.prob[i] += s * d.prob[i];
                const Prediction yy(3, a.dims, y.prob, false);
                scale = std::max(scale, std::abs(dfl(a, yy, alpha) / base / std::pow(s, alpha + 2) - 1.0));
            }
        }
    for (int t = 0; t < 5; ++t) {
        const auto a = random_probs(2, {8, 8, 8}, g), b = random_probs(2, {8, 8, 8}, g);
        double mse = 0;
        for (std::size_t i = 0; i < a.prob.size(); ++i) mse += (a.prob[i] - b.prob[i]) * (a.prob[i] - b.prob[i]);
        mse /= static_cast<double>(a.prob.size());
        parseval = std::max(parseval, testutil::rel_err(dfl(a, b, 0.0), 512.0 * mse));
    }
    const bool ok = self == 0.0 && asym < 1e-12 && scale < 1e-6 && parseval < 1e-10;
    return {ok, cat("DFL(x,x) max ", self, ", asymmetry ", asym, ", scaling error ", scale, " (limit 1e-06), Parseval error ", parseval)};
}

FeatureMap random_map(std::size_t c, std::size_t n, std::size_t h, std::size_t w, Gen& g, double scale) {
    FeatureMap f(c, n, h, w);
    for (double& v : f.data) v = scale * g.normal();
    return f;
}

Outcome fdca_contracts() {
    Gen g(106);
    bool ranges = true;
    for (double scale : {1e-6, 1.0, 1e3, 1e8, 1e300}) {
        auto p = make_fdca_params(2, 3, 13);
        for (double& w : p.w1.w) w *= 1e4;
        for (double& w : p.wmu.w) w *= 1e4;
        const auto f = random_map(2, 3, 8, 8, g, scale);
        const auto m = attention_maps({f, f}, p);
        auto in = [](double v) { return v > 0.0 && v < 1.0; };
        ranges = ranges && std::all_of(m.ms.begin(), m.ms.end(), in) && std::all_of(m.mp.data.begin(), m.mp.data.end(), in) &&
                 std::all_of(m.mn.begin(), m.mn.end(), in);
    }

    std::size_t broadcast_bad = 0;
    {
        const auto z = fft_split(random_map(2, 3, 7, 8, g, 1.0));
        const std::size_t HW = 56;
        AttentionMaps ones{std::vector<double>(2, 1.0), Plane(7, 8, 1.0), std::vector<double>(3, 1.0)};
        AttentionMaps ms = ones, mp = ones, mn = ones;
        ms.ms = {0.3, 0.8};
        for (double& v : mp.mp.data) v = g.uniform(0.1, 0.9);
        mn.mn = {0.2, 0.5, 0.9};
        const auto ys = modulate(z, ms), yp = modulate(z, mp), yn = modulate(z, mn);
        for (std::size_t ch = 0; ch < 2; ++ch)
            for (std::size_t s = 0; s < 3; ++s)
                for (std::size_t i = 0; i < HW; ++i) {
                    const std::size_t k = (ch * 3 + s) * HW + i;
                    broadcast_bad += ys.re.data[k] != z.re.data[k] * ms.ms[ch] || ys.im.data[k] != z.im.data[k] * ms.ms[ch];
                    broadcast_bad += yp.re.data[k] != z.re.data[k] * mp.mp.data[i] || yp.im.data[k] != z.im.data[k] * mp.mp.data[i];
                    broadcast_bad += yn.re.data[k] != z.re.data[k] * mn.mn[s] || yn.im.data[k] != z.im.data[k] * mn.mn[s];
                }
    }

    std::size_t perturb_bad = 0;
    {
        const auto p = make_fdca_params(3, 4, 14);
        for (int t = 0; t < 10; ++t) {
            auto z = fft_split(random_map(3, 4, 8, 8, g, 1.0));
            const auto noise = draw_noise(p.rank, 4, 77);
            const auto a = attention_maps(z, p, noise);
            for (double& v : z.im.data) v += 10.0 * g.normal();
            const auto b = attention_maps(z, p, noise);
            perturb_bad += a.ms != b.ms || a.mp.data != b.mp.data || a.mn != b.mn;
        }
    }

    double roundtrip = 0;
    for (int t = 0; t < 10; ++t) {
        const auto f = random_map(g.index(1, 4), g.index(1, 6), g.index(4, 16), g.index(4, 16), g, 1.0);
        const auto back = ifft_merge(fft_split(f));
        for (std::size_t i = 0; i < f.data.size(); ++i) roundtrip = std::max(roundtrip, std::abs(back.data[i] - f.data[i]));
    }

    double cov_err = 0;
    {
        auto p = make_fdca_params(2, 4, 12);
        for (double& w : p.wr.w) w *= 25.0;
        const auto f = random_map(2, 4, 8, 8, g, 8.0);
        const auto dist = slice_distribution(f, p);
        const auto cov = dist.covariance();
        const std::size_t N = 20000;
        std::vector<std::vector<double>> samples;
        std::vector<double> mean(4, 0.0);
        for (std::size_t i = 0; i < N; ++i) {
            samples.push_back(sample_logits(dist, draw_noise(dist.rank, 4, 1000 + i)));
            for (std::size_t a = 0; a < 4; ++a) mean[a] += samples.back()[a] / N;
        }
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b) {
                double c = 0;
                for (const auto& v : samples) c += (v[a] - mean[a]) * (v[b] - mean[b]);
                cov_err = std::max(cov_err, std::abs(c / (N - 1) - cov[a * 4 + b]));
            }
    }
    const bool ok = ranges && broadcast_bad == 0 && perturb_bad == 0 && roundtrip < 1e-9 && cov_err < 0.05;
    return {ok, cat("ranges open ", ranges ? "yes" : "no", ", broadcast mismatches ", broadcast_bad, ", imaginary-perturbation changes ", perturb_bad,
                    ", FFT round trip ", roundtrip, " (limit 1e-09), covariance error ", cov_err, " (limit 0.05)")};
}

Outcome metrics_oracles() {
    Gen g(107);
    double e_ssim = 0, e_ent = 0, e_dice = 0, e_hd = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t r = g.index(8, 20), c = g.index(8, 20);
        const Plane a = testutil::random_plane(r, c, g);
        Plane b = testutil::random_plane(r, c, g);
        for (std::size_t i = 0; i < b.data.size(); ++i) b.data[i] = 0.6 * a.data[i] + 0.4 * b.data[i];
        e_ssim = std::max(e_ssim, std::abs(ssim(a, b) - testutil::ssim_oracle(a, b)));

        const std::vector<std::size_t> shape{g.index(1, 5), g.index(2, 6), g.index(2, 6)};
        const auto v = testutil::random_vec(shape[0] * shape[1] * shape[2], g);
        e_ent = std::max(e_ent, std::abs(freq_entropy(v, shape) - testutil::entropy_oracle(v, shape)));

        const Dims d{g.index(2, 7), g.index(2, 7), g.index(2, 7)};
        const auto ma = testutil::random_mask(d, g), mb = testutil::random_mask(d, g);
        e_dice = std::max(e_dice, std::abs(dice_score(ma, mb, 1) - testutil::dice_oracle(ma, mb, 1)));
        const Spacing sp{g.uniform(0.5, 3.0), g.uniform(0.5, 3.0), g.uniform(0.5, 3.0)};
        e_hd = std::max(e_hd, std::abs(hd95(ma, mb, 1, sp) - testutil::hd95_oracle(ma, mb, 1, sp)));
    }
    const bool ok = e_ssim < 1e-10 && e_ent < 1e-10 && e_dice < 1e-12 && e_hd < 1e-9;
    return {ok, cat("100 cases: max error SSIM ", e_ssim, " (1e-10), E ", e_ent, " (1e-10), Dice ", e_dice, " (1e-12), HD95 ", e_hd, " (1e-09)")};
}

Outcome total_loss_criterion() {
    const double v = total_loss({0.2, 0.3, 0.1, 0.4}, 0.5, 1.0, LossWeights{}, 40);
    const double zero = total_loss({0, 0, 0, 0}, 0, 0, LossWeights{}, 40);
    std::ostringstream s;
    s.precision(17);
    s << "total_loss = " << v << " (expect 8.500005), all-zero terms " << zero;
    return {v == 8.500005 && zero == 0.0, s.str()};
}

struct Criterion {
    const char* id;
    std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria{
    {"perfect-reconstruction", perfect_reconstruction},
    {"size-contract", size_contract},
    {"shift-invariance", shift_invariance},
    {"entropy-ordering", entropy_ordering},
    {"aliasing-witness", aliasing_witness},
    {"directional-selectivity", directional_selectivity},
    {"energy-flatness", energy_flatness_criterion},
    {"fisher-ewc", fisher_ewc},
    {"gradient-checks", gradient_checks},
    {"dfl-properties", dfl_properties},
    {"fdca-contracts", fdca_contracts},
    {"metrics-oracles", metrics_oracles},
    {"total-loss", total_loss_criterion},
};

}  // namespace

int main(int argc, char** argv) {
    std::string only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) {
            only = argv[++i];
        } else if (a == "--list") {
            for (const auto& c : kCriteria) std::cout << c.id << "\n";
            return 0;
        } else {
            std::cerr << "usage: acceptance [--only ID] [--list]\n";
            return 2;
        }
    }
    int failed = 0, ran = 0;
    for (const auto& c : kCriteria) {
        if (!only.empty() && only != c.id) continue;
        ++ran;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << ": " << o.detail << std::endl;
    }
    if (ran == 0) {
        std::cerr << "unknown criterion: " << only << "\n";
        return 2;
    }
    return failed == 0 ? 0 : 1;
}
