#include "freqdec/alc.hpp"
#include "freqdec/dtcwt.hpp"
#include "freqdec/dwt.hpp"
#include "freqdec/error.hpp"
#include "freqdec/fdca.hpp"
#include "freqdec/fdd.hpp"
#include "freqdec/io.hpp"
#include "freqdec/loss.hpp"
#include "freqdec/metrics.hpp"
#include "freqdec/nsct.hpp"
#include "freqdec/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace freqdec;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    bool json = false;
    std::uint64_t seed = 42;
    std::size_t threads = default_threads();
};

json report(const std::string& command) { return json{{"schema_version", "1"}, {"command", command}}; }

void emit(const Globals& g, const json& j, const std::string& text) {
    if (g.json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

Dims parse_dims(const std::string& s) {
    std::vector<std::size_t> v;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            const long n = std::stol(part, &used);
            if (used != part.size() || n <= 0) throw UsageError("");
            v.push_back(static_cast<std::size_t>(n));
        } catch (const std::exception&) {
            throw UsageError("--dims expects D,H,W positive integers, got '" + s + "'");
        }
    }
    if (v.size() != 3) throw UsageError("--dims expects D,H,W, got '" + s + "'");
    return {v[0], v[1], v[2]};
}

template <typename T, typename Fn>
T as_usage(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
}

NsctConfig nsct_config(std::size_t levels, std::size_t dirs) {
    NsctConfig c{levels, dirs};
    as_usage<int>([&] {
        c.validate();
        return 0;
    });
    return c;
}

MultiModalVolume load_modalities(const std::string& path) { return to_modalities(read_volume(path)); }

std::string fmt(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

LabelVolume load_labels(const std::string& path, int classes) {
    const auto cv = read_volume(path);
    if (cv.channels() != 1) throw ShapeError("label file must have exactly one channel: " + path);
    int n = classes;
    if (n <= 0) {
        float mx = 0.0f;
        for (float v : cv.channel(0).data()) mx = std::max(mx, v);
        n = static_cast<int>(std::round(mx)) + 1;
    }
    return to_labels(cv.channel(0), n);
}

// ---- subcommands ----------------------------------------------------------

struct PhantomArgs {
    std::string kind = "textured-shell";
    std::string dims = "8,32,32";
    std::size_t modalities = 4;
    std::string out;
};

int run_phantom(const Globals& g, const PhantomArgs& a) {
    auto spec = as_usage<PhantomSpec>([&] { return parse_phantom_kind(a.kind); });
    spec.modalities = a.modalities;
    const Dims dims = parse_dims(a.dims);
    const auto mm = make_phantom(spec, dims, g.seed);
    write_raw(to_channels(mm), a.out);
    json j = report("phantom");
    j["kind"] = a.kind;
    j["dims"] = {dims.d, dims.h, dims.w};
    j["modalities"] = mm.count();
    j["seed"] = g.seed;
    j["output"] = a.out;
    emit(g, j, "wrote " + std::to_string(mm.count()) + " x " + to_string(dims) + " " + a.kind + " phantom to " + a.out + "\n");
    return 0;
}

struct DecomposeArgs {
    std::string strategy = "dtcwt/nsct";
    std::size_t levels = 1, dirs = 4;
    std::vector<std::string> files;
};

int run_decompose(const Globals& g, const DecomposeArgs& a) {
    const NsctConfig nc = nsct_config(a.levels, a.dirs);
    const auto slash = a.strategy.find('/');
    if (slash == std::string::npos) {
        as_usage<Strategy>([&] { return parse_strategy(a.strategy); });
    } else {
        as_usage<Strategy>([&] { return parse_strategy(a.strategy.substr(0, slash)); });
        as_usage<Strategy>([&] { return parse_strategy(a.strategy.substr(slash + 1)); });
    }
    const auto mm = load_modalities(a.files.at(0));
    json j = report("decompose");
    j["strategy"] = a.strategy;
    j["levels"] = a.levels;
    j["directions"] = a.dirs;
    j["modalities"] = mm.count();
    std::ostringstream text;
    if (slash == std::string::npos) {
        if (a.files.size() != 2) throw UsageError("single-strategy decompose takes IN OUT_COEFFS");
        const Strategy s = as_usage<Strategy>([&] { return parse_strategy(a.strategy); });
        const auto coeffs = transform_coefficients(mm, s, nc, g.threads);
        write_raw(coeffs, a.files[1]);
        j["outputs"] = {{{"path", a.files[1]}, {"channels", coeffs.channels()}}};
        text << "coefficients: " << coeffs.channels() << " channels of " << to_string(coeffs.dims()) << " -> " << a.files[1] << "\n";
    } else {
        if (a.files.size() != 3) throw UsageError("LF/HF decompose takes IN OUT_L OUT_H");
        FddConfig cfg;
        cfg.lf = as_usage<Strategy>([&] { return parse_strategy(a.strategy.substr(0, slash)); });
        cfg.hf = as_usage<Strategy>([&] { return parse_strategy(a.strategy.substr(slash + 1)); });
        cfg.nsct = nc;
        const auto out = fdd_decompose(mm, cfg, g.threads);
        write_raw(out.x_l, a.files[1]);
        write_raw(out.x_h, a.files[2]);
        j["outputs"] = {{{"path", a.files[1]}, {"channels", out.x_l.channels()}}, {{"path", a.files[2]}, {"channels", out.x_h.channels()}}};
        text << "x_l: " << out.x_l.channels() << " channels -> " << a.files[1] << "\n"
             << "x_h: " << out.x_h.channels() << " channels (" << cfg.hf_directions() << " per modality) -> " << a.files[2] << "\n";
    }
    emit(g, j, text.str());
    return 0;
}

struct ReconstructArgs {
    std::string strategy = "nsct";
    std::size_t levels = 1, dirs = 4;
    std::string reference;
    std::vector<std::string> files;
};

int run_reconstruct(const Globals& g, const ReconstructArgs& a) {
    const NsctConfig nc = nsct_config(a.levels, a.dirs);
    const Strategy s = as_usage<Strategy>([&] { return parse_strategy(a.strategy); });
    const auto coeffs = read_volume(a.files.at(0));
    const auto out = inverse_coefficients(coeffs, s, nc, g.threads);
    write_raw(out, a.files.at(1));
    json j = report("reconstruct");
    j["strategy"] = a.strategy;
    j["channels"] = out.channels();
    j["output"] = a.files[1];
    std::ostringstream text;
    text << "reconstructed " << out.channels() << " x " << to_string(out.dims()) << " -> " << a.files[1] << "\n";
    if (!a.reference.empty()) {
        const auto ref = read_volume(a.reference);
        if (ref.channels() != out.channels() || !(ref.dims() == out.dims())) throw ShapeError("reference does not match reconstruction");
        double m = 0.0;
        for (std::size_t c = 0; c < ref.channels(); ++c)
            for (std::size_t i = 0; i < ref.dims().count(); ++i)
                m = std::max(m, static_cast<double>(std::abs(ref.channel(c).data()[i] - out.channel(c).data()[i])));
        j["max_abs_residual"] = m;
        text << "max |reference - reconstruction| = " << fmt(m) << "\n";
    }
    emit(g, j, text.str());
    return 0;
}

struct AnalyzeArgs {
    std::string input;
    std::string fuse_with;
    bool entropy = false;
    int shift_k = 0;
    std::string s_map = "identity";
    bool aliasing = false;
};

int run_analyze(const Globals& g, const AnalyzeArgs& a) {
    ChannelVolume vol = read_volume(a.input);
    if (!a.fuse_with.empty()) vol = fdd_fuse({vol, read_volume(a.fuse_with)});
    PlaneMap map;
    if (a.s_map == "identity")
        map = [](const Plane& p) { return p; };
    else if (a.s_map == "dwt")
        map = [](const Plane& p) { return dwt2_level1(p).ll; };
    else if (a.s_map == "dtcwt")
        map = [](const Plane& p) { return dtcwt_level1(p).lf.magnitude(); };
    else
        throw UsageError("--s-map must be identity, dwt or dtcwt");
    const bool all = !a.entropy && a.shift_k == 0 && !a.aliasing;
    const bool do_e = a.entropy || all, do_a = a.aliasing || all;
    const int K = a.shift_k > 0 ? a.shift_k : (all ? 4 : 0);

    json j = report("analyze");
    j["input"] = a.input;
    if (!a.fuse_with.empty()) j["fused_with"] = a.fuse_with;
    j["channels"] = json::array();
    std::ostringstream text;
    text << "channel";
    if (do_e) text << "\tE";
    if (K > 0) text << "\tS(K=" << K << "," << a.s_map << ")";
    if (do_a) text << "\taliased\tnonsubsampled";
    text << "\n";
    const std::size_t mid = vol.dims().d / 2;
    for (std::size_t c = 0; c < vol.channels(); ++c) {
        json ch{{"index", c}};
        text << c;
        if (do_e) {
            const double e = freq_entropy(vol.channel(c));
            ch["entropy"] = e;
            text << "\t" << fmt(e, 5);
        }
        if (K > 0) {
            const double s = shift_invariance_score(vol.channel(c).slice(mid), K, map);
            ch["shift_invariance"] = s;
            ch["shift_k"] = K;
            text << "\t" << fmt(s, 4);
        }
        if (do_a) {
            const auto r = aliasing_energy(vol.channel(c).slice(mid));
            ch["aliasing"] = {{"aliased", r.aliased}, {"nonsubsampled", r.nonsubsampled}, {"band_energy", r.band_energy}};
            text << "\t" << fmt(r.aliased, 5) << "\t" << fmt(r.nonsubsampled, 5);
        }
        j["channels"].push_back(ch);
        text << "\n";
    }
    emit(g, j, text.str());
    return 0;
}

struct AlcArgs {
    AlcDemoConfig cfg;
    std::string dims = "8,16,16";
    std::size_t modalities = 2;
    std::string trace;
};

int run_alc(const Globals& g, AlcArgs a) {
    a.cfg.seed = g.seed;
    if (a.cfg.steps <= a.cfg.warmup) throw UsageError("--steps must exceed --warmup");
    const auto mm = make_phantom({PhantomKind::textured_shell, 0.0, a.modalities}, parse_dims(a.dims), g.seed);
    const auto res = alc_demo_train(Tensor4::from_modalities(mm), a.cfg);
    std::size_t frozen = 0;
    for (auto m : res.state.mask) frozen += m;
    const double dist = std::sqrt(ewc_loss(res.state));

    auto hex = [](std::uint64_t h) {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return std::string(buf);
    };
    json steps = json::array();
    for (const auto& s : res.trace) steps.push_back({{"step", s.step}, {"loss", s.loss}, {"theta_hash", hex(s.theta_hash)}, {"masked", s.masked}});
    json j = report("alc-demo");
    j["config"] = {{"steps", a.cfg.steps}, {"warmup", a.cfg.warmup}, {"lr", a.cfg.lr}, {"lambda2", a.cfg.lambda2}, {"k", a.cfg.k}, {"seed", g.seed}};
    j["final_loss"] = res.trace.back().loss;
    j["theta_distance"] = dist;
    j["mask"] = {{"frozen", frozen}, {"total", res.state.mask.size()}};
    if (!a.trace.empty()) {
        json t = report("alc-demo-trace");
        t["steps"] = steps;
        std::ofstream f(a.trace);
        if (!f) throw Error("cannot write trace file " + a.trace);
        f << t.dump() << "\n";
        j["trace"] = a.trace;
    }
    std::ostringstream text;
    text << "step\tloss\tmasked\n";
    const std::size_t every = std::max<std::size_t>(1, a.cfg.steps / 10);
    for (const auto& s : res.trace)
        if (s.step % every == 0 || s.step + 1 == a.cfg.steps || s.step == a.cfg.warmup) text << s.step << "\t" << fmt(s.loss, 8) << "\t" << (s.masked ? "yes" : "no") << "\n";
    text << "frozen weights: " << frozen << " / " << res.state.mask.size() << "\n"
         << "|theta - D| = " << fmt(dist) << "\n";
    emit(g, j, text.str());
    return 0;
}

struct FdcaArgs {
    std::size_t c = 4, n = 4, h = 16, w = 16;
};

int run_fdca(const Globals& g, const FdcaArgs& a) {
    if (a.h < kPositionalKernel || a.w < kPositionalKernel) throw UsageError("--h and --w must be >= 7");
    FeatureMap f(a.c, a.n, a.h, a.w);
    std::mt19937_64 gen(g.seed);
    std::normal_distribution<double> nd;
    for (double& v : f.data) v = nd(gen);
    const auto params = make_fdca_params(a.c, a.n, g.seed);
    double rt = 0.0;
    const auto back = ifft_merge(fft_split(f));
    for (std::size_t i = 0; i < f.data.size(); ++i) rt = std::max(rt, std::abs(back.data[i] - f.data[i]));
    const auto res = fdca_apply(f, params);
    auto summary = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        double s = 0.0;
        for (double x : v) s += x;
        return json{{"min", *lo}, {"max", *hi}, {"mean", s / static_cast<double>(v.size())}, {"size", v.size()}};
    };
    json maps{{"semantic", summary(res.maps.ms)}, {"positional", summary(res.maps.mp.data)}, {"slice", summary(res.maps.mn)}};
    json j = report("fdca-demo");
    j["shape"] = {a.c, a.n, a.h, a.w};
    j["seed"] = g.seed;
    j["maps"] = maps;
    j["fft_roundtrip_max_error"] = rt;
    j["imag_residual"] = res.imag_residual;
    std::ostringstream text;
    text << "map\tmin\tmax\tmean\n";
    for (const auto& [name, s] : maps.items())
        text << name << "\t" << fmt(s["min"].get<double>()) << "\t" << fmt(s["max"].get<double>()) << "\t" << fmt(s["mean"].get<double>()) << "\n";
    text << "fft round trip max error: " << fmt(rt, 3) << "\n"
         << "imaginary residual (L2): " << fmt(res.imag_residual, 4) << "\n";
    emit(g, j, text.str());
    return 0;
}

struct LossArgs {
    std::string pred_l, pred_h, target;
    LossWeights w;
    double t = 40.0;
    double ewc = 0.0;
};

int run_loss(const Globals& g, const LossArgs& a) {
    as_usage<int>([&] {
        a.w.validate();
        return 0;
    });
    const auto pl = Prediction::from_channels(read_volume(a.pred_l));
    const auto ph = Prediction::from_channels(read_volume(a.pred_h));
    const auto target = load_labels(a.target, static_cast<int>(pl.classes));
    const double dl = dice_loss(pl, target), dh = dice_loss(ph, target);
    const double unsup = dfl(pl, ph, a.w.alpha);
    const double lam = lambda_schedule(a.t, a.w.T, a.w.lambda_max);
    const double total = total_loss({dl, dh}, unsup, a.ewc, a.w, a.t);
    json j = report("loss-eval");
    j["terms"] = {{"dice_l", dl}, {"dice_h", dh}, {"dfl", unsup}, {"ewc", a.ewc}};
    j["weights"] = {{"lambda1", lam}, {"lambda2", a.w.lambda2}, {"alpha", a.w.alpha}, {"t", a.t}, {"T", a.w.T}};
    j["total"] = total;
    std::ostringstream text;
    text << "dice_l\t" << fmt(dl) << "\ndice_h\t" << fmt(dh) << "\ndfl\t" << fmt(unsup) << "\newc\t" << fmt(a.ewc) << "\nlambda1\t" << fmt(lam)
         << "\nlambda2\t" << fmt(a.w.lambda2) << "\ntotal\t" << fmt(total, 10) << "\n";
    emit(g, j, text.str());
    return 0;
}

struct EvalArgs {
    std::string pred, truth;
    int cls = 1;
    int classes = 0;
};

int run_evaluate(const Globals& g, const EvalArgs& a) {
    auto p = load_labels(a.pred, a.classes);
    auto t = load_labels(a.truth, a.classes);
    const int n = std::max(p.classes, t.classes);
    p.classes = t.classes = n;
    const double d = dice_score(p, t, a.cls);
    json j = report("evaluate");
    j["class"] = a.cls;
    j["dice"] = d;
    std::ostringstream text;
    text << "class " << a.cls << "\ndice\t" << fmt(d) << " %\n";
    try {
        const double h = hd95(p, t, a.cls, t.spacing);
        j["hd95"] = h;
        text << "hd95\t" << fmt(h) << " mm\n";
    } catch (const NumericError&) {
        j["hd95"] = nullptr;
        text << "hd95\tundefined (empty mask)\n";
    }
    emit(g, j, text.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency-domain decomposition toolkit for multimodal MRI volumes"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_flag("--json", g.json, "Machine-readable JSON output");
    app.add_option("--seed", g.seed, "Seed for all randomness")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);

    PhantomArgs pa;
    auto* phantom = app.add_subcommand("phantom", "Generate a synthetic multimodal phantom");
    phantom->add_option("--kind", pa.kind, "smooth-blob | textured-shell | checker | oriented-stripes(DEG)")->capture_default_str();
    phantom->add_option("--dims", pa.dims, "D,H,W")->capture_default_str();
    phantom->add_option("--modalities", pa.modalities, "Number of modalities")->check(CLI::PositiveNumber)->capture_default_str();
    phantom->add_option("out", pa.out, "Output FREQVOL1 file")->required();

    DecomposeArgs da;
    auto* decompose = app.add_subcommand("decompose", "LF/HF decomposition (L/H) or raw coefficients (single strategy)");
    decompose->add_option("--strategy", da.strategy, "L/H (e.g. dtcwt/nsct) or one of dwt, dtcwt, nsct")->capture_default_str();
    decompose->add_option("--levels", da.levels, "NSCT pyramid levels")->capture_default_str();
    decompose->add_option("--dirs", da.dirs, "NSCT directions per level")->capture_default_str();
    decompose->add_option("files", da.files, "IN OUT_L OUT_H, or IN OUT_COEFFS")->required()->expected(2, 3);

    ReconstructArgs ra;
    auto* reconstruct = app.add_subcommand("reconstruct", "Invert a coefficient file");
    reconstruct->add_option("--strategy", ra.strategy, "dwt, dtcwt or nsct")->capture_default_str();
    reconstruct->add_option("--levels", ra.levels)->capture_default_str();
    reconstruct->add_option("--dirs", ra.dirs)->capture_default_str();
    reconstruct->add_option("--reference", ra.reference, "Original volume to report the residual against");
    reconstruct->add_option("files", ra.files, "COEFFS OUT")->required()->expected(2);

    AnalyzeArgs aa;
    auto* analyze = app.add_subcommand("analyze", "Frequency entropy, shift invariance and aliasing per channel");
    analyze->add_option("input", aa.input, "Volume file")->required();
    analyze->add_option("--fuse-with", aa.fuse_with, "HF file; analyze the equal-energy fusion of input (LF) and it");
    analyze->add_flag("--entropy", aa.entropy, "Frequency entropy E");
    analyze->add_option("--shift-K", aa.shift_k, "Shift-invariance score S over shifts -K..K")->check(CLI::PositiveNumber);
    analyze->add_option("--s-map", aa.s_map, "Map applied before S: identity, dwt, dtcwt")->capture_default_str();
    analyze->add_flag("--aliasing", aa.aliasing, "Aliasing energy of the level-1 pyramid band");

    AlcArgs la;
    auto* alc = app.add_subcommand("alc-demo", "Train a single Laplacian-initialized conv layer with EWC and freezing");
    alc->add_option("--steps", la.cfg.steps)->capture_default_str();
    alc->add_option("--warmup", la.cfg.warmup)->check(CLI::PositiveNumber)->capture_default_str();
    alc->add_option("--lr", la.cfg.lr)->check(CLI::NonNegativeNumber)->capture_default_str();
    alc->add_option("--lambda2", la.cfg.lambda2)->check(CLI::NonNegativeNumber)->capture_default_str();
    alc->add_option("--k", la.cfg.k, "Z-score factor for the importance mask")->capture_default_str();
    alc->add_option("--dims", la.dims, "Phantom D,H,W")->capture_default_str();
    alc->add_option("--modalities", la.modalities)->check(CLI::PositiveNumber)->capture_default_str();
    alc->add_option("--trace", la.trace, "Write the per-step trace as JSON");

    FdcaArgs fa;
    auto* fdca = app.add_subcommand("fdca-demo", "Apply frequency-domain cross-attention to a random feature map");
    fdca->set_help_flag("--help", "Print this help message and exit");
    fdca->add_option("--c", fa.c)->check(CLI::PositiveNumber)->capture_default_str();
    fdca->add_option("--n", fa.n)->check(CLI::PositiveNumber)->capture_default_str();
    fdca->add_option("--h,--height", fa.h)->check(CLI::PositiveNumber)->capture_default_str();
    fdca->add_option("--w,--width", fa.w)->check(CLI::PositiveNumber)->capture_default_str();

    LossArgs lo;
    auto* loss = app.add_subcommand("loss-eval", "Dice, dynamic focal and total loss for two branch predictions");
    loss->add_option("--pred-l", lo.pred_l, "LF branch probabilities, one channel per class")->required();
    loss->add_option("--pred-h", lo.pred_h, "HF branch probabilities")->required();
    loss->add_option("--target", lo.target, "Label volume (one channel of class ids)")->required();
    loss->add_option("--alpha", lo.w.alpha)->capture_default_str();
    loss->add_option("--lambda-max", lo.w.lambda_max)->capture_default_str();
    loss->add_option("--lambda2", lo.w.lambda2)->capture_default_str();
    loss->add_option("--t", lo.t, "Current epoch")->capture_default_str();
    loss->add_option("--T", lo.w.T, "Schedule length")->capture_default_str();
    loss->add_option("--ewc", lo.ewc, "EWC term value")->capture_default_str();

    EvalArgs ea;
    auto* evaluate = app.add_subcommand("evaluate", "Dice and HD95 between two label volumes");
    evaluate->add_option("pred", ea.pred)->required();
    evaluate->add_option("truth", ea.truth)->required();
    evaluate->add_option("--cls", ea.cls, "Class id")->capture_default_str();
    evaluate->add_option("--classes", ea.classes, "Class count (default: max label + 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*phantom) return run_phantom(g, pa);
        if (*decompose) return run_decompose(g, da);
        if (*reconstruct) return run_reconstruct(g, ra);
        if (*analyze) return run_analyze(g, aa);
        if (*alc) return run_alc(g, la);
        if (*fdca) return run_fdca(g, fa);
        if (*loss) return run_loss(g, lo);
        if (*evaluate) return run_evaluate(g, ea);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
