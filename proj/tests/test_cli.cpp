#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "freqdec/io.hpp"
#include "freqdec/volume.hpp"

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <string>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace freqdec;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(FREQDEC_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json run_json(const std::string& args) {
    const Run r = run("--json " + args);
    REQUIRE(r.code == 0);
    return json::parse(r.out);
}

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("freqdec_cli_" + std::to_string(getpid()))) { fs::create_directories(path); }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

enum class T { number, integer, string, array, object, number_or_null };

bool is(const json& v, T t) {
    switch (t) {
        case T::number: return v.is_number();
        case T::integer: return v.is_number_integer();
        case T::string: return v.is_string();
        case T::array: return v.is_array();
        case T::object: return v.is_object();
        case T::number_or_null: return v.is_number() || v.is_null();
    }
    return false;
}

// Required top-level fields per command, version "1".
const std::map<std::string, std::map<std::string, T>> kSchema{
    {"phantom", {{"kind", T::string}, {"dims", T::array}, {"modalities", T::integer}, {"seed", T::integer}, {"output", T::string}}},
    {"decompose", {{"strategy", T::string}, {"levels", T::integer}, {"directions", T::integer}, {"modalities", T::integer}, {"outputs", T::array}}},
    {"reconstruct", {{"strategy", T::string}, {"channels", T::integer}, {"output", T::string}}},
    {"analyze", {{"input", T::string}, {"channels", T::array}}},
    {"alc-demo", {{"config", T::object}, {"final_loss", T::number}, {"theta_distance", T::number}, {"mask", T::object}}},
    {"fdca-demo", {{"shape", T::array}, {"seed", T::integer}, {"maps", T::object}, {"fft_roundtrip_max_error", T::number}, {"imag_residual", T::number}}},
    {"loss-eval", {{"terms", T::object}, {"weights", T::object}, {"total", T::number}}},
    {"evaluate", {{"class", T::integer}, {"dice", T::number}, {"hd95", T::number_or_null}}},
};

std::string validate(const json& j) {
    if (!j.is_object()) return "not an object";
    if (j.value("schema_version", "") != "1") return "schema_version";
    if (!j.contains("command") || !j["command"].is_string()) return "command";
    const auto it = kSchema.find(j["command"].get<std::string>());
    if (it == kSchema.end()) return "unknown command";
    for (const auto& [key, type] : it->second)
        if (!j.contains(key) || !is(j[key], type)) return "field " + key;
    if (it->first == "decompose")
        for (const auto& o : j["outputs"])
            if (!o.contains("path") || !o["path"].is_string() || !o.contains("channels") || !o["channels"].is_number_integer()) return "outputs entry";
    if (it->first == "analyze")
        for (const auto& c : j["channels"]) {
            if (!c.contains("index") || !c["index"].is_number_integer()) return "channel index";
            for (const char* k : {"entropy", "shift_invariance"})
                if (c.contains(k) && !c[k].is_number()) return std::string("channel ") + k;
        }
    if (it->first == "fdca-demo")
        for (const char* m : {"semantic", "positional", "slice"})
            for (const char* k : {"min", "max", "mean"})
                if (!j["maps"].contains(m) || !j["maps"][m][k].is_number()) return std::string("map ") + m;
    return "";
}

}  // namespace

TEST_CASE("phantom is deterministic given the seed") {
    TempDir d;
    REQUIRE(run("phantom --kind textured-shell --dims 8,32,32 --seed 7 " + (d / "a.fv")).code == 0);
    REQUIRE(run("phantom --kind textured-shell --dims 8,32,32 --seed 7 " + (d / "b.fv")).code == 0);
    REQUIRE(run("phantom --kind textured-shell --dims 8,32,32 --seed 8 " + (d / "c.fv")).code == 0);
    CHECK(slurp(d / "a.fv") == slurp(d / "b.fv"));
    CHECK(slurp(d / "a.fv") != slurp(d / "c.fv"));
    const auto v = read_volume(d / "a.fv");
    CHECK(v.channels() == 4);
    CHECK(v.dims() == Dims{8, 32, 32});
}

TEST_CASE("decompose gives 4M highpass channels for four modalities") {
    TempDir d;
    REQUIRE(run("phantom --dims 4,16,16 " + (d / "in.fv")).code == 0);
    const json j = run_json("decompose --strategy dtcwt/nsct --levels 1 --dirs 4 " + (d / "in.fv") + " " + (d / "l.fv") + " " + (d / "h.fv"));
    CHECK(validate(j) == "");
    CHECK(read_volume(d / "l.fv").channels() == 4);
    CHECK(read_volume(d / "h.fv").channels() == 16);
    CHECK(j["outputs"][1]["channels"] == 16);
}

TEST_CASE("coefficients reconstruct the input") {
    TempDir d;
    REQUIRE(run("phantom --dims 2,16,16 --modalities 2 " + (d / "in.fv")).code == 0);
    for (const std::string s : {"dwt", "dtcwt", "nsct"}) {
        REQUIRE(run("decompose --strategy " + s + " " + (d / "in.fv") + " " + (d / "co.fv")).code == 0);
        const json j = run_json("reconstruct --strategy " + s + " --reference " + (d / "in.fv") + " " + (d / "co.fv") + " " + (d / "back.fv"));
        CHECK(validate(j) == "");
        CAPTURE(s);
        CHECK(j["max_abs_residual"].get<double>() < 1e-4);
    }
}

TEST_CASE("analyze orders entropy lowpass < original < fused") {
    TempDir d;
    REQUIRE(run("phantom --dims 16,32,32 --modalities 1 --seed 3 " + (d / "in.fv")).code == 0);
    REQUIRE(run("decompose " + (d / "in.fv") + " " + (d / "l.fv") + " " + (d / "h.fv")).code == 0);
    const json o = run_json("analyze --entropy " + (d / "in.fv"));
    const json l = run_json("analyze --entropy " + (d / "l.fv"));
    const json f = run_json("analyze --entropy --fuse-with " + (d / "h.fv") + " " + (d / "l.fv"));
    for (const json* j : {&o, &l, &f}) CHECK(validate(*j) == "");
    const double eo = o["channels"][0]["entropy"], el = l["channels"][0]["entropy"], ef = f["channels"][0]["entropy"];
    CHECK(el < eo);
    CHECK(eo < ef);
    const json s = run_json("analyze --shift-K 4 --s-map dtcwt " + (d / "in.fv"));
    CHECK(validate(s) == "");
    CHECK(s["channels"][0]["shift_k"] == 4);
}

TEST_CASE("demos and evaluators emit valid reports") {
    TempDir d;
    const json a = run_json("alc-demo --steps 20 --warmup 5 --trace " + (d / "trace.json"));
    CHECK(validate(a) == "");
    const json t = json::parse(slurp(d / "trace.json"));
    CHECK(t["steps"].size() == 20);
    CHECK(validate(run_json("fdca-demo")) == "");
    const json fd = run_json("fdca-demo --c 2 --n 3 --h 8 --w 9");
    CHECK(fd["shape"] == json::array({2, 3, 8, 9}));

    const Dims dims{2, 4, 4};
    std::vector<float> p0(32), p1(32), lab(32);
    for (std::size_t i = 0; i < 32; ++i) {
        lab[i] = i % 3 == 0 ? 1.0f : 0.0f;
        p1[i] = i % 3 == 0 ? 0.8f : 0.3f;
        p0[i] = 1.0f - p1[i];
    }
    write_raw(ChannelVolume({Volume3D(dims, p0), Volume3D(dims, p1)}), d / "pl.fv");
    write_raw(ChannelVolume({Volume3D(dims, p1), Volume3D(dims, p0)}), d / "ph.fv");
    write_raw(ChannelVolume({Volume3D(dims, lab)}), d / "t.fv");
    const json l = run_json("loss-eval --pred-l " + (d / "pl.fv") + " --pred-h " + (d / "ph.fv") + " --target " + (d / "t.fv"));
    CHECK(validate(l) == "");
    CHECK(l["total"].get<double>() > 0.0);
    const json e = run_json("evaluate --cls 1 " + (d / "t.fv") + " " + (d / "t.fv"));
    CHECK(validate(e) == "");
    CHECK(e["dice"] == 100.0);
    CHECK(e["hd95"] == 0.0);
}

TEST_CASE("every command is deterministic given the seed") {
    CHECK(run("--json fdca-demo --seed 5").out == run("--json fdca-demo --seed 5").out);
    CHECK(run("--json alc-demo --steps 12 --warmup 4 --seed 5").out == run("--json alc-demo --steps 12 --warmup 4 --seed 5").out);
    CHECK(run("--json fdca-demo --seed 5").out != run("--json fdca-demo --seed 6").out);
}

TEST_CASE("exit codes") {
    TempDir d;
    CHECK(run("").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("phantom --no-such-flag " + (d / "x.fv")).code == 2);
    CHECK(run("phantom --kind spiral " + (d / "x.fv")).code == 2);
    CHECK(run("decompose --strategy fft " + (d / "x.fv") + " " + (d / "y.fv")).code == 2);
    CHECK(run("analyze " + (d / "missing.fv")).code == 1);
    REQUIRE(run("phantom --dims 2,16,17 --modalities 1 " + (d / "odd.fv")).code == 0);
    CHECK(run("decompose " + (d / "odd.fv") + " " + (d / "l.fv") + " " + (d / "h.fv")).code == 1);
    CHECK(run("fdca-demo --h 4").code == 2);
    CHECK(run("--help").code == 0);
}
