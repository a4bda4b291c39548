#include "memsteer/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "memsteer/errors.hpp"

namespace memsteer {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad(const std::string& message) { throw Error(Errc::invalid_config, "config", message); }

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "grid.T", "grid.K",
        "kernel.kind", "kernel.alpha", "kernel.beta", "kernel.file",
        "target.kind", "target.m", "target.amp_xi", "target.amp_eta", "target.xi", "target.eta",
        "target.file", "target.quadrature",
        "solve.n_max", "solve.ridge", "solve.singular_ratio", "solve.velocity_form", "verify.n_max",
        "tol.T", "tol.pipeline",
        "control.hard_zero_end",
        "output.control", "output.state", "output.report", "output.gram", "output.modes",
        "output.snapshots", "output.snapshots_file", "output.snapshot_resolution",
        "sweep.K", "sweep.n_max",
        "diagnose.n_max", "diagnose.modes",
        "run.threads", "run.simd",
    };
    return keys;
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* begin = value.data();
    const char* end = begin + value.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) bad(key + ": expected a number, got '" + value + "'");
    return out;
}

int to_int(const std::string& key, const std::string& value) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        bad(key + ": expected an integer, got '" + value + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad(key + ": expected true/false, got '" + value + "'");
}

std::vector<std::string> words(const std::string& value) {
    // Items are separated by commas and/or whitespace.
    std::string spaced = value;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::vector<std::string> out;
    std::stringstream in(spaced);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& value) {
    std::vector<double> out;
    for (const auto& w : words(value)) out.push_back(to_double(key, w));
    return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& value) {
    std::vector<int> out;
    for (const auto& w : words(value)) out.push_back(to_int(key, w));
    return out;
}

std::filesystem::path to_path(const std::string& value, const std::filesystem::path& base) {
    std::filesystem::path p(value);
    if (p.is_relative() && !base.empty()) p = base / p;
    return p;
}

void require_file(const std::string& key, const std::filesystem::path& p) {
    if (!std::filesystem::exists(p)) bad(key + ": file '" + p.string() + "' does not exist");
}

} // namespace

ConfigEntries parse_entries(std::string_view text) {
    ConfigEntries entries;
    std::stringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) bad("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty()) bad("line " + std::to_string(line_no) + ": empty key");
        if (entries.count(key) != 0) bad("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        entries[key] = value;
    }
    return entries;
}

void apply_override(ConfigEntries& entries, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) bad("override '" + std::string(assignment) + "' is not key=value");
    const std::string key = trim(assignment.substr(0, eq));
    if (key.empty()) bad("override has an empty key");
    entries[key] = trim(assignment.substr(eq + 1));
}

RunConfig resolve(const ConfigEntries& entries, const std::filesystem::path& base_dir) {
    for (const auto& [key, value] : entries)
        if (known_keys().count(key) == 0) bad("unknown key '" + key + "'");

    RunConfig cfg;
    cfg.entries = entries;
    auto get = [&](const char* key) -> const std::string* {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };

    if (auto v = get("grid.T")) cfg.horizon = to_double("grid.T", *v);
    if (auto v = get("grid.K")) cfg.steps = to_int("grid.K", *v);
    if (!(cfg.horizon > 0.0)) bad("grid.T must be positive");
    if (cfg.steps < 2) bad("grid.K must be at least 2");

    if (auto v = get("kernel.kind")) cfg.kernel.kind = *v;
    if (auto v = get("kernel.alpha")) cfg.kernel.alpha = to_double("kernel.alpha", *v);
    if (auto v = get("kernel.beta")) cfg.kernel.beta = to_double("kernel.beta", *v);
    if (auto v = get("kernel.file")) {
        cfg.kernel.file = to_path(*v, base_dir);
        if (!get("kernel.kind")) cfg.kernel.kind = "file";
    }
    if (cfg.kernel.kind == "exponential") {
        if (!(cfg.kernel.beta > 0.0)) bad("kernel.beta must be positive");
    } else if (cfg.kernel.kind == "file") {
        if (cfg.kernel.file.empty()) bad("kernel.kind = file needs kernel.file");
        require_file("kernel.file", cfg.kernel.file);
    } else if (cfg.kernel.kind != "zero") {
        bad("kernel.kind must be zero, exponential or file");
    }

    if (auto v = get("solve.n_max")) cfg.n_max = to_int("solve.n_max", *v);
    if (cfg.n_max < 1) bad("solve.n_max must be at least 1");
    if (auto v = get("verify.n_max")) cfg.verify_n_max = to_int("verify.n_max", *v);
    if (cfg.verify_n_max != 0 && cfg.verify_n_max < cfg.n_max) bad("verify.n_max must be at least solve.n_max");
    if (auto v = get("solve.ridge")) cfg.ridge = to_double("solve.ridge", *v);
    if (cfg.ridge < 0.0) bad("solve.ridge must be non-negative");
    if (auto v = get("solve.singular_ratio")) cfg.singular_ratio = to_double("solve.singular_ratio", *v);
    if (auto v = get("solve.velocity_form")) cfg.velocity_form = *v;
    if (cfg.velocity_form != "derivative" && cfg.velocity_form != "density")
        bad("solve.velocity_form must be derivative or density");

    if (auto v = get("target.kind")) cfg.target.kind = *v;
    if (auto v = get("target.m")) cfg.target.m = to_int("target.m", *v);
    if (auto v = get("target.amp_xi")) cfg.target.amp_xi = to_double("target.amp_xi", *v);
    if (auto v = get("target.amp_eta")) cfg.target.amp_eta = to_double("target.amp_eta", *v);
    if (auto v = get("target.xi")) cfg.target.xi = to_doubles("target.xi", *v);
    if (auto v = get("target.eta")) cfg.target.eta = to_doubles("target.eta", *v);
    if (auto v = get("target.quadrature")) cfg.target.quadrature = to_int("target.quadrature", *v);
    if (auto v = get("target.file")) cfg.target.file = to_path(*v, base_dir);
    const std::string& tk = cfg.target.kind;
    if (tk == "mode") {
        if (cfg.target.m < 1) bad("target.m must be positive");
    } else if (tk == "coefficients") {
        if (static_cast<int>(cfg.target.xi.size()) > cfg.n_max || static_cast<int>(cfg.target.eta.size()) > cfg.n_max)
            bad("target.xi / target.eta list more coefficients than solve.n_max");
    } else if (tk == "csv") {
        if (cfg.target.file.empty()) bad("target.kind = csv needs target.file");
        require_file("target.file", cfg.target.file);
    } else if (tk != "zero" && tk != "polynomial") {
        bad("target.kind must be zero, mode, coefficients, polynomial or csv");
    }

    if (auto v = get("tol.T")) cfg.tol_T = to_double("tol.T", *v);
    if (auto v = get("tol.pipeline")) cfg.tol_pipeline = to_double("tol.pipeline", *v);
    if (!(cfg.tol_T > 0.0) || !(cfg.tol_pipeline > 0.0)) bad("tolerances must be positive");
    if (auto v = get("control.hard_zero_end")) cfg.hard_zero_end = to_bool("control.hard_zero_end", *v);

    if (auto v = get("output.control")) cfg.output.control = to_path(*v, base_dir);
    if (auto v = get("output.state")) cfg.output.state = to_path(*v, base_dir);
    if (auto v = get("output.report")) cfg.output.report = to_path(*v, base_dir);
    if (auto v = get("output.gram")) cfg.output.gram = to_path(*v, base_dir);
    if (auto v = get("output.modes")) cfg.output.modes_dir = to_path(*v, base_dir);
    if (auto v = get("output.snapshots_file")) cfg.output.snapshots_file = to_path(*v, base_dir);
    if (auto v = get("output.snapshots")) cfg.output.snapshots = to_int("output.snapshots", *v);
    if (auto v = get("output.snapshot_resolution"))
        cfg.output.snapshot_resolution = to_int("output.snapshot_resolution", *v);
    if (cfg.output.snapshots < 0) bad("output.snapshots must be non-negative");
    if (cfg.output.snapshot_resolution < 2) bad("output.snapshot_resolution must be at least 2");

    if (auto v = get("sweep.K")) cfg.sweep_steps = to_ints("sweep.K", *v);
    if (auto v = get("sweep.n_max")) cfg.sweep_n_max = to_ints("sweep.n_max", *v);
    if (auto v = get("diagnose.n_max")) cfg.diagnose_n_max = to_ints("diagnose.n_max", *v);
    if (auto v = get("diagnose.modes")) cfg.convergence_modes = to_ints("diagnose.modes", *v);
    for (int k : cfg.sweep_steps)
        if (k < 2) bad("sweep.K entries must be at least 2");
    for (int n : cfg.sweep_n_max)
        if (n < 1) bad("sweep.n_max entries must be positive");
    for (int n : cfg.diagnose_n_max)
        if (n < 1) bad("diagnose.n_max entries must be positive");
    for (int n : cfg.convergence_modes)
        if (n < 1) bad("diagnose.modes entries must be positive");

    if (auto v = get("run.threads")) {
        const int t = to_int("run.threads", *v);
        if (t < 1) bad("run.threads must be at least 1");
        cfg.threads = static_cast<unsigned>(t);
    }
    if (auto v = get("run.simd")) cfg.simd = *v;
    if (cfg.simd != "auto" && cfg.simd != "scalar" && cfg.simd != "avx2") bad("run.simd must be auto, scalar or avx2");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) bad("cannot read config '" + path.string() + "'");
    std::stringstream text;
    text << in.rdbuf();
    ConfigEntries entries = parse_entries(text.str());
    for (const auto& o : overrides) apply_override(entries, o);
    return resolve(entries, path.parent_path());
}

std::uint64_t config_hash(const ConfigEntries& entries) {
    std::uint64_t hash = 14695981039346656037ull;
    auto mix = [&](std::string_view s) {
        for (unsigned char c : s) {
            hash ^= c;
            hash *= 1099511628211ull;
        }
    };
    for (const auto& [key, value] : entries) {
        if (key == "run.threads") continue;  // results do not depend on it
        mix(key);
        mix("=");
        mix(value);
        mix("\n");
    }
    return hash;
}

std::string config_hash_hex(const ConfigEntries& entries) {
    char buf[17];
    const std::uint64_t h = config_hash(entries);
    for (int i = 0; i < 16; ++i) buf[i] = "0123456789abcdef"[(h >> (60 - 4 * i)) & 0xF];
    buf[16] = '\0';
    return buf;
}

} // namespace memsteer
