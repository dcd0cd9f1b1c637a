#include "poshawk/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "poshawk/errors.hpp"
#include "poshawk/events.hpp"

namespace poshawk {

std::uint64_t dataset_fingerprint(const Dataset& ds, const CivilDateTime& epoch,
                                  const TimeZoneOffset& zone) {
    const std::string csv = serialize_events_csv(flatten_events(ds), epoch, zone);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : csv) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0')
        throw IoError("model file: malformed number for '" + key + "': '" + s + "'");
    return v;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

}  // namespace

std::string ModelFile::serialize() const {
    std::ostringstream out;
    out << "poshawk_model_version = " << version << '\n';
    out << "epoch = " << format_civil_datetime(epoch) << '\n';
    out << "timezone = " << zone.name() << '\n';
    out << "kernel_mode = " << kernel_mode_name(model.mode) << '\n';
    out << "future_integral = " << future_integral_name(model.future_integral) << '\n';
    out << "phat_contributors = " << phat_contributors_name(contributors) << '\n';
    out << "t_b = " << fmt(model.t_b) << '\n';
    out << "dataset_fingerprint = " << fingerprint << '\n';
    out << "ridge = " << fmt(model.background.ridge) << '\n';
    for (int i = 0; i < kCovariateDim; ++i)
        out << "beta." << kCovariateNames[i] << " = " << fmt(model.background.beta[i]) << '\n';
    out << "influence.r0 = " << fmt(model.influence.r0) << '\n';
    out << "influence.phi0 = " << fmt(model.influence.phi0) << '\n';
    out << "influence.tau_m = " << fmt(model.influence.tau_m) << '\n';
    out << "influence.window_s = " << fmt(model.influence.window_s) << '\n';
    out << "influence.loss = " << fmt(model.influence.loss) << '\n';
    out << "influence.iterations = " << model.influence.iterations << '\n';
    {
        std::string joined;
        for (const auto& w : model.influence.warnings) {
            if (!joined.empty()) joined += ';';
            joined += w;
        }
        out << "influence.warnings = " << joined << '\n';
    }
    {
        std::ostringstream list;
        for (std::size_t i = 0; i < model.dists.pos_samples.size(); ++i)
            list << (i ? "," : "") << model.dists.pos_samples[i];
        out << "dists.pos_samples = " << list.str() << '\n';
    }
    {
        std::ostringstream list;
        for (std::size_t i = 0; i < model.dists.follower_samples.size(); ++i)
            list << (i ? "," : "") << model.dists.follower_samples[i];
        out << "dists.follower_samples = " << list.str() << '\n';
    }
    {
        std::ostringstream list;
        for (std::size_t i = 0; i < model.dists.p0_samples.size(); ++i)
            list << (i ? "," : "") << fmt(model.dists.p0_samples[i]);
        out << "dists.p0_samples = " << list.str() << '\n';
    }
    for (const auto& [id, p0] : model.influence.p0_by_origin)
        out << "p0." << id << " = " << fmt(p0) << '\n';
    return out.str();
}

ModelFile ModelFile::deserialize(const std::string& text) {
    ModelFile mf;
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    bool version_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw IoError("model file: malformed line '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.rfind("p0.", 0) == 0) {
            mf.model.influence.p0_by_origin[key.substr(3)] = parse_double(value, key);
            continue;
        }
        kv[key] = value;
        if (key == "poshawk_model_version") version_seen = true;
    }
    if (!version_seen) throw IoError("model file: missing poshawk_model_version");
    auto require = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) throw IoError("model file: missing key '" + key + "'");
        return it->second;
    };
    mf.version = static_cast<int>(parse_double(require("poshawk_model_version"), "version"));
    if (mf.version != 1)
        throw IoError("model file: unsupported version " + std::to_string(mf.version));
    mf.epoch = parse_civil_datetime(require("epoch"));
    mf.zone = TimeZoneOffset::parse(require("timezone"));
    mf.model.mode = kernel_mode_from_string(require("kernel_mode"));
    mf.model.influence.mode = mf.model.mode;
    mf.model.future_integral = future_integral_from_string(require("future_integral"));
    mf.contributors = phat_contributors_from_string(require("phat_contributors"));
    mf.model.t_b = parse_double(require("t_b"), "t_b");
    mf.fingerprint = std::strtoull(require("dataset_fingerprint").c_str(), nullptr, 10);
    mf.model.background.ridge = parse_double(require("ridge"), "ridge");
    for (int i = 0; i < kCovariateDim; ++i) {
        const std::string key = std::string("beta.") + kCovariateNames[i];
        mf.model.background.beta[i] = parse_double(require(key), key);
    }
    mf.model.influence.r0 = parse_double(require("influence.r0"), "influence.r0");
    mf.model.influence.phi0 = parse_double(require("influence.phi0"), "influence.phi0");
    mf.model.influence.tau_m = parse_double(require("influence.tau_m"), "influence.tau_m");
    mf.model.influence.window_s =
        parse_double(require("influence.window_s"), "influence.window_s");
    mf.model.influence.loss = parse_double(require("influence.loss"), "influence.loss");
    mf.model.influence.iterations = static_cast<std::size_t>(
        parse_double(require("influence.iterations"), "influence.iterations"));
    {
        const std::string w = require("influence.warnings");
        std::istringstream ws(w);
        std::string item;
        while (std::getline(ws, item, ';'))
            if (!item.empty()) mf.model.influence.warnings.push_back(item);
    }
    auto parse_list = [&](const std::string& key, auto push) {
        const std::string s = require(key);
        std::istringstream ls(s);
        std::string item;
        while (std::getline(ls, item, ','))
            if (!item.empty()) push(item);
    };
    parse_list("dists.pos_samples", [&](const std::string& s) {
        mf.model.dists.pos_samples.push_back(static_cast<int>(parse_double(s, "pos")));
    });
    parse_list("dists.follower_samples", [&](const std::string& s) {
        mf.model.dists.follower_samples.push_back(
            static_cast<std::int64_t>(parse_double(s, "followers")));
    });
    parse_list("dists.p0_samples", [&](const std::string& s) {
        mf.model.dists.p0_samples.push_back(parse_double(s, "p0"));
    });
    return mf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw IoError("failed to write file: " + path);
}

}  // namespace poshawk
