#pragma once

// CSV tables, gnuplot companion scripts, and run manifests.

#include <array>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "t5drive/config.hpp"
#include "t5drive/errors.hpp"
#include "t5drive/sim_engine.hpp"

namespace t5drive::io {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return {buf.data(), res.ptr};
}

inline std::string csv_text(const std::vector<std::string> &header,
                            const std::vector<std::vector<double>> &rows) {
    std::string out;
    for (std::size_t j = 0; j < header.size(); ++j) {
        out += (j ? "," : "") + header[j];
    }
    out += '\n';
    for (const auto &r : rows) {
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j) {
                out += ',';
            }
            out += format_double(r[j]);
        }
        out += '\n';
    }
    return out;
}

inline void write_text(const std::filesystem::path &path, std::string_view text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorKind::InvalidParameter, "cannot write " + path.string(), "out");
    }
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
}

inline void write_csv(const std::filesystem::path &path, const std::vector<std::string> &header,
                      const std::vector<std::vector<double>> &rows) {
    write_text(path, csv_text(header, rows));
}

inline void write_csv(const std::filesystem::path &path, const sim::Trace &trace) {
    write_csv(path, trace.columns(), trace.rows());
}

/// Gnuplot script plotting `ys` against `x` from a CSV with a header row.
inline std::string plot_script(const std::string &csv_name, const std::string &x,
                               const std::vector<std::string> &columns,
                               const std::vector<std::string> &ys, bool log_x = false) {
    auto col = [&](const std::string &name) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j] == name) {
                return j + 1;
            }
        }
        throw Error(ErrorKind::InvalidParameter, "no column " + name, name);
    };
    std::string s = "set datafile separator ','\nset key autotitle columnhead\nset grid\n";
    s += "set xlabel '" + x + "'\n";
    if (log_x) {
        s += "set logscale x\n";
    }
    s += "plot ";
    for (std::size_t k = 0; k < ys.size(); ++k) {
        s += (k ? ", \\\n     " : "") + std::string("'") + csv_name + "' using " +
             std::to_string(col(x)) + ":" + std::to_string(col(ys[k])) + " with lines";
    }
    s += "\npause -1\n";
    return s;
}

inline std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::InvalidResult, "SHA-256 digest failed");
    }
    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", md[i]);
        hex += byte;
    }
    return hex;
}

/// Digest of the canonical form of a configuration, so key order and
/// number spelling in the source file do not matter.
inline std::string config_digest(const config::Config &cfg) {
    return sha256_hex(config::to_json(cfg).dump());
}

struct RunManifest {
    std::string tool_version{kToolVersion};
    std::string config_digest;
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    double wall_time_s = 0.0;
    std::vector<std::string> outputs;

    nlohmann::json to_json() const {
        return {{"tool_version", tool_version}, {"config_digest", config_digest},
                {"command", command},           {"parameters", parameters},
                {"wall_time_s", wall_time_s},   {"outputs", outputs}};
    }
};

} // namespace t5drive::io
