#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "t5drive/config.hpp"
#include "t5drive/io.hpp"

using namespace t5drive;
using nlohmann::json;

namespace {

json load(const std::string &name) {
    std::ifstream in(fixtures::config_path(name));
    return json::parse(in);
}

void expect_validation(const json &doc, const std::string &field) {
    try {
        config::from_json(doc);
        FAIL() << "accepted invalid config";
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ValidationError);
        EXPECT_EQ(e.field(), field);
    }
}

} // namespace

TEST(Config, HondaLoadsTableValues) {
    const auto c = config::parse_config(fixtures::config_path("honda_crv.json"));
    const auto &g = c.tc.geometry();
    EXPECT_EQ(g.flow_area, 0.0107);
    EXPECT_EQ(g.impeller_radius, 0.0991);
    EXPECT_NEAR(g.turbine_exit_angle, deg_to_rad(-53.14), 1e-15);
    EXPECT_EQ(c.tc.fluid().density, 840.0);
    EXPECT_EQ(c.tc.inertias().impeller, 0.092);
    EXPECT_EQ(c.tc, presets::honda_crv());
    EXPECT_NEAR(c.stator_angle, presets::kHondaStatorAngle, 1e-15);
}

TEST(Config, NegativeAreaNamesField) {
    auto doc = load("honda_crv.json");
    doc["tc"]["A"] = -0.01;
    expect_validation(doc, "tc.A");
}

TEST(Config, StatorAngleOutsideRange) {
    auto doc = load("honda_crv.json");
    doc["tc"]["alpha_s_deg"] = 95.0;
    expect_validation(doc, "tc.alpha_s_deg");
}

TEST(Config, UnknownKeyRejected) {
    auto doc = load("honda_crv.json");
    doc["tc"]["R_x"] = 1.0;
    EXPECT_THROW(config::from_json(doc), Error);
}

TEST(Config, MalformedAndMissingFilesAreParseErrors) {
    const auto path = std::filesystem::temp_directory_path() / "t5drive_bad.json";
    {
        std::ofstream f(path);
        f << "{ \"tc\": { ";
    }
    for (const auto &p : {path.string(), std::string("/nonexistent/none.json")}) {
        try {
            config::parse_config(p);
            FAIL();
        } catch (const Error &e) {
            EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        }
    }
    std::filesystem::remove(path);
}

TEST(Config, ShippedConfigsRoundTrip) {
    for (const char *name : {"honda_crv.json", "type5.json", "scale_search.json",
                             "scale_fixed.json"}) {
        SCOPED_TRACE(name);
        const auto c = config::parse_config(fixtures::config_path(name));
        const auto text = config::dump(c);
        const auto back = config::parse_string(text);
        EXPECT_EQ(back, c);
        EXPECT_EQ(config::dump(back), text);
    }
}

TEST(Config, DigestIgnoresSpellingAndOrder) {
    const auto doc = load("type5.json");
    json shuffled = json::object();
    std::vector<std::string> keys;
    for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
    for (auto it = keys.rbegin(); it != keys.rend(); ++it) shuffled[*it] = doc[*it];
    shuffled["rated"]["P_rated"] = 2000000;
    const auto a = io::config_digest(config::from_json(doc));
    const auto b = io::config_digest(config::from_json(json::parse(shuffled.dump())));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.size(), 64u);
}

TEST(Config, NonPositiveDtRejected) {
    auto doc = load("honda_crv.json");
    doc["simulation"] = {{"dt", 0.0}};
    EXPECT_THROW(config::from_json(doc), Error);
}

TEST(Io, FormatDoubleRoundTrips) {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 41.76153385474705}) {
        EXPECT_EQ(std::stod(io::format_double(x)), x);
    }
}

TEST(Io, CsvLayout) {
    EXPECT_EQ(io::csv_text({"a", "b"}, {{1.0, 0.5}}), "a,b\n1,0.5\n");
}

TEST(Io, Sha256KnownVector) {
    EXPECT_EQ(io::sha256_hex("abc"),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
