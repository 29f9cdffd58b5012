// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "jamloc/jamloc.h"

namespace {

jl_aoa_sample toward(jl_vec3 uav, jl_vec3 jammer) {
    const double dx = jammer.x - uav.x, dy = jammer.y - uav.y, dz = jammer.z - uav.z;
    jl_aoa_sample s{};
    s.uav_position = uav;
    s.azimuth_rad = std::atan2(dy, dx);
    s.elevation_rad = std::atan2(dz, std::hypot(dx, dy));
    s.jsr_db = 10.0;
    return s;
}

double dist(jl_vec3 a, jl_vec3 b) { return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z); }

std::string take(char* s) {
    std::string out = s ? s : "";
    jl_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::string(jl_version()) == "0.1.0");
    CHECK(std::string(jl_status_name(JL_OK)) == "ok");
    CHECK(std::string(jl_status_name(JL_ERR_SINGULAR_GEOMETRY)) == "singular geometry");
}

TEST_CASE("localizers through the C interface") {
    const jl_vec3 j{50, 45, 15};
    std::vector<jl_aoa_sample> s{toward({0, 0, 5}, j), toward({100, 10, 20}, j), toward({30, 90, 10}, j),
                                 toward({80, 80, 25}, j), toward({10, 60, 15}, j)};
    jl_estimate e{};
    REQUIRE(jl_localize_lse(s.data(), s.size(), &e) == JL_OK);
    CHECK(dist(e.position, j) < 1e-9);
    CHECK(e.work == 10);
    REQUIRE(jl_localize_wlse(s.data(), s.size(), 2.0, &e) == JL_OK);
    CHECK(dist(e.position, j) < 1e-9);

    jl_spgd_params p;
    jl_spgd_params_init(&p);
    CHECK(p.iterations == 10);
    CHECK(p.pruning_rate == 0.3);
    p.iterations = 300;
    p.decay = 0.99;
    p.pruning_rate = 0.0;
    REQUIRE(jl_localize_spgd(s.data(), s.size(), &p, &e) == JL_OK);
    CHECK(dist(e.position, j) < 1e-3);
    CHECK(e.samples_used == 5);
}

TEST_CASE("C interface errors") {
    jl_estimate e{};
    CHECK(jl_localize_lse(nullptr, 3, &e) == JL_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(jl_last_error()) > 0);

    const jl_vec3 j{50, 45, 15};
    std::vector<jl_aoa_sample> same(3, toward({0, 0, 5}, j));
    CHECK(jl_localize_lse(same.data(), same.size(), &e) == JL_ERR_SINGULAR_GEOMETRY);
    CHECK(jl_localize_spgd(same.data(), 2, nullptr, &e) == JL_ERR_INVALID_ARGUMENT);
    jl_spgd_params p;
    jl_spgd_params_init(&p);
    CHECK(jl_localize_spgd(same.data(), 2, &p, &e) == JL_ERR_CONFIG);

    jl_config* cfg = nullptr;
    CHECK(jl_config_parse("{\"bogus\": 1}", &cfg) == JL_ERR_CONFIG);
    CHECK(std::string(jl_last_error()).find("bogus") != std::string::npos);
    CHECK(cfg == nullptr);
    CHECK(jl_config_load_file("/nonexistent/x.json", &cfg) == JL_ERR_IO);
    CHECK(jl_config_default(nullptr) == JL_ERR_INVALID_ARGUMENT);
}

TEST_CASE("configs and presets through the C interface") {
    jl_config* cfg = nullptr;
    REQUIRE(jl_config_parse("{\"n_samples\": 8}", &cfg) == JL_OK);
    REQUIRE(jl_config_set_trials(cfg, 4) == JL_OK);
    REQUIRE(jl_config_set_seed(cfg, 7) == JL_OK);
    CHECK(jl_config_set_number(cfg, "aoa_error_scale", -1.0) == JL_ERR_CONFIG);
    REQUIRE(jl_config_set_number(cfg, "shadowing_std_db", 1.0) == JL_OK);
    CHECK(jl_config_set_trials(cfg, 0) == JL_ERR_CONFIG);

    char* text = nullptr;
    REQUIRE(jl_config_to_json(cfg, &text) == JL_OK);
    const std::string js = take(text);
    CHECK(js.find("\"master_seed\": 7") != std::string::npos);
    CHECK(js.find("\"trials\": 4") != std::string::npos);

    jl_preset_options opts;
    jl_preset_options_init(&opts);
    jl_result* res = nullptr;
    CHECK(jl_run_preset(cfg, "nope", &opts, &res) == JL_ERR_CONFIG);
    REQUIRE(jl_run_preset(cfg, "run", &opts, &res) == JL_OK);
    CHECK(jl_result_row_count(res) == 3);
    char* csv = nullptr;
    REQUIRE(jl_result_csv(res, &csv) == JL_OK);
    const std::string c = take(csv);
    CHECK(c.rfind("parameter,value,method,rmse_m,ci95_m,trials,failures\n", 0) == 0);
    char* manifest = nullptr;
    REQUIRE(jl_result_manifest(res, &manifest) == JL_OK);
    CHECK(take(manifest).find("\"preset\": \"run\"") != std::string::npos);
    jl_result_free(res);
    jl_config_free(cfg);

    jl_config_free(nullptr);
    jl_result_free(nullptr);
}
