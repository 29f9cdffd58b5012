// SPDX-License-Identifier: Apache-2.0
#include "jamloc/jamloc.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "jamloc/config.hpp"
#include "jamloc/error.hpp"
#include "jamloc/experiments.hpp"
#include "jamloc/localizers.hpp"
#include "jamloc/version.hpp"

struct jl_config {
    jamloc::RunConfig value;
};

struct jl_result {
    jamloc::PresetResult value;
    jamloc::PresetOptions options;
    jamloc::RunTimes times;
};

namespace {

thread_local std::string g_last_error;

jl_status fail(jl_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

jl_status status_for(jamloc::ErrorKind kind) {
    switch (kind) {
        case jamloc::ErrorKind::Domain: return JL_ERR_DOMAIN;
        case jamloc::ErrorKind::SingularGeometry: return JL_ERR_SINGULAR_GEOMETRY;
        case jamloc::ErrorKind::Config: return JL_ERR_CONFIG;
        case jamloc::ErrorKind::EmptyReport: return JL_ERR_EMPTY_REPORT;
        case jamloc::ErrorKind::Io: return JL_ERR_IO;
    }
    return JL_ERR_INTERNAL;
}

/// Runs f, translating every exception into a status code. Nothing escapes the C boundary.
template <class F>
jl_status guarded(F&& f) {
    try {
        f();
        return JL_OK;
    } catch (const jamloc::Error& e) {
        return fail(status_for(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(JL_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(JL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(JL_ERR_INTERNAL, "unknown error");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::vector<jamloc::AoaSample> to_samples(const jl_aoa_sample* samples, size_t n) {
    std::vector<jamloc::AoaSample> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        const jl_aoa_sample& s = samples[i];
        jamloc::AoaSample a;
        a.reported_uav_position = {s.uav_position.x, s.uav_position.y, s.uav_position.z};
        a.angles = {s.azimuth_rad, s.elevation_rad};
        a.jsr_db = s.jsr_db;
        a.time_s = s.time_s;
        out.push_back(a);
    }
    return out;
}

void to_c(const jamloc::Estimate& e, jl_estimate* out) {
    out->position = {e.position.x, e.position.y, e.position.z};
    out->samples_used = e.samples_used;
    out->work = e.work;
}

jamloc::PresetOptions to_options(const jl_preset_options* opts) {
    jamloc::PresetOptions o;
    if (opts == nullptr) return o;
    o.threads = opts->threads == 0 ? 1u : opts->threads;
    if (opts->lean != nullptr) {
        const std::string lean = opts->lean;
        if (lean == "strong") {
            o.lean = jamloc::LeanKind::Strong;
        } else if (lean == "slight") {
            o.lean = jamloc::LeanKind::Slight;
        } else {
            throw jamloc::ConfigError("lean must be \"strong\" or \"slight\", got '" + lean + "'");
        }
    }
    if (opts->m_jammers != 0) o.m_jammers = opts->m_jammers;
    if (opts->freq_mode != nullptr) {
        const std::string mode = opts->freq_mode;
        if (mode == "constant") {
            o.freq_mode = jamloc::FrequencyMode::Constant;
        } else if (mode == "random") {
            o.freq_mode = jamloc::FrequencyMode::Random;
        } else {
            throw jamloc::ConfigError("freq_mode must be \"constant\" or \"random\", got '" + mode + "'");
        }
    }
    return o;
}

#define JL_REQUIRE(ptr)                                                          \
    do {                                                                         \
        if ((ptr) == nullptr) return fail(JL_ERR_INVALID_ARGUMENT, #ptr " is null"); \
    } while (0)

}  // namespace

extern "C" {

const char* jl_version(void) { return jamloc::kVersion; }

const char* jl_last_error(void) { return g_last_error.c_str(); }

const char* jl_status_name(jl_status status) {
    switch (status) {
        case JL_OK: return "ok";
        case JL_ERR_INVALID_ARGUMENT: return "invalid argument";
        case JL_ERR_CONFIG: return "config error";
        case JL_ERR_DOMAIN: return "domain error";
        case JL_ERR_SINGULAR_GEOMETRY: return "singular geometry";
        case JL_ERR_IO: return "i/o error";
        case JL_ERR_EMPTY_REPORT: return "empty report";
        case JL_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void jl_string_free(char* s) { std::free(s); }

jl_status jl_config_default(jl_config** out) {
    JL_REQUIRE(out);
    return guarded([&] { *out = new jl_config{}; });
}

jl_status jl_config_parse(const char* json_text, jl_config** out) {
    JL_REQUIRE(json_text);
    JL_REQUIRE(out);
    return guarded([&] { *out = new jl_config{jamloc::parse_config(json_text)}; });
}

jl_status jl_config_load_file(const char* path, jl_config** out) {
    JL_REQUIRE(path);
    JL_REQUIRE(out);
    return guarded([&] { *out = new jl_config{jamloc::load_config_file(path)}; });
}

jl_status jl_config_to_json(const jl_config* cfg, char** out) {
    JL_REQUIRE(cfg);
    JL_REQUIRE(out);
    return guarded([&] { *out = dup_string(jamloc::config_to_json(cfg->value).dump(2)); });
}

jl_status jl_config_set_trials(jl_config* cfg, int trials) {
    JL_REQUIRE(cfg);
    if (trials < 1) return fail(JL_ERR_CONFIG, "trials must be >= 1");
    cfg->value.scenario.trials = trials;
    return JL_OK;
}

jl_status jl_config_set_seed(jl_config* cfg, uint64_t seed) {
    JL_REQUIRE(cfg);
    cfg->value.scenario.master_seed = seed;
    return JL_OK;
}

jl_status jl_config_set_number(jl_config* cfg, const char* parameter, double value) {
    JL_REQUIRE(cfg);
    JL_REQUIRE(parameter);
    return guarded([&] { cfg->value.scenario = jamloc::apply_override(cfg->value.scenario, parameter, value); });
}

void jl_config_free(jl_config* cfg) { delete cfg; }

void jl_preset_options_init(jl_preset_options* opts) {
    if (opts == nullptr) return;
    opts->threads = 1;
    opts->lean = nullptr;
    opts->m_jammers = 0;
    opts->freq_mode = nullptr;
}

jl_status jl_run_preset(const jl_config* cfg, const char* preset, const jl_preset_options* opts, jl_result** out) {
    JL_REQUIRE(cfg);
    JL_REQUIRE(preset);
    JL_REQUIRE(out);
    return guarded([&] {
        auto r = std::make_unique<jl_result>();
        r->options = to_options(opts);
        r->times.started_utc = jamloc::utc_now_iso8601();
        r->value = jamloc::run_preset(preset, cfg->value, r->options);
        r->times.finished_utc = jamloc::utc_now_iso8601();
        *out = r.release();
    });
}

size_t jl_result_row_count(const jl_result* result) { return result ? result->value.table.rows.size() : 0; }

jl_status jl_result_csv(const jl_result* result, char** out) {
    JL_REQUIRE(result);
    JL_REQUIRE(out);
    return guarded([&] { *out = dup_string(result->value.table.to_string()); });
}

jl_status jl_result_manifest(const jl_result* result, char** out) {
    JL_REQUIRE(result);
    JL_REQUIRE(out);
    return guarded([&] {
        *out = dup_string(jamloc::make_manifest(result->value, result->options, result->times, "", "").dump(2));
    });
}

jl_status jl_result_write(const jl_result* result, const char* out_dir, char** csv_path) {
    JL_REQUIRE(result);
    JL_REQUIRE(out_dir);
    return guarded([&] {
        const std::string path = jamloc::write_outputs(result->value, result->options, result->times, out_dir);
        if (csv_path != nullptr) *csv_path = dup_string(path);
    });
}

void jl_result_free(jl_result* result) { delete result; }

jl_status jl_localize_lse(const jl_aoa_sample* samples, size_t n, jl_estimate* out) {
    JL_REQUIRE(samples);
    JL_REQUIRE(out);
    return guarded([&] { to_c(jamloc::lse(to_samples(samples, n)), out); });
}

jl_status jl_localize_wlse(const jl_aoa_sample* samples, size_t n, double path_loss_exponent, jl_estimate* out) {
    JL_REQUIRE(samples);
    JL_REQUIRE(out);
    return guarded([&] { to_c(jamloc::wlse(to_samples(samples, n), path_loss_exponent), out); });
}

void jl_spgd_params_init(jl_spgd_params* params) {
    if (params == nullptr) return;
    const jamloc::SpgdParams d;
    *params = {d.iterations, d.learning_rate, d.decay, d.pruning_rate};
}

jl_status jl_localize_spgd(const jl_aoa_sample* samples, size_t n, const jl_spgd_params* params, jl_estimate* out) {
    JL_REQUIRE(samples);
    JL_REQUIRE(params);
    JL_REQUIRE(out);
    return guarded([&] {
        const jamloc::SpgdParams p{params->iterations, params->learning_rate, params->decay, params->pruning_rate};
        to_c(jamloc::spgd(to_samples(samples, n), p), out);
    });
}

}  // extern "C"
