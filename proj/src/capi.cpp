#include "gsing/gsing.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <mutex>
#include <new>

#include "gsing/birational.hpp"
#include "gsing/report.hpp"

struct gsing_platform {
    gsing::PlatformSpec spec;
    std::mutex mu;
    std::optional<gsing::CubicSurface> surface;
    std::shared_ptr<const gsing::OrientationPipeline> pipeline;

    const gsing::CubicSurface& cubic() {
        std::lock_guard lock(mu);
        if (!surface) surface = gsing::cubic_surface(spec.arch, spec.orient);
        return *surface;
    }
    std::shared_ptr<const gsing::OrientationPipeline> pl() {
        std::lock_guard lock(mu);
        if (!pipeline) pipeline = gsing::OrientationPipeline::build(spec.arch, spec.orient);
        return pipeline;
    }
};

namespace {

thread_local std::string g_last_error;

gsing_status status_of(gsing::ErrorKind k) {
    switch (k) {
        case gsing::ErrorKind::input: return GSING_INPUT;
        case gsing::ErrorKind::consistency: return GSING_INTERNAL;
        case gsing::ErrorKind::degenerate: return GSING_DEGENERATE;
        case gsing::ErrorKind::domain: return GSING_DOMAIN;
    }
    return GSING_INTERNAL;
}

template <class Fn>
gsing_status guarded(Fn&& fn) {
    g_last_error.clear();
    try {
        return fn();
    } catch (const gsing::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return GSING_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return GSING_INTERNAL;
    }
}

gsing_status null_arg(const char* name) {
    g_last_error = std::string("null argument: ") + name;
    return GSING_INPUT;
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

gsing_status make(gsing::PlatformSpec spec, gsing_platform** out) {
    auto p = std::make_unique<gsing_platform>();
    p->spec = std::move(spec);
    *out = p.release();
    return GSING_OK;
}

}  // namespace

extern "C" {

const char* gsing_version(void) { return "1.0.0"; }

const char* gsing_last_error(void) { return g_last_error.c_str(); }

void gsing_free_string(char* s) { std::free(s); }

gsing_status gsing_platform_load(const char* path, gsing_platform** out) {
    if (!path) return null_arg("path");
    if (!out) return null_arg("out");
    return guarded([&] { return make(gsing::load_platform_spec(path), out); });
}

gsing_status gsing_platform_parse(const char* json, gsing_platform** out) {
    if (!json) return null_arg("json");
    if (!out) return null_arg("out");
    return guarded([&] { return make(gsing::parse_platform_spec(json), out); });
}

gsing_status gsing_platform_random(uint64_t seed, gsing_platform** out) {
    if (!out) return null_arg("out");
    return guarded([&] { return make(gsing::random_platform_spec(seed), out); });
}

void gsing_platform_free(gsing_platform* p) { delete p; }

gsing_status gsing_platform_json(const gsing_platform* p, char** json) {
    if (!p) return null_arg("platform");
    if (!json) return null_arg("json");
    return guarded([&] {
        *json = dup(gsing::dump_platform_spec(p->spec));
        return GSING_OK;
    });
}

gsing_status gsing_cubic_text(gsing_platform* p, char** text) {
    if (!p) return null_arg("platform");
    if (!text) return null_arg("text");
    return guarded([&] {
        *text = dup(p->cubic().F.to_string());
        return GSING_OK;
    });
}

gsing_status gsing_cubic_degree(gsing_platform* p, int* degree) {
    if (!p) return null_arg("platform");
    if (!degree) return null_arg("degree");
    return guarded([&] {
        *degree = p->cubic().degree;
        return GSING_OK;
    });
}

gsing_status gsing_is_singular(gsing_platform* p, const double P[3], double tol, int* singular, double* residual) {
    if (!p) return null_arg("platform");
    if (!P) return null_arg("P");
    return guarded([&] {
        auto r = gsing::is_singular(p->cubic(), {P[0], P[1], P[2]}, tol);
        if (singular) *singular = r.singular ? 1 : 0;
        if (residual) *residual = r.residual;
        return GSING_OK;
    });
}

gsing_status gsing_rec(gsing_platform* p, const double P[3], double tol, double twist[6]) {
    if (!p) return null_arg("platform");
    if (!P) return null_arg("P");
    if (!twist) return null_arg("twist");
    return guarded([&] {
        auto r = p->pl()->map->rec(gsing::Vec3d{P[0], P[1], P[2]}, tol);
        auto c = r.twist.coords();
        std::copy(c.begin(), c.end(), twist);
        return GSING_OK;
    });
}

gsing_status gsing_pos(gsing_platform* p, const double twist[6], double tol, double P[3]) {
    if (!p) return null_arg("platform");
    if (!twist) return null_arg("twist");
    if (!P) return null_arg("P");
    return guarded([&] {
        std::array<double, 6> t;
        std::copy(twist, twist + 6, t.begin());
        auto r = gsing::pos(*p->pl(), t, tol);
        for (std::size_t k = 0; k < 3; ++k) P[k] = r.P[k];
        return GSING_OK;
    });
}

gsing_status gsing_param_eval(gsing_platform* p, const char* s, const char* t, char** xyz_json) {
    if (!p) return null_arg("platform");
    if (!s) return null_arg("s");
    if (!t) return null_arg("t");
    if (!xyz_json) return null_arg("xyz_json");
    return guarded([&] {
        gsing::SingularityParametrization sp(p->pl());
        auto P = sp.evaluate(gsing::parse_rat(s), gsing::parse_rat(t));
        if (!P) gsing::fail(gsing::ErrorKind::domain, "parametrization undefined at (s, t)");
        *xyz_json = dup("[\"" + gsing::to_string((*P)[0]) + "\", \"" + gsing::to_string((*P)[1]) + "\", \"" +
                        gsing::to_string((*P)[2]) + "\"]");
        return GSING_OK;
    });
}

gsing_status gsing_run(gsing_platform* p, const char* command, const char* options_json, char** report_json) {
    if (!p) return null_arg("platform");
    if (!command) return null_arg("command");
    if (!report_json) return null_arg("report_json");
    return guarded([&] {
        auto cfg = gsing::JobConfig::from_json(command, options_json ? options_json : "");
        auto res = gsing::run_job(p->spec, cfg);
        *report_json = dup(res.report);
        if (res.status != 0) g_last_error = res.status == 1 ? "verification findings" : "command failed";
        return static_cast<gsing_status>(res.status);
    });
}

}  // extern "C"
