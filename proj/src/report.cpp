#include "gsing/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "gsing/lines.hpp"
#include "json.hpp"

namespace gsing {

using ojson = nlohmann::ordered_json;

std::string_view precision_name(Precision p) {
    switch (p) {
        case Precision::double_: return "double";
        case Precision::extended: return "extended";
        case Precision::exact: return "exact";
    }
    return "?";
}

Precision parse_precision(std::string_view text) {
    if (text == "double") return Precision::double_;
    if (text == "extended" || text == "quad") return Precision::extended;
    if (text == "exact") return Precision::exact;
    fail(ErrorKind::input, "precision must be double, extended (quad) or exact, got '" + std::string(text) + "'");
}

std::array<double, 6> parse_box(std::string_view text) {
    std::vector<double> v;
    std::string s(text);
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(x)) fail(ErrorKind::input, "box: bad number '" + item + "'");
        v.push_back(x);
    }
    if (v.size() == 1) {
        if (!(v[0] > 0)) fail(ErrorKind::input, "box half-width must be positive");
        return {-v[0], v[0], -v[0], v[0], -v[0], v[0]};
    }
    if (v.size() != 6) fail(ErrorKind::input, "box needs 1 or 6 comma-separated numbers");
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

JobConfig JobConfig::from_json(const std::string& command, const std::string& options_json) {
    if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
        fail(ErrorKind::input, "unknown command '" + command + "'");
    JobConfig c;
    c.command = command;
    if (options_json.empty()) return c;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(options_json);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::input, std::string("options: ") + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::input, "options: expected a JSON object");
    try {
        for (const auto& [key, val] : j.items()) {
            if (key == "tol") {
                c.tol = val.get<double>();
                if (!(c.tol > 0)) fail(ErrorKind::input, "options: tol must be positive");
            } else if (key == "seed") {
                c.seed = val.get<std::uint64_t>();
            } else if (key == "samples") {
                c.samples = val.get<std::size_t>();
            } else if (key == "grid") {
                c.grid = val.get<std::size_t>();
            } else if (key == "restarts") {
                c.restarts = val.get<std::size_t>();
                if (c.restarts == 0) fail(ErrorKind::input, "options: restarts must be positive");
            } else if (key == "box") {
                if (val.is_string()) {
                    c.box = parse_box(val.get<std::string>());
                } else if (val.is_number()) {
                    double h = val.get<double>();
                    c.box = {-h, h, -h, h, -h, h};
                } else {
                    auto v = val.get<std::vector<double>>();
                    if (v.size() != 6) fail(ErrorKind::input, "options: box needs 6 numbers");
                    std::copy(v.begin(), v.end(), c.box.begin());
                }
            } else if (key == "precision") {
                c.precision = parse_precision(val.get<std::string>());
            } else if (key == "max_den") {
                c.max_den = val.is_string() ? val.get<std::string>() : std::to_string(val.get<std::uint64_t>());
                BigInt d;
                if (d.set_str(c.max_den, 10) != 0 || d < 1) fail(ErrorKind::input, "options: bad max_den");
            } else if (key == "out") {
                c.out_dir = val.get<std::string>();
            } else {
                fail(ErrorKind::input, "options: unknown key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::type_error& e) {
        fail(ErrorKind::input, std::string("options: ") + e.what());
    }
    return c;
}

namespace {

Precision effective_precision(const JobConfig& c) {
    if (c.precision) return *c.precision;
    return c.command == "param" ? Precision::exact : Precision::extended;
}

ojson config_json(const JobConfig& c) {
    ojson j;
    j["command"] = c.command;
    j["tol"] = c.tol;
    j["seed"] = c.seed;
    j["samples"] = c.samples;
    j["grid"] = c.grid;
    j["box"] = c.box;
    j["precision"] = precision_name(effective_precision(c));
    j["restarts"] = c.restarts;
    j["max_den"] = c.max_den;
    return j;
}

}  // namespace

std::string JobConfig::to_json() const { return config_json(*this).dump(); }

namespace {

ojson cplx_json(const cplx& z) { return ojson::array({z.real(), z.imag()}); }

template <std::size_t N>
ojson cplx_array(const std::array<cplx, N>& a) {
    ojson j = ojson::array();
    for (const auto& z : a) j.push_back(cplx_json(z));
    return j;
}

template <class T, std::size_t N>
ojson rat_array(const std::array<T, N>& a) {
    ojson j = ojson::array();
    for (const auto& q : a) j.push_back(to_string(q));
    return j;
}

template <std::size_t N>
ojson poly_array(const std::array<MultiPoly, N>& a) {
    ojson j = ojson::array();
    for (const auto& p : a) j.push_back(p.to_string());
    return j;
}

ojson vec3_polys(const Vec3<MultiPoly>& v) { return ojson::array({v[0].to_string(), v[1].to_string(), v[2].to_string()}); }

ojson twist_polys(const TwistPolys& t) {
    ojson j;
    const char* names[6] = {"o1", "o2", "o3", "v1", "v2", "v3"};
    auto c = t.coords();
    for (std::size_t k = 0; k < 6; ++k) j[names[k]] = c[k].to_string();
    return j;
}

/// a = c b for one nonzero rational c.
bool proportional(const std::array<MultiPoly, 6>& a, const std::array<MultiPoly, 6>& b) {
    std::optional<Rat> c;
    for (std::size_t k = 0; k < 6; ++k) {
        if (a[k].is_zero() != b[k].is_zero()) return false;
        if (a[k].is_zero()) continue;
        if (!c) {
            const auto& [m, coef] = *b[k].terms().begin();
            c = a[k].coeff(m) / coef;
            if (*c == 0) return false;
        }
        if (!(a[k] == b[k] * *c)) return false;
    }
    return c.has_value();
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Per-job state: the pipeline is built on demand and its failure recorded.
struct Job {
    const PlatformSpec& spec;
    const JobConfig& cfg;
    ojson report;
    ojson checks = ojson::array();
    std::vector<std::string> findings;
    ojson artifacts = ojson::object();

    std::optional<CubicSurface> surface_;
    std::shared_ptr<const OrientationPipeline> pipeline_;
    std::string pipeline_error_;
    bool pipeline_tried_ = false;

    Job(const PlatformSpec& s, const JobConfig& c) : spec(s), cfg(c) {}

    const CubicSurface& surface() {
        if (!surface_) surface_ = cubic_surface(spec.arch, spec.orient);
        return *surface_;
    }

    /// Null (with a finding) when the architecture is outside the generic case.
    const OrientationPipeline* pipeline() {
        if (!pipeline_tried_) {
            pipeline_tried_ = true;
            try {
                pipeline_ = OrientationPipeline::build(spec.arch, spec.orient);
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::consistency || e.kind() == ErrorKind::input) throw;
                pipeline_error_ = e.what();
                finding(std::string("pipeline unavailable: ") + e.what());
            }
        }
        return pipeline_.get();
    }

    void finding(const std::string& f) { findings.push_back(f); }

    void check(const std::string& name, bool pass, double value, double threshold) {
        ojson c;
        c["name"] = name;
        c["pass"] = pass;
        c["value"] = value;
        c["threshold"] = threshold;
        checks.push_back(c);
        if (!pass) finding("check failed: " + name);
    }
    void check(const std::string& name, bool pass) {
        ojson c;
        c["name"] = name;
        c["pass"] = pass;
        checks.push_back(c);
        if (!pass) finding("check failed: " + name);
    }

    void artifact(const std::string& name, const std::string& content) {
        if (cfg.out_dir.empty()) {
            artifacts[name] = content;
            return;
        }
        std::filesystem::path dir(cfg.out_dir);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) fail(ErrorKind::input, "cannot write " + (dir / name).string());
        f << content;
        artifacts[name] = (dir / name).string();
    }

    BigInt max_den() const { return BigInt(cfg.max_den); }
};

// ---------------------------------------------------------------- surface

ojson smoothness_json(const SmoothnessReport& s) {
    ojson j;
    j["samples"] = s.samples;
    j["min_gradient"] = s.min_gradient;
    j["min_fifth_singular"] = s.min_fifth_singular;
    j["max_sixth_singular"] = s.max_sixth_singular;
    j["rank_five"] = s.rank_five;
    j["possibly_singular"] = s.possibly_singular;
    return j;
}

void surface_section(Job& job, ojson& out) {
    const auto& s = job.surface();
    out["F"] = s.F.to_string();
    out["F_h"] = s.F_h.to_string();
    out["H3"] = s.H3.to_string();
    out["degree"] = s.degree;
    out["degenerate"] = s.degenerate;
    if (s.degenerate) job.finding("surface degree " + std::to_string(s.degree) + " < 3 (degenerate case)");
    ojson flags = ojson::array();
    auto joint_rank = [](const std::array<Vec3Q, 6>& pts) {
        QMatrix m(5, 3);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t k = 0; k < 3; ++k) m(i, k) = pts[i + 1][k];
        return m.rank();
    };
    std::size_t base_rank = joint_rank(s.arch.base), platform_rank = joint_rank(s.arch.platform);
    out["base_rank"] = base_rank;
    out["platform_rank"] = platform_rank;
    if (base_rank < 3) flags.push_back("base joints coplanar (rank " + std::to_string(base_rank) + ")");
    if (platform_rank < 3) flags.push_back("platform joints coplanar (rank " + std::to_string(platform_rank) + ")");
    out["degeneracy"] = flags;
    for (const auto& f : flags) job.finding("degenerate architecture: " + f.get<std::string>());
    if (s.degree == 3) {
        auto ic = infinity_cubic(s);
        out["H3_cross_check"] = ic.normalized.to_string();
        auto sm = smoothness_probe(s, std::max<std::size_t>(job.cfg.samples, 1), job.cfg.seed, job.cfg.tol);
        out["smoothness"] = smoothness_json(sm);
        if (sm.possibly_singular) job.finding("smoothness probe: surface may have singular points");
    }
}

// ---------------------------------------------------------------- twist

void twist_section(Job& job, ojson& out) {
    const auto* pl = job.pipeline();
    if (!pl) return;
    const auto& map = *pl->map;
    out["quadratic_bundle"] = twist_polys(map.quadratic());
    out["quadratic_degree"] = map.quadratic().degree();
    TwistPolys sums;
    for (std::size_t k = 0; k < 3; ++k) sums.omega[k] = sums.v[k] = MultiPoly();
    for (std::size_t r = 0; r < 6; ++r) {
        const auto& row = map.cofactor_row(r);
        for (std::size_t k = 0; k < 3; ++k) {
            sums.omega[k] += row.omega[k];
            sums.v[k] += row.v[k];
        }
    }
    out["matches_cofactor_column_sums"] = proportional(map.quadratic().coords(), sums.coords());
    ojson rows = ojson::array();
    for (std::size_t r = 0; r < 6; ++r) rows.push_back(map.cofactor_row(r).degree());
    out["cofactor_row_degrees"] = rows;
    const auto& inf = map.infinity();
    out["V_inf"] = vec3_polys(inf.v_inf);
    out["Omega_inf"] = vec3_polys(inf.omega_inf);
    out["L"] = inf.L.to_string();
    auto fb = map.cofactor_row(5).graded_part(3);
    if (auto g = factor_position(fb.omega))
        out["fallback_factor"] = g->to_string();
    else
        out["fallback_factor"] = nullptr;

    std::size_t n = job.cfg.samples, fallback = 0, failures = 0;
    double worst = 0;
    for (const auto& P : sample_surface_points(pl->surface, n, job.cfg.seed, 2 * characteristic_length(pl->arch), 51)) {
        try {
            auto r = map.rec(P, 1e-9);
            worst = std::max(worst, r.max_residual);
            fallback += r.used_fallback;
        } catch (const Error&) {
            ++failures;
        }
    }
    ojson s;
    s["samples"] = n;
    s["max_reciprocity_residual"] = worst;
    s["fallback_used"] = fallback;
    s["failures"] = failures;
    out["rec_samples"] = s;
    if (!out["matches_cofactor_column_sums"].get<bool>()) job.finding("quadratic bundle differs from the cofactor column sums");
    if (worst > job.cfg.tol) job.finding("reciprocity residual above tolerance");
    if (failures) job.finding("rec failed at " + std::to_string(failures) + " sampled points");
}

// ---------------------------------------------------------------- quadric

void quadric_section(Job& job, ojson& out) {
    const auto* pl = job.pipeline();
    if (!pl) return;
    const auto& q = pl->quadric;
    ojson dep;
    dep["basis"] = ojson::array({q.dep.basis[0] + 1, q.dep.basis[1] + 1, q.dep.basis[2] + 1});
    dep["others"] = ojson::array({q.dep.others[0] + 1, q.dep.others[1] + 1});
    dep["alpha"] = rat_array(q.dep.alpha);
    dep["beta"] = rat_array(q.dep.beta);
    dep["mixed"] = to_string(q.dep.mixed);
    out["dependency"] = dep;
    out["lin1"] = q.lin1_poly.to_string();
    out["lin2"] = q.lin2_poly.to_string();
    out["quad"] = q.quad_poly.to_string();
    out["base_point"] = rat_array(q.base_point);
    out["generic"] = q.generic;
    if (!q.generic) job.finding("a quadric form vanishes identically");
    if (pl->param) {
        ojson p;
        p["chart_index"] = pl->param->chart_index();
        p["nondegenerate"] = pl->param->nondegenerate();
        p["polynomials"] = poly_array(pl->param->polynomials());
        out["parametrization"] = p;
        if (!pl->param->nondegenerate()) job.finding("Q is a degenerate quadric");
    } else {
        out["parametrization"] = nullptr;
        job.finding("Q cannot be parametrized: " + pl->param_error);
    }
    double worst = 0;
    std::size_t used = 0;
    for (const auto& P : sample_surface_points(pl->surface, job.cfg.samples, job.cfg.seed,
                                               2 * characteristic_length(pl->arch), 52)) {
        try {
            auto r = pl->map->rec(P, 1e-9);
            worst = std::max(worst, quadric_membership(q, r.twist.coords()).max_relative());
            ++used;
        } catch (const Error&) {
        }
    }
    out["membership"] = {{"samples", used}, {"max_relative", worst}};
    if (worst > job.cfg.tol) job.finding("reciprocal twists off Q beyond tolerance");
}

// ---------------------------------------------------------------- param

void param_section(Job& job, ojson& out) {
    const auto* pl = job.pipeline();
    if (!pl) return;
    if (!pl->param) {
        job.finding("singularity parametrization unavailable: " + pl->param_error);
        return;
    }
    auto shared = std::shared_ptr<const OrientationPipeline>(job.pipeline_);
    SingularityParametrization sp(shared);
    const auto& fns = sp.rational_functions();
    out["x"] = fns[0].to_string();
    out["y"] = fns[1].to_string();
    out["z"] = fns[2].to_string();
    out["denominator"] = fns[3].to_string();
    out["denominator_degree"] = fns[3].degree();

    const Precision prec = effective_precision(job.cfg);
    std::ostringstream csv;
    csv << "s,t,x,y,z,residual\n";
    Rng rng(job.cfg.seed, 61);
    std::size_t made = 0, skipped = 0;
    double worst = 0;
    bool exact_zero = true;
    const auto& F = pl->surface.F;
    while (made < job.cfg.samples && skipped < 10 * job.cfg.samples + 10) {
        if (prec == Precision::exact) {
            Rat s = rng.rational(50, 7), t = rng.rational(50, 7);
            auto P = sp.evaluate(s, t);
            if (!P) {
                ++skipped;
                continue;
            }
            Rat r = F.evaluate(position_point<Rat>((*P)[0], (*P)[1], (*P)[2]));
            exact_zero = exact_zero && r == 0;
            csv << to_string(s) << ',' << to_string(t) << ',' << to_string((*P)[0]) << ',' << to_string((*P)[1]) << ','
                << to_string((*P)[2]) << ',' << to_string(r) << '\n';
        } else {
            double s = rng.uniform(-5, 5), t = rng.uniform(-5, 5);
            auto P = sp.evaluate(s, t);
            if (!P) {
                ++skipped;
                continue;
            }
            auto test = is_singular(pl->surface, *P, job.cfg.tol);
            worst = std::max(worst, test.residual);
            csv << fmt(s) << ',' << fmt(t) << ',' << fmt((*P)[0]) << ',' << fmt((*P)[1]) << ',' << fmt((*P)[2]) << ','
                << fmt(test.residual) << '\n';
        }
        ++made;
    }
    ojson smp;
    smp["requested"] = job.cfg.samples;
    smp["produced"] = made;
    smp["skipped"] = skipped;
    if (prec == Precision::exact)
        smp["all_residuals_zero"] = exact_zero;
    else
        smp["max_relative_residual"] = worst;
    out["samples"] = smp;
    job.artifact("param_samples.csv", csv.str());
    if (made < job.cfg.samples) job.finding("fewer parametrized samples than requested");
    if (prec == Precision::exact && !exact_zero) job.finding("a parametrized pose is not on F = 0");
    if (prec != Precision::exact && worst > job.cfg.tol) job.finding("parametrized pose residual above tolerance");
}

// ---------------------------------------------------------------- lines

LineSearchOptions search_options(const Job& job) {
    LineSearchOptions o;
    o.seed = job.cfg.seed;
    o.restarts = job.cfg.restarts;
    o.extended_precision = effective_precision(job.cfg) != Precision::double_;
    return o;
}

OrbitOptions orbit_options(const Job& job) {
    OrbitOptions o;
    o.max_den = job.max_den();
    if (effective_precision(job.cfg) == Precision::double_) {
        o.tol = 1e-12;
        o.imag_tol = 1e-8;
        o.max_den = std::min(o.max_den, BigInt("1000000000000"));
    }
    return o;
}

ojson orbit_json(const OrbitPolynomial& p) {
    ojson j;
    j["members"] = p.members;
    j["monic"] = p.monic;
    j["max_imag"] = p.max_imag;
    j["rational"] = p.rational;
    if (p.rational) {
        ojson c = ojson::array();
        for (const auto& v : p.integer) c.push_back(v.get_str());
        j["integer"] = c;
        j["height"] = p.height.get_str();
        j["match"] = p.match;
    } else {
        j["reason"] = p.reason;
    }
    return j;
}

std::vector<std::string> line_tags(std::size_t n, const LineClassification& cls) {
    std::vector<std::string> tags(n, "unclassified");
    if (!cls.found) return tags;
    for (auto i : cls.s2) tags[i] = "S2";
    for (auto i : cls.s5) tags[i] = "S5";
    for (auto i : cls.t10_one) tags[i] = "T10_meet_one";
    for (auto i : cls.t10_none) tags[i] = "T10_meet_none";
    return tags;
}

ojson lines_json(const std::vector<Line3>& lines, const std::vector<std::string>& tags) {
    ojson arr = ojson::array();
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& l = lines[i];
        ojson j;
        j["index"] = i;
        j["class"] = tags[i];
        j["real"] = l.real;
        j["plucker"] = cplx_array(l.plucker);
        if (l.chart) j["chart_abcd"] = cplx_array(*l.chart);
        j["at_infinity"] = l.at_infinity();
        if (!l.at_infinity()) {
            j["point"] = cplx_array(l.point());
            j["direction"] = cplx_array(l.direction());
        }
        j["residual"] = l.residual;
        j["plucker_identity"] = l.plucker_identity;
        j["found_in"] = chart_name(l.found_in);
        j["from_completion"] = l.from_completion;
        arr.push_back(j);
    }
    return arr;
}

ojson classification_json(const LineClassification& c) {
    ojson j;
    j["found"] = c.found;
    if (!c.reason.empty()) j["reason"] = c.reason;
    j["candidates"] = c.candidates;
    j["row_sums"] = c.row_sums;
    if (c.found) {
        j["s2"] = c.s2;
        j["s5"] = c.s5;
        j["t10_meet_one"] = c.t10_one;
        j["t10_meet_none"] = c.t10_none;
        j["s2_skew"] = c.s2_skew;
        j["s5_meet_both"] = c.s5_meet_both;
        j["s5_mutually_skew"] = c.s5_mutually_skew;
        j["partition_ok"] = c.partition_ok;
        j["F2"] = orbit_json(c.s2_poly);
        j["F5"] = orbit_json(c.s5_poly);
        j["T10_meet_one"] = orbit_json(c.t10_one_poly);
        j["T10_meet_none"] = orbit_json(c.t10_none_poly);
    }
    ojson inc = ojson::array();
    for (const auto& row : c.inc) {
        std::string s;
        for (bool b : row) s += b ? '1' : '0';
        inc.push_back(s);
    }
    j["incidence"] = inc;
    return j;
}

ojson search_json(const LineSearchResult& s) {
    ojson j;
    j["found"] = s.lines.size();
    j["real"] = s.real_count;
    j["complex"] = s.complex_count;
    j["per_chart"] = {{"x", s.per_chart[0]}, {"y", s.per_chart[1]}, {"z", s.per_chart[2]}, {"infinity", s.per_chart[3]}};
    j["completed_by_tritangent_planes"] = s.completed;
    j["max_residual"] = s.max_residual;
    j["max_plucker_identity"] = s.max_plucker_identity;
    j["seed"] = s.seed;
    j["restarts_per_chart"] = s.restarts;
    j["extended_precision"] = s.extended_precision;
    j["warnings"] = s.warnings;
    return j;
}

void lines_section(Job& job, ojson& out) {
    const auto& s = job.surface();
    if (s.degree != 3) {
        job.finding("surface degree " + std::to_string(s.degree) + " < 3: the 27-line analysis does not apply");
        return;
    }
    auto res = find_lines(s.F, search_options(job));
    auto inc = incidence(res.lines);
    auto cls = classify(res.lines, inc, orbit_options(job));
    out["search"] = search_json(res);
    out["classification"] = classification_json(cls);
    out["lines"] = lines_json(res.lines, line_tags(res.lines.size(), cls));
    for (const auto& w : res.warnings) job.finding(w);
    if (!cls.found) job.finding(cls.reason);
    else if (!cls.partition_ok) job.finding(cls.reason);
}

// ---------------------------------------------------------------- infinity

ojson infinity_point_json(const IndeterminationPoint& p) {
    ojson j;
    j["direction"] = cplx_array(p.direction);
    j["real"] = p.real;
    j["h3_residual"] = p.h3_residual;
    j["v_inf_norm"] = p.v_inf_norm;
    j["fallback_norm"] = p.fallback_norm;
    return j;
}

ojson infinity_json(const InfinityModel& m) {
    ojson j;
    j["H3"] = m.H3.to_string();
    j["L"] = m.L.to_string();
    j["V_inf"] = vec3_polys(m.v_inf);
    j["fallback_row"] = m.fallback_row + 1;
    j["fallback_factor"] = m.fallback_factor.to_string();
    j["fallback_V"] = vec3_polys(m.fallback_v);
    ojson lp = ojson::array(), ind = ojson::array();
    for (const auto& p : m.line_points) lp.push_back(infinity_point_json(p));
    for (const auto& p : m.indetermination) ind.push_back(infinity_point_json(p));
    j["points_on_L"] = lp;
    j["indetermination"] = ind;
    j["flags"] = m.flags;
    return j;
}

ojson sweep_json(const SelfReciprocityReport& s) {
    ojson j;
    j["samples"] = s.samples;
    j["failures"] = s.failures;
    j["max_self_reciprocity"] = s.max_self_reciprocity;
    j["max_axis_deviation"] = s.max_axis_deviation;
    j["max_v_inf_dot_p"] = s.max_vp;
    j["max_quadric_membership"] = s.max_quadric;
    j["fallback_used"] = s.fallback_used;
    j["translations_checked"] = s.translations_checked;
    j["max_translation_residual"] = s.max_translation_residual;
    j["indetermination_checked"] = s.indetermination_checked;
    j["max_indetermination_self_reciprocity"] = s.max_indetermination_self_reciprocity;
    return j;
}

void infinity_section(Job& job, ojson& out) {
    const auto* pl = job.pipeline();
    if (!pl) return;
    auto m = infinity_model(*pl, job.cfg.tol);
    auto sw = self_reciprocity_sweep(*pl, m, job.cfg.samples, job.cfg.seed, job.cfg.tol);
    out["model"] = infinity_json(m);
    out["sweep"] = sweep_json(sw);
    for (const auto& f : m.flags) job.finding("infinity: " + f);
    if (sw.failures) job.finding("infinity: " + std::to_string(sw.failures) + " self-reciprocity violations");
}

// ---------------------------------------------------------------- verify

ojson exceptional_json(const ExceptionalReport& r) {
    ojson j;
    ojson pts = ojson::array();
    for (const auto& p : r.points) {
        ojson e;
        e["line"] = p.line;
        e["twist"] = cplx_array(p.twist);
        e["real"] = p.real;
        e["spread"] = p.spread;
        e["membership"] = p.membership;
        e["self_reciprocity"] = p.self_reciprocity;
        e["omega_norm"] = p.omega_norm;
        e["axis_residual"] = p.axis_residual;
        e["cramer"] = p.cramer;
        pts.push_back(e);
    }
    j["points"] = pts;
    j["min_pairwise_distance"] = r.min_pairwise_distance;
    return j;
}

void verify_section(Job& job, ojson& out) {
    const double tol = job.cfg.tol;
    const auto& s = job.surface();
    job.check("surface degree 3", s.degree == 3, s.degree, 3);
    if (s.degree != 3) return;
    try {
        infinity_cubic(s);
        job.check("H3 graded part agrees with both permutation sums", true);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::consistency) throw;
        job.check("H3 graded part agrees with both permutation sums", false);
    }
    auto sm = smoothness_probe(s, std::max<std::size_t>(job.cfg.samples, 1), job.cfg.seed, 1e-9);
    out["smoothness"] = smoothness_json(sm);
    job.check("smoothness probe: rank 5 at every sample", !sm.possibly_singular && sm.rank_five == sm.samples,
              double(sm.rank_five), double(sm.samples));

    const auto* pl = job.pipeline();
    if (!pl) return;
    job.check("quadric forms nonzero", pl->quadric.generic);

    auto rt = rec_pos_roundtrip_report(*pl, job.cfg.samples, job.cfg.seed, 1e-9);
    out["roundtrip"] = {{"samples_surface", rt.samples_surface}, {"samples_quadric", rt.samples_quadric},
                        {"max_pos_rec", rt.max_pos_rec},         {"max_pos_rec_abs", rt.max_pos_rec_abs},
                        {"max_rec_pos", rt.max_rec_pos},         {"exact_origin", rt.exact_origin},
                        {"skipped", rt.skipped}};
    job.check("Pos(Rec(P)) = P", rt.max_pos_rec <= tol && rt.samples_surface > 0, rt.max_pos_rec, tol);
    job.check("Rec(Pos(t)) = t", rt.max_rec_pos <= tol && rt.samples_quadric > 0, rt.max_rec_pos, tol);
    job.check("Pos(Rec(0)) = 0 exactly", rt.exact_origin);

    if (pl->param) {
        SingularityParametrization sp(job.pipeline_);
        Rng rng(job.cfg.seed, 62);
        std::size_t made = 0, tries = 0;
        bool zero = true;
        const std::size_t want = std::min<std::size_t>(job.cfg.samples, 50);
        while (made < want && tries++ < 10 * want + 10) {
            auto P = sp.evaluate(rng.rational(50, 7), rng.rational(50, 7));
            if (!P) continue;
            zero = zero && pl->surface.F.evaluate(position_point<Rat>((*P)[0], (*P)[1], (*P)[2])) == 0;
            ++made;
        }
        job.check("parametrized poses satisfy F = 0 exactly", zero && made == want, double(made), double(want));
    } else {
        job.check("quadric parametrization available", false);
    }

    BlowupOptions bo;
    bo.search = search_options(job);
    bo.orbit = orbit_options(job);
    bo.tol = tol;
    bo.infinity_samples = job.cfg.samples;
    auto rep = blowup_report(*pl, bo);
    const auto& lines = rep.search.lines;
    const auto& cls = rep.cls;
    out["lines"] = search_json(rep.search);
    out["classification"] = classification_json(cls);
    out["line_list"] = lines_json(lines, line_tags(lines.size(), cls));
    out["exceptional"] = exceptional_json(rep.exceptional);
    out["infinity"] = infinity_json(rep.infinity);
    out["self_reciprocity_sweep"] = sweep_json(rep.sweep);
    out["product_match"] = rep.product_match;
    out["bundle_max_on_s2"] = rep.bundle_max_on_s2;
    out["bundle_min_off_s2"] = rep.bundle_min_off_s2;
    out["fallback_min_on_s2"] = rep.fallback_min_on_s2;
    out["indetermination_match"] = rep.indetermination_match;
    out["blowup_findings"] = rep.findings;

    job.check("27 lines found", lines.size() == 27, double(lines.size()), 27);
    job.check("line residuals", rep.search.max_residual <= tol, rep.search.max_residual, tol);
    job.check("Plücker identity", rep.search.max_plucker_identity <= tol, rep.search.max_plucker_identity, tol);
    if (lines.size() == 27)
        job.check("incidence row sums all 10",
                  std::all_of(cls.row_sums.begin(), cls.row_sums.end(), [](std::size_t r) { return r == 10; }));
    job.check("S2 found", cls.found);
    if (!cls.found) return;
    job.check("partition 2/5/10/10", cls.partition_ok);
    job.check("S2 skew", cls.s2_skew);
    job.check("S5 lines meet both S2 lines", cls.s5_meet_both);
    job.check("S5 lines mutually skew", cls.s5_mutually_skew);
    job.check("F2 rationalizes", cls.s2_poly.rational);
    job.check("F5 rationalizes", cls.s5_poly.rational);
    if (rep.product_match >= 0)
        job.check("27-line product equals the orbit product", rep.product_match <= 1e-10, rep.product_match, 1e-10);

    const auto& ex = rep.exceptional;
    job.check("five exceptional points", ex.points.size() == 5, double(ex.points.size()), 5);
    job.check("exceptional points distinct", ex.min_pairwise_distance > 1e-6, ex.min_pairwise_distance, 1e-6);
    double spread = 0, mem = 0, self = 0, axis = 0, cramer = 0, omega = 1e300;
    for (const auto& p : ex.points) {
        spread = std::max(spread, p.spread);
        mem = std::max(mem, p.membership);
        self = std::max(self, p.self_reciprocity);
        axis = std::max(axis, p.axis_residual);
        cramer = std::max(cramer, p.cramer);
        omega = std::min(omega, p.omega_norm);
    }
    if (!ex.points.empty()) {
        job.check("twist constant along each S5 line", spread <= tol, spread, tol);
        job.check("exceptional points on Q", mem <= tol, mem, tol);
        job.check("exceptional twists are pure rotations", self <= tol && omega > tol, self, tol);
        job.check("rotation axes meet all six limbs", axis <= tol, axis, tol);
        job.check("Pos undefined at exceptional points", cramer <= 1e-6, cramer, 1e-6);
    }
    job.check("quadratic bundle vanishes on S2", rep.bundle_max_on_s2 <= tol, rep.bundle_max_on_s2, tol);
    job.check("quadratic bundle nonzero off S2", rep.bundle_min_off_s2 > 1e-6, rep.bundle_min_off_s2, 1e-6);
    job.check("cubic fallback covers S2", rep.fallback_min_on_s2 > 1e-6, rep.fallback_min_on_s2, 1e-6);
    job.check("two indetermination points at infinity", rep.infinity.indetermination.size() == 2,
              double(rep.infinity.indetermination.size()), 2);
    if (!rep.infinity.indetermination.empty())
        job.check("indetermination points are the S2 points at infinity", rep.indetermination_match <= 1e-6,
                  rep.indetermination_match, 1e-6);
    job.check("self-reciprocity at infinity", rep.sweep.failures == 0, double(rep.sweep.failures), 0);
}

// ---------------------------------------------------------------- mesh

std::string vtk_grid(const CubicSurface& s, const std::array<double, 6>& box, std::size_t g) {
    CompiledPoly<double> F(s.F);
    std::array<double, 3> lo{box[0], box[2], box[4]}, step;
    for (std::size_t k = 0; k < 3; ++k) step[k] = (box[2 * k + 1] - box[2 * k]) / double(g - 1);
    std::ostringstream o;
    o << "# vtk DataFile Version 3.0\n"
      << "singularity cubic F(x,y,z) sampled on a regular grid\n"
      << "ASCII\nDATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << g << ' ' << g << ' ' << g << '\n'
      << "ORIGIN " << fmt(lo[0]) << ' ' << fmt(lo[1]) << ' ' << fmt(lo[2]) << '\n'
      << "SPACING " << fmt(step[0]) << ' ' << fmt(step[1]) << ' ' << fmt(step[2]) << '\n'
      << "POINT_DATA " << g * g * g << '\n'
      << "SCALARS F double 1\nLOOKUP_TABLE default\n";
    for (std::size_t k = 0; k < g; ++k)
        for (std::size_t j = 0; j < g; ++j)
            for (std::size_t i = 0; i < g; ++i) {
                auto pt = position_point(lo[0] + double(i) * step[0], lo[1] + double(j) * step[1],
                                         lo[2] + double(k) * step[2]);
                o << fmt(F(pt)) << '\n';
            }
    return o.str();
}

/// Parameter interval of p + t d inside the box, if any (slab clipping).
std::optional<std::array<double, 2>> clip(const std::array<double, 3>& p, const std::array<double, 3>& d,
                                          const std::array<double, 6>& box) {
    double t0 = -1e300, t1 = 1e300;
    for (std::size_t k = 0; k < 3; ++k) {
        if (d[k] == 0) {
            if (p[k] < box[2 * k] || p[k] > box[2 * k + 1]) return std::nullopt;
            continue;
        }
        double a = (box[2 * k] - p[k]) / d[k], b = (box[2 * k + 1] - p[k]) / d[k];
        t0 = std::max(t0, std::min(a, b));
        t1 = std::min(t1, std::max(a, b));
    }
    if (t0 > t1) return std::nullopt;
    return std::array<double, 2>{t0, t1};
}

void mesh_section(Job& job, ojson& out) {
    const auto& b = job.cfg.box;
    for (std::size_t k = 0; k < 3; ++k)
        if (!(b[2 * k] < b[2 * k + 1])) fail(ErrorKind::input, "empty box: each min must be below its max");
    if (job.cfg.grid < 2) fail(ErrorKind::input, "grid must be at least 2");
    if (job.cfg.grid > 512) fail(ErrorKind::input, "grid above 512 per axis");
    const auto& s = job.surface();
    job.artifact("surface_grid.vtk", vtk_grid(s, b, job.cfg.grid));
    out["grid"] = job.cfg.grid;
    out["box"] = b;

    ojson lj;
    lj["schema"] = "gsing-lines/1";
    ojson arr = ojson::array();
    if (s.degree == 3) {
        auto res = find_lines(s.F, search_options(job));
        auto cls = classify(res.lines, incidence(res.lines), orbit_options(job));
        auto tags = line_tags(res.lines.size(), cls);
        for (std::size_t i = 0; i < res.lines.size(); ++i) {
            const auto& l = res.lines[i];
            ojson e;
            e["index"] = i;
            e["class"] = tags[i];
            e["real"] = l.real;
            e["plucker"] = cplx_array(l.plucker);
            if (l.real && !l.at_infinity()) {
                auto p = l.point();
                auto d = l.direction();
                std::array<double, 3> pr{p[0].real(), p[1].real(), p[2].real()}, dr{d[0].real(), d[1].real(), d[2].real()};
                e["point"] = pr;
                e["direction"] = dr;
                if (auto seg = clip(pr, dr, b)) {
                    std::array<double, 3> a, c;
                    for (std::size_t k = 0; k < 3; ++k) {
                        a[k] = pr[k] + (*seg)[0] * dr[k];
                        c[k] = pr[k] + (*seg)[1] * dr[k];
                    }
                    e["segment"] = ojson::array({a, c});
                } else {
                    e["segment"] = nullptr;
                }
            }
            arr.push_back(e);
        }
        out["lines_found"] = res.lines.size();
        out["classified"] = cls.found;
        if (res.lines.size() != 27) job.finding("found " + std::to_string(res.lines.size()) + " lines, expected 27");
        if (!cls.found) job.finding(cls.reason);
    } else {
        job.finding("surface degree " + std::to_string(s.degree) + " < 3: no lines exported");
    }
    lj["lines"] = arr;
    job.artifact("lines.json", lj.dump(2) + "\n");
}

using Section = std::function<void(Job&, ojson&)>;

Section section_for(const std::string& command) {
    if (command == "surface") return surface_section;
    if (command == "twist") return twist_section;
    if (command == "quadric") return quadric_section;
    if (command == "param") return param_section;
    if (command == "lines") return lines_section;
    if (command == "infinity") return infinity_section;
    if (command == "verify") return verify_section;
    if (command == "mesh") return mesh_section;
    fail(ErrorKind::input, "unknown command '" + command + "'");
}

}  // namespace

JobResult run_job(const PlatformSpec& spec, const JobConfig& config) {
    Job job(spec, config);
    ojson& r = job.report;
    r["schema"] = "gsing-report/1";
    r["command"] = config.command;
    r["config"] = config_json(config);
    ojson in;
    in["hash"] = platform_hash(spec);
    in["platform"] = nlohmann::ordered_json::parse(dump_platform_spec(spec));
    in["frame"] = "normalized: A1 and b1 moved to the origin";
    in["base_offset"] = rat_array(spec.arch.base_offset.v);
    in["platform_offset"] = rat_array(spec.arch.platform_offset.v);
    r["input"] = in;

    JobResult res;
    ojson body = ojson::object();
    try {
        section_for(config.command)(job, body);
        res.status = job.findings.empty() ? 0 : 1;
    } catch (const Error& e) {
        switch (e.kind()) {
            case ErrorKind::input: res.status = 2; break;
            case ErrorKind::consistency: res.status = 3; break;
            default:
                res.status = 1;
                job.finding(e.what());
                break;
        }
        r["error"] = {{"kind", res.status == 2 ? "input" : res.status == 3 ? "consistency" : "degenerate"},
                      {"message", e.what()}};
    } catch (const std::exception& e) {
        res.status = 3;
        r["error"] = {{"kind", "internal"}, {"message", e.what()}};
    }
    r["result"] = body;
    if (!job.checks.empty()) {
        std::size_t passed = 0;
        for (const auto& c : job.checks) passed += c["pass"].get<bool>();
        r["checks"] = job.checks;
        r["summary"] = {{"checks", job.checks.size()}, {"passed", passed}};
    }
    r["findings"] = job.findings;
    r["artifacts"] = job.artifacts;
    r["status"] = res.status == 0 ? "ok" : res.status == 1 ? "findings" : res.status == 2 ? "input-error" : "internal-error";
    res.report = r.dump(2) + "\n";
    return res;
}

}  // namespace gsing
