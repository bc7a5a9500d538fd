#include "gb/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gb/errors.hpp"

namespace gb {

namespace {

Json vec_to_json(const Vec2& v) { return Json::array({v.x, v.y}); }
Vec2 vec_from_json(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

Json mat_to_json(const Mat2& m) {
    return Json::array({Json::array({m.a11, m.a12}), Json::array({m.a21, m.a22})});
}

Mat2 mat_from_json(const Json& j) {
    return {j.at(0).at(0).get<double>(), j.at(0).at(1).get<double>(), j.at(1).at(0).get<double>(),
            j.at(1).at(1).get<double>()};
}

Json params_to_json(const Params& p) {
    Json j;
    j["epsilon"] = p.epsilon;
    j["tau"] = p.tau;
    j["lambda"] = p.lambda;
    j["sin_theta"] = p.sin_theta;
    j["theta"] = p.theta();
    j["L"] = p.L;
    j["l"] = p.l;
    j["mc_samples"] = p.mc_samples;
    j["seed"] = p.seed;
    j["unclipped_cores"] = p.unclipped_cores;
    j["strict_loops"] = p.strict_loops;
    Json lat;
    lat["phi"] = p.lattice.phi;
    lat["eta"] = p.lattice.eta;
    lat["b1"] = vec_to_json(p.lattice.b1);
    lat["b2"] = vec_to_json(p.lattice.b2);
    lat["degenerate"] = p.lattice.degenerate;
    lat["transforms"] = p.lattice.transforms;
    j["lattice"] = lat;
    return j;
}

Params params_from_json(const Json& j) {
    Params p;
    p.epsilon = j.at("epsilon").get<double>();
    p.tau = j.at("tau").get<double>();
    p.lambda = j.at("lambda").get<double>();
    p.sin_theta = j.at("sin_theta").get<double>();
    p.L = j.at("L").get<double>();
    p.l = j.at("l").get<double>();
    p.mc_samples = j.at("mc_samples").get<int>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.unclipped_cores = j.at("unclipped_cores").get<bool>();
    p.strict_loops = j.at("strict_loops").get<bool>();
    const Json& lat = j.at("lattice");
    p.lattice.phi = lat.at("phi").get<double>();
    p.lattice.eta = lat.at("eta").get<double>();
    p.lattice.b1 = vec_from_json(lat.at("b1"));
    p.lattice.b2 = vec_from_json(lat.at("b2"));
    p.lattice.degenerate = lat.at("degenerate").get<bool>();
    p.lattice.transforms = lat.at("transforms").get<std::vector<std::string>>();
    return p;
}

}  // namespace

Json field_to_json(const StrainField& f) {
    Json j;
    j["params"] = params_to_json(f.params);
    Json layout;
    layout["r_bar"] = Json::array({f.layout.r_bar[0], f.layout.r_bar[1]});
    layout["n_bar"] = Json::array({f.layout.n_bar[0], f.layout.n_bar[1]});
    layout["r0"] = Json::array({f.layout.r0[0], f.layout.r0[1]});
    layout["N"] = Json::array({f.layout.N[0], f.layout.N[1]});
    layout["single_strip"] = f.layout.single_strip;
    j["layout"] = layout;

    Json cells = Json::array();
    for (const Cell& c : f.cells) {
        Json jc;
        Json region;
        region["kind"] = region_kind_name(c.region.kind);
        region["strip"] = c.region.strip;
        region["square"] = c.region.square;
        region["annulus"] = c.region.annulus;
        jc["region"] = region;
        Json verts = Json::array();
        for (const Vec2& v : c.polygon.vertices()) verts.push_back(vec_to_json(v));
        jc["vertices"] = verts;
        if (c.affine) {
            Json aff;
            aff["A"] = mat_to_json(c.affine->A);
            aff["c"] = vec_to_json(c.affine->c);
            jc["affine"] = aff;
        } else {
            jc["affine"] = nullptr;
        }
        jc["strain"] = mat_to_json(c.strain);
        jc["unclipped_area"] = c.unclipped_area;
        cells.push_back(jc);
    }
    j["cells"] = cells;

    Json cores = Json::array();
    for (const CoreSite& c : f.cores) {
        Json jc;
        jc["center"] = vec_to_json(c.center);
        jc["half_side"] = c.half_side;
        jc["strip"] = c.strip;
        jc["square"] = c.square;
        cores.push_back(jc);
    }
    j["cores"] = cores;
    return j;
}

StrainField field_from_json(const Json& j) {
    StrainField f;
    f.params = params_from_json(j.at("params"));
    const Json& layout = j.at("layout");
    for (int i = 0; i < 2; ++i) {
        f.layout.r_bar[i] = layout.at("r_bar").at(i).get<double>();
        f.layout.n_bar[i] = layout.at("n_bar").at(i).get<int>();
        f.layout.r0[i] = layout.at("r0").at(i).get<double>();
        f.layout.N[i] = layout.at("N").at(i).get<long>();
    }
    f.layout.single_strip = layout.at("single_strip").get<bool>();

    for (const Json& jc : j.at("cells")) {
        Cell c;
        const Json& region = jc.at("region");
        const auto kind = region_kind_from_name(region.at("kind").get<std::string>());
        if (!kind) throw io_error("field_from_json: unknown region kind");
        c.region.kind = *kind;
        c.region.strip = region.at("strip").get<int>();
        c.region.square = region.at("square").get<long>();
        c.region.annulus = region.at("annulus").get<int>();
        std::vector<Vec2> verts;
        for (const Json& jv : jc.at("vertices")) verts.push_back(vec_from_json(jv));
        c.polygon = Polygon(std::move(verts));
        if (!jc.at("affine").is_null()) {
            AffineMap aff;
            aff.A = mat_from_json(jc.at("affine").at("A"));
            aff.c = vec_from_json(jc.at("affine").at("c"));
            c.affine = aff;
        }
        c.strain = mat_from_json(jc.at("strain"));
        c.unclipped_area = jc.at("unclipped_area").get<double>();
        f.cells.push_back(std::move(c));
    }
    for (const Json& jc : j.at("cores")) {
        CoreSite c;
        c.center = vec_from_json(jc.at("center"));
        c.half_side = jc.at("half_side").get<double>();
        c.strip = jc.at("strip").get<int>();
        c.square = jc.at("square").get<long>();
        f.cores.push_back(c);
    }
    return f;
}

Json admissibility_to_json(const AdmissibilityReport& r) {
    Json j;
    j["h1_ok"] = r.h1_ok;
    j["h2_ok"] = r.h2_ok;
    j["h3_ok"] = r.h3_ok;
    j["continuity_ok"] = r.continuity_ok;
    j["all_ok"] = r.all_ok();
    j["max_offcore_jump"] = r.max_offcore_jump;
    j["max_strain_norm"] = r.max_strain_norm;
    j["deformation_mismatch"] = r.deformation_mismatch;
    Json cores = Json::array();
    for (const CoreCirculation& cc : r.h2.cores) {
        Json jc;
        jc["core"] = cc.core_index;
        jc["skipped"] = cc.skipped;
        jc["value"] = vec_to_json(cc.value);
        jc["coords"] = Json::array({cc.m, cc.n});
        jc["ok"] = cc.ok;
        cores.push_back(jc);
    }
    j["core_circulations"] = cores;
    Json loops = Json::array();
    for (const LoopCheck& lc : r.h2.loops) {
        Json jl;
        jl["value"] = vec_to_json(lc.value);
        jl["coords_found"] = lc.coords_found;
        jl["coords"] = Json::array({lc.m, lc.n});
        jl["expected"] = Json::array({lc.expected_m, lc.expected_n});
        jl["enclosed_cores"] = lc.enclosed_cores;
        jl["ok"] = lc.ok;
        loops.push_back(jl);
    }
    j["random_loops"] = loops;
    j["violations"] = r.violations;
    return j;
}

Json energy_to_json(const EnergyReport& r) {
    Json j;
    j["elastic"] = r.elastic;
    j["core"] = r.core;
    j["total"] = r.total;
    j["E0"] = r.constants.E0;
    j["E1"] = r.constants.E1;
    j["A"] = r.constants.A;
    if (r.constants.A_RS) {
        j["A_RS"] = *r.constants.A_RS;
    } else {
        j["A_RS"] = nullptr;
    }
    j["bound_value"] = r.bound_value;
    j["ratio"] = r.ratio;
    return j;
}

Json sweep_to_json(const SweepResult& s) {
    Json j;
    j["slope"] = s.slope;
    j["intercept"] = s.intercept;
    j["r2"] = s.r2;
    Json skipped = Json::array();
    for (std::size_t i = 0; i < s.skipped_sin_thetas.size(); ++i) {
        Json js;
        js["sin_theta"] = s.skipped_sin_thetas[i];
        js["reason"] = s.skip_reasons[i];
        skipped.push_back(js);
    }
    j["skipped"] = skipped;
    Json rows = Json::array();
    for (const SweepRow& r : s.rows) {
        Json jr;
        jr["theta"] = r.theta;
        jr["sin_theta"] = r.sin_theta;
        jr["elastic"] = r.elastic;
        jr["core"] = r.core;
        jr["total"] = r.total;
        jr["normalized"] = r.normalized;
        jr["neg_log2_sin"] = r.neg_log2_sin;
        rows.push_back(jr);
    }
    j["rows"] = rows;
    return j;
}

std::string sweep_to_csv(const SweepResult& s) {
    std::string out = "theta,sin_theta,elastic,core,total,normalized,neg_log2_sin\n";
    char buf[256];
    for (const SweepRow& r : s.rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.theta,
                      r.sin_theta, r.elastic, r.core, r.total, r.normalized, r.neg_log2_sin);
        out += buf;
    }
    return out;
}

Config config_from_json(const Json& j) {
    Config cfg;
    Params& p = cfg.params;
    try {
        double unit = 1.0;
        if (j.contains("angle_unit")) {
            const std::string u = j.at("angle_unit").get<std::string>();
            if (u == "degrees") {
                unit = M_PI / 180.0;
            } else if (u != "radians") {
                throw validation_error("config: angle_unit must be \"radians\" or \"degrees\"");
            }
        }
        if (j.contains("epsilon")) p.epsilon = j.at("epsilon").get<double>();
        if (j.contains("tau")) p.tau = j.at("tau").get<double>();
        if (j.contains("lambda")) p.lambda = j.at("lambda").get<double>();
        if (j.contains("L")) p.L = j.at("L").get<double>();
        if (j.contains("l")) p.l = j.at("l").get<double>();
        if (j.contains("mc_samples")) p.mc_samples = j.at("mc_samples").get<int>();
        if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("unclipped_cores")) p.unclipped_cores = j.at("unclipped_cores").get<bool>();
        if (j.contains("strict_loops")) p.strict_loops = j.at("strict_loops").get<bool>();

        if (j.contains("sin_theta") && j.contains("theta")) {
            throw validation_error("config: give either theta or sin_theta, not both");
        }
        if (j.contains("sin_theta")) {
            p.sin_theta = j.at("sin_theta").get<double>();
        } else if (j.contains("theta")) {
            p.sin_theta = std::sin(j.at("theta").get<double>() * unit);
        }

        // Default lattice: the generators of the worked deformation figure.
        double phi = -M_PI / 3.0;
        double eta = M_PI / 6.0;
        if (j.contains("phi")) phi = j.at("phi").get<double>() * unit;
        if (j.contains("eta")) eta = j.at("eta").get<double>() * unit;
        p.lattice = make_lattice(phi, eta);

        if (j.contains("random_loops")) cfg.random_loops = j.at("random_loops").get<int>();

        if (j.contains("sweep")) {
            const Json& sw = j.at("sweep");
            if (sw.is_array()) {
                for (const Json& v : sw) cfg.sweep_sin_thetas.push_back(v.get<double>());
            } else if (sw.is_object()) {
                const double from = sw.at("from").get<double>();
                const double to = sw.at("to").get<double>();
                const int count = sw.at("count").get<int>();
                if (count < 2) throw validation_error("config: sweep.count must be at least 2");
                for (int i = 0; i < count; ++i) {
                    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
                    cfg.sweep_sin_thetas.push_back(from * std::pow(to / from, t));
                }
            } else {
                throw validation_error("config: sweep must be a value list or a geometric range");
            }
        }

        if (j.contains("render")) {
            const Json& r = j.at("render");
            if (r.contains("stride")) cfg.render.stride = r.at("stride").get<int>();
            if (r.contains("stroke_width")) cfg.render.stroke_width = r.at("stroke_width").get<double>();
            if (r.contains("point_radius")) cfg.render.point_radius = r.at("point_radius").get<double>();
            if (r.contains("draw_outlines")) cfg.render.draw_outlines = r.at("draw_outlines").get<bool>();
        }
        if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
        if (j.contains("csv")) cfg.csv = j.at("csv").get<std::string>();
        if (j.contains("svg")) cfg.svg = j.at("svg").get<std::string>();
    } catch (const Json::exception& e) {
        throw validation_error(std::string("config: ") + e.what());
    }
    return cfg;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write " + path);
    out << content;
    if (!out) throw io_error("failed writing " + path);
}

}  // namespace gb
