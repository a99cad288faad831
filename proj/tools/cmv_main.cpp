#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cmv/probe.hpp"
#include "cmv/scene.hpp"

using nlohmann::json;
using namespace cmv;

namespace {

std::string read_input(const std::string& path)
{
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw Error(errc::invalid_input, "cannot open input file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const json& doc)
{
    std::string text = doc.dump(2) + "\n";
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error(errc::invalid_input, "cannot open output file: " + path);
    f << text;
}

SceneDocument load_scene(const std::string& in_path)
{
    json j;
    try {
        j = json::parse(read_input(in_path));
    } catch (const json::exception& e) {
        throw Error(errc::parse_error, e.what(), "$");
    }
    return scene_from_json(j);
}

CurveKind parse_kind(const std::string& s)
{
    if (s == "conic") return CurveKind::Conic;
    if (s == "plane3") return CurveKind::Plane3;
    if (s == "twisted") return CurveKind::Twisted;
    throw Error(errc::invalid_input, "kind must be conic|plane3|twisted");
}

template <class K>
json plane_curve_to_json(const PlaneCurveParam<K>& pc)
{
    json h = json::array(), a = json::array();
    for (const K& x : pc.h.v) {
        if constexpr (FieldTraits<K>::is_exact)
            h.push_back(x.str());
        else
            h.push_back(x);
    }
    for (const K& x : pc.alpha.v) {
        if constexpr (FieldTraits<K>::is_exact)
            a.push_back(x.str());
        else
            a.push_back(x);
    }
    return {{"degree", pc.degree}, {"h", h}, {"alpha", a}};
}

template <class K>
int run_check_two_view(const Scene<K>& s, double tol)
{
    if (s.cameras.size() < 2 || !s.observations || s.observations->size() < 2)
        throw Error(errc::invalid_input, "need two cameras with observations");
    Arrangement<K> arr = s.arrangement();
    auto v = two_view_check(arr.cameras[0], arr.cameras[1], (*s.observations)[0],
                            (*s.observations)[1], tol);
    json out;
    out["schema_version"] = 1;
    out["verdict"] = v.ok;
    out["witness"] = nullptr;
    json diags = json::array();
    diags.push_back(std::string("standard solution case ") + std::to_string(v.case_index));
    if (v.view1_degenerate) diags.push_back("view 0: double line or two lines through the epipole");
    if (v.view2_degenerate) diags.push_back("view 1: double line or two lines through the epipole");
    out["diagnostics"] = diags;
    write_output("", out);
    return v.ok ? 0 : 1;
}

template <class K>
int run_check_arrangement(const Scene<K>& s, double tol)
{
    if (!s.observations) throw Error(errc::invalid_input, "scene has no observations");
    Arrangement<K> arr = s.arrangement();
    std::vector<ProjVec<K>> centers;
    for (const auto& c : arr.cameras) centers.push_back(c.center);
    SimplicityReport simple = arrangement_simple(centers);
    NViewVerdict<K> v = n_view_check(arr, *s.observations, tol);
    json out;
    out["schema_version"] = 1;
    out["verdict"] = v.verdict;
    out["witness"] = v.witness ? plane_curve_to_json(*v.witness) : json(nullptr);
    json diags = json::array();
    for (const auto& d : v.diagnostics) diags.push_back(d);
    out["diagnostics"] = diags;
    json viol = json::array();
    for (const auto& violation : simple.violations) {
        const char* kind = violation.kind == ViolationKind::EqualCenters ? "equal-centers"
                           : violation.kind == ViolationKind::ThreeCollinear ? "three-collinear"
                                                                             : "eight-on-conic";
        viol.push_back({{"kind", kind}, {"indices", violation.indices}});
    }
    out["simplicity"] = {{"verdict", simple.verdict}, {"violations", viol}};
    write_output("", out);
    return v.verdict ? 0 : 1;
}

template <class K>
int run_reconstruct(const Scene<K>& s, double tol)
{
    if (s.cameras.size() < 2 || !s.observations || s.observations->size() < 2)
        throw Error(errc::invalid_input, "need two cameras with observations");
    Arrangement<K> arr = s.arrangement();
    json out;
    out["schema_version"] = 1;
    try {
        auto rec = reconstruct_two_view(arr.cameras[0], arr.cameras[1], (*s.observations)[0],
                                        (*s.observations)[1], tol);
        json cands = json::array();
        for (const auto& c : rec.candidates) cands.push_back(plane_curve_to_json(c));
        for (const auto& c : rec.float_candidates) cands.push_back(plane_curve_to_json(c));
        out["candidates"] = cands;
        out["multiplicity_flag"] = rec.multiplicity;
        out["float_fallback"] = rec.used_float_fallback;
        write_output("", out);
        return 0;
    } catch (const Error& e) {
        if (e.code() != errc::no_planar_solution) throw;
        out["candidates"] = json::array();
        out["multiplicity_flag"] = false;
        out["diagnostics"] = json::array({std::string(e.what())});
        write_output("", out);
        return 1;
    }
}

int run_triangulate(const Scene<double>& s, int starts, std::uint64_t seed, bool random_weights,
                    bool serial)
{
    if (!s.observations) throw Error(errc::invalid_input, "scene has no observations");
    Arrangement<double> arr = s.arrangement();
    ModelKind kind = std::holds_alternative<TwistedCubicParam<double>>(s.curve)
                         ? ModelKind::TwistedCubic
                         : ModelKind::PlaneCurve;
    Objective obj = make_objective(arr, *s.observations, kind);
    if (random_weights) {
        Rng wr(seed ^ 0x5eedULL);
        for (double& w : obj.weights) w = 0.5 + wr.uniform01();
    }
    MultistartReport rep = multistart(obj, starts, seed, OptOptions{}, !serial);
    json pts = json::array();
    for (const auto& p : rep.points) {
        pts.push_back({{"params", p.params},
                       {"objective", p.objective},
                       {"grad_norm", p.grad_norm},
                       {"hits", p.hits}});
    }
    json out = {{"schema_version", 1},
                {"points", pts},
                {"starts", rep.starts},
                {"converged", rep.converged},
                {"seed", rep.seed}};
    write_output("", out);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"conic and twisted-cubic multiview geometry toolkit"};
    app.require_subcommand(1);

    std::string in_path, out_path;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    std::string field = "rational";
    int cameras = 2;
    std::string kind = "conic";
    double noise = 0.0;
    int starts = 100;
    bool random_weights = false;
    bool serial = false;

    auto* gen = app.add_subcommand("generate", "emit a random rational scene");
    gen->add_option("--seed", seed);
    gen->add_option("--cameras", cameras);
    gen->add_option("--kind", kind);
    gen->add_option("--field", field);
    gen->add_option("--out", out_path);

    auto* proj = app.add_subcommand("project", "append observations to a scene");
    proj->add_option("--in", in_path);
    proj->add_option("--out", out_path);
    proj->add_option("--noise", noise);
    proj->add_option("--seed", seed);

    auto* c2v = app.add_subcommand("check-two-view", "two-view ideal membership verdict");
    c2v->add_option("--in", in_path);
    c2v->add_option("--tol", tol);

    auto* carr = app.add_subcommand("check-arrangement", "n-view membership verdict");
    carr->add_option("--in", in_path);
    carr->add_option("--tol", tol);

    auto* rec = app.add_subcommand("reconstruct", "two-view conic reconstruction");
    rec->add_option("--in", in_path);
    rec->add_option("--tol", tol);

    auto* tri = app.add_subcommand("triangulate", "multistart nearest-point probe");
    tri->add_option("--in", in_path);
    tri->add_option("--starts", starts);
    tri->add_option("--seed", seed);
    tri->add_flag("--random-weights", random_weights);
    tri->add_flag("--serial", serial);

    auto* dim = app.add_subcommand("dim-probe", "numerical Jacobian rank of the joint projection");
    dim->add_option("--kind", kind);
    dim->add_option("--cameras", cameras);
    dim->add_option("--seed", seed);

    auto* fib = app.add_subcommand("tw-fiber", "reparametrization fiber of a twisted cubic");
    fib->add_option("--in", in_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            Scene<Rat> s = generate_scene(seed, cameras, parse_kind(kind));
            SceneDocument doc;
            if (field == "f64") {
                doc.field = FieldMode::F64;
                doc.f64 = to_f64(s);
            } else if (field == "rational") {
                doc.field = FieldMode::Rational;
                doc.rational = s;
            } else {
                throw Error(errc::invalid_input, "field must be rational|f64");
            }
            write_output(out_path, scene_to_json(doc));
            return 0;
        }
        if (proj->parsed()) {
            SceneDocument doc = load_scene(in_path);
            if (noise > 0.0 && doc.field == FieldMode::Rational) {
                doc.field = FieldMode::F64;
                doc.f64 = to_f64(*doc.rational);
                doc.rational.reset();
            }
            if (doc.field == FieldMode::Rational) {
                attach_observations(*doc.rational);
            } else {
                attach_observations(*doc.f64);
                if (noise > 0.0) apply_noise(*doc.f64, noise, seed);
            }
            write_output(out_path, scene_to_json(doc));
            return 0;
        }
        if (c2v->parsed()) {
            SceneDocument doc = load_scene(in_path);
            return doc.field == FieldMode::Rational ? run_check_two_view(*doc.rational, tol)
                                                    : run_check_two_view(*doc.f64, tol);
        }
        if (carr->parsed()) {
            SceneDocument doc = load_scene(in_path);
            return doc.field == FieldMode::Rational ? run_check_arrangement(*doc.rational, tol)
                                                    : run_check_arrangement(*doc.f64, tol);
        }
        if (rec->parsed()) {
            SceneDocument doc = load_scene(in_path);
            return doc.field == FieldMode::Rational ? run_reconstruct(*doc.rational, tol)
                                                    : run_reconstruct(*doc.f64, tol);
        }
        if (tri->parsed()) {
            SceneDocument doc = load_scene(in_path);
            Scene<double> s = doc.field == FieldMode::Rational ? to_f64(*doc.rational) : *doc.f64;
            return run_triangulate(s, starts, seed, random_weights, serial);
        }
        if (dim->parsed()) {
            Scene<Rat> s = generate_scene(seed, cameras, parse_kind(kind));
            Scene<double> sf = to_f64(s);
            Arrangement<double> arr = sf.arrangement();
            ModelKind mk = kind == "twisted" ? ModelKind::TwistedCubic : ModelKind::PlaneCurve;
            int degree = kind == "plane3" ? 3 : kind == "twisted" ? 3 : 2;
            DimProbeResult r = dim_probe(arr, mk, degree, seed + 1);
            json out = {{"schema_version", 1},
                        {"kind", kind},
                        {"cameras", cameras},
                        {"rank", r.rank},
                        {"expected", r.expected},
                        {"gap", std::isinf(r.gap) ? json(nullptr) : json(r.gap)},
                        {"singular_values", r.singular_values}};
            write_output(out_path, out);
            return r.rank == r.expected ? 0 : 1;
        }
        if (fib->parsed()) {
            SceneDocument doc = load_scene(in_path);
            Scene<double> s = doc.field == FieldMode::Rational ? to_f64(*doc.rational) : *doc.f64;
            if (!std::holds_alternative<TwistedCubicParam<double>>(s.curve))
                throw Error(errc::invalid_input, "tw-fiber needs a twisted-cubic scene", "$.curve.kind");
            auto t = std::get<TwistedCubicParam<double>>(s.curve);
            TwFiberResult<double> fr = tw_fiber(t);
            json sols = json::array();
            for (const auto& a : fr.solutions)
                sols.push_back({a(0, 0), a(0, 1), a(1, 0), a(1, 1)});
            json out = {{"schema_version", 1},
                        {"solutions", sols},
                        {"generic", fr.generic},
                        {"diagnostic", fr.diagnostic}};
            write_output(out_path, out);
            return 0;
        }
    } catch (const Error& e) {
        json out = {{"schema_version", 1},
                    {"error",
                     {{"code", std::string(to_string(e.code()))},
                      {"message", e.what()},
                      {"location", e.location()}}}};
        std::cout << out.dump(2) << "\n";
        return 2;
    } catch (const std::exception& e) {
        json out = {{"schema_version", 1},
                    {"error", {{"code", "invalid-input"}, {"message", e.what()}, {"location", ""}}}};
        std::cout << out.dump(2) << "\n";
        return 2;
    }
    return 2;
}
