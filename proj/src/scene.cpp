#include "cmv/scene.hpp"

#include "cmv/rng.hpp"

namespace cmv {

namespace {

template <class K>
nlohmann::json scalar_to_json(const K& x);

template <>
nlohmann::json scalar_to_json<Rat>(const Rat& x)
{
    return x.str();
}
template <>
nlohmann::json scalar_to_json<double>(const double& x)
{
    return x;
}

template <class K>
K scalar_from_json(const nlohmann::json& j, const std::string& loc);

template <>
Rat scalar_from_json<Rat>(const nlohmann::json& j, const std::string& loc)
{
    if (j.is_string()) return Rat::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long>());
    throw Error(errc::invalid_input, "expected rational \"p/q\" string", loc);
}
template <>
double scalar_from_json<double>(const nlohmann::json& j, const std::string& loc)
{
    if (j.is_number()) return j.get<double>();
    throw Error(errc::invalid_input, "expected a number", loc);
}

template <class K>
nlohmann::json vec_to_json(const ProjVec<K>& v)
{
    nlohmann::json a = nlohmann::json::array();
    for (const K& x : v.v) a.push_back(scalar_to_json<K>(x));
    return a;
}

template <class K>
ProjVec<K> vec_from_json(const nlohmann::json& j, const std::string& loc, int expect = -1)
{
    if (!j.is_array()) throw Error(errc::invalid_input, "expected an array", loc);
    if (expect >= 0 && static_cast<int>(j.size()) != expect)
        throw Error(errc::invalid_input,
                    "expected " + std::to_string(expect) + " entries, got " + std::to_string(j.size()),
                    loc);
    ProjVec<K> v;
    for (size_t i = 0; i < j.size(); ++i)
        v.v.push_back(scalar_from_json<K>(j[i], loc + "[" + std::to_string(i) + "]"));
    return v;
}

std::string order_tag(int degree, char var0)
{
    std::string last = var0 == 'L' ? "5" : "2";
    (void)degree;
    return std::string("grlex-") + var0 + "0.." + var0 + last;
}

template <class K>
nlohmann::json scene_to_json_t(const Scene<K>& s, FieldMode mode)
{
    nlohmann::json j;
    j["schema_version"] = 1;
    j["field"] = field_name(mode);
    nlohmann::json cams = nlohmann::json::array();
    for (const auto& m : s.cameras) {
        nlohmann::json flat = nlohmann::json::array();
        for (int i = 0; i < 3; ++i)
            for (int c = 0; c < 4; ++c) flat.push_back(scalar_to_json<K>(m(i, c)));
        cams.push_back({{"matrix", flat}});
    }
    j["cameras"] = cams;
    nlohmann::json curve;
    if (std::holds_alternative<PlaneCurveParam<K>>(s.curve)) {
        const auto& pc = std::get<PlaneCurveParam<K>>(s.curve);
        curve["kind"] = pc.degree == 2 ? "conic" : "plane3";
        curve["degree"] = pc.degree;
        curve["h"] = vec_to_json(pc.h);
        curve["alpha"] = vec_to_json(pc.alpha);
    } else if (std::holds_alternative<TwistedCubicParam<K>>(s.curve)) {
        curve["kind"] = "twisted";
        curve["m"] = vec_to_json(std::get<TwistedCubicParam<K>>(s.curve).m);
    } else {
        const auto& ch = std::get<ChowForm<K>>(s.curve);
        curve["kind"] = "chow";
        curve["degree"] = ch.degree;
        curve["coeffs"] = vec_to_json(ch.coeffs);
        curve["order"] = order_tag(ch.degree, 'L');
    }
    j["curve"] = curve;
    if (s.observations) {
        nlohmann::json obs;
        obs["degree"] = (*s.observations)[0].degree;
        obs["order"] = order_tag((*s.observations)[0].degree, 'x');
        nlohmann::json views = nlohmann::json::array();
        for (const auto& v : *s.observations) views.push_back(vec_to_json(v.coeffs));
        obs["views"] = views;
        j["observations"] = obs;
    }
    if (s.noise) j["noise"] = {{"sigma", s.noise->sigma}, {"seed", s.noise->seed}};
    return j;
}

template <class K>
Scene<K> scene_from_json_t(const nlohmann::json& j)
{
    Scene<K> s;
    if (!j.contains("cameras") || !j["cameras"].is_array() || j["cameras"].empty())
        throw Error(errc::invalid_input, "scene needs a nonempty camera list", "$.cameras");
    for (size_t i = 0; i < j["cameras"].size(); ++i) {
        const auto& cj = j["cameras"][i];
        std::string loc = "$.cameras[" + std::to_string(i) + "].matrix";
        if (!cj.contains("matrix")) throw Error(errc::invalid_input, "missing matrix", loc);
        ProjVec<K> flat = vec_from_json<K>(cj["matrix"], loc, 12);
        Mat<K> m(3, 4);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 4; ++c) m(r, c) = flat[r * 4 + c];
        s.cameras.push_back(std::move(m));
    }
    if (!j.contains("curve")) throw Error(errc::invalid_input, "missing curve", "$.curve");
    const auto& cj = j["curve"];
    std::string kind = cj.value("kind", "");
    if (kind == "conic" || kind == "plane3") {
        PlaneCurveParam<K> pc;
        pc.degree = cj.value("degree", kind == "conic" ? 2 : 3);
        pc.h = vec_from_json<K>(cj.at("h"), "$.curve.h", 4);
        int alen = static_cast<int>(MonomialOrder::get(pc.degree, 3).size());
        pc.alpha = vec_from_json<K>(cj.at("alpha"), "$.curve.alpha", alen);
        s.curve = pc;
    } else if (kind == "twisted") {
        TwistedCubicParam<K> t;
        t.m = vec_from_json<K>(cj.at("m"), "$.curve.m", 13);
        s.curve = t;
    } else if (kind == "chow") {
        ChowForm<K> ch;
        ch.degree = cj.value("degree", 2);
        int clen = static_cast<int>(MonomialOrder::get(ch.degree, 6).size());
        ch.coeffs = vec_from_json<K>(cj.at("coeffs"), "$.curve.coeffs", clen);
        s.curve = ch;
    } else {
        throw Error(errc::invalid_input, "curve kind must be conic|plane3|twisted|chow", "$.curve.kind");
    }
    if (j.contains("observations")) {
        const auto& oj = j["observations"];
        int d = oj.value("degree", 2);
        int len = static_cast<int>(MonomialOrder::get(d, 3).size());
        std::vector<ImageCurve<K>> views;
        if (!oj.contains("views") || !oj["views"].is_array())
            throw Error(errc::invalid_input, "observations need views", "$.observations.views");
        for (size_t i = 0; i < oj["views"].size(); ++i)
            views.push_back(ImageCurve<K>{
                d, vec_from_json<K>(oj["views"][i], "$.observations.views[" + std::to_string(i) + "]", len)});
        if (views.size() != s.cameras.size())
            throw Error(errc::invalid_input, "one observation per camera required", "$.observations.views");
        s.observations = std::move(views);
    }
    if (j.contains("noise")) {
        NoiseSpec n;
        n.sigma = j["noise"].value("sigma", 0.0);
        n.seed = j["noise"].value("seed", 0ULL);
        s.noise = n;
    }
    return s;
}

}  // namespace

std::string field_name(FieldMode m) { return m == FieldMode::Rational ? "rational" : "f64"; }
std::string kind_name(CurveKind k)
{
    switch (k) {
        case CurveKind::Conic: return "conic";
        case CurveKind::Plane3: return "plane3";
        case CurveKind::Twisted: return "twisted";
        case CurveKind::Chow: return "chow";
    }
    return "?";
}

nlohmann::json scene_to_json(const SceneDocument& doc)
{
    if (doc.field == FieldMode::Rational) return scene_to_json_t(*doc.rational, doc.field);
    return scene_to_json_t(*doc.f64, doc.field);
}

SceneDocument scene_from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw Error(errc::invalid_input, "document must be an object", "$");
    if (j.value("schema_version", 0) != 1)
        throw Error(errc::invalid_input, "unsupported schema_version", "$.schema_version");
    std::string f = j.value("field", "rational");
    SceneDocument doc;
    if (f == "rational") {
        doc.field = FieldMode::Rational;
        doc.rational = scene_from_json_t<Rat>(j);
    } else if (f == "f64") {
        doc.field = FieldMode::F64;
        doc.f64 = scene_from_json_t<double>(j);
    } else {
        throw Error(errc::invalid_input, "field must be rational|f64", "$.field");
    }
    return doc;
}

Scene<double> to_f64(const Scene<Rat>& s)
{
    Scene<double> out;
    for (const auto& m : s.cameras) out.cameras.push_back(convert_mat<double>(m));
    if (std::holds_alternative<PlaneCurveParam<Rat>>(s.curve)) {
        const auto& pc = std::get<PlaneCurveParam<Rat>>(s.curve);
        out.curve = PlaneCurveParam<double>{convert_vec<double>(pc.h), convert_vec<double>(pc.alpha),
                                            pc.degree};
    } else if (std::holds_alternative<TwistedCubicParam<Rat>>(s.curve)) {
        out.curve = TwistedCubicParam<double>{convert_vec<double>(std::get<TwistedCubicParam<Rat>>(s.curve).m)};
    } else {
        const auto& ch = std::get<ChowForm<Rat>>(s.curve);
        out.curve = ChowForm<double>{ch.degree, convert_vec<double>(ch.coeffs)};
    }
    if (s.observations) {
        std::vector<ImageCurve<double>> views;
        for (const auto& v : *s.observations)
            views.push_back({v.degree, convert_vec<double>(v.coeffs)});
        out.observations = std::move(views);
    }
    out.noise = s.noise;
    return out;
}

Scene<Rat> generate_scene(std::uint64_t seed, int n_cameras, CurveKind kind)
{
    if (n_cameras < 1) throw Error(errc::invalid_input, "need at least one camera");
    if (kind == CurveKind::Chow)
        throw Error(errc::invalid_input, "generate emits parametric curves, not raw chow forms");
    Rng rng(seed);
    Scene<Rat> s;

    auto rand_vec = [&](int n) {
        ProjVec<Rat> v;
        v.v.resize(n);
        for (auto& x : v.v) x = rng.rat_int();
        return v;
    };

    std::vector<ProjVec<Rat>> centers;
    for (int i = 0; i < n_cameras; ++i) {
        for (;;) {
            Mat<Rat> m(3, 4);
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 4; ++c) m(r, c) = rng.rat_int();
            if (rank(m) < 3) continue;
            auto ker = kernel_basis(m);
            ProjVec<Rat> center(ker[0]);
            bool distinct = true;
            for (const auto& c : centers)
                if (proj_eq(c, center)) distinct = false;
            if (!distinct) continue;
            s.cameras.push_back(m);
            centers.push_back(center);
            break;
        }
    }

    if (kind == CurveKind::Twisted) {
        for (;;) {
            TwistedCubicParam<Rat> t;
            t.m = rand_vec(13);
            Mat<Rat> mm = twisted_matrix(t);
            if (det(mm).is_zero()) continue;
            bool bad = false;
            for (const auto& c : centers)
                if (point_on_twisted_cubic(mm, c)) bad = true;
            if (bad) continue;
            s.curve = t;
            break;
        }
        return s;
    }

    int degree = kind == CurveKind::Conic ? 2 : 3;
    int alen = static_cast<int>(MonomialOrder::get(degree, 3).size());
    for (;;) {
        ProjVec<Rat> h = rand_vec(4);
        if (h.is_zero()) continue;
        bool bad = false;
        for (const auto& c : centers) {
            Rat dot(0);
            for (int i = 0; i < 4; ++i) dot += h[i] * c[i];
            if (dot.is_zero()) bad = true;
        }
        if (bad) continue;
        ProjVec<Rat> alpha = rand_vec(alen);
        if (alpha.is_zero()) continue;
        if (degree == 2) {
            ImageCurve<Rat> probe{2, alpha};
            if (conic_reducible(probe).first) continue;  // keep fibers generic
        }
        s.curve = PlaneCurveParam<Rat>{h, alpha, degree};
        break;
    }
    return s;
}

template <class K>
void attach_observations(Scene<K>& scene)
{
    Arrangement<K> arr = scene.arrangement();
    scene.observations = joint_project(arr, scene.curve);
}

template void attach_observations<Rat>(Scene<Rat>&);
template void attach_observations<double>(Scene<double>&);

void apply_noise(Scene<double>& scene, double sigma, std::uint64_t seed)
{
    if (!scene.observations) throw Error(errc::invalid_input, "no observations to perturb");
    Rng rng(seed);
    for (auto& view : *scene.observations) {
        ProjVec<double> c = view.coeffs.normalized();
        int idx = 0;
        double maxmag = 0.0;
        for (int i = 0; i < c.size(); ++i) maxmag = std::max(maxmag, std::fabs(c[i]));
        if (std::fabs(c[0]) < 1e-6 * maxmag)
            for (int i = 0; i < c.size(); ++i)
                if (std::fabs(c[i]) == maxmag) { idx = i; break; }
        ProjVec<double> noisy;
        noisy.v.resize(c.size());
        noisy[idx] = 1.0;
        for (int i = 0; i < c.size(); ++i)
            if (i != idx) noisy[i] = c[i] / c[idx] + sigma * rng.normal();
        view.coeffs = noisy;
    }
    scene.noise = NoiseSpec{sigma, seed};
}

nlohmann::json chow_to_json(const ChowForm<Rat>& c)
{
    return {{"degree", c.degree}, {"coeffs", vec_to_json(c.coeffs)}, {"order", "grlex-L0..L5"}};
}
nlohmann::json chow_to_json(const ChowForm<double>& c)
{
    return {{"degree", c.degree}, {"coeffs", vec_to_json(c.coeffs)}, {"order", "grlex-L0..L5"}};
}

}  // namespace cmv
