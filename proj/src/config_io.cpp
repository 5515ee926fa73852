#include "deltabound/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace deltabound {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw DomainError("config: " + where + ": " + what);
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> known) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (item.key() == k) ok = true;
        if (!ok) fail(where, "unknown key '" + item.key() + "'");
    }
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
    return *it;
}

double number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

double number_field(const json& obj, const char* key, const std::string& where) {
    return number(require(obj, key, where), where + "." + key);
}

double number_or(const json& obj, const char* key, const std::string& where, double fallback) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : number(*it, where + "." + key);
}

ManifoldModel parse_model(const json& m) {
    if (!m.is_object()) fail("model", "expected an object");
    const json& kind_v = require(m, "kind", "model");
    if (!kind_v.is_string()) fail("model.kind", "expected a string");
    const std::string kind = kind_v.get<std::string>();
    if (kind == "flat") {
        reject_unknown(m, "model", {"kind"});
        return Flat{};
    }
    if (kind == "hyperbolic") {
        reject_unknown(m, "model", {"kind", "kappa"});
        return Hyperbolic{number_field(m, "kappa", "model")};
    }
    if (kind == "generic") {
        reject_unknown(m, "model",
                       {"kind", "kappa", "A", "B", "C", "D", "rho", "n_star", "lambda_gap"});
        GenericBounds gb;
        gb.kappa = number_or(m, "kappa", "model", gb.kappa);
        gb.const_A = number_or(m, "A", "model", gb.const_A);
        gb.const_B = number_or(m, "B", "model", gb.const_B);
        gb.const_C = number_or(m, "C", "model", gb.const_C);
        gb.const_D = number_or(m, "D", "model", gb.const_D);
        gb.rho = number_or(m, "rho", "model", gb.rho);
        gb.lambda_gap = number_or(m, "lambda_gap", "model", gb.lambda_gap);
        if (auto it = m.find("n_star"); it != m.end()) {
            if (!it->is_number_integer()) fail("model.n_star", "expected an integer");
            gb.n_star = it->get<int>();
        }
        gb.validate();
        return gb;
    }
    fail("model.kind", "must be one of \"flat\", \"hyperbolic\", \"generic\"");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Configuration parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("document", "expected a JSON object");
    reject_unknown(doc, "document", {"model", "constants", "d_min", "centers"});

    ManifoldModel model = parse_model(require(doc, "model", "document"));

    PhysicalConstants constants = PhysicalConstants::natural();
    if (auto it = doc.find("constants"); it != doc.end()) {
        if (!it->is_object()) fail("constants", "expected an object");
        reject_unknown(*it, "constants", {"hbar", "mass"});
        constants.hbar = number_field(*it, "hbar", "constants");
        constants.mass = number_field(*it, "mass", "constants");
        if (!(constants.hbar > 0.0)) fail("constants.hbar", "must be > 0");
        if (!(constants.mass > 0.0)) fail("constants.mass", "must be > 0");
    }

    const double d_min = number_field(doc, "d_min", "document");

    const json& centers_v = require(doc, "centers", "document");
    if (!centers_v.is_array()) fail("centers", "expected an array");
    std::vector<Center> centers;
    centers.reserve(centers_v.size());
    for (std::size_t i = 0; i < centers_v.size(); ++i) {
        const std::string where = "centers[" + std::to_string(i) + "]";
        const json& c = centers_v[i];
        if (!c.is_object()) fail(where, "expected an object");
        reject_unknown(c, where, {"x", "y", "mu"});
        centers.push_back({{number_field(c, "x", where), number_field(c, "y", where)},
                           number_field(c, "mu", where)});
    }

    return Configuration(std::move(centers), d_min, std::move(model), constants);
}

Configuration parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string configuration_to_json(const Configuration& config) {
    std::ostringstream out;
    out << "{\n  \"model\": {";
    const ManifoldModel& m = config.model();
    if (is_flat(m)) {
        out << "\"kind\": \"flat\"";
    } else if (is_hyperbolic(m)) {
        out << "\"kind\": \"hyperbolic\", \"kappa\": " << fmt(std::get<Hyperbolic>(m).kappa);
    } else {
        const auto& gb = std::get<GenericBounds>(m);
        out << "\"kind\": \"generic\", \"kappa\": " << fmt(gb.kappa) << ", \"A\": " << fmt(gb.const_A)
            << ", \"B\": " << fmt(gb.const_B) << ", \"C\": " << fmt(gb.const_C)
            << ", \"D\": " << fmt(gb.const_D) << ", \"rho\": " << fmt(gb.rho)
            << ", \"n_star\": " << gb.n_star << ", \"lambda_gap\": " << fmt(gb.lambda_gap);
    }
    out << "},\n";
    out << "  \"constants\": {\"hbar\": " << fmt(config.constants().hbar)
        << ", \"mass\": " << fmt(config.constants().mass) << "},\n";
    out << "  \"d_min\": " << fmt(config.d_min()) << ",\n";
    out << "  \"centers\": [\n";
    const auto& cs = config.centers();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        out << "    {\"x\": " << fmt(cs[i].point.x) << ", \"y\": " << fmt(cs[i].point.y)
            << ", \"mu\": " << fmt(cs[i].mu) << "}" << (i + 1 < cs.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

void write_config_file(const Configuration& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("config: cannot write '" + path + "'");
    out << configuration_to_json(config);
}

}  // namespace deltabound
