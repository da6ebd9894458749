#include "powser/document.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace powser::doc {

using ordered_json = nlohmann::ordered_json;

void CoefficientDocument::set_param(const std::string& key, const std::string& value) {
    for (auto& [k, v] : params)
        if (k == key) {
            v = value;
            return;
        }
    params.emplace_back(key, value);
}

const std::string& CoefficientDocument::param(const std::string& key) const {
    for (const auto& [k, v] : params)
        if (k == key) return v;
    throw std::invalid_argument("document lacks parameter '" + key + "'");
}

bool CoefficientDocument::has_param(const std::string& key) const {
    for (const auto& [k, v] : params) {
        (void)v;
        if (k == key) return true;
    }
    return false;
}

const CoefficientDocument::Field& CoefficientDocument::field(const std::string& name) const {
    for (const auto& f : fields)
        if (f.name == name) return f;
    throw std::invalid_argument("document lacks field '" + name + "'");
}

Scalar CoefficientDocument::param_scalar(const std::string& key) const {
    return Scalar::parse(param(key), backend);
}

std::string to_json_text(const CoefficientDocument& d) {
    ordered_json j;
    j["schema"] = "powser/1";
    j["kind"] = d.kind;
    j["backend"] = backend_name(d.backend);
    j["axes"] = d.axes;
    j["caps"] = d.caps;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : d.params) params[k] = v;
    j["params"] = std::move(params);
    ordered_json fields = ordered_json::array();
    for (const auto& f : d.fields) {
        ordered_json jf;
        jf["name"] = f.name;
        ordered_json entries = ordered_json::array();
        for (const auto& [ix, val] : f.entries) entries.push_back(ordered_json::array({ix, val}));
        jf["entries"] = std::move(entries);
        fields.push_back(std::move(jf));
    }
    j["fields"] = std::move(fields);
    if (!d.level_trust.empty()) {
        j["level_axis"] = d.level_axis;
        j["level_trust"] = d.level_trust;
    }
    return j.dump(2) + "\n";
}

CoefficientDocument from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("malformed document: ") + e.what());
    }
    if (!j.contains("schema") || j["schema"].get<std::string>() != "powser/1")
        throw std::invalid_argument("unsupported document schema");
    CoefficientDocument d;
    d.kind = j.at("kind").get<std::string>();
    d.backend = backend_from_name(j.at("backend").get<std::string>());
    d.axes = j.at("axes").get<std::vector<std::string>>();
    d.caps = j.at("caps").get<std::vector<int>>();
    for (int c : d.caps)
        if (c < 0) throw std::invalid_argument("negative cap in document");
    if (j.contains("params"))
        for (const auto& [k, v] : j["params"].items())
            d.params.emplace_back(k, v.get<std::string>());
    for (const auto& jf : j.at("fields")) {
        CoefficientDocument::Field f;
        f.name = jf.at("name").get<std::string>();
        for (const auto& e : jf.at("entries")) {
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("entry must be [index, value]");
            f.entries.emplace_back(e[0].get<std::vector<int>>(), e[1].get<std::string>());
        }
        d.fields.push_back(std::move(f));
    }
    if (j.contains("level_trust")) {
        d.level_axis = j.at("level_axis").get<int>();
        d.level_trust = j.at("level_trust").get<std::vector<std::vector<int>>>();
    }
    return d;
}

void save(const CoefficientDocument& d, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << to_json_text(d);
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

CoefficientDocument load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

namespace {

bool trust_falls_short(const CoefficientDocument& d) {
    if (d.level_trust.empty()) return false;
    std::vector<int> other_axes;
    for (int ax = 0; ax < static_cast<int>(d.caps.size()); ++ax)
        if (ax != d.level_axis) other_axes.push_back(ax);
    for (const auto& trust : d.level_trust)
        for (std::size_t a = 0; a < other_axes.size() && a < trust.size(); ++a)
            if (trust[a] < d.caps[static_cast<std::size_t>(other_axes[a])]) return true;
    return false;
}

double eval_field(const CoefficientDocument::Field& f, const std::vector<double>& at) {
    double total = 0.0;
    for (const auto& [ix, text] : f.entries) {
        double term = Scalar::parse(text, Backend::float64).approx();
        for (std::size_t ax = 0; ax < ix.size(); ++ax)
            for (int p = 0; p < ix[ax]; ++p) term *= at[ax];
        total += term;
    }
    return total;
}

}  // namespace

std::string emit_profile_csv(const CoefficientDocument& d, const std::vector<GridAxis>& grid) {
    if (grid.size() != d.caps.size())
        throw std::invalid_argument("grid must give one range per document axis");
    for (const auto& g : grid)
        if (g.count < 1) throw std::invalid_argument("grid axis needs at least one sample");

    std::ostringstream csv;
    for (std::size_t ax = 0; ax < d.axes.size(); ++ax) csv << d.axes[ax] << ',';
    for (const auto& f : d.fields) csv << f.name << ',';
    csv << "warning\n";

    const int warn = trust_falls_short(d) ? 1 : 0;
    std::vector<int> idx(grid.size(), 0);
    char buf[64];
    for (;;) {
        std::vector<double> at(grid.size(), 0.0);
        for (std::size_t ax = 0; ax < grid.size(); ++ax) {
            const auto& g = grid[ax];
            at[ax] = g.count == 1 ? g.lo : g.lo + (g.hi - g.lo) * idx[ax] / (g.count - 1);
        }
        for (double v : at) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            csv << buf << ',';
        }
        for (const auto& f : d.fields) {
            std::snprintf(buf, sizeof buf, "%.17g", eval_field(f, at));
            csv << buf << ',';
        }
        csv << warn << '\n';
        std::size_t ax = grid.size();
        while (ax > 0) {
            --ax;
            if (++idx[ax] < grid[ax].count) break;
            idx[ax] = 0;
            if (ax == 0) return csv.str();
        }
        if (grid.empty()) return csv.str();
    }
}

}  // namespace powser::doc
