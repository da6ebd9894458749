#pragma once

#include "powser/seriesk.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace powser::doc {

/// On-disk coefficient document: versioned, UTF-8 JSON, exact rationals as
/// "p/q" strings (lossless round-trip), floats with 17 significant digits.
/// Zero entries are omitted; writers emit entries in index order, so a
/// given document has exactly one byte representation.
struct CoefficientDocument {
    std::string kind;
    Backend backend = Backend::exact;
    std::vector<std::string> axes;
    std::vector<int> caps;
    std::vector<std::pair<std::string, std::string>> params;  // insertion-ordered

    struct Field {
        std::string name;
        std::vector<std::pair<std::vector<int>, std::string>> entries;
    };
    std::vector<Field> fields;

    // Per-level certified region for documents whose trust erodes level by
    // level: `level_axis` names the leveled axis, each entry lists the caps
    // of the remaining axes in order. Empty means every entry is trusted.
    int level_axis = -1;
    std::vector<std::vector<int>> level_trust;

    void set_param(const std::string& key, const std::string& value);
    const std::string& param(const std::string& key) const;
    bool has_param(const std::string& key) const;
    const Field& field(const std::string& name) const;
    Scalar param_scalar(const std::string& key) const;
};

template <int K>
void add_field(CoefficientDocument& d, const std::string& name, const SeriesK<K>& s) {
    if (d.fields.empty()) {
        d.backend = s.backend();
        d.axes.assign(s.axes().begin(), s.axes().end());
        d.caps.assign(s.caps().begin(), s.caps().end());
    } else if (d.caps != std::vector<int>(s.caps().begin(), s.caps().end()) ||
               d.backend != s.backend()) {
        throw std::invalid_argument("document fields must share caps and backend");
    }
    CoefficientDocument::Field f;
    f.name = name;
    s.for_each_index([&](const std::array<int, K>& ix) {
        const Scalar& v = s.at(ix);
        if (!v.is_zero())
            f.entries.emplace_back(std::vector<int>(ix.begin(), ix.end()), v.str());
    });
    d.fields.push_back(std::move(f));
}

template <int K>
SeriesK<K> read_field(const CoefficientDocument& d, const std::string& name) {
    if (static_cast<int>(d.caps.size()) != K)
        throw std::invalid_argument("document has " + std::to_string(d.caps.size()) +
                                    " axes, expected " + std::to_string(K));
    std::array<int, K> caps{};
    std::array<std::string, K> axes = default_axes<K>();
    for (int ax = 0; ax < K; ++ax) {
        caps[ax] = d.caps[static_cast<std::size_t>(ax)];
        if (ax < static_cast<int>(d.axes.size())) axes[ax] = d.axes[static_cast<std::size_t>(ax)];
    }
    SeriesK<K> s(d.backend, caps, axes);
    for (const auto& [ix, text] : d.field(name).entries) {
        if (static_cast<int>(ix.size()) != K)
            throw std::invalid_argument("entry index arity mismatch in field '" + name + "'");
        std::array<int, K> a{};
        for (int ax = 0; ax < K; ++ax) a[ax] = ix[static_cast<std::size_t>(ax)];
        s.set(a, Scalar::parse(text, d.backend));
    }
    return s;
}

std::string to_json_text(const CoefficientDocument& d);
CoefficientDocument from_json_text(const std::string& text);

void save(const CoefficientDocument& d, const std::filesystem::path& path);
CoefficientDocument load(const std::filesystem::path& path);

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;  // number of samples, endpoints included when count > 1
};

/// Evaluates every field of the document on a rectangular grid and renders
/// CSV with one axis column per axis, one value column per field, and a
/// trailing `warning` flag set when the document's level trust falls short
/// of its caps (the evaluation then mixes in untrusted coefficients).
std::string emit_profile_csv(const CoefficientDocument& d, const std::vector<GridAxis>& grid);

}  // namespace powser::doc
