#pragma once

// Model specification documents.
//
//   {
//     "schema": "foliated-model/1",
//     "family": "kronecker_torus" | "conic_dual" | "cosphere_circle" | "product_bundle" | "lie_frame",
//     "label": "T2(1,sqrt2)",
//     "alpha": ["1", "sqrt2"],                          torus-based families
//     "lie": {                                          lie_frame, or conic_dual over a Lie frame
//       "dim": 3,
//       "brackets": [{"pair": [1, 2], "value": [[3, "1"]]}],   [e_i, e_j] = sum c e_k, 1-based
//       "foliation": [3]
//     },
//     "field": [2, 3],                                  optional; inferred from the scalars otherwise
//     "validate": false                                 optional; skips the Jacobi and closure checks
//   }
//
// Scalars are exact strings: integers, p/q, sqrt<d>, i, products and sums, e.g. "1+2/3*sqrt2".
// Errors carry a JSON pointer to the offending value.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "foliated/errors.hpp"
#include "foliated/model.hpp"
#include "foliated/scalar.hpp"

namespace foliated {

inline constexpr const char* kModelSchema = "foliated-model/1";

struct ParsedModel {
    ModelSpec spec;
    ModelPtr model;
    nlohmann::json document;
};

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const std::string& key, const std::string& at) {
    if (!j.is_object()) throw ParseError(at, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(at + "/" + key, "missing required field");
    return *it;
}

inline std::string as_string(const nlohmann::json& j, const std::string& at) {
    if (!j.is_string()) throw ParseError(at, "expected a string");
    return j.get<std::string>();
}

inline int as_int(const nlohmann::json& j, const std::string& at) {
    if (!j.is_number_integer()) throw ParseError(at, "expected an integer");
    return j.get<int>();
}

inline Scalar scalar_at(const nlohmann::json& j, const Field& f, const std::string& at) {
    // numbers are accepted when they are integers; fractions must be strings
    if (j.is_number_integer()) return Scalar(j.get<long>());
    std::string s = as_string(j, at);
    try {
        return parse_scalar(s, f);
    } catch (const Error& e) {
        throw ParseError(at, std::string("bad scalar \"") + s + "\": " + e.what());
    }
}

using Located = std::vector<std::pair<std::string, std::string>>;  // (scalar text, JSON pointer)

inline void collect_scalars(const nlohmann::json& j, const std::string& at, Located& out) {
    if (j.is_string()) out.push_back({j.get<std::string>(), at});
}

}  // namespace detail

inline ParsedModel parse_model(const nlohmann::json& doc) {
    using detail::as_int;
    using detail::as_string;
    using detail::require;
    ParsedModel out;
    out.document = doc;
    if (!doc.is_object()) throw ParseError("", "model document must be a JSON object");
    if (auto it = doc.find("schema"); it != doc.end() && (!it->is_string() || it->get<std::string>() != kModelSchema))
        throw ParseError("/schema", std::string("unsupported schema; expected ") + kModelSchema);
    std::string fam = as_string(require(doc, "family", ""), "/family");
    ModelSpec& s = out.spec;
    try {
        s.family = family_from_name(fam);
    } catch (const Error& e) {
        throw ParseError("/family", e.what());
    }
    if (auto it = doc.find("label"); it != doc.end()) s.label = as_string(*it, "/label");

    // field: explicit, or inferred from every scalar string in the document
    detail::Located scalars;
    if (auto it = doc.find("alpha"); it != doc.end() && it->is_array())
        for (std::size_t k = 0; k < it->size(); ++k) detail::collect_scalars((*it)[k], "/alpha/" + std::to_string(k), scalars);
    const nlohmann::json* lie = nullptr;
    if (auto it = doc.find("lie"); it != doc.end()) {
        lie = &*it;
        if (auto b = lie->find("brackets"); lie->is_object() && b != lie->end() && b->is_array())
            for (std::size_t k = 0; k < b->size(); ++k) {
                const auto& br = (*b)[k];
                if (auto v = br.find("value"); br.is_object() && v != br.end() && v->is_array())
                    for (std::size_t t = 0; t < v->size(); ++t)
                        if ((*v)[t].is_array() && (*v)[t].size() == 2)
                            detail::collect_scalars((*v)[t][1], "/lie/brackets/" + std::to_string(k) + "/value/" + std::to_string(t) + "/1", scalars);
            }
    }
    if (auto it = doc.find("field"); it != doc.end()) {
        if (!it->is_array() || it->size() > 2) throw ParseError("/field", "expected [d1] or [d1, d2]");
        try {
            s.field = Field(it->size() > 0 ? as_int((*it)[0], "/field/0") : 0, it->size() > 1 ? as_int((*it)[1], "/field/1") : 0);
        } catch (const FieldError& e) {
            throw ParseError("/field", e.what());
        }
    } else {
        std::vector<std::string> texts;
        for (auto& [text, at] : scalars) {
            try {
                infer_field({text});
            } catch (const Error& e) {
                throw ParseError(at, std::string("bad scalar \"") + text + "\": " + e.what());
            }
            texts.push_back(text);
        }
        try {
            s.field = infer_field(texts);
        } catch (const Error& e) {
            throw ParseError("", std::string("cannot infer the scalar field: ") + e.what());
        }
    }

    if (auto it = doc.find("alpha"); it != doc.end()) {
        if (!it->is_array()) throw ParseError("/alpha", "expected an array of scalars");
        for (std::size_t k = 0; k < it->size(); ++k)
            s.alpha.push_back(detail::scalar_at((*it)[k], s.field, "/alpha/" + std::to_string(k)));
    }
    if (lie) {
        if (!lie->is_object()) throw ParseError("/lie", "expected an object");
        s.lie_dim = as_int(require(*lie, "dim", "/lie"), "/lie/dim");
        if (s.lie_dim < 1) throw ParseError("/lie/dim", "dimension must be positive");
        auto idx = [&](const nlohmann::json& j, const std::string& at) {
            int v = as_int(j, at);
            if (v < 1 || v > s.lie_dim) throw ParseError(at, "frame index outside 1.." + std::to_string(s.lie_dim));
            return v - 1;
        };
        if (auto b = lie->find("brackets"); b != lie->end()) {
            if (!b->is_array()) throw ParseError("/lie/brackets", "expected an array");
            for (std::size_t k = 0; k < b->size(); ++k) {
                std::string at = "/lie/brackets/" + std::to_string(k);
                const auto& br = (*b)[k];
                const auto& pair = require(br, "pair", at);
                if (!pair.is_array() || pair.size() != 2) throw ParseError(at + "/pair", "expected [i, j]");
                LieBracket lb;
                lb.i = idx(pair[0], at + "/pair/0");
                lb.j = idx(pair[1], at + "/pair/1");
                const auto& val = require(br, "value", at);
                if (!val.is_array()) throw ParseError(at + "/value", "expected [[k, coefficient], ...]");
                for (std::size_t t = 0; t < val.size(); ++t) {
                    std::string vt = at + "/value/" + std::to_string(t);
                    if (!val[t].is_array() || val[t].size() != 2) throw ParseError(vt, "expected [k, coefficient]");
                    lb.value.push_back({idx(val[t][0], vt + "/0"), detail::scalar_at(val[t][1], s.field, vt + "/1")});
                }
                s.brackets.push_back(std::move(lb));
            }
        }
        const auto& fol = require(*lie, "foliation", "/lie");
        if (!fol.is_array()) throw ParseError("/lie/foliation", "expected an array of frame indices");
        for (std::size_t k = 0; k < fol.size(); ++k) s.foliation.push_back(idx(fol[k], "/lie/foliation/" + std::to_string(k)));
    }
    ModelOptions opts;
    if (auto it = doc.find("validate"); it != doc.end()) {
        if (!it->is_boolean()) throw ParseError("/validate", "expected a boolean");
        opts.validate = it->get<bool>();
    }
    if (s.family == Family::lie_frame && !lie) throw ParseError("/lie", "lie_frame models need a lie block");
    if (s.family != Family::lie_frame && !(s.family == Family::conic_dual && lie) && s.alpha.empty())
        throw ParseError("/alpha", "torus-based models need a slope vector");

    // derived families are built over their torus so that pullbacks know the base
    if (s.family == Family::cosphere_circle || s.family == Family::product_bundle ||
        (s.family == Family::conic_dual && !lie)) {
        ModelSpec base = s;
        base.family = Family::kronecker_torus;
        out.model = derive(make_model(base), s.family);
    } else {
        out.model = make_model(s, opts);
    }
    return out;
}

inline ParsedModel parse_model_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), std::string("malformed JSON: ") + e.what());
    }
    return parse_model(doc);
}

inline ParsedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open model file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model_text(ss.str());
}

}  // namespace foliated
