#pragma once

/// IFS files: JSON with `dim`, `maps` and `label`. Each map has `scale`,
/// either `rotation_deg` (d = 2, optional `reflect`) or a row-major
/// `matrix`, and `translation`.

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "selfsim/attractor.hpp"

namespace selfsim {

/// Syntax errors carry line and column; semantic errors carry the field path.
class IfsFormatError : public std::runtime_error {
public:
    IfsFormatError(std::string field, std::size_t line, std::size_t column, const std::string& message)
        : std::runtime_error(format(field, line, column, message)),
          field_(std::move(field)), line_(line), column_(column) {}

    const std::string& field() const noexcept { return field_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& field, std::size_t line, std::size_t column, const std::string& message) {
        std::string where;
        if (line > 0) where = "line " + std::to_string(line) + ", column " + std::to_string(column);
        if (!field.empty()) where += (where.empty() ? "" : ", ") + std::string("field ") + field;
        return where.empty() ? message : where + ": " + message;
    }

    std::string field_;
    std::size_t line_ = 0, column_ = 0;
};

namespace detail {

using nlohmann::json;

inline IfsFormatError field_error(const std::string& field, const std::string& message) {
    return IfsFormatError(field, 0, 0, message);
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw field_error(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw field_error(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
}

inline double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw field_error(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw field_error(path, "expected a finite number");
    return x;
}

inline Point vector_of(const json& v, int dim, const std::string& path) {
    if (!v.is_array()) throw field_error(path, "expected an array");
    if (static_cast<int>(v.size()) != dim)
        throw field_error(path, "expected " + std::to_string(dim) + " entries, found " + std::to_string(v.size()));
    Point p(dim);
    for (int i = 0; i < dim; ++i) p[i] = number(v[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
    return p;
}

inline Similitude parse_map(const json& m, int dim, const std::string& path) {
    if (!m.is_object()) throw field_error(path, "expected an object");
    const double scale = number(require(m, "scale", path), path + ".scale");
    if (!(scale > 0.0 && scale < 1.0)) throw field_error(path + ".scale", "scale out of (0,1)");
    const Point t = vector_of(require(m, "translation", path), dim, path + ".translation");
    const bool has_rot = m.contains("rotation_deg"), has_matrix = m.contains("matrix");
    if (has_rot && has_matrix) throw field_error(path, "give either rotation_deg or matrix, not both");
    bool reflect = false;
    if (m.contains("reflect")) {
        if (!m["reflect"].is_boolean()) throw field_error(path + ".reflect", "expected a boolean");
        reflect = m["reflect"].get<bool>();
    }
    Matrix q = Matrix::Identity(dim, dim);
    if (has_rot) {
        if (dim != 2) throw field_error(path + ".rotation_deg", "rotation_deg requires dim = 2");
        const double deg = number(m["rotation_deg"], path + ".rotation_deg");
        const double rad = deg * std::numbers::pi / 180.0;
        q << std::cos(rad), -std::sin(rad), std::sin(rad), std::cos(rad);
    } else if (has_matrix) {
        const json& a = m["matrix"];
        if (!a.is_array() || a.size() != static_cast<std::size_t>(dim * dim))
            throw field_error(path + ".matrix", "expected " + std::to_string(dim * dim) + " entries in row-major order");
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) {
                const std::size_t idx = static_cast<std::size_t>(r * dim + c);
                q(r, c) = number(a[idx], path + ".matrix[" + std::to_string(idx) + "]");
            }
    }
    if (reflect) {
        if (dim == 1) {
            q(0, 0) = -q(0, 0);
        } else {
            Matrix r = Matrix::Identity(dim, dim);
            r(dim - 1, dim - 1) = -1.0;
            q = q * r;
        }
    }
    const double err = (q.transpose() * q - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (err > 1e-9) throw field_error(path + (has_matrix ? ".matrix" : ""), "matrix is not orthogonal");
    return Similitude(scale, q, t);
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') ++line, column = 1;
        else ++column;
    }
    return {line, column};
}

}  // namespace detail

inline IFSystem parse_ifs_json(const nlohmann::json& doc) {
    using detail::field_error;
    if (!doc.is_object()) throw field_error("", "top level must be an object");
    const auto& d = detail::require(doc, "dim", "");
    if (!d.is_number_integer() || d.get<long long>() < 1) throw field_error("dim", "expected a positive integer");
    const int dim = static_cast<int>(d.get<long long>());
    const auto& maps = detail::require(doc, "maps", "");
    if (!maps.is_array()) throw field_error("maps", "expected an array");
    if (maps.size() < 2) throw field_error("maps", "an IFS needs at least 2 maps");
    IFSystem ifs;
    ifs.dim = dim;
    for (std::size_t i = 0; i < maps.size(); ++i)
        ifs.maps.push_back(detail::parse_map(maps[i], dim, "maps[" + std::to_string(i) + "]"));
    if (doc.contains("label")) {
        if (!doc["label"].is_string()) throw field_error("label", "expected a string");
        ifs.label = doc["label"].get<std::string>();
    }
    ifs.validate();
    return ifs;
}

inline IFSystem parse_ifs_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = detail::line_column(text, e.byte);
        std::string msg = e.what();
        if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
        throw IfsFormatError("", line, column, msg);
    }
    return parse_ifs_json(doc);
}

inline IFSystem parse_ifs_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IfsFormatError("", 0, 0, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_ifs_text(ss.str());
}

/// Every map is written with its full matrix so parsing restores the exact
/// doubles.
inline nlohmann::json ifs_to_json(const IFSystem& ifs) {
    nlohmann::json maps = nlohmann::json::array();
    for (const auto& f : ifs.maps) {
        nlohmann::json m;
        m["scale"] = f.scale();
        std::vector<double> q;
        for (int r = 0; r < ifs.dim; ++r)
            for (int c = 0; c < ifs.dim; ++c) q.push_back(f.orthogonal()(r, c));
        m["matrix"] = q;
        m["translation"] = to_vector(f.translation());
        maps.push_back(std::move(m));
    }
    return {{"dim", ifs.dim}, {"label", ifs.label}, {"maps", std::move(maps)}};
}

inline std::string serialize_ifs(const IFSystem& ifs) { return ifs_to_json(ifs).dump(2) + "\n"; }

/// Bitwise equality of scales, matrices and translations.
inline bool identical(const IFSystem& a, const IFSystem& b) {
    if (a.dim != b.dim || a.maps.size() != b.maps.size() || a.label != b.label) return false;
    for (std::size_t i = 0; i < a.maps.size(); ++i) {
        const auto& f = a.maps[i];
        const auto& g = b.maps[i];
        if (f.scale() != g.scale() || f.orthogonal() != g.orthogonal() || f.translation() != g.translation())
            return false;
    }
    return true;
}

}  // namespace selfsim
