#include "prokit/document.hpp"

#include <fstream>
#include <sstream>

namespace prokit {

using nlohmann::ordered_json;

std::string to_string(DocumentKind kind) {
    switch (kind) {
        case DocumentKind::foster: return "foster";
        case DocumentKind::state_space: return "state_space";
        case DocumentKind::descriptor: return "descriptor";
    }
    return "unknown";
}

ordered_json matrix_to_json(const Matrix& X) {
    ordered_json rows = ordered_json::array();
    for (Index i = 0; i < X.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Index j = 0; j < X.cols(); ++j) row.push_back(X(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const ordered_json& j, Index rows, Index cols, const std::string& name) {
    if (!j.is_array()) throw ParseError("matrix '" + name + "' must be an array of rows");
    if (rows >= 0 && static_cast<Index>(j.size()) != rows) {
        throw ParseError("matrix '" + name + "' has " + std::to_string(j.size()) +
                         " rows, expected " + std::to_string(rows));
    }
    const Index r = static_cast<Index>(j.size());
    Index c = cols;
    if (r > 0) {
        if (!j[0].is_array()) throw ParseError("matrix '" + name + "' rows must be arrays");
        if (c < 0) c = static_cast<Index>(j[0].size());
    } else if (c < 0) {
        c = 0;
    }
    Matrix X(r, c);
    for (Index i = 0; i < r; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != c) {
            throw ParseError("matrix '" + name + "' row " + std::to_string(i) +
                             " has wrong length (expected " + std::to_string(c) + ")");
        }
        for (Index k = 0; k < c; ++k) {
            const auto& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number()) {
                throw ParseError("matrix '" + name + "' entry (" + std::to_string(i) + "," +
                                 std::to_string(k) + ") is not a number");
            }
            X(i, k) = v.get<double>();
        }
    }
    if (!X.allFinite()) throw ParseError("matrix '" + name + "' has non-finite entries");
    return X;
}

DocumentEnvelope DocumentEnvelope::wrap(FosterForm f, ordered_json meta) {
    DocumentEnvelope doc;
    doc.kind = DocumentKind::foster;
    doc.m = f.m;
    doc.foster = std::move(f);
    doc.meta = std::move(meta);
    return doc;
}

DocumentEnvelope DocumentEnvelope::wrap(StateSpaceRealization r, ordered_json meta) {
    DocumentEnvelope doc;
    doc.kind = DocumentKind::state_space;
    doc.m = r.ports();
    doc.state_space = std::move(r);
    doc.meta = std::move(meta);
    return doc;
}

DocumentEnvelope DocumentEnvelope::wrap(DescriptorRealization d, ordered_json meta) {
    DocumentEnvelope doc;
    doc.kind = DocumentKind::descriptor;
    doc.m = d.ports();
    doc.descriptor = std::move(d);
    doc.meta = std::move(meta);
    return doc;
}

DocumentEnvelope parse_document(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(),
                         static_cast<std::ptrdiff_t>(e.byte));
    }
    if (!j.is_object()) throw ParseError("document must be a JSON object");
    if (!j.contains("schema") || j["schema"] != kSchemaVersion) {
        throw ParseError(std::string("missing or unsupported schema (expected \"") +
                         kSchemaVersion + "\")");
    }
    if (!j.contains("kind") || !j["kind"].is_string()) throw ParseError("missing document kind");
    if (!j.contains("m") || !j["m"].is_number_integer() || j["m"].get<long>() < 0) {
        throw ParseError("missing or invalid port count 'm'");
    }
    if (!j.contains("payload") || !j["payload"].is_object()) throw ParseError("missing payload");

    DocumentEnvelope doc;
    doc.m = j["m"].get<Index>();
    const auto& pl = j["payload"];
    const std::string kind = j["kind"].get<std::string>();
    const Index m = doc.m;

    auto need = [&](const char* key) -> const ordered_json& {
        if (!pl.contains(key)) throw ParseError(std::string("payload missing '") + key + "'");
        return pl.at(key);
    };

    if (kind == "foster") {
        doc.kind = DocumentKind::foster;
        FosterForm f;
        f.m = m;
        f.Q = matrix_from_json(need("Q"), m, m, "Q");
        f.R = matrix_from_json(need("R"), m, m, "R");
        if (!need("terms").is_array()) throw ParseError("payload 'terms' must be an array");
        for (const auto& tj : pl["terms"]) {
            if (!tj.is_object() || !tj.contains("omega") || !tj["omega"].is_number()) {
                throw ParseError("each term needs a numeric 'omega'");
            }
            FosterTerm t;
            t.omega = tj["omega"].get<double>();
            if (!(t.omega >= 0.0) || !std::isfinite(t.omega)) {
                throw ParseError("term omega must be finite and >= 0");
            }
            if (!tj.contains("Q") || !tj.contains("R")) throw ParseError("each term needs Q and R");
            t.Q = matrix_from_json(tj["Q"], m, m, "term Q");
            t.R = matrix_from_json(tj["R"], m, m, "term R");
            f.terms.push_back(std::move(t));
        }
        doc.foster = std::move(f);
    } else if (kind == "state_space") {
        doc.kind = DocumentKind::state_space;
        StateSpaceRealization r;
        r.M = matrix_from_json(need("M"), m, m, "M");
        r.D = matrix_from_json(need("D"), m, m, "D");
        r.A = matrix_from_json(need("A"), -1, -1, "A");
        if (r.A.rows() != r.A.cols()) throw ParseError("state matrix A must be square");
        r.B = matrix_from_json(need("B"), r.A.rows(), m, "B");
        doc.state_space = std::move(r);
    } else if (kind == "descriptor") {
        doc.kind = DocumentKind::descriptor;
        DescriptorRealization d;
        d.E = matrix_from_json(need("E"), -1, -1, "E");
        if (d.E.rows() != d.E.cols()) throw ParseError("pencil matrix E must be square");
        const Index N = d.E.rows();
        d.A = matrix_from_json(need("A"), N, N, "A");
        d.B = matrix_from_json(need("B"), N, m, "B");
        d.C = matrix_from_json(need("C"), N, m, "C");
        d.D = matrix_from_json(need("D"), m, m, "D");
        doc.descriptor = std::move(d);
    } else {
        throw ParseError("unknown document kind '" + kind + "'");
    }
    if (j.contains("meta")) doc.meta = j["meta"];
    return doc;
}

std::string serialize_document(const DocumentEnvelope& doc) {
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = to_string(doc.kind);
    j["m"] = doc.m;
    ordered_json pl;
    switch (doc.kind) {
        case DocumentKind::foster: {
            const FosterForm& f = *doc.foster;
            pl["Q"] = matrix_to_json(f.Q);
            pl["R"] = matrix_to_json(f.R);
            ordered_json terms = ordered_json::array();
            for (const auto& t : f.terms) {
                ordered_json tj;
                tj["omega"] = t.omega;
                tj["Q"] = matrix_to_json(t.Q);
                tj["R"] = matrix_to_json(t.R);
                terms.push_back(std::move(tj));
            }
            pl["terms"] = std::move(terms);
            break;
        }
        case DocumentKind::state_space: {
            const StateSpaceRealization& r = *doc.state_space;
            pl["M"] = matrix_to_json(r.M);
            pl["D"] = matrix_to_json(r.D);
            pl["A"] = matrix_to_json(r.A);
            pl["B"] = matrix_to_json(r.B);
            break;
        }
        case DocumentKind::descriptor: {
            const DescriptorRealization& d = *doc.descriptor;
            pl["E"] = matrix_to_json(d.E);
            pl["A"] = matrix_to_json(d.A);
            pl["B"] = matrix_to_json(d.B);
            pl["C"] = matrix_to_json(d.C);
            pl["D"] = matrix_to_json(d.D);
            break;
        }
    }
    j["payload"] = std::move(pl);
    if (!doc.meta.is_null()) j["meta"] = doc.meta;
    return j.dump(2) + "\n";
}

DocumentEnvelope load_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_document(buf.str());
}

void save_document(const DocumentEnvelope& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << serialize_document(doc);
}

ordered_json report_to_json(const ValidationReport& rep) {
    ordered_json j;
    j["passed"] = rep.passed;
    ordered_json v = ordered_json::array();
    for (const auto& viol : rep.violations) {
        ordered_json vj;
        vj["condition"] = viol.condition;
        vj["location"] = viol.location;
        vj["residual"] = viol.residual;
        v.push_back(std::move(vj));
    }
    j["violations"] = std::move(v);
    return j;
}

}  // namespace prokit
