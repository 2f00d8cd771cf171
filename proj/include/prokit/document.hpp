#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "prokit/pro_core.hpp"

namespace prokit {

inline constexpr const char* kSchemaVersion = "pro-kit/1";

enum class DocumentKind { foster, state_space, descriptor };

std::string to_string(DocumentKind kind);

/// Malformed document: bad JSON, wrong schema, inconsistent payload shapes.
class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string& what, std::ptrdiff_t byte = -1)
        : std::runtime_error(what), byte_(byte) {}
    /// Byte offset of the syntax error when known, -1 otherwise.
    std::ptrdiff_t byte() const { return byte_; }

  private:
    std::ptrdiff_t byte_;
};

/// On-disk representation of one function: schema tag, kind, port count,
/// matrices as row-major nested arrays, free-form meta tags.
struct DocumentEnvelope {
    DocumentKind kind = DocumentKind::foster;
    Index m = 0;
    std::optional<FosterForm> foster;
    std::optional<StateSpaceRealization> state_space;
    std::optional<DescriptorRealization> descriptor;
    nlohmann::ordered_json meta;

    static DocumentEnvelope wrap(FosterForm f, nlohmann::ordered_json meta = {});
    static DocumentEnvelope wrap(StateSpaceRealization r, nlohmann::ordered_json meta = {});
    static DocumentEnvelope wrap(DescriptorRealization d, nlohmann::ordered_json meta = {});
};

DocumentEnvelope parse_document(const std::string& text);
/// Canonical serialization: fixed key order, two-space indent, stable under
/// parse-then-serialize round trips.
std::string serialize_document(const DocumentEnvelope& doc);

DocumentEnvelope load_document(const std::string& path);
void save_document(const DocumentEnvelope& doc, const std::string& path);

nlohmann::ordered_json matrix_to_json(const Matrix& X);
Matrix matrix_from_json(const nlohmann::ordered_json& j, Index rows, Index cols,
                        const std::string& name);

nlohmann::ordered_json report_to_json(const ValidationReport& rep);

}  // namespace prokit
