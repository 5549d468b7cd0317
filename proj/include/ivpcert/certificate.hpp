#pragma once

#include <functional>
#include <optional>
#include <string>

#include "json.hpp"

#include "ivpcert/prover.hpp"

namespace ivpcert {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char *kEngineVersion = "ivpcert 0.1.0";

std::string sha256_hex(const std::string &bytes);

// Canonical bytes: UTF-8 dump with sorted keys and no floats; every number
// is carried as an exact rational string.
std::string canonical_bytes(const Json &doc);

// Serialization helpers shared by emitter and checker.
Json rational_json(const Rational &q);
Json gaussian_json(const GaussianRational &g);
Json poly_json(const MultiPoly &p);
Json rf_json(const CanonicalRF &f);
Json context_json(const CanonContext &ctx);

// Builds the certificate document for a successful certification. The
// content hash is computed over the document with the hash field absent and
// then embedded; identical inputs give byte-identical documents.
Json emit_certificate(const ProofArtifacts &art);

enum class CheckStatus {
    Accepted,
    SchemaError,
    HashMismatch,
    StageMismatch,
    MissingDependency,
};

const char *check_status_name(CheckStatus s);

struct CheckResult {
    CheckStatus status = CheckStatus::SchemaError;
    std::string detail;
    bool ok() const { return status == CheckStatus::Accepted; }
};

using SourceLookup =
    std::function<std::optional<IdentityDecl>(const std::string &)>;
using CertLookup = std::function<const Json *(const std::string &)>;

// Replays a certificate without trusting the prover: re-derives every
// stage (derivatives taken on the canonical forms, a different route than
// the emitter's), re-normalizes every claimed polynomial, re-evaluates the
// initial data, and re-verifies dependency hashes. Accepts only if every
// recomputation matches the document exactly.
CheckResult check_certificate(const Json &cert, const SourceLookup &sources,
                              const CertLookup &certs);

} // namespace ivpcert
