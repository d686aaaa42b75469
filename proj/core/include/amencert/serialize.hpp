#pragma once

#include <string>

#include "amencert/homology.hpp"

namespace amencert {

// JSON certificate and report I/O. Exact values serialize as "p/q" strings;
// float-mode values as 17-significant-digit decimals (both lossless). Emitted
// JSON carries no timestamps, so identical runs produce identical bytes;
// wall-clock data belongs in a sidecar file.

std::string value_to_string(const Rational& v, NumericMode mode);
Rational value_from_string(const std::string& text);

std::string chain_to_json(const RChain& chain, NumericMode mode, int indent = 2);
RChain chain_from_json(const std::string& text);

std::string folner_cert_to_json(const FolnerCertificate& cert, int indent = 2);
FolnerCertificate folner_cert_from_json(const std::string& text);

std::string ponzi_cert_to_json(const PonziCertificate& cert, int indent = 2);
PonziCertificate ponzi_cert_from_json(const std::string& text);

/// Boundary certificates may carry a structural chain (rank, n) instead of an
/// explicit entry list; this wrapper emits either form.
std::string boundary_cert_to_json(const FolnerCertificate& cert, int rank, int n,
                                  bool explicit_chain, int indent = 2);

/// Tent artifacts: per-n exact values of the sequence plus its parameters.
std::string tent_report_to_json(const TentSequence& tent, int n_max, int indent = 2);

std::string status_report_to_json(const ClassStatusReport& report, int indent = 2);

/// CSV trend table: radius, t_star, m_star, duality_gap, seconds.
std::string status_report_to_csv(const ClassStatusReport& report);

/// Generic verification of any certificate JSON (folner, ponzi, boundary,
/// tent). Returns a one-line human summary; ok reports overall pass at tol.
struct VerifyOutcome {
    bool ok = false;
    std::string summary;
};
VerifyOutcome verify_certificate_json(const std::string& text, const Rational& tol);

/// Kind tag of a certificate JSON ("folner", "ponzi", "boundary", "tent").
std::string certificate_kind(const std::string& text);

}  // namespace amencert
