#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "parfell/bernoulli.hpp"
#include "parfell/crossed_product.hpp"
#include "parfell/group.hpp"
#include "parfell/matrix.hpp"
#include "parfell/partial_action.hpp"
#include "parfell/representation.hpp"

namespace parfell::io {

using Json = nlohmann::ordered_json;

/// Template string ("free:2", "cyclic:4", ...) or
/// {"kind":"free","rank":r} / {"kind":"finite","order":n,"table":[[...]],"labels":[...]}.
GroupSpec parse_group(const Json& j);
Json group_to_json(const GroupSpec& g);

/// {"group":..., "n":..., "elements":[{"t":"a","domain":[...],"map":{"i":j}}]}
FinitePartialAction parse_action(const Json& j);
Json action_to_json(const FinitePartialAction& a);

/// {"target":<group>, "images":[labels or indices]}
GroupHom parse_hom(const Json& j, const GroupSpec& source);
Json hom_to_json(const GroupHom& h);

/// {"terms":[{"t":"g","coeffs":[[re,im],...]}]}
Section parse_section(const Json& j, const GroupSpec& group, std::size_t n);
Json section_to_json(const Section& x, const GroupSpec& group);

/// {"dim":d, "matrices":[{"t":"a","entries":[[[re,im],...],...]}]}
PartialRepFamily parse_family(const Json& j, const GroupSpec& group);
Json family_to_json(const PartialRepFamily& v);

Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix parse_matrix(const Json& j);

Json defects_to_json(const DefectReport& r);
Json validation_to_json(const ValidationReport& r);
Json certificate_to_json(const RfdCertificate& c);
Json perturbation_to_json(const PerturbationCertificate& c, const GroupSpec& group);
Json bundle_report_to_json(const BundleAxiomReport& r);
Json tolerances_to_json(const Tolerances& t);

/// Reads and parses a JSON file; MalformedInput on I/O or syntax errors.
Json read_json_file(const std::string& path, std::string* raw = nullptr);

/// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view data);

/// Two-space indented text with a trailing newline; doubles round-trip.
std::string dump(const Json& j);

}  // namespace parfell::io
