#pragma once

#include "fbasis/admissibility.hpp"
#include "fbasis/basis_builder.hpp"
#include "fbasis/filters.hpp"
#include "fbasis/lp_operators.hpp"
#include "fbasis/natset.hpp"
#include "fbasis/separation.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace fbasis {

using Json = nlohmann::ordered_json;

enum class Format { Json, Csv };
Format parse_format(std::string_view text);

/// JSON: two-space indent with a trailing newline. CSV: the "table" member
/// ({"columns": [...], "rows": [[...]]}) when present, else "key,value" lines
/// over the flattened leaves.
std::string emit_report(const Json& doc, Format format);

/// Writes bytes to `path`, or stdout when path is empty. Throws IoError.
void write_output(const std::string& bytes, const std::string& path);

/// Floats as 17-significant-digit strings; rationals as "num/den".
Json num(double v);
Json num(const Rational& r);
Json num(const Scalar& s);

Json to_json(const DensityVerdict& v);
Json to_json(const SumVerdict& v);
Json to_json(const AdmissVerdict& v);
Json to_json(const BandReport& r);
Json to_json(const SlowVerdict& v);
Json to_json(const DomVerdict& v);
Json to_json(const LimitVerdict& v);
Json to_json(const NormReport& r);
Json to_json(const GreedyBlocks& g);
Json to_json(const BasisSystem& sys);
Json to_json(const BiorthogonalityReport& r);
Json to_json(const DefectReport& r);
Json to_json(const ConvergenceReport& r);
Json to_json(const PlankSeparator& s);
Json to_json(const ClusterWitness& w);
Json to_json(const Lemma1Profile& p);
Json to_json(const std::vector<LiftedOperator>& ops);
Json to_json(const std::vector<ExtractedFunctional>& fs);

}  // namespace fbasis
