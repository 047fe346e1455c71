#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfd/certify.h"
#include "lfd/demos.h"
#include "lfd/embed.h"
#include "lfd/geometry.h"
#include "lfd/learner.h"
#include "lfd/multi.h"
#include "lfd/numerics.h"

namespace lfd {

using Json = nlohmann::json;

Json to_json(const Vec& v);
Json to_json(const Mat& m);  // row-major nested arrays
Vec vec_from_json(const Json& j);
Mat mat_from_json(const Json& j);

/// {n, m, M, T, dt, includes_trivial, demos: [{z, v}]}
Json to_json(const DemonstrationSet& set);
DemonstrationSet demo_set_from_json(const Json& j);

/// {n, w, T, dt, demos: [{z, xi, v}]}
Json to_json(const EmbeddedDemonstrationSet& set);

/// {points, simplices, kind}
Json to_json(const Triangulation& tri);
Triangulation triangulation_from_json(const Json& j);

Json to_json(const AffineBasis& basis);
AffineBasis basis_from_json(const Json& j);

/// {kind: "single", mode, T, basis}
Json to_json(const LearnedController& ctrl);
LearnedController learned_from_json(const Json& j);

/// {kind: "multi", mode, T, triangulation, bases}
Json to_json(const MultiController& ctrl);
MultiController multi_from_json(const Json& j);

/// {T, per_simplex: [{indices, psi, norm, spectral_radius, frobenius_bound}],
///  max_norm, verdict, margin}
Json to_json(const MonodromyCertificate& cert);

Json to_json(const AffineIndependenceReport& report);

std::string to_string(FeedbackMode mode);
FeedbackMode feedback_mode_from_string(const std::string& s);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

/// Writes a CSV with the given header and rows. Throws kIo on failure.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Pretty-printed JSON with a trailing newline. Throws kIo on failure.
void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

}  // namespace lfd
