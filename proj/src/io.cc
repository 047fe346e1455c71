#include "lfd/io.h"

#include <charconv>
#include <fstream>

#include "lfd/errors.h"

namespace lfd {

Json to_json(const Vec& v) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

Json to_json(const Mat& m) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(std::move(row));
  }
  return j;
}

namespace {

double number_from_json(const Json& j) {
  if (!j.is_number()) throw Error(ErrorKind::kIo, "expected a number, got " + j.dump());
  return j.get<double>();
}

}  // namespace

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorKind::kIo, "expected a JSON array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from_json(j[i]);
  return v;
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw Error(ErrorKind::kIo, "expected a JSON matrix");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (j[r].size() != cols) throw Error(ErrorKind::kIo, "ragged JSON matrix");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number_from_json(j[r][c]);
    }
  }
  return m;
}

namespace {

Json vec_list(const std::vector<Vec>& vs) {
  Json j = Json::array();
  for (const Vec& v : vs) j.push_back(to_json(v));
  return j;
}

std::vector<Vec> vec_list_from_json(const Json& j) {
  std::vector<Vec> out;
  out.reserve(j.size());
  for (const Json& e : j) out.push_back(vec_from_json(e));
  return out;
}

Json mat_list(const std::vector<Mat>& ms) {
  Json j = Json::array();
  for (const Mat& m : ms) j.push_back(to_json(m));
  return j;
}

std::vector<Mat> mat_list_from_json(const Json& j) {
  std::vector<Mat> out;
  out.reserve(j.size());
  for (const Json& e : j) out.push_back(mat_from_json(e));
  return out;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kIo, std::string("malformed JSON document: ") + e.what());
  }
}

}  // namespace

Json to_json(const DemonstrationSet& set) {
  Json j;
  j["n"] = set.n;
  j["m"] = set.m;
  j["M"] = set.size();
  j["T"] = set.T;
  j["dt"] = set.dt;
  j["includes_trivial"] = set.includes_trivial;
  Json demos = Json::array();
  for (const Demonstration& d : set.demos) demos.push_back({{"z", vec_list(d.z)}, {"v", vec_list(d.v)}});
  j["demos"] = std::move(demos);
  return j;
}

DemonstrationSet demo_set_from_json(const Json& j) {
  return guarded([&] {
    DemonstrationSet set;
    set.n = j.at("n").get<int>();
    set.m = j.value("m", 1);
    set.T = j.at("T").get<double>();
    set.dt = j.at("dt").get<double>();
    set.includes_trivial = j.value("includes_trivial", false);
    for (const Json& d : j.at("demos")) {
      Demonstration demo;
      demo.dt = set.dt;
      demo.z = vec_list_from_json(d.at("z"));
      demo.v = vec_list_from_json(d.at("v"));
      set.demos.push_back(std::move(demo));
    }
    set.check_invariants();
    return set;
  });
}

Json to_json(const EmbeddedDemonstrationSet& set) {
  Json j;
  j["n"] = set.n;
  j["w"] = to_json(set.w);
  j["T"] = set.T;
  j["dt"] = set.dt;
  Json demos = Json::array();
  for (const EmbeddedDemonstration& d : set.demos) {
    demos.push_back({{"z", vec_list(d.z)}, {"xi", vec_list(d.xi)}, {"v", d.v}});
  }
  j["demos"] = std::move(demos);
  return j;
}

Json to_json(const Triangulation& tri) {
  Json simplices = Json::array();
  for (const Simplex& s : tri.simplices) simplices.push_back(s.vertices);
  return {{"points", vec_list(tri.points)}, {"simplices", simplices}, {"kind", to_string(tri.kind)}};
}

Triangulation triangulation_from_json(const Json& j) {
  return guarded([&] {
    const std::vector<Vec> points = vec_list_from_json(j.at("points"));
    const auto simplices = j.at("simplices").get<std::vector<std::vector<int>>>();
    Triangulation tri = make_triangulation(points, simplices);
    if (j.value("kind", "delaunay") == "delaunay") tri.kind = TriangulationKind::kDelaunay;
    return tri;
  });
}

Json to_json(const AffineBasis& basis) {
  return {{"indices", basis.indices()},
          {"dt", basis.dt()},
          {"Z", mat_list(basis.Zs())},
          {"V", mat_list(basis.Vs())},
          {"base_z", vec_list(basis.base_zs())},
          {"base_v", vec_list(basis.base_vs())}};
}

AffineBasis basis_from_json(const Json& j) {
  return guarded([&] {
    return AffineBasis(j.at("indices").get<std::vector<int>>(), j.at("dt").get<double>(),
                       mat_list_from_json(j.at("Z")), mat_list_from_json(j.at("V")),
                       vec_list_from_json(j.at("base_z")), vec_list_from_json(j.at("base_v")));
  });
}

std::string to_string(FeedbackMode mode) {
  return mode == FeedbackMode::kOpenLoop ? "open_loop" : "closed_loop";
}

FeedbackMode feedback_mode_from_string(const std::string& s) {
  if (s == "open_loop") return FeedbackMode::kOpenLoop;
  if (s == "closed_loop") return FeedbackMode::kClosedLoop;
  throw Error(ErrorKind::kInvalidArgument, "feedback mode must be open_loop or closed_loop, got '" + s + "'");
}

Json to_json(const LearnedController& ctrl) {
  return {{"kind", "single"}, {"mode", to_string(ctrl.mode())}, {"T", ctrl.T()}, {"basis", to_json(ctrl.basis())}};
}

LearnedController learned_from_json(const Json& j) {
  return guarded([&] {
    if (j.at("kind").get<std::string>() != "single") throw Error(ErrorKind::kIo, "not a single-basis controller");
    return LearnedController(basis_from_json(j.at("basis")), j.at("T").get<double>(),
                             feedback_mode_from_string(j.at("mode").get<std::string>()));
  });
}

Json to_json(const MultiController& ctrl) {
  Json bases = Json::array();
  for (const AffineBasis& b : ctrl.bases()) bases.push_back(to_json(b));
  return {{"kind", "multi"},
          {"mode", to_string(ctrl.mode())},
          {"T", ctrl.T()},
          {"triangulation", to_json(ctrl.triangulation())},
          {"bases", std::move(bases)}};
}

MultiController multi_from_json(const Json& j) {
  return guarded([&] {
    if (j.at("kind").get<std::string>() != "multi") throw Error(ErrorKind::kIo, "not a multi-simplex controller");
    std::vector<AffineBasis> bases;
    for (const Json& b : j.at("bases")) bases.push_back(basis_from_json(b));
    return MultiController(triangulation_from_json(j.at("triangulation")), std::move(bases),
                           j.at("T").get<double>(), feedback_mode_from_string(j.at("mode").get<std::string>()));
  });
}

Json to_json(const MonodromyCertificate& cert) {
  Json per = Json::array();
  for (const SimplexCertificate& c : cert.per_simplex) {
    per.push_back({{"indices", c.indices},
                   {"psi", to_json(c.psi)},
                   {"norm", c.norm},
                   {"spectral_radius", c.spectral_radius},
                   {"frobenius_bound", c.frobenius_bound}});
  }
  return {{"T", cert.T},
          {"per_simplex", std::move(per)},
          {"max_norm", cert.max_norm},
          {"verdict", cert.pass ? "pass" : "fail"},
          {"margin", cert.margin}};
}

Json to_json(const AffineIndependenceReport& r) {
  return {{"min_sigma", r.min_sigma},
          {"min_sigma_time", r.min_sigma_time},
          {"min_ratio", r.min_ratio},
          {"min_ratio_time", r.min_ratio_time},
          {"max_condition", r.max_condition},
          {"max_condition_time", r.max_condition_time},
          {"condition_at_zero", r.condition_at_zero},
          {"pass", r.pass}};
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::kIo, path.string() + ": " + e.what());
  }
}

}  // namespace lfd
