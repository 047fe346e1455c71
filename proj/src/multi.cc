#include "lfd/multi.h"

#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "lfd/certify.h"
#include "lfd/errors.h"

namespace lfd {

std::vector<Vec> initial_states(const DemonstrationSet& set) {
  std::vector<Vec> out;
  out.reserve(set.size());
  for (const Demonstration& d : set.demos) out.push_back(d.z.front());
  return out;
}

MultiController::MultiController(const DemonstrationSet& set, double T, FeedbackMode mode)
    : tri_(delaunay(initial_states(set))), T_(T), mode_(mode) {
  build_bases(set);
}

MultiController::MultiController(const DemonstrationSet& set, Triangulation tri, double T,
                                 FeedbackMode mode)
    : tri_(std::move(tri)), T_(T), mode_(mode) {
  if (tri_.points.size() != set.size()) {
    throw Error(ErrorKind::kInvalidArgument, "triangulation points do not match the demonstration set");
  }
  build_bases(set);
}

MultiController::MultiController(Triangulation tri, std::vector<AffineBasis> bases, double T,
                                 FeedbackMode mode)
    : tri_(std::move(tri)), bases_(std::move(bases)), T_(T), mode_(mode) {
  if (bases_.size() != tri_.simplices.size() || bases_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "one affine basis per simplex required");
  }
  for (std::size_t j = 0; j < bases_.size(); ++j) {
    if (bases_[j].indices() != tri_.simplices[j].vertices) {
      throw Error(ErrorKind::kInvalidArgument, "basis " + std::to_string(j) + " does not match its simplex");
    }
  }
  check_horizon();
}

void MultiController::build_bases(const DemonstrationSet& set) {
  set.check_invariants();
  bases_.reserve(tri_.simplices.size());
  for (const Simplex& s : tri_.simplices) bases_.push_back(AffineBasis::build(set, s.vertices));
  check_horizon();
}

void MultiController::check_horizon() const {
  if (!(T_ > 0.0) || T_ > bases_.front().horizon() * (1.0 + 1e-12)) {
    throw Error(ErrorKind::kInvalidArgument,
                "controller horizon T must lie in (0, demonstration length]");
  }
}

IndexSelection select_index_set(const MultiController& ctrl, const Vec& z_pT) {
  const Triangulation& tri = ctrl.triangulation();
  if (z_pT.size() != tri.dimension()) {
    throw Error(ErrorKind::kInvalidDimension, "select_index_set: state size mismatch");
  }
  IndexSelection sel;
  if (const auto s = locate(tri, z_pT)) {
    sel.simplex = *s;
  } else {
    sel.inside_hull = false;
    const HullProjection proj = project_to_hull(tri.points, z_pT);
    if (const auto sp = locate(tri, proj.point, 1e-7)) {
      sel.simplex = *sp;
    } else {
      // Rounding can leave the projection just outside every simplex; take
      // the one it is least outside of.
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < tri.simplices.size(); ++j) {
        const double worst = barycentric(tri.vertices_of(j), proj.point).minCoeff();
        if (worst > best) {
          best = worst;
          sel.simplex = j;
        }
      }
    }
  }
  sel.indices = tri.simplices[sel.simplex].vertices;
  sel.theta = barycentric(tri.vertices_of(sel.simplex), z_pT);
  return sel;
}

Vec control_multi(const MultiController& ctrl, const IndexSelection& selection, Instant t,
                  const Vec& z) {
  const AffineBasis& basis = ctrl.bases().at(selection.simplex);
  const IntervalTime it = split_interval(t, ctrl.T());
  if (ctrl.mode() == FeedbackMode::kOpenLoop) {
    return basis.input(it.tau, basis.zeta(0.0, z));
  }
  return basis.input(it.tau, basis.zeta(it.tau, z));
}

Vec control_multi(const MultiController& ctrl, Instant t, const Vec& z_pT, const Vec& z) {
  const IndexSelection sel = select_index_set(ctrl, z_pT);
  return control_multi(ctrl, sel, t, ctrl.mode() == FeedbackMode::kOpenLoop ? z_pT : z);
}

std::vector<Mat> per_simplex_monodromy(const MultiController& ctrl) {
  std::vector<Mat> out;
  out.reserve(ctrl.bases().size());
  for (const AffineBasis& b : ctrl.bases()) out.push_back(monodromy_from_data(b, ctrl.T()));
  return out;
}

StatePolicy make_policy(const MultiController& controller) {
  auto shared = std::make_shared<const MultiController>(controller);
  struct Anchor {
    long p = -1;
    double time = -1.0;
    IndexSelection selection;
    Vec coefficients;  // ζ(pT), used in open-loop mode
  };
  auto anchor = std::make_shared<Anchor>();
  return [shared, anchor](Instant t, const Vec& z) {
    const MultiController& ctrl = *shared;
    const IntervalTime it = split_interval(t, ctrl.T());
    if (it.p != anchor->p || (it.tau == 0.0 && t.t == anchor->time)) {
      anchor->p = it.p;
      anchor->time = t.t;
      anchor->selection = select_index_set(ctrl, z);
      anchor->coefficients = ctrl.bases()[anchor->selection.simplex].zeta(0.0, z);
    }
    const AffineBasis& basis = ctrl.bases()[anchor->selection.simplex];
    if (ctrl.mode() == FeedbackMode::kOpenLoop) return basis.input(it.tau, anchor->coefficients);
    return basis.input(it.tau, basis.zeta(it.tau, z));
  };
}

}  // namespace lfd
