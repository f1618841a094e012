#include "nfsic/sample.hpp"

#include <string>

namespace nfsic {

JointSample::JointSample(Matrix xs_in, Matrix ys_in)
    : xs(std::move(xs_in)), ys(std::move(ys_in)) {
  if (xs.rows() != ys.rows()) {
    throw InputError("JointSample: xs has " + std::to_string(xs.rows()) +
                     " rows but ys has " + std::to_string(ys.rows()));
  }
  if (xs.rows() < 1) throw InputError("JointSample: need at least one row");
  if (xs.cols() < 1 || ys.cols() < 1) {
    throw InputError("JointSample: zero-dimensional observations");
  }
  if (!xs.allFinite() || !ys.allFinite()) {
    throw InputError("JointSample: non-finite entries");
  }
}

TestLocations::TestLocations(Matrix vs_in, Matrix ws_in)
    : vs(std::move(vs_in)), ws(std::move(ws_in)) {
  if (vs.rows() != ws.rows()) {
    throw InputError("TestLocations: vs has " + std::to_string(vs.rows()) +
                     " rows but ws has " + std::to_string(ws.rows()));
  }
  if (vs.rows() < 1) throw InputError("TestLocations: need J >= 1");
  if (vs.cols() < 1 || ws.cols() < 1) {
    throw InputError("TestLocations: zero-dimensional locations");
  }
  if (!vs.allFinite() || !ws.allFinite()) {
    throw InputError("TestLocations: non-finite entries");
  }
}

}  // namespace nfsic
