#pragma once

#include "nfsic/common.hpp"

namespace nfsic {

// Paired observations (x_i, y_i); rows are observations.
struct JointSample {
  Matrix xs;  // n x dx
  Matrix ys;  // n x dy

  JointSample(Matrix xs_in, Matrix ys_in);

  int n() const { return static_cast<int>(xs.rows()); }
  int dx() const { return static_cast<int>(xs.cols()); }
  int dy() const { return static_cast<int>(ys.cols()); }
};

// Paired evaluation points (v_i, w_i) for the analytic embeddings.
struct TestLocations {
  Matrix vs;  // J x dx
  Matrix ws;  // J x dy

  TestLocations(Matrix vs_in, Matrix ws_in);

  int count() const { return static_cast<int>(vs.rows()); }
};

}  // namespace nfsic
