#pragma once

#include "exgs/image.hpp"

namespace exgs {

struct RestoreRequest {
  Image degraded;               // H x W x C
  Image mask;                   // H x W x 1, high = trusted (accumulated opacity)
  double fill_threshold = 0.5;  // pixels with mask below this are filled
  int iterations = 200;
};

struct RestoreResult {
  Image image;
  bool no_boundary = false;  // nothing was trusted; image is the unchanged input
  std::size_t filled_pixels = 0;
};

// Harmonic hole filling: trusted pixels are kept verbatim and act as Dirichlet boundary;
// the rest are relaxed with Jacobi sweeps of the 4-neighbour average (neighbours outside
// the image are ignored). Holes start from the mean of the trusted pixels bordering them.
RestoreResult inpaint_baseline(const RestoreRequest& request);

}  // namespace exgs
